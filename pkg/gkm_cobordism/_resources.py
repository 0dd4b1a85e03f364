"""
Bundled resource lookup.

Resolves dataset files both from a source checkout and from a frozen
(PyInstaller) bundle.
"""

from __future__ import annotations

import os
import sys


def get_base_path() -> str:
    """Directory that holds the ``gkm_cobordism`` package data."""
    if getattr(sys, "frozen", False) and hasattr(sys, "_MEIPASS"):
        return os.path.join(sys._MEIPASS, "gkm_cobordism")
    return os.path.dirname(os.path.abspath(__file__))


def get_resource_path(relative_path: str) -> str:
    """Absolute path of a file shipped inside the package.

    Args:
        relative_path: path relative to the package directory,
            e.g. ``'datasets/ig25/tangent.json'``.

    Returns:
        The absolute path (existence is not checked).
    """
    return os.path.join(get_base_path(), relative_path)


def get_dataset_path(dataset: str, filename: str) -> str:
    return get_resource_path(os.path.join("datasets", dataset, filename))


def list_dataset_files(dataset: str) -> list[str]:
    directory = get_resource_path(os.path.join("datasets", dataset))
    if not os.path.isdir(directory):
        return []
    return sorted(name for name in os.listdir(directory) if name.endswith(".json"))


def ensure_dir(directory_path: str) -> None:
    """Create *directory_path* (and parents) if missing."""
    if directory_path:
        os.makedirs(directory_path, exist_ok=True)
