"""Tests for bundled resource lookup."""

from __future__ import annotations

import os
import sys
from unittest.mock import patch

from gkm_cobordism._resources import (
    ensure_dir,
    get_base_path,
    get_dataset_path,
    get_resource_path,
    list_dataset_files,
)


def _normalized_path_endswith(path: str, suffix: str) -> bool:
    return os.path.normpath(path).endswith(os.path.normpath(suffix))


class TestGetResourcePath:
    def test_relative_path_returns_absolute(self):
        result = get_resource_path("datasets/ig25/tangent.json")
        assert os.path.isabs(result)
        assert _normalized_path_endswith(result, "datasets/ig25/tangent.json")

    def test_frozen_uses_meipass(self):
        with patch.object(sys, "frozen", True, create=True):
            with patch.object(sys, "_MEIPASS", "/fake/meipass", create=True):
                result = get_resource_path("datasets/ig25/tangent.json")
                assert result.startswith("/fake/meipass")
                assert _normalized_path_endswith(result, "gkm_cobordism/datasets/ig25/tangent.json")

    def test_not_frozen_uses_package_dir(self):
        with patch.object(sys, "frozen", False, create=True):
            assert os.path.exists(get_resource_path("cli.py"))


class TestGetBasePath:
    def test_returns_package_dir(self):
        result = get_base_path()
        assert os.path.isdir(result)
        assert os.path.exists(os.path.join(result, "__init__.py"))


class TestDatasets:
    def test_dataset_path(self):
        result = get_dataset_path("ig25", "tangent.json")
        assert os.path.isfile(result)

    def test_list_ig25(self):
        files = list_dataset_files("ig25")
        assert "tangent.json" in files
        assert "x4_resolution_fiber.json" in files
        assert files == sorted(files)

    def test_list_missing_dataset(self):
        assert list_dataset_files("no_such_dataset") == []


class TestEnsureDir:
    def test_creates_directory(self, tmp_path):
        target = tmp_path / "new_dir" / "nested"
        ensure_dir(str(target))
        assert target.is_dir()

    def test_existing_directory(self, tmp_path):
        ensure_dir(str(tmp_path))
        assert tmp_path.is_dir()

    def test_empty_path_is_ignored(self):
        ensure_dir("")
