"""``python -m gkm_cobordism``."""

import sys

from .cli import main

sys.exit(main())
