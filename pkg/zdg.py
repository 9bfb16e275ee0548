#!/usr/bin/env python3
"""
ZDGVerify command-line entry point.

Usage:
    python zdg.py ring zn:12 --emit zdg --format dot
    python zdg.py invariants prod:f2,f3
    python zdg.py verify zn --max-n 60
    python zdg.py gap --k 6 --exact
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from app.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
