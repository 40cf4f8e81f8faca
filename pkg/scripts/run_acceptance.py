#!/usr/bin/env python3
"""Run the acceptance suite and show one pass/fail line per criterion."""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    sys.exit(
        subprocess.call(
            [sys.executable, "-m", "pytest", "tests/test_acceptance.py", "-v", "-s", *sys.argv[1:]],
            cwd=ROOT,
        )
    )
