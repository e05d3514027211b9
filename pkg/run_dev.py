#!/usr/bin/env python3
"""
Development runner for rmatrix-lab.
Run this script to verify the suites without installation.

Usage:
    python run_dev.py [--suite NAME] [--max-n N] [--json] [--dump OBJ] [--debug]
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

if __name__ == "__main__":
    from main import main
    sys.exit(main())
