#!/usr/bin/env python3
"""Entry point for the fpcensus command line."""

import sys
from pathlib import Path

# Add the repository root to the Python path
sys.path.insert(0, str(Path(__file__).parent))

from fpcensus.main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
