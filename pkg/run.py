#!/usr/bin/env python3
"""Entry point for running the rulegraph CLI from a checkout."""

import sys
from src.main import main

if __name__ == "__main__":
    sys.exit(main())
