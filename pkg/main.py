#!/usr/bin/env python3
"""Entry point for the p-intersection toolkit."""

import sys

from src.cli.app import main

if __name__ == "__main__":
    sys.exit(main())
