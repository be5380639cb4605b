#!/usr/bin/env python3
"""Entry point script for the accelerating beam toolkit."""

import sys

from src.cli.beams_cli import main

if __name__ == "__main__":
    sys.exit(main())
