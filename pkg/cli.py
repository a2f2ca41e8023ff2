#!/usr/bin/env python3
"""
Command-line launcher for scenario runs, comparisons, validation and plots
"""
import sys

from app.cli import main

if __name__ == "__main__":
    sys.exit(main())
