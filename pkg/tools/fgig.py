#!/usr/bin/env python3
"""A command line tool running the free GIG / Marchenko-Pastur checks and
writing their reports, tables and plots."""
import sys

from freegig.cli import main

if __name__ == '__main__':
    sys.exit(main())
