#!/usr/bin/env python
"""Entry point: ``python app.py <command> [options]`` (see ``python app.py --help``)."""

import sys

from core.cli import main

if __name__ == "__main__":
    sys.exit(main())
