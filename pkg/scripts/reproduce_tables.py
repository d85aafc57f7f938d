#!/usr/bin/env python3
"""Rerun the full reference reproduction and print the gated report.

Equivalent to `ptgfit reproduce`; exit code 3 flags the known relief-times
gate failures (see the README).
"""

import sys

from ptgfit.cli import main

if __name__ == "__main__":
    sys.exit(main(["reproduce", *sys.argv[1:]]))
