#!/usr/bin/env python3
"""Run every invariant suite and print the machine-readable report."""

import sys

from realops.cli import run

if __name__ == "__main__":
    sys.exit(run(["--json", "verify", "all"] + sys.argv[1:]))
