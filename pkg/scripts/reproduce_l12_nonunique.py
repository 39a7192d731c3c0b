#!/usr/bin/env python3
"""Recompute the two-dimensional l1 norm split.

The level-2 pair (diag(1,-1), flip) has minimal-structure norm sqrt(2),
while the maximal structure pushes it to 2: the same Banach space carries
two genuinely different matrix norm structures.  Exits 0 when the gap
reproduces.
"""

import sys

from realops.cli import run

if __name__ == "__main__":
    sys.exit(run(["--json", "reproduce", "l12-nonunique"] + sys.argv[1:]))
