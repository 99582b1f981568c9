#!/usr/bin/env python3
"""Randomized packing/covering sweep over doubly-labeled graphs.

Samples random instances, computes the exact packing number (nu), the
half-integral packing number (nu_half), and the covering number (tau),
and reports the largest observed tau/nu_half ratio.

Usage: duality_sweep.py [--seed N] [--count N] [--groups DESC] [--out FILE]
"""

import sys

from nonzero_cycles.cli import main

if __name__ == "__main__":
    sys.exit(main(["experiment", *sys.argv[1:]]))
