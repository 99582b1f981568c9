#!/usr/bin/env python3
"""Print structural invariants of elementary walls for a range of sizes.

Usage: wall_census.py [r_min] [r_max]
"""

import sys

from nonzero_cycles.walls import elementary_wall, validate_wall


def main() -> int:
    lo = int(sys.argv[1]) if len(sys.argv) > 1 else 2
    hi = int(sys.argv[2]) if len(sys.argv) > 2 else 10
    print(f"{'r':>3}{'vertices':>10}{'edges':>8}{'bricks':>8}{'nails':>7}")
    for r in range(lo, hi + 1):
        w = elementary_wall(r)
        validate_wall(w)
        print(
            f"{r:>3}{len(w.graph.vertices):>10}"
            f"{len(w.graph.edge_ids()):>8}{len(w.bricks):>8}{len(w.nails):>7}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
