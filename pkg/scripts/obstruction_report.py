#!/usr/bin/env python3
"""Exact packing/covering numbers for the two-linkage wall obstructions.

For a chosen height h, builds the obstruction instance for every ordered
pair of distinct linkage types and prints nu, nu_half, and tau, computed
by the outer-face chord solver (exact for these wall-based instances).

Usage: obstruction_report.py [h]
"""

import itertools
import sys

from nonzero_cycles import groups
from nonzero_cycles.obstructions import (
    ObstructionSpec,
    build_obstruction_instance,
    escher_instance,
    verify_instance,
)


def main() -> int:
    h = int(sys.argv[1]) if len(sys.argv) > 1 else 2
    z3 = groups.cyclic(3)
    one = groups.element(z3, 1)
    print(f"height h = {h}")
    print(f"{'P-type':<10}{'Q-type':<10}{'nu':>4}{'nu_half':>9}{'tau':>5}")
    for tp, tq in itertools.permutations(("series", "nested", "crossing"), 2):
        spec = ObstructionSpec(
            h=h, p_type=tp, q_type=tq, gamma1=z3, gamma2=z3,
            p_values=(one,) * h, q_values=(one,) * h,
        )
        out = verify_instance(build_obstruction_instance(spec), h)
        print(f"{tp:<10}{tq:<10}{out['nu']:>4}{out['nu_half']:>9}{out['tau']:>5}")
    out = verify_instance(escher_instance(h), h)
    print(f"{'escher':<20}{out['nu']:>4}{out['nu_half']:>9}{out['tau']:>5}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
