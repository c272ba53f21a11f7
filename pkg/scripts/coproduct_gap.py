#!/usr/bin/env python3
"""Sweep the variable-basis coproduct cardinality gap.

For each n, compares the size of the candidate coproduct carrier built
over the doubled basis (n^4) against the size forced by the universal
property (n^2), timing each computation.
"""

import argparse
import time

from afsys.functors import variable_basis_coproduct_gap


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()

    print(f"{'n':>3} {'candidate':>10} {'required':>9} {'equal':>6} {'time':>10}")
    for n in range(1, args.max_n + 1):
        t0 = time.perf_counter()
        result = variable_basis_coproduct_gap(n)
        dt = time.perf_counter() - t0
        print(
            f"{n:>3} {result.lhs:>10} {result.rhs:>9} "
            f"{str(result.equal):>6} {dt * 1e6:>8.1f}us"
        )


if __name__ == "__main__":
    main()
