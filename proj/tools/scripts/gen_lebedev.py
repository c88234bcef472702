#!/usr/bin/env python3
"""Write Lebedev sphere rules in the `x y z w` text format read by load_lebedev().

Points and weights come from scipy.integrate.lebedev_rule (scipy >= 1.15).
Weights are in steradians, so they sum to 4*pi.

    python3 tools/scripts/gen_lebedev.py data/lebedev 23 27 31 41 53
"""
import sys
from pathlib import Path

import numpy as np
from scipy.integrate import lebedev_rule


def main(argv):
    if len(argv) < 3:
        print(__doc__)
        return 1
    out = Path(argv[1])
    out.mkdir(parents=True, exist_ok=True)
    for order in map(int, argv[2:]):
        x, w = lebedev_rule(order)
        n = x.shape[1]
        path = out / f"lebedev_{n:04d}.txt"
        with path.open("w") as fh:
            fh.write(f"# Lebedev rule, {n} points, exact to degree {order}\n")
            fh.write(f"# sum(w) = {np.sum(w):.17g}\n")
            for i in range(n):
                fh.write(f"{x[0, i]:.17e} {x[1, i]:.17e} {x[2, i]:.17e} {w[i]:.17e}\n")
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
