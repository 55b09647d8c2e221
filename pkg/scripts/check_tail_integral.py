"""Classify the tail-regularity integral for a few reference families.

Prints J_alpha and its convergence status across a grid of exponents for
the standard normal and the uniform quantile densities. The normal flips
from convergent to divergent as alpha crosses 2; the uniform stays finite
for every alpha.
"""

import argparse
import sys

from swinfer.distributions import (gaussian_quantile_density, j_alpha,
                                   uniform_quantile_density)

FAMILIES = {
    "normal": gaussian_quantile_density,
    "uniform": uniform_quantile_density,
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alphas", type=float, nargs="+",
                    default=[1.0, 1.5, 1.9, 2.0, 2.5, 3.0])
    args = ap.parse_args()

    print(f"{'family':8s} {'alpha':>5s}  {'status':10s} value")
    for name, density in FAMILIES.items():
        for alpha in args.alphas:
            out = j_alpha(density, alpha)
            print(f"{name:8s} {alpha:5.2f}  {out.status:10s} {out.value:.6g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
