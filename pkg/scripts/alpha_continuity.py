#!/usr/bin/env python3
"""Sweep alpha through 1 on several z-paths and report the gap to the
Umegaki relative entropy.  The gap should vanish linearly in |alpha - 1|
on every path with z bounded away from the (1, 0) corner.
"""

import argparse

import numpy as np

from qrd.divergences import DivergenceParams, d_alpha_z, umegaki
from qrd.verify import rand_density


def z_on_path(path: str, alpha: float, fixed: float) -> float:
    if path == "alpha":
        return alpha
    if path == "alpha-half":
        return alpha / 2.0
    return fixed


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dim", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--z", type=float, default=1.0, help="z for the fixed path")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    rho = rand_density(rng, args.dim, floor=0.02)
    sigma = rand_density(rng, args.dim, floor=0.02)
    um = umegaki(rho, sigma)
    print(f"umegaki = {um:.12f}")
    print(f"{'alpha':>10} " + " ".join(f"{p:>14}" for p in ("fixed", "alpha", "alpha-half")))
    for exponent in range(1, 7):
        for side in (-1.0, 1.0):
            alpha = 1.0 + side * 10.0**-exponent
            gaps = []
            for path in ("fixed", "alpha", "alpha-half"):
                z = z_on_path(path, alpha, args.z)
                dv = d_alpha_z(rho, sigma, DivergenceParams(alpha, z)).d_value
                gaps.append(abs(dv - um))
            print(f"{alpha:>10.6f} " + " ".join(f"{g:>14.3e}" for g in gaps))


if __name__ == "__main__":
    main()
