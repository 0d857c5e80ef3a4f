#!/usr/bin/env python3
"""Trend table for the overlap-collapse family.

Along the default schedule the max-relative entropy of the pair decays
to zero while the order-3.5 trace functional at z = 1 explodes, so the
two columns move in opposite directions until the offset underflows and
the pair degenerates.
"""

import argparse
import math

from qrd.divergences import DivergenceParams, d_max, q_alpha_z
from qrd.families import default_schedule, gen_a2


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--gamma", type=float, default=1.0)
    parser.add_argument("--alpha", type=float, default=3.5)
    parser.add_argument("--n-max", type=int, default=26)
    args = parser.parse_args()

    params = DivergenceParams(args.alpha, 1.0)
    print(f"{'n':>4} {'c_n':>12} {'dmax':>12} {'Q':>14}")
    for n in range(2, args.n_max + 1):
        rho, sigma = gen_a2(args.gamma, n)
        dm = d_max(rho, sigma)
        q = q_alpha_z(rho, sigma, params)
        q_text = "inf" if math.isinf(q) else f"{q:.6g}"
        print(f"{n:>4} {default_schedule(n):>12.8f} {dm:>12.6g} {q_text:>14}")


if __name__ == "__main__":
    main()
