"""Moments of a law whose cumulants are all r: Touchard polynomials (Bell numbers at r = 1)."""

import argparse
from fractions import Fraction

from hopfwick import Functional, Multiset, moments_from_cumulants
from hopfwick.cumulants import bell_recursion_moments


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rate", default="1")
    ap.add_argument("--max-degree", type=int, default=10)
    args = ap.parse_args()
    r = Fraction(args.rate)
    kappa = Functional(lambda A: r if A else Fraction(0), args.max_degree)
    mu = moments_from_cumulants(kappa)
    oracle = bell_recursion_moments([0] + [r] * args.max_degree, args.max_degree)
    for n in range(1, args.max_degree + 1):
        v = mu(Multiset({"a": n}))
        print(f"{n:2d}  {v!s:>12}  {'ok' if v == oracle[n] else 'MISMATCH'}")


if __name__ == "__main__":
    main()
