"""Print Wick polynomials of a^n under a standard Gaussian, next to the He_n recurrence."""

import argparse

from hopfwick import DistributionSpec, Multiset, moment_functional, moments_from_distribution, render_latex, wick
from hopfwick.algebra import EMPTY, LinComb


def hermite(n):
    prev, cur = LinComb.basis(EMPTY), LinComb.basis(Multiset.of("a"))
    if n == 0:
        return prev
    for k in range(1, n):
        prev, cur = cur, cur * LinComb.basis(Multiset.of("a")) - prev.scale(k)
    return cur


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-degree", type=int, default=10)
    ap.add_argument("--latex", action="store_true")
    args = ap.parse_args()
    mu = moment_functional(moments_from_distribution(DistributionSpec.parse("a=gaussian(0,1)"), args.max_degree))
    for n in range(args.max_degree + 1):
        w = wick(mu, Multiset({"a": n}))
        body = render_latex(w) if args.latex else str(w)
        mark = "ok" if w == hermite(n) else "MISMATCH"
        print(f"{n:2d}  {mark:8}  {body}")


if __name__ == "__main__":
    main()
