"""Centre a random tree character and show the centred values next to the inverse."""

import argparse
import random
from fractions import Fraction

from hopfwick.trees import centering_character, random_character, tree_char_convolve, tree_char_inverse, trees_up_to


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-edges", type=int, default=3)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    trees = trees_up_to(args.max_edges, args.d)
    mu = random_character(trees, random.Random(args.seed), max_edges=args.max_edges)
    lam = centering_character(mu)
    inv = tree_char_inverse(mu)
    conv = tree_char_convolve(lam, mu)
    print(f"{'tree':28} {'mu':>10} {'lambda':>12} {'(lam*mu)':>9}")
    for t in trees:
        if not t.edges:
            continue
        assert lam(t) == inv(t)
        print(f"{t.encoding:28} {str(mu(t)):>10} {str(lam(t)):>12} {str(conv(t)):>9}")
    assert all(conv(t) == Fraction(int(t.edges == 0)) for t in trees)


if __name__ == "__main__":
    main()
