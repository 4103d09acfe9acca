"""Acceptance criteria, exact arithmetic throughout."""

import itertools
from fractions import Fraction

from hopfwick.algebra import EMPTY, LinComb, Multiset, multisets_up_to
from hopfwick.checks import check_corolla_embedding, check_forest_laws, check_polynomial_laws, check_tree_laws
from hopfwick.cli import run
from hopfwick.cumulants import (
    bell_recursion_moments,
    cumulants,
    ls_partition_cumulants,
    ls_partition_moments,
    moment_functional,
    moments_from_cumulants,
    verify_characterization,
    wick,
    wick_expansion,
    wick_map,
    wick_product,
)
from hopfwick.distributions import DistributionSpec, moments_from_distribution
from hopfwick.forest import wick_via_antipode
from hopfwick.hopf import Functional
from hopfwick.trees import (
    TreeForest,
    centering_character,
    parse_tree,
    random_character,
    tree_char_convolve,
    tree_char_inverse,
    trees_up_to,
)

from oracles import hermite_he, random_moment_table, random_subset_table, seeded


def gaussian(max_degree):
    return moment_functional(moments_from_distribution(DistributionSpec.parse("a=gaussian(0,1)"), max_degree))


def random_unital(rng, alphabet, degree):
    return Functional.from_table(random_moment_table(rng, alphabet, degree), degree, "unital")


def test_criterion_01_hermite(criterion):
    with criterion(1, "Hermite recovery n <= 10", 1.0):
        mu = gaussian(10)
        for n in range(11):
            assert wick(mu, Multiset({"a": n})) == hermite_he(n), n


def test_criterion_02_gaussian_cumulants(criterion):
    with criterion(2, "Gaussian cumulants", 1.0):
        kappa = cumulants(gaussian(10))
        assert kappa(Multiset({"a": 2})) == 1
        for n in [1] + list(range(3, 11)):
            assert kappa(Multiset({"a": n})) == 0, n


def test_criterion_03_bell_numbers(criterion):
    with criterion(3, "Bell numbers from unit cumulants", 1.0):
        ones = Functional(lambda A: Fraction(int(bool(A))), 8)
        mu = moments_from_cumulants(ones)
        got = [mu(Multiset({"a": n})) for n in range(1, 9)]
        assert got == [1, 2, 5, 15, 52, 203, 877, 4140]
        assert got == bell_recursion_moments([0] + [1] * 8, 8)[1:]


def test_criterion_04_leonov_shiryaev(criterion):
    letters = ("a", "b", "c", "d", "e", "f")
    subsets = [Multiset.of(*c) for r in range(len(letters) + 1) for c in itertools.combinations(letters, r)]
    with criterion(4, "set-partition sums equal log/exp on a 6-letter alphabet", 30.0):
        rng = seeded(404)
        for _ in range(20):
            mu_table = random_subset_table(rng, letters)
            kappa = cumulants(Functional.from_table(mu_table, 6, "unital"))
            kappa_table = random_subset_table(rng, letters)
            kappa_table[EMPTY] = Fraction(0)
            mu = moments_from_cumulants(Functional.from_table(kappa_table, 6))
            for B in subsets:
                if B:
                    assert kappa(B) == ls_partition_cumulants(mu_table, B), B
                    assert mu(B) == ls_partition_moments(kappa_table, B), B


def test_criterion_05_hopf_axioms(criterion):
    with criterion(5, "Hopf axioms on H, forests and trees", 30.0):
        checks = (check_polynomial_laws(("a", "b", "c"), 6) + check_forest_laws(("a", "b"), 6)
                  + check_tree_laws(4, 2))
        failed = [c.line() for c in checks if not c]
        assert not failed, failed


def test_criterion_06_wick_routes(criterion):
    with criterion(6, "three Wick routes agree", 20.0):
        rng = seeded(606)
        basis = multisets_up_to(("a", "b"), 6)
        for _ in range(5):
            mu = random_unital(rng, ("a", "b"), 6)
            W = wick_map(mu)
            for A in basis:
                neumann = W(A)
                assert neumann == wick_expansion(mu, A), A
                assert neumann == wick_via_antipode(mu, A), A


def _random_multiset(rng, degree):
    return Multiset.of(*(rng.choice("ab") for _ in range(degree)))


def test_criterion_07_deformation(criterion):
    with criterion(7, "Wick map sends products to deformed products", 10.0):
        rng = seeded(707)
        mu = random_unital(rng, ("a", "b"), 12)
        W = wick_map(mu)
        for _ in range(50):
            A, B, C = (_random_multiset(rng, rng.randint(0, 4)) for _ in range(3))
            assert W(A * B) == wick_product(mu, W(A), W(B)), (A, B)
            assert W(A * B * C) == wick_product(mu, W(A), W(B), W(C)), (A, B, C)


def test_criterion_08_characterization(criterion):
    with criterion(8, "characterization and negative control", 10.0):
        rng = seeded(808)
        for _ in range(3):
            mu = random_unital(rng, ("a", "b"), 6)
            report = verify_characterization(mu, 6, ("a", "b"))
            assert report, report.witness
        W = wick_map(mu)
        target = Multiset.parse("a b^2")

        def corrupted(A):
            return W(A) + LinComb.basis(EMPTY) if A == target else W(A)

        report = verify_characterization(mu, 6, ("a", "b"), corrupted)
        assert not report and "a b^2" in report.witness


EXPECTED_TERMS = {
    # τ ⊗ ∅, ∅ ⊗ τ, then the six proper edge subsets
    ("(1:(2:()),3:())", "()"),
    ("1", "(1:(2:()),3:())"),
    ("(1:())", "(2:(),3:())"),
    ("(2:())", "(1:(),3:())"),
    ("(3:())", "(1:(2:()))"),
    ("(1:(),3:())", "(2:())"),
    ("(1:(2:()))", "(3:())"),
    ("(2:()) * (3:())", "(1:())"),
}


def test_criterion_09_tree_coprod_example(criterion):
    with criterion(9, "tree coprod reproduces the 8-term example", 1.0):
        code, out, err = run(["tree", "coprod", "--tree", "(1:(2:()),3:())", "--format", "text"])
        assert code == 0, err
        terms = []
        for line in out.splitlines():
            left, right = line.split(" ⊗ ")
            assert not left[0].isdigit() or left == "1", f"unexpected coefficient in {line!r}"
            terms.append((str(TreeForest.parse(left)), str(parse_tree(right))))
        assert len(terms) == 8
        assert set(terms) == EXPECTED_TERMS


def test_criterion_10_centering(criterion):
    with criterion(10, "centering character and uniqueness", 5.0):
        trees = trees_up_to(3, 2)
        mu = random_character(trees, seeded(1010), max_edges=3)
        lam = centering_character(mu)
        conv = tree_char_convolve(lam, mu)
        other = tree_char_inverse(mu)
        for t in trees:
            assert conv(t) == int(t.edges == 0), t
            assert lam(t) == other(t), t


def test_criterion_11_corolla(criterion):
    with criterion(11, "corolla embedding intertwines coproducts and products", 5.0):
        checks = check_corolla_embedding(("x1", "x2"), 5)
        failed = [c.line() for c in checks if not c]
        assert not failed, failed
