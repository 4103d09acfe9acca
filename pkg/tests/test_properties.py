"""Property tests for the algebraic invariants."""

import itertools
import math
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from hopfwick.algebra import (
    EMPTY,
    LinComb,
    Multiset,
    decompositions,
    multiset_binomial,
    multisets_up_to,
    parse_helem,
    render_text,
)
from hopfwick.cumulants import partial_derivation, wick, wick_expansion, wick_inverse, wick_map
from hopfwick.forest import Forest, forest_antipode, forest_convolve, lift_character, restrict
from hopfwick.hopf import (
    EPSILON,
    Functional,
    convolution_power,
    convolve,
    coproduct,
    counit,
    deformed_product,
    exp_star,
    iterated_coproduct,
    log_star,
    neumann_inverse,
    phi,
    phi_inverse,
    tensor_map,
)
from hopfwick.trees import (
    NODE,
    TreeCharacter,
    extraction_contraction,
    forest_extraction_contraction,
    parse_tree,
    psi_lambda,
    random_character,
    tree_char_convolve,
    tree_char_inverse,
    tree_counit,
    trees_up_to,
)

from oracles import random_moment_table, seeded
from strategies import multisets, polynomials, rationals, seeds, tree_strategy

AB = ("a", "b")


def unital(seed, alphabet=AB, degree=6):
    return Functional.from_table(random_moment_table(seeded(seed), alphabet, degree), degree, "unital")


def infinitesimal(seed, alphabet=AB, degree=6):
    table = random_moment_table(seeded(seed), alphabet, degree)
    table[EMPTY] = Fraction(0)
    return Functional.from_table(table, degree)


# --- multisets and rationals --------------------------------------------------


@given(st.integers(-10**30, 10**30), st.integers(1, 10**30), st.integers(-10**30, 10**30), st.integers(1, 10**30))
def test_rational_arithmetic_exact(p, q, r, s):
    assert (Fraction(p, q) + Fraction(r, s)) - Fraction(r, s) == Fraction(p, q)


@given(multisets(), multisets(), multisets())
def test_product_associative_commutative(A, B, C):
    assert (A * B) * C == A * (B * C)
    assert A * B == B * A
    assert A * EMPTY == A


@given(multisets(max_degree=5), multisets(max_degree=5))
def test_binomial_symmetric(B1, B2):
    A = B1 * B2
    assert multiset_binomial(A, (B1, B2)) == multiset_binomial(A, (B2, B1))


@given(st.integers(0, 12))
def test_single_letter_binomials_sum_to_two_power(n):
    A = Multiset({"a": n})
    total = sum(multiset_binomial(A, (Multiset({"a": k}), Multiset({"a": n - k}))) for k in range(n + 1))
    assert total == 2**n


def test_decomposition_counts_stars_and_bars():
    for A in multisets_up_to("ab", 4):
        for n in range(1, 5):
            expected = math.prod(math.comb(k + n - 1, n - 1) for _, k in A.items())
            assert len(decompositions(A, n)) == expected


@given(polynomials())
def test_polynomial_text_roundtrip(x):
    assert parse_helem(render_text(x)) == x


# --- convolution algebra --------------------------------------------------------


@settings(max_examples=15)
@given(seeds)
def test_group_law(seed):
    lam = unital(seed)
    inv = neumann_inverse(lam)
    for A in multisets_up_to(AB, 6):
        assert convolve(lam, inv)(A) == counit(A) == convolve(inv, lam)(A)


@settings(max_examples=10)
@given(seeds)
def test_exp_log_inverse_pair(seed):
    kappa, mu = infinitesimal(seed), unital(seed + 1)
    back_k, back_mu = log_star(exp_star(kappa)), exp_star(log_star(mu))
    for A in multisets_up_to(AB, 6):
        assert back_k(A) == kappa(A)
        assert back_mu(A) == mu(A)


@settings(max_examples=10)
@given(seeds, st.integers(1, 4))
def test_convolution_power_is_iterated_coproduct(seed, n):
    kappa = infinitesimal(seed, degree=5)
    power = convolution_power(kappa, n)
    for A in multisets_up_to(AB, 5):
        direct = sum((c * math.prod(kappa(B) for B in key) for key, c in iterated_coproduct(A, n).items()),
                     Fraction(0))
        assert power(A) == direct


@settings(max_examples=25)
@given(seeds, multisets(AB, 2, 4), multisets(AB, 2, 4))
def test_phi_inverse_is_algebra_isomorphism(seed, A, B):
    lam = unital(seed, degree=8)
    inv = phi_inverse(lam)
    assert inv(A * B) == deformed_product(lam, inv(A), inv(B))


@settings(max_examples=15)
@given(seeds, st.sampled_from(["unital", "general"]))
def test_phi_is_comodule_morphism(seed, kind):
    lam = unital(seed, degree=5) if kind == "unital" else infinitesimal(seed, degree=5)
    f = phi(lam, require_unit=False)
    for A in multisets_up_to(AB, 5):
        assert coproduct(f(A)) == tensor_map(coproduct(A), None, f)


def test_sets_form_a_subcoalgebra():
    for r in range(6):
        for letters in itertools.combinations("abcdef", r):
            A = Multiset.of(*letters)
            for (B1, B2), c in coproduct(A).items():
                assert B1.is_set() and B2.is_set() and c == 1


# --- Wick polynomials ----------------------------------------------------------


@settings(max_examples=10)
@given(seeds)
def test_wick_routes_and_characterization(seed):
    mu = unital(seed)
    W = wick_map(mu)
    for A in multisets_up_to(AB, 6):
        WA = W(A)
        assert WA == wick_expansion(mu, A)
        assert mu(WA) == counit(A)
        assert wick_inverse(mu, WA) == LinComb.basis(A) == wick(mu, wick_inverse(mu, A))
        for x in AB:
            assert partial_derivation(x, WA) == W(partial_derivation(x, A))


@settings(max_examples=10)
@given(seeds)
def test_wick_preserves_sets(seed):
    abc = ("a", "b", "c", "d")
    mu = unital(seed, abc, 4)
    for r in range(5):
        for letters in itertools.combinations(abc, r):
            assert all(k.is_set() for k in wick(mu, Multiset.of(*letters)).keys())


# --- forests -------------------------------------------------------------------


@settings(max_examples=10)
@given(seeds)
def test_restriction_is_group_isomorphism(seed):
    al, be = unital(seed, degree=5), unital(seed + 7, degree=5)
    lhs = restrict(forest_convolve(lift_character(al), lift_character(be)))
    rhs = convolve(al, be)
    assert all(lhs(A) == rhs(A) for A in multisets_up_to(AB, 5))


@given(st.lists(multisets(AB, 2, 3), max_size=3))
def test_forest_antipode_preserves_grading(parts):
    u = Forest(parts)
    assert all(v.degree == u.degree for v in forest_antipode(u).keys())


# --- trees ---------------------------------------------------------------------


@given(tree_strategy(max_leaves=3), tree_strategy(max_leaves=3), tree_strategy(max_leaves=3))
def test_tree_product_monoid(s, t, u):
    assert (s * t) * u == s * (t * u)
    assert s * t == t * s
    assert s * NODE == s


@given(tree_strategy(max_leaves=5))
def test_tree_text_roundtrip(t):
    assert parse_tree(str(t)) == t


def test_tree_inverse_up_to_four_edges():
    trees = trees_up_to(4, 2)
    alpha = random_character(trees, seeded(17))
    beta = tree_char_inverse(alpha)
    for t in trees:
        e = int(t.edges == 0)
        assert tree_char_convolve(alpha, beta)(t) == e == tree_char_convolve(beta, alpha)(t)


@given(tree_strategy(max_leaves=3))
def test_tree_coaction_comodule_laws(t):
    d = extraction_contraction(t)
    assert tensor_map(d, forest_extraction_contraction, None) == tensor_map(d, None, extraction_contraction)
    assert LinComb((k[1], c * tree_counit(k[0])) for k, c in d.items()) == LinComb.basis(t)


@settings(max_examples=15)
@given(seeds, tree_strategy(max_leaves=3))
def test_psi_inverse(seed, t):
    lam = random_character(trees_up_to(3, 2), seeded(seed))
    assert psi_lambda(tree_char_inverse(lam), psi_lambda(lam, t)) == LinComb.basis(t)
    assert psi_lambda(lam, psi_lambda(tree_char_inverse(lam), t)) == LinComb.basis(t)


@settings(max_examples=10)
@given(seeds)
def test_tree_character_json_roundtrip(seed):
    trees = trees_up_to(2, 2)
    mu = random_character(trees, seeded(seed), max_edges=2)
    back, _ = TreeCharacter.from_json(mu.to_json(2))
    assert all(back(t) == mu(t) for t in trees)


@settings(max_examples=10)
@given(seeds)
def test_functional_json_roundtrip(seed):
    mu = unital(seed, degree=4)
    back = Functional.from_json(mu.to_json(AB), "unital")
    assert all(back(A) == mu(A) for A in multisets_up_to(AB, 4))


@given(rationals)
def test_epsilon_fixed_by_deformation(c):
    x = LinComb({Multiset.of("a"): c, EMPTY: 1})
    assert deformed_product(EPSILON, x, x) == x * x
