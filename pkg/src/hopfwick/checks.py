"""Exhaustive checks of the bialgebra laws on bounded bases.

Each check returns a :class:`LawCheck`; a failing one carries the first
basis element that broke the law.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .algebra import EMPTY, LinComb, multisets_up_to
from .forest import UNIT, forest_antipode, forest_coproduct, forest_counit, forests_up_to
from .hopf import IDENTITY, antipode_H, convolve_maps, coproduct, counit, tensor_map
from .trees import (
    EMPTY_FOREST,
    corolla_embed,
    extraction_contraction,
    forest_extraction_contraction,
    tree_counit,
    tree_product,
    trees_up_to,
)


@dataclass
class LawCheck:
    name: str
    passed: bool
    checked: int
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.passed

    def line(self) -> str:
        status = "ok" if self.passed else "FAIL"
        tail = f" ({self.witness})" if self.witness else ""
        return f"{status:4} {self.name}: {self.checked} cases{tail}"


def _run(name: str, basis: Iterable, law: Callable[[object], bool]) -> LawCheck:
    n = 0
    for x in basis:
        n += 1
        if not law(x):
            return LawCheck(name, False, n, f"fails on {x}")
    return LawCheck(name, True, n)


def _swap(t: LinComb) -> LinComb:
    return LinComb(((k[1], k[0]), c) for k, c in t.items())


def _left_counit(t: LinComb, eps) -> LinComb:
    return LinComb((k[1], c * eps(k[0])) for k, c in t.items())


def _right_counit(t: LinComb, eps) -> LinComb:
    return LinComb((k[0], c * eps(k[1])) for k, c in t.items())


def _antipode_sides(t: LinComb, S) -> tuple[LinComb, LinComb]:
    left = LinComb.zero()
    right = LinComb.zero()
    for (k1, k2), c in t.items():
        left = left + (S(k1) * LinComb.basis(k2)).scale(c)
        right = right + (LinComb.basis(k1) * S(k2)).scale(c)
    return left, right


def check_polynomial_laws(alphabet: Sequence[str], max_degree: int) -> list[LawCheck]:
    """Coassociativity, cocommutativity, counit and antipode on H."""
    basis = multisets_up_to(alphabet, max_degree)

    def coassoc(A):
        d = coproduct(A)
        return tensor_map(d, coproduct, None) == tensor_map(d, None, coproduct)

    def cocomm(A):
        d = coproduct(A)
        return d == _swap(d)

    def counit_law(A):
        d = coproduct(A)
        return _left_counit(d, counit) == LinComb.basis(A) == _right_counit(d, counit)

    left_conv = convolve_maps(antipode_H, IDENTITY)
    right_conv = convolve_maps(IDENTITY, antipode_H)

    def antipode(A):
        target = LinComb.basis(EMPTY, counit(A))
        return left_conv(A) == target == right_conv(A)

    return [
        _run("H coassociativity", basis, coassoc),
        _run("H cocommutativity", basis, cocomm),
        _run("H counit", basis, counit_law),
        _run("H antipode", basis, antipode),
    ]


def check_forest_laws(alphabet: Sequence[str], max_degree: int) -> list[LawCheck]:
    """The same four laws on the forest algebra, over every forest of bounded degree."""
    basis = forests_up_to(alphabet, max_degree)

    def coassoc(u):
        d = forest_coproduct(u)
        return tensor_map(d, forest_coproduct, None) == tensor_map(d, None, forest_coproduct)

    def cocomm(u):
        d = forest_coproduct(u)
        return d == _swap(d)

    def counit_law(u):
        d = forest_coproduct(u)
        return _left_counit(d, forest_counit) == LinComb.basis(u) == _right_counit(d, forest_counit)

    def antipode(u):
        left, right = _antipode_sides(forest_coproduct(u), forest_antipode)
        target = LinComb.basis(UNIT, forest_counit(u))
        return left == target == right

    return [
        _run("forest coassociativity", basis, coassoc),
        _run("forest cocommutativity", basis, cocomm),
        _run("forest counit", basis, counit_law),
        _run("forest antipode", basis, antipode),
    ]


def check_tree_laws(max_edges: int, d: int) -> list[LawCheck]:
    """Coassociativity and counit laws of extraction-contraction on trees."""
    basis = trees_up_to(max_edges, d)

    def coassoc(t):
        dt = extraction_contraction(t)
        return tensor_map(dt, forest_extraction_contraction, None) == tensor_map(dt, None, extraction_contraction)

    def counit_law(t):
        dt = extraction_contraction(t)
        left = _left_counit(dt, tree_counit)
        right = _right_counit(dt, tree_counit)
        return left == LinComb.basis(t) and right == LinComb.basis(t.as_forest() if t.edges else EMPTY_FOREST)

    return [
        _run("tree coassociativity", basis, coassoc),
        _run("tree counit", basis, counit_law),
    ]


def check_corolla_embedding(letters: Sequence[str], max_degree: int) -> list[LawCheck]:
    """The corolla map sends the binomial coproduct to extraction-contraction and · to ⊙."""
    basis = multisets_up_to(letters, max_degree)
    labels = {x: i + 1 for i, x in enumerate(letters)}

    def embed(A):
        return corolla_embed(A, labels)

    def coproduct_law(A):
        image = LinComb(((embed(B1).as_forest(), embed(B2)), c) for (B1, B2), c in coproduct(A).items())
        return image == extraction_contraction(embed(A))

    pairs = [(A, B) for A in basis for B in basis if A.degree + B.degree <= max_degree]

    def product_law(pair):
        A, B = pair
        return embed(A * B) == tree_product(embed(A), embed(B))

    return [
        _run("corolla coproduct", basis, coproduct_law),
        _run("corolla product", pairs, product_law),
    ]


def all_passed(checks: Iterable[LawCheck]) -> bool:
    return all(bool(c) for c in checks)

