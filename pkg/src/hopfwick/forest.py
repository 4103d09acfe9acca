"""The polynomial Hopf algebra on forests of multisets.

A :class:`Forest` is a commutative word ``A1 • A2 • ... • An`` of nonempty
multisets; the coproduct is the multiplicative extension of the binomial
coproduct on single multisets.  Every unital functional on H lifts to a
character here, whose composite with the antipode inverts it.  H itself is
a left comodule through ``δ = (ι ⊗ id) Δ``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .algebra import LinComb, Multiset, multisets_up_to, ordered_factorizations
from .errors import ParseError
from .hopf import Functional, coproduct_terms, require_unital


class Forest:
    """Commutative word of nonempty multisets, canonically sorted."""

    __slots__ = ("parts", "degree", "_hash")

    def __init__(self, parts: Iterable[Multiset] = ()):
        kept = [p for p in parts if p]
        kept.sort(key=Multiset.sort_key)
        self.parts = tuple(kept)
        self.degree = sum(p.degree for p in self.parts)
        self._hash = hash(self.parts)

    @classmethod
    def parse(cls, text: str) -> Forest:
        stripped = text.strip()
        if stripped == "1":
            return UNIT
        if not stripped:
            raise ParseError("empty forest text", 0)
        parts = []
        offset = 0
        for chunk in text.split("*"):
            if not chunk.strip():
                raise ParseError("empty forest component", offset)
            parts.append(Multiset.parse(chunk))
            offset += len(chunk) + 1
        return cls(parts)

    def __mul__(self, other: Forest) -> Forest:
        if not isinstance(other, Forest):
            return NotImplemented
        return forest_mul(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, Forest) and self.parts == other.parts

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.parts)

    def __bool__(self) -> bool:
        return bool(self.parts)

    def __str__(self) -> str:
        return " * ".join(str(p) for p in self.parts) if self.parts else "1"

    def __repr__(self) -> str:
        return f"Forest({str(self)!r})"


UNIT = Forest()


def iota(A: Multiset) -> Forest:
    """Canonical injection of a multiset as a one-part forest (``∅`` -> unit)."""
    return Forest((A,))


def forest_mul(u: Forest, v: Forest) -> Forest:
    return Forest(u.parts + v.parts)


def forest_counit(u: Forest) -> Fraction:
    return Fraction(int(not u))


@lru_cache(maxsize=None)
def _generator_coproduct(A: Multiset) -> LinComb:
    return LinComb(((iota(B1), iota(B2)), c) for B1, B2, c in coproduct_terms(A))


def forest_coproduct(u) -> LinComb:
    """Coproduct on forests: multiplicative, ``Δ̂ ι = (ι ⊗ ι) Δ`` on generators."""
    if isinstance(u, LinComb):
        return u.map_basis(forest_coproduct)
    out = LinComb.basis((UNIT, UNIT))
    for A in u.parts:
        out = out * _generator_coproduct(A)
    return out


@lru_cache(maxsize=None)
def _generator_antipode(A: Multiset) -> LinComb:
    acc: dict[Forest, Fraction] = {}
    for n in range(1, A.degree + 1):
        sign = -1 if n % 2 else 1
        for parts, b in ordered_factorizations(A, n):
            f = Forest(parts)
            acc[f] = acc.get(f, 0) + sign * b
    return LinComb(acc)


def forest_antipode(u) -> LinComb:
    """Antipode by the closed alternating formula on generators, multiplicatively.

    ``Ŝ A = sum_{n>=1} (-1)^n sum_{Bi nonempty} binom(A; B1..Bn) B1 • ... • Bn``.
    """
    if isinstance(u, LinComb):
        return u.map_basis(forest_antipode)
    out = LinComb.basis(UNIT)
    for A in u.parts:
        out = out * _generator_antipode(A)
    return out


@lru_cache(maxsize=None)
def forest_antipode_recursive(A: Multiset) -> LinComb:
    """Antipode of ``ιA`` by ``Ŝ A = -A - sum_{B1,B2 nonempty} binom [Ŝ B1] • B2``."""
    if not A:
        return LinComb.basis(UNIT)
    out = -LinComb.basis(iota(A))
    for B1, B2, c in coproduct_terms(A):
        if B1 and B2:
            out = out - (forest_antipode_recursive(B1) * LinComb.basis(iota(B2))).scale(c)
    return out


def forest_antipode_recursive_forest(u: Forest) -> LinComb:
    out = LinComb.basis(UNIT)
    for A in u.parts:
        out = out * forest_antipode_recursive(A)
    return out


class ForestCharacter:
    """The multiplicative extension of a unital functional on H to forests."""

    kind = "character"

    def __init__(self, restriction: Functional):
        self.restriction = restriction

    def __call__(self, u) -> Fraction:
        if isinstance(u, LinComb):
            return sum((c * self(k) for k, c in u.items()), Fraction(0))
        value = Fraction(1)
        for A in u.parts:
            value *= self.restriction(A)
            if not value:
                break
        return value

    def on_multiset(self, A: Multiset) -> Fraction:
        return self(iota(A))

    def __repr__(self) -> str:
        return f"ForestCharacter({self.restriction.label})"


def lift_character(lam: Functional) -> ForestCharacter:
    require_unital(lam, "lift_character")
    return ForestCharacter(lam)


def restrict(lam_hat: ForestCharacter, name: str | None = None) -> Functional:
    """``R``: the restriction of a forest character to H, read through ``ι``."""
    return Functional(lam_hat.on_multiset, lam_hat.restriction.max_degree, "unital", name)


def forest_convolve(alpha: ForestCharacter, beta: ForestCharacter) -> ForestCharacter:
    """``α̂ ⋆̂ β̂``, evaluated through the forest coproduct on generators."""

    def rule(A):
        return sum(
            (c * alpha(left) * beta(right) for (left, right), c in _generator_coproduct(A).items()),
            Fraction(0),
        )

    md = [m for m in (alpha.restriction.max_degree, beta.restriction.max_degree) if m is not None]
    return ForestCharacter(Functional(rule, min(md) if md else None, "unital"))


def inverse_via_antipode(lam: Functional) -> Functional:
    """``λ^-1 = (λ̂ ∘ Ŝ)|_H``."""
    lam_hat = lift_character(lam)
    return Functional(lambda A: lam_hat(_generator_antipode(A)) if A else Fraction(1),
                      lam.max_degree, "unital", f"{lam.label}_hat∘S")


def comodule_coaction(A) -> LinComb:
    """``δ(A) = (ι ⊗ id) Δ A`` with keys ``(Forest, Multiset)``."""
    if isinstance(A, LinComb):
        return A.map_basis(comodule_coaction)
    return LinComb(((iota(B1), B2), c) for B1, B2, c in coproduct_terms(A))


def wick_via_antipode(mu: Functional, A: Multiset) -> LinComb:
    """``:A: = (μ̂ ∘ Ŝ ⊗ id) δ A``."""
    mu_hat = lift_character(mu)
    acc: dict[Multiset, Fraction] = {}
    for (left, B2), c in comodule_coaction(A).items():
        s = mu_hat(forest_antipode(left))
        if s:
            acc[B2] = acc.get(B2, 0) + c * s
    return LinComb(acc)


def psi_hat(lam_hat: ForestCharacter, x) -> LinComb:
    """``ψ(A) = (λ̂ ⊗ id) δ A``."""
    if isinstance(x, LinComb):
        return x.map_basis(lambda A: psi_hat(lam_hat, A))
    acc: dict[Multiset, Fraction] = {}
    for (left, B2), c in comodule_coaction(x).items():
        v = lam_hat(left)
        if v:
            acc[B2] = acc.get(B2, 0) + c * v
    return LinComb(acc)


def forests_up_to(alphabet, max_degree: int) -> list[Forest]:
    """Every forest over ``alphabet`` with total degree ``<= max_degree``."""
    gens = multisets_up_to(alphabet, max_degree, min_degree=1)
    out: list[Forest] = []

    def extend(start, budget, current):
        out.append(Forest(current))
        for i in range(start, len(gens)):
            g = gens[i]
            if g.degree <= budget:
                extend(i, budget - g.degree, current + [g])

    extend(0, max_degree, [])
    out.sort(key=lambda f: (f.degree, str(f)))
    return out

