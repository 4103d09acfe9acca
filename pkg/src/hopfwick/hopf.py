"""Hopf algebra structure on multisets and the convolution calculus on its dual.

Functionals are lazy, memoized rules ``Multiset -> Fraction`` with a
truncation degree.  All star-series (inverse, exp, log) are finite on each
argument because ``(lambda - eps)^{*n}`` vanishes below degree ``n``.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from .algebra import (
    EMPTY,
    LinComb,
    Multiset,
    as_lincomb,
    multisets_up_to,
    rational_str,
    sub_multisets,
    tensor,
    to_rational,
)
from .errors import MissingValueError, PreconditionError, TruncationError, ValidationError

KINDS = ("general", "unital", "infinitesimal-character", "character")


def _min_degree(*degrees):
    bounded = [d for d in degrees if d is not None]
    return min(bounded) if bounded else None


class Functional:
    """A linear form on H given by its values on basis multisets.

    Parameters
    ----------
    rule : callable
        ``Multiset -> Fraction`` (or anything :func:`to_rational` accepts).
    max_degree : int or None
        Evaluating above this degree raises :class:`TruncationError`.
    kind : str
        One of ``KINDS``.  The value at the empty multiset is checked
        eagerly; multiplicativity only by :meth:`spot_check`.
    """

    def __init__(self, rule: Callable[[Multiset], object], max_degree: int | None = None,
                 kind: str = "general", name: str | None = None):
        if kind not in KINDS:
            raise ValidationError(f"unknown functional kind {kind!r}")
        if max_degree is not None and (not isinstance(max_degree, int) or max_degree < 0):
            raise ValidationError(f"max_degree must be a non-negative int or None, got {max_degree!r}")
        self._rule = rule
        self.max_degree = max_degree
        self.kind = kind
        self.name = name
        # dict get/setdefault are atomic; a racing duplicate computes the same value
        self._memo: dict[Multiset, Fraction] = {}
        self._derived: dict[str, object] = {}
        if kind in ("unital", "character") and self(EMPTY) != 1:
            raise PreconditionError(f"{kind} functional must take value 1 on the empty multiset")
        if kind == "infinitesimal-character" and self(EMPTY) != 0:
            raise PreconditionError("infinitesimal character must vanish on the empty multiset")

    @classmethod
    def from_table(cls, values: Mapping, max_degree: int | None = None, kind: str = "general",
                   default=None, name: str | None = None) -> Functional:
        """Table-backed functional; keys may be Multisets or their text forms.

        Missing entries raise :class:`MissingValueError` unless ``default`` is
        given.
        """
        table = {}
        for k, v in values.items():
            key = k if isinstance(k, Multiset) else Multiset.parse(k)
            table[key] = to_rational(v)
        fallback = None if default is None else to_rational(default)

        def rule(A):
            try:
                return table[A]
            except KeyError:
                if fallback is None:
                    raise MissingValueError(f"no value for {A}") from None
                return fallback

        return cls(rule, max_degree, kind, name)

    def __call__(self, x) -> Fraction:
        if isinstance(x, LinComb):
            return sum((c * self(k) for k, c in x.items()), Fraction(0))
        try:
            return self._memo[x]
        except KeyError:
            pass
        if self.max_degree is not None and x.degree > self.max_degree:
            raise TruncationError(f"{self.label} truncated at degree {self.max_degree}, asked for {x}")
        value = to_rational(self._rule(x))
        return self._memo.setdefault(x, value)

    @property
    def label(self) -> str:
        return self.name or "functional"

    # vector-space structure on H*
    def __add__(self, other: Functional) -> Functional:
        return Functional(lambda A: self(A) + other(A), _min_degree(self.max_degree, other.max_degree))

    def __sub__(self, other: Functional) -> Functional:
        return Functional(lambda A: self(A) - other(A), _min_degree(self.max_degree, other.max_degree))

    def __neg__(self) -> Functional:
        return Functional(lambda A: -self(A), self.max_degree)

    def __rmul__(self, c) -> Functional:
        c = to_rational(c)
        return Functional(lambda A: c * self(A), self.max_degree)

    def table(self, alphabet: Iterable[str], max_degree: int | None = None,
              skip_zero: bool = False) -> dict[Multiset, Fraction]:
        """Values on every multiset over ``alphabet`` up to the truncation."""
        deg = max_degree if max_degree is not None else self.max_degree
        if deg is None:
            raise ValidationError("unbounded functional needs an explicit max_degree")
        out = {}
        for A in multisets_up_to(list(alphabet), deg):
            v = self(A)
            if v or not skip_zero:
                out[A] = v
        return out

    def spot_check(self, alphabet: Iterable[str], max_degree: int | None = None) -> None:
        """Verify the declared kind on all products of degree <= max_degree.

        Raises :class:`PreconditionError` with the first witness found.
        """
        deg = max_degree if max_degree is not None else self.max_degree
        if deg is None:
            raise ValidationError("unbounded functional needs an explicit max_degree")
        if self.kind in ("general", "unital"):
            return
        for C in multisets_up_to(list(alphabet), deg):
            for A in sub_multisets(C):
                B = C / A
                if self.kind == "character":
                    ok = self(C) == self(A) * self(B)
                else:
                    ok = self(C) == self(A) * counit(B) + counit(A) * self(B)
                if not ok:
                    raise PreconditionError(f"{self.label} is not of kind {self.kind}: fails on {A} * {B}")

    def to_json(self, alphabet: Iterable[str]) -> dict:
        """``{"max_degree": n, "values": {...}}`` with zero values omitted."""
        if self.max_degree is None:
            raise ValidationError("cannot serialize an unbounded functional")
        values = self.table(alphabet, skip_zero=True)
        return {
            "max_degree": self.max_degree,
            "values": {str(k): rational_str(v) for k, v in sorted(values.items(), key=lambda kv: kv[0].sort_key())},
        }

    @classmethod
    def from_json(cls, data, kind: str = "general") -> Functional:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            max_degree = data["max_degree"]
            values = data["values"]
        except (KeyError, TypeError) as exc:
            raise ValidationError("functional JSON needs 'max_degree' and 'values'") from exc
        return cls.from_table(values, max_degree, kind, default=0)

    def __repr__(self) -> str:
        return f"Functional({self.label}, max_degree={self.max_degree}, kind={self.kind})"


def is_unital(lam: Functional) -> bool:
    return lam(EMPTY) == 1


def require_unital(lam: Functional, what: str) -> None:
    if not is_unital(lam):
        raise PreconditionError(f"{what} requires a unital functional (value 1 on the empty multiset)")


def counit(A: Multiset) -> Fraction:
    return Fraction(1) if not A else Fraction(0)


EPSILON = Functional(counit, None, "character", "epsilon")


def zeta(letter: str) -> Functional:
    """Infinitesimal character picking out the single-letter multiset."""
    target = Multiset.of(letter)
    return Functional(lambda A: Fraction(int(A == target)), None, "infinitesimal-character", f"zeta_{letter}")


def zero_functional(max_degree: int | None = None) -> Functional:
    return Functional(lambda A: Fraction(0), max_degree, "general", "zero")


@lru_cache(maxsize=None)
def _coproduct_terms(A: Multiset) -> tuple[tuple[Multiset, Multiset, Fraction], ...]:
    out = []
    for B1 in sub_multisets(A):
        c = 1
        for x, n in A.items():
            c *= math.comb(n, B1.count(x))
        out.append((B1, A / B1, Fraction(c)))
    return tuple(out)


def coproduct_terms(A: Multiset) -> tuple[tuple[Multiset, Multiset, Fraction], ...]:
    """``(B1, B2, binom(A; B1, B2))`` for every ordered split of ``A``."""
    return _coproduct_terms(A)


def coproduct(x) -> LinComb:
    """Binomial deconcatenation coproduct, extended linearly to ``LinComb``."""
    if isinstance(x, LinComb):
        return x.map_basis(coproduct)
    return LinComb(((B1, B2), c) for B1, B2, c in _coproduct_terms(x))


class LinearMap:
    """Memoized linear endomorphism defined on basis keys."""

    def __init__(self, on_basis: Callable, name: str | None = None):
        self._on_basis = on_basis
        self._memo: dict = {}
        self.name = name

    def __call__(self, x) -> LinComb:
        if isinstance(x, LinComb):
            return x.map_basis(self._basis)
        return self._basis(x)

    def _basis(self, key) -> LinComb:
        try:
            return self._memo[key]
        except KeyError:
            return self._memo.setdefault(key, as_lincomb(self._on_basis(key)))

    def __matmul__(self, other: LinearMap) -> LinearMap:
        return LinearMap(lambda k: self(other(k)), f"{self.name}∘{other.name}")

    def __repr__(self) -> str:
        return f"LinearMap({self.name})"


IDENTITY = LinearMap(LinComb.basis, "id")


def tensor_map(t: LinComb, *maps) -> LinComb:
    """Apply ``f1 ⊗ ... ⊗ fn`` to a tensor; a map may be None for identity."""
    acc = LinComb.zero()
    for key, c in t.items():
        factors = [as_lincomb(k) if f is None else f(k) for f, k in zip(maps, key)]
        acc = acc + tensor(*factors).scale(c)
    return acc


antipode_H = LinearMap(lambda A: LinComb.basis(A, -1 if A.degree % 2 else 1), "S")


def convolve(f: Functional, g: Functional, name: str | None = None) -> Functional:
    """``(f * g)(A) = (f ⊗ g) Δ A``."""

    def rule(A):
        return sum((c * f(B1) * g(B2) for B1, B2, c in _coproduct_terms(A)), Fraction(0))

    return Functional(rule, _min_degree(f.max_degree, g.max_degree), "general", name)


def convolve_op(f: Functional, g: Callable) -> LinearMap:
    """``(f * g)(A) = sum binom(A; B1, B2) f(B1) g(B2)`` for an endomorphism ``g``."""

    def on_basis(A):
        acc = LinComb.zero()
        for B1, B2, c in _coproduct_terms(A):
            v = f(B1)
            if v:
                acc = acc + as_lincomb(g(B2)).scale(c * v)
        return acc

    return LinearMap(on_basis, f"{f.label}*op")


def convolve_maps(f: Callable, g: Callable) -> LinearMap:
    """Convolution of two endomorphisms: ``m ∘ (f ⊗ g) ∘ Δ``."""

    def on_basis(A):
        acc = LinComb.zero()
        for B1, B2, c in _coproduct_terms(A):
            acc = acc + (as_lincomb(f(B1)) * as_lincomb(g(B2))).scale(c)
        return acc

    return LinearMap(on_basis)


class _Powers:
    """Lazily built convolution powers ``base^{*n}``, ``n >= 0``."""

    def __init__(self, base: Functional):
        self.base = base
        self._powers = [EPSILON]

    def __getitem__(self, n: int) -> Functional:
        while len(self._powers) <= n:
            self._powers.append(convolve(self._powers[-1], self.base))
        return self._powers[n]


def convolution_power(f: Functional, n: int) -> Functional:
    if n < 0:
        raise ValidationError("convolution power must be non-negative")
    return _Powers(f)[n]


def neumann_inverse(lam: Functional) -> Functional:
    """Star inverse of a unital functional via ``sum_n (eps - lam)^{*n}``."""
    require_unital(lam, "neumann_inverse")
    cached = lam._derived.get("inverse")
    if cached is not None:
        return cached
    powers = _Powers(EPSILON - lam)

    def rule(A):
        return sum((powers[n](A) for n in range(A.degree + 1)), Fraction(0))

    inv = Functional(rule, lam.max_degree, "unital", f"{lam.label}^-1")
    lam._derived["inverse"] = inv
    inv._derived["inverse"] = lam
    return inv


def exp_star(kappa: Functional) -> Functional:
    """``eps + sum_{n>=1} kappa^{*n} / n!``; requires ``kappa(∅) = 0``."""
    if kappa(EMPTY) != 0:
        raise PreconditionError("exp_star requires a functional vanishing on the empty multiset")
    powers = _Powers(kappa)

    def rule(A):
        return sum((powers[n](A) / math.factorial(n) for n in range(A.degree + 1)), Fraction(0))

    return Functional(rule, kappa.max_degree, "unital", f"exp*({kappa.label})")


def log_star(mu: Functional) -> Functional:
    """``sum_{n>=1} (-1)^{n-1}/n (mu - eps)^{*n}``; requires a unital ``mu``."""
    require_unital(mu, "log_star")
    powers = _Powers(mu - EPSILON)

    def rule(A):
        return sum(
            (Fraction((-1) ** (n - 1), n) * powers[n](A) for n in range(1, A.degree + 1)),
            Fraction(0),
        )

    return Functional(rule, mu.max_degree, "general", f"log*({mu.label})")


def phi(lam: Functional, require_unit: bool = True) -> LinearMap:
    """``phi_lam(A) = (lam ⊗ id) Δ A``.

    Deformations need ``lam`` unital; ``require_unit=False`` admits any
    linear form (the comodule-morphism property holds for all of them).
    """
    if require_unit:
        require_unital(lam, "phi")
        cached = lam._derived.get("phi")
        if cached is not None:
            return cached
    m = convolve_op(lam, LinComb.basis)
    m.name = f"phi_{lam.label}"
    if require_unit:
        lam._derived["phi"] = m
    return m


def phi_inverse(lam: Functional) -> LinearMap:
    return phi(neumann_inverse(lam))


def deformed_product(lam: Functional, x, y) -> LinComb:
    """``x ·_lam y = phi^-1(phi(x) · phi(y))``."""
    require_unital(lam, "deformed_product")
    f = phi(lam)
    return phi_inverse(lam)(f(as_lincomb(x)) * f(as_lincomb(y)))


def deformed_coproduct(lam: Functional, x) -> LinComb:
    """``Δ_lam = (phi^-1 ⊗ phi^-1) Δ phi``."""
    require_unital(lam, "deformed_coproduct")
    inv = phi_inverse(lam)
    return tensor_map(coproduct(phi(lam)(as_lincomb(x))), inv, inv)


def iterated_coproduct(A: Multiset, n: int) -> LinComb:
    """``Δ^{n-1} A`` as an ``n``-fold tensor (``n >= 1``)."""
    if n < 1:
        raise ValidationError("iterated coproduct needs n >= 1")
    acc = {(A,): Fraction(1)}
    for _ in range(n - 1):
        nxt: dict = {}
        for key, c in acc.items():
            for B1, B2, b in _coproduct_terms(key[0]):
                k = (B1, B2) + key[1:]
                nxt[k] = nxt.get(k, 0) + c * b
        acc = nxt
    return LinComb(acc)
