"""Moments, cumulants and Wick polynomials.

Production routes go through the star calculus of :mod:`hopfwick.hopf`;
the set-partition sums, the Bell recursion and the explicit alternating
expansion are kept alongside as independent routes to the same numbers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

from .algebra import (
    EMPTY,
    LinComb,
    Multiset,
    as_lincomb,
    check_letter,
    multisets_up_to,
    ordered_factorizations,
    rational_str,
    to_rational,
)
from .errors import MissingValueError, TruncationError, ValidationError
from .hopf import (
    Functional,
    LinearMap,
    convolve_op,
    coproduct_terms,
    deformed_product,
    exp_star,
    log_star,
    neumann_inverse,
    require_unital,
    zeta,
)


@dataclass(frozen=True)
class MomentSpec:
    """Joint moments of a finite family, truncated at ``max_degree``."""

    alphabet: tuple[str, ...]
    max_degree: int
    values: Mapping[Multiset, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(check_letter(x) for x in self.alphabet))
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValidationError("alphabet has repeated letters")
        if not isinstance(self.max_degree, int) or self.max_degree < 1:
            raise ValidationError(f"max_degree must be a positive int, got {self.max_degree!r}")
        values = {}
        for k, v in self.values.items():
            A = k if isinstance(k, Multiset) else Multiset.parse(k)
            if A.degree > self.max_degree:
                raise ValidationError(f"moment {A} exceeds max_degree {self.max_degree}")
            if not set(A.letters) <= set(self.alphabet):
                raise ValidationError(f"moment {A} uses letters outside the alphabet")
            values[A] = to_rational(v)
        if values.setdefault(EMPTY, Fraction(1)) != 1:
            raise ValidationError("the moment of the empty multiset must be 1")
        object.__setattr__(self, "values", values)

    def missing(self) -> list[Multiset]:
        return [A for A in multisets_up_to(self.alphabet, self.max_degree) if A not in self.values]

    def to_json(self) -> dict:
        return {
            "alphabet": list(self.alphabet),
            "max_degree": self.max_degree,
            "moments": {
                str(A): rational_str(v) for A, v in sorted(self.values.items(), key=lambda kv: kv[0].sort_key())
            },
        }

    @classmethod
    def from_json(cls, data) -> MomentSpec:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(tuple(data["alphabet"]), data["max_degree"], data["moments"])
        except (KeyError, TypeError) as exc:
            raise ValidationError("moment spec JSON needs 'alphabet', 'max_degree' and 'moments'") from exc


def moment_functional(spec: MomentSpec) -> Functional:
    """Unital functional backed by a complete moment table."""
    missing = spec.missing()
    if missing:
        raise MissingValueError(f"moment spec has no entry for {missing[0]} (and {len(missing) - 1} more)")
    return Functional.from_table(spec.values, spec.max_degree, "unital", name="mu")


def cumulants(mu: Functional) -> Functional:
    kappa = log_star(mu)
    kappa.name = "kappa"
    return kappa


def moments_from_cumulants(kappa: Functional) -> Functional:
    mu = exp_star(kappa)
    mu.name = "mu"
    return mu


# --- set partitions ---------------------------------------------------------


@dataclass(frozen=True)
class SetPartition:
    blocks: tuple[tuple, ...]

    def __len__(self) -> int:
        return len(self.blocks)


def set_partitions(elements: Sequence) -> Iterator[SetPartition]:
    """Set partitions via restricted-growth strings, in lexicographic order."""
    elems = list(elements)
    n = len(elems)
    if n == 0:
        yield SetPartition(())
        return
    rgs = [0] * n
    while True:
        k = max(rgs) + 1
        blocks = [[] for _ in range(k)]
        for e, b in zip(elems, rgs):
            blocks[b].append(e)
        yield SetPartition(tuple(tuple(b) for b in blocks))
        # next restricted-growth string: rgs[i] <= 1 + max(rgs[:i])
        i = n - 1
        while i > 0 and rgs[i] == max(rgs[:i]) + 1:
            i -= 1
        if i == 0:
            return
        rgs[i] += 1
        for j in range(i + 1, n):
            rgs[j] = 0


def _lookup(table) -> Callable[[Multiset], Fraction]:
    if callable(table):
        return table
    normalized = {(k if isinstance(k, Multiset) else Multiset.parse(k)): to_rational(v) for k, v in table.items()}

    def get(A):
        try:
            return normalized[A]
        except KeyError:
            raise MissingValueError(f"no value for {A}") from None

    return get


def _require_set(B: Multiset) -> None:
    if not B.is_set():
        raise ValidationError(f"{B} is not a set (some count exceeds one)")


def ls_partition_moments(kappa, B: Multiset) -> Fraction:
    """Moment of a set ``B`` as the sum over partitions of products of cumulants."""
    _require_set(B)
    get = _lookup(kappa)
    if not B:
        return Fraction(1)
    total = Fraction(0)
    for pi in set_partitions(B.letters):
        term = Fraction(1)
        for block in pi.blocks:
            term *= get(Multiset.of(*block))
        total += term
    return total


def ls_partition_cumulants(mu, B: Multiset) -> Fraction:
    """Cumulant of a set ``B`` with Möbius weights ``(-1)^{k-1} (k-1)!``."""
    _require_set(B)
    get = _lookup(mu)
    if not B:
        return Fraction(0)
    total = Fraction(0)
    for pi in set_partitions(B.letters):
        k = len(pi)
        term = Fraction((-1) ** (k - 1) * math.factorial(k - 1))
        for block in pi.blocks:
            term *= get(Multiset.of(*block))
        total += term
    return total


def bell_recursion_moments(kappa: Sequence, n: int) -> list[Fraction]:
    """``mu_0..mu_n`` of one variable from cumulants ``kappa[m]`` (``kappa[0]`` unused).

    ``mu_n = sum_{m=1}^n C(n-1, m-1) kappa_m mu_{n-m}``.
    """
    k = [to_rational(x) for x in kappa]
    if len(k) <= n:
        raise ValidationError(f"need cumulants up to order {n}, got {len(k) - 1}")
    mu = [Fraction(1)]
    for j in range(1, n + 1):
        mu.append(sum((math.comb(j - 1, m - 1) * k[m] * mu[j - m] for m in range(1, j + 1)), Fraction(0)))
    return mu


def bell_recursion_moment(kappa: Sequence, n: int) -> Fraction:
    return bell_recursion_moments(kappa, n)[n]


def recursive_moment(kappa, A: Multiset) -> Fraction:
    """Multivariate analogue of the Bell recursion.

    Peel one letter ``a`` off ``A = A'·a`` and use
    ``mu(A'·a) = sum binom(A'; B1, B2) kappa(B1·a) mu(B2)``.
    """
    get = _lookup(kappa)
    memo: dict[Multiset, Fraction] = {EMPTY: Fraction(1)}

    def mu(C):
        if C in memo:
            return memo[C]
        a = Multiset.of(C.letters[0])
        rest = C / a
        val = sum((c * get(B1 * a) * mu(B2) for B1, B2, c in coproduct_terms(rest)), Fraction(0))
        memo[C] = val
        return val

    return mu(A)


# --- Wick polynomials -------------------------------------------------------


def _check_degree(mu: Functional, x: LinComb) -> None:
    if mu.max_degree is not None and x.degree > mu.max_degree:
        raise TruncationError(f"degree {x.degree} exceeds moment truncation {mu.max_degree}")


def wick_map(mu: Functional) -> LinearMap:
    """``W = mu^-1 * id`` as a memoized linear map."""
    require_unital(mu, "wick")
    cached = mu._derived.get("wick")
    if cached is None:
        cached = convolve_op(neumann_inverse(mu), LinComb.basis)
        cached.name = "W"
        mu._derived["wick"] = cached
    return cached


def wick(mu: Functional, x) -> LinComb:
    x = as_lincomb(x)
    W = wick_map(mu)
    _check_degree(mu, x)
    return W(x)


def wick_expansion(mu: Functional, A: Multiset) -> LinComb:
    """Alternating closed form of ``:A:`` (no star inverse involved).

    ``:A: = A + sum_{n>=1} (-1)^n sum binom(A; B1..Bn, B) mu(B1)...mu(Bn) B``
    with every ``Bi`` nonempty.
    """
    require_unital(mu, "wick_expansion")
    _check_degree(mu, as_lincomb(A))
    acc: dict[Multiset, Fraction] = {A: Fraction(1)}
    for C, B, c in coproduct_terms(A):
        if not C:
            continue
        s = Fraction(0)
        for n in range(1, C.degree + 1):
            inner = Fraction(0)
            for parts, b in ordered_factorizations(C, n):
                prod = b
                for P in parts:
                    prod *= mu(P)
                    if not prod:
                        break
                inner += prod
            s += (-1) ** n * inner
        if s:
            acc[B] = acc.get(B, 0) + c * s
    return LinComb(acc)


def wick_inverse(mu: Functional, x) -> LinComb:
    """``W^-1 = mu * id``."""
    require_unital(mu, "wick_inverse")
    x = as_lincomb(x)
    _check_degree(mu, x)
    inv = mu._derived.get("wick_inverse")
    if inv is None:
        inv = convolve_op(mu, LinComb.basis)
        mu._derived["wick_inverse"] = inv
    return inv(x)


def wick_product(mu: Functional, x, y, *more) -> LinComb:
    """Deformed product ``x ·_mu y (·_mu ...)``; Wick maps ``·`` onto it."""
    out = deformed_product(mu, x, y)
    for z in more:
        out = deformed_product(mu, out, z)
    return out


_derivations: dict[str, LinearMap] = {}


def partial_derivation(letter: str, x) -> LinComb:
    """``∂_a = zeta_a * id``: formal partial derivative in ``letter``."""
    d = _derivations.get(letter)
    if d is None:
        d = _derivations.setdefault(letter, convolve_op(zeta(check_letter(letter)), LinComb.basis))
    return d(as_lincomb(x))


@dataclass
class CharacterizationReport:
    passed: bool
    checked: int
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.passed


def verify_characterization(mu: Functional, max_degree: int, alphabet: Sequence[str],
                            wick_fn: Callable | None = None) -> CharacterizationReport:
    """Check ``mu(:A:) = 0`` and ``∂_a :A: = :∂_a A:`` for ``0 < |A| <= max_degree``.

    ``wick_fn`` (``Multiset -> LinComb``) overrides the Wick map, which is
    how a corrupted map is fed in as a negative control.
    """
    require_unital(mu, "verify_characterization")
    if wick_fn is None:
        W = wick_map(mu)
    else:
        W = LinearMap(wick_fn, "W'")
    checked = 0
    if W(EMPTY) != LinComb.basis(EMPTY):
        return CharacterizationReport(False, checked, f"W(1) = {W(EMPTY)} != 1")
    for A in multisets_up_to(alphabet, max_degree, min_degree=1):
        WA = W(A)
        val = mu(WA)
        checked += 1
        if val != 0:
            return CharacterizationReport(False, checked, f"mu(:{A}:) = {val} != 0")
        for a in alphabet:
            lhs = partial_derivation(a, WA)
            rhs = W(partial_derivation(a, A))
            checked += 1
            if lhs != rhs:
                return CharacterizationReport(
                    False, checked, f"∂_{a} :{A}: = {lhs} but :∂_{a} {A}: = {rhs}"
                )
    return CharacterizationReport(True, checked)

