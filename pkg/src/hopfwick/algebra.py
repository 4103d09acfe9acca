"""Exact rationals, multisets over an alphabet and sparse linear combinations.

A :class:`Multiset` is a commutative monomial ``a^2 b``; the vector space
spanned by multisets is the polynomial algebra whose sparse elements are
:class:`LinComb` instances.  ``LinComb`` is generic over its basis: any
hashable key with a ``degree`` attribute and a ``__mul__`` works, and tuple
keys are treated as pure tensors (multiplied factor-wise).
"""

from __future__ import annotations

import itertools
import math
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import EnumerationGuardError, ParseError, ValidationError

Rational = Fraction

#: Largest multiset degree accepted by :func:`decompositions`.
MAX_ENUMERATION_DEGREE = 24

_LETTER_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")
_TERM_RE = re.compile(r"([a-zA-Z][a-zA-Z0-9_]*)(?:\^([0-9]+))?\Z")


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` / exact decimal strings to Fraction.

    Floats are rejected: they would smuggle rounding into exact arithmetic.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationError(f"not a rational: {value!r}")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational: {value!r}") from exc
    raise ValidationError(f"not a rational: {value!r} ({type(value).__name__})")


def rational_str(q: Fraction) -> str:
    return str(Fraction(q))


def check_letter(letter: str) -> str:
    if not isinstance(letter, str) or not _LETTER_RE.match(letter):
        raise ValidationError(f"invalid letter: {letter!r}")
    return letter


class Multiset:
    """A finitely supported map letter -> positive count.

    Immutable and hashable.  ``A * B`` is the monoid product (pointwise sum of
    counts); the empty multiset is the unit and renders as ``"1"``.
    """

    __slots__ = ("_items", "_degree", "_hash")

    def __init__(self, counts: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        if isinstance(counts, Mapping):
            counts = counts.items()
        merged: dict[str, int] = {}
        for letter, n in counts:
            check_letter(letter)
            if not isinstance(n, int) or n < 0:
                raise ValidationError(f"count for {letter!r} must be a non-negative int, got {n!r}")
            if n:
                merged[letter] = merged.get(letter, 0) + n
        self._items = tuple(sorted(merged.items()))
        self._degree = sum(merged.values())
        self._hash = hash(self._items)

    @classmethod
    def _from_sorted(cls, items: tuple[tuple[str, int], ...]) -> Multiset:
        obj = object.__new__(cls)
        obj._items = items
        obj._degree = sum(n for _, n in items)
        obj._hash = hash(items)
        return obj

    @classmethod
    def of(cls, *letters: str) -> Multiset:
        """``Multiset.of("a", "a", "b")`` is ``a^2 b``."""
        return cls((x, 1) for x in letters)

    @classmethod
    def parse(cls, text: str) -> Multiset:
        """Parse the canonical text form (``"1"`` or ``"a^2 b"``).

        Letters may appear in any order on input; rendering is always sorted.
        """
        stripped = text.strip()
        if stripped == "1":
            return EMPTY
        if not stripped:
            raise ParseError("empty multiset text", 0)
        counts: dict[str, int] = {}
        pos = text.find(stripped)
        for token in stripped.split():
            at = text.find(token, pos)
            pos = at + len(token)
            m = _TERM_RE.match(token)
            if not m:
                raise ParseError(f"bad multiset term {token!r}", at)
            exp = int(m.group(2)) if m.group(2) is not None else 1
            if exp == 0:
                raise ParseError(f"zero exponent in {token!r}", at)
            counts[m.group(1)] = counts.get(m.group(1), 0) + exp
        return cls(counts)

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def letters(self) -> tuple[str, ...]:
        return tuple(x for x, _ in self._items)

    def items(self) -> tuple[tuple[str, int], ...]:
        return self._items

    def count(self, letter: str) -> int:
        for x, n in self._items:
            if x == letter:
                return n
        return 0

    def is_set(self) -> bool:
        """True when every count is at most one (a {0,1}-multiset)."""
        return all(n == 1 for _, n in self._items)

    def divides(self, other: Multiset) -> bool:
        return all(other.count(x) >= n for x, n in self._items)

    def __mul__(self, other: Multiset) -> Multiset:
        if not isinstance(other, Multiset):
            return NotImplemented
        return multiset_product(self, other)

    def __truediv__(self, other: Multiset) -> Multiset:
        if not other.divides(self):
            raise ValidationError(f"{other} does not divide {self}")
        counts = dict(self._items)
        for x, n in other._items:
            counts[x] -= n
        return Multiset._from_sorted(tuple((x, n) for x, n in sorted(counts.items()) if n))

    def __bool__(self) -> bool:
        return bool(self._items)

    def __len__(self) -> int:
        return self._degree

    def __eq__(self, other) -> bool:
        return isinstance(other, Multiset) and self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self) -> tuple:
        return (self._degree, str(self))

    def __str__(self) -> str:
        if not self._items:
            return "1"
        return " ".join(x if n == 1 else f"{x}^{n}" for x, n in self._items)

    def __repr__(self) -> str:
        return f"Multiset({str(self)!r})"

    def latex(self) -> str:
        if not self._items:
            return "1"
        parts = [x if n == 1 else f"{x}^{{{n}}}" for x, n in self._items]
        sep = "" if all(len(x) == 1 for x, _ in self._items) else " "
        return sep.join(parts)


EMPTY = Multiset()


def multiset_product(A: Multiset, B: Multiset) -> Multiset:
    if not A:
        return B
    if not B:
        return A
    counts = dict(A._items)
    for x, n in B._items:
        counts[x] = counts.get(x, 0) + n
    return Multiset._from_sorted(tuple(sorted(counts.items())))


def multiset_binomial(A: Multiset, parts: Sequence[Multiset]) -> Fraction:
    """Multinomial coefficient of ``A`` over the ordered ``parts``.

    Zero unless the parts multiply to ``A``; otherwise the product over
    letters of ``A(a)! / (B1(a)! ... Bn(a)!)``.
    """
    if not parts:
        raise ValidationError("multiset_binomial needs at least one part")
    total = EMPTY
    for part in parts:
        total = total * part
    if total != A:
        return Fraction(0)
    coeff = 1
    for x, n in A.items():
        coeff *= math.factorial(n)
        for part in parts:
            coeff //= math.factorial(part.count(x))
    return Fraction(coeff)


def sub_multisets(A: Multiset) -> Iterator[Multiset]:
    """Every sub-multiset ``B <= A`` (including the empty one and ``A``)."""
    letters = A.letters
    ranges = [range(n + 1) for _, n in A.items()]
    for ks in itertools.product(*ranges):
        yield Multiset._from_sorted(tuple((x, k) for x, k in zip(letters, ks) if k))


def _check_guard(A: Multiset) -> None:
    if A.degree > MAX_ENUMERATION_DEGREE:
        raise EnumerationGuardError(
            f"degree {A.degree} exceeds enumeration guard {MAX_ENUMERATION_DEGREE}"
        )


def _ordered_splits(A: Multiset, n: int, allow_empty: bool) -> Iterator[tuple[Multiset, ...]]:
    if n == 1:
        if allow_empty or A:
            yield (A,)
        return
    for first in sub_multisets(A):
        if not allow_empty and not first:
            continue
        rest = A / first
        if not allow_empty and rest.degree < n - 1:
            continue
        for tail in _ordered_splits(rest, n - 1, allow_empty):
            yield (first,) + tail


def decompositions(A: Multiset, n: int, allow_empty: bool = True) -> tuple[tuple[Multiset, ...], ...]:
    """All ordered ``n``-tuples ``(B1, ..., Bn)`` with ``B1 ... Bn = A``.

    Sorted by the canonical text of the parts, so ``("1", "a^2")`` precedes
    ``("a", "a")``.  Raises :class:`EnumerationGuardError` above degree 24.
    """
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"number of parts must be a positive int, got {n!r}")
    _check_guard(A)
    out = list(_ordered_splits(A, n, allow_empty))
    out.sort(key=lambda parts: tuple(str(p) for p in parts))
    return tuple(out)


@lru_cache(maxsize=None)
def ordered_factorizations(A: Multiset, n: int) -> tuple[tuple[tuple[Multiset, ...], Fraction], ...]:
    """Nonempty ordered ``n``-part decompositions of ``A`` with their binomials."""
    _check_guard(A)
    return tuple((parts, multiset_binomial(A, parts)) for parts in _ordered_splits(A, n, False))


def multisets_up_to(alphabet: Sequence[str], max_degree: int, min_degree: int = 0) -> list[Multiset]:
    """All multisets over ``alphabet`` with ``min_degree <= degree <= max_degree``.

    Ordered by degree, then canonical text.
    """
    letters = sorted(set(check_letter(x) for x in alphabet))
    out = []
    for deg in range(min_degree, max_degree + 1):
        for combo in itertools.combinations_with_replacement(letters, deg):
            out.append(Multiset.of(*combo))
    out.sort(key=Multiset.sort_key)
    return out


def _key_mul(a, b):
    if isinstance(a, tuple):
        if len(a) != len(b):
            raise ValidationError("tensor factors of different arity")
        return tuple(_key_mul(x, y) for x, y in zip(a, b))
    return a * b


def key_degree(key) -> int:
    if isinstance(key, tuple):
        return sum(key_degree(k) for k in key)
    return key.degree


def _key_sort(key):
    if isinstance(key, tuple):
        return tuple(_key_sort(k) for k in key)
    return (key.degree, str(key))


class LinComb:
    """Sparse exact linear combination of basis keys.

    Coefficients are Fractions; zeros are never stored.  Instances are treated
    as immutable.  Multiplication is the bilinear extension of the key
    product, so a ``LinComb`` over multisets is a polynomial and one over
    pairs of multisets is an element of the tensor square.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, coeff in items:
            c = to_rational(coeff)
            if c:
                acc[key] = acc.get(key, 0) + c
        self._terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def _raw(cls, terms: dict) -> LinComb:
        obj = object.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def basis(cls, key, coeff=1) -> LinComb:
        return cls({key: coeff})

    @classmethod
    def zero(cls) -> LinComb:
        return cls._raw({})

    @property
    def terms(self) -> Mapping:
        return self._terms

    def items(self):
        return self._terms.items()

    def keys(self):
        return self._terms.keys()

    def coeff(self, key) -> Fraction:
        return self._terms.get(key, Fraction(0))

    @property
    def degree(self) -> int:
        """Largest key degree; ``-1`` for the zero vector."""
        return max((key_degree(k) for k in self._terms), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __eq__(self, other) -> bool:
        if isinstance(other, LinComb):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    __hash__ = None

    def _coerce(self, other) -> LinComb | None:
        if isinstance(other, LinComb):
            return other
        return None

    def __add__(self, other) -> LinComb:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        acc = dict(self._terms)
        for k, v in other._terms.items():
            s = acc.get(k, 0) + v
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
        return LinComb._raw(acc)

    def __neg__(self) -> LinComb:
        return LinComb._raw({k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> LinComb:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> LinComb:
        c = to_rational(c)
        if not c:
            return LinComb._raw({})
        return LinComb._raw({k: v * c for k, v in self._terms.items()})

    def __mul__(self, other) -> LinComb:
        if isinstance(other, LinComb):
            acc: dict = {}
            for k1, v1 in self._terms.items():
                for k2, v2 in other._terms.items():
                    k = _key_mul(k1, k2)
                    acc[k] = acc.get(k, 0) + v1 * v2
            return LinComb._raw({k: v for k, v in acc.items() if v})
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other) -> LinComb:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def map_basis(self, f) -> LinComb:
        """Linear extension of ``f`` (key -> LinComb) applied to ``self``."""
        acc: dict = {}
        for k, v in self._terms.items():
            for k2, v2 in f(k)._terms.items():
                acc[k2] = acc.get(k2, 0) + v * v2
        return LinComb._raw({k: c for k, c in acc.items() if c})

    def sorted_items(self) -> list:
        """Terms ordered by descending degree, then canonical key text."""
        return sorted(self._terms.items(), key=lambda kv: (-key_degree(kv[0]), _key_sort(kv[0])))

    def __str__(self) -> str:
        return render_text(self)

    def __repr__(self) -> str:
        return f"LinComb({render_text(self)!r})"


HElem = LinComb
TensorElem = LinComb


def as_lincomb(x) -> LinComb:
    """Promote a bare basis key to a one-term combination."""
    if isinstance(x, LinComb):
        return x
    return LinComb.basis(x)


def tensor(*factors) -> LinComb:
    """Tensor product of linear combinations; tuple keys are flattened."""
    result = {(): Fraction(1)}
    for factor in factors:
        factor = as_lincomb(factor)
        acc: dict = {}
        for k1, v1 in result.items():
            for k2, v2 in factor.items():
                k = k1 + (k2 if isinstance(k2, tuple) else (k2,))
                acc[k] = acc.get(k, 0) + v1 * v2
        result = acc
    return LinComb(result)


def _key_text(key) -> str:
    if isinstance(key, tuple):
        return " ⊗ ".join(_key_text(k) for k in key)
    return str(key)


def _is_unit(key) -> bool:
    if isinstance(key, tuple):
        return False
    return key_degree(key) == 0


def render_text(x: LinComb) -> str:
    """Plain-text form, e.g. ``a^4 - 6 a^2 + 3``.

    Tensor terms render as ``2 a ⊗ a``; a pure scalar term renders as its
    coefficient alone.
    """
    if not x:
        return "0"
    chunks = []
    for i, (key, c) in enumerate(x.sorted_items()):
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if _is_unit(key):
            body = rational_str(mag)
        elif mag == 1:
            body = _key_text(key)
        else:
            body = f"{rational_str(mag)} {_key_text(key)}"
        if i == 0:
            chunks.append(body if sign == "+" else f"-{body}")
        else:
            chunks.append(f"{sign} {body}")
    return " ".join(chunks)


def _latex_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"\\frac{{{q.numerator}}}{{{q.denominator}}}"


def render_latex(x: LinComb) -> str:
    """LaTeX form of a polynomial, e.g. ``a^{4} - 6a^{2} + 3``."""
    if not x:
        return "0"
    chunks = []
    for i, (key, c) in enumerate(x.sorted_items()):
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if not key:
            body = _latex_rational(mag)
        elif mag == 1:
            body = key.latex()
        else:
            body = f"{_latex_rational(mag)}{key.latex()}"
        if i == 0:
            chunks.append(body if sign == "+" else f"-{body}")
        else:
            chunks.append(f"{sign} {body}")
    return " ".join(chunks)


_POLY_TOKEN = re.compile(r"\s*(?:([+-])|(\d+(?:/\d+)?(?:\.\d+)?)|([a-zA-Z][a-zA-Z0-9_]*(?:\^\d+)?)|(\*))")


def parse_helem(text: str) -> LinComb:
    """Parse a polynomial such as ``"a^4 - 6 a^2 + 3"`` or ``"1/2 a b + c"``.

    A term is an optional rational coefficient followed by zero or more
    ``letter^n`` factors; ``*`` between factors is allowed.
    """
    pos = 0
    terms: list[tuple[Multiset, Fraction]] = []
    sign = 1
    coeff: Fraction | None = None
    factors: list[str] = []
    seen_any = False

    def flush(at):
        nonlocal coeff, factors, sign
        if coeff is None and not factors:
            raise ParseError("empty term", at)
        c = (coeff if coeff is not None else Fraction(1)) * sign
        terms.append((Multiset.parse(" ".join(factors)) if factors else EMPTY, c))
        coeff, factors, sign = None, [], 1

    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        m = _POLY_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        at = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        op, num, fac, star = m.groups()
        if op is not None:
            if coeff is not None or factors:
                flush(at)
            sign = sign * (-1 if op == "-" else 1)
        elif num is not None:
            if factors or coeff is not None:
                raise ParseError("coefficient must precede factors", at)
            coeff = to_rational(num)
        elif fac is not None:
            factors.append(fac)
        elif star is not None:
            if coeff is None and not factors:
                raise ParseError("dangling '*'", at)
        seen_any = True
        pos = m.end()
    if not seen_any:
        raise ParseError("empty polynomial", 0)
    flush(pos)
    return LinComb(terms)
