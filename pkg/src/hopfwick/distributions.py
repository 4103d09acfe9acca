"""Moment sources: closed-form distributions and empirical sample tables."""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .algebra import check_letter, multisets_up_to, to_rational
from .cumulants import MomentSpec
from .errors import ParseError, ValidationError

KIND_ARITY = {"gaussian": 2, "poisson": 1, "exponential": 1, "bernoulli": 1, "constant": 1}


@dataclass(frozen=True)
class Law:
    kind: str
    params: tuple[Fraction, ...]

    def __post_init__(self):
        if self.kind not in KIND_ARITY:
            raise ValidationError(f"unknown distribution {self.kind!r}; expected one of {sorted(KIND_ARITY)}")
        if len(self.params) != KIND_ARITY[self.kind]:
            raise ValidationError(f"{self.kind} takes {KIND_ARITY[self.kind]} parameter(s), got {len(self.params)}")
        params = tuple(to_rational(p) for p in self.params)
        object.__setattr__(self, "params", params)
        if self.kind == "gaussian" and params[1] < 0:
            raise ValidationError("gaussian variance must be >= 0")
        if self.kind == "poisson" and params[0] < 0:
            raise ValidationError("poisson rate must be >= 0")
        if self.kind == "exponential" and params[0] <= 0:
            raise ValidationError("exponential rate must be > 0")
        if self.kind == "bernoulli" and not 0 <= params[0] <= 1:
            raise ValidationError("bernoulli p must lie in [0, 1]")

    def moments(self, n: int) -> list[Fraction]:
        """``E X^0 .. E X^n``."""
        if self.kind == "gaussian":
            m, v = self.params
            out = [Fraction(1), m]
            for k in range(2, n + 1):
                out.append(m * out[k - 1] + (k - 1) * v * out[k - 2])
            return out[: n + 1]
        if self.kind == "poisson":
            (r,) = self.params
            return [touchard(k, r) for k in range(n + 1)]
        if self.kind == "exponential":
            (rate,) = self.params
            return [Fraction(math.factorial(k)) / rate**k for k in range(n + 1)]
        if self.kind == "bernoulli":
            (p,) = self.params
            return [Fraction(1)] + [p] * n
        (c,) = self.params
        return [c**k for k in range(n + 1)]

    def __str__(self) -> str:
        return f"{self.kind}({','.join(str(p) for p in self.params)})"


def stirling2_row(n: int) -> list[int]:
    """``S(n, 0..n)``."""
    row = [1]
    for m in range(1, n + 1):
        new = [0] * (m + 1)
        for k in range(1, m + 1):
            new[k] = k * (row[k] if k < m else 0) + row[k - 1]
        row = new
    return row


def touchard(n: int, r: Fraction) -> Fraction:
    return sum((s * Fraction(r) ** k for k, s in enumerate(stirling2_row(n))), Fraction(0))


_ASSIGN_RE = re.compile(r"\s*([a-zA-Z][a-zA-Z0-9_]*)\s*=\s*([a-z]+)\s*\(([^)]*)\)\s*\Z")


@dataclass(frozen=True)
class DistributionSpec:
    """Independent letters, each with its own law."""

    laws: Mapping[str, Law]

    def __post_init__(self):
        if not self.laws:
            raise ValidationError("distribution spec assigns no letters")
        for letter in self.laws:
            check_letter(letter)
        object.__setattr__(self, "laws", dict(sorted(self.laws.items())))

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(self.laws)

    @classmethod
    def parse(cls, text: str) -> DistributionSpec:
        """``"a=gaussian(0,1); b=poisson(1/2)"``."""
        laws: dict[str, Law] = {}
        offset = 0
        for chunk in text.split(";"):
            if chunk.strip():
                m = _ASSIGN_RE.match(chunk)
                if not m:
                    raise ParseError(f"cannot parse distribution assignment {chunk.strip()!r}", offset)
                letter, kind, args = m.groups()
                if letter in laws:
                    raise ParseError(f"letter {letter!r} assigned twice", offset)
                params = tuple(a.strip() for a in args.split(",")) if args.strip() else ()
                laws[letter] = Law(kind, params)
            offset += len(chunk) + 1
        return cls(laws)

    def __str__(self) -> str:
        return "; ".join(f"{x}={law}" for x, law in self.laws.items())


def moments_from_distribution(spec: DistributionSpec, max_degree: int) -> MomentSpec:
    """Joint moments of independent letters: products of single-letter moments."""
    if not isinstance(max_degree, int) or max_degree < 1:
        raise ValidationError(f"max_degree must be a positive int, got {max_degree!r}")
    single = {x: law.moments(max_degree) for x, law in spec.laws.items()}
    values = {}
    for A in multisets_up_to(spec.alphabet, max_degree):
        v = Fraction(1)
        for letter, n in A.items():
            v *= single[letter][n]
        values[A] = v
    return MomentSpec(spec.alphabet, max_degree, values)


@dataclass(frozen=True)
class SampleTable:
    """Rows of exact rational samples, one column per letter."""

    alphabet: tuple[str, ...]
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(check_letter(x) for x in self.alphabet))
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValidationError("sample header repeats a letter")
        if not self.rows:
            raise ValidationError("sample table has no rows")
        rows = []
        for i, row in enumerate(self.rows):
            if len(row) != len(self.alphabet):
                raise ValidationError(f"row {i + 1} has {len(row)} entries, header has {len(self.alphabet)}")
            rows.append(tuple(_sample_value(v, i) for v in row))
        object.__setattr__(self, "rows", tuple(rows))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @classmethod
    def from_csv(cls, source) -> SampleTable:
        """Read CSV text or a path; the header row names the letters."""
        if isinstance(source, Path):
            source = source.read_text()
        reader = csv.reader(io.StringIO(source))
        lines = [r for r in reader if any(cell.strip() for cell in r)]
        if not lines:
            raise ValidationError("sample CSV is empty")
        header = tuple(h.strip() for h in lines[0])
        return cls(header, tuple(tuple(cell.strip() for cell in r) for r in lines[1:]))


def _sample_value(v, row: int) -> Fraction:
    if isinstance(v, str) and v.strip().lower().lstrip("+-") in {"nan", "inf", "infinity"}:
        raise ValidationError(f"non-finite sample {v!r} in row {row + 1}")
    try:
        return to_rational(v)
    except ValidationError as exc:
        raise ValidationError(f"row {row + 1}: {exc}") from None


def moments_from_samples(table: SampleTable, max_degree: int) -> MomentSpec:
    """Empirical moments: exact averages of monomials over the rows."""
    if not isinstance(max_degree, int) or max_degree < 1:
        raise ValidationError(f"max_degree must be a positive int, got {max_degree!r}")
    index = {x: i for i, x in enumerate(table.alphabet)}
    values = {}
    for A in multisets_up_to(table.alphabet, max_degree):
        total = Fraction(0)
        for row in table.rows:
            term = Fraction(1)
            for letter, n in A.items():
                term *= row[index[letter]] ** n
            total += term
        values[A] = total / table.n_rows
    return MomentSpec(table.alphabet, max_degree, values)


def samples_from_columns(columns: Mapping[str, Sequence]) -> SampleTable:
    letters = tuple(columns)
    lengths = {len(columns[x]) for x in letters}
    if len(lengths) > 1:
        raise ValidationError("sample columns differ in length")
    return SampleTable(letters, tuple(zip(*(columns[x] for x in letters))))
