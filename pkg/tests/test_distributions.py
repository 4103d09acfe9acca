from fractions import Fraction

import pytest

from hopfwick.algebra import Multiset, multisets_up_to
from hopfwick.cumulants import cumulants, moment_functional
from hopfwick.distributions import (
    DistributionSpec,
    Law,
    SampleTable,
    moments_from_distribution,
    moments_from_samples,
    samples_from_columns,
    stirling2_row,
    touchard,
)
from hopfwick.errors import ParseError, ValidationError

from oracles import bell_triangle, gaussian_moment

M = Multiset.parse


def moments(text, n=6):
    return moments_from_distribution(DistributionSpec.parse(text), n).values


def test_gaussian_moments():
    vals = moments("a=gaussian(0,1)", 8)
    assert vals[M("a^4")] == 3
    assert [vals[Multiset({"a": n})] for n in range(9)] == [gaussian_moment(n) for n in range(9)]


def test_shifted_gaussian_cumulants():
    m, v = Fraction(2, 3), Fraction(5, 4)
    mu = moment_functional(moments_from_distribution(DistributionSpec({"a": Law("gaussian", (m, v))}), 6))
    kappa = cumulants(mu)
    assert [kappa(Multiset({"a": n})) for n in range(1, 7)] == [m, v, 0, 0, 0, 0]


def test_poisson_moments_and_cumulants():
    vals = moments("a=poisson(1)", 8)
    assert vals[M("a^3")] == 5
    assert [vals[Multiset({"a": n})] for n in range(9)] == bell_triangle(8)
    r = Fraction(3, 7)
    kappa = cumulants(moment_functional(moments_from_distribution(DistributionSpec({"a": Law("poisson", (r,))}), 6)))
    assert all(kappa(Multiset({"a": n})) == r for n in range(1, 7))


def test_touchard_small():
    assert stirling2_row(4) == [0, 1, 7, 6, 1]
    r = Fraction(1, 2)
    assert touchard(2, r) == r + r * r


def test_constant_and_bernoulli_and_exponential():
    c = Fraction(-3, 2)
    vals = moments_from_distribution(DistributionSpec({"a": Law("constant", (c,))}), 5).values
    assert all(vals[Multiset({"a": n})] == c**n for n in range(6))
    vals = moments("a=bernoulli(1/3)", 4)
    assert [vals[Multiset({"a": n})] for n in range(5)] == [1] + [Fraction(1, 3)] * 4
    vals = moments("a=exponential(2)", 3)
    assert [vals[Multiset({"a": n})] for n in range(4)] == [1, Fraction(1, 2), Fraction(1, 2), Fraction(3, 4)]


def test_independent_letters_multiply():
    vals = moments("a=gaussian(0,1); b=poisson(1/2)", 4)
    for A in multisets_up_to("ab", 4):
        a_part, b_part = Multiset({"a": A.count("a")}), Multiset({"b": A.count("b")})
        assert vals[A] == vals[a_part] * vals[b_part]


def test_spec_parse():
    spec = DistributionSpec.parse(" b = poisson(0.5) ;a=gaussian(1, 2);")
    assert spec.alphabet == ("a", "b")
    assert spec.laws["b"].params == (Fraction(1, 2),)
    assert str(spec) == "a=gaussian(1,2); b=poisson(1/2)"


@pytest.mark.parametrize("bad", ["a=gaussian(0)", "a=cauchy(0,1)", "a=gaussian(0,-1)", "a=bernoulli(2)",
                                 "a=exponential(0)", "a=poisson(-1)"])
def test_spec_validation(bad):
    with pytest.raises(ValidationError):
        DistributionSpec.parse(bad)


def test_spec_syntax_errors():
    with pytest.raises(ParseError):
        DistributionSpec.parse("a gaussian(0,1)")
    with pytest.raises(ParseError):
        DistributionSpec.parse("a=poisson(1); a=poisson(2)")
    with pytest.raises(ValidationError):
        DistributionSpec.parse(" ; ")


def test_samples_examples():
    table = SampleTable.from_csv("a\n1\n3\n")
    vals = moments_from_samples(table, 2).values
    assert vals[M("a")] == 2 and vals[M("a^2")] == 5


def test_single_row_is_exact_monomial():
    table = SampleTable.from_csv("a,b\n0.5,-2\n")
    vals = moments_from_samples(table, 3).values
    assert vals[M("a^2 b")] == Fraction(1, 4) * -2
    assert vals[M("b^3")] == -8


def test_constant_column_has_no_higher_cumulants():
    table = samples_from_columns({"a": ["1.5"] * 4})
    kappa = cumulants(moment_functional(moments_from_samples(table, 5)))
    assert kappa(M("a")) == Fraction(3, 2)
    assert all(kappa(Multiset({"a": n})) == 0 for n in range(2, 6))


def test_decimals_are_exact():
    table = SampleTable.from_csv("a\n0.1\n0.2\n")
    assert moments_from_samples(table, 1).values[M("a")] == Fraction(3, 20)


@pytest.mark.parametrize("csv_text", ["", "a\n", "a\nnan\n", "a\ninf\n", "a,b\n1\n", "a\nx\n", "a,a\n1,2\n"])
def test_sample_errors(csv_text):
    with pytest.raises(ValidationError):
        SampleTable.from_csv(csv_text)


def test_samples_deterministic():
    text = "a,b\n1,2\n-0.5,3\n2.25,0\n"
    first = moments_from_samples(SampleTable.from_csv(text), 4)
    assert first == moments_from_samples(SampleTable.from_csv(text), 4)
