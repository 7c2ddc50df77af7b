from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropmirror.algebra import (
    ChartExpression,
    LaurentPolynomial,
    NovikovSeries,
    binomial_expansion,
    expr_pow,
    format_rational,
    rational,
    series_invert,
)
from tropmirror.errors import CutoffRequired, NotInvertible, ZeroSeries

from oracles import naive_power

exponents = st.fractions(min_value=0, max_value=4, max_denominator=4)
coeffs = st.integers(-3, 3).filter(bool)


@st.composite
def series(draw, cutoff=None, min_exp=0):
    terms = draw(st.lists(st.tuples(coeffs, exponents), max_size=4))
    return NovikovSeries(tuple((c, e + min_exp) for c, e in terms), cutoff)


@st.composite
def polys(draw, nvars=2, cutoff=None):
    keys = st.tuples(*[st.integers(-2, 2)] * nvars)
    items = draw(st.lists(st.tuples(keys, series()), max_size=3))
    return LaurentPolynomial(nvars, items, cutoff)


def T(e, c=1, cutoff=None):
    return NovikovSeries.monomial(c, e, cutoff)


class TestRational:
    def test_accepts_exact_forms(self):
        assert rational("3/6") == Fraction(1, 2)
        assert rational(" -7 ") == -7
        assert rational(Fraction(2, 3)) == Fraction(2, 3)

    @pytest.mark.parametrize("bad", [0.5, True, "0.5", "1e2", "", None])
    def test_rejects_inexact(self, bad):
        with pytest.raises((TypeError, ValueError)):
            rational(bad)

    def test_format(self):
        assert format_rational(Fraction(6, 3)) == "2"
        assert format_rational(Fraction(-1, 2)) == "-1/2"


class TestSeries:
    def test_normalizes(self):
        s = NovikovSeries(((1, 1), (2, 0), (-1, 1)))
        assert s.terms == ((2, 0),)
        assert s.valuation() == 0

    def test_cutoff_drops_terms(self):
        s = NovikovSeries(((1, 0), (1, 3)), cutoff=3)
        assert s == T(0, cutoff=3)

    def test_zero(self):
        assert NovikovSeries.zero().valuation() is None
        with pytest.raises(ZeroSeries):
            NovikovSeries.zero().leading()
        with pytest.raises(ZeroDivisionError):
            series_invert(NovikovSeries.zero())

    def test_invert_geometric(self):
        a = NovikovSeries(((1, 0), (1, Fraction(1, 2))), cutoff=Fraction(3, 2))
        inv = series_invert(a)
        assert inv == NovikovSeries(((1, 0), (-1, Fraction(1, 2)), (1, 1)), Fraction(3, 2))

    def test_invert_monomial_exact(self):
        assert series_invert(T(Fraction(2, 3), 4)) == T(Fraction(-2, 3), Fraction(1, 4))

    def test_invert_needs_cutoff(self):
        with pytest.raises(CutoffRequired):
            series_invert(NovikovSeries(((1, 0), (1, 1))))

    def test_str(self):
        assert str(NovikovSeries(((2, 0), (-1, Fraction(1, 2))))) == "(2 - T^1/2)"

    def test_json_round_trip(self):
        s = NovikovSeries(((2, 0), (-1, Fraction(1, 2))), cutoff=3)
        assert NovikovSeries.from_json(s.to_json()) == s

    @given(series(), series(), series())
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a - a == NovikovSeries.zero()

    @given(series(), series())
    def test_valuation_of_product(self, a, b):
        if not a.is_zero() and not b.is_zero():
            assert (a * b).valuation() == a.valuation() + b.valuation()

    @settings(max_examples=60)
    @given(series(cutoff=3, min_exp=Fraction(1, 4)), coeffs, exponents)
    def test_truncated_inverse(self, tail, c, v):
        # unit c T^v (1 + tail): the product with its inverse is 1 modulo the inverse's cutoff
        a = T(v, c, cutoff=3) * (NovikovSeries.one(3) + tail)
        if a.is_zero():
            return
        inv = series_invert(a)
        assert inv.cutoff == 3 - 2 * a.valuation()
        prod = a * inv
        assert prod.equal_mod(NovikovSeries.one(), min(prod.cutoff, 3 - 2 * v))


class TestLaurent:
    def test_substitute(self):
        x = LaurentPolynomial(2, {(1, 0): 1})
        y = LaurentPolynomial(2, {(0, 1): 1})
        p = LaurentPolynomial(2, {(2, -1): 3})
        assert p.substitute([x * y, y]) == LaurentPolynomial(2, {(2, 1): 3})

    def test_pow_of_unit(self):
        u = LaurentPolynomial(1, {(0,): 1, (1,): T(1)}, cutoff=4)
        inv = expr_pow(u, -1)
        assert (u * inv).equal_mod(u.constant(1), 3)

    def test_pow_of_monomial_exact(self):
        m = LaurentPolynomial(2, {(1, -2): T(Fraction(1, 3), 2)})
        assert expr_pow(m, -2) == LaurentPolynomial(2, {(-2, 4): T(Fraction(-2, 3), Fraction(1, 4))})

    def test_non_unit(self):
        e = LaurentPolynomial(1, {(0,): 1, (1,): 1}, cutoff=3)
        with pytest.raises(NotInvertible):
            expr_pow(e, -1)

    def test_needs_cutoff(self):
        e = LaurentPolynomial(1, {(0,): 1, (1,): T(1)})
        with pytest.raises(CutoffRequired):
            expr_pow(e, -1)

    @given(polys(), st.integers(0, 3))
    def test_pow_matches_repeated_product(self, p, k):
        assert expr_pow(p, k) == naive_power(p, k)

    @given(polys(nvars=1), st.integers(0, 4))
    def test_binomial(self, x, k):
        assert binomial_expansion(x, k) == naive_power(x + 1, k)

    @given(polys(), polys(), polys())
    def test_ring_axioms(self, a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c

    def test_ring_mismatch(self):
        with pytest.raises(TypeError):
            LaurentPolynomial(1, {(0,): 1}) + LaurentPolynomial(2, {(0, 0): 1})


class TestChartExpression:
    def test_v0_identity(self):
        # 1 + T^-eps w0 with w0 = T^eps (v0 - 1) is v0
        eps = Fraction(1, 10)
        v0 = ChartExpression.v0(2, (0, 0))
        w0 = v0.scale_T(eps) - v0.constant(T(eps))
        assert w0.scale_T(-eps) + 1 == v0

    def test_chart_mismatch(self):
        a = ChartExpression.term(1, (1,), 0, chart=(0,))
        b = ChartExpression.term(1, (1,), 0, chart=(1,))
        with pytest.raises(ValueError):
            a + b

    def test_regularity(self):
        assert ChartExpression.term(2, (1, -1), 0).is_regular()
        assert not ChartExpression.term(2, (0, 0), -1).is_regular()

    def test_format(self):
        e = ChartExpression.term(2, (1, 0), 2, coeff=T(1))
        assert e.format() == "T^1*v1*v0^2"
