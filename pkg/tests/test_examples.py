"""Small worked examples, one per documented behaviour."""

from fractions import Fraction

import pytest

from tropmirror.algebra import ChartExpression, LaurentPolynomial, NovikovSeries, binomial_expansion, expr_pow
from tropmirror.fixtures import box_ambient, genus2, hyperplane_ambient, pair_of_pants, standard_bidegree
from tropmirror.mirror import AmbientToricData, Mirror
from tropmirror.tropical import (
    WeightedPointSet,
    build_tropical_complex,
    curve_graph,
    is_maximal,
    lower_hull_subdivision,
    tropical_value,
)
from tropmirror.wallcross import WallTransform, apply_flux, apply_wall, build_converse


def T(e, c=1, cutoff=None):
    return NovikovSeries.monomial(c, e, cutoff)


def line(pairs):
    return WeightedPointSet.from_pairs([((a,), r) for a, r in pairs], 1)


class TestSeriesArithmetic:
    def test_unit(self):
        assert NovikovSeries.one() * T(Fraction(2, 5), 7) == T(Fraction(2, 5), 7)

    def test_difference_of_squares_truncated(self):
        half = Fraction(1, 2)
        a = NovikovSeries(((1, 0), (1, half)), cutoff=1)
        b = NovikovSeries(((1, 0), (-1, half)), cutoff=1)
        assert a * b == NovikovSeries.one(1)

    def test_monomials(self):
        assert T(Fraction(1, 3), 2) * T(Fraction(2, 3), 3) == T(1, 6)


class TestChartAlgebra:
    eps = Fraction(1, 10)

    def w0(self):
        v0 = ChartExpression.v0(2, (0, 0))
        return v0.scale_T(self.eps) - v0.constant(T(self.eps))

    def test_square(self):
        x = self.w0().scale_T(-self.eps) + 1
        assert expr_pow(x, 2) == expr_pow(ChartExpression.v0(2, (0, 0)), 2)

    def test_zeroth_power(self):
        assert expr_pow(self.w0(), 0) == self.w0().constant(1)

    def test_binomial_families(self):
        x = self.w0().scale_T(-self.eps)
        assert binomial_expansion(x, 3) == expr_pow(ChartExpression.v0(2, (0, 0)), 3)


class TestSubdivisions:
    def test_triangle(self):
        s = lower_hull_subdivision(pair_of_pants(2))
        assert len(s.cells) == 1 and len(s.cells[0].points) == 3
        assert len(s.a_red) == 3 and is_maximal(s)[0]

    def test_line_with_bend(self):
        w = line([(0, 0), (1, 0), (2, 1)])
        s = lower_hull_subdivision(w)
        assert sorted(c.points for c in s.cells) == [(0, 1), (1, 2)]
        assert sorted(s.a_red) == [0, 1, 2]
        tc = build_tropical_complex(w, s)
        assert len(tc.components) == 3
        assert sorted(c.equations[0][1] / -c.equations[0][0][0] for c in tc.cells[0]) == [0, 1]

    def test_long_segment(self):
        s = lower_hull_subdivision(line([(0, 0), (2, 0)]))
        ok, cell = is_maximal(s)
        assert len(s.cells) == 1 and not ok and cell == (0, 1)

    def test_pair_of_pants_values(self):
        w = pair_of_pants(2)
        assert tropical_value(w, (-1, -1)) == (0, frozenset({w.index((0, 0))}))
        assert tropical_value(w, (0, 0)) == (0, frozenset(range(3)))

    def test_pair_of_pants_curve(self):
        g = curve_graph(build_tropical_complex(pair_of_pants(2)))
        assert len(g.vertices) == 1 and len(g.rays) == 3 and g.genus() == 0

    def test_bidegree_2_2_genus(self):
        g = curve_graph(build_tropical_complex(standard_bidegree(2, 2)))
        assert g.genus() == 1


class TestSuperpotentials:
    def test_torus_only(self):
        w = genus2()
        m = Mirror(w, AmbientToricData(epsilon=Fraction(1, 10)))
        assert [t.name for t in m.W0()] == ["w0"]
        assert [t.name for t in m.W0H()] == ["v0"]
        # every divisor is a component of the zero fibre of -v0
        assert len(m.fiber_components()) == 12

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_hyperplane(self, n):
        area = Fraction(7, 3)
        eps = Fraction(1, 10)
        m = Mirror(pair_of_pants(n), hyperplane_ambient(n, area, eps))
        w0, *ws = [m.to_orthant(t.expression) for t in m.W0()]
        all_coords = (1,) * (n + 1)
        assert w0 == LaurentPolynomial(n + 1, {(0,) * (n + 1): T(eps, -1), all_coords: T(eps)})
        units = []
        for i, e in enumerate(ws):
            (key, coeff), = e.items()
            assert sorted(key) == [0] * n + [1]
            assert coeff == (T(area) if i == n else NovikovSeries.one())
            units.append(key)
        assert len(set(units)) == n + 1

    def test_one_wall_correction(self):
        # a point in C: the chamber of 1 sees (1 + T^-eps w0) T^varpi v
        w = line([(0, 0), (1, 0)])
        m = Mirror(w, AmbientToricData(((1,),), (Fraction(1, 2),), (0,), Fraction(1, 10)))
        e = m.express_w_in_chart(0, m.label_of((1,)))
        assert e == ChartExpression.term(1, (1,), 1, T(Fraction(1, 2)), (1,))

    def test_minimizer_chart(self, g2):
        a = g2.label_of((0, 0))
        e = g2.express_w_in_chart(0, a)
        assert e == g2.monomial(a, (1, 0))

    def test_bidegree_fibre(self):
        for p, q in [(3, 2), (3, 3)]:
            w = standard_bidegree(p, q)
            m = Mirror(w, box_ambient(w))
            found = sorted(w.alphas[a] for a in m.fiber_components())
            assert found == [(a, b) for a in range(1, p) for b in range(1, q)]


class TestGluing:
    def test_identity(self, g2):
        a = g2.label_of((1, 1))
        e = g2.monomial(a, (2, -1), 1)
        assert g2.glue(e, a, a) == e

    def test_one_step(self, g2):
        a, b = g2.label_of((1, 1)), g2.label_of((2, 1))
        assert g2.glue(g2.monomial(a, (1, 0)), a, b) == g2.monomial(b, (1, 0), 1)

    def test_v0_is_global(self, g2):
        a, b = g2.label_of((0, 0)), g2.label_of((3, 2))
        assert g2.glue(g2.v0(a), a, b) == g2.v0(b)


class TestTransforms:
    def test_trivial_wall(self):
        e = LaurentPolynomial(2, {(1, -1): 2, (0, 3): T(1)})
        assert apply_wall(WallTransform.wall(1, (1, 1), (0, 0)), e) == e

    def test_trivial_flux(self):
        e = LaurentPolynomial(2, {(1, -1): 2})
        assert apply_flux((0, 0), e) == e


def test_converse_genus2():
    w = genus2()
    f = build_converse(w).f_tilde
    assert len(f) == 12
    assert {k: c for k, c in f.items()} == {a: T(r) for a, r in zip(w.alphas, w.rhos)}
