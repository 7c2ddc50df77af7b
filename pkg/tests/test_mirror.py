from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropmirror.algebra import ChartExpression, NovikovSeries
from tropmirror.errors import NotRegular, ValidationError
from tropmirror.fixtures import (
    BOX_RAYS,
    ale,
    box_ambient,
    fermat,
    genus2,
    hyperplane_ambient,
    pair_of_pants,
)
from tropmirror.mirror import AmbientToricData, Mirror, build_W0, singular_fiber_components

from oracles import direct_glue, leibniz_det


def expected_order(name, alpha):
    a, b = alpha
    return {"v0": 1, "w1": a, "w2": b, "w3": 3 - a, "w4": 2 - b}[name]


class TestGenus2:
    def test_divisors(self, g2):
        facets = g2.data.facets
        assert len(facets) == 12
        assert sorted(f.alpha for f in facets if f.compact) == [(1, 1), (2, 1)]
        for f in facets:
            assert f.normal == (-f.alpha[0], -f.alpha[1], 1)
            assert f.offset == g2.w.rhos[f.label]

    def test_fan(self, g2):
        assert g2.data.smooth
        assert len(g2.data.cones) == 12
        for c in g2.data.cones:
            assert abs(leibniz_det(c.generators)) == c.index == 1

    def test_strata(self, g2):
        strata = g2.data.strata
        assert len(strata) == 23
        assert sum(st.bounded for st in strata) == 13

    def test_superpotential(self, g2):
        terms = g2.W0()
        assert [t.name for t in terms] == ["w0", "w1", "w2", "w3", "w4"]
        assert [t.weight for t in terms[1:]] == [(-1, 0, 0), (0, -1, 0), (1, 0, 3), (0, 1, 2)]
        assert all(t.correction.is_zero() for t in terms)

    def test_vanishing_orders(self, g2):
        for t in g2.W0H():
            for a in g2.labels:
                assert g2.vanishing_order(t, a) == expected_order(t.name, g2.w.alphas[a])

    def test_w0_order_is_zero(self, g2):
        # w0 = T^eps (v0 - 1) has a constant term
        assert all(g2.vanishing_order(g2.w0_term(), a) == 0 for a in g2.labels)

    def test_fiber_components(self, g2):
        assert sorted(g2.w.alphas[a] for a in g2.fiber_components()) == [(1, 1), (2, 1)]
        table = singular_fiber_components(g2.w, g2.amb)
        assert sorted(table[g2.w.index((1, 1))]) == ["v0", "w1", "w2", "w3", "w4"]

    def test_express_in_chart(self, g2):
        e = g2.express_w_in_chart(0, g2.label_of((2, 1)))
        assert e == ChartExpression.term(2, (1, 0), 2, chart=(2, 1))

    def test_regularity_check(self, g2):
        e = g2.monomial(g2.label_of((1, 0)), (1, 0))
        assert g2.glue(e, g2.label_of((1, 0)), g2.label_of((0, 0))).v0pow(((1, 0, -1))) == -1
        with pytest.raises(NotRegular):
            g2.glue(e, g2.label_of((1, 0)), g2.label_of((0, 0)), regular=True)

    def test_wrong_chart(self, g2):
        e = g2.monomial(g2.label_of((1, 0)), (1, 0))
        with pytest.raises(ValueError):
            g2.glue(e, g2.label_of((0, 0)), g2.label_of((1, 1)))

    @settings(max_examples=60, deadline=None)
    @given(
        st.integers(0, 11),
        st.integers(0, 11),
        st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
        st.integers(-2, 3),
        st.fractions(0, 3, max_denominator=5),
    )
    def test_glue_matches_closed_form(self, g2, src, tgt, m, p, area):
        e = g2.monomial(src, m, p, NovikovSeries.monomial(1, area)) + g2.monomial(src, (0, 1), 1)
        assert g2.glue(e, src, tgt) == direct_glue(e, g2.w.alphas[src], g2.w.alphas[tgt])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pair_of_pants(n):
    w = pair_of_pants(n)
    m = Mirror(w, hyperplane_ambient(n))
    assert len(m.data.cones) == 1 and m.data.smooth
    matrix, offsets = m.orthant_equivalence()
    assert abs(leibniz_det(matrix)) == 1
    assert all(m.vanishing_order(m.v0_term(), a) == 1 for a in m.labels)
    # v0 becomes the product of all orthant coordinates
    from tropmirror.algebra import LaurentPolynomial

    assert m.to_orthant(m.v0()) == LaurentPolynomial(n + 1, {(1,) * (n + 1): 1})


@pytest.mark.parametrize("k", [1, 2, 3])
def test_ale(k):
    m = Mirror(ale(k), AmbientToricData.for_points(ale(k)))
    assert len(m.data.facets) == k + 2
    assert len(m.data.cones) == k + 1 and m.data.smooth
    c = Mirror(ale(k, maximal=False), AmbientToricData.for_points(ale(k, maximal=False)))
    assert len(c.data.cones) == 1
    assert c.data.cones[0].index == abs(leibniz_det(c.data.cones[0].generators)) == k + 1
    assert not c.data.smooth


def test_fermat_singular():
    w = fermat()
    amb = AmbientToricData.for_points(w, ((1, 0), (0, 1), (-1, -1)))
    m = Mirror(w, amb)
    assert not m.data.smooth and m.data.cones[0].index == 9
    assert m.orthant_equivalence() is None


class TestValidation:
    def test_epsilon(self):
        w = genus2()
        with pytest.raises(ValidationError):
            box_ambient(w, epsilon=0).validate(w)

    def test_non_primitive(self):
        w = genus2()
        amb = AmbientToricData(((2, 2),), (0,), (0,), Fraction(1))
        with pytest.raises(ValidationError, match="primitive"):
            amb.validate(w)

    def test_compatibility(self):
        w = genus2()
        amb = AmbientToricData(BOX_RAYS, (0,) * 4, (0, 0, 2, 2), Fraction(1, 10))
        with pytest.raises(ValidationError):
            amb.validate(w)

    def test_minimum_must_be_attained(self):
        w = genus2()
        amb = AmbientToricData(BOX_RAYS, (0,) * 4, (1, 0, 3, 2), Fraction(1, 10))
        with pytest.raises(ValidationError):
            amb.validate(w)


def test_module_helpers():
    w = genus2()
    assert len(build_W0(w, box_ambient(w))) == 5
