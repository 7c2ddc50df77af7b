import random
import warnings
from fractions import Fraction

import pytest

from tropmirror.algebra import NovikovSeries
from tropmirror.ci import CIDatum, CIMirror, MinimizerWarning, realized_tuples
from tropmirror.errors import MinimizerNotRealized, ValidationError
from tropmirror.fixtures import genus2, pair_of_pants
from tropmirror.tropical import WeightedPointSet

from conftest import load_job
from oracles import sampled_tuples


def two_points():
    a = WeightedPointSet.from_pairs([((0,), 0), ((1,), 0)])
    b = WeightedPointSet.from_pairs([((0,), 0), ((1,), 1)])
    return CIDatum((a, b))


def two_lines():
    return load_job("ci_two_lines").ci


def test_two_points_on_a_line():
    ci = two_points()
    tuples = realized_tuples(ci)
    alphas = sorted(t.alphas for t in tuples.tuples)
    assert alphas == [((0,), (0,)), ((1,), (0,)), ((1,), (1,))]


def test_two_lines_match_arrangement():
    ci = two_lines()
    lp = set(realized_tuples(ci).labels())
    assert len(lp) < 9
    assert lp == sampled_tuples(ci.hypersurfaces)


def test_random_line_pairs_match_arrangement():
    rng = random.Random(3)
    for _ in range(5):
        a = pair_of_pants(2)
        b = WeightedPointSet(2, a.alphas, tuple(Fraction(rng.randint(-3, 3)) for _ in range(3)))
        ci = CIDatum((a, b))
        assert set(realized_tuples(ci).labels()) == sampled_tuples(ci.hypersurfaces, step=Fraction(1, 8))


def test_torus_superpotential():
    # no ambient rays: only the two Novikov-pair terms
    h = pair_of_pants(2)
    cm = CIMirror(CIDatum((h, WeightedPointSet(2, h.alphas, (0, 1, -1)))))
    terms = cm.W0()
    assert [t.name for t in terms] == ["w0_1", "w0_2"]
    assert [t.weight for t in terms] == [(0, 0, 1, 0), (0, 0, 0, 1)]
    assert [t.name for t in cm.W0H()] == ["v0_1", "v0_2"]


def test_two_lines_mirror():
    cm = CIMirror(two_lines())
    assert cm.transversal
    terms = cm.W0()
    assert [t.name for t in terms] == ["w0_1", "w0_2", "w1", "w2", "w3"]
    assert terms[-1].weight == (1, 1, 1, 1)
    for t in terms[2:]:
        for i in range(2):
            for a in cm.subdivisions[i].a_red:
                assert cm.vanishing_order(t, i, a) >= 0


def test_tuple_graph_cocycle():
    cm = CIMirror(two_lines())
    rng = random.Random(0)
    assert cm.triangles()
    for a, b, c in cm.triangles():
        for _ in range(20):
            m = (rng.randint(-3, 3), rng.randint(-3, 3))
            e = cm.monomial(a, m, (rng.randint(0, 2), rng.randint(0, 2)))
            assert cm.glue_edge(cm.glue_edge(cm.glue_edge(e, a, b), b, c), c, a) == e


def test_chart_invariance():
    cm = CIMirror(two_lines())
    for j in range(len(cm.ci.rays)):
        ref = {t: cm.express_w_in_chart(j, t) for t in cm.labels}
        for s in cm.labels:
            for t in cm.labels:
                assert cm.glue(ref[s], s, t) == ref[t]


def test_unrealized_minimizer():
    # the rays' minimizing points of the two sets never dominate together
    a = WeightedPointSet.from_pairs([((0,), 0), ((1,), 0)])
    b = WeightedPointSet.from_pairs([((0,), 0), ((1,), -1)])
    ci = CIDatum((a, b), rays=((1,), (-1,)))
    cm = CIMirror(ci)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        cm.W0()
    assert any(issubclass(w.category, MinimizerWarning) for w in caught) == (
        ((0,), (0,)) not in {t.alphas for t in cm.realized.tuples}
        or ((1,), (1,)) not in {t.alphas for t in cm.realized.tuples}
    )
    if caught:
        with pytest.raises(MinimizerNotRealized):
            CIMirror(ci, strict=True).W0()


def test_validation():
    with pytest.raises(ValidationError):
        CIDatum(())
    with pytest.raises(ValidationError):
        CIDatum((pair_of_pants(1), pair_of_pants(2)))


class TestSingleHypersurface:
    def test_matches_hypersurface(self, g2):
        cm = CIMirror(CIDatum((g2.w,), g2.amb.rays, g2.amb.varpi, (g2.amb.lam,), (g2.amb.epsilon,)))
        assert cm.data == g2.data
        for a, b in zip(cm.W0H(), g2.W0H()):
            assert (a.name, a.weight, a.expression, a.coefficient) == (b.name, b.weight, b.expression, b.coefficient)
        assert [t.name for t in cm.W0()] == ["w0", "w1", "w2", "w3", "w4"]
        assert cm.W0()[0].expression == g2.W0()[0].expression

    def test_charts(self):
        w = genus2()
        cm = CIMirror(CIDatum((w,)))
        assert cm.chart_name(cm.labels[0]) == (0, 0)
        assert len(cm.labels) == 12
        assert NovikovSeries.one() == NovikovSeries.one()
