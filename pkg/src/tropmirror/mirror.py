"""Mirror toric data, chart atlas, superpotentials and vanishing orders.

The mirror of a hypersurface with monomial datum ``(A, rho)`` is the toric
variety whose polyhedron is ``{(xi, eta) : eta >= phi(xi)}``.  It has one
chart per vertex ``alpha`` of the subdivision, with coordinates
``v_1..v_n`` (torus) and ``v0``; a monomial ``v^m v0^k`` in the chart of
``alpha`` has toric weight ``(-m, k - <alpha, m>)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import ChartExpression, LaurentPolynomial, NovikovSeries, NovikovTerm, rational
from .errors import NotRegular, ValidationError
from .linalg import det, dot, is_primitive, lattice_index, sub
from .tropical import (
    TropicalComplex,
    WeightedPointSet,
    build_tropical_complex,
    is_maximal,
    lower_hull_subdivision,
    shoot_ray,
)


@dataclass(frozen=True)
class AmbientToricData:
    """Rays of the ambient fan with their support values, plus epsilon.

    ``lam[i]`` is the value making ``<sigma_i, alpha> + lam[i] >= 0`` sharp
    on the point set; ``varpi[i]`` places the facet of the moment polytope.
    """

    rays: tuple[tuple[int, ...], ...] = ()
    varpi: tuple[Fraction, ...] = ()
    lam: tuple[Fraction, ...] = ()
    epsilon: Fraction = Fraction(1)

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        varpi = tuple(rational(x) for x in self.varpi) or (Fraction(0),) * len(rays)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "varpi", varpi)
        object.__setattr__(self, "lam", tuple(rational(x) for x in self.lam))
        object.__setattr__(self, "epsilon", rational(self.epsilon))

    @classmethod
    def for_points(cls, w: WeightedPointSet, rays=(), varpi=(), epsilon=1) -> "AmbientToricData":
        """Fill in ``lam`` as ``-min <sigma, alpha>`` over the points."""
        lam = tuple(-min(dot(r, a) for a in w.alphas) for r in rays)
        return cls(tuple(rays), tuple(varpi), lam, epsilon)

    def validate(self, w: WeightedPointSet) -> None:
        if self.epsilon <= 0:
            raise ValidationError("epsilon must be positive")
        if len(self.varpi) != len(self.rays) or len(self.lam) != len(self.rays):
            raise ValidationError("need one varpi and one lambda value per ray")
        for i, r in enumerate(self.rays):
            if len(r) != w.n:
                raise ValidationError(f"ray {r} has the wrong dimension")
            if not is_primitive(r):
                raise ValidationError(f"ray {r} is not primitive")
            values = [dot(r, a) + self.lam[i] for a in w.alphas]
            if min(values) < 0:
                bad = w.alphas[values.index(min(values))]
                raise ValidationError(
                    f"ray {r}: <sigma, alpha> + lambda < 0 at alpha = {bad}"
                )
            if min(values) != 0:
                raise ValidationError(
                    f"ray {r}: <sigma, alpha> + lambda never vanishes, so the hypersurface "
                    "misses the corresponding toric divisor"
                )


@dataclass(frozen=True)
class Facet:
    label: int
    alpha: tuple[int, ...]
    normal: tuple[int, ...]  # inward normal (-alpha, 1)
    offset: Fraction  # the polyhedron is <normal, (xi, eta)> + offset >= 0
    compact: bool


@dataclass(frozen=True)
class Cone:
    cell: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]
    index: int | None  # lattice index of a simplicial cone (|det| when full)
    smooth: bool


@dataclass(frozen=True)
class Stratum:
    labels: tuple[int, int]
    bounded: bool


@dataclass
class MirrorData:
    n: int
    facets: list[Facet]
    cones: list[Cone]
    smooth: bool
    strata: list[Stratum]
    nonsmooth_certificate: tuple[int, ...] | None = None

    @property
    def rays(self) -> list[tuple[int, ...]]:
        return [f.normal for f in self.facets]


@dataclass(frozen=True)
class SuperpotentialTerm:
    name: str
    weight: tuple[int, ...]
    expression: ChartExpression
    coefficient: NovikovTerm
    # slot for higher-order constants; zero means leading order
    correction: NovikovSeries = field(default_factory=NovikovSeries.zero)

    def corrected_expression(self) -> ChartExpression:
        return self.expression * (NovikovSeries.one() + self.correction)


def chart_weight(expr: ChartExpression, key, chart_alphas: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Toric weight of one term of ``expr`` in the chart of ``chart_alphas``."""
    m, p = expr.split(key)
    return tuple(-x for x in m) + tuple(k - dot(a, m) for k, a in zip(p, chart_alphas))


def ray_generator(chart_alphas: Sequence[Sequence[int]], which: int = 0) -> tuple[int, ...]:
    """Ray ``(-alpha, e_which)`` of the divisor attached to one hypersurface."""
    alpha = chart_alphas[which]
    d = len(chart_alphas)
    return tuple(-x for x in alpha) + tuple(int(i == which) for i in range(d))


def glue_step(expr: ChartExpression, source, target, target_label) -> ChartExpression:
    """Substitute ``v_src,i = prod_j v0_j^(target_j,i - source_j,i) v_tgt,i``.

    ``source`` and ``target`` are lists of ``d`` exponent vectors (one per
    hypersurface); ``v0`` coordinates are shared by all charts.
    """
    n, d = expr.n, expr.d
    images = []
    for i in range(n):
        shift = tuple(t[i] - s[i] for s, t in zip(source, target))
        key = tuple(int(j == i) for j in range(n))
        images.append(ChartExpression.term(n, key, shift, 1, target_label, d))
    for j in range(d):
        images.append(ChartExpression.v0(n, target_label, j, d))
    out = expr.substitute(images)
    return out.with_cutoff(expr.cutoff) if expr.cutoff is not None else out


class Mirror:
    """Everything derived from ``(A, rho)`` and the ambient toric data."""

    def __init__(self, w: WeightedPointSet, amb: AmbientToricData | None = None, complex: TropicalComplex | None = None):
        self.w = w
        self.amb = amb if amb is not None else AmbientToricData()
        self.amb.validate(w)
        if complex is None:
            complex = build_tropical_complex(w, lower_hull_subdivision(w))
        self.complex = complex
        self.subdivision = complex.subdivision
        self.labels = sorted(self.subdivision.a_red, key=lambda i: w.alphas[i])
        self._adj = self.subdivision.edge_graph()
        self.data = self._build_data()

    # toric data
    def _build_data(self) -> MirrorData:
        w, s = self.w, self.subdivision
        comp = {c.label: c for c in self.complex.components}
        facets = [
            Facet(a, w.alphas[a], tuple(-x for x in w.alphas[a]) + (1,), w.rhos[a], comp[a].bounded)
            for a in self.labels
        ]
        cones = []
        for cell in s.cells:
            gens = tuple(tuple(-x for x in w.alphas[a]) + (1,) for a in cell.vertices)
            simplicial = len(gens) == s.affine_dim + 1
            index = lattice_index(gens) if simplicial else None
            cones.append(Cone(cell.vertices, gens, index, simplicial and index == 1))
        cones.sort(key=lambda c: c.generators)
        smooth = all(c.smooth for c in cones)
        maximal, cert = is_maximal(s)
        assert smooth == maximal, "smoothness of the fan must match maximality"
        strata = []
        cells1 = {c.dual: c for c in self.complex.cells.get(w.n - 1, [])}
        for e in s.edges():
            a, b = sorted(e.vertices, key=lambda i: w.alphas[i])
            strata.append(Stratum((a, b), cells1[e.vertices].bounded))
        strata.sort(key=lambda st: (w.alphas[st.labels[0]], w.alphas[st.labels[1]]))
        return MirrorData(w.n, facets, cones, smooth, strata, cert)

    def chart_name(self, label: int) -> tuple[int, ...]:
        return self.w.alphas[label]

    def label_of(self, chart) -> int:
        return self.w.index(chart)

    # chart expressions
    def monomial(self, label: int, m: Sequence[int], v0pow: int = 0, coeff=1) -> ChartExpression:
        return ChartExpression.term(self.w.n, m, v0pow, coeff, self.chart_name(label))

    def v0(self, label: int | None = None) -> ChartExpression:
        label = self.labels[0] if label is None else label
        return ChartExpression.v0(self.w.n, self.chart_name(label))

    def path(self, source: int, target: int) -> list[int]:
        """Shortest path of subdivision edges between two vertices."""
        prev = {source: None}
        queue = deque([source])
        while queue:
            cur = queue.popleft()
            if cur == target:
                break
            for nxt in self._adj[cur]:
                if nxt not in prev:
                    prev[nxt] = cur
                    queue.append(nxt)
        if target not in prev:
            raise ValueError("charts are not connected by subdivision edges")
        out = [target]
        while out[-1] != source:
            out.append(prev[out[-1]])
        return out[::-1]

    def glue_edge(self, expr: ChartExpression, source: int, target: int) -> ChartExpression:
        if expr.chart != self.chart_name(source):
            raise ValueError(f"expression lives in chart {expr.chart}, not {self.chart_name(source)}")
        if target != source and target not in self._adj[source]:
            raise ValueError("charts are not adjacent")
        return glue_step(
            expr, [self.w.alphas[source]], [self.w.alphas[target]], self.chart_name(target)
        )

    def glue(self, expr: ChartExpression, source: int, target: int, regular: bool = False) -> ChartExpression:
        """Rewrite ``expr`` from the chart of ``source`` into that of ``target``."""
        if expr.chart != self.chart_name(source):
            raise ValueError(f"expression lives in chart {expr.chart}, not {self.chart_name(source)}")
        out = expr
        steps = self.path(source, target)
        for a, b in zip(steps, steps[1:]):
            out = self.glue_edge(out, a, b)
        if regular and not out.is_regular():
            raise NotRegular(f"image in chart {self.chart_name(target)} has a negative power of v0")
        return out

    def weight(self, expr: ChartExpression) -> tuple[int, ...]:
        """Toric weight of a monomial expression."""
        if not expr.is_monomial():
            raise ValueError("only monomials have a single weight")
        (key, _), = expr.items()
        return chart_weight(expr, key, [expr.chart])

    # superpotential
    def minimizer(self, i: int) -> int:
        """Vertex minimizing ``<sigma_i, alpha>`` (lexicographically first on ties)."""
        sigma = self.amb.rays[i]
        best = min(dot(sigma, self.w.alphas[a]) for a in self.labels)
        ties = [a for a in self.labels if dot(sigma, self.w.alphas[a]) == best]
        weights = {self.weight(self._w_at(i, a)) for a in ties}
        assert len(weights) == 1, "minimizer choice changed the weight"
        return ties[0]

    def _w_at(self, i: int, label: int) -> ChartExpression:
        coeff = NovikovSeries.monomial(1, self.amb.varpi[i])
        return self.monomial(label, self.amb.rays[i], 0, coeff)

    def w_term(self, i: int) -> SuperpotentialTerm:
        a = self.minimizer(i)
        expr = self._w_at(i, a)
        weight = self.weight(expr)
        expected = tuple(-x for x in self.amb.rays[i]) + (self.amb.lam[i],)
        assert weight == expected, (weight, expected)
        return SuperpotentialTerm(
            f"w{i + 1}", weight, expr, NovikovTerm(Fraction(1), self.amb.varpi[i])
        )

    def w0_expression(self, label: int | None = None) -> ChartExpression:
        eps = self.amb.epsilon
        v0 = self.v0(label)
        return v0.scale_T(eps) - v0.constant(NovikovSeries.monomial(1, eps))

    def w0_term(self) -> SuperpotentialTerm:
        return SuperpotentialTerm(
            "w0", (0,) * self.w.n + (1,), self.w0_expression(), NovikovTerm(Fraction(1), self.amb.epsilon)
        )

    def v0_term(self) -> SuperpotentialTerm:
        return SuperpotentialTerm(
            "v0", (0,) * self.w.n + (1,), -self.v0(), NovikovTerm(Fraction(-1), Fraction(0))
        )

    def W0(self) -> list[SuperpotentialTerm]:
        return [self.w0_term()] + [self.w_term(i) for i in range(len(self.amb.rays))]

    def W0H(self) -> list[SuperpotentialTerm]:
        return [self.v0_term()] + [self.w_term(i) for i in range(len(self.amb.rays))]

    def express_w_in_chart(self, i: int, label: int) -> ChartExpression:
        a = self.minimizer(i)
        return self.glue(self._w_at(i, a), a, label, regular=True)

    def total(self, terms: list[SuperpotentialTerm], label: int) -> ChartExpression:
        """Sum of the terms written in one chart."""
        out = ChartExpression(self.w.n, chart=self.chart_name(label))
        for t in terms:
            src = self.label_of(t.expression.chart)
            out = out + self.glue(t.corrected_expression(), src, label)
        return out

    # vanishing orders
    def vanishing_order(self, term: SuperpotentialTerm | ChartExpression, label: int) -> int:
        """Order of vanishing along the divisor of ``label``: the minimum over
        the terms of the pairing of their weight with the ray ``(-alpha, 1)``."""
        expr = term.expression if isinstance(term, SuperpotentialTerm) else term
        ray = ray_generator([self.w.alphas[label]])
        return min(dot(chart_weight(expr, key, [expr.chart]), ray) for key, _ in expr.items())

    def ray_vanishing_order(self, term: SuperpotentialTerm | ChartExpression, label: int) -> int:
        """Vanishing order computed geometrically.

        For each monomial ``v^m v0^p`` a generic ray leaves the component of
        ``label`` in direction ``-m``; its lattice crossings with the tropical
        hypersurface, plus the power of ``v0`` the monomial has in the chart
        where the ray ends, give the order.
        """
        expr = term.expression if isinstance(term, SuperpotentialTerm) else term
        source = self.label_of(expr.chart)
        orders = []
        for m, (p,), _ in expr.chart_terms():
            count, end = self.ray_count(tuple(-x for x in m), label)
            orders.append(count + p + dot(sub(self.w.alphas[end], self.w.alphas[source]), m))
        return min(orders)

    def ray_count(self, direction: Sequence[int], label: int) -> tuple[int, int]:
        """Crossings of a generic ray from the component of ``label``; returns
        ``(count, terminal label)``."""
        comp = self.complex.component(label)
        if all(x == 0 for x in direction):
            return 0, label
        scale = max(sum(abs(x) for x in a) for a, _ in comp.inequalities) + 1
        for attempt in range(1, 50):
            delta = comp.margin / (2 * scale)
            base = Fraction(1, 2 * attempt + 1)
            start = [x + delta * base**k for k, x in enumerate(comp.witness, start=1)]
            walk = shoot_ray(self.w, start, direction)
            if walk is not None:
                return walk.count, walk.end
        raise RuntimeError("could not find a generic ray")

    def vanishing_table(self, terms: list[SuperpotentialTerm]) -> dict[str, dict[int, int]]:
        return {t.name: {a: self.vanishing_order(t, a) for a in self.labels} for t in terms}

    def singular_fiber_components(self) -> dict[int, list[str]]:
        """Divisor label -> names of the W0H terms vanishing on it."""
        terms = self.W0H()
        return {
            a: [t.name for t in terms if self.vanishing_order(t, a) >= 1] for a in self.labels
        }

    def fiber_components(self) -> list[int]:
        """Divisors contained in the zero fibre of W0H."""
        names = {t.name for t in self.W0H()}
        return [a for a, vanish in self.singular_fiber_components().items() if set(vanish) == names]

    # affine-space check
    def orthant_equivalence(self):
        """Unimodular map sending the mirror polyhedron to the orthant, if any.

        Returns ``(matrix, offsets)`` with rows the facet normals, so that
        ``(xi, eta) -> matrix @ (xi, eta) + offsets`` identifies the
        polyhedron with the nonnegative orthant.
        """
        facets = self.data.facets
        if len(facets) != self.w.n + 1:
            return None
        matrix = [f.normal for f in facets]
        if abs(det(matrix)) != 1:
            return None
        return matrix, [f.offset for f in facets]

    def to_orthant(self, expr: ChartExpression) -> LaurentPolynomial:
        """Rewrite a chart expression in the coordinates of the orthant chart."""
        eq = self.orthant_equivalence()
        if eq is None:
            raise ValueError("the mirror is not an affine space")
        matrix, _ = eq
        terms = []
        for key, coeff in expr.items():
            weight = chart_weight(expr, key, [expr.chart])
            terms.append((tuple(dot(weight, row) for row in matrix), coeff))
        return LaurentPolynomial(self.w.n + 1, terms, expr.cutoff)


def build_mirror(w: WeightedPointSet, amb: AmbientToricData | None = None) -> MirrorData:
    return Mirror(w, amb).data


def build_W0(w: WeightedPointSet, amb: AmbientToricData) -> list[SuperpotentialTerm]:
    return Mirror(w, amb).W0()


def build_W0H(w: WeightedPointSet, amb: AmbientToricData) -> list[SuperpotentialTerm]:
    return Mirror(w, amb).W0H()


def vanishing_order(mirror: Mirror, term: SuperpotentialTerm, alpha: Sequence[int]) -> int:
    return mirror.vanishing_order(term, mirror.w.index(alpha))


def singular_fiber_components(w: WeightedPointSet, amb: AmbientToricData) -> dict[int, list[str]]:
    return Mirror(w, amb).singular_fiber_components()

