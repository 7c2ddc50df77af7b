"""Complete intersections: several tropical hypersurfaces in the same R^n.

Charts of the mirror are labelled by tuples of weights that dominate
simultaneously on a full-dimensional region.  A monomial ``v^m prod v0_i^p_i``
in the chart of ``(alpha^1, ..., alpha^d)`` has toric weight
``(-m, p_1 - <alpha^1, m>, ..., p_d - <alpha^d, m>)``.

With ``d = 1`` chart labels, term names and every reported field coincide
with the hypersurface pipeline.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algebra import ChartExpression, NovikovSeries, NovikovTerm, rational
from .errors import MinimizerNotRealized, ValidationError
from .linalg import dot, lattice_index, rank, sub
from .lp import interior_point, maximize
from .mirror import (
    AmbientToricData,
    Cone,
    Facet,
    MirrorData,
    Stratum,
    SuperpotentialTerm,
    chart_weight,
    glue_step,
)
from .tropical import (
    RegularSubdivision,
    WeightedPointSet,
    component_inequalities,
    lower_hull_subdivision,
)


class TransversalityWarning(UserWarning):
    pass


class MinimizerWarning(UserWarning):
    pass


@dataclass(frozen=True)
class CIDatum:
    """``d`` point sets in the same dimension plus shared ambient rays.

    ``lams[i][j]`` is the support value of ray ``j`` for hypersurface ``i``
    and ``epsilons[i]`` the epsilon of hypersurface ``i``.
    """

    hypersurfaces: tuple[WeightedPointSet, ...]
    rays: tuple[tuple[int, ...], ...] = ()
    varpi: tuple[Fraction, ...] = ()
    lams: tuple[tuple[Fraction, ...], ...] = ()
    epsilons: tuple[Fraction, ...] = ()

    def __post_init__(self):
        d = len(self.hypersurfaces)
        if d == 0:
            raise ValidationError("at least one hypersurface is required")
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        varpi = tuple(rational(x) for x in self.varpi) or (Fraction(0),) * len(rays)
        lams = self.lams or tuple(
            tuple(-min(dot(r, a) for a in w.alphas) for r in rays) for w in self.hypersurfaces
        )
        epsilons = tuple(rational(e) for e in self.epsilons) or (Fraction(1),) * d
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "varpi", varpi)
        object.__setattr__(self, "lams", tuple(tuple(rational(x) for x in row) for row in lams))
        object.__setattr__(self, "epsilons", epsilons)
        if len({w.n for w in self.hypersurfaces}) != 1:
            raise ValidationError("all hypersurfaces must live in the same dimension")
        if len(self.lams) != d or len(self.epsilons) != d:
            raise ValidationError("need one lambda list and one epsilon per hypersurface")
        for i, w in enumerate(self.hypersurfaces):
            self.ambient(i).validate(w)

    @property
    def d(self) -> int:
        return len(self.hypersurfaces)

    @property
    def n(self) -> int:
        return self.hypersurfaces[0].n

    def ambient(self, i: int) -> AmbientToricData:
        return AmbientToricData(self.rays, self.varpi, self.lams[i], self.epsilons[i])


@dataclass(frozen=True)
class RealizedTuple:
    labels: tuple[int, ...]  # point index in each hypersurface
    alphas: tuple[tuple[int, ...], ...]
    inequalities: tuple[tuple[tuple[int, ...], Fraction], ...]
    witness: tuple[Fraction, ...]
    margin: Fraction


@dataclass
class RealizedTupleSet:
    tuples: list[RealizedTuple]

    def __len__(self):
        return len(self.tuples)

    def labels(self) -> list[tuple[int, ...]]:
        return [t.labels for t in self.tuples]


def realized_tuples(ci: CIDatum, subdivisions: Sequence[RegularSubdivision] | None = None) -> RealizedTupleSet:
    """Tuples whose dominance regions meet in a full-dimensional set (exact LP)."""
    subs = subdivisions or [lower_hull_subdivision(w) for w in ci.hypersurfaces]
    pools = [sorted(s.a_red, key=lambda a, w=w: w.alphas[a]) for s, w in zip(subs, ci.hypersurfaces)]
    out = []
    for labels in product(*pools):
        ineqs = tuple(
            ineq
            for w, a in zip(ci.hypersurfaces, labels)
            for ineq in component_inequalities(w, a)
        )
        found = interior_point(ineqs, dim=ci.n) if ineqs else (Fraction(1), (Fraction(0),) * ci.n)
        if found is not None and found[0] > 0:
            alphas = tuple(w.alphas[a] for w, a in zip(ci.hypersurfaces, labels))
            out.append(RealizedTuple(tuple(labels), alphas, ineqs, found[1], found[0]))
    return RealizedTupleSet(out)


def _face_tuple_system(hypersurfaces, faces):
    """Equalities and strict inequalities for ``argmax_i = points of faces[i]``.

    A face of ``None`` leaves hypersurface ``i`` unconstrained.
    """
    eqs, ineqs = [], []
    for w, face in zip(hypersurfaces, faces):
        if face is None:
            continue
        base = face.vertices[0]
        for v in face.vertices[1:]:
            eqs.append((sub(w.alphas[v], w.alphas[base]), -(w.rhos[v] - w.rhos[base])))
        inside = set(face.points)
        for g in range(len(w)):
            if g not in inside:
                ineqs.append((sub(w.alphas[base], w.alphas[g]), w.rhos[g] - w.rhos[base]))
    return eqs, ineqs


def _bounded(n: int, eqs, ineqs) -> bool:
    """Whether ``{a.x + b >= 0, equalities}`` is bounded (LP in each direction)."""
    A_ub = [[-Fraction(v) for v in a] for a, _ in ineqs]
    b_ub = [Fraction(b) for _, b in ineqs]
    A_eq = [list(a) for a, _ in eqs]
    b_eq = [-Fraction(b) for _, b in eqs]
    for k in range(n):
        for sign in (1, -1):
            c = [Fraction(sign * int(j == k)) for j in range(n)]
            if maximize(c, A_ub, b_ub, A_eq, b_eq).status == "unbounded":
                return False
    return True


class CIMirror:
    def __init__(self, ci: CIDatum, strict: bool = False):
        self.ci = ci
        self.strict = strict
        self.subdivisions = [lower_hull_subdivision(w) for w in ci.hypersurfaces]
        self.realized = realized_tuples(ci, self.subdivisions)
        self.labels = self.realized.labels()
        self._by_labels = {t.labels: t for t in self.realized.tuples}
        self._adj = self._adjacency()
        self.transversal = self._check_transversality()
        self.data = self._build_data()

    # naming
    def chart_name(self, labels: Sequence[int]):
        alphas = tuple(w.alphas[a] for w, a in zip(self.ci.hypersurfaces, labels))
        return alphas[0] if self.ci.d == 1 else alphas

    def _alphas(self, labels):
        return [w.alphas[a] for w, a in zip(self.ci.hypersurfaces, labels)]

    def _suffix(self, i: int) -> str:
        return "" if self.ci.d == 1 else f"_{i + 1}"

    # adjacency of realized tuples
    def _adjacency(self) -> dict[tuple, list[tuple]]:
        adj: dict[tuple, list[tuple]] = {t: [] for t in self.labels}
        hs = self.ci.hypersurfaces
        edges = [s.edge_graph() for s in self.subdivisions]
        for s, t in ((s, t) for s in self.labels for t in self.labels if s < t):
            differ = [i for i in range(self.ci.d) if s[i] != t[i]]
            # a shared wall needs every differing pair to be an edge of its subdivision
            if any(t[i] not in edges[i][s[i]] for i in differ):
                continue
            eqs = [
                (sub(hs[i].alphas[s[i]], hs[i].alphas[t[i]]), hs[i].rhos[t[i]] - hs[i].rhos[s[i]])
                for i in differ
            ]
            if rank([a for a, _ in eqs]) != 1:
                continue
            ineqs = []
            for labels in (s, t):
                for i, (w, a) in enumerate(zip(hs, labels)):
                    other = t[i] if labels is s else s[i]
                    for g in range(len(w)):
                        if g != a and g != other:
                            ineqs.append((sub(w.alphas[a], w.alphas[g]), w.rhos[g] - w.rhos[a]))
            found = interior_point(ineqs, eqs, dim=self.ci.n)
            if found is not None and found[0] > 0:
                adj[s].append(t)
                adj[t].append(s)
        return adj

    def adjacency(self) -> dict[tuple, list[tuple]]:
        return {k: list(v) for k, v in self._adj.items()}

    def triangles(self) -> list[tuple[tuple, tuple, tuple]]:
        out = []
        for a in self.labels:
            for b in self._adj[a]:
                if b <= a:
                    continue
                for c in self._adj[b]:
                    if c > b and c in self._adj[a]:
                        out.append((a, b, c))
        return out

    def _check_transversality(self) -> bool:
        """Heuristic: no codimension-one cells of two different complexes overlap."""
        hs, subs = self.ci.hypersurfaces, self.subdivisions
        n = self.ci.n
        for i in range(self.ci.d):
            for j in range(i + 1, self.ci.d):
                for fi in subs[i].faces.get(1, []):
                    for fj in subs[j].faces.get(1, []):
                        if n != 1:
                            ni = sub(hs[i].alphas[fi.vertices[1]], hs[i].alphas[fi.vertices[0]])
                            nj = sub(hs[j].alphas[fj.vertices[1]], hs[j].alphas[fj.vertices[0]])
                            if rank([ni, nj]) != 1:
                                continue
                        eqs, ineqs = _face_tuple_system((hs[i], hs[j]), (fi, fj))
                        if rank([a for a, _ in eqs]) != 1:
                            continue
                        found = interior_point(ineqs, eqs, dim=n)
                        if found is not None and found[0] > 0:
                            warnings.warn(
                                f"hypersurfaces {i + 1} and {j + 1} share a codimension-one cell",
                                TransversalityWarning,
                                stacklevel=3,
                            )
                            return False
        return True

    # toric data
    def _build_data(self) -> MirrorData:
        ci, hs = self.ci, self.ci.hypersurfaces
        n, d = ci.n, ci.d
        facets = []
        for i, (w, s) in enumerate(zip(hs, self.subdivisions)):
            for a in sorted(s.a_red, key=lambda a: w.alphas[a]):
                normal = tuple(-x for x in w.alphas[a]) + tuple(int(k == i) for k in range(d))
                ineqs = component_inequalities(w, a)
                compact = d == 1 and _bounded(n, [], ineqs)
                facets.append(Facet(a, w.alphas[a], normal, w.rhos[a], compact))
        face_lists = [
            [None] + [f for dim in sorted(s.faces) for f in s.faces[dim]] for s in self.subdivisions
        ]
        realized = []
        for faces in product(*face_lists):
            if all(f is None for f in faces):
                continue
            eqs, ineqs = _face_tuple_system(hs, faces)
            found = interior_point(ineqs, eqs, dim=n) if (ineqs or eqs) else (Fraction(1), ())
            if found is not None and found[0] > 0:
                realized.append((faces, eqs, ineqs))

        def gens_of(faces):
            return tuple(
                tuple(-x for x in w.alphas[v]) + tuple(int(k == i) for k in range(d))
                for i, (w, f) in enumerate(zip(hs, faces))
                if f is not None
                for v in f.vertices
            )

        def points(f):
            return set() if f is None else set(f.points)

        def contains(big, small):
            return big != small and all(points(s) <= points(b) for b, s in zip(big, small))

        cones = []
        for faces, _, _ in realized:
            if any(contains(other, faces) for other, _, _ in realized):
                continue
            gens = gens_of(faces)
            simplicial = rank(gens) == len(gens)
            index = lattice_index(gens) if simplicial else None
            cell = tuple(v for f in faces if f is not None for v in f.vertices)
            cones.append(Cone(cell, gens, index, simplicial and index == 1))
        cones.sort(key=lambda c: c.generators)
        strata = []
        for faces, eqs, ineqs in realized:
            gens = gens_of(faces)
            if len(gens) != 2:
                continue
            bounded = all(f is not None for f in faces) and _bounded(n, eqs, ineqs)
            if d == 1:
                w = hs[0]
                pair = tuple(sorted(faces[0].vertices, key=lambda v: w.alphas[v]))
            else:
                # (hypersurface, point) pairs
                pair = tuple((i, v) for i, f in enumerate(faces) if f is not None for v in f.vertices)
            strata.append(Stratum(pair, bounded))
        if d == 1:
            w = hs[0]
            strata.sort(key=lambda st: (w.alphas[st.labels[0]], w.alphas[st.labels[1]]))
        else:
            strata.sort(key=lambda st: st.labels)
        smooth = all(c.smooth for c in cones)
        cert = next((c.cell for c in cones if not c.smooth), None)
        return MirrorData(n, facets, cones, smooth, strata, cert)

    # chart expressions
    def monomial(self, labels, m, v0pows=None, coeff=1) -> ChartExpression:
        v0pows = tuple(v0pows) if v0pows is not None else (0,) * self.ci.d
        return ChartExpression.term(self.ci.n, m, v0pows, coeff, self.chart_name(labels), self.ci.d)

    def path(self, source, target) -> list[tuple]:
        prev = {source: None}
        queue = deque([source])
        while queue:
            cur = queue.popleft()
            for nxt in self._adj[cur]:
                if nxt not in prev:
                    prev[nxt] = cur
                    queue.append(nxt)
        if target not in prev:
            raise ValueError("realized tuples are not connected through shared walls")
        out = [target]
        while out[-1] != source:
            out.append(prev[out[-1]])
        return out[::-1]

    def glue_edge(self, expr: ChartExpression, source, target) -> ChartExpression:
        return glue_step(expr, self._alphas(source), self._alphas(target), self.chart_name(target))

    def glue(self, expr: ChartExpression, source, target) -> ChartExpression:
        steps = self.path(tuple(source), tuple(target))
        out = expr
        for a, b in zip(steps, steps[1:]):
            out = self.glue_edge(out, a, b)
        return out

    def weight(self, expr: ChartExpression, labels) -> tuple[int, ...]:
        (key, _), = expr.items()
        return chart_weight(expr, key, self._alphas(labels))

    # superpotential
    def minimizer(self, j: int):
        """Realized chart for ``w_j`` and the extra ``v0`` powers it needs there."""
        sigma = self.ci.rays[j]
        hs = self.ci.hypersurfaces
        best = [
            min(dot(sigma, w.alphas[a]) for a in s.a_red) for w, s in zip(hs, self.subdivisions)
        ]
        for labels in self.labels:
            if all(dot(sigma, w.alphas[a]) == b for w, a, b in zip(hs, labels, best)):
                return labels, (0,) * self.ci.d
        msg = f"no realized chart minimizes every pairing with ray {sigma}"
        if self.strict:
            raise MinimizerNotRealized(msg)
        warnings.warn(msg, MinimizerWarning, stacklevel=2)
        labels = min(
            self.labels,
            key=lambda t: (sum(dot(sigma, w.alphas[a]) for w, a in zip(hs, t)), t),
        )
        extra = tuple(dot(sigma, w.alphas[a]) - b for w, a, b in zip(hs, labels, best))
        return labels, extra

    def _w_expression(self, j: int):
        labels, extra = self.minimizer(j)
        coeff = NovikovSeries.monomial(1, self.ci.varpi[j])
        return labels, self.monomial(labels, self.ci.rays[j], extra, coeff)

    def w_term(self, j: int) -> SuperpotentialTerm:
        labels, expr = self._w_expression(j)
        weight = self.weight(expr, labels)
        expected = tuple(-x for x in self.ci.rays[j]) + tuple(lam[j] for lam in self.ci.lams)
        assert weight == expected, (weight, expected)
        return SuperpotentialTerm(f"w{j + 1}", weight, expr, NovikovTerm(Fraction(1), self.ci.varpi[j]))

    def v0(self, i: int) -> ChartExpression:
        return ChartExpression.v0(self.ci.n, self.chart_name(self.labels[0]), i, self.ci.d)

    def w0_term(self, i: int) -> SuperpotentialTerm:
        eps = self.ci.epsilons[i]
        v0 = self.v0(i)
        expr = v0.scale_T(eps) - v0.constant(NovikovSeries.monomial(1, eps))
        weight = (0,) * self.ci.n + tuple(int(k == i) for k in range(self.ci.d))
        return SuperpotentialTerm(f"w0{self._suffix(i)}", weight, expr, NovikovTerm(Fraction(1), eps))

    def v0_term(self, i: int) -> SuperpotentialTerm:
        weight = (0,) * self.ci.n + tuple(int(k == i) for k in range(self.ci.d))
        return SuperpotentialTerm(
            f"v0{self._suffix(i)}", weight, -self.v0(i), NovikovTerm(Fraction(-1), Fraction(0))
        )

    def W0(self) -> list[SuperpotentialTerm]:
        return [self.w0_term(i) for i in range(self.ci.d)] + [
            self.w_term(j) for j in range(len(self.ci.rays))
        ]

    def W0H(self) -> list[SuperpotentialTerm]:
        return [self.v0_term(i) for i in range(self.ci.d)] + [
            self.w_term(j) for j in range(len(self.ci.rays))
        ]

    def express_w_in_chart(self, j: int, labels) -> ChartExpression:
        source, expr = self._w_expression(j)
        return self.glue(expr, source, tuple(labels))

    def vanishing_order(self, term: SuperpotentialTerm, i: int, label: int) -> int:
        """Order along the divisor of point ``label`` of hypersurface ``i``."""
        expr = term.expression
        chart = next(t for t in self.labels if self.chart_name(t) == expr.chart)
        alphas = self._alphas(chart)
        alpha = self.ci.hypersurfaces[i].alphas[label]
        ray = tuple(-x for x in alpha) + tuple(int(k == i) for k in range(self.ci.d))
        return min(dot(chart_weight(expr, key, alphas), ray) for key, _ in expr.items())


def build_ci_mirror(ci: CIDatum, strict: bool = False) -> CIMirror:
    return CIMirror(ci, strict)
