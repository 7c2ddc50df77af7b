"""Regular subdivisions, tropical hypersurfaces and their complements.

The input is a finite set of lattice points ``alpha`` with rational heights
``rho``.  The tropical polynomial is ``phi(xi) = max <alpha, xi> - rho(alpha)``;
its tie locus is the tropical hypersurface, dual to the subdivision of the
convex hull induced by the lower hull of the lifted points.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

from .algebra import rational
from .errors import DegenerateInput, WrongDimension
from .linalg import affine_rank, dot, lattice_index, nullspace, primitive, row_reduce, solve, sub
from .lp import interior_point


class DegenerateInputWarning(UserWarning):
    pass


@dataclass(frozen=True)
class WeightedPointSet:
    """Lattice points with heights; ``coeffs`` are carried along but unused."""

    n: int
    alphas: tuple[tuple[int, ...], ...]
    rhos: tuple[Fraction, ...]
    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        alphas = tuple(tuple(int(x) for x in a) for a in self.alphas)
        rhos = tuple(rational(r) for r in self.rhos)
        coeffs = tuple(rational(c) for c in self.coeffs) or (Fraction(1),) * len(alphas)
        if len(rhos) != len(alphas) or len(coeffs) != len(alphas):
            raise ValueError("need one height and one coefficient per point")
        if not alphas:
            raise ValueError("at least one point is required")
        for a in alphas:
            if len(a) != self.n:
                raise ValueError(f"point {a} is not {self.n}-dimensional")
        if len(set(alphas)) != len(alphas):
            dup = next(a for a in alphas if alphas.count(a) > 1)
            raise ValueError(f"duplicate point {dup}")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "rhos", rhos)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_pairs(cls, pairs, n: int | None = None) -> "WeightedPointSet":
        pairs = list(pairs)
        if n is None:
            n = len(pairs[0][0])
        return cls(n, tuple(a for a, _ in pairs), tuple(r for _, r in pairs))

    @property
    def points(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return list(zip(self.alphas, self.rhos))

    def __len__(self):
        return len(self.alphas)

    def index(self, alpha: Sequence[int]) -> int:
        return self.alphas.index(tuple(alpha))

    def form(self, i: int, xi: Sequence) -> Fraction:
        """The affine form ``<alpha_i, xi> - rho_i``."""
        return dot(self.alphas[i], xi) - self.rhos[i]


def tropical_value(w: WeightedPointSet, xi: Sequence) -> tuple[Fraction, frozenset[int]]:
    if len(xi) != w.n:
        raise WrongDimension(f"expected a point of dimension {w.n}")
    xi = [rational(x) for x in xi]
    values = [w.form(i, xi) for i in range(len(w))]
    best = max(values)
    return best, frozenset(i for i, v in enumerate(values) if v == best)


@dataclass(frozen=True)
class Cell:
    """A maximal cell: the points where the functional ``<slope, x> + offset`` meets rho."""

    points: tuple[int, ...]
    vertices: tuple[int, ...]
    slope: tuple[Fraction, ...]
    offset: Fraction

    def value(self, alpha: Sequence[int]) -> Fraction:
        return dot(self.slope, alpha) + self.offset


@dataclass(frozen=True)
class Face:
    points: tuple[int, ...]
    vertices: tuple[int, ...]
    dim: int


@dataclass
class RegularSubdivision:
    w: WeightedPointSet
    cells: list[Cell]
    faces: dict[int, list[Face]]
    a_red: tuple[int, ...]
    affine_dim: int
    degenerate: bool = False
    # (k-1)-faces lying in a single maximal cell, i.e. on the boundary of the hull
    boundary_facets: list[Face] = field(default_factory=list)

    def edges(self) -> list[Face]:
        return self.faces.get(1, [])

    def cells_containing(self, face: Face) -> list[int]:
        pts = set(face.points)
        return [i for i, c in enumerate(self.cells) if pts <= set(c.points)]

    def on_boundary(self, face: Face) -> bool:
        if self.affine_dim < self.w.n:
            return True
        pts = set(face.points)
        return any(pts <= set(f.points) for f in self.boundary_facets)

    def edge_graph(self) -> dict[int, list[int]]:
        """Adjacency of ``a_red`` along edges of the subdivision."""
        adj: dict[int, list[int]] = {a: [] for a in self.a_red}
        for e in self.edges():
            a, b = e.vertices
            adj[a].append(b)
            adj[b].append(a)
        return {k: sorted(v) for k, v in adj.items()}

    def triangles(self) -> list[tuple[int, int, int]]:
        """Triples of ``a_red`` pairwise joined by subdivision edges."""
        adj = {k: set(v) for k, v in self.edge_graph().items()}
        out = []
        for a in self.a_red:
            for b in adj[a]:
                if b <= a:
                    continue
                for c in adj[a] & adj[b]:
                    if c > b:
                        out.append((a, b, c))
        return out


def _coordinate_chart(alphas) -> list[int]:
    """Coordinates onto which projection is injective on the affine hull."""
    base = alphas[0]
    diffs = [sub(a, base) for a in alphas[1:]]
    if not diffs:
        return []
    return row_reduce(diffs)[1]


def _cell_faces(proj: dict[int, tuple], pts: tuple[int, ...], k: int) -> set[frozenset[int]]:
    """All nonempty faces of the polytope spanned by the projected points."""
    if k == 0:
        return {frozenset(pts)}
    facets: set[frozenset[int]] = set()
    for subset in combinations(pts, k):
        base = proj[subset[0]]
        rows = [sub(proj[j], base) for j in subset[1:]]
        normal = nullspace(rows, k) if rows else [[Fraction(int(i == 0)) for i in range(k)]]
        if len(normal) != 1:
            continue
        u = normal[0]
        signs = {j: dot(u, sub(proj[j], base)) for j in pts}
        if all(s >= 0 for s in signs.values()) or all(s <= 0 for s in signs.values()):
            facets.add(frozenset(j for j, s in signs.items() if s == 0))
    faces = {frozenset(pts)} | facets
    frontier = set(facets)
    while frontier:
        new = set()
        for f in frontier:
            for g in facets:
                h = f & g
                if h and h not in faces:
                    new.add(h)
        faces |= new
        frontier = new
    return faces


def lower_hull_subdivision(w: WeightedPointSet, strict: bool = False) -> RegularSubdivision:
    """Regular subdivision induced by the heights (exact enumeration).

    Every affinely independent subset of ``k + 1`` points (``k`` the affine
    dimension of the point set) spans a candidate lower facet; it is kept
    when no point lies strictly below its functional.  Point sets that are
    not full-dimensional are handled inside their affine hull, flagged
    ``degenerate`` and reported with a warning (or ``DegenerateInput`` when
    ``strict``).
    """
    N = len(w)
    chart = _coordinate_chart(w.alphas)
    k = len(chart)
    degenerate = k < w.n
    if degenerate:
        msg = f"points span an affine space of dimension {k} < {w.n}"
        if strict:
            raise DegenerateInput(msg)
        warnings.warn(msg, DegenerateInputWarning, stacklevel=2)
    proj = {i: tuple(w.alphas[i][c] for c in chart) for i in range(N)}

    found: dict[frozenset[int], tuple[tuple[Fraction, ...], Fraction]] = {}
    for subset in combinations(range(N), k + 1):
        if any(set(subset) <= key for key in found):
            continue
        matrix = [list(proj[j]) + [1] for j in subset]
        sol = solve(matrix, [w.rhos[j] for j in subset])
        if sol is None:
            continue
        s, c = sol[:k], sol[k]
        tight = []
        ok = True
        for i in range(N):
            gap = w.rhos[i] - dot(s, proj[i]) - c
            if gap < 0:
                ok = False
                break
            if gap == 0:
                tight.append(i)
        if ok:
            found[frozenset(tight)] = (tuple(s), c)

    faces_by_pts: dict[frozenset[int], int] = {}
    cells: list[Cell] = []
    count: dict[frozenset[int], int] = defaultdict(int)
    for pts, (s, c) in sorted(found.items(), key=lambda kv: sorted(kv[0])):
        sorted_pts = tuple(sorted(pts))
        cell_faces = _cell_faces(proj, sorted_pts, k)
        for f in cell_faces:
            if f not in faces_by_pts:
                faces_by_pts[f] = affine_rank([proj[j] for j in f])
            if faces_by_pts[f] == k - 1:
                count[f] += 1
        slope = [Fraction(0)] * w.n
        for coord, val in zip(chart, s):
            slope[coord] = val
        cells.append(Cell(sorted_pts, (), tuple(slope), c))

    vertex_set = sorted(next(iter(f)) for f, d in faces_by_pts.items() if d == 0)
    vset = set(vertex_set)
    cells = [
        Cell(c.points, tuple(j for j in c.points if j in vset), c.slope, c.offset) for c in cells
    ]
    faces: dict[int, list[Face]] = defaultdict(list)
    for f, d in faces_by_pts.items():
        pts = tuple(sorted(f))
        faces[d].append(Face(pts, tuple(j for j in pts if j in vset), d))
    for d in faces:
        faces[d].sort(key=lambda f: f.points)
    boundary = [f for f in faces.get(k - 1, []) if count[frozenset(f.points)] == 1] if k > 0 else []
    return RegularSubdivision(
        w, cells, dict(faces), tuple(vertex_set), k, degenerate, boundary
    )


def normalized_volume(w: WeightedPointSet, points: Sequence[int], k: int) -> Fraction | None:
    """Normalized lattice volume of a simplex in its affine hull, or None."""
    if len(points) != k + 1:
        return None
    base = w.alphas[points[0]]
    rows = [sub(w.alphas[j], base) for j in points[1:]]
    return Fraction(lattice_index(rows)) if rows else Fraction(1)


def is_maximal(s: RegularSubdivision) -> tuple[bool, tuple[int, ...] | None]:
    """True iff every maximal cell is a unimodular simplex; else a failing cell."""
    k = s.affine_dim
    for cell in s.cells:
        vol = normalized_volume(s.w, cell.points, k)
        if vol != 1:
            return False, cell.points
    return True, None


@dataclass(frozen=True)
class TropicalCell:
    """A cell of the tropical hypersurface, dual to a face of the subdivision."""

    dim: int
    dual: tuple[int, ...]  # vertices of the dual face
    equations: tuple[tuple[tuple[int, ...], Fraction], ...]  # <normal, xi> + offset = 0
    bounded: bool


@dataclass(frozen=True)
class ComplementComponent:
    """Region ``{xi : <a, xi> + b >= 0}`` where ``label`` attains the max."""

    label: int
    inequalities: tuple[tuple[tuple[int, ...], Fraction], ...]
    witness: tuple[Fraction, ...]
    margin: Fraction
    bounded: bool


@dataclass
class TropicalComplex:
    w: WeightedPointSet
    subdivision: RegularSubdivision
    cells: dict[int, list[TropicalCell]]
    components: list[ComplementComponent]

    def component(self, label: int) -> ComplementComponent:
        return next(c for c in self.components if c.label == label)


def component_inequalities(w: WeightedPointSet, label: int):
    a, ra = w.alphas[label], w.rhos[label]
    return tuple(
        (sub(a, w.alphas[j]), w.rhos[j] - ra) for j in range(len(w)) if j != label
    )


def build_tropical_complex(w: WeightedPointSet, s: RegularSubdivision | None = None) -> TropicalComplex:
    if s is None:
        s = lower_hull_subdivision(w)
    cells: dict[int, list[TropicalCell]] = defaultdict(list)
    for d, faces in s.faces.items():
        for f in faces:
            if len(f.vertices) < 2:
                continue
            v0 = f.vertices[0]
            eqs = tuple(
                (sub(w.alphas[v], w.alphas[v0]), -(w.rhos[v] - w.rhos[v0])) for v in f.vertices[1:]
            )
            bounded = s.affine_dim == w.n and not s.on_boundary(f)
            cells[w.n - d].append(TropicalCell(w.n - d, f.vertices, eqs, bounded))
    components = []
    for label in s.a_red:
        ineqs = component_inequalities(w, label)
        found = interior_point(ineqs, dim=w.n) if ineqs else (Fraction(1), (Fraction(0),) * w.n)
        if found is None or found[0] <= 0:
            raise AssertionError(f"component of point {w.alphas[label]} is not full-dimensional")
        bounded = s.affine_dim == w.n and not s.on_boundary(Face((label,), (label,), 0))
        components.append(ComplementComponent(label, ineqs, found[1], found[0], bounded))
    return TropicalComplex(w, s, dict(cells), components)


@dataclass(frozen=True)
class CurveEdge:
    """Edge of a plane tropical curve.

    ``tail``/``head`` are vertex indices.  A ray has ``head = None`` and
    leaves ``tail`` along ``direction``; a full line has both ends ``None``
    and passes through ``anchor``.
    """

    tail: int | None
    head: int | None
    direction: tuple[int, int] | None
    dual: tuple[int, int]
    weight: int
    anchor: tuple[Fraction, Fraction] | None = None

    @property
    def bounded(self) -> bool:
        return self.head is not None


@dataclass
class TropicalCurveGraph:
    vertices: list[tuple[Fraction, ...]]
    edges: list[CurveEdge]
    vertex_duals: list[tuple[int, ...]]

    @property
    def bounded_edges(self) -> list[CurveEdge]:
        return [e for e in self.edges if e.bounded]

    @property
    def rays(self) -> list[CurveEdge]:
        return [e for e in self.edges if e.tail is not None and e.head is None]

    def valence(self, v: int) -> int:
        return sum((e.tail == v) + (e.head == v) for e in self.edges)

    def genus(self) -> int:
        """First Betti number of the graph."""
        parent = list(range(len(self.vertices)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.bounded_edges:
            parent[find(e.tail)] = find(e.head)
        comps = len({find(v) for v in range(len(self.vertices))})
        return len(self.bounded_edges) - len(self.vertices) + comps


def curve_graph(tc: TropicalComplex) -> TropicalCurveGraph:
    w, s = tc.w, tc.subdivision
    if w.n != 2:
        raise WrongDimension("curve graphs are only defined in the plane")
    vertices, duals = [], []
    if s.affine_dim == 2:
        for cell in s.cells:
            vertices.append(cell.slope)
            duals.append(cell.vertices)
    edges = []
    for face in s.edges():
        a, b = face.vertices
        delta = sub(w.alphas[b], w.alphas[a])
        g = primitive(delta)
        weight = gcd(*delta)
        perp = (-g[1], g[0])
        owners = s.cells_containing(face) if s.affine_dim == 2 else []
        if len(owners) == 2:
            edges.append(CurveEdge(owners[0], owners[1], None, (a, b), weight))
            continue
        if len(owners) == 1:
            if any(dot(perp, sub(alpha, w.alphas[a])) > 0 for alpha in w.alphas):
                perp = (-perp[0], -perp[1])
            edges.append(CurveEdge(owners[0], None, perp, (a, b), weight))
            continue
        t = (w.rhos[b] - w.rhos[a]) / dot(delta, delta)
        anchor = (t * delta[0], t * delta[1])
        edges.append(CurveEdge(None, None, perp, (a, b), weight, anchor))
    return TropicalCurveGraph(vertices, edges, duals)


@dataclass(frozen=True)
class RayWalk:
    crossings: tuple[tuple[int, int, Fraction], ...]  # (from, to, parameter)
    count: int
    end: int


def shoot_ray(w: WeightedPointSet, start: Sequence, direction: Sequence) -> RayWalk | None:
    """Follow ``start + t * direction`` for ``t >= 0`` and record argmax changes.

    Each change from ``a`` to ``b`` contributes ``<alpha_b - alpha_a, direction>``
    (the lattice intersection multiplicity).  Returns ``None`` when the ray
    meets the tie locus non-generically, so the caller can perturb.
    """
    start = [rational(x) for x in start]
    _, top = tropical_value(w, start)
    if len(top) != 1:
        return None
    cur = next(iter(top))
    t = Fraction(0)
    crossings = []
    total = 0
    while True:
        best, hits = None, []
        for j in range(len(w)):
            if j == cur:
                continue
            slope = dot(sub(w.alphas[j], w.alphas[cur]), direction)
            if slope <= 0:
                continue
            gap = w.form(cur, start) - w.form(j, start)
            tj = gap / slope
            if tj <= t:
                # already tied at the current parameter
                return None
            if best is None or tj < best:
                best, hits = tj, [j]
            elif tj == best:
                hits.append(j)
        if best is None:
            return RayWalk(tuple(crossings), total, cur)
        if len(hits) != 1:
            return None
        nxt = hits[0]
        total += dot(sub(w.alphas[nxt], w.alphas[cur]), direction)
        crossings.append((cur, nxt, best))
        cur, t = nxt, best
