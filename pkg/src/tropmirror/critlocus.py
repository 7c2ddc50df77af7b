"""Tropical modification of a plane tropical curve.

Rays in chosen directions are deleted, then bounded edges hanging off
univalent vertices are collapsed and edges meeting at bivalent vertices
are merged, until nothing changes.  For a closed curve of genus ``g >= 2``
the result is a trivalent graph with ``3g - 3`` edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotClosedTrivalent
from .tropical import TropicalCurveGraph

ALL = "all"
EMPTY = "none"


@dataclass(frozen=True)
class ModificationSpec:
    """Ray directions to delete: a set of primitive vectors, ``ALL`` or ``EMPTY``."""

    directions: frozenset | str = EMPTY

    @classmethod
    def parse(cls, value) -> "ModificationSpec":
        if isinstance(value, ModificationSpec):
            return value
        if value in (ALL, EMPTY):
            return cls(value)
        dirs = frozenset(tuple(int(x) for x in d) for d in value)
        return cls(dirs if dirs else EMPTY)

    def deletes(self, direction) -> bool:
        if self.directions == ALL:
            return True
        if self.directions == EMPTY:
            return False
        return tuple(direction) in self.directions


@dataclass(frozen=True)
class GraphEdge:
    u: int
    v: int
    segments: int = 1
    duals: tuple = ()


@dataclass(frozen=True)
class GraphRay:
    vertex: int
    direction: tuple[int, int]
    segments: int = 1
    duals: tuple = ()


@dataclass
class ReducedGraph:
    vertices: dict[int, tuple]
    edges: list[GraphEdge]
    rays: list[GraphRay]
    pure_cycle_components: list[frozenset[int]] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    @classmethod
    def from_curve(cls, g: TropicalCurveGraph) -> "ReducedGraph":
        vertices = dict(enumerate(g.vertices))
        edges, rays, flags = [], [], []
        for e in g.edges:
            if e.bounded:
                edges.append(GraphEdge(e.tail, e.head, 1, (e.dual,)))
            elif e.tail is not None:
                rays.append(GraphRay(e.tail, e.direction, 1, (e.dual,)))
            else:
                flags.append("input contains full lines; they are ignored")
        return cls(vertices, edges, rays, [], sorted(set(flags)))

    def degree(self, v: int) -> int:
        return sum((e.u == v) + (e.v == v) for e in self.edges) + sum(
            r.vertex == v for r in self.rays
        )

    def components(self) -> list[set[int]]:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            parent[find(e.u)] = find(e.v)
        groups: dict[int, set[int]] = {}
        for v in self.vertices:
            groups.setdefault(find(v), set()).add(v)
        return sorted(groups.values(), key=min)

    def betti(self) -> int:
        return len(self.edges) - len(self.vertices) + len(self.components())

    def signature(self):
        """Hashable summary used to compare graphs up to edge order."""
        edges = sorted((min(e.u, e.v), max(e.u, e.v), e.segments) for e in self.edges)
        rays = sorted((r.vertex, r.direction, r.segments) for r in self.rays)
        return (tuple(sorted(self.vertices)), tuple(edges), tuple(rays))


def _copy(g: ReducedGraph) -> ReducedGraph:
    return ReducedGraph(dict(g.vertices), list(g.edges), list(g.rays), list(g.pure_cycle_components), list(g.flags))


def modify(g: TropicalCurveGraph | ReducedGraph, spec=EMPTY) -> ReducedGraph:
    spec = ModificationSpec.parse(spec)
    rg = ReducedGraph.from_curve(g) if isinstance(g, TropicalCurveGraph) else _copy(g)
    if spec.directions == EMPTY:
        return rg
    rg.rays = [r for r in rg.rays if not spec.deletes(r.direction)]
    changed = True
    while changed:
        changed = False
        for v in sorted(rg.vertices):
            deg = rg.degree(v)
            if deg == 0:
                del rg.vertices[v]
                changed = True
                continue
            incident = [e for e in rg.edges if v in (e.u, e.v)]
            own_rays = [r for r in rg.rays if r.vertex == v]
            if deg == 1 and incident:
                rg.edges.remove(incident[0])
                del rg.vertices[v]
                changed = True
                continue
            if deg != 2:
                continue
            if len(incident) == 2:
                e1, e2 = incident
                a = e1.v if e1.u == v else e1.u
                b = e2.v if e2.u == v else e2.u
                if a == v or b == v or a == b:
                    # a loop or a two-edge cycle: merging would make a self-loop
                    continue
                rg.edges.remove(e1)
                rg.edges.remove(e2)
                rg.edges.append(GraphEdge(a, b, e1.segments + e2.segments, e1.duals + e2.duals))
                del rg.vertices[v]
                changed = True
            elif len(incident) == 1 and len(own_rays) == 1:
                e, r = incident[0], own_rays[0]
                a = e.v if e.u == v else e.u
                rg.edges.remove(e)
                rg.rays.remove(r)
                rg.rays.append(GraphRay(a, r.direction, e.segments + r.segments, e.duals + r.duals))
                del rg.vertices[v]
                changed = True
    flags = set(rg.flags)
    cycles = []
    for comp in rg.components():
        has_ray = any(r.vertex in comp for r in rg.rays)
        if not has_ray and all(rg.degree(v) == 2 for v in comp):
            cycles.append(frozenset(comp))
    if any(rg.degree(v) == 2 and all(v not in c for c in cycles) for v in rg.vertices):
        flags.add("bivalent vertex between two rays kept")
    if len(rg.components()) > 1:
        flags.add("disconnected: rules applied componentwise")
    rg.pure_cycle_components = cycles
    rg.flags = sorted(flags)
    return rg


@dataclass(frozen=True)
class CountReport:
    vertices: int
    edges: int
    genus: int
    pure_cycle: bool
    ok: bool


def count_check(rg: ReducedGraph) -> CountReport:
    """Check the ``E = 3(g - 1)`` and ``3V = 2E`` counts of a closed trivalent graph."""
    g = rg.betti()
    if rg.pure_cycle_components:
        return CountReport(len(rg.vertices), len(rg.edges), g, True, True)
    if rg.rays:
        raise NotClosedTrivalent(f"{len(rg.rays)} unbounded rays remain")
    bad = [v for v in rg.vertices if rg.degree(v) != 3]
    if bad:
        raise NotClosedTrivalent(f"vertex {bad[0]} has valence {rg.degree(bad[0])}")
    V, E = len(rg.vertices), len(rg.edges)
    ok = E == 3 * (g - 1) and 3 * V == 2 * E
    if not ok:
        raise NotClosedTrivalent(f"counts V={V}, E={E} do not match genus {g}")
    return CountReport(V, E, g, False, True)

