"""Job parsing, orchestration and JSON reports."""

from __future__ import annotations

import json
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .algebra import ChartExpression, LaurentPolynomial, NovikovSeries, format_rational, rational
from .ci import CIDatum, CIMirror
from .critlocus import ALL, EMPTY, ModificationSpec, count_check, modify
from .errors import NotClosedTrivalent, ParseError, ValidationError
from .linalg import dot, is_primitive, sub
from .mirror import AmbientToricData, Mirror, SuperpotentialTerm
from .tropical import WeightedPointSet, curve_graph
from .wallcross import apply_wall, build_converse, gluing_wall

MODES = ("hypersurface", "ci", "converse", "critlocus", "wallcheck")


@dataclass(frozen=True)
class JobOptions:
    cutoff: Fraction | None = None
    svg: bool = False
    delete: Any = ALL  # ModificationSpec value: "all", "none" or a tuple of directions
    report: str | None = None
    strict: bool = False
    seed: int = 0


@dataclass(frozen=True)
class JobSpec:
    mode: str
    n: int
    points: WeightedPointSet | None = None
    ambient: AmbientToricData | None = None
    ci: CIDatum | None = None
    options: JobOptions = field(default_factory=JobOptions)


# parsing

def _field(path: str, fn, value):
    try:
        return fn(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"field {path}: {exc}") from exc


def _int_vector(path: str, value, n: int | None = None) -> tuple[int, ...]:
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise ParseError(f"field {path}: expected a list of integers")
    if n is not None and len(value) != n:
        raise ParseError(f"field {path}: expected {n} entries, got {len(value)}")
    return tuple(value)


def _rational_field(path: str, value) -> Fraction:
    if isinstance(value, float):
        raise ParseError(f"field {path}: write rationals as strings like \"1/3\", not floats")
    return _field(path, rational, value)


def _parse_points(path: str, raw, n: int) -> WeightedPointSet:
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"field {path}: expected a non-empty list of points")
    alphas, rhos, coeffs = [], [], []
    for k, item in enumerate(raw):
        where = f"{path}[{k}]"
        if not isinstance(item, dict) or "alpha" not in item or "rho" not in item:
            raise ParseError(f"field {where}: each point needs 'alpha' and 'rho'")
        alphas.append(_int_vector(f"{where}.alpha", item["alpha"], n))
        rhos.append(_rational_field(f"{where}.rho", item["rho"]))
        coeffs.append(_rational_field(f"{where}.coeff", item.get("coeff", "1")))
    seen = set()
    for a in alphas:
        if a in seen:
            raise ValidationError(f"duplicate alpha {list(a)} in {path}")
        seen.add(a)
    return WeightedPointSet(n, tuple(alphas), tuple(rhos), tuple(coeffs))


def _parse_rays(raw: dict, n: int):
    rays = tuple(_int_vector(f"ambient.rays[{i}]", r, n) for i, r in enumerate(raw.get("rays", [])))
    for r in rays:
        if not is_primitive(r):
            raise ValidationError(f"ray {list(r)} is not primitive")
    varpi = tuple(
        _rational_field(f"ambient.varpi[{i}]", v) for i, v in enumerate(raw.get("varpi", []))
    ) or (Fraction(0),) * len(rays)
    if len(varpi) != len(rays):
        raise ValidationError("ambient.varpi needs one value per ray")
    return rays, varpi


def _lambda(path: str, raw, rays, w: WeightedPointSet):
    if raw is None:
        return tuple(-min(dot(r, a) for a in w.alphas) for r in rays)
    if not isinstance(raw, list) or len(raw) != len(rays):
        raise ValidationError(f"{path} needs one value per ray")
    return tuple(_rational_field(f"{path}[{i}]", v) for i, v in enumerate(raw))


def _epsilon(path: str, raw) -> Fraction:
    eps = _rational_field(path, raw)
    if eps <= 0:
        raise ValidationError(f"{path} must be positive, got {format_rational(eps)}")
    return eps


def _parse_delete(raw):
    if raw in (ALL, EMPTY):
        return raw
    if not isinstance(raw, list):
        raise ParseError("field options.delete: expected 'all', 'none' or a list of directions")
    dirs = tuple(sorted(_int_vector(f"options.delete[{i}]", d, 2) for i, d in enumerate(raw)))
    for d in dirs:
        if not is_primitive(d):
            raise ValidationError(f"deleted direction {list(d)} is not primitive")
    return dirs


def _parse_options(raw) -> JobOptions:
    if raw is None:
        return JobOptions()
    if not isinstance(raw, dict):
        raise ParseError("field options: expected an object")
    cutoff = raw.get("cutoff")
    cutoff = None if cutoff is None else _rational_field("options.cutoff", cutoff)
    seed = raw.get("seed", 0)
    if not isinstance(seed, int):
        raise ParseError("field options.seed: expected an integer")
    report = raw.get("report")
    if report is not None and not isinstance(report, str):
        raise ParseError("field options.report: expected a path string")
    return JobOptions(
        cutoff=cutoff,
        svg=bool(raw.get("svg", False)),
        delete=_parse_delete(raw.get("delete", ALL)),
        report=report,
        strict=bool(raw.get("strict", False)),
        seed=seed,
    )


def parse_input(data: bytes | str, mode: str | None = None) -> JobSpec:
    """Read a UTF-8 JSON job, enforcing every input invariant.

    ``mode`` overrides the job's own mode field; a hypersurface job cannot be
    turned into a complete-intersection one or back.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from exc
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ParseError("top level must be a JSON object")
    declared = raw.get("mode", "hypersurface")
    if declared not in MODES:
        raise ParseError(f"field mode: expected one of {', '.join(MODES)}")
    if mode is not None and (mode == "ci") != (declared == "ci"):
        raise ValidationError(f"a {declared} job cannot be run in {mode} mode")
    mode = mode or declared
    n = raw.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("field n: expected a positive integer")
    options = _parse_options(raw.get("options"))
    amb_raw = raw.get("ambient", {}) or {}
    if not isinstance(amb_raw, dict):
        raise ParseError("field ambient: expected an object")
    rays, varpi = _parse_rays(amb_raw, n)

    if mode == "ci":
        hs_raw = raw.get("hypersurfaces")
        if not isinstance(hs_raw, list) or not hs_raw:
            raise ParseError("field hypersurfaces: expected a non-empty list")
        hs, lams, epss = [], [], []
        for i, h in enumerate(hs_raw):
            if not isinstance(h, dict):
                raise ParseError(f"field hypersurfaces[{i}]: expected an object")
            w = _parse_points(f"hypersurfaces[{i}].points", h.get("points"), n)
            hs.append(w)
            lams.append(_lambda(f"hypersurfaces[{i}].lambda", h.get("lambda"), rays, w))
            epss.append(_epsilon(f"hypersurfaces[{i}].epsilon", h.get("epsilon", "1")))
        ci = CIDatum(tuple(hs), rays, varpi, tuple(lams), tuple(epss))
        return JobSpec(mode, n, None, None, ci, options)

    w = _parse_points("points", raw.get("points"), n)
    lam = _lambda("ambient.lambda", amb_raw.get("lambda"), rays, w)
    eps = _epsilon("ambient.epsilon", amb_raw.get("epsilon", "1"))
    amb = AmbientToricData(rays, varpi, lam, eps)
    amb.validate(w)
    if mode == "critlocus" and n != 2:
        raise ValidationError("critlocus mode needs n = 2")
    return JobSpec(mode, n, w, amb, None, options)


def _points_json(w: WeightedPointSet) -> list:
    return [
        {"alpha": list(a), "rho": format_rational(r), "coeff": format_rational(c)}
        for a, r, c in zip(w.alphas, w.rhos, w.coeffs)
    ]


def job_to_json(job: JobSpec) -> dict:
    opts = job.options
    options: dict[str, Any] = {
        "svg": opts.svg,
        "delete": opts.delete if isinstance(opts.delete, str) else [list(d) for d in opts.delete],
        "strict": opts.strict,
        "seed": opts.seed,
    }
    if opts.cutoff is not None:
        options["cutoff"] = format_rational(opts.cutoff)
    if opts.report is not None:
        options["report"] = opts.report
    out: dict[str, Any] = {"mode": job.mode, "n": job.n, "options": options}
    if job.ci is not None:
        ci = job.ci
        out["ambient"] = {
            "rays": [list(r) for r in ci.rays],
            "varpi": [format_rational(v) for v in ci.varpi],
        }
        out["hypersurfaces"] = [
            {
                "points": _points_json(w),
                "lambda": [format_rational(x) for x in lam],
                "epsilon": format_rational(eps),
            }
            for w, lam, eps in zip(ci.hypersurfaces, ci.lams, ci.epsilons)
        ]
    else:
        amb = job.ambient
        out["points"] = _points_json(job.points)
        out["ambient"] = {
            "rays": [list(r) for r in amb.rays],
            "varpi": [format_rational(v) for v in amb.varpi],
            "lambda": [format_rational(v) for v in amb.lam],
            "epsilon": format_rational(amb.epsilon),
        }
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def serialize_job(job: JobSpec) -> bytes:
    return dumps(job_to_json(job)).encode("utf-8")


# report sections

def _q(x) -> str:
    return format_rational(x)


def _vec(v) -> list:
    return [x if isinstance(x, int) else _q(x) for x in v]


def _coefficient(term) -> str:
    c, e = term
    return str(NovikovSeries.monomial(c, e))


def subdivision_section(m: Mirror) -> dict:
    from .tropical import is_maximal

    w, s = m.w, m.subdivision
    maximal, cert = is_maximal(s)
    return {
        "cells": [
            {
                "points": [list(w.alphas[i]) for i in c.points],
                "vertices": [list(w.alphas[i]) for i in c.vertices],
                "slope": _vec(c.slope),
                "offset": _q(c.offset),
            }
            for c in s.cells
        ],
        "a_red": [list(w.alphas[a]) for a in m.labels],
        "maximal": maximal,
        "nonmaximal_cell": None if cert is None else [list(w.alphas[i]) for i in cert],
        "degenerate": s.degenerate,
    }


def tropical_section(m: Mirror) -> dict:
    w, tc = m.w, m.complex
    cells = {}
    for k in sorted(tc.cells):
        cells[str(k)] = sorted(
            (
                {
                    "dual": [list(w.alphas[i]) for i in c.dual],
                    "bounded": c.bounded,
                    "equations": [{"normal": list(a), "offset": _q(b)} for a, b in c.equations],
                }
                for c in tc.cells[k]
            ),
            key=lambda d: d["dual"],
        )
    comps = sorted(
        (
            {
                "alpha": list(w.alphas[c.label]),
                "bounded": c.bounded,
                "witness": _vec(c.witness),
            }
            for c in tc.components
        ),
        key=lambda d: d["alpha"],
    )
    out: dict[str, Any] = {"cells": cells, "components": comps}
    if w.n == 2:
        g = curve_graph(tc)
        out["curve"] = curve_section(w, g)
    return out


def curve_section(w: WeightedPointSet, g) -> dict:
    return {
        "vertices": [_vec(v) for v in g.vertices],
        "edges": [
            {
                "tail": e.tail,
                "head": e.head,
                "direction": None if e.direction is None else list(e.direction),
                "dual": [list(w.alphas[i]) for i in e.dual],
                "weight": e.weight,
                "bounded": e.bounded,
            }
            for e in g.edges
        ],
        "genus": g.genus(),
        "bounded_edges": len(g.bounded_edges),
        "rays": len(g.rays),
    }


def _facet_json(f) -> dict:
    return {"alpha": list(f.alpha), "normal": list(f.normal), "offset": _q(f.offset), "compact": f.compact}


def _cone_json(c, cell=None) -> dict:
    out = {"generators": [list(g) for g in c.generators], "index": c.index, "smooth": c.smooth}
    if cell is not None:
        out["cell"] = cell
    return out


def mirror_section(m: Mirror) -> dict:
    w, data = m.w, m.data
    eq = m.orthant_equivalence()
    return {
        "facets": [_facet_json(f) for f in data.facets],
        "cones": [_cone_json(c, [list(w.alphas[i]) for i in c.cell]) for c in data.cones],
        "smooth": data.smooth,
        "strata": [
            {"divisors": [list(w.alphas[i]) for i in st.labels], "bounded": st.bounded}
            for st in data.strata
        ],
        "orthant_equivalence": None
        if eq is None
        else {"matrix": [list(r) for r in eq[0]], "offsets": [_q(x) for x in eq[1]]},
    }


def _term_json(t: SuperpotentialTerm, orders: list[dict]) -> dict:
    return {
        "name": t.name,
        "weight": list(t.weight),
        "coefficient": _coefficient(t.coefficient),
        "expression": t.expression.format(),
        "chart": None if t.expression.chart is None else _chart_json(t.expression.chart),
        "correction": str(t.correction),
        "vanishing_orders": orders,
    }


def _chart_json(chart):
    if chart and isinstance(chart[0], tuple):
        return [list(a) for a in chart]
    return list(chart)


def superpotential_section(m: Mirror) -> dict:
    w = m.w

    def table(terms):
        return [
            _term_json(
                t, [{"alpha": list(w.alphas[a]), "order": m.vanishing_order(t, a)} for a in m.labels]
            )
            for t in terms
        ]

    return {
        "W0": table(m.W0()),
        "W0H": table(m.W0H()),
        "fiber_components": [list(w.alphas[a]) for a in m.fiber_components()],
    }


def atlas_section(m: Mirror) -> dict:
    w = m.w
    gluings = []
    for a in m.labels:
        for b in sorted(m._adj[a], key=lambda i: w.alphas[i]):
            shift = sub(w.alphas[b], w.alphas[a])
            gluings.append(
                {
                    "from": list(w.alphas[a]),
                    "to": list(w.alphas[b]),
                    "shift": list(shift),
                    "rule": ", ".join(
                        f"v{i + 1} -> v0^{s}*v{i + 1}" if s else f"v{i + 1} -> v{i + 1}"
                        for i, s in enumerate(shift)
                    ),
                }
            )
    return {"charts": [list(w.alphas[a]) for a in m.labels], "gluings": gluings}


def critical_locus_section(w: WeightedPointSet, g, delete) -> dict:
    rg = modify(g, delete)
    out: dict[str, Any] = {
        "delete": delete if isinstance(delete, str) else [list(d) for d in delete],
        "vertices": {str(k): _vec(v) for k, v in sorted(rg.vertices.items())},
        "edges": [
            {"ends": [e.u, e.v], "segments": e.segments}
            for e in sorted(rg.edges, key=lambda e: (min(e.u, e.v), max(e.u, e.v), e.segments))
        ],
        "rays": [
            {"vertex": r.vertex, "direction": list(r.direction), "segments": r.segments}
            for r in sorted(rg.rays, key=lambda r: (r.vertex, r.direction))
        ],
        "pure_cycles": [sorted(c) for c in rg.pure_cycle_components],
        "flags": rg.flags,
        "betti": rg.betti(),
    }
    try:
        rep = count_check(rg)
        out["count_check"] = {
            "vertices": rep.vertices,
            "edges": rep.edges,
            "genus": rep.genus,
            "pure_cycle": rep.pure_cycle,
        }
    except NotClosedTrivalent as exc:
        out["count_check"] = {"skipped": str(exc)}
    return out


def converse_section(w: WeightedPointSet) -> dict:
    pair = build_converse(w)
    names = [f"x{i + 1}" for i in range(w.n)]
    return {
        "f_tilde": pair.f_tilde.format(names),
        "terms": [
            {"alpha": list(k), "coefficient": str(c)} for k, c in pair.f_tilde.items()
        ],
        "uprime": pair.uprime.format([f"x{i + 1}'" for i in range(w.n)] + ["z'"]),
        "udoubleprime": pair.udoubleprime.format([f"x{i + 1}''" for i in range(w.n)] + ["y''"]),
        "gluing": "y'' = " + pair.gluing[-1].format([f"x{i + 1}'" for i in range(w.n)] + ["z'"]),
        "verified": pair.verify(),
    }


# invariant suites

def random_chart_monomial(m: Mirror, label: int, rng: random.Random) -> ChartExpression:
    mexp = tuple(rng.randint(-3, 3) for _ in range(m.w.n))
    coeff = NovikovSeries.monomial(rng.randint(1, 9), Fraction(rng.randint(0, 12), rng.randint(1, 4)))
    return m.monomial(label, mexp, rng.randint(0, 3), coeff)


def wallcheck(m: Mirror, samples: int = 20, seed: int = 0, cutoff=3) -> dict:
    """Cocycle and chart-invariance suites on the atlas of ``m``."""
    rng = random.Random(seed)
    w = m.w
    cocycle = True
    triangles = m.subdivision.triangles()
    for a, b, c in triangles:
        for _ in range(samples):
            e = random_chart_monomial(m, a, rng)
            back = m.glue_edge(m.glue_edge(m.glue_edge(e, a, b), b, c), c, a)
            cocycle &= back == e
            # the same loop as wall transforms with a convergent stand-in area
            m0, _, c0 = next(e.chart_terms())
            poly = LaurentPolynomial(w.n + 1, {tuple(m0) + (0,): c0}, cutoff)
            loop = poly
            for s, t in ((a, b), (b, c), (c, a)):
                loop = apply_wall(gluing_wall(w.alphas[s], w.alphas[t], 1, area=1), loop, cutoff)
            cocycle &= loop.equal_mod(poly, cutoff)
    invariance = True
    for i in range(len(m.amb.rays)):
        exprs = {a: m.express_w_in_chart(i, a) for a in m.labels}
        for a in m.labels:
            for b in m.labels:
                invariance &= m.glue(exprs[a], a, b) == exprs[b]
    return {
        "cocycle": cocycle,
        "chart_invariance": invariance,
        "triangles": len(triangles),
        "samples": samples,
        "summary": f"cocycle: {'PASS' if cocycle else 'FAIL'}, "
        f"chart-invariance: {'PASS' if invariance else 'FAIL'}",
    }


# orchestration

def run(job: JobSpec) -> tuple[dict, str | None]:
    """Run a job; returns the report and, when requested, SVG text."""
    from .svg import render_tropical_curve

    report: dict[str, Any] = {"mode": job.mode, "input": job_to_json(job)}
    svg = None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if job.mode == "ci":
            report.update(ci_report(job))
        else:
            m = Mirror(job.points, job.ambient)
            w = job.points
            report["subdivision"] = subdivision_section(m)
            report["tropical"] = tropical_section(m)
            if job.mode in ("hypersurface", "wallcheck", "critlocus"):
                report["mirror"] = mirror_section(m)
                report["superpotential"] = superpotential_section(m)
                report["atlas"] = atlas_section(m)
            if w.n == 2 and job.mode in ("hypersurface", "critlocus"):
                report["critical_locus"] = critical_locus_section(
                    w, curve_graph(m.complex), job.options.delete
                )
            if job.mode in ("hypersurface", "converse"):
                report["converse"] = converse_section(w)
            if job.mode == "wallcheck":
                cutoff = job.options.cutoff if job.options.cutoff is not None else 3
                report["wallcheck"] = wallcheck(m, seed=job.options.seed, cutoff=cutoff)
            if job.options.svg and w.n == 2:
                svg = render_tropical_curve(m.complex)
    report["warnings"] = sorted({str(c.message) for c in caught})
    return report, svg


def ci_report(job: JobSpec) -> dict:
    ci = job.ci
    cm = CIMirror(ci, strict=job.options.strict)
    data = cm.data
    hs = ci.hypersurfaces

    def name(chart):
        return _chart_json(chart)

    def divisor(i, label):
        # with one hypersurface the layout matches the hypersurface report
        out = {"alpha": list(hs[i].alphas[label])}
        if ci.d > 1:
            out["hypersurface"] = i + 1
        return out

    def facet(f):
        out = _facet_json(f)
        if ci.d > 1:
            out["hypersurface"] = f.normal[ci.n:].index(1) + 1
        return out

    def cone(c):
        return _cone_json(c, [list(hs[0].alphas[i]) for i in c.cell] if ci.d == 1 else None)

    divisors = [
        (i, a) for i, s in enumerate(cm.subdivisions) for a in sorted(s.a_red, key=lambda a: hs[i].alphas[a])
    ]

    def table(terms):
        return [
            _term_json(
                t,
                [
                    dict(divisor(i, a), order=cm.vanishing_order(t, i, a))
                    for i, a in divisors
                ],
            )
            for t in terms
        ]

    return {
        "realized_tuples": [
            {"chart": name(cm.chart_name(t.labels)), "witness": _vec(t.witness)}
            for t in cm.realized.tuples
        ],
        "adjacency": [
            [name(cm.chart_name(a)), name(cm.chart_name(b))]
            for a in cm.labels
            for b in cm.adjacency()[a]
            if a < b
        ],
        "transversal": cm.transversal,
        "mirror": {
            "facets": [facet(f) for f in data.facets],
            "cones": [cone(c) for c in data.cones],
            "smooth": data.smooth,
        },
        "superpotential": {"W0": table(cm.W0()), "W0H": table(cm.W0H())},
    }
