"""Exact rational linear programming (two-phase tableau simplex, Bland's rule).

Problems are small, so a dense ``Fraction`` tableau is plenty.  Variables
are free unless stated otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None


def _pivot(rows: list[list[Fraction]], r: int, c: int) -> None:
    inv = 1 / rows[r][c]
    pivot = [v * inv if v else v for v in rows[r]]
    rows[r] = pivot
    support = [j for j, v in enumerate(pivot) if v]
    for i, row in enumerate(rows):
        if i != r and row[c] != 0:
            f = row[c]
            new = list(row)
            for j in support:
                new[j] = row[j] - f * pivot[j]
            rows[i] = new


def _run(rows, basis, cost, allowed) -> str:
    """Maximize ``cost`` over the canonical tableau in place."""
    rhs = len(cost)
    while True:
        entering = None
        for j in allowed:
            if j in basis:
                continue
            reduced = cost[j] - sum(cost[b] * row[j] for b, row in zip(basis, rows))
            if reduced > 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        best = None
        for i, row in enumerate(rows):
            if row[entering] > 0:
                ratio = row[rhs] / row[entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(rows, best[1], entering)
        basis[best[1]] = entering


def maximize(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    """Maximize ``c.x`` subject to ``A_ub x <= b_ub`` and ``A_eq x = b_eq``."""
    n = len(c)
    n_ub, n_eq = len(A_ub), len(A_eq)
    nslack = n_ub
    # columns: x+ (n), x- (n), slacks, artificials
    rows: list[list[Fraction]] = []
    needs_art: list[bool] = []
    for i in range(n_ub):
        a = [Fraction(v) for v in A_ub[i]]
        row = a + [-v for v in a] + [Fraction(int(k == i)) for k in range(nslack)]
        b = Fraction(b_ub[i])
        if b < 0:
            row, b = [-v for v in row], -b
            needs_art.append(True)
        else:
            needs_art.append(False)
        rows.append(row + [b])
    for i in range(n_eq):
        a = [Fraction(v) for v in A_eq[i]]
        row = a + [-v for v in a] + [Fraction(0)] * nslack
        b = Fraction(b_eq[i])
        if b < 0:
            row, b = [-v for v in row], -b
        rows.append(row + [b])
        needs_art.append(True)
    art_cols = [i for i, flag in enumerate(needs_art) if flag]
    base_cols = 2 * n + nslack
    ncols = base_cols + len(art_cols)
    basis = []
    for i, row in enumerate(rows):
        b = row.pop()
        extra = [Fraction(0)] * len(art_cols)
        if needs_art[i]:
            extra[art_cols.index(i)] = Fraction(1)
            basis.append(base_cols + art_cols.index(i))
        else:
            basis.append(2 * n + i)
        row.extend(extra)
        row.append(b)

    if art_cols:
        cost1 = [Fraction(0)] * base_cols + [Fraction(-1)] * len(art_cols)
        _run(rows, basis, cost1, range(ncols))
        if sum(row[ncols] for b, row in zip(basis, rows) if b >= base_cols) != 0:
            return LPResult("infeasible")
        # drive zero-level artificials out of the basis
        keep = []
        for i in range(len(rows)):
            if basis[i] >= base_cols:
                j = next((j for j in range(base_cols) if rows[i][j] != 0), None)
                if j is None:
                    continue
                _pivot(rows, i, j)
                basis[i] = j
            keep.append(i)
        rows = [rows[i] for i in keep]
        basis = [basis[i] for i in keep]

    cost = [Fraction(v) for v in c] + [-Fraction(v) for v in c]
    cost += [Fraction(0)] * (ncols - 2 * n)
    status = _run(rows, basis, cost, range(base_cols))
    if status == "unbounded":
        return LPResult("unbounded")
    values = [Fraction(0)] * ncols
    for b, row in zip(basis, rows):
        values[b] = row[ncols]
    x = tuple(values[j] - values[n + j] for j in range(n))
    return LPResult("optimal", x, sum(Fraction(ci) * xi for ci, xi in zip(c, x)))


def interior_point(
    inequalities: Sequence[tuple[Sequence, object]],
    equalities: Sequence[tuple[Sequence, object]] = (),
    dim: int | None = None,
) -> tuple[Fraction, tuple[Fraction, ...]] | None:
    """Largest slack point of ``{x : a.x + b >= 0}`` within the equalities.

    Returns ``(margin, x)`` with the margin capped at 1, or ``None`` when
    the system is infeasible.  The region is full-dimensional (relative to
    the equalities) exactly when the margin is positive.
    """
    if dim is None:
        sample = inequalities[0][0] if inequalities else equalities[0][0]
        dim = len(sample)
    A_ub, b_ub = [], []
    for a, b in inequalities:
        A_ub.append([-Fraction(v) for v in a] + [Fraction(1)])
        b_ub.append(Fraction(b))
    A_ub.append([Fraction(0)] * dim + [Fraction(1)])
    b_ub.append(Fraction(1))
    A_eq = [[Fraction(v) for v in a] + [Fraction(0)] for a, _ in equalities]
    b_eq = [-Fraction(b) for _, b in equalities]
    res = maximize([0] * dim + [1], A_ub, b_ub, A_eq, b_eq)
    if res.status != "optimal" or res.x[dim] < 0:
        return None
    return res.x[dim], res.x[:dim]
