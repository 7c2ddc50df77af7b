"""Wall-crossing and flux transformations on Laurent expressions, and the
leading-order charts of the converse construction."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import LaurentPolynomial, NovikovSeries, expr_pow, rational
from .errors import CutoffRequired, NotInvertible
from .linalg import dot, sub
from .tropical import WeightedPointSet, lower_hull_subdivision


@dataclass(frozen=True)
class WallTransform:
    """``z^m -> h(z_b)^<cycle, m> z^m`` with ``z_b = T^area z^boundary``,
    or (``kind="flux"``) ``z^m -> T^<shift, m> z^m``.

    ``h`` lists the coefficients of the power series, constant term first.
    """

    kind: str = "wall"
    area: Fraction = Fraction(0)
    boundary: tuple[int, ...] = ()
    cycle: tuple[int, ...] = ()
    h: tuple[NovikovSeries, ...] = (NovikovSeries.one(), NovikovSeries.one())
    shift: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.kind not in ("wall", "flux"):
            raise ValueError(f"unknown transform kind {self.kind!r}")
        object.__setattr__(self, "area", rational(self.area))
        object.__setattr__(self, "boundary", tuple(int(x) for x in self.boundary))
        object.__setattr__(self, "cycle", tuple(int(x) for x in self.cycle))
        object.__setattr__(self, "h", tuple(NovikovSeries.coerce(c) for c in self.h))
        object.__setattr__(self, "shift", tuple(rational(x) for x in self.shift))
        if self.kind == "wall":
            if not self.h or self.h[0] != NovikovSeries.one():
                raise ValueError("h must have constant term 1")
            if len(self.boundary) != len(self.cycle):
                raise ValueError("boundary and cycle must have the same length")
            if dot(self.cycle, self.boundary) != 0:
                raise ValueError("the cycle must pair to zero with the wall monomial")

    @classmethod
    def wall(cls, area, boundary, cycle, h=(1, 1)) -> "WallTransform":
        return cls("wall", area, tuple(boundary), tuple(cycle), tuple(h))

    @classmethod
    def flux(cls, shift) -> "WallTransform":
        return cls("flux", shift=tuple(shift))

    def inverse(self) -> "WallTransform":
        if self.kind == "flux":
            return WallTransform.flux(tuple(-x for x in self.shift))
        return WallTransform.wall(self.area, self.boundary, tuple(-c for c in self.cycle), self.h)

    def conjugate_by_flux(self, shift: Sequence) -> "WallTransform":
        """The wall seen after a flux map: the area grows by ``<shift, boundary>``."""
        return WallTransform.wall(
            self.area + dot(shift, self.boundary), self.boundary, self.cycle, self.h
        )

    def wall_function(self, nvars: int, cutoff=None) -> LaurentPolynomial:
        terms = [
            (tuple(j * b for b in self.boundary), c.shift(j * self.area))
            for j, c in enumerate(self.h)
        ]
        return LaurentPolynomial(nvars, terms, cutoff)


def apply_wall(t: WallTransform, e: LaurentPolynomial, cutoff=None) -> LaurentPolynomial:
    """Apply a wall (or flux) transform termwise; the cutoff is ``e``'s unless given."""
    if t.kind == "flux":
        return apply_flux(t.shift, e)
    if len(t.boundary) != e.nvars:
        raise ValueError("transform and expression have different numbers of variables")
    if cutoff is None:
        cutoff = e.cutoff
    else:
        e = e.truncate(cutoff)
    h = t.wall_function(e.nvars, cutoff)
    powers: dict[int, LaurentPolynomial] = {}
    out = e._new((), cutoff)
    for key, coeff in e.items():
        k = dot(t.cycle, key)
        if k not in powers:
            if k < 0 and not h.is_monomial():
                if cutoff is None:
                    raise CutoffRequired("negative powers of the wall function need a cutoff")
                if t.area <= 0:
                    raise CutoffRequired("wall with non-positive area has no convergent inverse")
            try:
                powers[k] = expr_pow(h, k)
            except NotInvertible as exc:
                raise CutoffRequired(str(exc)) from exc
        out = out + powers[k] * e._new({key: coeff}, cutoff)
    return out


def apply_flux(shift: Sequence, e: LaurentPolynomial) -> LaurentPolynomial:
    shift = [rational(x) for x in shift]
    if len(shift) != e.nvars:
        raise ValueError("shift and expression have different numbers of variables")
    return e._new([(key, c.shift(dot(shift, key))) for key, c in e.items()], e.cutoff)


def gluing_wall(source: Sequence[int], target: Sequence[int], epsilon, area=None) -> WallTransform:
    """Wall in the ring ``(v_1..v_n, w0)`` whose function is ``1 + T^-eps w0``.

    Its cycle is ``(target - source, 0)`` so crossing it multiplies ``v^m``
    by ``(1 + T^-eps w0)^<target - source, m>``.  Passing ``area`` replaces
    ``-eps`` (useful to test the group law with convergent inverses).
    """
    n = len(source)
    area = -rational(epsilon) if area is None else rational(area)
    return WallTransform.wall(area, (0,) * n + (1,), tuple(sub(target, source)) + (0,))


@dataclass(frozen=True)
class ConverseChartPair:
    """Leading-order local charts of the converse construction.

    ``uprime`` lives in ``(x'_1..x'_n, z')``, ``udoubleprime`` in
    ``(x''_1..x''_n, y'')`` and ``gluing`` gives the images of the ``U''``
    coordinates in terms of the ``U'`` ones.
    """

    n: int
    f_tilde: LaurentPolynomial
    uprime: LaurentPolynomial
    udoubleprime: LaurentPolynomial
    gluing: tuple[LaurentPolynomial, ...]
    kappa: Mapping[tuple[int, ...], NovikovSeries] = field(default_factory=dict)

    def verify(self) -> bool:
        return self.udoubleprime.substitute(self.gluing) == self.uprime

    def weights(self) -> dict[tuple[int, ...], Fraction]:
        """Exponent -> valuation of the coefficient of ``f_tilde``."""
        return {key: c.valuation() for key, c in self.f_tilde.items()}


def build_converse(w: WeightedPointSet, kappa: Mapping | None = None) -> ConverseChartPair:
    kappa = {tuple(k): NovikovSeries.coerce(v) for k, v in (kappa or {}).items()}
    s = lower_hull_subdivision(w)
    n = w.n
    f_terms = []
    for a in s.a_red:
        alpha = w.alphas[a]
        coeff = NovikovSeries.monomial(1, w.rhos[a]) * (
            NovikovSeries.one() + kappa.get(alpha, NovikovSeries.zero())
        )
        f_terms.append((alpha, coeff))
    f_tilde = LaurentPolynomial(n, f_terms)
    uprime = LaurentPolynomial(n + 1, [(alpha + (-1,), c) for alpha, c in f_terms])
    udoubleprime = LaurentPolynomial(n + 1, {(0,) * n + (1,): 1})
    coords = [
        LaurentPolynomial(n + 1, {tuple(int(j == i) for j in range(n + 1)): 1}) for i in range(n)
    ]
    z_inv = LaurentPolynomial(n + 1, {(0,) * n + (-1,): 1})
    y = f_tilde.substitute(coords) * z_inv
    return ConverseChartPair(n, f_tilde, uprime, udoubleprime, tuple(coords) + (y,), kappa)
