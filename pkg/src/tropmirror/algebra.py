"""Exact arithmetic: rationals, truncated Novikov series and Laurent expressions.

Everything here is immutable.  A series or expression carries a ``cutoff``
(``None`` meaning no truncation); terms at or above the cutoff are dropped
and binary operations keep the smaller cutoff.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import CutoffRequired, NotInvertible, ZeroSeries


_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$")


def rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to ``Fraction``.

    Floats are rejected because they would silently lose exactness.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if not _RATIONAL.match(value):
            raise ValueError(f"expected an integer or p/q, got {value!r}")
        return Fraction(value.replace(" ", ""))
    raise TypeError(f"cannot read {value!r} as an exact rational")


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _min_cutoff(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _plus(a, b):
    """Cutoff arithmetic where ``None`` is +infinity."""
    if a is None or b is None:
        return None
    return a + b


class NovikovTerm(NamedTuple):
    coeff: Fraction
    exponent: Fraction


@dataclass(frozen=True)
class NovikovSeries:
    """Finite sum of ``coeff * T**exponent`` known modulo ``T**cutoff``."""

    terms: tuple[NovikovTerm, ...] = ()
    cutoff: Fraction | None = None

    def __post_init__(self):
        cutoff = None if self.cutoff is None else rational(self.cutoff)
        acc: dict[Fraction, Fraction] = {}
        for term in self.terms:
            coeff, exp = rational(term[0]), rational(term[1])
            acc[exp] = acc.get(exp, Fraction(0)) + coeff
        terms = tuple(
            NovikovTerm(c, e)
            for e, c in sorted(acc.items())
            if c != 0 and (cutoff is None or e < cutoff)
        )
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "cutoff", cutoff)

    # constructors
    @classmethod
    def monomial(cls, coeff=1, exponent=0, cutoff=None) -> "NovikovSeries":
        return cls(((coeff, exponent),), cutoff)

    @classmethod
    def zero(cls, cutoff=None) -> "NovikovSeries":
        return cls((), cutoff)

    @classmethod
    def one(cls, cutoff=None) -> "NovikovSeries":
        return cls(((1, 0),), cutoff)

    @classmethod
    def coerce(cls, value) -> "NovikovSeries":
        if isinstance(value, NovikovSeries):
            return value
        return cls.monomial(rational(value), 0)

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def valuation(self):
        """Smallest exponent present, or ``None`` for the zero series."""
        return self.terms[0].exponent if self.terms else None

    def leading(self) -> NovikovTerm:
        if not self.terms:
            raise ZeroSeries("zero series has no leading term")
        return self.terms[0]

    def coefficient(self, exponent) -> Fraction:
        exponent = rational(exponent)
        for term in self.terms:
            if term.exponent == exponent:
                return term.coeff
        return Fraction(0)

    # arithmetic
    def __add__(self, other):
        other = NovikovSeries.coerce(other)
        return NovikovSeries(self.terms + other.terms, _min_cutoff(self.cutoff, other.cutoff))

    __radd__ = __add__

    def __neg__(self):
        return NovikovSeries(tuple((-c, e) for c, e in self.terms), self.cutoff)

    def __sub__(self, other):
        return self + (-NovikovSeries.coerce(other))

    def __rsub__(self, other):
        return NovikovSeries.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NovikovSeries(tuple((c * other, e) for c, e in self.terms), self.cutoff)
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        return series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return series_invert(self) ** (-k)
        result = NovikovSeries.one(self.cutoff)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, amount) -> "NovikovSeries":
        """Multiply by ``T**amount``; the cutoff moves with the terms."""
        amount = rational(amount)
        return NovikovSeries(
            tuple((c, e + amount) for c, e in self.terms), _plus(self.cutoff, amount)
        )

    def truncate(self, cutoff) -> "NovikovSeries":
        return NovikovSeries(self.terms, _min_cutoff(self.cutoff, rational(cutoff)))

    def equal_mod(self, other: "NovikovSeries", cutoff) -> bool:
        return self.truncate(cutoff).terms == other.truncate(cutoff).terms

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for c, e in self.terms:
            if e == 0:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(f"T^{format_rational(e)}")
            elif c == -1:
                parts.append(f"-T^{format_rational(e)}")
            else:
                parts.append(f"{format_rational(c)}*T^{format_rational(e)}")
        text = " + ".join(parts).replace("+ -", "- ")
        return text if self.is_monomial() else f"({text})"

    def to_json(self) -> dict:
        return {
            "terms": [
                {"coeff": format_rational(c), "exp": format_rational(e)} for c, e in self.terms
            ],
            "cutoff": None if self.cutoff is None else format_rational(self.cutoff),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "NovikovSeries":
        cutoff = data.get("cutoff")
        return cls(
            tuple((rational(t["coeff"]), rational(t["exp"])) for t in data["terms"]),
            None if cutoff is None else rational(cutoff),
        )


def series_mul(a: NovikovSeries, b: NovikovSeries) -> NovikovSeries:
    cutoff = _min_cutoff(a.cutoff, b.cutoff)
    terms = []
    for ca, ea in a.terms:
        for cb, eb in b.terms:
            e = ea + eb
            if cutoff is None or e < cutoff:
                terms.append((ca * cb, e))
    return NovikovSeries(tuple(terms), cutoff)


def series_invert(a: NovikovSeries) -> NovikovSeries:
    """Inverse of ``a``, exact for monomials and truncated otherwise.

    If ``a`` is known modulo ``T**E`` and has valuation ``v`` the inverse
    is known modulo ``T**(E - 2v)``.
    """
    if a.is_zero():
        raise ZeroSeries("cannot invert the zero series")
    lead = a.leading()
    if a.is_monomial():
        cutoff = None if a.cutoff is None else a.cutoff - 2 * lead.exponent
        return NovikovSeries(((1 / lead.coeff, -lead.exponent),), cutoff)
    if a.cutoff is None:
        raise CutoffRequired("inverting a non-monomial series needs a finite cutoff")
    # a = c T^v (1 + r) with val(r) > 0
    unit_cutoff = a.cutoff - lead.exponent
    r = NovikovSeries(
        tuple((c / lead.coeff, e - lead.exponent) for c, e in a.terms[1:]), unit_cutoff
    )
    step = r.valuation()
    total = NovikovSeries.one(unit_cutoff)
    power = NovikovSeries.one(unit_cutoff)
    j = 0
    while (j + 1) * step < unit_cutoff:
        power = power * (-r)
        total = total + power
        j += 1
    return NovikovSeries(
        tuple((c / lead.coeff, e - lead.exponent) for c, e in total.terms),
        unit_cutoff - lead.exponent,
    )


Key = tuple[int, ...]


class LaurentPolynomial:
    """Laurent polynomial in ``nvars`` variables with Novikov coefficients."""

    __slots__ = ("nvars", "_terms", "cutoff", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Key, object] | Iterable = (), cutoff=None):
        self.nvars = nvars
        self.cutoff = None if cutoff is None else rational(cutoff)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Key, NovikovSeries] = {}
        for key, coeff in items:
            key = tuple(int(k) for k in key)
            if len(key) != nvars:
                raise ValueError(f"exponent {key} does not have {nvars} entries")
            coeff = NovikovSeries.coerce(coeff)
            if self.cutoff is not None:
                coeff = coeff.truncate(self.cutoff)
            acc[key] = acc[key] + coeff if key in acc else coeff
        self._terms = {k: v for k, v in sorted(acc.items()) if not v.is_zero()}
        self._hash = None

    # subclasses override to keep their metadata
    def _new(self, terms, cutoff):
        return LaurentPolynomial(self.nvars, terms, cutoff)

    def _check_compatible(self, other):
        if not isinstance(other, LaurentPolynomial) or other.nvars != self.nvars:
            raise TypeError("expressions live in different rings")

    @property
    def terms(self) -> dict[Key, NovikovSeries]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def constant(self, coeff=1):
        return self._new({(0,) * self.nvars: coeff}, self.cutoff)

    def monomial(self, key: Sequence[int], coeff=1):
        return self._new({tuple(key): coeff}, self.cutoff)

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return (
            type(self) is type(other)
            and self._metadata() == other._metadata()
            and self._terms == other._terms
            and self.cutoff == other.cutoff
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._metadata(), tuple(self._terms.items()), self.cutoff))
        return self._hash

    def _metadata(self):
        return (self.nvars,)

    def equal_mod(self, other: "LaurentPolynomial", cutoff) -> bool:
        return self.truncate(cutoff)._terms == other.truncate(cutoff)._terms

    def truncate(self, cutoff):
        return self._new(self._terms, _min_cutoff(self.cutoff, rational(cutoff)))

    def with_cutoff(self, cutoff):
        """Same terms, cutoff replaced (terms above it are dropped)."""
        return self._new(self._terms, cutoff)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, NovikovSeries)):
            other = self.constant(other)
        self._check_compatible(other)
        merged = list(self._terms.items()) + list(other._terms.items())
        return self._new(merged, _min_cutoff(self.cutoff, other.cutoff))

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self._terms.items()}, self.cutoff)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, NovikovSeries)):
            return self._new({k: v * other for k, v in self._terms.items()}, self.cutoff)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        self._check_compatible(other)
        cutoff = _min_cutoff(self.cutoff, other.cutoff)
        out = []
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                out.append((tuple(x + y for x, y in zip(ka, kb)), ca * cb))
        return self._new(out, cutoff)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return expr_pow(self, k)

    def scale_T(self, amount):
        """Multiply every coefficient by ``T**amount``."""
        return self._new(
            {k: v.shift(amount) for k, v in self._terms.items()}, _plus(self.cutoff, amount)
        )

    def min_valuation(self):
        vals = [c.valuation() for c in self._terms.values()]
        return min(vals) if vals else None

    def map_exponents(self, fn):
        """Apply ``fn`` to every exponent key (coefficients unchanged)."""
        return self._new([(fn(k), v) for k, v in self._terms.items()], self.cutoff)

    def substitute(self, images: Sequence["LaurentPolynomial"]):
        """Replace variable ``i`` by ``images[i]`` (all in one target ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if not images:
            raise ValueError("nothing to substitute")
        result = images[0].constant(0)
        cache: dict[tuple[int, int], LaurentPolynomial] = {}
        for key, coeff in self._terms.items():
            term = images[0].constant(coeff)
            for i, e in enumerate(key):
                if e == 0:
                    continue
                if (i, e) not in cache:
                    cache[(i, e)] = expr_pow(images[i], e)
                term = term * cache[(i, e)]
            result = result + term
        if self.cutoff is not None:
            result = result.truncate(self.cutoff)
        return result

    def format(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"z{i + 1}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        parts = []
        for key, coeff in self._terms.items():
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(names, key) if e != 0
            )
            c = str(coeff)
            if not mono:
                parts.append(c)
            elif c == "1":
                parts.append(mono)
            elif c == "-1":
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"{type(self).__name__}({self.format()})"


def expr_pow(e: LaurentPolynomial, k: int):
    """Integer power of an expression, including negative powers.

    A monomial inverts exactly.  Otherwise ``e`` is factored as its unique
    lowest-valuation term times ``1 + r`` and ``(1 + r)**-1`` is expanded as
    a geometric series, which needs a finite cutoff.
    """
    if k == 0:
        return e.constant(1)
    if k > 0:
        result, base = None, e
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result
    if e.is_zero():
        raise NotInvertible("zero is not invertible")
    if e.is_monomial():
        (key, coeff), = e.items()
        inv_coeff = series_invert(coeff)
        inv = e._new({tuple(-x for x in key): inv_coeff}, inv_coeff.cutoff)
        return expr_pow(inv, -k)
    lead_val = e.min_valuation()
    leaders = [(key, c) for key, c in e.items() if c.valuation() == lead_val]
    if len(leaders) != 1:
        raise NotInvertible("no unique lowest-order term, so the expression is not a unit")
    if e.cutoff is None:
        raise CutoffRequired("negative power of a non-monomial expression needs a cutoff")
    lead_key, lead_coeff = leaders[0]
    scale = 1 / lead_coeff.leading().coeff

    def divide_by_lead(terms, cutoff):
        return e._new(
            [
                (tuple(a - b for a, b in zip(key, lead_key)), c.shift(-lead_val) * scale)
                for key, c in terms
            ],
            cutoff,
        )

    # e = lead * (1 + r) where every coefficient of r has positive valuation
    unit_cutoff = e.cutoff - lead_val
    r = divide_by_lead(e.items(), unit_cutoff) - 1
    total = r.constant(1)
    if not r.is_zero():
        step = r.min_valuation()
        power = total
        j = 1
        while j * step < unit_cutoff:
            power = power * (-r)
            total = total + power
            j += 1
    inv = divide_by_lead(total.items(), unit_cutoff - lead_val)
    return expr_pow(inv, -k)


def binomial_expansion(x: LaurentPolynomial, k: int) -> LaurentPolynomial:
    """``sum_l C(k, l) x**l`` for ``k >= 0``, i.e. ``(1 + x)**k`` termwise."""
    total = x.constant(0)
    for ell in range(k + 1):
        total = total + expr_pow(x, ell) * comb(k, ell)
    return total


class ChartExpression(LaurentPolynomial):
    """Laurent expression in chart coordinates ``v_1..v_n`` and ``v0``.

    Keys are ``m + p`` where ``m`` has ``n`` entries (the torus part) and
    ``p`` has ``d`` entries (powers of the ``v0`` coordinates; ``d = 1``
    for hypersurfaces).  ``chart`` labels the chart the expression lives in.
    """

    __slots__ = ("n", "d", "chart")

    def __init__(self, n: int, terms=(), cutoff=None, chart=None, d: int = 1):
        self.n = n
        self.d = d
        self.chart = chart
        super().__init__(n + d, terms, cutoff)

    def _new(self, terms, cutoff):
        return ChartExpression(self.n, terms, cutoff, self.chart, self.d)

    def _metadata(self):
        return (self.n, self.d, self.chart)

    def _check_compatible(self, other):
        if not isinstance(other, ChartExpression):
            raise TypeError("cannot mix chart expressions with plain polynomials")
        if (other.n, other.d) != (self.n, self.d):
            raise TypeError("chart expressions of different shapes")
        if other.chart != self.chart:
            raise ValueError(f"expressions written in charts {self.chart} and {other.chart}")

    @classmethod
    def term(cls, n: int, m: Sequence[int], v0pow, coeff=1, chart=None, d: int = 1, cutoff=None):
        if isinstance(v0pow, int):
            v0pow = (v0pow,)
        return cls(n, {tuple(m) + tuple(v0pow): coeff}, cutoff, chart, d)

    @classmethod
    def v0(cls, n: int, chart=None, index: int = 0, d: int = 1):
        p = [0] * d
        p[index] = 1
        return cls.term(n, (0,) * n, p, 1, chart, d)

    def relabel(self, chart):
        return ChartExpression(self.n, self._terms, self.cutoff, chart, self.d)

    def split(self, key: Key) -> tuple[Key, Key]:
        return key[: self.n], key[self.n :]

    def v0pow(self, key: Key) -> int:
        if self.d != 1:
            raise ValueError("v0pow is only defined for a single v0 coordinate")
        return key[self.n]

    def chart_terms(self):
        """Iterate ``(m, p, coeff)`` with ``p`` the tuple of v0 powers."""
        for key, coeff in self._terms.items():
            yield key[: self.n], key[self.n :], coeff

    def is_regular(self) -> bool:
        return all(min(p) >= 0 for _, p, _ in self.chart_terms()) if self.d else True

    def format(self, names=None):
        if names is None:
            names = [f"v{i + 1}" for i in range(self.n)]
            names += ["v0"] if self.d == 1 else [f"v0_{i + 1}" for i in range(self.d)]
        return super().format(names)

    def to_json(self) -> dict:
        return {
            "chart": None if self.chart is None else list(self.chart),
            "terms": [
                {"m": list(m), "v0": list(p), "coeff": c.to_json()}
                for m, p, c in self.chart_terms()
            ],
            "cutoff": None if self.cutoff is None else format_rational(self.cutoff),
        }

