"""Closed-form lower and upper bounds, evaluated exactly where it matters.

Exponents are :class:`fractions.Fraction`; bound values are floats.  Every
value function also accepts ``precise=True`` and then evaluates the same
formula in 50-digit :mod:`mpmath` arithmetic, which the tests use as a second
arithmetic path.  Outside its proven range a bound raises
:class:`NotApplicable` instead of extrapolating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from .core import ParamTriple, as_params
from .errors import DegenerateParams, NotApplicable

mpmath.mp.dps = 50


def _pow(base, expo, precise):
    if precise:
        return mpmath.power(mpmath.mpf(base), mpmath.mpf(expo.numerator) / expo.denominator)
    return float(base) ** (expo.numerator / expo.denominator)


def _num(x, precise):
    return mpmath.mpf(x) if precise else float(x)


def _require(cond, name):
    if not cond:
        raise NotApplicable(name)


# -- exponents -------------------------------------------------------------------


def lower_exponent(params) -> Fraction:
    """``r - 1 + (q + r)/(k - 1)`` (equivalently ``(kr - k + q + 1)/(k - 1)``)."""
    r, k, q = as_params(params)
    return r - 1 + Fraction(q + r, k - 1)


def upper_exponent(params) -> Fraction:
    """``r - 1 + 1/floor(k/(q + r + 1))`` from the hypergraph upper bound."""
    r, k, q = as_params(params)
    return r - 1 + Fraction(1, k // (q + r + 1))


def cbc_exponent(r: int, k: int) -> Fraction:
    """Exponent of the batch-code upper bound, ``r - 1 + 1/floor(k/(r + 1))``."""
    _require(r >= 2 and k >= r + 1, "r >= 2 and k >= r+1")
    return r - 1 + Fraction(1, k // (r + 1))


def competing_exponent_bb(r: int) -> Fraction:
    """``r - 1/2**(r - 1)``: the earlier batch-code upper bound exponent."""
    _require(r >= 3, "r >= 3")
    return r - Fraction(1, 2 ** (r - 1))


# -- upper bounds ----------------------------------------------------------------


def graph_upper(n: int, k: int, q: int, precise: bool = False):
    """``C * n**(1 + 1/h) + (q + 2) * n`` with ``h = floor(k/(q+3))``, ``C = (q+2)**(1/h)``.

    Valid for ``q >= -1``, ``k >= 2q + 6`` and ``n >= k``; the edge count of
    every free graph is strictly below this value.
    """
    _require(q >= -1, "q >= -1")
    _require(k >= 2 * q + 6, "k >= 2q+6")
    _require(n >= k, "n >= k")
    h = k // (q + 3)
    C = _pow(q + 2, Fraction(1, h), precise)
    return C * _pow(n, 1 + Fraction(1, h), precise) + _num((q + 2) * n, precise)


def hypergraph_upper(n: int, params, precise: bool = False):
    """``(2C'/r!) n**(r-1+1/t) + (2(q+r)/r!) n**(r-1)`` with ``t = floor(k/(q+r+1))``.

    ``C' = (q+r)**(1/t)``.  Needs ``n >= k >= 2q + 2r + 2``.  The same
    value bounds the multihypergraph variant.
    """
    r, k, q = as_params(params)
    _require(n >= k, "n >= k")
    _require(k >= 2 * q + 2 * r + 2, "k >= 2q+2r+2")
    t = k // (q + r + 1)
    fact = _num(math.factorial(r), precise)
    C = _pow(q + r, Fraction(1, t), precise)
    lead = 2 * C / fact * _pow(n, r - 1 + Fraction(1, t), precise)
    return lead + 2 * _num(q + r, precise) / fact * _pow(n, Fraction(r - 1), precise)


def cbc_upper(n: int, r: int, k: int, precise: bool = False):
    """Upper bound on the size of an ``r``-uniform batch code, ``n >= k >= 2r + 2``.

    ``(2C''/r!) n**(r-1+1/t) + (2/(r-1)!) n**(r-1)`` with ``t = floor(k/(r+1))``
    and ``C'' = r**(1/t)``.
    """
    _require(r >= 2, "r >= 2")
    _require(n >= k, "n >= k")
    _require(k >= 2 * r + 2, "k >= 2r+2")
    t = k // (r + 1)
    C = _pow(r, Fraction(1, t), precise)
    lead = 2 * C / _num(math.factorial(r), precise) * _pow(n, r - 1 + Fraction(1, t), precise)
    return lead + 2 / _num(math.factorial(r - 1), precise) * _pow(n, Fraction(r - 1), precise)


def diff_upper_general(n: int, r: int, k: int, q: Optional[int] = None) -> int:
    """``(k - 1) * C(n - 1, r - 1)``: how far the two Turán numbers can drift apart.

    ``q``, when given, is only used to check ``2 <= q + r + 1 <= k``.
    """
    _require(r >= 2, "r >= 2")
    _require(k <= n, "k <= n")
    _require(k >= 2, "k >= 2")
    if q is not None:
        _require(2 <= q + r + 1 <= k, "2 <= q+r+1 <= k")
    return (k - 1) * math.comb(n - 1, r - 1)


@dataclass(frozen=True)
class PartialBound:
    """A bound whose additive lower-order part is only known to exist.

    ``value`` is what can be evaluated; ``omitted`` names the term left out
    and ``substitute`` gives an explicit stand-in when one is available.
    """

    value: float
    leading: float
    omitted: str
    substitute: Optional[float] = None

    @property
    def with_substitute(self) -> float:
        return self.value if self.substitute is None else self.leading + self.substitute


def f_upper_r2(n: int, v: int, k: int, precise: bool = False) -> PartialBound:
    """Graph bound for ``f(n, v, k)`` without its unknown constant ``D``.

    Writing ``q = k - v - 1`` this is the graph upper bound's formula, so
    ``value == C n**(1 + 1/h) + (k - v + 1) n`` with ``h = floor(k/(k-v+2))``.
    """
    _require(2 <= v <= k, "2 <= v <= k")
    h = k // (k - v + 2)
    C = _pow(k - v + 1, Fraction(1, h), precise)
    lead = C * _pow(n, 1 + Fraction(1, h), precise)
    value = lead + _num((k - v + 1) * n, precise)
    return PartialBound(value, lead, "D")


def f_upper_general(n: int, r: int, v: int, k: int, precise: bool = False) -> PartialBound:
    """Bound on ``f^(r)(n, v, k)`` for ``(k + 2r)/2 <= v <= k + r - 2``.

    The leading term is ``(2C/r!) n**(r-1+1/t)`` with ``t = floor(k/(k+r-v))``
    and ``C = (k+r-v-1)**(1/t)``.  The ``O(n**(r-1))`` remainder is replaced
    by ``(2(q+r)/r!) n**(r-1) + (k-1) C(n-1, r-1)`` with ``q = k - v - 1``.
    """
    _require(r >= 2, "r >= 2")
    _require(2 * v >= k + 2 * r and v <= k + r - 2, "(k+2r)/2 <= v <= k+r-2")
    _require(n >= k, "n >= k")
    q = k - v - 1
    t = k // (k + r - v)
    fact = _num(math.factorial(r), precise)
    C = _pow(k + r - v - 1, Fraction(1, t), precise)
    lead = 2 * C / fact * _pow(n, r - 1 + Fraction(1, t), precise)
    rest = 2 * _num(q + r, precise) / fact * _pow(n, Fraction(r - 1), precise)
    rest += _num((k - 1) * math.comb(n - 1, r - 1), precise)
    return PartialBound(lead, lead, "O(n^(r-1))", rest)


# -- the difference constant for graphs ------------------------------------------


def z_value(k: int, q: int) -> Optional[int]:
    """Fewest edges of a simple forbidden graph: least ``i >= q+3`` with ``i <= C(i-q-1, 2)``.

    ``None`` when no such ``i <= k`` exists; then nothing is forbidden and
    both Turán numbers equal ``C(n, 2)``.
    """
    _require(q >= -1 and k >= q + 3, "q >= -1 and k >= q+3")
    for i in range(q + 3, k + 1):
        if i <= math.comb(i - q - 1, 2):
            return i
    return None


def d_constant_estimate(k: int, q: int, n_max: int, ex=None) -> Fraction:
    """Truncated version of the graph difference constant ``d(k, q)``.

    ``max({z/(z-q-1) * n - ex(n) + 1 : 1 <= n <= n_max} | {1})`` with exact
    Turán numbers.  Since only finitely many ``n`` are inspected this is a
    lower estimate of the true constant.  ``ex`` may supply the values
    (a callable ``n -> int``); by default they come from exact search.
    """
    z = z_value(k, q)
    best = Fraction(1)
    if z is None:
        return best
    if ex is None:
        from .exact import exact_ex

        def ex(n):
            return exact_ex(n, (2, k, q)).value

    ratio = Fraction(z, z - q - 1)
    for n in range(1, n_max + 1):
        best = max(best, ratio * n - ex(n) + 1)
    return best


# -- aggregate report ------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    params: ParamTriple
    n: int
    lower_exponent: Fraction
    upper_exponent: Fraction
    graph_upper: Optional[float] = None
    hypergraph_upper: Optional[float] = None
    cbc_upper: Optional[float] = None
    diff_upper: Optional[int] = None
    cbc_exponent: Optional[Fraction] = None
    bb_exponent: Optional[Fraction] = None
    not_applicable: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        r, k, q = self.params
        out = {"n": self.n, "r": r, "k": k, "q": q}
        for name in (
            "lower_exponent",
            "upper_exponent",
            "cbc_exponent",
            "bb_exponent",
            "graph_upper",
            "hypergraph_upper",
            "cbc_upper",
            "diff_upper",
        ):
            val = getattr(self, name)
            out[name] = str(val) if isinstance(val, Fraction) else val
        out["not_applicable"] = dict(sorted(self.not_applicable.items()))
        return out


def bound_report(n: int, params) -> BoundReport:
    """Evaluate every bound that applies at ``(n, r, k, q)``."""
    pt = as_params(params)
    r, k, q = pt
    vals = {}
    skipped = {}

    def attempt(name, fn, *args):
        try:
            vals[name] = fn(*args)
        except NotApplicable as exc:
            skipped[name] = exc.precondition
        except DegenerateParams as exc:
            skipped[name] = str(exc)

    if r == 2:
        attempt("graph_upper", graph_upper, n, k, q)
    else:
        skipped["graph_upper"] = "r == 2"
    attempt("hypergraph_upper", hypergraph_upper, n, pt)
    attempt("cbc_upper", cbc_upper, n, r, k)
    attempt("diff_upper", diff_upper_general, n, r, k, q)
    attempt("cbc_exponent", cbc_exponent, r, k)
    attempt("bb_exponent", competing_exponent_bb, r)
    return BoundReport(pt, n, lower_exponent(pt), upper_exponent(pt), not_applicable=skipped, **vals)
