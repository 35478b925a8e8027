"""Hilbert functions, Hilbert-point weights and the Donaldson-Futaki invariant.

Counting is done on standard monomials of a monomial initial ideal.  For a
1-psg ``w`` the initial ideal is taken under the ``w``-weight order refined by
grevlex, so the same basis gives both the flat limit and the weight count.

Conventions (one table, used everywhere in the package):

=====================  ==========================================
quantity               definition here
=====================  ==========================================
Hilbert-point weight   sum of ``<w, alpha>`` over standard monomials
slope                  minus the weight, where both make sense
Chow-point slope       ``-(n+1)! * a_{n+1}``
``mu(X)``              ``2 * n! * b_n / d``
=====================  ==========================================
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Dict, FrozenSet, Optional, Sequence, Tuple

from .algebra import GREVLEX, OnePSG, format_rational, monomial_divides, monomial_weight, monomials_of_degree
from .groebner import Budget, Ideal, buchberger, weight_order

__all__ = [
    "RegularityNotReached",
    "NumericalPolynomial",
    "HilbertData",
    "WeightPolynomial",
    "interpolate",
    "standard_monomials",
    "hilbert_series_numerator",
    "hilbert_function",
    "hilbert_polynomial",
    "projective_dimension",
    "weight_function",
    "weight_polynomial",
    "donaldson_futaki",
    "hm_slope",
    "chow_slope_via_hilbert",
    "cm_weight",
    "DEFAULT_M_CAP",
]

DEFAULT_M_CAP = 40
CHECKS = 3


class RegularityNotReached(RuntimeError):
    """No stable polynomial closed form was found below the m-cap."""


@dataclass(frozen=True)
class NumericalPolynomial:
    """Rational polynomial in ``m`` (constant term first).

    ``claimed_from`` is the first ``m >= 0`` from which the closed form was
    seen to agree with the direct counts without interruption.
    """

    coefficients: Tuple[Fraction, ...]
    claimed_from: int = 0

    def __post_init__(self):
        cs = [Fraction(c) for c in self.coefficients]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coefficients", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return Fraction(0)

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def __call__(self, m) -> Fraction:
        total = Fraction(0)
        for c in reversed(self.coefficients):
            total = total * m + c
        return total

    def __str__(self):
        if not self.coefficients:
            return "0"
        pieces = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[k]
            if not c:
                continue
            mono = "" if k == 0 else ("m" if k == 1 else f"m^{k}")
            mag = abs(c)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            if not pieces:
                pieces.append(f"-{body}" if c < 0 else body)
            else:
                pieces.append(f" {'-' if c < 0 else '+'} {body}")
        return "".join(pieces)


@dataclass(frozen=True)
class HilbertData:
    P: NumericalPolynomial
    n: int
    d: int
    b_top: Fraction
    b_sub: Fraction
    mu: Fraction

    @property
    def arithmetic_genus(self) -> Fraction:
        """``1 - P(0)`` for curves; the geometric genus when the curve is smooth."""
        return 1 - self.P(0)


@dataclass(frozen=True)
class WeightPolynomial:
    W: NumericalPolynomial
    a_top: Fraction
    a_sub: Fraction
    n: int


def interpolate(points: Sequence[Tuple[int, int]]) -> Tuple[Fraction, ...]:
    """Coefficients (constant first) of the Lagrange interpolant through ``points``."""
    k = len(points)
    result = [Fraction(0)] * k
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xj * basis[t + 1]
            denom *= xi - xj
        scale = Fraction(yi) / denom
        for t, c in enumerate(basis):
            result[t] += scale * c
    return tuple(result)


def _minimize(gens) -> Tuple[Tuple[int, ...], ...]:
    gens = sorted(set(gens), key=lambda a: (sum(a), a))
    out = []
    for g in gens:
        if not any(monomial_divides(h, g) for h in out):
            out.append(g)
    return tuple(out)


def standard_monomials(leading, nvars: int, m: int):
    """Degree-``m`` monomials not divisible by any of ``leading``."""
    leading = [lm for lm in _minimize(leading) if sum(lm) <= m]
    for alpha in monomials_of_degree(nvars, m):
        if not any(monomial_divides(lm, alpha) for lm in leading):
            yield alpha


@lru_cache(maxsize=4096)
def _count(leading: Tuple[Tuple[int, ...], ...], nvars: int, m: int,
           weights: Tuple[int, ...]) -> Tuple[int, int]:
    count = total = 0
    for alpha in standard_monomials(leading, nvars, m):
        count += 1
        if weights:
            total += monomial_weight(alpha, weights)
    return count, total


def hilbert_series_numerator(leading, nvars: int, weights=None) -> Dict[Tuple[int, int], int]:
    """Numerator ``K(t, s)`` of the bigraded Hilbert series of ``S / (leading)``.

    ``sum_{alpha standard} t^{|alpha|} s^{<w, alpha>} = K(t, s) / prod_i (1 - t s^{w_i})``.
    Returned as ``{(t-degree, s-degree): coefficient}``.
    """
    w = tuple(weights) if weights is not None else (0,) * nvars
    return dict(_numerator(_minimize(leading), w))


@lru_cache(maxsize=4096)
def _numerator(gens: Tuple[Tuple[int, ...], ...], w: Tuple[int, ...]) -> FrozenSet:
    if not gens:
        return frozenset({((0, 0), 1)})
    if all(all(min(a, b) == 0 for a, b in zip(g, h))
           for i, g in enumerate(gens) for h in gens[i + 1:]):
        poly = {(0, 0): 1}
        for g in gens:
            step = (sum(g), monomial_weight(g, w))
            nxt = dict(poly)
            for (dt, ds), c in poly.items():
                key = (dt + step[0], ds + step[1])
                nxt[key] = nxt.get(key, 0) - c
            poly = {k: v for k, v in nxt.items() if v}
        return frozenset(poly.items())
    pivot = gens[-1]
    rest = gens[:-1]
    colon = _minimize(tuple(max(a - b, 0) for a, b in zip(g, pivot)) for g in rest)
    out = dict(_numerator(rest, w))
    shift = (sum(pivot), monomial_weight(pivot, w))
    for (dt, ds), c in _numerator(colon, w):
        key = (dt + shift[0], ds + shift[1])
        out[key] = out.get(key, 0) - c
    return frozenset((k, v) for k, v in out.items() if v)


def _regularity_start(leading, nvars: int, weights=None) -> int:
    """First ``m`` from which the counts are provably polynomial.

    With ``K`` the series numerator, every term ``t^j`` contributes a binomial
    that is polynomial in ``m`` for ``m >= j - (nvars - 1)``.
    """
    num = hilbert_series_numerator(leading, nvars, weights)
    top = max((dt for dt, _ in num), default=0)
    return max(0, top - (nvars - 1))


def _stabilize(values: Callable[[int], int], max_degree: int, start: int,
               m_cap: int) -> NumericalPolynomial:
    """Fit a polynomial of degree <= max_degree and confirm it on further values."""
    npts = max_degree + 1
    m0 = start
    cache: Dict[int, int] = {}

    def val(m):
        if m not in cache:
            cache[m] = values(m)
        return cache[m]

    while m0 + npts - 1 + CHECKS <= m_cap:
        pts = [(m, val(m)) for m in range(m0, m0 + npts)]
        poly = NumericalPolynomial(interpolate(pts))
        if all(poly(m) == val(m) for m in range(m0 + npts, m0 + npts + CHECKS)):
            first = m0
            while first > 0 and poly(first - 1) == val(first - 1):
                first -= 1
            return NumericalPolynomial(poly.coefficients, first)
        m0 += 1
    raise RegularityNotReached(
        f"regularity not reached: no stable closed form of degree <= {max_degree} "
        f"for m <= {m_cap}")


def _leading(ideal: Ideal, w=None, budget=None):
    order = GREVLEX if w is None else weight_order(w)
    gb = buchberger(ideal, order, budget)
    return _minimize(gb.leading_monomials())


def hilbert_function(ideal: Ideal, m: int, budget: Optional[Budget] = None) -> int:
    """``dim (S/I)_m``, the number of degree-``m`` standard monomials."""
    if m < 0:
        raise ValueError("degree must be nonnegative")
    return _count(_leading(ideal, None, budget), ideal.nvars, m, ())[0]


def _hilbert_numerical(ideal: Ideal, m_cap: int, budget) -> NumericalPolynomial:
    lead = _leading(ideal, None, budget)
    nvars = ideal.nvars
    start = _regularity_start(lead, nvars)
    return _stabilize(lambda m: _count(lead, nvars, m, ())[0], nvars - 1, start, m_cap)


def projective_dimension(ideal: Ideal, m_cap: int = DEFAULT_M_CAP,
                         budget: Optional[Budget] = None) -> int:
    """Dimension of ``V(I)`` in projective space; -1 when it is empty."""
    return _hilbert_numerical(ideal, m_cap, budget).degree


def hilbert_polynomial(ideal: Ideal, m_cap: int = DEFAULT_M_CAP,
                       budget: Optional[Budget] = None) -> HilbertData:
    """Hilbert polynomial together with ``n``, ``d``, ``b_{n+1}``, ``b_n`` and ``mu(X)``.

    ``mP(m) = b_{n+1} m^{n+1} + b_n m^n + ...`` so ``b_{n+1}`` and ``b_n`` are
    the top two coefficients of ``P``.
    """
    P = _hilbert_numerical(ideal, m_cap, budget)
    n = P.degree
    if n < 0:
        raise ValueError("the ideal defines the empty set (Hilbert polynomial is zero)")
    d = P.leading * factorial(n)
    if d.denominator != 1 or d <= 0:
        raise ArithmeticError(f"non-integral degree {d}")
    b_top = P.coefficient(n)
    b_sub = P.coefficient(n - 1) if n >= 1 else Fraction(0)
    mu = 2 * factorial(n) * b_sub / d
    return HilbertData(P, n, int(d), b_top, b_sub, mu)


def weight_function(ideal: Ideal, w, m: int, budget: Optional[Budget] = None) -> int:
    """Total ``w``-weight of the degree-``m`` standard monomials of ``in_w(I)``."""
    w = w if isinstance(w, OnePSG) else OnePSG(w)
    if len(w) != ideal.nvars:
        raise ValueError("weight length does not match the ring")
    if w.is_trivial:
        return 0
    return _count(_leading(ideal, w, budget), ideal.nvars, m, w.weights)[1]


def weight_polynomial(ideal: Ideal, w, m_cap: int = DEFAULT_M_CAP,
                      budget: Optional[Budget] = None,
                      hilbert: Optional[HilbertData] = None) -> WeightPolynomial:
    """Closed form ``W(m)`` of the Hilbert-point weight, with ``a_{n+1}`` and ``a_n``."""
    w = w if isinstance(w, OnePSG) else OnePSG(w)
    if len(w) != ideal.nvars:
        raise ValueError("weight length does not match the ring")
    hd = hilbert if hilbert is not None else hilbert_polynomial(ideal, m_cap, budget)
    n = hd.n
    if w.is_trivial:
        return WeightPolynomial(NumericalPolynomial((), 0), Fraction(0), Fraction(0), n)
    lead = _leading(ideal, w, budget)
    start = _regularity_start(lead, ideal.nvars, w.weights)
    W = _stabilize(lambda m: _count(lead, ideal.nvars, m, w.weights)[1], n + 1, start, m_cap)
    return WeightPolynomial(W, W.coefficient(n + 1), W.coefficient(n), n)


def donaldson_futaki(ideal: Ideal, w, m_cap: int = DEFAULT_M_CAP,
                     budget: Optional[Budget] = None) -> Fraction:
    """Donaldson's ``F_1 = (n!/2d) (2 a_n - mu a_{n+1})``."""
    hd = hilbert_polynomial(ideal, m_cap, budget)
    wp = weight_polynomial(ideal, w, m_cap, budget, hilbert=hd)
    return futaki_from_coefficients(hd, wp)


def futaki_from_coefficients(hd: HilbertData, wp: WeightPolynomial) -> Fraction:
    return Fraction(factorial(hd.n), 2 * hd.d) * (2 * wp.a_sub - hd.mu * wp.a_top)


def hm_slope(weights: Sequence[int], support: Sequence[bool]) -> int:
    """Hilbert-Mumford slope ``max{-m_i : v_i != 0}`` of a vector in a diagonal basis."""
    if len(weights) != len(support):
        raise ValueError("weights and support have different lengths")
    values = [-m for m, s in zip(weights, support) if s]
    if not values:
        raise ValueError("the zero vector has no slope")
    return max(values)


def chow_slope_via_hilbert(wp: WeightPolynomial, n: int) -> Fraction:
    return -factorial(n + 1) * wp.a_top


def cm_weight(n: int, nu1, chow_w, fD_w) -> Fraction:
    """``nu_1 w(Chow) - (n+1) w(f_D)``; valid only when the limit cycle is reduced."""
    return Fraction(nu1) * Fraction(chow_w) - (n + 1) * Fraction(fD_w)
