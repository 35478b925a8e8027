"""Explicit slopes for hypersurfaces ``{f = 0}`` in ``P^{n+1}``.

The piecewise-linear profiles ``psi_i`` are lower envelopes, over the support
of ``f``, of the lines ``r -> -<w, alpha> + alpha_i r``.  Their slope defect
integrals ``int psi'(psi' - 1) dr`` correct the naive slope when the flat
limit is non-reduced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

from .algebra import OnePSG, Polynomial, monomial_weight
from .groebner import Budget, Ideal, is_multiplicity_free

__all__ = [
    "PLFunction",
    "HypersurfaceProblem",
    "DivergentIntegralError",
    "MultipleFibersError",
    "hypersurface_slope",
    "psi_profile",
    "lu_integral",
    "lu_slope",
    "refined_futaki",
    "coefficient_identity_check",
    "mabuchi_coefficient",
]


class DivergentIntegralError(ArithmeticError):
    pass


class MultipleFibersError(ValueError):
    pass


@dataclass(frozen=True)
class PLFunction:
    """Continuous concave piecewise-linear function on ``[0, inf)``.

    ``pieces`` holds ``(start, slope, value_at_start)``; the last piece runs to
    infinity.  Slopes strictly decrease from piece to piece.
    """

    pieces: Tuple[Tuple[Fraction, int, Fraction], ...]

    @classmethod
    def lower_envelope(cls, lines: Iterable[Tuple[object, int]]) -> "PLFunction":
        """``r -> min_k (b_k + a_k r)`` for lines given as ``(b_k, a_k)``."""
        lines = sorted({(Fraction(b), int(a)) for b, a in lines}, key=lambda l: (l[0], l[1]))
        if not lines:
            raise ValueError("lower envelope of no lines")
        b, a = min(lines, key=lambda l: (l[0], l[1]))
        r = Fraction(0)
        pieces = [(r, a, b)]
        while True:
            best = None
            for b2, a2 in lines:
                if a2 >= a:
                    continue
                cross = (b2 - b) / (a - a2)
                if cross < r:
                    cross = r
                cand = (cross, a2, b2)
                if best is None or (cand[0], cand[1]) < (best[0], best[1]):
                    best = cand
            if best is None:
                break
            cross, a2, b2 = best
            value = b2 + a2 * cross
            if cross == pieces[-1][0]:
                pieces[-1] = (cross, a2, value)
            else:
                pieces.append((cross, a2, value))
            r, a, b = cross, a2, b2
        return cls(tuple(pieces))

    def __call__(self, r) -> Fraction:
        r = Fraction(r)
        if r < 0:
            raise ValueError("PLFunction is defined on [0, inf)")
        start, slope, value = self.pieces[0]
        for piece in self.pieces:
            if piece[0] <= r:
                start, slope, value = piece
            else:
                break
        return value + slope * (r - start)

    @property
    def slopes(self) -> Tuple[int, ...]:
        return tuple(p[1] for p in self.pieces)

    @property
    def breakpoints(self) -> Tuple[Fraction, ...]:
        return tuple(p[0] for p in self.pieces[1:])

    @property
    def eventual_slope(self) -> int:
        return self.pieces[-1][1]

    def is_concave(self) -> bool:
        return all(a > b for a, b in zip(self.slopes, self.slopes[1:]))

    def is_continuous(self) -> bool:
        for (s0, a0, v0), (s1, _, v1) in zip(self.pieces, self.pieces[1:]):
            if v0 + a0 * (s1 - s0) != v1:
                return False
        return True


class HypersurfaceProblem:
    """A hypersurface ``f = 0`` in ``P^{n+1}`` and a diagonal 1-psg.

    ``weights`` keeps the caller's vector; ``traceless`` is its integral
    traceless normalization ``scale * (w - shift)``.  Quantities that need a
    traceless 1-psg are computed on ``traceless`` and divided by ``scale``.
    """

    def __init__(self, f: Polynomial, w):
        if f.is_zero():
            raise ValueError("the zero polynomial does not define a hypersurface")
        if not f.is_homogeneous():
            raise ValueError("hypersurface equation must be homogeneous")
        if f.degree() < 1:
            raise ValueError("a constant does not define a hypersurface")
        w = w if isinstance(w, OnePSG) else OnePSG(w)
        if len(w) != f.nvars:
            raise ValueError(f"weight has {len(w)} entries, ring has {f.nvars} variables")
        if f.nvars < 3:
            raise ValueError("need at least three variables (n >= 1)")
        self.f = f
        self.weights = w
        self.traceless, self.scale, self.shift = w.normalized()
        self.d = f.degree()
        self.n = f.nvars - 2

    @classmethod
    def parse(cls, text: str, w: Sequence[int]) -> "HypersurfaceProblem":
        return cls(Polynomial.parse(text, len(w)), w)

    def __repr__(self):
        return f"HypersurfaceProblem({str(self.f)!r}, {list(self.weights)})"


def hypersurface_slope(p: HypersurfaceProblem) -> int:
    """``mu(lambda, f) = max <w, alpha>`` over the support of ``f`` (caller's weights)."""
    return max(monomial_weight(a, p.weights) for a in p.f.support())


def _traceless_slope(p: HypersurfaceProblem) -> int:
    return max(monomial_weight(a, p.traceless) for a in p.f.support())


def psi_profile(p: HypersurfaceProblem, i: int, weights: Optional[OnePSG] = None) -> PLFunction:
    """``psi_i(r)``: the envelope with ``r`` in slot ``i`` and zeros elsewhere."""
    if not 0 <= i < p.f.nvars:
        raise IndexError(f"profile index {i} outside 0..{p.f.nvars - 1}")
    w = p.weights if weights is None else weights
    return PLFunction.lower_envelope(
        (-monomial_weight(a, w), a[i]) for a in p.f.support())


def lu_integral(psi: PLFunction) -> Fraction:
    """Exact value of ``int_0^inf psi'(psi' - 1) dr``."""
    if psi.eventual_slope >= 2:
        raise DivergentIntegralError(
            "divergent: initial data non-reduced along coordinate hyperplane "
            f"(eventual slope {psi.eventual_slope})")
    total = Fraction(0)
    for (start, slope, _), (end, _, _) in zip(psi.pieces, psi.pieces[1:]):
        total += slope * (slope - 1) * (end - start)
    return total


def lu_slope(p: HypersurfaceProblem) -> Fraction:
    """``(2/d) (mu(lambda,f) (n+2)(d-1)/(n+1) - sum_i int psi_i'(psi_i' - 1))``.

    Evaluated on the traceless normalization and divided back by its scale.
    """
    d, n = p.d, p.n
    mu = _traceless_slope(p)
    correction = sum(lu_integral(psi_profile(p, i, p.traceless)) for i in range(n + 2))
    value = Fraction(2, d) * (Fraction(mu * (n + 2) * (d - 1), n + 1) - correction)
    return value / p.scale


def refined_futaki(d: int, n: int, mu_X, slope_RX, slope_fD) -> Fraction:
    """``(2/d) ((2d + mu(X)/(n+1) - (n+2)) mu(lambda, R_X) - mu(lambda, f_D))``."""
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    coeff = 2 * d + Fraction(mu_X) / (n + 1) - (n + 2)
    return Fraction(2, d) * (coeff * Fraction(slope_RX) - Fraction(slope_fD))


def coefficient_identity_check(d: int, n: int) -> bool:
    """Whether ``2d + mu/(n+1) - (n+2) == (n+2)(d-1)/(n+1)`` with ``mu = n(n+2-d)``."""
    mu = n * (n + 2 - d)
    lhs = 2 * d + Fraction(mu, n + 1) - (n + 2)
    rhs = Fraction((n + 2) * (d - 1), n + 1)
    return lhs == rhs


def mabuchi_coefficient(p: HypersurfaceProblem, slope_fD=0, mu_X=None,
                        budget: Optional[Budget] = None) -> Fraction:
    """Coefficient of ``log t`` in the K-energy along a multiplicity-free degeneration.

    ``mu_X`` defaults to the value read off the Hilbert polynomial of ``(f)``.
    """
    if not is_multiplicity_free(p.f, p.traceless, budget):
        raise MultipleFibersError("multiple fibers: asymptotic formula not applicable")
    if mu_X is None:
        from .hilbert import hilbert_polynomial
        mu_X = hilbert_polynomial(Ideal([p.f]), budget=budget).mu
    slope_RX = Fraction(_traceless_slope(p), p.scale)
    return -refined_futaki(p.d, p.n, mu_X, slope_RX, slope_fD)
