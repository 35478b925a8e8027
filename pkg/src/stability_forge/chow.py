"""Chow-side geometry: bidegrees, projections, Schubert calculus and constants.

Schubert classes on ``Gr(k, N+1)`` are indexed by partitions in the
``k x (N+1-k)`` box; ``sigma_p`` is ``c_p`` of the universal quotient bundle.
Products are computed with the Pieri rule, general classes through
Giambelli's determinant in the special classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import permutations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .algebra import Polynomial
from .groebner import Budget, Ideal, eliminate
from .hilbert import DEFAULT_M_CAP, hilbert_polynomial, projective_dimension

__all__ = [
    "Partition",
    "Bidegree",
    "InvariantBundle",
    "Witness",
    "CenterOnCurveError",
    "NonGenericCenterError",
    "bidegree_curve",
    "project_curve",
    "projection_node_count",
    "pieri",
    "schubert_integral",
    "grassmannian_degree",
    "stability_constants",
    "singular_divisor_volume",
    "double_chow_value",
    "double_chow_verdict",
]


@dataclass(frozen=True, order=True)
class Partition:
    parts: Tuple[int, ...] = ()

    def __init__(self, parts: Iterable[int] = ()):
        ps = [int(p) for p in parts]
        if any(p < 0 for p in ps):
            raise ValueError("partition parts must be nonnegative")
        if any(a < b for a, b in zip(ps, ps[1:])):
            raise ValueError(f"partition {ps} is not weakly decreasing")
        while ps and ps[-1] == 0:
            ps.pop()
        object.__setattr__(self, "parts", tuple(ps))

    @classmethod
    def special(cls, p: int) -> "Partition":
        return cls((p,)) if p else cls()

    @classmethod
    def rectangle(cls, rows: int, cols: int) -> "Partition":
        return cls((cols,) * rows)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def fits(self, k: int, cols: int) -> bool:
        return len(self.parts) <= k and all(p <= cols for p in self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return "sigma_" + ("".join(map(str, self.parts)) if self.parts else "0")


@dataclass(frozen=True)
class Bidegree:
    d1: int
    d2: int


class Witness(str, Enum):
    STABLE = "stable-witness"
    NOT_STABLE = "not-stable-witness"


@dataclass(frozen=True)
class InvariantBundle:
    d: int
    n: int
    N: int
    mu: Fraction
    D: int
    beta: int
    nu1: Fraction
    nu2: Fraction

    @property
    def volume(self) -> Fraction:
        return singular_divisor_volume(self.d, self.n, self.D, self.beta, self.mu)


def bidegree_curve(d: int, g: int) -> Bidegree:
    """Bidegree ``(d(d-1)/2, (d-1)(d-2)/2 - g)`` of the singular divisor of a curve."""
    if d < 1:
        raise ValueError("degree must be positive")
    top = (d - 1) * (d - 2) // 2
    if not 0 <= g <= top:
        raise ValueError(f"genus {g} outside the range 0..{top} for degree {d}")
    return Bidegree(d * (d - 1) // 2, top - g)


# -- projections of space curves ---------------------------------------------

class CenterOnCurveError(ValueError):
    pass


class NonGenericCenterError(ValueError):
    """The projection is not a nodal model of the curve."""

    def __init__(self, message, image=None, singular_degree=None):
        super().__init__(message)
        self.image = image
        self.singular_degree = singular_degree


def project_curve(ideal: Ideal, center: Sequence, budget: Optional[Budget] = None) -> Polynomial:
    """Equation of the image of a space curve under projection from ``center``.

    Coordinates on the target plane are ``x_i - (p_i/p_j) x_j`` for ``i != j``,
    where ``j`` is the first nonzero coordinate of the center.
    """
    if ideal.nvars != 4:
        raise ValueError("projection expects a curve in P^3 (four variables)")
    p = [Fraction(c) for c in center]
    if len(p) != 4 or not any(p):
        raise ValueError("center must be a nonzero point with four coordinates")
    if ideal.vanishes_at(p):
        raise CenterOnCurveError(f"center {tuple(map(str, p))} lies on the curve")
    j = next(i for i, c in enumerate(p) if c)
    others = [i for i in range(4) if i != j]
    z = [Polynomial.variable(i, 4) for i in range(4)]
    images = [None] * 4
    images[j] = z[3]
    for k, i in enumerate(others):
        images[i] = z[k] + z[3] * (p[i] / p[j])
    moved = Ideal([g.substitute(images) for g in ideal.generators], 4)
    elim = eliminate(moved, {0, 1, 2}, budget)
    if len(elim.generators) != 1:
        raise NonGenericCenterError(
            f"image is not a plane curve ({len(elim.generators)} generators)")
    g = elim.generators[0]
    return Polynomial({a[:3]: c for a, c in g.items()}, 3).primitive()


def _hessian_minors(g: Polynomial) -> List[Polynomial]:
    H = [[g.derivative(i).derivative(j) for j in range(3)] for i in range(3)]
    minors = []
    for r1 in range(3):
        for r2 in range(r1 + 1, 3):
            for c1 in range(3):
                for c2 in range(c1 + 1, 3):
                    minors.append(H[r1][c1] * H[r2][c2] - H[r1][c2] * H[r2][c1])
    return [m for m in minors if m]


def projection_node_count(ideal: Ideal, center: Sequence, curve_degree: Optional[int] = None,
                          m_cap: int = DEFAULT_M_CAP, budget: Optional[Budget] = None) -> int:
    """Number of nodes of the plane projection of a reduced irreducible space curve.

    The center counts as generic when the image has the curve's degree and every
    singular point is an ordinary node (the Hessian has rank two there).  Nodes
    have Tjurina number one, so the count is the length of the Jacobian scheme.
    Anything else raises :class:`NonGenericCenterError` with that length.
    """
    g = project_curve(ideal, center, budget)
    if curve_degree is None:
        curve_degree = hilbert_polynomial(ideal, m_cap, budget).d
    jac = Ideal([g] + [g.derivative(i) for i in range(3)], 3)
    jac_dim = projective_dimension(jac, m_cap, budget)
    if jac_dim >= 1:
        raise NonGenericCenterError("image curve is non-reduced", g, None)
    length = 0 if jac_dim < 0 else hilbert_polynomial(jac, m_cap, budget).d
    if g.degree() != curve_degree:
        raise NonGenericCenterError(
            f"non-generic: image has degree {g.degree()}, curve has degree {curve_degree}",
            g, length)
    if jac_dim == 0:
        worse = Ideal(list(jac.generators) + _hessian_minors(g), 3)
        if projective_dimension(worse, m_cap, budget) >= 0:
            raise NonGenericCenterError(
                f"non-generic: image {g} has a non-nodal singularity "
                f"(singular scheme of length {length})", g, length)
    return length


# -- Schubert calculus -------------------------------------------------------

Cycle = Dict[Partition, int]


def pieri(lam: Partition, p: int, k: int, nplus1: int) -> List[Partition]:
    """Partitions ``mu`` with ``mu / lam`` a horizontal strip of ``p`` boxes in the box."""
    cols = nplus1 - k
    if p < 0:
        return []
    base = list(lam.parts) + [0] * (k - len(lam.parts))
    if len(base) > k:
        return []
    out = []

    def grow(i, remaining, acc):
        if i == k:
            if remaining == 0:
                out.append(Partition(acc))
            return
        upper = cols if i == 0 else base[i - 1]
        for add in range(0, min(remaining, upper - base[i]) + 1):
            grow(i + 1, remaining - add, acc + [base[i] + add])

    grow(0, p, [])
    return out


def _times_special(cycle: Cycle, p: int, k: int, nplus1: int) -> Cycle:
    out: Cycle = {}
    for lam, c in cycle.items():
        for mu in pieri(lam, p, k, nplus1):
            out[mu] = out.get(mu, 0) + c
    return {m: c for m, c in out.items() if c}


def _times(cycle: Cycle, lam: Partition, k: int, nplus1: int) -> Cycle:
    parts = lam.parts
    if len(parts) <= 1:
        return _times_special(cycle, parts[0] if parts else 0, k, nplus1)
    # Giambelli: sigma_lam = det(sigma_{lam_i + j - i})
    ell = len(parts)
    out: Cycle = {}
    for perm in permutations(range(ell)):
        indices = [parts[i] + perm[i] - i for i in range(ell)]
        if any(x < 0 for x in indices):
            continue
        sign = _perm_sign(perm)
        term = dict(cycle)
        for x in indices:
            term = _times_special(term, x, k, nplus1)
            if not term:
                break
        for mu, c in term.items():
            out[mu] = out.get(mu, 0) + sign * c
    return {m: c for m, c in out.items() if c}


def _perm_sign(perm) -> int:
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def schubert_integral(factors: Sequence[Union[Partition, int]], k: int, Nplus1: int) -> int:
    """Degree of a product of Schubert classes on ``Gr(k, Nplus1)``.

    Integers in ``factors`` stand for the special classes ``sigma_p``.
    """
    if not 0 < k < Nplus1:
        raise ValueError(f"Gr({k}, {Nplus1}) is not a proper Grassmannian")
    cols = Nplus1 - k
    parts = [Partition.special(f) if isinstance(f, int) else f for f in factors]
    total = sum(p.size for p in parts)
    if total != k * cols:
        raise ValueError(
            f"codimension mismatch: classes have total codimension {total}, "
            f"dim Gr({k}, {Nplus1}) = {k * cols}")
    cycle: Cycle = {Partition(): 1}
    for lam in parts:
        if not lam.fits(k, cols):
            return 0
        cycle = _times(cycle, lam, k, Nplus1)
        if not cycle:
            return 0
    return cycle.get(Partition.rectangle(k, cols), 0)


def grassmannian_degree(k: int, Nplus1: int) -> int:
    """Plucker degree ``int sigma_1^dim`` of ``Gr(k, Nplus1)``."""
    return schubert_integral([1] * (k * (Nplus1 - k)), k, Nplus1)


def stability_constants(d: int, n: int, N: int, mu) -> InvariantBundle:
    """``D``, ``beta``, ``nu_1`` and ``nu_2`` for an ``n``-fold of degree ``d`` in ``P^N``."""
    if not 1 <= n < N:
        raise ValueError("need 1 <= n < N")
    mu = Fraction(mu)
    k = N - n
    dim = k * (n + 1)
    D = grassmannian_degree(k, N + 1)
    beta = schubert_integral([2] + [1] * (dim - 2), k, N + 1)
    nu1 = (n + 1) * (2 * d + mu / (n + 1) - (n + 2))
    nu2 = Fraction(n + 1, D)
    return InvariantBundle(d, n, N, mu, D, beta, nu1, nu2)


def singular_divisor_volume(d: int, n: int, D: int, beta: int, mu) -> Fraction:
    """``d(d-1) D + ((mu - n(n+1)) / n) d beta``."""
    if n < 1:
        raise ValueError("need n >= 1")
    return d * (d - 1) * D + (Fraction(mu) - n * (n + 1)) / n * d * beta


def double_chow_value(d: int, n: int, mu, slope_RX, slope_fD) -> Fraction:
    return (2 * d + Fraction(mu) / (n + 1) - (n + 2)) * Fraction(slope_RX) - Fraction(slope_fD)


def double_chow_verdict(d: int, n: int, mu, slope_RX, slope_fD) -> Witness:
    """Test the Double-Chow inequality for one 1-psg.

    A positive value only witnesses stability along this 1-psg; stability
    itself needs the inequality for every 1-psg.
    """
    if double_chow_value(d, n, mu, slope_RX, slope_fD) > 0:
        return Witness.STABLE
    return Witness.NOT_STABLE
