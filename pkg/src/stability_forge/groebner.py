"""Buchberger Groebner bases, weight initial ideals, elimination and resultants.

Flat limits follow the convention ``x_i -> t^{m_i} x_i`` with ``t -> 0``: the
limit of ``lambda(t) X`` is cut out by the *maximal*-weight initial forms.
"""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

from .algebra import (
    GREVLEX,
    MonomialOrder,
    OnePSG,
    Polynomial,
    RingMismatchError,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_weight,
    parse_polynomial,
)

__all__ = [
    "Budget",
    "BudgetExceeded",
    "Ideal",
    "GroebnerBasis",
    "buchberger",
    "normal_form",
    "s_polynomial",
    "is_groebner",
    "initial_form",
    "initial_ideal",
    "eliminate",
    "is_multiplicity_free",
    "resultant",
]

DEFAULT_MAX_PAIRS = 50_000
DEFAULT_MAX_TERMS = 200_000
BUDGET_ENV = "STABILITY_FORGE_BUDGET"


class BudgetExceeded(RuntimeError):
    """A configured resource cap was hit; no partial answer is returned."""


@dataclass(frozen=True)
class Budget:
    """Caps on S-pairs processed and on the size of any intermediate polynomial."""

    max_pairs: int = DEFAULT_MAX_PAIRS
    max_terms: int = DEFAULT_MAX_TERMS

    @classmethod
    def from_env(cls) -> "Budget":
        raw = os.environ.get(BUDGET_ENV)
        if not raw:
            return cls()
        try:
            pairs = int(raw)
        except ValueError:
            raise ValueError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
        if pairs <= 0:
            raise ValueError(f"{BUDGET_ENV} must be positive")
        return cls(max_pairs=pairs)


def _budget(budget: Optional[Budget]) -> Budget:
    return budget if budget is not None else Budget.from_env()


class Ideal:
    """Homogeneous ideal given by generators in ``nvars`` variables."""

    __slots__ = ("generators", "nvars")

    def __init__(self, generators: Iterable[Polynomial], nvars: Optional[int] = None):
        gens = [g for g in generators]
        if nvars is None:
            if not gens:
                raise ValueError("nvars is required for an ideal without generators")
            nvars = gens[0].nvars
        for i, g in enumerate(gens):
            if g.nvars != nvars:
                raise RingMismatchError(f"generator {i} lives in {g.nvars} variables, not {nvars}")
            if not g.is_homogeneous():
                raise ValueError(f"non-homogeneous generator at index {i}")
        self.generators: Tuple[Polynomial, ...] = tuple(g for g in gens if g)
        self.nvars = nvars

    @classmethod
    def parse(cls, texts: Sequence[str], nvars: int) -> "Ideal":
        return cls([parse_polynomial(t, nvars) for t in texts], nvars)

    @classmethod
    def zero(cls, nvars: int) -> "Ideal":
        return cls([], nvars)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.nvars == other.nvars and self.generators == other.generators

    def __hash__(self):
        return hash((self.nvars, self.generators))

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __repr__(self):
        return f"Ideal([{', '.join(map(str, self.generators))}], nvars={self.nvars})"

    def is_zero(self) -> bool:
        return not self.generators

    def permuted(self, perm: Sequence[int]) -> "Ideal":
        return Ideal([g.permuted(perm) for g in self.generators], self.nvars)

    def contains(self, f: Polynomial, budget: Optional[Budget] = None) -> bool:
        gb = buchberger(self, GREVLEX, budget)
        return normal_form(f, gb.elements, GREVLEX).is_zero()

    def same_ideal(self, other: "Ideal", budget: Optional[Budget] = None) -> bool:
        return (buchberger(self, GREVLEX, budget).elements
                == buchberger(other, GREVLEX, budget).elements)

    def vanishes_at(self, point: Sequence) -> bool:
        return all(g.evaluate(point) == 0 for g in self.generators)


@dataclass(frozen=True)
class GroebnerBasis:
    elements: Tuple[Polynomial, ...]
    order: MonomialOrder
    reduced: bool = True
    nvars: int = field(default=0, compare=False)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def leading_monomials(self):
        return [g.leading_monomial(self.order) for g in self.elements]

    def ideal(self) -> Ideal:
        return Ideal(self.elements, self.nvars)


class _Desc:
    """Heap entry ordering monomials from largest to smallest."""

    __slots__ = ("key", "alpha")

    def __init__(self, key, alpha):
        self.key = key
        self.alpha = alpha

    def __lt__(self, other):
        return self.key > other.key


def normal_form(f: Polynomial, G: Sequence[Polynomial], order: MonomialOrder,
                budget: Optional[Budget] = None) -> Polynomial:
    """Fully reduce ``f`` modulo ``G`` (every term of the result is irreducible)."""
    if f.is_zero() or not G:
        return f
    max_terms = budget.max_terms if budget else DEFAULT_MAX_TERMS
    key = order.key
    leads = [(g.leading_monomial(order), g) for g in G]
    leads = [(lm, g, g.coefficient(lm)) for lm, g in leads]
    work = dict(f.items())
    heap = [_Desc(key(a), a) for a in work]
    heapq.heapify(heap)
    remainder = {}
    seen = set()
    while heap:
        alpha = heapq.heappop(heap).alpha
        if alpha in seen:
            continue
        seen.add(alpha)
        c = work.pop(alpha, 0)
        if not c:
            continue
        for lm, g, lc in leads:
            if monomial_divides(lm, alpha):
                shift = monomial_div(alpha, lm)
                factor = c / lc
                for beta, e in g.items():
                    if beta == lm:
                        continue
                    gamma = tuple(x + y for x, y in zip(beta, shift))
                    v = work.get(gamma, 0) - factor * e
                    if v:
                        if gamma not in work:
                            heapq.heappush(heap, _Desc(key(gamma), gamma))
                            seen.discard(gamma)
                        work[gamma] = v
                    else:
                        work.pop(gamma, None)
                if len(work) > max_terms:
                    raise BudgetExceeded(
                        f"budget exhausted: intermediate polynomial exceeds {max_terms} terms")
                break
        else:
            remainder[alpha] = c
    return Polynomial(remainder, f.nvars)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    a, b = f.leading_monomial(order), g.leading_monomial(order)
    lcm = monomial_lcm(a, b)
    return (f.mul_term(monomial_div(lcm, a), 1 / f.coefficient(a))
            - g.mul_term(monomial_div(lcm, b), 1 / g.coefficient(b)))


def is_groebner(G: Sequence[Polynomial], order: MonomialOrder) -> bool:
    """Buchberger certificate: every S-polynomial reduces to zero."""
    G = [g for g in G if g]
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if normal_form(s_polynomial(G[i], G[j], order), G, order):
                return False
    return True


def is_reduced(G: Sequence[Polynomial], order: MonomialOrder) -> bool:
    lms = [g.leading_monomial(order) for g in G]
    for i, g in enumerate(G):
        if g.coefficient(lms[i]) != 1:
            return False
        for j, lm in enumerate(lms):
            if i != j and any(monomial_divides(lm, a) for a in g.support()):
                return False
    return True


def _canonical_input(ideal: Ideal, order: MonomialOrder) -> List[Polynomial]:
    gens = [g.monic(order) for g in ideal.generators]
    gens = list(dict.fromkeys(gens))
    gens.sort(key=lambda g: (g.degree(), order.key(g.leading_monomial(order)), str(g)))
    return gens


def buchberger(ideal: Ideal, order: MonomialOrder = GREVLEX,
               budget: Optional[Budget] = None) -> GroebnerBasis:
    """Reduced Groebner basis of a homogeneous ideal.

    Pairs are processed by increasing lcm, skipping pairs with coprime leading
    monomials and pairs covered by the chain criterion.  Raises
    :class:`BudgetExceeded` rather than returning a partial basis.
    """
    if order.kind == "weight" and len(order.weight) != ideal.nvars:
        raise RingMismatchError("order weight length does not match the ring")
    return _buchberger_cached(ideal, order, _budget(budget))


@lru_cache(maxsize=512)
def _buchberger_cached(ideal: Ideal, order: MonomialOrder, budget: Budget) -> GroebnerBasis:
    key = order.key
    G: List[Polynomial] = []
    LM: List[tuple] = []
    pending = {}  # (i, j) -> lcm
    processed = 0

    def add(h: Polynomial):
        h = h.monic(order)
        lm = h.leading_monomial(order)
        k = len(G)
        G.append(h)
        LM.append(lm)
        for i in range(k):
            pending[(i, k)] = monomial_lcm(LM[i], lm)

    for g in _canonical_input(ideal, order):
        h = normal_form(g, G, order, budget)
        if h:
            add(h)

    while pending:
        (i, j), lcm = min(pending.items(), key=lambda kv: (sum(kv[1]), key(kv[1]), kv[0]))
        del pending[(i, j)]
        if all(min(a, b) == 0 for a, b in zip(LM[i], LM[j])):
            continue
        if _chain_criterion(i, j, lcm, LM, pending):
            continue
        processed += 1
        if processed > budget.max_pairs:
            raise BudgetExceeded(f"budget exhausted: more than {budget.max_pairs} S-pairs")
        h = normal_form(s_polynomial(G[i], G[j], order), G, order, budget)
        if h:
            add(h)

    return GroebnerBasis(tuple(_reduce_basis(G, order)), order, True, ideal.nvars)


def _chain_criterion(i, j, lcm, LM, pending) -> bool:
    for k in range(len(LM)):
        if k in (i, j):
            continue
        if not monomial_divides(LM[k], lcm):
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        return True
    return False


def _reduce_basis(G: List[Polynomial], order: MonomialOrder) -> List[Polynomial]:
    key = order.key
    G = sorted(G, key=lambda g: key(g.leading_monomial(order)))
    minimal: List[Polynomial] = []
    for g in G:
        lm = g.leading_monomial(order)
        if not any(monomial_divides(h.leading_monomial(order), lm) for h in minimal):
            minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        reduced.append(normal_form(g, others, order).monic(order))
    reduced.sort(key=lambda g: key(g.leading_monomial(order)), reverse=True)
    return reduced


# -- weights and flat limits -------------------------------------------------

def _as_psg(w) -> OnePSG:
    return w if isinstance(w, OnePSG) else OnePSG(w)


def initial_form(f: Polynomial, w) -> Polynomial:
    """Sum of the terms of ``f`` of maximal weight ``<w, alpha>``."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no initial form")
    w = _as_psg(w)
    if len(w) != f.nvars:
        raise RingMismatchError("weight length does not match the ring")
    weights = {a: monomial_weight(a, w) for a in f.support()}
    top = max(weights.values())
    return Polynomial({a: c for a, c in f.items() if weights[a] == top}, f.nvars)


def weight_order(w) -> MonomialOrder:
    return MonomialOrder.weighted(_as_psg(w).weights)


def initial_ideal(ideal: Ideal, w, budget: Optional[Budget] = None) -> Ideal:
    """Ideal of the flat limit ``lim_{t->0} lambda(t) X``."""
    w = _as_psg(w)
    if len(w) != ideal.nvars:
        raise RingMismatchError("weight length does not match the ring")
    if w.is_trivial:
        return ideal
    gb = buchberger(ideal, weight_order(w), budget)
    return Ideal([initial_form(g, w) for g in gb.elements], ideal.nvars)


def monomial_initial_ideal(ideal: Ideal, w=None, budget: Optional[Budget] = None):
    """Leading monomials of the Groebner basis under the weight order refined by grevlex."""
    order = GREVLEX if w is None else weight_order(w)
    return buchberger(ideal, order, budget).leading_monomials()


def eliminate(ideal: Ideal, keep: Iterable[int], budget: Optional[Budget] = None) -> Ideal:
    """``I`` intersected with the subring generated by the kept variables.

    Uses the block order that first ranks the total degree in the eliminated
    variables.  The result stays in the ambient ring.
    """
    keep = set(keep)
    if not keep <= set(range(ideal.nvars)):
        raise IndexError("kept variables outside the ring")
    drop = [i for i in range(ideal.nvars) if i not in keep]
    if not drop:
        return Ideal(buchberger(ideal, GREVLEX, budget).elements, ideal.nvars)
    block = MonomialOrder.weighted(tuple(0 if i in keep else 1 for i in range(ideal.nvars)))
    gb = buchberger(ideal, block, budget)
    kept = [g for g in gb.elements
            if all(not any(a[i] for i in drop) for a in g.support())]
    return Ideal(kept, ideal.nvars)


def is_multiplicity_free(f: Polynomial, w, budget: Optional[Budget] = None) -> bool:
    """True if the initial form ``in_w(f)`` is squarefree.

    A hypersurface ``g = 0`` in ``P^N`` is reduced exactly when its singular
    locus ``V(g, dg/dx_0, ..., dg/dx_N)`` has dimension at most ``N - 2``.
    """
    from .hilbert import projective_dimension

    if f.is_zero() or not f.is_homogeneous():
        raise ValueError("expected a nonzero homogeneous polynomial")
    if f.degree() < 1:
        raise ValueError("a constant does not define a hypersurface")
    g = initial_form(f, w)
    jac = Ideal([g] + [g.derivative(i) for i in range(g.nvars)], g.nvars)
    return projective_dimension(jac, budget=budget) <= g.nvars - 3


# -- resultants --------------------------------------------------------------

def _coefficients_in(f: Polynomial, var: int) -> List[Polynomial]:
    """Coefficients of ``f`` as a polynomial in ``x_var``, constant first."""
    deg = max((a[var] for a in f.support()), default=0)
    parts = [dict() for _ in range(deg + 1)]
    for a, c in f.items():
        b = list(a)
        b[var] = 0
        parts[a[var]][tuple(b)] = c
    return [Polynomial(p, f.nvars) for p in parts]


def _determinant(M: List[List[Polynomial]], nvars: int) -> Polynomial:
    n = len(M)
    if n == 0:
        return Polynomial.constant(1, nvars)

    @lru_cache(maxsize=None)
    def minor(row: int, used: int) -> Polynomial:
        if row == n:
            return Polynomial.constant(1, nvars)
        total = Polynomial.zero(nvars)
        sign_pos = 0
        for col in range(n):
            if used >> col & 1:
                continue
            entry = M[row][col]
            if entry:
                sub = minor(row + 1, used | (1 << col))
                term = entry * sub
                total = total - term if sign_pos % 2 else total + term
            sign_pos += 1
        return total

    return minor(0, 0)


def resultant(f: Polynomial, g: Polynomial, var: int) -> Polynomial:
    """Sylvester resultant of ``f`` and ``g`` with respect to ``x_var``."""
    if f.nvars != g.nvars:
        raise RingMismatchError("resultant of polynomials in different rings")
    if not 0 <= var < f.nvars:
        raise IndexError(f"variable index {var} outside the ring")
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of the zero polynomial is undefined")
    fc, gc = _coefficients_in(f, var), _coefficients_in(g, var)
    m, n = len(fc) - 1, len(gc) - 1
    if m == 0 and n == 0:
        raise ValueError(f"both polynomials are constant in x{var}")
    size = m + n
    zero = Polynomial.zero(f.nvars)
    rows = []
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(reversed(fc)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k, c in enumerate(reversed(gc)):
            row[i + k] = c
        rows.append(row)
    return _determinant(rows, f.nvars)
