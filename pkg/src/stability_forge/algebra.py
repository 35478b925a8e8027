"""Exact multivariate polynomials over the rationals.

Polynomials live in a fixed ring ``Q[x0, ..., x{N}]``.  Monomials are plain
exponent tuples, coefficients are :class:`fractions.Fraction`.  Everything is
immutable after construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

Monomial = Tuple[int, ...]

__all__ = [
    "Monomial",
    "Polynomial",
    "OnePSG",
    "MonomialOrder",
    "GREVLEX",
    "LEX",
    "PolynomialSyntaxError",
    "UnknownVariableError",
    "VariableCountError",
    "RingMismatchError",
    "parse_polynomial",
    "format_rational",
    "parse_rational",
    "monomial_weight",
    "compare",
]


class RingMismatchError(ValueError):
    """Operands live in rings with different variable counts."""


class PolynomialSyntaxError(ValueError):
    """Malformed polynomial text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


class UnknownVariableError(PolynomialSyntaxError):
    pass


class VariableCountError(PolynomialSyntaxError):
    pass


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text)


# -- monomials ---------------------------------------------------------------

def monomial_weight(m: Sequence[int], w) -> int:
    """Pairing ``<w, m>`` of a weight vector with an exponent vector."""
    weights = w.weights if isinstance(w, OnePSG) else tuple(w)
    if len(weights) != len(m):
        raise RingMismatchError(
            f"weight length {len(weights)} does not match monomial length {len(m)}")
    return sum(a * b for a, b in zip(m, weights))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    """True if ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomials_of_degree(nvars: int, degree: int) -> Iterator[Monomial]:
    """All exponent vectors of the given total degree, grevlex descending."""
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    if nvars == 1:
        yield (degree,)
        return
    # grevlex descending: smallest exponent of the last variable first
    for last in range(degree + 1):
        for head in monomials_of_degree(nvars - 1, degree - last):
            yield head + (last,)


# -- one-parameter subgroups and orders --------------------------------------

@dataclass(frozen=True)
class OnePSG:
    """Diagonal one-parameter subgroup ``t -> diag(t^m0, ..., t^mN)``."""

    weights: Tuple[int, ...]

    def __init__(self, weights: Iterable[int]):
        raw = list(weights)
        ws = tuple(int(x) for x in raw)
        if any(x != y for x, y in zip(ws, raw)):
            raise ValueError("one-parameter subgroup weights must be integers")
        object.__setattr__(self, "weights", ws)

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    @property
    def is_traceless(self) -> bool:
        return sum(self.weights) == 0

    @property
    def is_trivial(self) -> bool:
        return not any(self.weights)

    def __add__(self, other: "OnePSG") -> "OnePSG":
        if len(other) != len(self):
            raise RingMismatchError("weight vectors have different lengths")
        return OnePSG(a + b for a, b in zip(self.weights, other.weights))

    def scaled(self, c: int) -> "OnePSG":
        return OnePSG(c * a for a in self.weights)

    def shifted(self, c: int) -> "OnePSG":
        return OnePSG(a + c for a in self.weights)

    def permuted(self, perm: Sequence[int]) -> "OnePSG":
        """Weights reindexed so that new index ``i`` carries old index ``perm[i]``."""
        return OnePSG(self.weights[p] for p in perm)

    def normalized(self) -> Tuple["OnePSG", int, Fraction]:
        """Traceless integral representative.

        Returns ``(v, scale, shift)`` with ``v = scale * (w - shift * 1)``.  The
        scale is the smallest positive integer making the shifted vector
        integral, so ``scale == 1`` whenever the mean of ``w`` is an integer.
        """
        n = len(self.weights)
        if n == 0:
            return self, 1, Fraction(0)
        shift = Fraction(sum(self.weights), n)
        scale = shift.denominator
        v = OnePSG(scale * a - shift.numerator for a in self.weights)
        return v, scale, shift


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: ``grevlex``, ``lex`` or ``weight`` (refined by grevlex).

    The weight order ranks larger ``<w, alpha>`` first.  With nonnegative
    weights it is a genuine monomial order; with arbitrary integer weights it
    is still a term order on each graded piece, which is all the homogeneous
    computations here rely on.
    """

    kind: str = "grevlex"
    weight: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "weight"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "weight":
            if self.weight is None:
                raise ValueError("weight order needs a weight vector")
            w = self.weight.weights if isinstance(self.weight, OnePSG) else tuple(self.weight)
            object.__setattr__(self, "weight", tuple(int(x) for x in w))
        elif self.weight is not None:
            raise ValueError(f"{self.kind} order takes no weight vector")

    @classmethod
    def weighted(cls, w) -> "MonomialOrder":
        return cls("weight", tuple(w))

    def key(self, alpha: Monomial):
        """Sort key; a larger key means a larger monomial."""
        if self.kind == "lex":
            return alpha
        grevlex = (sum(alpha), tuple(-a for a in reversed(alpha)))
        if self.kind == "grevlex":
            return grevlex
        return (monomial_weight(alpha, self.weight), grevlex)

    def __str__(self):
        if self.kind == "weight":
            return f"weight{list(self.weight)}+grevlex"
        return self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def compare(a: Monomial, b: Monomial, order: MonomialOrder = GREVLEX) -> int:
    """Three-way comparison: -1 if ``a < b``, 0 if equal, 1 if ``a > b``."""
    if len(a) != len(b):
        raise RingMismatchError("monomials from different rings")
    if order.kind == "weight" and len(order.weight) != len(a):
        raise RingMismatchError("order weight length does not match the ring")
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


# -- polynomials -------------------------------------------------------------

class Polynomial:
    """Sparse polynomial ``{exponent tuple: Fraction}`` in ``nvars`` variables."""

    __slots__ = ("_terms", "nvars", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, object]] = None, nvars: int = 0):
        self.nvars = nvars
        clean: Dict[Monomial, Fraction] = {}
        for alpha, c in (terms or {}).items():
            alpha = tuple(alpha)
            if len(alpha) != nvars:
                raise RingMismatchError(
                    f"monomial {alpha} has {len(alpha)} exponents, ring has {nvars}")
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative exponent in {alpha}")
            c = Fraction(c)
            if c:
                clean[alpha] = clean.get(alpha, 0) + c
                if not clean[alpha]:
                    del clean[alpha]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction], nvars: int) -> "Polynomial":
        p = cls.__new__(cls)
        p._terms = terms
        p.nvars = nvars
        p._hash = None
        return p

    # constructors
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "Polynomial":
        c = Fraction(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise IndexError(f"variable x{i} not in a ring of {nvars} variables")
        alpha = tuple(1 if j == i else 0 for j in range(nvars))
        return cls._raw({alpha: Fraction(1)}, nvars)

    @classmethod
    def monomial(cls, alpha: Monomial, coeff=1) -> "Polynomial":
        return cls({tuple(alpha): coeff}, len(alpha))

    @classmethod
    def parse(cls, text: str, nvars: int) -> "Polynomial":
        return parse_polynomial(text, nvars)

    # container protocol
    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self):
        return self._terms.keys()

    def coefficient(self, alpha: Monomial) -> Fraction:
        return self._terms.get(tuple(alpha), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # arithmetic
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise RingMismatchError(
                    f"ring mismatch: {self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.nvars)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for alpha, c in other._terms.items():
            s = out.get(alpha, 0) + c
            if s:
                out[alpha] = s
            else:
                out.pop(alpha, None)
        return Polynomial._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({a: -c for a, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return Polynomial.zero(self.nvars)
            return Polynomial._raw({a: c * other for a, c in self._terms.items()}, self.nvars)
        other = self._coerce(other)
        out: Dict[Monomial, Fraction] = {}
        for a, c in self._terms.items():
            for b, e in other._terms.items():
                ab = monomial_mul(a, b)
                s = out.get(ab, 0) + c * e
                if s:
                    out[ab] = s
                else:
                    out.pop(ab, None)
        return Polynomial._raw(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_term(self, alpha: Monomial, c: Fraction) -> "Polynomial":
        """Multiply by the single term ``c * x^alpha``."""
        return Polynomial._raw(
            {monomial_mul(a, alpha): e * c for a, e in self._terms.items()}, self.nvars)

    # structure
    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(a) for a in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(a) for a in self._terms}) <= 1

    def is_constant(self) -> bool:
        return all(not any(a) for a in self._terms)

    def variables(self):
        """Indices of the variables that actually occur."""
        return sorted({i for a in self._terms for i, e in enumerate(a) if e})

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX) -> Fraction:
        return self._terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        if not self._terms:
            return self
        return self * (1 / self.leading_coefficient(order))

    def derivative(self, i: int) -> "Polynomial":
        out = {}
        for a, c in self._terms.items():
            if a[i]:
                b = list(a)
                b[i] -= 1
                out[tuple(b)] = c * a[i]
        return Polynomial._raw(out, self.nvars)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise RingMismatchError("point has the wrong number of coordinates")
        total = Fraction(0)
        for a, c in self._terms.items():
            t = c
            for x, e in zip(point, a):
                if e:
                    t *= Fraction(x) ** e
            total += t
        return total

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace ``x_i`` by ``images[i]`` (all images in one common ring)."""
        if len(images) != self.nvars:
            raise RingMismatchError("need one image per variable")
        if not images:
            return self
        target = images[0].nvars
        out = Polynomial.zero(target)
        powers = [dict() for _ in images]
        for a, c in self._terms.items():
            t = Polynomial.constant(c, target)
            for i, e in enumerate(a):
                if e:
                    if e not in powers[i]:
                        powers[i][e] = images[i] ** e
                    t = t * powers[i][e]
            out = out + t
        return out

    def embed(self, nvars: int, positions: Sequence[int]) -> "Polynomial":
        """Move variable ``i`` to position ``positions[i]`` of a ring with ``nvars`` variables."""
        out = {}
        for a, c in self._terms.items():
            b = [0] * nvars
            for i, e in enumerate(a):
                b[positions[i]] += e
            out[tuple(b)] = c
        return Polynomial._raw(out, nvars)

    def permuted(self, perm: Sequence[int]) -> "Polynomial":
        """Variables reindexed so that new ``x_i`` is old ``x_{perm[i]}``."""
        inverse = [0] * len(perm)
        for new, old in enumerate(perm):
            inverse[old] = new
        return self.embed(self.nvars, inverse)

    def primitive(self) -> "Polynomial":
        """Scale to integer coefficients with content 1 and positive grevlex-leading coefficient."""
        if not self._terms:
            return self
        den = reduce(lambda x, y: x * y // gcd(x, y), (c.denominator for c in self._terms.values()))
        nums = [int(c * den) for c in self._terms.values()]
        g = reduce(gcd, (abs(x) for x in nums))
        p = self * Fraction(den, g)
        return -p if p.leading_coefficient() < 0 else p

    # printing
    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for i, (alpha, c) in enumerate(self.sorted_terms(GREVLEX)):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            mono = "*".join(
                f"x{j}" if e == 1 else f"x{j}^{e}" for j, e in enumerate(alpha) if e)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            if i == 0:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, nvars={self.nvars})"


# -- parser ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d+)|([A-Za-z_]\w*)|([-+*/^()]))")


def _tokenize(text: str, nvars: int):
    pos = 0
    tokens = []
    text_bytes_offset = _byte_offsets(text)
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolynomialSyntaxError(
                f"unexpected character {text[start]!r}", text_bytes_offset[start])
        start = m.start(m.lastindex)
        off = text_bytes_offset[start]
        if m.group(1):
            tokens.append(("num", int(m.group(1)), off))
        elif m.group(2):
            idx = int(m.group(2)[1:])
            if idx >= nvars:
                raise VariableCountError(
                    f"variable {m.group(2)} outside ring x0..x{nvars - 1}", off)
            tokens.append(("var", idx, off))
        elif m.group(3):
            raise UnknownVariableError(f"unknown variable {m.group(3)!r}", off)
        else:
            tokens.append((m.group(4), None, off))
        pos = m.end()
    tokens.append(("end", None, len(text.encode())))
    return tokens


def _byte_offsets(text: str):
    offsets, acc = [], 0
    for ch in text:
        offsets.append(acc)
        acc += len(ch.encode())
    offsets.append(acc)
    return offsets


class _Parser:
    def __init__(self, tokens, nvars):
        self.tokens = tokens
        self.i = 0
        self.nvars = nvars

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[0] if tok[1] is None else tok[1])
            raise PolynomialSyntaxError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term() * sign
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
                acc = acc * self.factor()
            elif kind in ("num", "var", "("):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            exp = self.take("num")[1]
            base = base ** exp
        return base

    def atom(self):
        kind, val, off = self.peek()
        if kind == "num":
            self.take()
            if self.peek()[0] == "/":
                self.take()
                _, den, doff = self.take("num")
                if den == 0:
                    raise PolynomialSyntaxError("zero denominator", doff)
                return Polynomial.constant(Fraction(val, den), self.nvars)
            return Polynomial.constant(val, self.nvars)
        if kind == "var":
            self.take()
            return Polynomial.variable(val, self.nvars)
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        if kind == "-":
            self.take()
            return -self.factor()
        what = "end of input" if kind == "end" else repr(kind)
        raise PolynomialSyntaxError(f"unexpected {what}", off)


def parse_polynomial(text: str, nvars: int) -> Polynomial:
    """Parse ``text`` into a polynomial in ``x0 .. x{nvars-1}``.

    Accepts integer and ``p/q`` coefficients, ``+ - * ^`` and parentheses;
    ``*`` may be omitted between factors.  Errors carry the byte offset.

    >>> str(parse_polynomial("x0*x2 - x1^2", 3))
    '-x1^2 + x0*x2'
    """
    if nvars < 1:
        raise ValueError("a polynomial ring needs at least one variable")
    parser = _Parser(_tokenize(text, nvars), nvars)
    if parser.peek()[0] == "end":
        raise PolynomialSyntaxError("empty polynomial", 0)
    result = parser.expr()
    tok = parser.peek()
    if tok[0] != "end":
        raise PolynomialSyntaxError(f"unexpected {tok[0]!r}", tok[2])
    return result
