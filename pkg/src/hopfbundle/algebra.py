"""Exact commutative *-algebra O(SU(2)).

Generators are ``a`` (alpha), ``as`` (alpha*), ``c`` (gamma) and ``cs``
(gamma*), subject to commutativity and ``as*a + cs*c = 1``.  Every element is
stored in the PBW normal form obtained by rewriting ``as*a -> 1 - cs*c`` until
no monomial contains both ``a`` and ``as``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, NamedTuple, Union

Rational = Union[int, Fraction]


class Scalar:
    """Gaussian rational ``re + im*i`` with exact arithmetic."""

    __slots__ = ("re", "im")

    def __init__(self, re: Rational | str = 0, im: Rational | str = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(x)

    def __add__(self, other):
        o = Scalar.coerce(other)
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __sub__(self, other):
        o = Scalar.coerce(other)
        return Scalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        o = Scalar.coerce(other)
        if not self.im and not o.im:
            return Scalar(self.re * o.re)
        return Scalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Scalar.coerce(other)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero scalar")
        return self * Scalar(o.re / n, -o.im / n)

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = Scalar.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"Scalar({self.re}, {self.im})"

    def __str__(self):
        return render_scalar(self)


ZERO = Scalar(0)
ONE = Scalar(1)


class Monomial(NamedTuple):
    """Exponents of ``a, as, c, cs``."""

    a: int = 0
    a_star: int = 0
    c: int = 0
    c_star: int = 0

    @property
    def degree(self) -> int:
        return self.a + self.a_star + self.c + self.c_star

    @property
    def winding(self) -> int:
        """Power of ``u`` in the right coaction: ``ka + kc - ka* - kc*``."""
        return self.a + self.c - self.a_star - self.c_star

    def is_normal(self) -> bool:
        return self.a == 0 or self.a_star == 0

    def times(self, other: "Monomial") -> "Monomial":
        return Monomial(
            self.a + other.a,
            self.a_star + other.a_star,
            self.c + other.c,
            self.c_star + other.c_star,
        )

    def star(self) -> "Monomial":
        return Monomial(self.a_star, self.a, self.c_star, self.c)


UNIT = Monomial()


def order_key(m: Monomial):
    # fixed canonical order: lexicographic on (ka, ka*, kc*, kc)
    return (m.a, m.a_star, m.c_star, m.c)


@lru_cache(maxsize=None)
def reduce_monomial(m: Monomial) -> tuple[tuple[Monomial, int], ...]:
    """Normal form of a single monomial as integer-weighted PBW monomials.

    ``as^k a^k`` is replaced by ``(1 - cs c)^k`` in one go, which is what
    exhaustive rewriting with ``as*a -> 1 - cs*c`` produces.
    """
    k = min(m.a, m.a_star)
    if k == 0:
        return ((m, 1),)
    base = Monomial(m.a - k, m.a_star - k, m.c, m.c_star)
    return tuple(
        (Monomial(base.a, base.a_star, base.c + j, base.c_star + j), (-1) ** j * comb(k, j))
        for j in range(k + 1)
    )


@lru_cache(maxsize=200_000)
def _mono_product(m1: Monomial, m2: Monomial):
    return reduce_monomial(m1.times(m2))


class Poly:
    """Element of O(SU(2)) in PBW normal form.  Immutable."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict[Monomial, Scalar] | None = None, *, _trusted=False):
        if _trusted:
            self._terms = terms
        else:
            acc: dict[Monomial, Scalar] = {}
            for m, s in (terms or {}).items():
                _accumulate_raw(acc, Monomial(*m), Scalar.coerce(s))
            self._terms = {m: s for m, s in acc.items() if s}
        self._hash = None

    # construction ---------------------------------------------------------
    @classmethod
    def constant(cls, s) -> "Poly":
        s = Scalar.coerce(s)
        return cls({UNIT: s}, _trusted=True) if s else cls({}, _trusted=True)

    @classmethod
    def monomial(cls, m: Monomial | tuple, coeff=1) -> "Poly":
        return cls({Monomial(*m): Scalar.coerce(coeff)})

    basis_element = monomial

    @classmethod
    def zero(cls) -> "Poly":
        return cls({}, _trusted=True)

    @classmethod
    def one(cls) -> "Poly":
        return cls({UNIT: ONE}, _trusted=True)

    # access ---------------------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, Scalar]:
        return self._terms

    def sorted_terms(self) -> list[tuple[Monomial, Scalar]]:
        return sorted(self._terms.items(), key=lambda kv: order_key(kv[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def windings(self) -> set[int]:
        return {m.winding for m in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.windings()) <= 1

    def max_degree(self) -> int:
        return max((m.degree for m in self._terms), default=0)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self._terms)
        for m, s in other._terms.items():
            v = out.get(m, ZERO) + s
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -s for m, s in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        acc: dict[Monomial, Scalar] = {}
        for m1, s1 in self._terms.items():
            for m2, s2 in other._terms.items():
                s = s1 * s2
                for m, k in _mono_product(m1, m2):
                    v = acc.get(m, ZERO) + s * k
                    acc[m] = v
        return Poly({m: s for m, s in acc.items() if s}, _trusted=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, s) -> "Poly":
        s = Scalar.coerce(s)
        if not s:
            return Poly.zero()
        return Poly({m: c * s for m, c in self._terms.items()}, _trusted=True)

    def star(self) -> "Poly":
        # conjugate-linear; the relation is *-invariant, so normal forms map to normal forms
        return Poly({m.star(): s.conj() for m, s in self._terms.items()}, _trusted=True)

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, Scalar, complex)):
            return self._terms == Poly.constant(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"Poly({render(self)!r})"

    def __str__(self):
        return render(self)


def _as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.constant(x)


def _accumulate_raw(acc: dict, m: Monomial, s: Scalar) -> None:
    for mm, k in reduce_monomial(m):
        acc[mm] = acc.get(mm, ZERO) + s * k


def normal_form(raw: Iterable[tuple[tuple[int, int, int, int], object]]) -> Poly:
    """Reduce a list of ``(exponents, coefficient)`` pairs to PBW normal form.

    Exponent vectors are ``(ka, ka*, kc, kc*)`` and may contain both ``a`` and
    ``as``; coefficients are anything :meth:`Scalar.coerce` accepts.
    """
    acc: dict[Monomial, Scalar] = {}
    for m, s in raw:
        _accumulate_raw(acc, Monomial(*m), Scalar.coerce(s))
    return Poly({m: s for m, s in acc.items() if s}, _trusted=True)


def add(p: Poly, q: Poly) -> Poly:
    return p + q


def mul(p: Poly, q: Poly) -> Poly:
    return p * q


def star(p: Poly) -> Poly:
    return p.star()


def scale(s, p: Poly) -> Poly:
    return p.scale(s)


# generators
ALPHA = Poly.monomial((1, 0, 0, 0))
ALPHA_STAR = Poly.monomial((0, 1, 0, 0))
GAMMA = Poly.monomial((0, 0, 1, 0))
GAMMA_STAR = Poly.monomial((0, 0, 0, 1))


def pbw_monomials(max_degree: int) -> list[Monomial]:
    """All PBW normal-form monomials of total degree <= ``max_degree``."""
    out = []
    for a in range(max_degree + 1):
        for ast in range(max_degree + 1 - a):
            if a and ast:
                continue
            for c in range(max_degree + 1 - a - ast):
                for cs in range(max_degree + 1 - a - ast - c):
                    out.append(Monomial(a, ast, c, cs))
    return sorted(out, key=order_key)


# ---------------------------------------------------------------------------
# text form

_FACTOR_ORDER = (("a", "a"), ("cs", "c_star"), ("c", "c"), ("as", "a_star"))


class ParseError(ValueError):
    """Malformed polynomial text; ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def render_rational(q: Fraction) -> str:
    return str(q)


def render_scalar(s: Scalar) -> str:
    if s.im == 0:
        return render_rational(s.re)
    sign = "-" if s.im < 0 else "+"
    return f"({render_rational(s.re)}{sign}{render_rational(abs(s.im))}i)"


def render_monomial(m: Monomial) -> str:
    parts = []
    for tok, field in _FACTOR_ORDER:
        k = getattr(m, field)
        if k == 1:
            parts.append(tok)
        elif k > 1:
            parts.append(f"{tok}^{k}")
    return "*".join(parts)


def render(p: Poly) -> str:
    """Canonical text: terms sorted by the fixed monomial order."""
    if p.is_zero():
        return "0"
    out = []
    for i, (m, s) in enumerate(p.sorted_terms()):
        mono = render_monomial(m)
        if s.is_real():
            neg = s.re < 0
            mag = abs(s.re)
            if mono:
                body = mono if mag == 1 else f"{render_rational(mag)}*{mono}"
            else:
                body = render_rational(mag)
            if i == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        else:
            body = render_scalar(s) + (f"*{mono}" if mono else "")
            out.append(body if i == 0 else " + " + body)
    return "".join(out)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise ParseError(f"expected {ch!r}, got {got!r}", self.pos)
        self.pos += 1

    def nat(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a number", start)
        return int(self.text[start:self.pos])

    def rational(self) -> Fraction:
        num = self.nat()
        if self.peek() == "/":
            self.pos += 1
            at = self.pos
            den = self.nat()
            if den == 0:
                raise ParseError("zero denominator", at)
            return Fraction(num, den)
        return Fraction(num)

    def coef(self) -> Scalar:
        if self.peek() == "(":
            self.pos += 1
            sign = 1
            if self.peek() in ("+", "-"):
                sign = -1 if self.peek() == "-" else 1
                self.pos += 1
            re = sign * self.rational()
            im = Fraction(0)
            if self.peek() in ("+", "-"):
                isign = -1 if self.peek() == "-" else 1
                self.pos += 1
                im = isign * self.rational()
                self.expect("i")
            self.expect(")")
            return Scalar(re, im)
        return Scalar(self.rational())

    def factor(self) -> Monomial:
        self.skip()
        t = self.text
        if t.startswith("as", self.pos):
            field, self.pos = 1, self.pos + 2
        elif t.startswith("cs", self.pos):
            field, self.pos = 3, self.pos + 2
        elif t.startswith("a", self.pos):
            field, self.pos = 0, self.pos + 1
        elif t.startswith("c", self.pos):
            field, self.pos = 2, self.pos + 1
        else:
            raise ParseError("expected a factor (a, as, c, cs)", self.pos)
        k = 1
        if self.peek() == "^":
            self.pos += 1
            k = self.nat()
        e = [0, 0, 0, 0]
        e[field] = k
        return Monomial(*e)

    def term(self):
        ch = self.peek()
        if ch == "(" or ch.isdigit():
            s = self.coef()
            m = UNIT
            while self.peek() == "*":
                self.pos += 1
                m = m.times(self.factor())
            return m, s
        m = self.factor()
        while self.peek() == "*":
            self.pos += 1
            m = m.times(self.factor())
        return m, ONE

    def poly(self):
        raw = []
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        m, s = self.term()
        raw.append((m, s * sign))
        while self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
            m, s = self.term()
            raw.append((m, s * sign))
        if self.peek():
            raise ParseError(f"unexpected {self.peek()!r}", self.pos)
        return raw


def parse_raw(text: str) -> list[tuple[Monomial, Scalar]]:
    """Parse to an unreduced term list (exponents may mix ``a`` and ``as``)."""
    if not text.strip():
        raise ParseError("empty input", 0)
    return _Parser(text).poly()


def parse(text: str) -> Poly:
    return normal_form(parse_raw(text))
