"""Generators and idempotents for the section modules P_mu of the line bundles L_mu.

For mu <= 0 the module P_mu is generated by a^(-mu-k) c^k and for mu >= 0 by
cs^k as^(mu-k).  ``build_vw`` returns the pair of columns with v^T w = 1, from
which E~ = w v^T is an exact idempotent over O(S^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, sqrt
from typing import Callable, Sequence

import numpy as np

from .algebra import Monomial, Poly, parse, render
from .hopf import in_P

MAX_ABS_MU = 64


class PolyMatrix:
    """Dense matrix of :class:`Poly` entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[Poly]]):
        self.entries = tuple(tuple(_poly(x) for x in row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls([[Poly.one() if i == j else Poly.zero() for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "PolyMatrix":
        return cls([[Poly.zero()] * c for _ in range(r)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Poly.zero()
                for k in range(self.cols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def __add__(self, other):
        return PolyMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return PolyMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def scale(self, p: Poly) -> "PolyMatrix":
        return PolyMatrix([[p * x for x in row] for row in self.entries])

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.entries == other.entries

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.entries for x in row)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([list(col) for col in zip(*self.entries)])

    def adjoint(self) -> "PolyMatrix":
        return PolyMatrix([[x.star() for x in col] for col in zip(*self.entries)])

    def trace(self) -> Poly:
        acc = Poly.zero()
        for i in range(min(self.rows, self.cols)):
            acc = acc + self.entries[i][i]
        return acc

    def column(self, j: int) -> list[Poly]:
        return [row[j] for row in self.entries]

    def row(self, i: int) -> list[Poly]:
        return list(self.entries[i])

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[render(x) for x in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PolyMatrix":
        m = cls([[parse(x) for x in row] for row in obj["entries"]])
        if m.rows != obj["rows"] or m.cols != obj["cols"]:
            raise ValueError("declared shape does not match entries")
        return m

    def render(self) -> str:
        return "[" + "; ".join(", ".join(render(x) for x in row) for row in self.entries) + "]"

    __str__ = render

    def __repr__(self):
        return f"PolyMatrix({self.render()})"


def _poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.constant(x)


@dataclass(frozen=True)
class RatFnMatrix:
    """Matrix of rational functions sharing one denominator in O(S^2)."""

    num: PolyMatrix
    den: Poly

    def entry(self, i: int, j: int) -> tuple[Poly, Poly]:
        return self.num[i, j], self.den

    def to_json(self) -> dict:
        return {
            "rows": self.num.rows,
            "cols": self.num.cols,
            "entries": [
                [{"num": render(x), "den": render(self.den)} for x in row] for row in self.num.entries
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RatFnMatrix":
        dens = {e["den"] for row in obj["entries"] for e in row}
        if len(dens) != 1:
            raise ValueError("entries must share a denominator")
        num = PolyMatrix([[parse(e["num"]) for e in row] for row in obj["entries"]])
        return cls(num, parse(dens.pop()))

    def is_idempotent(self) -> bool:
        """num @ num == den * num, i.e. (num/den)^2 == num/den."""
        return self.num @ self.num == self.num.scale(self.den)

    def is_hermitian(self) -> bool:
        return self.num.adjoint() == self.num and self.den.star() == self.den

    def render(self) -> str:
        return f"1/({render(self.den)}) * {self.num.render()}"


def _check_mu(mu: int) -> int:
    mu = int(mu)
    if abs(mu) > MAX_ABS_MU:
        raise ValueError(f"|mu| > {MAX_ABS_MU} not supported")
    return mu


def _mono(a=0, a_star=0, c=0, c_star=0, coeff=1) -> Poly:
    return Poly.monomial(Monomial(a, a_star, c, c_star), coeff)


def build_vw(mu: int) -> tuple[list[Poly], list[Poly]]:
    """Columns (v~, w~) with v~^T w~ = 1; w~ lists the module generators of P_mu."""
    mu = _check_mu(mu)
    n = abs(mu)
    if mu <= 0:
        v = [_mono(a_star=n - k, c_star=k, coeff=comb(n, k)) for k in range(n + 1)]
        w = [_mono(a=n - k, c=k) for k in range(n + 1)]
    else:
        v = [_mono(a=n - k, c=k, coeff=comb(n, k)) for k in range(n + 1)]
        w = [_mono(a_star=n - k, c_star=k) for k in range(n + 1)]
    return v, w


def pairing_vw(v: Sequence[Poly], w: Sequence[Poly]) -> Poly:
    acc = Poly.zero()
    for x, y in zip(v, w):
        acc = acc + x * y
    return acc


def build_E_tilde(mu: int) -> PolyMatrix:
    """E~_mu = w~ v~^T, an idempotent in M_{|mu|+1}(O(S^2))."""
    v, w = build_vw(mu)
    return PolyMatrix([[wi * vj for vj in v] for wi in w])


def p_denominator(mu: int) -> Poly:
    n = abs(mu)
    return _mono(a=n, a_star=n) + _mono(c=n, c_star=n)


def build_p(mu: int) -> RatFnMatrix:
    """Hermitian 2x2 idempotent p_mu = r r* for the generators a^|mu|, c^|mu| (or their stars)."""
    mu = _check_mu(mu)
    if mu == 0:
        return RatFnMatrix(PolyMatrix.identity(1), Poly.one())
    n = abs(mu)
    # r* = (x, y) / sqrt(den); num = r r* * den
    if mu < 0:
        row = [_mono(a_star=n), _mono(c_star=n)]
    else:
        row = [_mono(a=n), _mono(c=n)]
    col = [x.star() for x in row]
    num = PolyMatrix([[ci * rj for rj in row] for ci in col])
    return RatFnMatrix(num, p_denominator(mu))


def hermitian_scaling(mu: int) -> np.ndarray:
    """Diagonal of A_mu = diag(sqrt(binom(|mu|, k)))."""
    n = abs(mu)
    return np.array([sqrt(comb(n, k)) for k in range(n + 1)])


# --- chart-evaluable matrices ----------------------------------------------

def _eval_monomial(m: Monomial, a, c):
    return a ** m.a * np.conj(a) ** m.a_star * c ** m.c * np.conj(c) ** m.c_star


def eval_poly_at(p: Poly, a, c):
    """Evaluate ``p`` at points ``(a, c)`` of S^3 (numpy-broadcast)."""
    a = np.asarray(a, dtype=complex)
    c = np.asarray(c, dtype=complex)
    out = np.zeros(np.broadcast(a, c).shape, dtype=complex)
    for m, s in p.terms.items():
        out = out + complex(s) * _eval_monomial(m, a, c)
    return out


def eval_matrix_at(M: PolyMatrix, a, c) -> np.ndarray:
    """Array of shape (rows, cols, *point_shape)."""
    return np.array([[eval_poly_at(x, a, c) for x in row] for row in M.entries])


def eval_E_at(mu: int, a, c) -> np.ndarray:
    """Hermitian E_mu = A E~ A^{-1} evaluated at S^3 points."""
    d = hermitian_scaling(mu)
    Et = eval_matrix_at(build_E_tilde(mu), a, c)
    shape = (-1, 1) + (1,) * (Et.ndim - 2)
    return d.reshape(shape) * Et / d.reshape((1, -1) + (1,) * (Et.ndim - 2))


def eval_p_at(mu: int, a, c) -> np.ndarray:
    P = build_p(mu)
    return eval_matrix_at(P.num, a, c) / eval_poly_at(P.den, a, c)


def _w_numeric(mu: int, a, c) -> np.ndarray:
    _, w = build_vw(mu)
    d = hermitian_scaling(mu)
    return np.array([d[k] * eval_poly_at(w[k], a, c) for k in range(len(w))])


def _r_numeric(mu: int, a, c) -> np.ndarray:
    n = abs(mu)
    a = np.asarray(a, dtype=complex)
    c = np.asarray(c, dtype=complex)
    norm = np.sqrt(np.abs(a) ** (2 * n) + np.abs(c) ** (2 * n))
    if mu < 0:
        return np.array([a ** n, c ** n]) / norm
    return np.array([np.conj(a) ** n, np.conj(c) ** n]) / norm


def build_F(mu: int) -> Callable:
    """Partial isometry F_mu = r_mu w_mu^* (shape 2 x (|mu|+1)) as a function of (a, c).

    F F^* = p_mu and F^* F = E_mu.
    """
    mu = _check_mu(mu)
    if mu == 0:
        raise ValueError("F_mu is defined for mu != 0")

    def F(a, c):
        r = _r_numeric(mu, a, c)
        w = _w_numeric(mu, a, c)
        return r[:, None] * np.conj(w)[None, :]

    return F


# --- sections ---------------------------------------------------------------

class NotHomogeneousError(ValueError):
    pass


def section_generators(mu: int) -> list[Poly]:
    return build_vw(mu)[1]


def decompose_section(f: Poly, mu: int) -> list[Poly]:
    """Coefficients f_k in O(S^2) with f = sum_k binom(|mu|,k) f_k g_k.

    g_k are the generators ``section_generators(mu)``; f_k = f * g_k^*.
    """
    mu = _check_mu(mu)
    if not in_P(f, mu):
        raise NotHomogeneousError(f"{render(f)} is not in P_{mu}")
    return [f * g.star() for g in section_generators(mu)]


def reconstruct_section(coeffs: Sequence[Poly], mu: int) -> Poly:
    n = abs(mu)
    acc = Poly.zero()
    for k, (fk, g) in enumerate(zip(coeffs, section_generators(mu))):
        acc = acc + fk * g.scale(comb(n, k))
    return acc


def module_map(x: Sequence[Poly], mu: int) -> tuple[Poly, Poly]:
    """Images of x^T E~ and x^T (1 - E~) under x^T E~ -> x^T w~.

    Returns ``(image of x^T E~, image of x^T (1 - E~))``; the second is zero
    exactly when the map is well defined.
    """
    v, w = build_vw(mu)
    E = build_E_tilde(mu)
    n = len(w)
    xE = [sum((x[i] * E[i, j] for i in range(n)), Poly.zero()) for j in range(n)]
    x_minus = [x[j] - xE[j] for j in range(n)]
    return pairing_vw(xE, w), pairing_vw(x_minus, w)
