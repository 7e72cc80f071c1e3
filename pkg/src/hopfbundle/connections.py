"""First-order calculus on O(SU(2)), the monopole connection and Grassmann connections.

1-forms are free-module coordinates over (da, das, dc, dcs) with Poly
coefficients.  The differential of the defining relation,

    r = as*da + a*das + cs*dc + c*dcs,

is not imposed on the coordinates, so two representatives of the same de Rham
class may differ by a multiple of r.  ``form_equal`` offers three comparisons:

* ``exact``    coefficient Polys agree,
* ``quotient`` agree after the canonical projection that kills O*r,
* ``chart``    agree as smooth forms on a 12^3 grid of S^3.

The projection uses the contraction s = (a, as, c, cs): <r, s> = 2, so
N(xi) = xi - 1/2 <xi, s> r is well defined on classes and vanishes exactly on
O*r.  For 2-forms N2(eta) = eta - 1/2 r ^ i_s(eta).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import geometry as geo
from .algebra import (
    ALPHA,
    ALPHA_STAR,
    GAMMA,
    GAMMA_STAR,
    Poly,
    Scalar,
    normal_form,
    render,
)
from .hopf import LaurentPoly, antipode, coproduct, splitting_i
from .projectors import PolyMatrix, RatFnMatrix, build_vw, eval_poly_at

DIFF_SYMBOLS = ("da", "das", "dc", "dcs")
# star of dx_i is dx_{STAR_INDEX[i]}
STAR_INDEX = (1, 0, 3, 2)
WEDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
WEDGE_SYMBOLS = tuple(f"{DIFF_SYMBOLS[i]}^{DIFF_SYMBOLS[j]}" for i, j in WEDGE_PAIRS)
_PAIR_INDEX = {p: k for k, p in enumerate(WEDGE_PAIRS)}

CHART_TOL = 1e-10
CACHE_LIMIT = 32
_HALF = Scalar(Fraction(1, 2))


def _poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.constant(x)


def _coef_str(p: Poly) -> str:
    s = render(p)
    if " " in s or s.startswith("-"):
        return f"({s})"
    return s


class SymbolicOneForm:
    """c_a*da + c_as*das + c_c*dc + c_cs*dcs."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = (0, 0, 0, 0)):
        if len(coeffs) != 4:
            raise ValueError("a 1-form has four coefficients")
        self.coeffs = tuple(_poly(c) for c in coeffs)

    @classmethod
    def zero(cls) -> "SymbolicOneForm":
        return cls()

    @classmethod
    def basis(cls, i: int, coeff=1) -> "SymbolicOneForm":
        c = [Poly.zero()] * 4
        c[i] = _poly(coeff)
        return cls(c)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other):
        return SymbolicOneForm([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return SymbolicOneForm([-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, p):
        if isinstance(p, SymbolicOneForm):
            return self.wedge(p)
        p = _poly(p)
        return SymbolicOneForm([c * p for c in self.coeffs])

    __rmul__ = __mul__

    def wedge(self, other: "SymbolicOneForm") -> "SymbolicTwoForm":
        x, y = self.coeffs, other.coeffs
        return SymbolicTwoForm([x[i] * y[j] - x[j] * y[i] for i, j in WEDGE_PAIRS])

    def star(self) -> "SymbolicOneForm":
        out = [Poly.zero()] * 4
        for i, c in enumerate(self.coeffs):
            out[STAR_INDEX[i]] = c.star()
        return SymbolicOneForm(out)

    def contract(self, vec: Sequence[Poly]) -> Poly:
        acc = Poly.zero()
        for c, v in zip(self.coeffs, vec):
            acc = acc + c * v
        return acc

    def __eq__(self, other):
        if not isinstance(other, SymbolicOneForm):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def render(self) -> str:
        parts = [f"{_coef_str(c)}*{sym}" for c, sym in zip(self.coeffs, DIFF_SYMBOLS) if c]
        return " + ".join(parts) if parts else "0"

    __str__ = render

    def __repr__(self):
        return f"SymbolicOneForm({self.render()})"

    def to_json(self) -> dict:
        return {sym: render(c) for sym, c in zip(DIFF_SYMBOLS, self.coeffs)}


class SymbolicTwoForm:
    """Coefficients over da^das, da^dc, da^dcs, das^dc, das^dcs, dc^dcs."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = (0,) * 6):
        if len(coeffs) != 6:
            raise ValueError("a 2-form has six coefficients")
        self.coeffs = tuple(_poly(c) for c in coeffs)

    @classmethod
    def zero(cls) -> "SymbolicTwoForm":
        return cls()

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other):
        return SymbolicTwoForm([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return SymbolicTwoForm([-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, p):
        p = _poly(p)
        return SymbolicTwoForm([c * p for c in self.coeffs])

    __rmul__ = __mul__

    def component(self, i: int, j: int) -> Poly:
        """Coefficient of dx_i ^ dx_j with the antisymmetric convention."""
        if i == j:
            return Poly.zero()
        if i < j:
            return self.coeffs[_PAIR_INDEX[(i, j)]]
        return -self.coeffs[_PAIR_INDEX[(j, i)]]

    def interior(self, vec: Sequence[Poly]) -> SymbolicOneForm:
        """i_v(eta) with i_v(dx_i ^ dx_j) = v_i dx_j - v_j dx_i."""
        out = [Poly.zero()] * 4
        for (i, j), c in zip(WEDGE_PAIRS, self.coeffs):
            if not c:
                continue
            out[j] = out[j] + c * vec[i]
            out[i] = out[i] - c * vec[j]
        return SymbolicOneForm(out)

    def __eq__(self, other):
        if not isinstance(other, SymbolicTwoForm):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def render(self) -> str:
        parts = [f"{_coef_str(c)}*{sym}" for c, sym in zip(self.coeffs, WEDGE_SYMBOLS) if c]
        return " + ".join(parts) if parts else "0"

    __str__ = render

    def __repr__(self):
        return f"SymbolicTwoForm({self.render()})"

    def to_json(self) -> dict:
        return {sym: render(c) for sym, c in zip(WEDGE_SYMBOLS, self.coeffs)}


# --- the differential --------------------------------------------------------

def _d_monomial_raw(e: Sequence[int]):
    """Leibniz on a raw exponent vector: yields (generator index, coefficient exponents, multiplicity)."""
    for i, k in enumerate(e):
        if k:
            rest = list(e)
            rest[i] -= 1
            yield i, tuple(rest), k


def differential_raw(raw: Iterable[tuple[Sequence[int], object]]) -> SymbolicOneForm:
    """d applied literally to a sum of (exponents, coefficient) pairs.

    Exponent vectors follow the :class:`Monomial` field order (a, as, c, cs)
    and need not be reduced; no use is made of the relation before
    differentiating.
    """
    out = [dict(), dict(), dict(), dict()]
    for e, s in raw:
        s = Scalar.coerce(s)
        for i, rest, k in _d_monomial_raw(tuple(e)):
            acc = out[i]
            acc[rest] = acc.get(rest, Scalar(0)) + s * k
    return SymbolicOneForm([normal_form(list(acc.items())) for acc in out])


def differential(p) -> SymbolicOneForm:
    """d of the normal-form representative of ``p``."""
    p = _poly(p)
    return differential_raw((tuple(m), s) for m, s in p.terms.items())


def d_product(*factors: Poly) -> SymbolicOneForm:
    """Leibniz expansion of d(f1 f2 ... fk) without reducing the product first."""
    out = SymbolicOneForm.zero()
    for i, f in enumerate(factors):
        rest = Poly.one()
        for j, g in enumerate(factors):
            if j != i:
                rest = rest * g
        out = out + differential(f) * rest
    return out


RELATION_FORM = SymbolicOneForm([ALPHA_STAR, ALPHA, GAMMA_STAR, GAMMA])
CONTRACTION = (ALPHA, ALPHA_STAR, GAMMA, GAMMA_STAR)


def canonical_projection(xi):
    """Canonical representative of the class of ``xi`` modulo the differentiated relation."""
    if isinstance(xi, SymbolicOneForm):
        t = xi.contract(CONTRACTION).scale(_HALF)
        return xi - RELATION_FORM * t
    if isinstance(xi, SymbolicTwoForm):
        z = xi.interior(CONTRACTION) * Poly.constant(_HALF)
        return xi - RELATION_FORM.wedge(z)
    raise TypeError("expected a SymbolicOneForm or SymbolicTwoForm")


# --- chart evaluation ---------------------------------------------------------

def _diff_values(da, dc):
    return (da, np.conj(da), dc, np.conj(dc))


def _coeff_values(form, a, c):
    return [eval_poly_at(p, a, c) for p in form.coeffs]


def eval_one_form(xi: SymbolicOneForm, theta, phi, psi, direction: str):
    """xi evaluated on a chart tangent vector of S^3 at (theta, phi, psi)."""
    a, c = geo.s3_point_values(theta, phi, psi)
    dv = _diff_values(*geo.tangent_values(theta, phi, psi, direction))
    vals = _coeff_values(xi, a, c)
    return sum(v * d for v, d in zip(vals, dv))


def eval_two_form(eta: SymbolicTwoForm, theta, phi, psi, dir1: str, dir2: str):
    a, c = geo.s3_point_values(theta, phi, psi)
    d1 = _diff_values(*geo.tangent_values(theta, phi, psi, dir1))
    d2 = _diff_values(*geo.tangent_values(theta, phi, psi, dir2))
    vals = _coeff_values(eta, a, c)
    out = 0j
    for v, (i, j) in zip(vals, WEDGE_PAIRS):
        out = out + v * (d1[i] * d2[j] - d1[j] * d2[i])
    return out


def eval_two_form_on_S2(eta: SymbolicTwoForm, theta, phi):
    """Pull ``eta`` back along the lift S^2 -> S^3 and evaluate on (d/dtheta, d/dphi).

    Only meaningful for basic forms (invariant and horizontal), whose pullback
    does not depend on the choice of lift.
    """
    a, c = geo.s3_lift_dual(theta, phi)
    ad, cd = a.conj(), c.conj()
    d = (a.d, ad.d, c.d, cd.d)
    out = 0j
    for p, (i, j) in zip(eta.coeffs, WEDGE_PAIRS):
        if not p:
            continue
        v = eval_poly_at(p, a.val, c.val)
        out = out + v * (d[i][0] * d[j][1] - d[i][1] * d[j][0])
    return out


_CHART_DIRECTIONS = ("theta", "phi", "psi")


def _chart_samples(form, n: int = 12):
    T, P, S = geo.s3_grid(n)
    if isinstance(form, SymbolicOneForm):
        return [eval_one_form(form, T, P, S, d) for d in _CHART_DIRECTIONS]
    pairs = [("theta", "phi"), ("theta", "psi"), ("phi", "psi")]
    return [eval_two_form(form, T, P, S, d1, d2) for d1, d2 in pairs]


def form_equal(xi, eta, mode: str = "exact", tol: float = CHART_TOL) -> bool:
    """Compare two forms of the same degree; see the module docstring for modes."""
    if type(xi) is not type(eta):
        raise TypeError("forms of different degree")
    if mode == "exact":
        return xi == eta
    if mode == "quotient":
        return canonical_projection(xi) == canonical_projection(eta)
    if mode == "chart":
        diff = xi - eta
        if diff.is_zero():
            return True
        sx = _chart_samples(xi)
        sd = _chart_samples(diff)
        scale = 1.0 + max(float(np.max(np.abs(v))) for v in sx)
        return all(float(np.max(np.abs(v))) <= tol * scale for v in sd)
    raise ValueError(f"unknown mode {mode!r}")


# --- connection form of the splitting ------------------------------------------

def omega_of(x: Poly) -> SymbolicOneForm:
    """m (S (x) d) Delta(x) for x in O(SU(2))."""
    out = SymbolicOneForm.zero()
    for left, right in coproduct(x).summands():
        out = out + differential(right) * antipode(left)
    return out


class ConnectionForm:
    """omega(u^n) = m (S (x) d) Delta i(u^n), cached for |n| <= 32."""

    def __init__(self, cache_limit: int = CACHE_LIMIT):
        self.cache_limit = cache_limit
        self._cache: dict[int, SymbolicOneForm] = {}

    def __call__(self, n) -> SymbolicOneForm:
        if isinstance(n, LaurentPoly):
            out = SymbolicOneForm.zero()
            for k, s in n.terms.items():
                out = out + self(k) * Poly.constant(s)
            return out
        n = int(n)
        if n in self._cache:
            return self._cache[n]
        val = omega_of(splitting_i(LaurentPoly.monomial(n)))
        if abs(n) <= self.cache_limit:
            self._cache[n] = val
        return val

    def property_i_defect(self, m: int, n: int) -> SymbolicOneForm:
        """omega(u^m u^n) - omega(u^m) eps(u^n) - eps(u^m) omega(u^n); counits are 1."""
        return self(m + n) - self(m) - self(n)


_OMEGA = ConnectionForm()


def connection_form_from_splitting() -> ConnectionForm:
    return _OMEGA


# --- covariant differentiation ------------------------------------------------

class NotHomogeneousError(ValueError):
    pass


def _degree(f: Poly) -> int:
    w = f.windings()
    if len(w) > 1:
        raise NotHomogeneousError("input is not homogeneous; split it with isotypic_project first")
    return next(iter(w)) if w else 0


def covariant_diff(f) -> SymbolicOneForm:
    """Df = df - f * omega(u^deg f) for homogeneous f."""
    f = _poly(f)
    deg = _degree(f)
    if f.is_zero():
        return SymbolicOneForm.zero()
    return differential(f) - _OMEGA(deg) * f


@dataclass
class HorizontalVerdict:
    f: str
    covariant: SymbolicOneForm
    factored: SymbolicOneForm

    @property
    def passed(self) -> bool:
        return self.covariant == self.factored


def horizontal_form(f: Poly) -> SymbolicOneForm:
    """The rewriting of Df through differentials of invariant products."""
    f = _poly(f)
    if f == ALPHA:
        return d_product(ALPHA, GAMMA_STAR) * GAMMA - d_product(GAMMA_STAR, GAMMA) * ALPHA
    if f == GAMMA:
        return d_product(ALPHA_STAR, GAMMA) * ALPHA - d_product(ALPHA_STAR, ALPHA) * GAMMA
    if f == Poly.one():
        return SymbolicOneForm.zero()
    raise ValueError("horizontal factorisation is provided for a, c and 1")


def horizontal_factor_check(f) -> HorizontalVerdict:
    f = _poly(f)
    return HorizontalVerdict(render(f), covariant_diff(f), horizontal_form(f))


def vertical_values(xi: SymbolicOneForm, n: int = 12):
    """xi on the generator of the fiber action at the 12^3 grid."""
    T, P, S = geo.s3_grid(n)
    return eval_one_form(xi, T, P, S, "fiber")


# --- module connections ---------------------------------------------------------

class NotIdempotentError(ValueError):
    pass


class ModuleConnection:
    """nabla(e_k) = sum_j rows[k][j] (x) e_j.

    ``basis`` are the elements e_j of the module in O(SU(2)); two connections
    given on the same basis agree when their rows agree after right
    multiplication by the idempotent, which for the rank-one E~ amounts to
    comparing the contracted forms sum_j rows[k][j] * e_j.
    """

    def __init__(self, rows: Sequence[Sequence[SymbolicOneForm]], basis: Sequence[Poly] | None = None):
        self.rows = [list(r) for r in rows]
        self.basis = list(basis) if basis is not None else None

    @property
    def size(self) -> int:
        return len(self.rows)

    def contracted(self, k: int) -> SymbolicOneForm:
        if self.basis is None:
            raise ValueError("connection has no module basis")
        out = SymbolicOneForm.zero()
        for xi, e in zip(self.rows[k], self.basis):
            out = out + xi * e
        return out

    def projected(self, e: PolyMatrix) -> list[list[SymbolicOneForm]]:
        n = self.size
        out = []
        for k in range(n):
            row = []
            for l in range(n):
                acc = SymbolicOneForm.zero()
                for j in range(n):
                    if e[j, l]:
                        acc = acc + self.rows[k][j] * e[j, l]
                row.append(acc)
            out.append(row)
        return out

    def apply(self, x: Sequence[Poly]) -> list[SymbolicOneForm]:
        """nabla(sum_k x_k e_k) = sum_k dx_k (x) e_k + x_k nabla(e_k), as rows."""
        n = self.size
        out = [differential(x[j]) for j in range(n)]
        for k in range(n):
            for j in range(n):
                out[j] = out[j] + self.rows[k][j] * x[k]
        return out

    def rows_equal(self, other: "ModuleConnection", mode: str = "exact") -> bool:
        return all(
            form_equal(a, b, mode)
            for ra, rb in zip(self.rows, other.rows)
            for a, b in zip(ra, rb)
        )

    def to_json(self) -> dict:
        return {
            "rows": [[xi.to_json() for xi in row] for row in self.rows],
            "basis": [render(b) for b in self.basis] if self.basis is not None else None,
        }


def covariant_derivative(mu: int, route: str = "invariant") -> ModuleConnection:
    """nabla on P_mu in the basis e_k = w~_k.

    e_k = sum_j b_kj e_j with invariant b_kj = w~_k v~_j, and nabla acts as D on
    these coefficients.  ``route="invariant"`` uses D b = d b directly;
    ``route="leibniz"`` expands D(w~_k v~_j) = D(w~_k) v~_j + w~_k D(v~_j).
    """
    if mu == 0:
        raise ValueError("covariant_derivative needs |mu| >= 1")
    v, w = build_vw(mu)
    n = len(w)
    rows = []
    for k in range(n):
        row = []
        if route == "invariant":
            for j in range(n):
                row.append(covariant_diff(w[k] * v[j]))
        elif route == "leibniz":
            Dw = covariant_diff(w[k])
            for j in range(n):
                row.append(Dw * v[j] + covariant_diff(v[j]) * w[k])
        else:
            raise ValueError(f"unknown route {route!r}")
        rows.append(row)
    return ModuleConnection(rows, w)


def _as_matrix(e) -> PolyMatrix:
    if isinstance(e, RatFnMatrix):
        if e.den != Poly.one():
            raise ValueError("idempotent must have polynomial entries")
        return e.num
    return e


def grassmann_connection(e, basis: Sequence[Poly] | None = None) -> ModuleConnection:
    """nabla^e(e_k) = sum_j d(e_k^j) (x) e_j."""
    e = _as_matrix(e)
    if e @ e != e:
        raise NotIdempotentError("matrix is not idempotent")
    rows = [[differential(x) for x in row] for row in e.entries]
    return ModuleConnection(rows, basis)


def _matrix_wedge(A, B) -> list[list[SymbolicTwoForm]]:
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for l in range(n):
            acc = SymbolicTwoForm.zero()
            for k in range(n):
                acc = acc + A[i][k].wedge(B[k][l])
            row.append(acc)
        out.append(row)
    return out


def curvature_raw(c: ModuleConnection) -> list[list[SymbolicTwoForm]]:
    """Entry (i, l) = -sum_k de_i^k ^ de_k^l."""
    return [[-x for x in row] for row in _matrix_wedge(c.rows, c.rows)]


def curvature(c: ModuleConnection, e) -> list[list[SymbolicTwoForm]]:
    """Curvature matrix -(de ^ de) e, i.e. the raw rows composed with the projection onto the image."""
    e = _as_matrix(e)
    raw = curvature_raw(c)
    n = len(raw)
    out = []
    for i in range(n):
        row = []
        for l in range(n):
            acc = SymbolicTwoForm.zero()
            for k in range(n):
                if e[k, l]:
                    acc = acc + raw[i][k] * e[k, l]
            row.append(acc)
        out.append(row)
    return out


def curvature_apply(curv, x: Sequence[Poly]) -> list[SymbolicTwoForm]:
    """nabla^2(sum_i x_i e_i) as a row of 2-forms."""
    n = len(curv)
    out = [SymbolicTwoForm.zero() for _ in range(n)]
    for i in range(n):
        for l in range(n):
            out[l] = out[l] + curv[i][l] * x[i]
    return out


def trace_two_form(M) -> SymbolicTwoForm:
    acc = SymbolicTwoForm.zero()
    for i in range(len(M)):
        acc = acc + M[i][i]
    return acc


def curvature_chern_integral(e, n_theta: int = 32, n_phi: int = 64) -> complex:
    """-(1/2 pi i) * integral of Tr(curvature) over S^2."""
    e = _as_matrix(e)
    tr = trace_two_form(curvature(grassmann_connection(e), e))
    val = geo.integrate_S2(lambda t, p: eval_two_form_on_S2(tr, t, p), n_theta, n_phi)
    return -val / (2j * np.pi)
