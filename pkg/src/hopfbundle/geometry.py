"""Charts on S^3 and S^2, forward-mode differentiation, 2-forms and quadrature.

S^3 chart: a = cos(t) e^{i phi}, c = sin(t) e^{i psi} with t in [0, pi/2].
S^2 chart: x3 = cos(theta), x1 + i x2 = sin(theta) e^{i phi}.  Base coordinates
pull back as x1 + i x2 = 2 as*c and x3 = as*a - cs*c, so the S^3 chart point
(t, phi, psi) lies over (theta, phi) = (2t, psi - phi).

All evaluators accept numpy arrays and broadcast, so a whole quadrature grid is
processed in one call.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .algebra import Monomial, Poly

# Orientation of (d theta, d phi) relative to the outward normal of S^2.
ORIENTATION = 1

DEFAULT_NODES = (64, 128)


class ChartSingularityError(ZeroDivisionError):
    pass


class NotInvariantError(ValueError):
    pass


@dataclass(frozen=True)
class ChartPointS3:
    theta: float
    phi: float
    psi: float

    @property
    def alpha(self) -> complex:
        return math.cos(self.theta) * complex(math.cos(self.phi), math.sin(self.phi))

    @property
    def gamma(self) -> complex:
        return math.sin(self.theta) * complex(math.cos(self.psi), math.sin(self.psi))

    def base_point(self) -> "ChartPointS2":
        return ChartPointS2(2 * self.theta, (self.psi - self.phi) % (2 * math.pi))


@dataclass(frozen=True)
class ChartPointS2:
    theta: float
    phi: float

    @property
    def x3(self) -> float:
        return math.cos(self.theta)

    @property
    def x1(self) -> float:
        return math.sin(self.theta) * math.cos(self.phi)

    @property
    def x2(self) -> float:
        return math.sin(self.theta) * math.sin(self.phi)


@dataclass(frozen=True)
class EvaluatedTwoForm:
    """Component of a 2-form on the ordered pair (d/dtheta, d/dphi)."""

    value: complex


class Dual2:
    """Value with first partials in the two S^2 chart coordinates."""

    __slots__ = ("val", "dtheta", "dphi")
    __array_ufunc__ = None

    def __init__(self, val, dtheta=0.0, dphi=0.0):
        self.val = val
        self.dtheta = dtheta
        self.dphi = dphi

    @staticmethod
    def lift(x) -> "Dual2":
        return x if isinstance(x, Dual2) else Dual2(x, 0.0, 0.0)

    def __add__(self, other):
        o = Dual2.lift(other)
        return Dual2(self.val + o.val, self.dtheta + o.dtheta, self.dphi + o.dphi)

    __radd__ = __add__

    def __neg__(self):
        return Dual2(-self.val, -self.dtheta, -self.dphi)

    def __sub__(self, other):
        return self + (-Dual2.lift(other))

    def __rsub__(self, other):
        return Dual2.lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Dual2):
            return Dual2(self.val * other, self.dtheta * other, self.dphi * other)
        return Dual2(
            self.val * other.val,
            self.dtheta * other.val + self.val * other.dtheta,
            self.dphi * other.val + self.val * other.dphi,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "Dual2":
        v = np.asarray(self.val)
        if np.any(np.abs(v) < 1e-300):
            raise ChartSingularityError("division by zero in chart function")
        inv = 1.0 / self.val
        return Dual2(inv, -self.dtheta * inv * inv, -self.dphi * inv * inv)

    def __truediv__(self, other):
        return self * Dual2.lift(other).reciprocal()

    def __rtruediv__(self, other):
        return Dual2.lift(other) * self.reciprocal()

    def __pow__(self, n: int):
        n = int(n)
        if n < 0:
            return (self ** (-n)).reciprocal()
        if n == 0:
            return Dual2(np.ones_like(np.asarray(self.val)), 0.0, 0.0)
        vn1 = self.val ** (n - 1)
        return Dual2(vn1 * self.val, n * vn1 * self.dtheta, n * vn1 * self.dphi)

    def conj(self) -> "Dual2":
        # the chart coordinates are real, so partials of conj(f) are conj of partials
        return Dual2(np.conj(self.val), np.conj(self.dtheta), np.conj(self.dphi))

    @property
    def d(self) -> tuple:
        return (self.dtheta, self.dphi)

    def __repr__(self):
        return f"Dual2({self.val!r}, dtheta={self.dtheta!r}, dphi={self.dphi!r})"


def s2_coordinates(theta, phi) -> dict[str, Dual2]:
    """Dual-number chart coordinates on S^2: x1, x2, x3, z = x1 + i x2."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    e = np.exp(1j * phi)
    zero = np.zeros(np.broadcast(theta, phi).shape)
    x1 = Dual2(st * cp + zero, ct * cp + zero, -st * sp + zero)
    x2 = Dual2(st * sp + zero, ct * sp + zero, st * cp + zero)
    x3 = Dual2(ct + zero, -st + zero, zero)
    z = Dual2(st * e + zero, ct * e + zero, 1j * st * e + zero)
    return {"x1": x1, "x2": x2, "x3": x3, "z": z}


def s3_lift_dual(theta, phi) -> tuple[Dual2, Dual2]:
    """Smooth lift (a, c) = (cos(theta/2), sin(theta/2) e^{i phi}) over the S^2 chart."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    zero = np.zeros(np.broadcast(theta, phi).shape)
    h = theta / 2
    e = np.exp(1j * phi)
    a = Dual2(np.cos(h) + zero + 0j, -0.5 * np.sin(h) + zero + 0j, zero + 0j)
    c = Dual2(np.sin(h) * e + zero, 0.5 * np.cos(h) * e + zero, 1j * np.sin(h) * e + zero)
    return a, c


def s3_point_values(theta, phi, psi):
    """Complex (a, c) at S^3 chart coordinates (array-broadcast)."""
    theta = np.asarray(theta, dtype=float)
    a = np.cos(theta) * np.exp(1j * np.asarray(phi, dtype=float))
    c = np.sin(theta) * np.exp(1j * np.asarray(psi, dtype=float))
    return np.broadcast_arrays(a, c)


def eval_monomial_values(m: Monomial, a, c):
    ac, cc = np.conj(a), np.conj(c)
    return a ** m.a * ac ** m.a_star * c ** m.c * cc ** m.c_star


def eval_poly(p: Poly, pt: ChartPointS3 | tuple) -> complex | np.ndarray:
    """Evaluate ``p`` on S^3 at a chart point or at arrays ``(theta, phi, psi)``."""
    if isinstance(pt, ChartPointS3):
        a, c = pt.alpha, pt.gamma
    else:
        a, c = s3_point_values(*pt)
    out = 0j
    for m, s in p.terms.items():
        out = out + complex(s) * eval_monomial_values(m, a, c)
    return out


def _require_invariant(p: Poly) -> None:
    bad = [m for m in p.terms if m.winding != 0]
    if bad:
        raise NotInvariantError("polynomial is not U(1)-invariant (winding != 0)")


class _InvariantBasis:
    """Powers of Z = as*c = (x1+ix2)/2, Zb = a*cs = (x1-ix2)/2 and G = cs*c = (1-x3)/2."""

    def __init__(self, Z, Zb, G, one):
        self._base = {"Z": Z, "Zb": Zb, "G": G}
        self._one = one
        self._cache: dict = {}

    def power(self, name: str, k: int):
        if k == 0:
            return self._one
        key = (name, k)
        if key not in self._cache:
            self._cache[key] = self.power(name, k - 1) * self._base[name]
        return self._cache[key]

    def monomial(self, m: Monomial):
        if m.a > 0:
            # a^k cs^l c^r with l = k + r  ->  (a cs)^k (cs c)^r
            return self.power("Zb", m.a) * self.power("G", m.c)
        # cs^p c^r as^s with r = p + s  ->  (cs c)^p (as c)^s
        return self.power("G", m.c_star) * self.power("Z", m.a_star)

    def poly(self, p: Poly):
        out = None
        for m, s in p.terms.items():
            term = self.monomial(m) * complex(s)
            out = term if out is None else out + term
        if out is None:
            out = self._one * 0.0
        return out


def invariant_basis_values(theta, phi) -> _InvariantBasis:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    z = np.sin(theta) * np.exp(1j * phi)
    G = (1 - np.cos(theta)) / 2 + 0j
    one = np.ones(np.broadcast(theta, phi).shape, dtype=complex)
    return _InvariantBasis(z / 2 * one, np.conj(z) / 2 * one, G * one, one)


def invariant_basis_dual(theta, phi) -> _InvariantBasis:
    x = s2_coordinates(theta, phi)
    z = x["z"]
    G = (1 - x["x3"]) * 0.5
    one = Dual2(np.ones_like(np.asarray(z.val)), 0.0, 0.0)
    return _InvariantBasis(z * 0.5, z.conj() * 0.5, G, one)


def eval_invariant(p: Poly, pt: ChartPointS2 | tuple):
    """Evaluate an element of O(S^2) through the base coordinates x1, x2, x3."""
    _require_invariant(p)
    if isinstance(pt, ChartPointS2):
        basis = invariant_basis_values(pt.theta, pt.phi)
        return complex(basis.poly(p))
    return basis_poly_values(p, *pt)


def basis_poly_values(p: Poly, theta, phi):
    return invariant_basis_values(theta, phi).poly(p)


def eval_invariant_dual(p: Poly, theta, phi, basis: _InvariantBasis | None = None) -> Dual2:
    _require_invariant(p)
    if basis is None:
        basis = invariant_basis_dual(theta, phi)
    return basis.poly(p)


def eval_dual(fn: Callable[[dict], Dual2], pt: ChartPointS2 | tuple) -> Dual2:
    """Apply ``fn`` to the dual chart coordinates at ``pt``."""
    if isinstance(pt, ChartPointS2):
        theta, phi = pt.theta, pt.phi
    else:
        theta, phi = pt
    return fn(s2_coordinates(theta, phi))


def central_difference(fn: Callable[[float, float], complex], theta, phi, h: float = 1e-5):
    """Central-difference partials of a plain chart function."""
    dth = (fn(theta + h, phi) - fn(theta - h, phi)) / (2 * h)
    dph = (fn(theta, phi + h) - fn(theta, phi - h)) / (2 * h)
    return dth, dph


def one_form(x) -> tuple:
    """(theta, phi) components of a 1-form given as a Dual2 (its differential) or a pair."""
    return x.d if isinstance(x, Dual2) else tuple(x)


def wedge(omega, eta) -> EvaluatedTwoForm:
    """(omega ^ eta)(d/dtheta, d/dphi) = omega_theta eta_phi - omega_phi eta_theta."""
    wt, wp = one_form(omega)
    et, ep = one_form(eta)
    return EvaluatedTwoForm(wt * ep - wp * et)


def wedge_value(omega, eta):
    return wedge(omega, eta).value


@lru_cache(maxsize=32)
def quadrature_nodes(n_theta: int, n_phi: int):
    """Gauss-Legendre nodes on [0, pi] and uniform periodic nodes on [0, 2 pi)."""
    x, w = np.polynomial.legendre.leggauss(n_theta)
    theta = (x + 1) * (np.pi / 2)
    w_theta = w * (np.pi / 2)
    phi = np.arange(n_phi) * (2 * np.pi / n_phi)
    w_phi = np.full(n_phi, 2 * np.pi / n_phi)
    return theta, w_theta, phi, w_phi


def quadrature_grid(n_theta: int, n_phi: int):
    """Broadcastable (theta[:, None], phi[None, :]) grid plus the weight matrix."""
    theta, wt, phi, wp = quadrature_nodes(n_theta, n_phi)
    return theta[:, None], phi[None, :], wt[:, None] * wp[None, :]


def integrate_S2(f: Callable, n_theta: int = DEFAULT_NODES[0], n_phi: int = DEFAULT_NODES[1]) -> complex:
    """Integrate a 2-form over S^2 with the outward-normal orientation.

    ``f(theta, phi)`` returns the (d/dtheta, d/dphi) component, either as an
    array over the broadcast grid or as an :class:`EvaluatedTwoForm`.
    """
    if n_theta < 8 or n_phi < 8:
        raise ValueError("need at least 8 nodes per direction")
    theta, phi, w = quadrature_grid(n_theta, n_phi)
    vals = f(theta, phi)
    if isinstance(vals, EvaluatedTwoForm):
        vals = vals.value
    vals = np.broadcast_to(np.asarray(vals), w.shape)
    return complex(ORIENTATION * np.sum(vals * w))


PAULI = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
)


def pauli_decompose(e) -> tuple:
    """Coefficients s0..s3 with e = sum_k s_k sigma_k.

    The basis is sigma_1 = diag(1, -1), sigma_2 = offdiag(1, 1),
    sigma_3 = [[0, -i], [i, 0]].  Entries may be numbers, arrays or Dual2.
    """
    e00, e01 = e[0][0], e[0][1]
    e10, e11 = e[1][0], e[1][1]
    s0 = (e00 + e11) * 0.5
    s1 = (e00 - e11) * 0.5
    s2 = (e01 + e10) * 0.5
    s3 = (e10 - e01) * (-0.5j)
    return s0, s1, s2, s3


def pauli_reconstruct(s) -> np.ndarray:
    return sum(np.multiply.outer(PAULI[k], np.asarray(s[k])) for k in range(4))


def pauli_trace_form(s1: Dual2, s2: Dual2, s3: Dual2):
    """4i (s1 ds2^ds3 + s2 ds3^ds1 + s3 ds1^ds2) on (d/dtheta, d/dphi)."""
    return 4j * (
        s1.val * wedge_value(s2, s3) + s2.val * wedge_value(s3, s1) + s3.val * wedge_value(s1, s2)
    )


def s3_grid(n: int = 12):
    """Deterministic interior grid of S^3 chart points (midpoint rule in each coordinate)."""
    k = (np.arange(n) + 0.5) / n
    theta = k * (np.pi / 2)
    phi = k * (2 * np.pi)
    psi = k * (2 * np.pi)
    T, P, S = np.meshgrid(theta, phi, psi, indexing="ij")
    return T.ravel(), P.ravel(), S.ravel()


def s2_grid(n_theta: int = 16, n_phi: int = 16):
    """Interior S^2 chart points (theta avoids the poles)."""
    theta = (np.arange(n_theta) + 0.5) * (np.pi / n_theta)
    phi = np.arange(n_phi) * (2 * np.pi / n_phi)
    T, P = np.meshgrid(theta, phi, indexing="ij")
    return T, P


def write_field_csv(theta, phi, values, stream=None) -> str:
    """CSV with columns theta,phi,re,im; 17 significant digits."""
    buf = stream if stream is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "phi", "re", "im"])
    T, P, V = np.broadcast_arrays(np.asarray(theta), np.asarray(phi), np.asarray(values))
    for t, p, v in zip(T.ravel(), P.ravel(), V.ravel()):
        v = complex(v)
        w.writerow([f"{t:.17g}", f"{p:.17g}", f"{v.real:.17g}", f"{v.imag:.17g}"])
    return buf.getvalue() if stream is None else ""


def tangent_values(theta, phi, psi, direction: str):
    """(da, dc) evaluated on a tangent vector of the S^3 chart.

    ``direction`` is one of ``theta``, ``phi``, ``psi`` or ``fiber`` (the
    generator of the right U(1)-action, (a, c) -> (a e^{it}, c e^{it})).
    """
    a, c = s3_point_values(theta, phi, psi)
    theta = np.asarray(theta, dtype=float)
    if direction == "theta":
        da = -np.sin(theta) * np.exp(1j * np.asarray(phi, dtype=float))
        dc = np.cos(theta) * np.exp(1j * np.asarray(psi, dtype=float))
    elif direction == "phi":
        da, dc = 1j * a, 0 * c
    elif direction == "psi":
        da, dc = 0 * a, 1j * c
    elif direction == "fiber":
        da, dc = 1j * a, 1j * c
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return np.broadcast_arrays(da, dc)
