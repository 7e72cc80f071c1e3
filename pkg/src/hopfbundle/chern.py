"""First Chern class of the line bundles L_mu and its pairing with the fundamental class of S^2.

The density (1/2 pi i) Tr(e de de) is evaluated pointwise with dual numbers on
the S^2 chart and integrated by :func:`geometry.integrate_S2`.  Because trace
is invariant under constant conjugation, the non-hermitian E~_mu (exact
entries) gives the same density as the hermitian E_mu.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import geometry as geo
from .geometry import Dual2, EvaluatedTwoForm
from .projectors import build_E_tilde, build_p, hermitian_scaling

SOURCES = ("etilde", "p", "E")
INTEGRALITY_TOL = 1e-6


class IntegralityError(ArithmeticError):
    """A Chern number failed to be an integer within tolerance."""


def _stack(entries: Sequence[Sequence[Dual2]]):
    val = np.array([[e.val for e in row] for row in entries])
    dt = np.array([[np.broadcast_to(e.dtheta, np.shape(e.val)) for e in row] for row in entries])
    dp = np.array([[np.broadcast_to(e.dphi, np.shape(e.val)) for e in row] for row in entries])
    return val, dt, dp


def trace_e_de_de(entries: Sequence[Sequence[Dual2]]):
    """Tr(e de ^ de) on (d/dtheta, d/dphi) for a matrix of Dual2 entries."""
    V, Dt, Dp = _stack(entries)
    a = np.einsum("ij...,jk...,ki...->...", V, Dt, Dp)
    b = np.einsum("ij...,jk...,ki...->...", V, Dp, Dt)
    return a - b


def etilde_entries(mu: int, theta, phi) -> list[list[Dual2]]:
    E = build_E_tilde(mu)
    basis = geo.invariant_basis_dual(theta, phi)
    return [[geo.eval_invariant_dual(x, theta, phi, basis) for x in row] for row in E.entries]


def p_entries(mu: int, theta, phi) -> list[list[Dual2]]:
    P = build_p(mu)
    basis = geo.invariant_basis_dual(theta, phi)
    den = geo.eval_invariant_dual(P.den, theta, phi, basis)
    inv = den.reciprocal()
    return [[geo.eval_invariant_dual(x, theta, phi, basis) * inv for x in row] for row in P.num.entries]


def conjugated_entries(entries, A: np.ndarray) -> list[list[Dual2]]:
    """A e A^{-1} for a constant invertible matrix A."""
    Ainv = np.linalg.inv(A)
    n = len(entries)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = None
            for k in range(n):
                for l in range(n):
                    c = A[i, k] * Ainv[l, j]
                    if c == 0:
                        continue
                    t = entries[k][l] * complex(c)
                    acc = t if acc is None else acc + t
            row.append(acc if acc is not None else entries[0][0] * 0.0)
        out.append(row)
    return out


def E_entries(mu: int, theta, phi) -> list[list[Dual2]]:
    return conjugated_entries(etilde_entries(mu, theta, phi), np.diag(hermitian_scaling(mu)))


def idempotent_entries(mu: int, source: str, theta, phi):
    if source == "etilde":
        return etilde_entries(mu, theta, phi)
    if source == "p":
        return p_entries(mu, theta, phi)
    if source == "E":
        return E_entries(mu, theta, phi)
    raise ValueError(f"unknown source {source!r}; expected one of {SOURCES}")


@dataclass(frozen=True)
class ChernDensity:
    """The 2-form (1/2 pi i) Tr(e de de) for the idempotent of L_mu."""

    mu: int
    source: str = "etilde"

    def values(self, theta, phi):
        entries = idempotent_entries(self.mu, self.source, theta, phi)
        return trace_e_de_de(entries) / (2j * np.pi)

    def __call__(self, theta, phi):
        return self.values(theta, phi)

    def at(self, pt: geo.ChartPointS2) -> EvaluatedTwoForm:
        return EvaluatedTwoForm(complex(self.values(pt.theta, pt.phi)))


def chern_density(mu: int, source: str = "etilde") -> ChernDensity:
    if source not in SOURCES:
        raise ValueError(f"unknown source {source!r}; expected one of {SOURCES}")
    return ChernDensity(int(mu), source)


def c1_L1_closed_form(theta, phi):
    """-(1/4 pi)(x1 dx2^dx3 + x2 dx3^dx1 + x3 dx1^dx2) on (d/dtheta, d/dphi)."""
    x = geo.s2_coordinates(theta, phi)
    x1, x2, x3 = x["x1"], x["x2"], x["x3"]
    form = (
        x1.val * geo.wedge_value(x2, x3)
        + x2.val * geo.wedge_value(x3, x1)
        + x3.val * geo.wedge_value(x1, x2)
    )
    return -form / (4 * np.pi)


def pauli_density(mu: int, source: str, theta, phi):
    """(1/2 pi i) * 4i (s1 ds2^ds3 + cyclic) for a 2x2 idempotent."""
    e = idempotent_entries(mu, source, theta, phi)
    if len(e) != 2:
        raise ValueError("Pauli route needs a 2x2 idempotent")
    _, s1, s2, s3 = geo.pauli_decompose(e)
    return geo.pauli_trace_form(s1, s2, s3) / (2j * np.pi)


def chern_number(mu: int, n_theta: int = geo.DEFAULT_NODES[0], n_phi: int = geo.DEFAULT_NODES[1],
                 source: str = "etilde") -> float:
    """Integral of c1(L_mu) over S^2."""
    if n_theta < 16 or n_phi < 16:
        raise ValueError("quadrature sizes must be >= 16")
    dens = chern_density(mu, source)
    return geo.integrate_S2(dens, n_theta, n_phi).real


def chern_number_complex(mu: int, n_theta: int = geo.DEFAULT_NODES[0], n_phi: int = geo.DEFAULT_NODES[1],
                         source: str = "etilde") -> complex:
    return geo.integrate_S2(chern_density(mu, source), n_theta, n_phi)


def pairing(mu: int, n_theta: int = geo.DEFAULT_NODES[0], n_phi: int = geo.DEFAULT_NODES[1],
            source: str = "etilde") -> float:
    """<[E_mu], [phi_S2]>; raises :class:`IntegralityError` if not within 1e-6 of -mu."""
    value = chern_number(mu, n_theta, n_phi, source)
    nearest = round(value)
    if abs(value - nearest) >= INTEGRALITY_TOL:
        raise IntegralityError(f"pairing for mu={mu} is {value!r}, not an integer")
    if nearest != -mu:
        raise IntegralityError(f"pairing for mu={mu} rounds to {nearest}, expected {-mu}")
    return value


def pairing_table(mus, n_theta: int = geo.DEFAULT_NODES[0], n_phi: int = geo.DEFAULT_NODES[1],
                  source: str = "etilde") -> list[dict]:
    rows = []
    for mu in mus:
        value = chern_number(mu, n_theta, n_phi, source)
        rows.append({"mu": mu, "integral": value, "residual_to_integer": value - round(value)})
    return rows


def chern_character_line(mu: int, n_theta: int = geo.DEFAULT_NODES[0],
                         n_phi: int = geo.DEFAULT_NODES[1]) -> tuple[float, float]:
    """(rank, integrated c1) -- ch(L) = 1 + c1(L) on a surface."""
    return 1.0, chern_number(mu, n_theta, n_phi)


@dataclass
class AdditivityVerdict:
    mu: int
    nu: int
    c_mu: float
    c_nu: float
    c_sum: float

    @property
    def defect(self) -> float:
        return abs(self.c_sum - self.c_mu - self.c_nu)

    @property
    def passed(self) -> bool:
        return self.defect < 1e-7


def additivity_check(mu: int, nu: int, n_theta: int = geo.DEFAULT_NODES[0],
                     n_phi: int = geo.DEFAULT_NODES[1]) -> AdditivityVerdict:
    """c1(L_mu (x) L_nu) = c1(L_mu) + c1(L_nu) with L_mu (x) L_nu = L_{mu+nu}."""
    return AdditivityVerdict(
        mu,
        nu,
        chern_number(mu, n_theta, n_phi),
        chern_number(nu, n_theta, n_phi),
        chern_number(mu + nu, n_theta, n_phi),
    )


def max_imaginary_density(mu: int, source: str = "etilde", n_theta: int = geo.DEFAULT_NODES[0],
                          n_phi: int = geo.DEFAULT_NODES[1]) -> float:
    theta, phi, _ = geo.quadrature_grid(n_theta, n_phi)
    return float(np.max(np.abs(np.imag(chern_density(mu, source)(theta, phi)))))
