"""Seeded verification suites behind ``hopfbundle verify``."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import connections as cn
from . import geometry as geo
from . import topology as tp
from .algebra import ALPHA, GAMMA, Monomial, Poly, Scalar, pbw_monomials, render
from .hopf import antipode_convolution, splitting_bicovariance, verify_hopf_axioms
from .projectors import (
    build_E_tilde,
    build_F,
    build_p,
    decompose_section,
    eval_E_at,
    eval_p_at,
    reconstruct_section,
)

DEFAULT_SEED = 0x4E434731
SUITES = ("hopf", "projectors", "connection", "topology")


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


# --- random generators ---------------------------------------------------------

_MONO_CACHE: dict[int, list[Monomial]] = {}


def _monos(max_degree: int) -> list[Monomial]:
    if max_degree not in _MONO_CACHE:
        _MONO_CACHE[max_degree] = pbw_monomials(max_degree)
    return _MONO_CACHE[max_degree]


def random_poly(rng, max_degree: int = 4, n_terms: int = 4, winding: int | None = None) -> Poly:
    """Random Gaussian-integer combination of PBW monomials (optionally of fixed winding)."""
    pool = _monos(max_degree)
    if winding is not None:
        pool = [m for m in pool if m.winding == winding]
    if not pool:
        return Poly.zero()
    idx = rng.choice(len(pool), size=min(n_terms, len(pool)), replace=False)
    terms = {}
    for i in idx:
        re, im = (int(v) for v in rng.integers(-5, 6, size=2))
        if re or im:
            terms[pool[int(i)]] = Scalar(re, im)
    return Poly(terms)


def random_section(rng, mu: int, max_degree: int = 6, n_terms: int = 4) -> Poly:
    """Random element of P_mu (winding -mu)."""
    return random_poly(rng, max(max_degree, abs(mu)), n_terms, winding=-mu)


# --- suites -----------------------------------------------------------------------

def _run(name: str, fn: Callable[[], tuple[bool, str]]) -> Check:
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed check, reported with its message
        return Check(name, False, f"{type(exc).__name__}: {exc}")
    return Check(name, bool(ok), detail)


def suite_hopf(rng, max_degree: int = 5) -> list[Check]:
    checks = []
    report = verify_hopf_axioms(max_degree)
    for r in report.results:
        checks.append(Check(f"hopf:{r.name}", r.passed, f"{r.checked} monomials" + (f", first failure {r.first_failure}" if r.first_failure else "")))

    def conv():
        bad = [n for n in range(0, 9) if antipode_convolution(ALPHA ** n) != Poly.one()]
        return not bad, f"failing n: {bad}" if bad else "n = 0..8"

    checks.append(_run("hopf:m(S(x)id)Delta(a^n)=1", conv))

    def bicov():
        r = splitting_bicovariance(8)
        return all(r.values()), str(r)

    checks.append(_run("hopf:splitting_bicovariance", bicov))
    return checks


def suite_projectors(rng, max_abs_mu: int = 8, n_sections: int = 50) -> list[Check]:
    checks = []

    def etilde():
        for mu in range(-max_abs_mu, max_abs_mu + 1):
            E = build_E_tilde(mu)
            if not (E @ E - E).is_zero() or E.trace() != Poly.one():
                return False, f"mu={mu}"
        return True, f"|mu| <= {max_abs_mu}"

    checks.append(_run("projectors:E~ idempotent, trace 1", etilde))

    def pmu():
        for mu in [m for m in range(-5, 6) if m]:
            P = build_p(mu)
            if not P.is_idempotent() or not P.is_hermitian():
                return False, f"mu={mu}"
        return True, "1 <= |mu| <= 5"

    checks.append(_run("projectors:p idempotent, hermitian", pmu))

    def sections():
        for _ in range(n_sections):
            mu = int(rng.integers(-4, 5))
            f = random_section(rng, mu)
            if reconstruct_section(decompose_section(f, mu), mu) != f:
                return False, f"mu={mu}, f={render(f)}"
        return True, f"{n_sections} random sections"

    checks.append(_run("projectors:section reconstruction", sections))

    def mvn():
        T, P, S = geo.s3_grid(12)
        a, c = geo.s3_point_values(T, P, S)
        worst = 0.0
        for mu in [m for m in range(-4, 5) if m]:
            F = build_F(mu)(a, c)
            Fs = np.conj(np.swapaxes(F, 0, 1))
            FFs = np.einsum("ij...,jk...->ik...", F, Fs)
            FsF = np.einsum("ij...,jk...->ik...", Fs, F)
            worst = max(worst, float(np.max(np.abs(FFs - eval_p_at(mu, a, c)))))
            worst = max(worst, float(np.max(np.abs(FsF - eval_E_at(mu, a, c)))))
        return worst < 1e-10, f"max deviation {worst:.3e}"

    checks.append(_run("projectors:F F* = p, F* F = E", mvn))
    return checks


def suite_connection(rng, n_pairs: int = 60) -> list[Check]:
    checks = []
    omega = cn.connection_form_from_splitting()

    def om_u():
        ok = omega(1) == cn.SymbolicOneForm([Poly.monomial((0, 1, 0, 0)), 0, Poly.monomial((0, 0, 0, 1)), 0])
        ok &= omega(0).is_zero()
        ok &= all(omega(n) == omega(1) * n for n in range(1, 7))
        return ok, str(omega(1))

    checks.append(_run("connection:omega(u) = as*da + cs*dc", om_u))

    def prop_i():
        bad = [(m, n) for m in range(-6, 7) for n in range(-6, 7)
               if not cn.form_equal(omega.property_i_defect(m, n), cn.SymbolicOneForm.zero(), "quotient")]
        return not bad, f"failing: {bad[:3]}" if bad else "|m|,|n| <= 6"

    checks.append(_run("connection:omega product rule", prop_i))

    def horiz():
        va = cn.horizontal_factor_check(ALPHA)
        vc = cn.horizontal_factor_check(GAMMA)
        return va.passed and vc.passed, f"Da = {va.covariant}"

    checks.append(_run("connection:D a and D c horizontal factorisation", horiz))

    def grass():
        G = cn.grassmann_connection(build_p(-1))
        C = cn.covariant_derivative(-1)
        return C.rows_equal(G, "exact"), "mu=-1 row-wise exact"

    checks.append(_run("connection:nabla = Grassmann(p_-1)", grass))

    def grass_general():
        for mu in (-3, -2, 2, 3):
            G = cn.grassmann_connection(build_E_tilde(mu), cn.build_vw(mu)[1])
            L = cn.covariant_derivative(mu, "leibniz")
            if not L.rows_equal(G, "quotient"):
                return False, f"mu={mu}"
            for k in range(L.size):
                if not cn.form_equal(L.contracted(k), cn.covariant_diff(L.basis[k]), "quotient"):
                    return False, f"mu={mu}, k={k}"
        return True, "mu in {-3,-2,2,3}"

    checks.append(_run("connection:nabla from D = Grassmann (mod d of relation)", grass_general))

    def vertical():
        worst = 0.0
        fs = [ALPHA, GAMMA] + [random_section(rng, int(rng.integers(-3, 4)), 4, 3) for _ in range(4)]
        for f in fs:
            if f.is_zero():
                continue
            worst = max(worst, float(np.max(np.abs(cn.vertical_values(cn.covariant_diff(f))))))
        return worst < 1e-10, f"max |(Df)(V)| = {worst:.3e}"

    checks.append(_run("connection:vertical annihilation", vertical))

    def leibniz():
        for _ in range(n_pairs):
            p = random_poly(rng, 3, 3)
            q = random_poly(rng, 3, 3)
            lhs = cn.differential(p * q)
            rhs = cn.differential(p) * q + cn.differential(q) * p
            if not cn.form_equal(lhs, rhs, "quotient"):
                return False, f"p={render(p)}, q={render(q)}"
        return True, f"{n_pairs} random pairs"

    checks.append(_run("connection:Leibniz rule", leibniz))

    def cov_axioms():
        for _ in range(n_pairs // 2):
            f = random_section(rng, int(rng.integers(-2, 3)), 3, 3)
            h = random_section(rng, int(rng.integers(-2, 3)), 3, 3)
            lhs = cn.covariant_diff(f * h)
            rhs = cn.covariant_diff(f) * h + cn.covariant_diff(h) * f
            if not cn.form_equal(lhs, rhs, "quotient"):
                return False, f"f={render(f)}, h={render(h)}"
            b = random_section(rng, 0, 4, 3)
            if cn.covariant_diff(b) != cn.differential(b):
                return False, f"b={render(b)}"
        return True, f"{n_pairs // 2} random pairs"

    checks.append(_run("connection:covariant differentiation axioms", cov_axioms))
    return checks


def _random_regular(rng) -> tp.PlanePoint:
    while True:
        x = float(rng.uniform(-10, 10))
        k = round((x - tp.HALF_PI) / math.pi)
        if abs(x - (tp.HALF_PI + k * math.pi)) > 1e-6:
            return tp.PlanePoint(x, float(rng.uniform(-5, 5)))


def suite_topology(rng, n: int = 1000) -> list[Check]:
    checks = []
    samples = [(_random_regular(rng), float(rng.uniform(-5, 5)), float(rng.uniform(-5, 5))) for _ in range(n)]

    def law():
        v = tp.group_law_check(samples)
        return v.passed, f"max deviation g {v.max_dev_g:.2e}, g~ {v.max_dev_gtilde:.2e}"

    checks.append(_run("topology:group law", law))

    def tau():
        worst = 0.0
        for p, t, t2 in samples:
            q = tp.flow(p, t)
            r = tp.flow(q, t2)
            tpq = tp.translation_time(p, q)
            worst = max(worst, abs(tpq - t))
            worst = max(worst, abs(tp.translation_time(q, p) + tpq))
            worst = max(worst, abs(tpq + tp.translation_time(q, r) - tp.translation_time(p, r)))
        return worst < 1e-8, f"max deviation {worst:.2e}"

    checks.append(_run("topology:translation map", tau))

    def witness():
        r = tp.nonproperness_witness(200)
        return r.passed, f"limit special indices {r.limit['special_index']}"

    checks.append(_run("topology:non-properness witness", witness))

    pts = tp.random_s3(rng, 500)

    def susp():
        worst = 0.0
        for q in pts:
            k = tp.random_unit(rng)
            s = tp.s3_to_suspension(q)
            back = tp.suspension_to_s3(s)
            worst = max(worst, abs(back.a - q.a), abs(back.c - q.c))
            lhs = tp.suspension_to_s3(s.act(k))
            rhs = back.act(k)
            worst = max(worst, abs(lhs.a - rhs.a), abs(lhs.c - rhs.c))
        return worst < 1e-12, f"max deviation {worst:.2e}"

    checks.append(_run("topology:suspension homeomorphism", susp))

    def heeg():
        worst = 0.0
        for q in pts:
            z1, z2 = tp.heegaard_map(q)
            back = tp.heegaard_inverse(z1, z2)
            worst = max(worst, abs(back.a - q.a), abs(back.c - q.c), abs(max(abs(z1), abs(z2)) - 1))
        return worst < 1e-12, f"max deviation {worst:.2e}"

    checks.append(_run("topology:Heegaard maps", heeg))

    def equator():
        worst = 0.0
        for _ in range(200):
            a = math.sqrt(0.5) * tp.random_unit(rng)
            c = math.sqrt(0.5) * tp.random_unit(rng)
            q = tp.S3Point(a, c)
            z, s = tp.hopf_projection(q)
            b = tp.phi_inverse(z, s)
            worst = max(worst, abs(tp.transition_function(q) - tp.suspension_transition(b)))
        return worst < 1e-12, f"max deviation {worst:.2e}"

    checks.append(_run("topology:equator transition", equator))
    return checks


_SUITE_FNS = {
    "hopf": suite_hopf,
    "projectors": suite_projectors,
    "connection": suite_connection,
    "topology": suite_topology,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> list[SuiteReport]:
    names = SUITES if name == "all" else (name,)
    out = []
    for nm in names:
        if nm not in _SUITE_FNS:
            raise ValueError(f"unknown suite {nm!r}")
        rng = np.random.default_rng(seed)
        t0 = time.perf_counter()
        checks = _SUITE_FNS[nm](rng)
        out.append(SuiteReport(nm, seed, checks, time.perf_counter() - t0))
    return out
