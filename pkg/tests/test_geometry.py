import io
import math

import numpy as np
import pytest

from hopfbundle import geometry as geo
from hopfbundle.algebra import ALPHA, ALPHA_STAR, GAMMA, GAMMA_STAR
from hopfbundle.chern import idempotent_entries
from hopfbundle.geometry import (
    ChartPointS2,
    ChartPointS3,
    ChartSingularityError,
    Dual2,
    NotInvariantError,
    eval_dual,
    eval_invariant,
    eval_invariant_dual,
    eval_poly,
    integrate_S2,
    pauli_decompose,
    pauli_reconstruct,
    wedge,
)
from hopfbundle.projectors import build_p
from hopfbundle.verify import random_poly

from oracles import E1_from_x, E_minus1_from_x, x_coords


def _random_chart_points(rng, n, lo=0.1):
    return rng.uniform(lo, math.pi - lo, n), rng.uniform(0, 2 * math.pi, n)


# --- charts ----------------------------------------------------------------------

def test_s3_chart_on_unit_sphere(rng):
    for _ in range(100):
        pt = ChartPointS3(*rng.uniform([0, 0, 0], [math.pi / 2, 2 * math.pi, 2 * math.pi]))
        assert abs(abs(pt.alpha) ** 2 + abs(pt.gamma) ** 2 - 1) < 1e-15
        assert abs(eval_poly(ALPHA_STAR * ALPHA + GAMMA_STAR * GAMMA, pt) - 1) < 1e-15


def test_s2_chart_on_unit_sphere(rng):
    for t, p in zip(*_random_chart_points(rng, 50, 0.0)):
        q = ChartPointS2(t, p)
        assert abs(q.x1 ** 2 + q.x2 ** 2 + q.x3 ** 2 - 1) < 1e-15


def test_eval_invariant_examples(rng):
    for t, p in zip(*_random_chart_points(rng, 20, 0.0)):
        got = eval_invariant(ALPHA * GAMMA_STAR * 2, ChartPointS2(t, p))
        assert abs(got - math.sin(t) * complex(math.cos(p), -math.sin(p))) < 1e-14
    assert abs(eval_invariant(ALPHA_STAR * ALPHA - GAMMA_STAR * GAMMA, (0.0, 0.0)) - 1) < 1e-15


def test_eval_invariant_rejects_noninvariant():
    with pytest.raises(NotInvariantError):
        eval_invariant(ALPHA, (0.3, 0.2))
    with pytest.raises(NotInvariantError):
        eval_invariant(ALPHA * GAMMA, (0.3, 0.2))


def test_chart_consistency(rng):
    # evaluation through S^3 at any fiber angle equals evaluation on S^2
    for _ in range(30):
        p = random_poly(rng, 6, 5, winding=0)
        th, ph, ps = rng.uniform([0, 0, 0], [math.pi / 2, 2 * math.pi, 2 * math.pi])
        base = ChartPointS3(th, ph, ps).base_point()
        direct = eval_invariant(p, base)
        for shift in (0.0, 0.7, 2.9):
            up = eval_poly(p, ChartPointS3(th, ph + shift, ps + shift))
            assert abs(up - direct) < 1e-12 * (1 + abs(direct))


def test_base_point_matches_coordinates(rng):
    for _ in range(20):
        pt = ChartPointS3(*rng.uniform([0, 0, 0], [math.pi / 2, 2 * math.pi, 2 * math.pi]))
        b = pt.base_point()
        a, c = pt.alpha, pt.gamma
        assert abs(complex(b.x1, b.x2) - 2 * a.conjugate() * c) < 1e-14
        assert abs(b.x3 - (abs(a) ** 2 - abs(c) ** 2)) < 1e-14


# --- dual numbers ------------------------------------------------------------------

def test_dual_examples():
    x3 = eval_dual(lambda x: x["x3"], (math.pi / 2, 0.0))
    assert abs(x3.val) < 1e-15 and abs(x3.dtheta + 1) < 1e-15 and abs(x3.dphi) < 1e-15
    z = eval_dual(lambda x: x["z"], (math.pi / 2, 0.0))
    assert abs(z.val - 1) < 1e-15 and abs(z.dtheta) < 1e-15 and abs(z.dphi - 1j) < 1e-15
    for t in (0.3, 1.1, 2.5):
        e = eval_dual(lambda x: (1 + x["x3"]) * 0.5, (t, 0.4))
        assert abs(e.dtheta + math.sin(t) / 2) < 1e-15


def test_dual_division_by_zero():
    with pytest.raises(ChartSingularityError):
        Dual2(0.0, 1.0, 0.0).reciprocal()
    with pytest.raises(ChartSingularityError):
        eval_dual(lambda x: 1 / (x["x3"] - x["x3"]), (0.5, 0.5))


def _check_ad(fn_dual, fn_val, theta, phi):
    d = fn_dual(theta, phi)
    dt, dp = geo.central_difference(fn_val, theta, phi, 1e-5)
    for ad, fd in ((d.dtheta, dt), (d.dphi, dp)):
        assert abs(ad - fd) <= 1e-7 * max(1.0, abs(ad)), (theta, phi, ad, fd)


def test_ad_matches_central_differences(rng):
    thetas, phis = _random_chart_points(rng, 200)
    polys = [random_poly(rng, 6, 5, winding=0) for _ in range(10)]
    P = build_p(-3)
    for k, (t, p) in enumerate(zip(thetas, phis)):
        f = polys[k % len(polys)]
        _check_ad(lambda a, b: eval_invariant_dual(f, a, b), lambda a, b: complex(eval_invariant(f, (a, b))), t, p)
        # a rational entry with the p_mu denominator
        num = P.num[0, 1]

        def ratio_dual(a, b):
            return eval_invariant_dual(num, a, b) / eval_invariant_dual(P.den, a, b)

        def ratio_val(a, b):
            return complex(eval_invariant(num, (a, b)) / eval_invariant(P.den, (a, b)))

        _check_ad(ratio_dual, ratio_val, t, p)


def test_dual_power_and_product_rule(rng):
    for t, p in zip(*_random_chart_points(rng, 20)):
        x = geo.s2_coordinates(t, p)
        lhs = (x["z"] * x["x3"]) ** 3
        rhs = x["z"] ** 3 * x["x3"] ** 3
        assert abs(lhs.dtheta - rhs.dtheta) < 1e-13 and abs(lhs.dphi - rhs.dphi) < 1e-13
        inv = x["x3"] ** -2
        assert abs(inv.dtheta - 2 * math.sin(t) / math.cos(t) ** 3) < 1e-9 * (1 + abs(inv.dtheta))


# --- wedges and integration --------------------------------------------------------

def test_wedge_basis():
    assert wedge((1, 0), (0, 1)).value == 1
    assert wedge((0, 1), (1, 0)).value == -1
    assert wedge((0, 1), (0, 1)).value == 0


def test_wedge_jacobian(rng):
    # dx1 ^ dx2 = sin(theta) cos(theta) dtheta ^ dphi
    for t, p in zip(*_random_chart_points(rng, 30, 0.0)):
        x = geo.s2_coordinates(t, p)
        assert abs(wedge(x["x1"], x["x2"]).value - math.sin(t) * math.cos(t)) < 1e-14
        assert abs(wedge(x["x2"], x["x1"]).value + math.sin(t) * math.cos(t)) < 1e-14


def test_sphere_area():
    assert abs(integrate_S2(lambda t, p: np.sin(t) + 0 * p, 32, 64) - 4 * math.pi) < 1e-10


def test_dphi_wedge_itself_integrates_to_zero():
    def f(t, p):
        x = geo.s2_coordinates(t, p)
        return wedge((0 * t, x["x3"].val), (0 * t, x["x3"].val)).value

    assert integrate_S2(f, 16, 16) == 0


def test_integrate_rejects_tiny_grids():
    with pytest.raises(ValueError):
        integrate_S2(lambda t, p: 1.0, 4, 16)


def test_quadrature_grid_avoids_poles():
    theta, _, w = geo.quadrature_grid(64, 128)
    assert theta.min() > 0 and theta.max() < math.pi
    assert abs(w.sum() - 2 * math.pi ** 2) < 1e-12


# --- Pauli -------------------------------------------------------------------------

def test_pauli_E1_examples(rng):
    for t, p in zip(*_random_chart_points(rng, 20, 0.0)):
        x1, x2, x3 = x_coords(t, p)
        s = pauli_decompose(E1_from_x(t, p))
        assert np.allclose(s, [0.5, x3 / 2, x1 / 2, -x2 / 2], atol=1e-15)
        s = pauli_decompose(E_minus1_from_x(t, p))
        assert np.allclose(s, [0.5, x3 / 2, x1 / 2, x2 / 2], atol=1e-15)
    assert np.allclose(pauli_decompose(np.eye(2)), [1, 0, 0, 0])


def test_pauli_from_package_idempotents(rng):
    for t, p in zip(*_random_chart_points(rng, 20, 0.0)):
        for mu, oracle in ((1, E1_from_x), (-1, E_minus1_from_x)):
            e = [[x.val for x in row] for row in idempotent_entries(mu, "etilde", t, p)]
            assert np.allclose(np.array(e, dtype=complex), oracle(t, p), atol=1e-14)


def test_pauli_reconstruct_and_sphere(rng):
    for mu in (1, -1, 2, -2, 3):
        T, P = geo.s2_grid(8, 8)
        e = idempotent_entries(mu, "p", T, P)
        vals = [[x.val for x in row] for row in e]
        s = pauli_decompose(vals)
        assert np.max(np.abs(pauli_reconstruct(s) - np.array(vals))) < 1e-12
        assert np.max(np.abs(s[0] - 0.5)) < 1e-12
        assert np.max(np.abs(s[1] ** 2 + s[2] ** 2 + s[3] ** 2 - 0.25)) < 1e-12


# --- csv -------------------------------------------------------------------------------

def test_field_csv_format():
    text = geo.write_field_csv(np.array([0.1, 0.2]), np.array([1.0, 2.0]), np.array([1 + 2j, -0.5j]))
    lines = text.strip().split("\n")
    assert lines[0] == "theta,phi,re,im"
    assert len(lines) == 3
    t, p, re, im = lines[1].split(",")
    assert float(t) == 0.1 and float(re) == 1.0 and float(im) == 2.0
    assert lines[1].startswith("0.10000000000000001,")
    buf = io.StringIO()
    geo.write_field_csv(0.5, 0.5, 1.0, buf)
    assert buf.getvalue().count("\n") == 2
