import math

import numpy as np
import pytest

from hopfbundle import chern, geometry as geo
from hopfbundle.chern import (
    IntegralityError,
    additivity_check,
    c1_L1_closed_form,
    chern_character_line,
    chern_density,
    chern_number,
    conjugated_entries,
    etilde_entries,
    idempotent_entries,
    max_imaginary_density,
    pairing,
    pairing_table,
    pauli_density,
    trace_e_de_de,
)

from oracles import E1_from_x, trace_e_de_de_fd


def test_density_mu1_closed_form_all_sources():
    T, P = geo.s2_grid(16, 16)
    ref = c1_L1_closed_form(T, P)
    for src in ("etilde", "p", "E"):
        assert np.max(np.abs(chern_density(1, src)(T, P) - ref)) < 1e-10


def test_density_against_finite_difference_oracle(rng):
    for _ in range(10):
        t, p = rng.uniform(0.2, math.pi - 0.2), rng.uniform(0, 2 * math.pi)
        want = trace_e_de_de_fd(E1_from_x, t, p) / (2j * math.pi)
        assert abs(chern_density(1)(t, p) - want) < 1e-8


def test_density_zero_for_trivial_bundle():
    T, P = geo.s2_grid(8, 8)
    assert np.max(np.abs(chern_density(0)(T, P))) == 0


def test_density_sign_flip():
    T, P = geo.s2_grid(16, 16)
    for mu in (1, 2, 3):
        assert np.max(np.abs(chern_density(mu)(T, P) + chern_density(-mu)(T, P))) < 1e-10


def test_density_real():
    for mu in (-3, -1, 1, 4):
        for src in ("etilde", "p"):
            assert max_imaginary_density(mu, src, 32, 64) < 1e-10


@pytest.mark.parametrize("mu", range(-5, 6))
def test_chern_number_is_minus_mu(mu):
    assert abs(chern_number(mu) + mu) < 1e-8


def test_chern_number_examples():
    assert abs(chern_number(1) + 1) < 1e-8
    assert abs(chern_number(0)) < 1e-15
    assert abs(chern_number(-3) - 3) < 1e-8


@pytest.mark.parametrize("mu", range(-5, 6))
def test_quadrature_convergence(mu):
    assert abs(chern_number(mu, 32, 64) - chern_number(mu, 64, 128)) < 1e-9


@pytest.mark.parametrize("mu", [m for m in range(-5, 6) if m])
def test_sources_agree(mu):
    a = chern_number(mu, source="etilde")
    assert abs(a - chern_number(mu, source="p")) < 1e-8
    assert abs(a - chern_number(mu, source="E")) < 1e-8


def test_integrality_up_to_eight():
    for mu in range(-8, 9):
        v = chern_number(mu)
        assert abs(v - round(v)) < 1e-6


def test_pauli_route_equals_trace_route():
    T, P = geo.s2_grid(16, 16)
    for mu, src in ((1, "etilde"), (-1, "etilde"), (2, "p"), (-2, "p")):
        direct = trace_e_de_de(idempotent_entries(mu, src, T, P)) / (2j * math.pi)
        assert np.max(np.abs(direct - pauli_density(mu, src, T, P))) < 1e-10
    for mu in (1, -1):
        via_pauli = geo.integrate_S2(lambda t, p: pauli_density(mu, "etilde", t, p))
        assert abs(via_pauli.real - chern_number(mu)) < 1e-9


def test_pauli_route_needs_2x2():
    with pytest.raises(ValueError):
        pauli_density(2, "etilde", 0.3, 0.3)


def test_conjugation_invariance(rng):
    T, P = geo.s2_grid(16, 16)
    A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) + 3 * np.eye(3)
    base = trace_e_de_de(etilde_entries(2, T, P))
    conj = trace_e_de_de(conjugated_entries(etilde_entries(2, T, P), A))
    assert np.max(np.abs(base - conj)) < 1e-10


def test_pairing_values_and_table():
    assert round(pairing(5)) == -5
    assert round(pairing(0)) == 0
    rows = pairing_table(range(-5, 6))
    assert [round(r["integral"]) for r in rows] == [5, 4, 3, 2, 1, 0, -1, -2, -3, -4, -5]
    assert all(abs(r["residual_to_integer"]) < 1e-6 for r in rows)


def test_pairing_flags_non_integrality(monkeypatch):
    monkeypatch.setattr(chern, "chern_number", lambda *a, **k: -0.9)
    with pytest.raises(IntegralityError):
        pairing(1)
    monkeypatch.setattr(chern, "chern_number", lambda *a, **k: 2.0)
    with pytest.raises(IntegralityError):
        pairing(1)


def test_chern_number_rejects_small_grids():
    with pytest.raises(ValueError):
        chern_number(1, 8, 8)
    with pytest.raises(ValueError):
        chern_density(1, "bogus")


def test_chern_character_line():
    for mu, want in ((1, -1), (0, 0), (2, -2)):
        deg0, deg2 = chern_character_line(mu)
        assert deg0 == 1 and abs(deg2 - want) < 1e-8


@pytest.mark.parametrize("mu, nu", [(1, 1), (3, -3), (0, 0), (2, -5), (-1, 4)])
def test_additivity(mu, nu):
    v = additivity_check(mu, nu)
    assert v.passed, v.defect
    assert abs(v.c_sum + mu + nu) < 1e-8


def test_c1_L1_integral():
    assert abs(geo.integrate_S2(c1_L1_closed_form).real + 1) < 1e-8
