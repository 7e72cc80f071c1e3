from fractions import Fraction

import zlib

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hopfbundle.algebra import (
    ALPHA,
    ALPHA_STAR,
    GAMMA,
    GAMMA_STAR,
    ParseError,
    Poly,
    Scalar,
    add,
    mul,
    normal_form,
    parse,
    parse_raw,
    pbw_monomials,
    render,
    scale,
    star,
)

from oracles import eval_raw, poly_as_dict, random_s3_point, stepwise_normal_form

exps = st.tuples(*[st.integers(0, 3)] * 4)
coefs = st.tuples(st.integers(-4, 4), st.integers(-4, 4))
raw_terms = st.lists(st.tuples(exps, coefs), min_size=0, max_size=5)


def _poly(raw):
    return normal_form([(e, Scalar(re, im)) for e, (re, im) in raw])


polys = raw_terms.map(_poly)


# --- scalars -----------------------------------------------------------------

def test_scalar_exact():
    a, b = Scalar(Fraction(1, 3), 2), Scalar(Fraction(-5, 7), Fraction(1, 9))
    assert (a + b) - b == a
    assert a.conj().conj() == a
    assert a * b == b * a
    assert Scalar(0, 1) * Scalar(0, 1) == Scalar(-1)


# --- normal form ---------------------------------------------------------------

def test_relation_rewrites():
    assert normal_form([((1, 1, 0, 0), 1)]) == Poly.one() - GAMMA_STAR * GAMMA
    assert normal_form([((0, 0, 0, 0), 1)]) == Poly.one()


def test_one_step_rewrite():
    # a as a = a (1 - cs c)
    assert render(normal_form([((2, 1, 0, 0), 1)])) == "a - a*cs*c"


def test_relation_squared_is_one():
    rel = ALPHA_STAR * ALPHA + GAMMA_STAR * GAMMA
    assert rel == Poly.one()
    assert normal_form([((2, 2, 0, 0), 1), ((1, 1, 1, 1), 2), ((0, 0, 2, 2), 1)]) == Poly.one()


def test_normal_monomials_only():
    p = normal_form([((5, 3, 1, 0), 2), ((0, 4, 2, 2), -1), ((3, 3, 3, 3), 1)])
    assert all(m.is_normal for m in p.terms)


@given(raw_terms)
def test_confluence_against_stepwise_rewriter(raw):
    rng = np.random.default_rng(zlib.crc32(repr(raw).encode()))
    raw_c = [(e, complex(re, im)) for e, (re, im) in raw]
    expected = stepwise_normal_form(raw_c, rng)
    assert poly_as_dict(_poly(raw)) == expected


def test_confluence_500_random_terms(rng):
    for _ in range(500):
        e = tuple(int(x) for x in rng.integers(0, 5, size=4))
        s = complex(*(int(x) for x in rng.integers(-3, 4, size=2)))
        a = stepwise_normal_form([(e, s)], np.random.default_rng(int(rng.integers(2**31))))
        b = stepwise_normal_form([(e, s)], np.random.default_rng(int(rng.integers(2**31))))
        assert a == b == poly_as_dict(normal_form([(e, Scalar(int(s.real), int(s.imag)))]))


@given(raw_terms)
def test_normal_form_preserves_values_on_S3(raw):
    p = _poly(raw)
    rng = np.random.default_rng(7)
    for _ in range(3):
        a, c = random_s3_point(rng)
        lhs = eval_raw([(tuple(m), complex(s)) for m, s in p.terms.items()], a, c)
        rhs = eval_raw([(e, complex(re, im)) for e, (re, im) in raw], a, c)
        assert abs(lhs - rhs) < 1e-9


# --- ring and star ---------------------------------------------------------------

@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert mul(p, q) == mul(q, p)
    assert mul(mul(p, q), r) == mul(p, mul(q, r))
    assert mul(p, add(q, r)) == add(mul(p, q), mul(p, r))
    assert add(p, q) - q == p


@given(polys, polys)
def test_star(p, q):
    assert star(star(p)) == p
    assert star(mul(p, q)) == mul(star(q), star(p)) == mul(star(p), star(q))
    assert star(scale(Scalar(0, 1), p)) == scale(Scalar(0, -1), star(p))


@given(polys)
def test_relation_central(p):
    # multiply the unreduced relation into p term by term, then reduce once
    rel = [((1, 1, 0, 0), 1), ((0, 0, 1, 1), 1), ((0, 0, 0, 0), -1)]
    raw = [(tuple(x + y for x, y in zip(m, e)), s * r) for m, s in p.terms.items() for e, r in rel]
    assert normal_form(raw).is_zero()


def test_generator_examples():
    assert star(ALPHA) == ALPHA_STAR
    assert render(mul(ALPHA, GAMMA_STAR)) == "a*cs"
    assert mul(ALPHA_STAR, ALPHA) == Poly.one() - GAMMA_STAR * GAMMA


def test_zero_has_no_terms():
    p = ALPHA - ALPHA
    assert p.terms == {} and render(p) == "0"


# --- parsing and rendering -----------------------------------------------------------

def test_parse_examples():
    assert parse("a*as") == Poly.one() - GAMMA_STAR * GAMMA
    assert parse("(1/2+1/2i)*c^2") == GAMMA * GAMMA * Scalar(Fraction(1, 2), Fraction(1, 2))
    assert parse("-3*cs^2*c + 2") == Poly.constant(2) - GAMMA_STAR ** 2 * GAMMA * 3


def test_parse_raw_is_unreduced():
    raw = parse_raw("a*as")
    assert [tuple(m) for m, _ in raw] == [(1, 1, 0, 0)]


@pytest.mark.parametrize("bad, pos", [("a*+c", 2), ("a^", 2), ("(1/0)*a", 3), ("q", 0), ("a*c)", 3)])
def test_parse_errors_have_positions(bad, pos):
    with pytest.raises(ParseError) as exc:
        parse(bad)
    assert exc.value.position == pos


@given(polys)
def test_render_parse_roundtrip(p):
    assert parse(render(p)) == p


def test_render_roundtrip_100_random_terms(rng):
    monos = pbw_monomials(6)
    for _ in range(100):
        m = monos[int(rng.integers(len(monos)))]
        s = Scalar(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5))), int(rng.integers(-3, 4)))
        p = Poly.monomial(m, s)
        assert parse(render(p)) == p


def test_canonical_term_order():
    p = parse("cs*c + a + as + c^2 + a^2*cs + 1")
    assert render(p) == "1 + c^2 + cs*c + as + a + a^2*cs"
    keys = [(m.a, m.a_star, m.c_star, m.c) for m, _ in p.sorted_terms()]
    assert keys == sorted(keys)


def test_pbw_basis_count():
    # normal monomials of degree <= d: those with a=0 or as=0
    for d in range(5):
        brute = sum(1 for e in np.ndindex(*(d + 1,) * 4) if sum(e) <= d and (e[0] == 0 or e[1] == 0))
        assert len(pbw_monomials(d)) == brute
