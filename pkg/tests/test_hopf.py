import pytest
from hypothesis import given, strategies as st

from hopfbundle.algebra import ALPHA, ALPHA_STAR, GAMMA, GAMMA_STAR, Poly, Scalar, normal_form, parse, pbw_monomials
from hopfbundle.hopf import (
    DiagonalComodule,
    LaurentPoly,
    SweedlerTensor,
    antipode,
    antipode_convolution,
    coaction,
    coproduct,
    cotensor_components,
    cotensor_contains,
    counit,
    in_P,
    isotypic_decomposition,
    isotypic_project,
    laurent_counit,
    splitting_bicovariance,
    splitting_i,
    surjection_p,
    tensor,
    verify_hopf_axioms,
    winding_degree,
)

from oracles import coproduct_power_alpha

homog = st.builds(
    lambda mu, terms: (mu, normal_form([(e, c) for e, c in terms if e[0] + e[2] - e[1] - e[3] == -mu])),
    st.integers(-3, 3),
    st.lists(st.tuples(st.tuples(*[st.integers(0, 3)] * 4), st.integers(-3, 3)), max_size=8),
)


def test_coproduct_generators():
    assert coproduct(ALPHA) == tensor(ALPHA, ALPHA) - tensor(GAMMA_STAR, GAMMA)
    assert coproduct(GAMMA) == tensor(GAMMA, ALPHA) + tensor(ALPHA_STAR, GAMMA)
    assert coproduct(Poly.one()) == tensor(Poly.one(), Poly.one())


def test_coproduct_alpha_squared_matches_binomial_oracle():
    for n in range(1, 7):
        expected = SweedlerTensor((Poly, Poly), {})
        for (left, right), c in coproduct_power_alpha(n).items():
            expected = expected + tensor(normal_form([(left, c)]), normal_form([(right, 1)]))
        assert coproduct(ALPHA ** n) == expected
    want = (
        tensor(ALPHA ** 2, ALPHA ** 2)
        - tensor(ALPHA * GAMMA_STAR * 2, ALPHA * GAMMA)
        + tensor(GAMMA_STAR ** 2, GAMMA ** 2)
    )
    assert coproduct(ALPHA ** 2) == want


@given(homog, homog)
def test_coproduct_is_multiplicative(x, y):
    p, q = x[1], y[1]
    assert coproduct(p * q) == coproduct(p) * coproduct(q)


@given(homog)
def test_coproduct_star(x):
    p = x[1]
    assert coproduct(p.star()) == coproduct(p).star()


def test_counit_and_antipode_examples():
    assert counit(parse("a*cs + c")) == Scalar(0)
    assert counit(parse("a^3 + 2")) == Scalar(3)
    assert antipode(GAMMA_STAR) == -GAMMA_STAR
    assert antipode(Poly.one()) == Poly.one()
    assert antipode(ALPHA) == ALPHA_STAR and antipode(GAMMA) == -GAMMA


@given(homog, homog)
def test_counit_and_antipode_multiplicative(x, y):
    p, q = x[1], y[1]
    assert counit(p * q) == counit(p) * counit(q)
    assert antipode(p * q) == antipode(p) * antipode(q)
    assert antipode(antipode(p)) == p


def test_coaction_examples():
    assert coaction(parse("a^2*cs")) == tensor(parse("a^2*cs"), LaurentPoly.monomial(1))
    assert coaction(parse("as*a")) == tensor(parse("as*a"), LaurentPoly.one())
    assert coaction(GAMMA) == tensor(GAMMA, LaurentPoly.monomial(1))


def test_coaction_counital_to_degree_6():
    for m in pbw_monomials(6):
        p = Poly.monomial(m)
        back = coaction(p).substitute(1, lambda k: SweedlerTensor.scalar(laurent_counit(LaurentPoly.monomial(k))))
        assert back.as_element() == p


def test_surjection_and_splitting():
    assert splitting_i(LaurentPoly.monomial(3)) == ALPHA ** 3
    assert splitting_i(LaurentPoly.monomial(-2)) == ALPHA_STAR ** 2
    assert splitting_i(LaurentPoly.one()) == Poly.one()
    assert surjection_p(parse("a*cs + as")) == LaurentPoly.monomial(-1)
    for n in range(-20, 21):
        u = LaurentPoly.monomial(n)
        assert surjection_p(splitting_i(u)) == u


def test_splitting_not_multiplicative():
    u, ui = LaurentPoly.monomial(1), LaurentPoly.monomial(-1)
    assert splitting_i(u * ui) == Poly.one()
    assert splitting_i(u) * splitting_i(ui) != Poly.one()


def test_splitting_bicovariance():
    assert splitting_bicovariance(8) == {"left": True, "right": True}


def test_isotypic_examples():
    p = ALPHA + ALPHA_STAR * ALPHA
    assert isotypic_project(p, -1) == ALPHA
    assert isotypic_project(p, 0) == ALPHA_STAR * ALPHA
    assert isotypic_project(Poly.one(), 0) == Poly.one()
    assert isotypic_project(GAMMA_STAR ** 2, 2) == GAMMA_STAR ** 2
    # a^2 cs has coaction power 1, so it lies in P_-1
    assert winding_degree(next(iter((ALPHA ** 2 * GAMMA_STAR).terms))) == -1


@given(homog)
def test_isotypic_sum_is_identity(x):
    p = x[1] + parse("a*c - cs + 3")
    parts = isotypic_decomposition(p)
    assert sum(parts.values(), Poly.zero()) == p
    for mu, q in parts.items():
        assert in_P(q, mu)
        assert coaction(q) == tensor(q, LaurentPoly.monomial(-mu)) or q.is_zero()


@given(homog, homog)
def test_grading_multiplicative(x, y):
    (mu, p), (nu, q) = x, y
    assert in_P(p * q, mu + nu) or (p * q).is_zero()


@given(homog, homog)
def test_invariants_closed(x, y):
    p, q = isotypic_project(x[1], 0), isotypic_project(y[1], 0)
    assert in_P(p * q, 0) and in_P(p.star(), 0)


def test_cotensor_components():
    assert cotensor_components(DiagonalComodule([-3])) == [3]
    assert cotensor_components(DiagonalComodule([0])) == [0]
    assert cotensor_components(DiagonalComodule([-1, 1])) == [1, -1]
    assert cotensor_contains(ALPHA, DiagonalComodule([1, -1]), 0)
    assert not cotensor_contains(ALPHA, DiagonalComodule([1, -1]), 1)


def test_antipode_convolution_powers():
    for n in range(9):
        assert antipode_convolution(ALPHA ** n) == Poly.one()
        assert antipode_convolution(ALPHA ** n, "right") == Poly.one()
    assert antipode_convolution(GAMMA).is_zero()


@pytest.mark.parametrize("deg", [3, 5])
def test_axiom_suite(deg):
    rep = verify_hopf_axioms(deg)
    assert rep.passed, rep.to_json()
    assert {r.name for r in rep.results} >= {"coassociativity", "counit_left", "antipode_left", "coaction_coassociativity"}


def test_axiom_suite_rejects_zero_degree():
    with pytest.raises(ValueError):
        verify_hopf_axioms(0)


def test_laurent_text_and_json():
    l = LaurentPoly.parse("2*u^3 + (1/2-1i)*u^-1")
    assert LaurentPoly.from_json(l.to_json()) == l
    assert LaurentPoly.parse(l.render()) == l
    assert l.star() == LaurentPoly.parse("2*u^-3 + (1/2+1i)*u^1")
