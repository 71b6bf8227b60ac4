from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from genuslab import catalog
from genuslab.arith.series import ExponentProfile, PuiseuxSeries
from genuslab.arith.yfrac import YFraction
from genuslab.errors import InsufficientTruncation, ValidationError
from genuslab.genus import GenusResult, elliptic_genus, functional_equation_check
from genuslab.jacobi import GENERATORS, generator_expansion, membership, monomial_expansion, monomials

from oracles import eta_cubed, phi01, sample_points, theta_product

P = ExponentProfile(2, 8, 8)
T = 4 * P.Nq


def row(coeffs: dict) -> YFraction:
    out = YFraction(P.Nzeta)
    for e, c in coeffs.items():
        out = out + YFraction.monomial(P.Nzeta, P.y_num(e), c)
    return out


def coeff(name, n):
    return generator_expansion(name, T, P).coefficient(n)


HALF = Fraction(1, 2)


def test_phi_minus_one_half_constant_row():
    assert coeff("phiM1half", 0) == row({HALF: 1, -HALF: -1})


def test_phi01_constant_row():
    assert coeff("phi01", 0) == row({-1: 1, 0: 10, 1: 1})


def test_phi01_first_row():
    # tabulated weak Jacobi form coefficients
    assert coeff("phi01", 1) == row({-2: 10, -1: -64, 0: 108, 1: -64, 2: 10})


def test_phi_minus_two_one_rows():
    assert coeff("phiM21", 0) == row({-1: 1, 0: -2, 1: 1})
    assert coeff("phiM21", 1) == row({-2: -2, -1: 8, 0: -12, 1: 8, 2: -2})


def test_phi03half_constant_row():
    assert coeff("phi03half", 0) == row({-HALF: 1, HALF: 1})


@pytest.mark.parametrize("name, values", [("E4", [1, 240, 2160, 6720]), ("E6", [1, -504, -16632, -122976])])
def test_eisenstein_coefficients(name, values):
    for n, v in enumerate(values):
        assert coeff(name, n) == row({0: v})


def test_unknown_generator():
    with pytest.raises(ValidationError):
        generator_expansion("phi99", 8, P)


@pytest.mark.parametrize("name", sorted(GENERATORS))
def test_generators_satisfy_their_functional_equations(name):
    weight, index = GENERATORS[name]
    r = GenusResult(generator_expansion(name, T, P), weight, index, "eq2")
    for law in ("modular1", "modular3", "modular4"):
        assert functional_equation_check(r, law).passed, law


@pytest.mark.parametrize("name", ["E4", "E6"])
def test_eisenstein_series_are_y_free(name):
    s = generator_expansion(name, T, P)
    assert all(set(c.numerator_poly()) == {0} and c.is_polynomial() for c in s.terms.values())


@pytest.mark.parametrize("z, tau", sample_points(5, seed=3))
def test_phi01_against_theta_sums(z, tau):
    exact, tail = generator_expansion("phi01", 6 * P.Nq, P).eval_complex(z, tau)
    ref = phi01(z, tau)
    assert abs(exact - ref) <= 1e-8 * abs(ref)


@pytest.mark.parametrize("z, tau", sample_points(5, seed=4))
def test_odd_generators_against_theta_products(z, tau):
    a, _ = generator_expansion("phiM1half", 6 * P.Nq, P).eval_complex(z, tau)
    assert abs(a - theta_product(-z, tau) / (1j * eta_cubed(tau))) <= 1e-8 * abs(a)
    b, _ = generator_expansion("phi03half", 6 * P.Nq, P).eval_complex(z, tau)
    ref = theta_product(2 * z, tau) / theta_product(z, tau)
    assert abs(b - ref) <= 1e-8 * abs(ref)


# -- monomial bases -----------------------------------------------------------------

def test_weight_zero_index_one_basis():
    assert monomials(0, 1) == [(0, 0, 0, 1, 0, 0)]


def test_half_index_negative_weight_basis():
    assert monomials(-1, HALF) == [(0, 0, 0, 0, 1, 0)]


def test_index_must_be_half_integral():
    with pytest.raises(ValidationError):
        monomials(0, Fraction(1, 3))


@given(st.integers(-6, 12), st.integers(0, 6))
def test_monomials_have_the_requested_weight_and_index(weight, twice_index):
    index = Fraction(twice_index, 2)
    for a, b, c, e, f, g in monomials(weight, index):
        assert 4 * a + 6 * b - 2 * c - f == weight
        assert c + e + Fraction(f, 2) + Fraction(3 * g, 2) == index
        assert f in (0, 1) and g in (0, 1)


@pytest.mark.parametrize("weight, twice_index", [(0, 2), (-2, 2), (2, 2), (0, 3), (-1, 1), (-3, 3), (4, 4)])
def test_monomial_expansions_satisfy_the_index_law(weight, twice_index):
    index = Fraction(twice_index, 2)
    for m in monomials(weight, index):
        r = GenusResult(monomial_expansion(m, T, P), weight, index, "eq2")
        assert functional_equation_check(r, "modular3").passed
        assert functional_equation_check(r, "modular4").passed


# -- membership ------------------------------------------------------------------------

@pytest.fixture(scope="module")
def k3():
    return elliptic_genus(catalog.get("k3-quartic"))


def test_k3_membership(k3):
    rep = membership(k3)
    assert rep.success
    assert rep.compact() == {"phi01": 2}


def test_zero_series_membership():
    rep = membership(PuiseuxSeries.zero(P, T), weight=0, index=1)
    assert rep.success and rep.coordinates == {}


def test_p2_membership_fails_with_residual():
    rep = membership(elliptic_genus(catalog.get("p2")))
    assert not rep.success
    assert rep.residual is not None


@pytest.mark.parametrize("key, expected", [
    ("quintic", {"phi03half": -100}),
    ("kummer", {"phi01": 2}),
    ("cubic-curve", {}),
])
def test_calabi_yau_membership(key, expected):
    rep = membership(elliptic_genus(catalog.get(key)))
    assert rep.success
    assert rep.compact() == expected


def test_torus_membership_at_negative_weight():
    rep = membership(elliptic_genus(catalog.get("torus2"), alpha="omega"))
    assert rep.success and rep.weight == -1
    assert rep.compact() == {"phiM1half": -1}


@pytest.mark.parametrize("qorder", [2, 3, 4, 5])
def test_membership_is_stable_under_longer_truncation(k3, qorder):
    r = elliptic_genus(catalog.get("k3-quartic"), qorder=qorder)
    assert membership(r).coordinates == membership(k3).coordinates


def test_membership_needs_enough_coefficients(k3):
    with pytest.raises(InsufficientTruncation):
        membership(k3, trunc=0)


def test_membership_json(k3):
    data = membership(k3).to_json()
    assert data["success"] is True
    assert data["coordinates"] == {"E4^0 E6^0 phiM21^0 phi01^1 phiM1half^0 phi03half^0": "2"}


@pytest.mark.parametrize("index", [1, Fraction(3, 2)])
def test_p2_membership_fails_at_any_index(index):
    rep = membership(elliptic_genus(catalog.get("p2")), weight=0, index=index)
    assert not rep.success and rep.residual is not None
