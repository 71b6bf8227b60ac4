import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genuslab.arith.series import ExponentProfile, PuiseuxSeries
from genuslab.errors import ProfileError, ThetaPoleError, TranscendentalResidue
from genuslab.theta import (
    INV_2PI_I,
    TWO_PI_I,
    X,
    ThetaArg,
    assemble_quotient,
    eval_prefactored,
    euler_product,
    theta_expansion,
    theta_prime_zero,
    theta_quotient,
)

PROFILE = ExponentProfile(4, 8, 8)
TRUNC = 4 * PROFILE.Nq


def theta_float(v: complex, tau: complex, factors: int = 50) -> complex:
    """Product formula evaluated in floating point."""
    q = cmath.exp(2j * math.pi * tau)
    E = cmath.exp(2j * math.pi * v)
    out = cmath.exp(2j * math.pi * tau / 8) * 2 * cmath.sin(math.pi * v)
    for l in range(1, factors + 1):
        out *= (1 - q**l) * (1 - q**l * E) * (1 - q**l / E)
    return out


def body(arg, trunc=TRUNC, profile=PROFILE) -> PuiseuxSeries:
    return theta_expansion(arg, profile, trunc).body.coeffs[0]


quarters = st.sampled_from([Fraction(k, 4) for k in range(4)])
nonzero_c = st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(-1)])


def test_euler_product_coefficients():
    e = euler_product(PROFILE, 7 * PROFILE.Nq)
    expected = PuiseuxSeries.from_terms(PROFILE, 7 * PROFILE.Nq, [(0, 0, 1), (1, 0, -1), (2, 0, -1), (5, 0, 1),
                                                                    (7, 0, 1)])
    assert e == expected


def test_theta_prime_zero_ledger():
    p = theta_prime_zero(PROFILE, TRUNC)
    assert (p.q8, p.mi, p.pi, p.eta, p.xord) == (1, 1, 1, 3, 0)
    assert p.body.coeffs[0] == PuiseuxSeries.one(PROFILE, TRUNC)


@pytest.mark.parametrize("tau", [0.1 + 0.9j, -0.3 + 1.2j, 0.45 + 0.8j])
def test_theta_prime_zero_matches_numerical_derivative(tau):
    h = 1e-5
    derivative = (theta_float(h, tau) - theta_float(-h, tau)) / (2 * h)
    exact = eval_prefactored(theta_prime_zero(PROFILE, TRUNC), 0.0, tau)
    assert abs(exact - derivative) <= 1e-8 * abs(derivative)


def test_self_quotient_is_one():
    r = theta_quotient([ThetaArg(c=1)], [ThetaArg(c=1)], [], PROFILE, TRUNC)
    assert r.coeffs[0] == PuiseuxSeries.one(PROFILE, TRUNC)


def test_unbalanced_quotient_is_rejected():
    with pytest.raises(TranscendentalResidue):
        theta_quotient([], [ThetaArg(c=1)], [], PROFILE, TRUNC, with_prime_num=1)


def test_two_pi_i_prefactor_balances_the_quotient():
    r = theta_quotient([], [ThetaArg(c=1)], [INV_2PI_I], PROFILE, TRUNC, with_prime_num=1)
    tau, z = 0.2 + 1.0j, 0.13 + 0.02j
    h = 1e-5
    derivative = (theta_float(h, tau) - theta_float(-h, tau)) / (2 * h)
    v, _ = r.coeffs[0].eval_complex(z, tau)
    assert abs(v - derivative / (2j * math.pi * theta_float(-z, tau))) < 1e-8 * abs(v)


def test_unmatched_zero_in_denominator_is_a_pole():
    with pytest.raises(ThetaPoleError):
        theta_quotient([ThetaArg(c=1)], [ThetaArg(x=True)], [], PROFILE, TRUNC, n=2)


def test_regularized_root_matches_float_limit():
    # x * theta(x/2 pi i - z) / theta(x/2 pi i) at x = 0 equals 2 pi i theta(-z) / theta'(0)
    r = theta_quotient([ThetaArg(c=1, x=True)], [ThetaArg(x=True)], [X], PROFILE, TRUNC, n=2)
    tau, z = -0.1 + 0.95j, 0.21 - 0.03j
    h = 1e-5
    tp = (theta_float(h, tau) - theta_float(-h, tau)) / (2 * h)
    v, _ = r.coeffs[0].eval_complex(z, tau)
    assert abs(v - 2j * math.pi * theta_float(-z, tau) / tp) < 1e-8 * abs(v)


def test_off_grid_argument_is_rejected():
    with pytest.raises(ProfileError):
        theta_expansion(ThetaArg(Fraction(1, 3), 0, 1), PROFILE, TRUNC)


def test_nonzero_lattice_point_is_rejected():
    with pytest.raises(ThetaPoleError):
        theta_expansion(ThetaArg(1, 0, 0), PROFILE, TRUNC)


def test_prefactor_transcendental_residue_in_assembly():
    num = [theta_expansion(ThetaArg(c=1), PROFILE, TRUNC)]
    den = [theta_expansion(ThetaArg(c=2), PROFILE, TRUNC)]
    with pytest.raises(TranscendentalResidue):
        assemble_quotient(num, den, [TWO_PI_I], PROFILE)


@given(quarters, quarters, nonzero_c)
def test_leading_coefficient_is_invertible_off_the_lattice(a, b, c):
    s = body(ThetaArg(a, b, c))
    lead = s.terms[s.valuation()]
    assert not lead.is_zero()
    lead.inverse()


@given(quarters, quarters, st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(1)]))
def test_quasi_periodicity_in_tau(a, b, c):
    # theta(v - tau) = -q^(-1/2) E(v) theta(v) with E(v) = e^(2 pi i a) q^(-b) y^(-c)
    if c == 0 and a == 0 and b == 0:
        return
    lhs = body(ThetaArg(a, b + 1, c))
    base = body(ThetaArg(a, b, c))
    rhs = (base * PROFILE.root(a)).mul_monomial(PROFILE.q_num(-Fraction(1, 2) - b), PROFILE.y_num(-c)) * -1
    window = min(lhs.trunc, rhs.trunc)
    assert window >= 2 * PROFILE.Nq
    assert lhs.agrees_with(rhs, window)


@given(quarters, quarters, nonzero_c)
def test_theta_is_odd(a, b, c):
    arg = ThetaArg(a, b, c)
    lhs = body(arg.negated())
    rhs = body(arg) * -1
    window = min(lhs.trunc, rhs.trunc)
    assert window >= 2 * PROFILE.Nq
    assert lhs.agrees_with(rhs, window)


@settings(max_examples=10)
@given(
    st.floats(-0.5, 0.5), st.floats(0.74, 1.5),
    st.floats(-0.5, 0.5), st.floats(-0.08, 0.08),
    quarters, quarters, st.sampled_from([Fraction(-1), Fraction(1), Fraction(2), Fraction(1, 2)]),
)
def test_exact_expansion_matches_float_product(tr, ti, zr, zi, a, b, c):
    tau, z = complex(tr, ti), complex(zr, zi)
    assert abs(cmath.exp(2j * math.pi * tau)) <= 0.01
    arg = ThetaArg(a, b, c)
    exact = eval_prefactored(theta_expansion(arg, PROFILE, 6 * PROFILE.Nq), z, tau)
    direct = theta_float(float(a) - float(b) * tau - float(c) * z, tau)
    assert abs(exact - direct) <= 1e-8 * abs(direct)
