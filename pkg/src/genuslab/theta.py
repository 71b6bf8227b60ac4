"""Exact q-expansions of the odd theta function at shifted arguments.

    theta(v, tau) = q^(1/8) * 2 sin(pi v) * prod_{l>=1} (1-q^l)(1-q^l E)(1-q^l/E),

with E = exp(2 pi i v).  Arguments have the form

    v = x/(2 pi i) + a - b*tau - c*z

where x is an optional nilpotent Chern-root slot.  Writing
2 sin(pi v) = (-i)(E^(1/2) - E^(-1/2)), each expansion is split into a
*ledger* of transcendental or fractional prefactors (q^(1/8), -i, 2 pi i,
and powers of the Euler product P = prod (1-q^l)) and an exact *body*.
Quotients add ledger exponents; the 2 pi i exponent must cancel.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith.series import ExponentProfile, PuiseuxSeries
from .arith.xseries import XSeries
from .errors import ProfileError, ThetaPoleError, TranscendentalResidue

__all__ = [
    "ThetaArg",
    "Prefactored",
    "Prefactor",
    "X",
    "X_OVER_2PI_I",
    "INV_2PI_I",
    "TWO_PI_I",
    "theta_expansion",
    "theta_prime_zero",
    "assemble_quotient",
    "theta_quotient",
    "euler_product",
    "eval_prefactored",
]


@dataclass(frozen=True)
class ThetaArg:
    """v = x/(2 pi i) + a - b*tau - c*z, the x slot present iff ``x``."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    c: Fraction = Fraction(0)
    x: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(self, "c", Fraction(self.c))

    def negated(self) -> "ThetaArg":
        if self.x:
            raise ValueError("cannot negate an argument with a nilpotent slot")
        return ThetaArg(-self.a, -self.b, -self.c)

    def on_lattice(self) -> bool:
        return self.c == 0 and self.a.denominator == 1 and self.b.denominator == 1


@dataclass(frozen=True)
class Prefactor:
    """Explicit factor x^x_power * (2 pi i)^pi_exp placed in front of a quotient."""

    x_power: int = 1
    pi_exp: int = 0


X = Prefactor(1, 0)
X_OVER_2PI_I = Prefactor(1, -1)
INV_2PI_I = Prefactor(0, -1)
TWO_PI_I = Prefactor(0, 1)


@dataclass(frozen=True)
class Prefactored:
    """q^(q8/8) (-i)^mi (2 pi i)^pi P^eta x^xord * body."""

    q8: int
    mi: int
    pi: int
    eta: int
    xord: int
    body: XSeries


@lru_cache(maxsize=None)
def euler_product(profile: ExponentProfile, trunc: int) -> PuiseuxSeries:
    """prod_{l>=1} (1 - q^l) via the pentagonal number theorem."""
    nq = profile.Nq
    terms = []
    k = 0
    while True:
        found = False
        for kk in ((k,) if k == 0 else (k, -k)):
            e = kk * (3 * kk - 1) // 2
            if e * nq <= trunc:
                terms.append((e, 0, -1 if kk % 2 else 1))
                found = True
        if not found and k > 0:
            break
        k += 1
    return PuiseuxSeries.from_terms(profile, trunc, terms)


def _check_grid(profile: ExponentProfile, arg: ThetaArg):
    try:
        profile.q_num(arg.b / 2)
        profile.y_num(arg.c / 2)
        profile.root(arg.a / 2)
    except ProfileError as exc:
        raise ProfileError(f"profile {profile} cannot host theta argument {arg}: {exc}") from None


@lru_cache(maxsize=4096)
def theta_expansion(arg: ThetaArg, profile: ExponentProfile, trunc: int, n: int = 0) -> Prefactored:
    """Ledger (q8=1, mi=1, pi=0, eta=1) and body (E^(1/2) - E^(-1/2)) prod (1-q^l E)(1-q^l/E).

    ``n`` is the x-order of the target ring (ignored when the argument has
    no nilpotent slot, the body is then constant in x).  At a = b = c = 0
    with an x slot the body vanishes to first order in x; the returned body
    is the quotient by x and ``xord`` is 1.
    """
    _check_grid(profile, arg)
    a, b, c = arg.a, arg.b, arg.c
    use_x = arg.x and n > 0

    def mono(qe, ye, phase, coeff=1):
        return PuiseuxSeries.monomial(profile, trunc, qe, ye, profile.root(phase) * coeff)

    def x_scaled(series_coeff, scale):
        # series_coeff * exp(scale * x) as an XSeries of order n
        if not use_x:
            return XSeries.constant(series_coeff, n)
        return XSeries([series_coeff * f for f in XSeries.exp_linear(scale, n).coeffs])

    xord = 0
    if arg.on_lattice():
        if a != 0 or b != 0:
            raise ThetaPoleError(f"theta argument {arg} lies on a nonzero lattice point; normalize characters")
        if not arg.x:
            return Prefactored(1, 1, 0, 1, 0, XSeries.constant(PuiseuxSeries.zero(profile, trunc), n))
        # (e^(x/2) - e^(-x/2)) / x
        one = PuiseuxSeries.one(profile, trunc)
        coeffs = [one * (2 * Fraction(1, 2) ** (j + 1) / math.factorial(j + 1)) if j % 2 == 0 else 0
                  for j in range(n + 1)]
        lead = XSeries(coeffs)
        xord = 1
    else:
        lead = x_scaled(mono(-b / 2, -c / 2, a / 2), Fraction(1, 2)) - x_scaled(
            mono(b / 2, c / 2, -a / 2), Fraction(-1, 2)
        )

    body = lead
    top = Fraction(trunc, profile.Nq)
    l = 1
    while l - abs(b) <= top:
        for sgn in (1, -1):
            qe = l - sgn * b
            if qe > top:
                continue
            m = mono(qe, -sgn * c, sgn * a)
            factor = XSeries.constant(PuiseuxSeries.one(profile, trunc), n) - x_scaled(m, sgn)
            body = body * factor
        l += 1
    return Prefactored(1, 1, 0, 1, xord, body)


def theta_prime_zero(profile: ExponentProfile, trunc: int, n: int = 0) -> Prefactored:
    """theta'(0) = q^(1/8) (-i) (2 pi i) P^3 exactly."""
    return Prefactored(1, 1, 1, 3, 0, XSeries.constant(PuiseuxSeries.one(profile, trunc), n))


def assemble_quotient(num, den, prefactors=(), profile: ExponentProfile | None = None) -> XSeries:
    """Fold ledgers and bodies of prod(num) / prod(den) times the prefactors.

    Raises TranscendentalResidue when the net power of 2 pi i is nonzero and
    ThetaPoleError when a vanishing denominator is not matched by an x power.
    """
    parts = list(num) + list(den)
    if not parts:
        raise ValueError("empty quotient")
    q8 = sum(p.q8 for p in num) - sum(p.q8 for p in den)
    mi = sum(p.mi for p in num) - sum(p.mi for p in den)
    pi = sum(p.pi for p in num) - sum(p.pi for p in den) + sum(f.pi_exp for f in prefactors)
    eta = sum(p.eta for p in num) - sum(p.eta for p in den)
    xord = sum(p.xord for p in num) - sum(p.xord for p in den) + sum(f.x_power for f in prefactors)
    if pi:
        raise TranscendentalResidue(f"net power of 2*pi*i is {pi}; the quotient is not balanced")
    if xord < 0:
        raise ThetaPoleError("vanishing theta denominator without a matching nilpotent prefactor")
    n = min(p.body.order for p in parts)
    body = XSeries(num[0].body.coeffs[: n + 1]) if num else None
    for p in list(num)[1:]:
        body = body * p.body
    for p in den:
        try:
            inv = p.body.inverse()
        except Exception as exc:  # zero constant term or non-invertible leading coefficient
            raise ThetaPoleError(f"theta denominator is not invertible: {exc}") from None
        body = inv if body is None else body * inv
    if profile is None:
        profile = body.coeffs[0].profile
    if xord:
        body = body.times_x(xord)
    if mi % 4:
        body = body * profile.root(Fraction(-(mi % 4), 4))
    if eta:
        t = max(c.trunc for c in body.coeffs if isinstance(c, PuiseuxSeries))
        body = body * (euler_product(profile, t) ** eta)
    if q8:
        shift = q8 * profile.Nq // 8
        body = body.map(lambda s: s.mul_monomial(shift) if isinstance(s, PuiseuxSeries) else s)
    return body


def theta_quotient(num_args, den_args, prefactors, profile: ExponentProfile, trunc: int, n: int = 0,
                   with_prime_num: int = 0, with_prime_den: int = 0) -> XSeries:
    """Expand and assemble a theta quotient, valid through q-exponent trunc/Nq.

    Factors are expanded with one extra q-order of headroom so that
    fractional leading exponents do not eat into the requested window.
    """
    work = trunc + profile.Nq + sum(abs(profile.q_num(a.b)) for a in list(num_args) + list(den_args))
    num = [theta_expansion(a, profile, work, n) for a in num_args]
    num += [theta_prime_zero(profile, work, n)] * with_prime_num
    den = [theta_expansion(a, profile, work, n) for a in den_args]
    den += [theta_prime_zero(profile, work, n)] * with_prime_den
    body = assemble_quotient(num, den, prefactors, profile)
    return body.map(lambda s: s.truncate(trunc) if isinstance(s, PuiseuxSeries) else s)


def eval_prefactored(p: Prefactored, z: complex, tau: complex, x_index: int = 0) -> complex:
    """Numerical value of the x^x_index coefficient with the ledger folded in."""
    q = cmath.exp(2j * math.pi * tau)
    val, _ = p.body.coeffs[x_index].eval_complex(z, tau)
    eta = 1
    for l in range(1, 200):
        eta *= 1 - q**l
    return (cmath.exp(2j * math.pi * tau / 8) ** p.q8 * (-1j) ** p.mi * (2j * math.pi) ** p.pi
            * eta**p.eta * val)
