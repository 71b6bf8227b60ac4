"""Rational functions in u = y^(1/Ly) over a cyclotomic field.

Numerators are sparse Laurent polynomials ``{u-exponent: Cyclotomic}``.
Denominators are kept *factored*: a multiset of polynomials in u with
nonnegative exponents and constant term 1.  Binomial denominators of the
form 1 -/+ u^k (the only ones theta quotients produce at rational
characters) are split into cyclotomic polynomials Phi_d(u), so common
factors cancel by exact trial division and no polynomial gcd is needed.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .cyclotomic import Cyclotomic, cyclotomic_polynomial, euler_phi

__all__ = ["YFraction", "poly_mul", "poly_add", "poly_scale", "poly_shift"]

# Denominator factors of degree above this bound are not searched for
# cyclotomic divisors.
SPLIT_DEGREE_BOUND = 64


# -- sparse Laurent polynomial helpers ------------------------------------

def poly_add(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for e, c in b.items():
        if e in out:
            s = out[e] + c
            if s.is_zero():
                del out[e]
            else:
                out[e] = s
        else:
            out[e] = c
    return out


def poly_neg(a: dict) -> dict:
    return {e: -c for e, c in a.items()}


def poly_scale(a: dict, s) -> dict:
    if not a:
        return {}
    out = {}
    for e, c in a.items():
        v = c * s
        if not v.is_zero():
            out[e] = v
    return out


def poly_shift(a: dict, k: int) -> dict:
    return {e + k: c for e, c in a.items()} if k else a


def poly_mul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    for e2, c2 in b.items():
        for e1, c1 in a.items():
            e = e1 + e2
            v = c1 * c2
            if e in out:
                out[e] = out[e] + v
            else:
                out[e] = v
    return {e: c for e, c in out.items() if not c.is_zero()}


def _poly_divexact(a: dict, f: tuple) -> dict | None:
    """Exact quotient a / f, or None if f does not divide a.

    ``f`` is a factor key: tuple of (exponent, Cyclotomic) with exponents
    ascending from 0 and constant term 1, so division proceeds from the
    lowest monomial of ``a`` upward.
    """
    if not a:
        return {}
    lo = min(a)
    hi = max(a)
    fdeg = f[-1][0]
    if hi - lo < fdeg:
        return None
    rem = dict(a)
    quot = {}
    qmax = hi - fdeg
    tail = f[1:]
    e = lo
    while rem:
        e = min(rem)
        if e > qmax:
            return None
        c = rem.pop(e)
        quot[e] = c
        for fe, fc in tail:
            k = e + fe
            v = c * fc
            if k in rem:
                s = rem[k] - v
                if s.is_zero():
                    del rem[k]
                else:
                    rem[k] = s
            else:
                rem[k] = -v
    return quot


def _key_to_poly(key: tuple) -> dict:
    return dict(key)


def _poly_to_key(p: dict) -> tuple:
    return tuple(sorted(p.items()))


@lru_cache(maxsize=None)
def _cyclotomic_key(d: int, order: int) -> tuple:
    """Phi_d(u) scaled to constant term 1, as a factor key over Q(zeta_order)."""
    coeffs = cyclotomic_polynomial(d)
    sign = 1 if coeffs[0] == 1 else -1
    return tuple(
        (e, Cyclotomic.rational(order, sign * c)) for e, c in enumerate(coeffs) if c
    )


def _split_normalized(p: dict, order: int) -> list[tuple]:
    """Split a normalized polynomial (constant term 1) into factor keys."""
    deg = max(p)
    if deg == 0:
        return []
    if deg > SPLIT_DEGREE_BOUND or not all(c.is_rational() for c in p.values()):
        return [_poly_to_key(p)]
    factors = []
    rest = p
    d = 1
    while max(rest) > 0 and d <= 2 * deg * deg + 2:
        if euler_phi(d) <= max(rest):
            key = _cyclotomic_key(d, order)
            while max(rest) >= key[-1][0]:
                q = _poly_divexact(rest, key)
                if q is None:
                    break
                factors.append(key)
                rest = q
                if max(rest) == 0:
                    break
        d += 1
    if max(rest) > 0:
        factors.append(_poly_to_key(rest))
    return factors


def normalize_poly(p: dict, order: int):
    """Write p = unit * u^shift * prod(factors) with factors normalized.

    Returns (shift, unit, factors).
    """
    lo = min(p)
    c0 = p[lo]
    inv = c0.inverse()
    q = {e - lo: c * inv for e, c in p.items()}
    return lo, c0, _split_normalized(q, order)


class YFraction:
    """A rational function in u = y^(1/Ly) with coefficients in Q(zeta_N).

    Immutable.  Equality is decided by cross multiplication, so it does not
    depend on how far common factors have been cancelled.
    """

    __slots__ = ("order", "num", "den")

    def __init__(self, order: int, num: dict | None = None, den: dict | None = None):
        # den: {factor_key: multiplicity}
        self.order = order
        self.num = num or {}
        self.den = den or {}
        if not self.num:
            self.den = {}

    # -- constructors ---------------------------------------------------
    @classmethod
    def constant(cls, order: int, c) -> "YFraction":
        if not isinstance(c, Cyclotomic):
            c = Cyclotomic.rational(order, c)
        elif c.order != order:
            c = c.lift(order)
        return cls(order, {} if c.is_zero() else {0: c})

    @classmethod
    def monomial(cls, order: int, uexp: int, c=1) -> "YFraction":
        if not isinstance(c, Cyclotomic):
            c = Cyclotomic.rational(order, c)
        elif c.order != order:
            c = c.lift(order)
        return cls(order, {} if c.is_zero() else {uexp: c})

    @classmethod
    def from_polys(cls, order: int, num: dict, den: dict) -> "YFraction":
        """Build num/den from two Laurent polynomials, normalizing den."""
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return cls(order)
        shift, unit, factors = normalize_poly(den, order)
        num = poly_scale(poly_shift(num, -shift), unit.inverse())
        dmap: dict = {}
        for f in factors:
            dmap[f] = dmap.get(f, 0) + 1
        return cls(order, num, dmap)._cancel()

    # -- structure ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return not self.den

    def denominator_poly(self) -> dict:
        out = {0: Cyclotomic.one(self.order)}
        for key, m in self.den.items():
            f = _key_to_poly(key)
            for _ in range(m):
                out = poly_mul(out, f)
        return out

    def numerator_poly(self) -> dict:
        return dict(self.num)

    def _cancel(self) -> "YFraction":
        if not self.den or not self.num:
            return self if self.num else YFraction(self.order)
        num = self.num
        den = dict(self.den)
        for key in list(den):
            m = den[key]
            while m:
                q = _poly_divexact(num, key)
                if q is None:
                    break
                num = q
                m -= 1
            if m:
                den[key] = m
            else:
                del den[key]
        return YFraction(self.order, num, den)

    def _coerce(self, other):
        if isinstance(other, YFraction):
            return other
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return YFraction.constant(self.order, other)
        return None

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if not self.den and not other.den:
            return YFraction(self.order, poly_add(self.num, other.num))
        den = dict(self.den)
        for k, m in other.den.items():
            if den.get(k, 0) < m:
                den[k] = m
        a = self.num
        for k, m in den.items():
            for _ in range(m - self.den.get(k, 0)):
                a = poly_mul(a, _key_to_poly(k))
        b = other.num
        for k, m in den.items():
            for _ in range(m - other.den.get(k, 0)):
                b = poly_mul(b, _key_to_poly(k))
        return YFraction(self.order, poly_add(a, b), den)._cancel()

    __radd__ = __add__

    def __neg__(self):
        return YFraction(self.order, poly_neg(self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            if isinstance(other, Cyclotomic) and other.order != self.order:
                other = other.lift(self.order)
            return YFraction(self.order, poly_scale(self.num, other), self.den)
        if not isinstance(other, YFraction):
            return NotImplemented
        if not self.num or not other.num:
            return YFraction(self.order)
        num = poly_mul(self.num, other.num)
        if not self.den and not other.den:
            return YFraction(self.order, num)
        den = dict(self.den)
        for k, m in other.den.items():
            den[k] = den.get(k, 0) + m
        return YFraction(self.order, num, den)._cancel()

    __rmul__ = __mul__

    def mul_monomial(self, uexp: int) -> "YFraction":
        return YFraction(self.order, poly_shift(self.num, uexp), self.den)

    def inverse(self) -> "YFraction":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return YFraction.from_polys(self.order, self.denominator_poly(), self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = YFraction.constant(self.order, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, YFraction) else other
        if other is None:
            return NotImplemented
        if not self.den and not other.den:
            return self.num == other.num
        if self.den == other.den:
            return self.num == other.num or (
                poly_mul(self.num, other.denominator_poly()) == poly_mul(other.num, self.denominator_poly())
            )
        return poly_mul(self.num, other.denominator_poly()) == poly_mul(other.num, self.denominator_poly())

    __hash__ = None

    # -- transformations ------------------------------------------------
    def map_u(self, phase_of) -> "YFraction":
        """Substitute u -> w * u where ``phase_of(k)`` returns w^k."""
        num = {e: c * phase_of(e) for e, c in self.num.items()}
        if not self.den:
            return YFraction(self.order, num)
        den = {e: c * phase_of(e) for e, c in self.denominator_poly().items()}
        return YFraction.from_polys(self.order, num, den)

    def evaluate(self, u: complex) -> complex:
        """Numerical value at the complex point u (cyclotomics embedded in C)."""
        n = sum(c.to_complex() * u**e for e, c in self.num.items())
        if not self.den:
            return n
        d = sum(c.to_complex() * u**e for e, c in self.denominator_poly().items())
        return n / d

    def evaluate_exact_at_root(self, phase: Fraction, order: int | None = None):
        """Exact value at u = exp(2 pi i phase); raises ZeroDivisionError at a pole."""
        from .cyclotomic import root_of_unity

        n = order or self.order
        w = root_of_unity(phase, n)

        def ev(p):
            total = Cyclotomic.zero(n)
            for e, c in p.items():
                total = total + c * (w ** e)
            return total

        num = ev(self.num)
        if not self.den:
            return num
        den = ev(self.denominator_poly())
        if den.is_zero():
            raise ZeroDivisionError("rational function has a pole at this point")
        return num / den

    def u_range(self) -> tuple[int, int]:
        if not self.num:
            return (0, 0)
        return min(self.num), max(self.num)

    def __repr__(self):
        def fmt(p):
            parts = []
            for e in sorted(p):
                parts.append(f"({p[e]})*u^{e}" if e else f"({p[e]})")
            return " + ".join(parts) or "0"

        if not self.den:
            return fmt(self.num)
        return f"[{fmt(self.num)}] / [{fmt(self.denominator_poly())}]"
