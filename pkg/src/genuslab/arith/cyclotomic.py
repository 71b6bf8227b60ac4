"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, zeta, ..., zeta^(phi(N)-1) as a
tuple of integer numerators over one positive common denominator.  Keeping
integers instead of ``Fraction`` objects makes the inner convolution loops
several times faster, which matters because every series coefficient is
built from these.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from ..errors import ProfileError

__all__ = [
    "Cyclotomic",
    "cyclotomic_polynomial",
    "euler_phi",
    "root_of_unity",
]


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _exact_div_monic(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic; coefficients are listed low -> high
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j, dc in enumerate(den):
                num[i - dd + j] -= c * dc
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of the n-th cyclotomic polynomial.

    Obtained by dividing x^n - 1 by Phi_d for every proper divisor d of n.
    """
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly = _exact_div_monic(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Reductions of zeta^k modulo Phi_n for 0 <= k < max(n, 2*phi(n) - 1)."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(max(n, 2 * deg - 1)):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(rows)


def _normalize(num: list[int] | tuple[int, ...], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = den
    for c in num:
        if c:
            g = gcd(g, c)
            if g == 1:
                break
    if g > 1:
        num = [c // g for c in num]
        den //= g
    if not any(num):
        return tuple(0 for _ in num), 1
    return tuple(num), den


class Cyclotomic:
    """An element of Q(zeta_N), zeta_N = exp(2 pi i / N).

    Elements of different orders are combined by lifting both to the least
    common multiple.  ``hash`` is only consistent with ``==`` among elements
    of one order (or among rational elements); the engine never mixes orders
    inside a hashed container.
    """

    __slots__ = ("order", "num", "den")

    def __init__(self, order: int, coeffs=None, *, _raw=None):
        self.order = order
        if _raw is not None:
            self.num, self.den = _raw
            return
        deg = len(cyclotomic_polynomial(order)) - 1
        if coeffs is None:
            coeffs = (0,)
        fr = [Fraction(c) for c in coeffs]
        if len(fr) > deg:
            # reduce a longer power-basis vector modulo Phi_N
            table = _power_table(order)
            big = lcm(*(f.denominator for f in fr)) if fr else 1
            acc = [0] * deg
            for k, f in enumerate(fr):
                if f:
                    row = table[k % order]
                    v = f.numerator * (big // f.denominator)
                    for i in range(deg):
                        acc[i] += v * row[i]
            self.num, self.den = _normalize(acc, big)
            return
        fr += [Fraction(0)] * (deg - len(fr))
        big = lcm(*(f.denominator for f in fr)) if fr else 1
        self.num, self.den = _normalize([f.numerator * (big // f.denominator) for f in fr], big)

    # -- constructors -------------------------------------------------
    @classmethod
    def rational(cls, order: int, value) -> "Cyclotomic":
        value = Fraction(value)
        deg = len(cyclotomic_polynomial(order)) - 1
        num = [value.numerator] + [0] * (deg - 1)
        return cls(order, _raw=(tuple(num), value.denominator) if value else (tuple([0] * deg), 1))

    @classmethod
    def zero(cls, order: int) -> "Cyclotomic":
        return cls.rational(order, 0)

    @classmethod
    def one(cls, order: int) -> "Cyclotomic":
        return cls.rational(order, 1)

    @classmethod
    def zeta_power(cls, order: int, k: int) -> "Cyclotomic":
        row = _power_table(order)[k % order]
        return cls(order, _raw=(row, 1))

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def is_one(self) -> bool:
        return self.den == 1 and self.num[0] == 1 and self.is_rational()

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    # -- coercion -------------------------------------------------------
    def lift(self, order: int) -> "Cyclotomic":
        """Embed into Q(zeta_order); ``order`` must be a multiple of ``self.order``."""
        if order == self.order:
            return self
        if order % self.order:
            raise ProfileError(f"cannot embed Q(zeta_{self.order}) into Q(zeta_{order})")
        step = order // self.order
        table = _power_table(order)
        deg = len(cyclotomic_polynomial(order)) - 1
        acc = [0] * deg
        for k, c in enumerate(self.num):
            if c:
                row = table[(k * step) % order]
                for i in range(deg):
                    acc[i] += c * row[i]
        return Cyclotomic(order, _raw=_normalize(acc, self.den))

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.order == self.order:
                return self, other
            n = lcm(self.order, other.order)
            return self.lift(n), other.lift(n)
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic.rational(self.order, other)
        return None

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if a.den == b.den:
            return Cyclotomic(a.order, _raw=_normalize([x + y for x, y in zip(a.num, b.num)], a.den))
        return Cyclotomic(
            a.order,
            _raw=_normalize([x * b.den + y * a.den for x, y in zip(a.num, b.num)], a.den * b.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, _raw=(tuple(-c for c in self.num), self.den))

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return Cyclotomic(
                self.order,
                _raw=_normalize([c * other.numerator for c in self.num], self.den * other.denominator),
            )
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if b.is_rational():
            a, b = b, a
        if a.is_rational():
            s = a.num[0]
            return Cyclotomic(b.order, _raw=_normalize([c * s for c in b.num], a.den * b.den))
        deg = len(a.num)
        prod = [0] * (2 * deg - 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        prod[i + j] += x * y
        if deg > 1:
            table = _power_table(a.order)
            acc = prod[:deg]
            for k in range(deg, 2 * deg - 1):
                c = prod[k]
                if c:
                    row = table[k]
                    for i in range(deg):
                        acc[i] += c * row[i]
        else:
            acc = prod
        return Cyclotomic(a.order, _raw=_normalize(acc, a.den * b.den))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        if self.is_rational():
            return Cyclotomic.rational(self.order, Fraction(self.den, self.num[0]))
        # extended Euclid in Q[x] against Phi_N
        a = [Fraction(c, self.den) for c in self.num]
        m = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        s0, s1 = [Fraction(0)], [Fraction(1)]
        r0, r1 = m, _trim(a)
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            if len(r) == 1 and r[0] == 0:
                raise ZeroDivisionError("non-invertible element")
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r1 is a nonzero constant; a * s1 == r1 mod Phi
        inv = [c / r1[0] for c in s1]
        return Cyclotomic(self.order, inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclotomic.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        if isinstance(other, Cyclotomic):
            if other.order == self.order:
                return self.num == other.num and self.den == other.den
            a, b = self._coerce(other)
            return a.num == b.num and a.den == b.den
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.order, self.num, self.den))

    def to_complex(self) -> complex:
        w = cmath.exp(2j * cmath.pi / self.order)
        return sum(c * w**k for k, c in enumerate(self.num) if c) / self.den

    def __repr__(self):
        if self.is_rational():
            return str(Fraction(self.num[0], self.den))
        terms = []
        for k, c in enumerate(self.num):
            if c:
                f = Fraction(c, self.den)
                terms.append(f"{f}" if k == 0 else f"({f})*z{self.order}^{k}")
        return " + ".join(terms)


def _trim(p: list[Fraction]) -> list[Fraction]:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_divmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if len(a) < len(b):
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = list(a)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = r[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, bc in enumerate(b):
                r[i + j] -= c * bc
    return _trim(q), _trim(r[: len(b) - 1] or [Fraction(0)])


def root_of_unity(a, order: int) -> Cyclotomic:
    """exp(2 pi i a) as an element of Q(zeta_order).

    Raises ProfileError when the denominator of ``a`` does not divide ``order``.
    """
    a = Fraction(a)
    if order % a.denominator:
        raise ProfileError(f"root of unity exp(2 pi i * {a}) needs order divisible by {a.denominator}, have {order}")
    k = (a.numerator * (order // a.denominator)) % order
    return Cyclotomic.zeta_power(order, k)
