"""Univariate series in a nilpotent variable x, truncated at x^(n+1).

Coefficients may be plain rationals, cyclotomic numbers, or
:class:`PuiseuxSeries`; the class only relies on ``+``, ``*`` and an
inverse for the constant term.  This is the ring in which Chern-root
functions such as x * theta(x/2 pi i - z) / theta(x/2 pi i) live before
they are turned into characteristic classes.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from ..errors import DegenerateRootFunction

__all__ = ["XSeries", "scalar_inverse", "scalar_is_zero"]


def scalar_is_zero(c) -> bool:
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


def scalar_inverse(c):
    if isinstance(c, (int, Fraction)):
        if c == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / c
    return c.inverse()


class XSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c, n: int) -> "XSeries":
        return cls([c] + [0] * n)

    @classmethod
    def exp_linear(cls, scale, n: int) -> "XSeries":
        """exp(scale * x) with rational ``scale``."""
        scale = Fraction(scale)
        return cls([scale**k / factorial(k) for k in range(n + 1)])

    @classmethod
    def x_power(cls, k: int, n: int) -> "XSeries":
        return cls([1 if i == k else 0 for i in range(n + 1)])

    def __getitem__(self, k):
        return self.coeffs[k] if k < len(self.coeffs) else 0

    def _other(self, other):
        if isinstance(other, XSeries):
            return other
        return XSeries.constant(other, self.order)

    def __add__(self, other):
        o = self._other(other)
        n = min(self.order, o.order)
        return XSeries([self.coeffs[k] + o.coeffs[k] for k in range(n + 1)])

    __radd__ = __add__

    def __neg__(self):
        return XSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, XSeries):
            return XSeries([c * other for c in self.coeffs])
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = 0
            for j in range(k + 1):
                a, b = self.coeffs[j], other.coeffs[k - j]
                if scalar_is_zero(a) or scalar_is_zero(b):
                    continue
                acc = acc + a * b
            out.append(acc)
        return XSeries(out)

    def __rmul__(self, other):
        return XSeries([other * c for c in self.coeffs])

    def times_x(self, k: int = 1) -> "XSeries":
        """Multiply by x^k, dropping terms beyond the order."""
        n = self.order
        return XSeries([0] * min(k, n + 1) + list(self.coeffs[: max(n + 1 - k, 0)]))

    def inverse(self) -> "XSeries":
        a0 = self.coeffs[0]
        if scalar_is_zero(a0):
            raise DegenerateRootFunction("series in x has zero constant term")
        b0 = scalar_inverse(a0)
        out = [b0]
        for k in range(1, self.order + 1):
            acc = 0
            for j in range(1, k + 1):
                a = self.coeffs[j]
                if not scalar_is_zero(a):
                    acc = acc + a * out[k - j]
            out.append(-(acc * b0) if not scalar_is_zero(acc) else 0)
        return XSeries(out)

    def log1(self) -> "XSeries":
        """log(f) for f with constant term exactly 1."""
        f = self.coeffs
        n = self.order
        out = [0] * (n + 1)
        for k in range(1, n + 1):
            acc = f[k] * k if not scalar_is_zero(f[k]) else 0
            for j in range(1, k):
                if scalar_is_zero(out[j]) or scalar_is_zero(f[k - j]):
                    continue
                acc = acc - out[j] * f[k - j] * j
            out[k] = acc * Fraction(1, k) if not scalar_is_zero(acc) else 0
        return XSeries(out)

    def exp0(self) -> "XSeries":
        """exp(g) for g with zero constant term."""
        g = self.coeffs
        n = self.order
        out = [1] + [0] * n
        for k in range(1, n + 1):
            acc = 0
            for j in range(1, k + 1):
                if scalar_is_zero(g[j]) or scalar_is_zero(out[k - j]):
                    continue
                acc = acc + g[j] * out[k - j] * j
            out[k] = acc * Fraction(1, k) if not scalar_is_zero(acc) else 0
        return XSeries(out)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = XSeries.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def map(self, fn) -> "XSeries":
        return XSeries([fn(c) for c in self.coeffs])

    def __repr__(self):
        return "XSeries(" + ", ".join(f"x^{k}: {c}" for k, c in enumerate(self.coeffs)) + ")"

