"""Truncated Puiseux series in q with rational-function coefficients in y.

A series carries an :class:`ExponentProfile` fixing the exponent grids:
q-exponents are integers over ``Nq``, y-exponents integers over ``Ly`` (the
coefficient variable is u = y^(1/Ly)), and roots of unity live in
Q(zeta_Nzeta).  Terms are known for q-exponents ``f / Nq`` with
``f <= trunc``; everything above is unknown, and every operation propagates
the window pessimistically.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from ..errors import NonInvertibleSeries, ProfileError
from .cyclotomic import Cyclotomic, root_of_unity
from .yfrac import YFraction

__all__ = ["ExponentProfile", "PuiseuxSeries", "DEFAULT_PROFILE"]


@dataclass(frozen=True)
class ExponentProfile:
    Ly: int = 2
    Nq: int = 8
    Nzeta: int = 4

    def __post_init__(self):
        if self.Ly < 1 or self.Ly % 2:
            raise ProfileError(f"Ly must be a positive multiple of 2, got {self.Ly}")
        if self.Nq < 1 or self.Nq % 8:
            raise ProfileError(f"Nq must be a positive multiple of 8, got {self.Nq}")
        if self.Nzeta < 1 or self.Nzeta % 4:
            raise ProfileError(f"Nzeta must be a positive multiple of 4, got {self.Nzeta}")

    @classmethod
    def covering(cls, y_dens=(), q_dens=(), zeta_dens=()) -> "ExponentProfile":
        """Smallest profile whose grids contain the given denominators."""
        Ly = lcm(2, *y_dens)
        Nq = lcm(8, *q_dens)
        Nzeta = lcm(4, Ly, *zeta_dens)
        return cls(Ly, Nq, Nzeta)

    def q_num(self, e) -> int:
        e = Fraction(e)
        v = e * self.Nq
        if v.denominator != 1:
            raise ProfileError(f"q-exponent {e} is not a multiple of 1/{self.Nq}")
        return int(v)

    def y_num(self, e) -> int:
        e = Fraction(e)
        v = e * self.Ly
        if v.denominator != 1:
            raise ProfileError(f"y-exponent {e} is not a multiple of 1/{self.Ly}")
        return int(v)

    def root(self, a) -> Cyclotomic:
        return root_of_unity(a, self.Nzeta)

    def to_json(self) -> dict:
        return {"Ly": self.Ly, "Nq": self.Nq, "Nzeta": self.Nzeta}


DEFAULT_PROFILE = ExponentProfile()


def _as_coeff(profile: ExponentProfile, c) -> YFraction:
    if isinstance(c, YFraction):
        return c
    return YFraction.constant(profile.Nzeta, c)


class PuiseuxSeries:
    """sum_f c_f q^(f/Nq) for f <= trunc, c_f a :class:`YFraction`."""

    __slots__ = ("profile", "trunc", "terms")

    def __init__(self, profile: ExponentProfile, trunc: int, terms: dict | None = None):
        self.profile = profile
        self.trunc = trunc
        self.terms = {f: c for f, c in (terms or {}).items() if f <= trunc and not c.is_zero()}

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, profile: ExponentProfile, trunc: int) -> "PuiseuxSeries":
        return cls(profile, trunc)

    @classmethod
    def one(cls, profile: ExponentProfile, trunc: int) -> "PuiseuxSeries":
        return cls.monomial(profile, trunc)

    @classmethod
    def monomial(cls, profile, trunc, qexp=0, yexp=0, coeff=1) -> "PuiseuxSeries":
        """coeff * q^qexp * y^yexp with rational exponents."""
        f = profile.q_num(qexp)
        k = profile.y_num(yexp)
        c = YFraction.monomial(profile.Nzeta, k, coeff)
        return cls(profile, trunc, {f: c})

    @classmethod
    def from_terms(cls, profile, trunc, terms) -> "PuiseuxSeries":
        """Build from an iterable of (qexp, yexp, coeff) with rational exponents."""
        out: dict = {}
        for qe, ye, c in terms:
            f = profile.q_num(qe)
            mono = YFraction.monomial(profile.Nzeta, profile.y_num(ye), c)
            out[f] = out[f] + mono if f in out else mono
        return cls(profile, trunc, out)

    # -- basic queries ----------------------------------------------------
    def valuation(self) -> int:
        """Lowest known nonzero exponent numerator; trunc + 1 for the zero series."""
        return min(self.terms) if self.terms else self.trunc + 1

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, qexp) -> YFraction:
        f = self.profile.q_num(qexp)
        if f > self.trunc:
            raise ProfileError(f"q-exponent {qexp} lies beyond the truncation {self.trunc}/{self.profile.Nq}")
        return self.terms.get(f, YFraction(self.profile.Nzeta))

    def truncate(self, trunc: int) -> "PuiseuxSeries":
        if trunc >= self.trunc:
            return self
        return PuiseuxSeries(self.profile, trunc, self.terms)

    def order(self) -> Fraction:
        """Achieved truncation in q units."""
        return Fraction(self.trunc, self.profile.Nq)

    def _check(self, other: "PuiseuxSeries"):
        if other.profile != self.profile:
            raise ProfileError(f"profile mismatch: {self.profile} vs {other.profile}")

    def _lift(self, other):
        if isinstance(other, PuiseuxSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Cyclotomic, YFraction)):
            c = _as_coeff(self.profile, other)
            return PuiseuxSeries(self.profile, max(self.trunc, 0), {0: c})
        return None

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not isinstance(other, PuiseuxSeries):
            if self.trunc < 0:
                return self
            o = PuiseuxSeries(self.profile, self.trunc, o.terms)
        trunc = min(self.trunc, o.trunc)
        terms = {f: c for f, c in self.terms.items() if f <= trunc}
        for f, c in o.terms.items():
            if f <= trunc:
                terms[f] = terms[f] + c if f in terms else c
        return PuiseuxSeries(self.profile, trunc, terms)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(self.profile, self.trunc, {f: -c for f, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not isinstance(other, PuiseuxSeries):
            o = PuiseuxSeries(self.profile, self.trunc, o.terms)
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic, YFraction)):
            if isinstance(other, (int, Fraction)) and other == 0:
                return PuiseuxSeries(self.profile, self.trunc)
            return PuiseuxSeries(self.profile, self.trunc, {f: c * other for f, c in self.terms.items()})
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        self._check(other)
        v1, v2 = self.valuation(), other.valuation()
        trunc = min(self.trunc + v2, other.trunc + v1)
        a = sorted(self.terms.items())
        b = sorted(other.terms.items())
        out: dict = {}
        for f1, c1 in a:
            if f1 + v2 > trunc:
                break
            for f2, c2 in b:
                f = f1 + f2
                if f > trunc:
                    break
                v = c1 * c2
                out[f] = out[f] + v if f in out else v
        return PuiseuxSeries(self.profile, trunc, out)

    __rmul__ = __mul__

    def mul_monomial(self, qnum: int = 0, unum: int = 0) -> "PuiseuxSeries":
        """Multiply by q^(qnum/Nq) * u^unum (exact shift of the window)."""
        return PuiseuxSeries(
            self.profile,
            self.trunc + qnum,
            {f + qnum: (c.mul_monomial(unum) if unum else c) for f, c in self.terms.items()},
        )

    def inverse(self) -> "PuiseuxSeries":
        if not self.terms:
            raise NonInvertibleSeries("non-invertible series: no nonzero term within the truncation")
        v = self.valuation()
        lead = self.terms[v]
        if lead.is_zero():
            raise NonInvertibleSeries("non-invertible series: zero leading coefficient")
        inv_lead = lead.inverse()
        rel = self.trunc - v  # relative precision
        tail = sorted((f - v, c * inv_lead) for f, c in self.terms.items() if f != v)
        # r = 1 / (1 + sum tail) computed on offsets 0..rel
        r: dict = {0: YFraction.constant(self.profile.Nzeta, 1)}
        for k in range(1, rel + 1):
            acc = None
            for j, t in tail:
                if j > k:
                    break
                rk = r.get(k - j)
                if rk is not None:
                    p = t * rk
                    acc = p if acc is None else acc + p
            if acc is not None and not acc.is_zero():
                r[k] = -acc
        terms = {k - v: c * inv_lead for k, c in r.items()}
        return PuiseuxSeries(self.profile, rel - v, terms)

    def __truediv__(self, other):
        if isinstance(other, PuiseuxSeries):
            return self * other.inverse()
        if isinstance(other, (int, Fraction, Cyclotomic, YFraction)):
            return self * _as_coeff(self.profile, other).inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return PuiseuxSeries.one(self.profile, self.trunc)
        # identity with an unbounded window so the first product sets the truncation
        out = PuiseuxSeries.one(self.profile, 10**12)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic, YFraction)):
            other = self._lift(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self.agrees_with(other)

    __hash__ = None

    def agrees_with(self, other: "PuiseuxSeries", trunc: int | None = None) -> bool:
        """Coefficientwise equality on the common window (or up to ``trunc``)."""
        return self.first_difference(other, trunc) is None

    def first_difference(self, other: "PuiseuxSeries", trunc: int | None = None):
        """Lowest exponent numerator where the series differ, or None."""
        self._check(other)
        t = min(self.trunc, other.trunc) if trunc is None else trunc
        if trunc is not None and (trunc > self.trunc or trunc > other.trunc):
            raise ProfileError(f"comparison window {trunc} exceeds available truncation")
        zero = YFraction(self.profile.Nzeta)
        for f in sorted(set(self.terms) | set(other.terms)):
            if f > t:
                break
            if not (self.terms.get(f, zero) == other.terms.get(f, zero)):
                return f
        return None

    # -- substitutions ----------------------------------------------------
    def substitute(self, kind: str, K: int = 1) -> "PuiseuxSeries":
        """Apply z -> z+1 ('zPlus1'), z -> z+K*tau ('zPlusTau'/'zPlusKTau'), or tau -> tau+1 ('tauPlus1')."""
        p = self.profile
        if kind == "zPlus1":
            if p.Nzeta % p.Ly:
                raise ProfileError("profile cannot represent the phases of z -> z+1")

            def phase(k):
                return root_of_unity(Fraction(k, p.Ly), p.Nzeta)

            return PuiseuxSeries(p, self.trunc, {f: c.map_u(phase) for f, c in self.terms.items()})
        if kind == "tauPlus1":
            terms = {}
            for f, c in self.terms.items():
                terms[f] = c * root_of_unity(Fraction(f, p.Nq), p.Nzeta)
            return PuiseuxSeries(p, self.trunc, terms)
        if kind in ("zPlusTau", "zPlusKTau"):
            if kind == "zPlusTau":
                K = 1
            step = Fraction(K * p.Nq, p.Ly)
            if step.denominator != 1:
                raise ProfileError("profile cannot represent the q-shifts of z -> z + K tau")
            step = int(step)
            out: dict = {}
            emax = 0
            for f, c in self.terms.items():
                if not c.is_polynomial():
                    raise ProfileError("z -> z + K tau needs Laurent-polynomial coefficients in y")
                for k, a in c.num.items():
                    emax = max(emax, abs(k))
                    g = f + step * k
                    mono = YFraction.monomial(p.Nzeta, k, a)
                    out[g] = out[g] + mono if g in out else mono
            # unknown terms above the window may carry y-exponents as large as
            # those present; their images can reach down by |K| * emax
            trunc = self.trunc - abs(step) * emax
            return PuiseuxSeries(p, trunc, out)
        raise ValueError(f"unknown substitution {kind!r}")

    # -- numerics ---------------------------------------------------------
    def eval_complex(self, z: complex, tau: complex) -> tuple[complex, float]:
        """Value at y = e^(2 pi i z), q = e^(2 pi i tau) plus a tail estimate."""
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half plane")
        p = self.profile
        u = cmath.exp(2j * math.pi * z / p.Ly)
        qroot = cmath.exp(2j * math.pi * tau / p.Nq)
        total = 0j
        biggest = 0.0
        for f, c in self.terms.items():
            cv = c.evaluate(u)
            total += cv * qroot**f
            biggest = max(biggest, abs(cv) * abs(qroot) ** (f - self.valuation()))
        tail = biggest * abs(qroot) ** (self.trunc + 1) if self.terms else abs(qroot) ** (self.trunc + 1)
        return total, tail

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        def poly_json(poly):
            return [[e, [_fmt(x) for x in poly[e].coefficients()]] for e in sorted(poly)]

        records = []
        for f in sorted(self.terms):
            c = self.terms[f]
            records.append(
                {
                    "qExpNumerator": f,
                    "yNumerator": poly_json(c.num),
                    "yDenominator": poly_json(c.denominator_poly()),
                }
            )
        return {"profile": self.profile.to_json(), "truncation": self.trunc, "terms": records}

    @classmethod
    def from_json(cls, data: dict) -> "PuiseuxSeries":
        prof = ExponentProfile(**data["profile"])
        n = prof.Nzeta

        def poly(items):
            return {int(e): Cyclotomic(n, [Fraction(x) for x in cs]) for e, cs in items}

        terms = {}
        for rec in data["terms"]:
            num = {e: c for e, c in poly(rec["yNumerator"]).items() if not c.is_zero()}
            den = {e: c for e, c in poly(rec["yDenominator"]).items() if not c.is_zero()}
            terms[int(rec["qExpNumerator"])] = YFraction.from_polys(n, num, den)
        return cls(prof, int(data["truncation"]), terms)

    def __repr__(self):
        p = self.profile
        parts = []
        for f in sorted(self.terms):
            parts.append(f"q^({Fraction(f, p.Nq)})*[{self.terms[f]}]")
        body = " + ".join(parts) or "0"
        return f"{body} + O(q^({Fraction(self.trunc + 1, p.Nq)}))  [u = y^(1/{p.Ly})]"


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
