"""Weak Jacobi form generators and exact basis membership.

Generators (weight, index):

    E4 (4, 0), E6 (6, 0), phiM21 (-2, 1), phi01 (0, 1),
    phiM1half (-1, 1/2), phi03half (0, 3/2)

phi01 is assembled from the even theta series, phiM1half from the odd
theta product divided by eta^3, phi03half = theta(2z)/theta(z), and
phiM21 = phiM1half^2.  Monomials E4^a E6^b phiM21^c phi01^e phiM1half^f
phi03half^g with f, g in {0, 1} span the weak Jacobi forms of every
weight and (half-)integral index.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .arith.cyclotomic import Cyclotomic
from .arith.series import ExponentProfile, PuiseuxSeries
from .errors import InsufficientTruncation, ValidationError

__all__ = [
    "GENERATORS",
    "generator_expansion",
    "monomials",
    "monomial_key",
    "monomial_expansion",
    "MembershipReport",
    "membership",
]

# name: (weight, index)
GENERATORS = {
    "E4": (4, Fraction(0)),
    "E6": (6, Fraction(0)),
    "phiM21": (-2, Fraction(1)),
    "phi01": (0, Fraction(1)),
    "phiM1half": (-1, Fraction(1, 2)),
    "phi03half": (0, Fraction(3, 2)),
}
_ORDER = ("E4", "E6", "phiM21", "phi01", "phiM1half", "phi03half")
MAX_INDEX = 6


def _sigma(n: int, k: int) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def _eisenstein(profile, trunc, k, c):
    top = trunc // profile.Nq
    return PuiseuxSeries.from_terms(profile, trunc, [(0, 0, 1)] + [(n, 0, c * _sigma(n, k - 1)) for n in range(1, top + 1)])


def _theta_even(profile, trunc, kind, at_zero):
    """theta_2, theta_3 or theta_4 in the variable y (or at z = 0) as a theta series.

    theta_3 = sum q^(r^2/2) y^r over integers r, theta_4 adds the sign (-1)^r,
    theta_2 runs over r in 1/2 + Z.
    """
    shift = Fraction(1, 2) if kind == 2 else Fraction(0)
    top = Fraction(trunc, profile.Nq)
    terms = []
    n = 0
    while (n + shift) ** 2 / 2 <= top:
        for r in sorted({n + shift, -n - shift}):
            sign = -1 if kind == 4 and r % 2 else 1
            terms.append((r * r / 2, 0 if at_zero else r, sign))
        n += 1
    return PuiseuxSeries.from_terms(profile, trunc, terms)


def _odd_product(profile, trunc, scale):
    """(y^(s/2) - y^(-s/2)) prod_l (1 - q^l y^s)(1 - q^l y^-s)."""
    s = scale
    out = PuiseuxSeries.from_terms(profile, trunc, [(0, Fraction(s, 2), 1), (0, Fraction(-s, 2), -1)])
    top = trunc // profile.Nq
    one = PuiseuxSeries.one(profile, trunc)
    for l in range(1, top + 1):
        for e in (s, -s):
            out = out * (one - PuiseuxSeries.monomial(profile, trunc, l, e))
    return out


def _euler(profile, trunc):
    out = PuiseuxSeries.one(profile, trunc)
    one = PuiseuxSeries.one(profile, trunc)
    for l in range(1, trunc // profile.Nq + 1):
        out = out * (one - PuiseuxSeries.monomial(profile, trunc, l, 0))
    return out


@lru_cache(maxsize=128)
def generator_expansion(name: str, trunc: int, profile: ExponentProfile | None = None) -> PuiseuxSeries:
    """Exact q,y-expansion of a generator through q^(trunc/Nq)."""
    profile = profile or ExponentProfile()
    if trunc < 0:
        raise ValidationError("truncation must be nonnegative")
    if name == "E4":
        return _eisenstein(profile, trunc, 4, 240)
    if name == "E6":
        return _eisenstein(profile, trunc, 6, -504)
    if name == "phiM1half":
        return _odd_product(profile, trunc, 1) * _euler(profile, trunc) ** (-2)
    if name == "phiM21":
        return generator_expansion("phiM1half", trunc, profile) ** 2
    if name == "phi03half":
        return (_odd_product(profile, trunc, 2) / _odd_product(profile, trunc, 1)).truncate(trunc)
    if name == "phi01":
        pad = trunc + profile.Nq
        total = PuiseuxSeries.zero(profile, pad)
        for kind in (2, 3, 4):
            ratio = _theta_even(profile, pad, kind, False) / _theta_even(profile, pad, kind, True)
            total = total + ratio * ratio
        return (total * 4).truncate(trunc)
    raise ValidationError(f"unknown generator {name!r}")


def monomials(weight: int, index) -> list[tuple]:
    """Exponent tuples (a, b, c, e, f, g) of the given weight and index."""
    index = Fraction(index)
    if index < 0 or (2 * index).denominator != 1:
        raise ValidationError(f"index {index} is not a nonnegative half-integer")
    if index > MAX_INDEX:
        raise ValidationError(f"index {index} exceeds the supported ceiling {MAX_INDEX}")
    out = []
    for f in (0, 1):
        for g in (0, 1):
            rest = index - Fraction(f, 2) - Fraction(3 * g, 2)
            if rest < 0 or rest.denominator != 1:
                continue
            for c in range(int(rest) + 1):
                e = int(rest) - c
                need = weight + 2 * c + f  # = 4a + 6b
                if need < 0:
                    continue
                for b in range(need // 6 + 1):
                    if (need - 6 * b) % 4 == 0:
                        out.append(((need - 6 * b) // 4, b, c, e, f, g))
    return sorted(out)


def monomial_key(m: tuple) -> str:
    return " ".join(f"{name}^{k}" for name, k in zip(_ORDER, m))


def compact_key(m: tuple) -> str:
    parts = [name if k == 1 else f"{name}^{k}" for name, k in zip(_ORDER, m) if k]
    return "*".join(parts) or "1"


def monomial_expansion(m: tuple, trunc: int, profile: ExponentProfile) -> PuiseuxSeries:
    out = PuiseuxSeries.one(profile, trunc)
    for name, k in zip(_ORDER, m):
        if k:
            out = out * generator_expansion(name, trunc, profile) ** k
    return out.truncate(trunc)


@dataclass
class MembershipReport:
    success: bool
    weight: int
    index: Fraction
    coordinates: dict = field(default_factory=dict)
    residual: tuple | None = None
    compared: int = 0
    message: str = ""

    def compact(self) -> dict:
        return {compact_key(m): v for m, v in self.coordinates.items()}

    def to_json(self) -> dict:
        res = None
        if self.residual is not None:
            res = {"q": str(self.residual[0]), "y": str(self.residual[1])}
        return {
            "success": self.success,
            "weight": self.weight,
            "index": [self.index.numerator, self.index.denominator],
            "coordinates": {monomial_key(m): _fmt(v) for m, v in sorted(self.coordinates.items())},
            "residual": res,
            "compared": self.compared,
            "message": self.message,
        }


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _positions(index: Fraction, trunc: int, profile: ExponentProfile):
    """(q-numerator, u-exponent) pairs where a weak form of this index may be nonzero.

    Weak forms of index t have y-exponents r in t + Z with r^2 <= 4 t n + t^2.
    """
    out = []
    base = index - (index.numerator // index.denominator)
    for n in range(trunc // profile.Nq + 1):
        bound = 4 * index * n + index * index
        m = isqrt(int(bound)) + 1
        r = base - m - 1
        while r <= m + 1:
            if r * r <= bound:
                out.append((n * profile.Nq, int(r * profile.Ly)))
            r += 1
    return out


def _entry(s: PuiseuxSeries, f: int, k: int):
    c = s.terms.get(f)
    if c is None:
        return None
    return c.numerator_poly().get(k)


def _coords(c: Cyclotomic | None, width: int) -> list[Fraction]:
    if c is None:
        return [Fraction(0)] * width
    co = list(c.coefficients())
    return co + [Fraction(0)] * (width - len(co))


def _integer_row(row: list[Fraction]) -> list[int]:
    den = 1
    for x in row:
        den = den * x.denominator // gcd(den, x.denominator)
    return [int(x * den) for x in row]


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        g = gcd(g, x)
    return [x // g for x in row] if g > 1 else row


def membership(r, weight: int | None = None, index=None, margin_factor: int = 2, margin_extra: int = 5,
               trunc: int | None = None) -> MembershipReport:
    """Express a genus result (or series) in the monomial basis of the given weight and index.

    Coefficients are matched at every position a weak Jacobi form of this
    index can occupy, and every stored coefficient elsewhere must vanish.
    Elimination runs over the integers (rows scaled to primitive vectors).
    """
    series = r.series if hasattr(r, "series") else r
    weight = r.weight if weight is None else weight
    index = Fraction(r.index if index is None else index)
    p = series.profile
    T = series.trunc if trunc is None else min(trunc, series.trunc)
    T -= T % p.Nq
    if T < 0:
        raise InsufficientTruncation("membership needs at least the q^0 coefficient")
    for c in series.terms.values():
        if not c.is_polynomial():
            return MembershipReport(False, weight, index, message="coefficients are not Laurent polynomials in y")
    basis = monomials(weight, index)
    positions = _positions(index, T, p)
    need = margin_factor * len(basis) + margin_extra
    if basis and len(positions) < need:
        raise InsufficientTruncation(
            f"{len(positions)} coefficient positions available, {need} needed for {len(basis)} monomials"
        )
    expansions = [monomial_expansion(m, T, p) for m in basis]
    extra = set()
    for f, c in series.terms.items():
        if f <= T:
            for k, a in c.numerator_poly().items():
                if not a.is_zero():
                    extra.add((f, k))
    rows_at = sorted(set(positions) | extra)
    width = max(len(Cyclotomic.zero(p.Nzeta).coefficients()), 1)
    for pos in rows_at:
        width = max(width, len(_coords(_entry(series, *pos), 0)))
    n = len(basis)

    def row_for(pos, j):
        cells = [_coords(_entry(e, *pos), width)[j] for e in expansions]
        return cells + [_coords(_entry(series, *pos), width)[j]]

    # greedy echelon form over the positions in increasing order
    pivots: list[tuple[int, list[int]]] = []
    solved = None
    for pos in rows_at:
        for j in range(width):
            row = _integer_row(row_for(pos, j))
            for col, prow in pivots:
                if row[col]:
                    a, b = prow[col], row[col]
                    row = _primitive([x * a - y * b for x, y in zip(row, prow)])
            lead = next((i for i in range(n) if row[i]), None)
            if lead is not None:
                pivots.append((lead, _primitive(row)))
        if len(pivots) == n:
            solved = pivots
            break
    if n and solved is None:
        raise InsufficientTruncation("basis monomials are not separated by the available coefficients")
    x = [Fraction(0)] * n
    if n:
        # back substitution on the echelon rows
        for col, row in sorted(solved, key=lambda t: -t[0]):
            acc = Fraction(row[n])
            for i in range(col + 1, n):
                acc -= row[i] * x[i]
            x[col] = acc / row[col]
    fit = PuiseuxSeries.zero(p, T)
    for coeff, e in zip(x, expansions):
        if coeff:
            fit = fit + e * coeff
    diff = series.truncate(T) - fit
    coords = {m: v for m, v in zip(basis, x) if v}
    compared = len(rows_at)
    if not diff.is_zero():
        f0 = min(diff.terms)
        k0 = min(diff.terms[f0].numerator_poly())
        return MembershipReport(False, weight, index, coords, (Fraction(f0, p.Nq), Fraction(k0, p.Ly)),
                                compared, "series is not in the span of the weight/index basis")
    return MembershipReport(True, weight, index, coords, None, compared)
