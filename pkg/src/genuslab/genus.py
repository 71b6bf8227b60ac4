"""Two-variable elliptic genera of varieties, pairs and orbifolds.

Two conventions are available for the per-root factor of the tangent bundle:

``eq2``
    x * theta(x/2 pi i - z) / theta(x/2 pi i).  Genera are weak Jacobi
    forms of weight 0 and index d/2 when c_1 = 0, and the q^0 term is
    y^(-d/2) chi_{-y}.
``normalized``
    (x/2 pi i) theta(x/2 pi i - z) theta'(0) / (theta(-z) theta(x/2 pi i)),
    the root function with constant term 1.  It differs from ``eq2`` by the
    factor theta'(0) / (2 pi i theta(-z)) per root.

Orbifold sector factors are built in the ``eq2`` normalization; in the
``normalized`` convention the whole sum is multiplied by the same
per-root factor raised to the power d, so every identity between the two
sides of a McKay or K-equivalence check holds in either convention.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .arith.cyclotomic import Cyclotomic, root_of_unity
from .arith.series import ExponentProfile, PuiseuxSeries
from .arith.xseries import XSeries
from .arith.yfrac import YFraction
from .cohom import (
    ChernData,
    CohomClass,
    RingDescription,
    Variety,
    genus_class_from_root_function,
    integrate,
    substitute_nilpotent,
)
from .errors import InsufficientTruncation, KltError, ValidationError
from .theta import INV_2PI_I, X, ThetaArg, theta_quotient

__all__ = [
    "CONVENTIONS",
    "SectorComponent",
    "TwistedPart",
    "DivisorRestriction",
    "Sector",
    "Orbifold",
    "TorsionTable",
    "GenusResult",
    "CheckReport",
    "eq2_root",
    "normalized_root",
    "twisted_root",
    "divisor_factor",
    "normalization_factor",
    "profile_for",
    "elliptic_class",
    "elliptic_class_pair",
    "higher_genus",
    "elliptic_genus",
    "orbifold_elliptic_genus",
    "singular_genus",
    "specialize",
    "chi_y",
    "to_eq2",
    "functional_equation_check",
]

CONVENTIONS = ("eq2", "normalized")
_TAGS = {"eq2": "eq2", "normalized": "normalized"}


# ---------------------------------------------------------------------------
# root functions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def eq2_root(profile: ExponentProfile, trunc: int, n: int) -> XSeries:
    """x theta(x/2 pi i - z) / theta(x/2 pi i) through x^n."""
    return theta_quotient([ThetaArg(0, 0, 1, True)], [ThetaArg(0, 0, 0, True)], [X], profile, trunc, n)


@lru_cache(maxsize=256)
def normalized_root(profile: ExponentProfile, trunc: int, n: int) -> XSeries:
    """(x/2 pi i) theta(x/2 pi i - z) theta'(0) / (theta(-z) theta(x/2 pi i)); constant term 1."""
    return theta_quotient(
        [ThetaArg(0, 0, 1, True)],
        [ThetaArg(0, 0, 1), ThetaArg(0, 0, 0, True)],
        [X, INV_2PI_I],
        profile,
        trunc,
        n,
        with_prime_num=1,
    )


@lru_cache(maxsize=256)
def normalization_factor(profile: ExponentProfile, trunc: int) -> PuiseuxSeries:
    """theta'(0) / (2 pi i theta(-z)), the ratio of the two per-root conventions."""
    q = theta_quotient([], [ThetaArg(0, 0, 1)], [INV_2PI_I], profile, trunc, 0, with_prime_num=1)
    return q[0]


@lru_cache(maxsize=1024)
def twisted_root(a: Fraction, b: Fraction, profile: ExponentProfile, trunc: int, n: int) -> XSeries:
    """theta(x/2 pi i + a - b tau - z) / theta(x/2 pi i + a - b tau) * y^b."""
    body = theta_quotient([ThetaArg(a, b, 1, True)], [ThetaArg(a, b, 0, True)], [], profile, trunc, n)
    if b:
        shift = profile.y_num(b)
        body = body.map(lambda s: s.mul_monomial(0, shift))
    return body


@lru_cache(maxsize=1024)
def divisor_factor(delta: Fraction, eps_g: Fraction, eps_h: Fraction, profile: ExponentProfile,
                   trunc: int, n: int) -> XSeries:
    """Boundary factor for a divisor with coefficient -delta and characters (eps_g, eps_h).

    theta(e/2 pi i + eps_g - eps_h tau - (delta+1) z) theta(-z)
    / (theta(e/2 pi i + eps_g - eps_h tau - z) theta(-(delta+1) z)) * y^(delta eps_h)
    """
    delta = Fraction(delta)
    if delta == 0:
        return XSeries.constant(PuiseuxSeries.one(profile, trunc), n)
    c = delta + 1
    body = theta_quotient(
        [ThetaArg(eps_g, eps_h, c, True), ThetaArg(0, 0, 1)],
        [ThetaArg(eps_g, eps_h, 1, True), ThetaArg(0, 0, c)],
        [],
        profile,
        trunc,
        n,
    )
    tail = delta * eps_h
    if tail:
        shift = profile.y_num(tail)
        body = body.map(lambda s: s.mul_monomial(0, shift))
    return body


# ---------------------------------------------------------------------------
# orbifold data
# ---------------------------------------------------------------------------

def _char(v) -> Fraction:
    v = Fraction(v)
    if not 0 <= v < 1:
        raise ValidationError(f"character {v} is not normalized to [0, 1)")
    return v


@dataclass(frozen=True)
class TwistedPart:
    """Eigenbundle of the fixed-locus normal data with characters (lambda_g, lambda_h)."""

    chern: ChernData
    lambda_g: Fraction
    lambda_h: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lambda_g", _char(self.lambda_g))
        object.__setattr__(self, "lambda_h", _char(self.lambda_h))


@dataclass(frozen=True)
class DivisorRestriction:
    name: str
    e_class: CohomClass
    eps_g: Fraction
    eps_h: Fraction
    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "eps_g", _char(self.eps_g))
        object.__setattr__(self, "eps_h", _char(self.eps_h))
        object.__setattr__(self, "delta", Fraction(self.delta))


@dataclass(frozen=True)
class SectorComponent:
    """One component of the common fixed locus; ``multiplicity`` counts identical copies."""

    ring: RingDescription
    integral: dict
    zero_part: ChernData
    twisted_parts: tuple = ()
    divisor_restrictions: tuple = ()
    restricted_pullbacks: tuple = ()
    multiplicity: int = 1

    def rank(self) -> int:
        return self.zero_part.rank + sum(t.chern.rank for t in self.twisted_parts)


@dataclass(frozen=True)
class Sector:
    g: str
    h: str
    components: tuple


@dataclass(frozen=True)
class Orbifold:
    group_order: int
    sectors: tuple

    def validate(self, d: int):
        if self.group_order < 1:
            raise ValidationError("group order must be positive")
        for s in self.sectors:
            for comp in s.components:
                if comp.rank() != d:
                    raise ValidationError(
                        f"sector ({s.g},{s.h}): eigenbundle ranks sum to {comp.rank()}, expected {d}"
                    )
                if comp.multiplicity < 1:
                    raise ValidationError("component multiplicity must be positive")
                for D in comp.divisor_restrictions:
                    if D.delta <= -1:
                        raise KltError(f"not Kawamata log-terminal: divisor {D.name} has delta {D.delta}")


class TorsionTable:
    """Discrete-torsion weights delta(g, h) = exp(2 pi i phase(g, h)); missing pairs weigh 1."""

    def __init__(self, phases: dict):
        self.phases = {(str(g), str(h)): Fraction(v) % 1 for (g, h), v in phases.items()}
        self.validate()

    def validate(self):
        for (g, h), v in self.phases.items():
            if g == h and v != 0:
                raise ValidationError(f"discrete torsion must satisfy delta({g},{g}) = 1")
            if (self.phase(g, h) + self.phase(h, g)) % 1 != 0:
                raise ValidationError(f"discrete torsion must satisfy delta({g},{h}) delta({h},{g}) = 1")

    def phase(self, g: str, h: str) -> Fraction:
        return self.phases.get((g, h), Fraction(0))

    def delta(self, g: str, h: str, order: int) -> Cyclotomic:
        return root_of_unity(self.phase(g, h), order)

    def inverse(self) -> "TorsionTable":
        return TorsionTable({k: -v for k, v in self.phases.items()})

    def denominators(self):
        return [v.denominator for v in self.phases.values()]

    @classmethod
    def from_json(cls, data) -> "TorsionTable":
        return cls({(e["g"], e["h"]): Fraction(e["phase"]) for e in data["entries"]})

    def to_json(self):
        return {"entries": [{"g": g, "h": h, "phase": str(v)} for (g, h), v in sorted(self.phases.items())]}


def twist(contributions: dict, table: TorsionTable | None) -> dict:
    """Multiply per-sector contributions {(g, h): series} by delta(g, h)."""
    if table is None:
        return dict(contributions)
    out = {}
    for (g, h), s in contributions.items():
        ph = table.phase(g, h)
        out[(g, h)] = s if ph == 0 else s * s.profile.root(ph)
    return out


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------

@dataclass
class GenusResult:
    series: PuiseuxSeries
    weight: int
    index: Fraction
    convention: str
    variety: str = ""
    alpha: str | None = None
    sectors: dict = field(default_factory=dict)

    @property
    def achieved_truncation(self) -> int:
        return self.series.trunc

    @property
    def dim(self) -> int:
        return int(2 * self.index)

    @property
    def convention_tag(self) -> str:
        return _TAGS[self.convention]

    def to_json(self) -> dict:
        return {
            "variety": self.variety,
            "alpha": self.alpha,
            "convention": self.convention_tag,
            "weight": self.weight,
            "index": [self.index.numerator, self.index.denominator],
            "truncation": self.series.trunc,
            "series": self.series.to_json(),
        }


# ---------------------------------------------------------------------------
# profile
# ---------------------------------------------------------------------------

def profile_for(X: Variety, torsion: TorsionTable | None = None) -> ExponentProfile:
    """Smallest profile hosting every exponent and phase the computation produces."""
    y_dens, q_dens, z_dens = [2], [8], [4]
    for D in X.divisors:
        y_dens.append(((D.delta + 1) / 2).denominator)
    if X.orbifold is not None:
        for s in X.orbifold.sectors:
            for comp in s.components:
                for t in comp.twisted_parts:
                    y_dens += [t.lambda_h.denominator, (Fraction(1, 2)).denominator]
                    q_dens.append((t.lambda_h / 2).denominator)
                    z_dens.append((t.lambda_g / 2).denominator)
                for D in comp.divisor_restrictions:
                    y_dens += [((D.delta + 1) / 2).denominator, (D.delta * D.eps_h).denominator]
                    q_dens.append((D.eps_h / 2).denominator)
                    z_dens.append((D.eps_g / 2).denominator)
    if torsion is not None:
        z_dens += torsion.denominators()
    Ly = lcm(*y_dens)
    Ly += Ly % 2
    return ExponentProfile(Ly, lcm(*q_dens), lcm(Ly, *z_dens))


# ---------------------------------------------------------------------------
# classes and genera
# ---------------------------------------------------------------------------

def _root(convention: str, profile, trunc, n):
    if convention == "eq2":
        return eq2_root(profile, trunc, n)
    if convention == "normalized":
        return normalized_root(profile, trunc, n)
    raise ValidationError(f"unknown convention {convention!r}")


def elliptic_class(X: Variety, convention: str = "eq2", profile: ExponentProfile | None = None,
                   trunc: int | None = None) -> CohomClass:
    """prod over tangent Chern roots of the chosen per-root factor."""
    profile = profile or profile_for(X)
    trunc = 3 * profile.Nq if trunc is None else trunc
    return genus_class_from_root_function(_root(convention, profile, trunc, X.dim), X.tangent)


def _divisor_classes(ring, restrictions, profile, trunc):
    out = CohomClass.constant(ring, PuiseuxSeries.one(profile, trunc))
    for name, e_class, eps_g, eps_h, delta in restrictions:
        if delta <= -1:
            raise KltError(f"not Kawamata log-terminal: divisor {name} has delta {delta}")
        if delta == 0:
            continue
        f = divisor_factor(delta, eps_g, eps_h, profile, trunc, ring.dim)
        out = out * substitute_nilpotent(f, e_class)
    return out


def elliptic_class_pair(X: Variety, convention: str = "eq2", profile: ExponentProfile | None = None,
                        trunc: int | None = None) -> CohomClass:
    """Elliptic class of the pair (X, D) with D = -sum delta_k D_k."""
    profile = profile or profile_for(X)
    trunc = 3 * profile.Nq if trunc is None else trunc
    base = elliptic_class(X, convention, profile, trunc)
    if not X.divisors:
        return base
    rest = [(D.name, D.cls, Fraction(0), Fraction(0), D.delta) for D in X.divisors]
    return base * _divisor_classes(X.ring, rest, profile, trunc)


def _as_series(v, profile, trunc) -> PuiseuxSeries:
    if isinstance(v, PuiseuxSeries):
        return v.truncate(trunc)
    return PuiseuxSeries.one(profile, trunc) * v


def higher_genus(X: Variety, cls: CohomClass, alpha: str | None = None, convention: str = "eq2",
                 trunc: int | None = None) -> GenusResult:
    """Integrate cls cup f*(alpha); alpha None means the unit class."""
    k = 0
    if alpha is not None:
        a = X.pullback(alpha)
        k = a.half_degree
        cls = cls * a.cls
    coeff = next((c for c in cls.coeffs.values() if isinstance(c, PuiseuxSeries)), None)
    profile = coeff.profile if coeff is not None else profile_for(X)
    if trunc is None:
        trunc = min((c.trunc for c in cls.coeffs.values() if isinstance(c, PuiseuxSeries)),
                    default=3 * profile.Nq)
    series = _as_series(X.integrate(cls), profile, trunc)
    return GenusResult(series, -k, Fraction(X.dim, 2), convention, X.name, alpha)


def _threads(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    try:
        return max(1, int(os.environ.get("GENUSLAB_THREADS", "1")))
    except ValueError:
        return 1


def _component_value(comp: SectorComponent, alpha, profile, trunc) -> PuiseuxSeries:
    ring = comp.ring
    n = ring.dim
    cls = genus_class_from_root_function(eq2_root(profile, trunc, n), comp.zero_part) \
        if comp.zero_part.rank else CohomClass.constant(ring, PuiseuxSeries.one(profile, trunc))
    for t in comp.twisted_parts:
        f = twisted_root(t.lambda_g, t.lambda_h, profile, trunc, n)
        cls = cls * genus_class_from_root_function(f, t.chern)
    if comp.divisor_restrictions:
        rest = [(D.name, D.e_class, D.eps_g, D.eps_h, D.delta) for D in comp.divisor_restrictions]
        cls = cls * _divisor_classes(ring, rest, profile, trunc)
        for D in comp.divisor_restrictions:
            if D.delta * D.eps_h:
                cls = cls.map(lambda s, sh=profile.y_num(D.delta * D.eps_h): s.mul_monomial(0, sh))
    if alpha is not None:
        match = [a for a in comp.restricted_pullbacks if a.name == alpha]
        if not match:
            raise ValidationError(f"sector component has no restricted pullback named {alpha!r}")
        cls = cls * match[0].cls
    v = _as_series(integrate(ring, comp.integral, cls), profile, trunc)
    return v * comp.multiplicity if comp.multiplicity != 1 else v


def orbifold_elliptic_genus(X: Variety, convention: str = "eq2", alpha: str | None = None,
                            torsion: TorsionTable | None = None, profile: ExponentProfile | None = None,
                            trunc: int | None = None, threads: int | None = None) -> GenusResult:
    """(1/|G|) sum over sectors and fixed components, optionally twisted by discrete torsion."""
    orb = X.orbifold
    if orb is None:
        raise ValidationError(f"{X.name} carries no orbifold data")
    orb.validate(X.dim)
    profile = profile or profile_for(X, torsion)
    trunc = 3 * profile.Nq if trunc is None else trunc
    jobs = [(s.g, s.h, comp) for s in orb.sectors for comp in s.components]
    workers = _threads(threads)

    def run(job):
        return _component_value(job[2], alpha, profile, trunc)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(run, jobs))
    else:
        values = [run(j) for j in jobs]
    sectors: dict = {}
    for (g, h, _), v in zip(jobs, values):
        sectors[(g, h)] = sectors[(g, h)] + v if (g, h) in sectors else v
    untwisted = dict(sectors)
    sectors = twist(sectors, torsion)
    total = PuiseuxSeries.zero(profile, trunc)
    for key in sectors:
        total = total + sectors[key]
    total = total * Fraction(1, orb.group_order)
    if convention == "normalized":
        total = total * normalization_factor(profile, trunc) ** X.dim
    elif convention != "eq2":
        raise ValidationError(f"unknown convention {convention!r}")
    k = 0
    if alpha is not None:
        for s in orb.sectors:
            for comp in s.components:
                for a in comp.restricted_pullbacks:
                    if a.name == alpha:
                        k = a.half_degree
    res = GenusResult(total, -k, Fraction(X.dim, 2), convention, X.name, alpha)
    res.sectors = {f"{g},{h}": v for (g, h), v in untwisted.items()}
    return res


def elliptic_genus(X: Variety, convention: str = "eq2", alpha: str | None = None, qorder: int = 3,
                   trunc: int | None = None, profile: ExponentProfile | None = None,
                   torsion: TorsionTable | None = None, threads: int | None = None) -> GenusResult:
    """Elliptic genus through q^qorder (or numerator ``trunc``), dispatching on the variety data."""
    profile = profile or profile_for(X, torsion)
    if trunc is None:
        trunc = qorder * profile.Nq
    if trunc < 0:
        raise ValidationError("truncation must be nonnegative")
    if X.orbifold is not None:
        return orbifold_elliptic_genus(X, convention, alpha, torsion, profile, trunc, threads)
    cls = elliptic_class_pair(X, convention, profile, trunc)
    return higher_genus(X, cls, alpha, convention, trunc)


def singular_genus(resolution: Variety, convention: str = "eq2", alpha: str | None = None,
                   qorder: int = 3, target: str | None = None) -> GenusResult:
    """Genus of a singular variety computed on a resolution carrying its discrepancy divisor."""
    res = elliptic_genus(resolution, convention, alpha, qorder)
    res.variety = target or f"singular target of {resolution.name}"
    return res


# ---------------------------------------------------------------------------
# specializations
# ---------------------------------------------------------------------------

def to_eq2(r: GenusResult) -> GenusResult:
    """Re-express a result in the eq2 convention by removing the per-root factor."""
    if r.convention == "eq2":
        return r
    p = r.series.profile
    N = normalization_factor(p, max(r.series.trunc, 0))
    s = r.series * N ** (-r.dim)
    s = s.truncate(r.series.trunc)
    return GenusResult(s, r.weight, r.index, "eq2", r.variety, r.alpha)


def chi_y(r: GenusResult) -> YFraction:
    """y^(d/2) times the q^0 coefficient of the eq2 form, i.e. chi_{-y}."""
    r = to_eq2(r)
    if r.series.trunc < 0:
        raise InsufficientTruncation("q^0 coefficient lies beyond the achieved truncation")
    p = r.series.profile
    return r.series.coefficient(0).mul_monomial(p.y_num(Fraction(r.dim, 2)))


def specialize(r: GenusResult, kind: str):
    """q0, todd, euler, signature or chi_y of a genus result (exact)."""
    if r.series.trunc < 0:
        raise InsufficientTruncation("specialization needs the q^0 coefficient")
    if kind == "q0":
        return r.series.coefficient(0)
    c = chi_y(r)
    p = r.series.profile
    if kind == "chi_y":
        return c
    if kind == "todd":
        num = c.numerator_poly()
        den = c.denominator_poly()
        if (num and min(num) < 0) or (den and min(den) < 0):
            raise ValidationError("chi_y has a pole at y = 0")
        d0 = den.get(0) if den else None
        val = num.get(0, Cyclotomic.zero(p.Nzeta))
        if d0 is not None:
            val = val / d0
        return _rational(val)
    if kind == "euler":
        return _rational(c.evaluate_exact_at_root(Fraction(0)))
    if kind == "signature":
        order = lcm(p.Nzeta, 2 * p.Ly)
        return _rational(c.evaluate_exact_at_root(Fraction(1, 2 * p.Ly), order))
    raise ValidationError(f"unknown specialization {kind!r}")


def _rational(v):
    if isinstance(v, Cyclotomic) and v.is_rational():
        return v.to_fraction()
    return v


# ---------------------------------------------------------------------------
# functional equations
# ---------------------------------------------------------------------------

@dataclass
class CheckReport:
    law: str
    passed: bool
    compared: int = 0
    discrepancy: tuple | None = None
    message: str = ""

    def to_json(self) -> dict:
        disc = None
        if self.discrepancy is not None:
            disc = {"q": str(self.discrepancy[0]), "y": str(self.discrepancy[1])}
        return {"law": self.law, "passed": self.passed, "compared": self.compared,
                "discrepancy": disc, "message": self.message}


def _coeff_table(s: PuiseuxSeries):
    """{(f, k): Cyclotomic} for Laurent-polynomial coefficients, or None."""
    out = {}
    for f, c in s.terms.items():
        if not c.is_polynomial():
            return None
        for k, a in c.numerator_poly().items():
            if not a.is_zero():
                out[(f, k)] = a
    return out


def functional_equation_check(r: GenusResult, law: str, K: int = 1) -> CheckReport:
    """Check one transformation law of a Jacobi form of index d/2 on the known window.

    ``modular1``: invariance under tau -> tau + 1.
    ``modular4``: z -> z + 1 multiplies by (-1)^d.
    ``modular3``: z -> z + tau with the index-d/2 automorphy factor.
    ``lattice``: z -> z + K tau, the same factor for period K.
    """
    s = r.series
    p = s.profile
    d = r.dim
    t = r.index
    if law == "modular1":
        if p.Nzeta % p.Nq == 0:
            diff = s.substitute("tauPlus1").first_difference(s)
            if diff is None:
                return CheckReport(law, True, len(s.terms))
            return CheckReport(law, False, len(s.terms), (Fraction(diff, p.Nq), "*"),
                               "coefficient changes under tau -> tau + 1")
        # a nonzero term q^e with e not an integer picks up the phase exp(2 pi i e) != 1
        for f in sorted(s.terms):
            if f % p.Nq:
                return CheckReport(law, False, len(s.terms), (Fraction(f, p.Nq), "*"),
                                   "fractional q-exponent is not invariant under tau -> tau + 1")
        return CheckReport(law, True, len(s.terms))
    if law == "modular4":
        lhs = s.substitute("zPlus1")
        rhs = s * (-1) ** d
        diff = lhs.first_difference(rhs)
        if diff is None:
            return CheckReport(law, True, len(s.terms))
        return CheckReport(law, False, len(s.terms), (Fraction(diff, p.Nq), "*"),
                           "z -> z + 1 does not act by (-1)^d")
    if law == "modular3":
        return _lattice_check(s, t, 1, "modular3")
    if law in ("lattice", "latticePeriod"):
        return _lattice_check(s, t, K, f"lattice:{K}")
    raise ValidationError(f"unknown law {law!r}")


def _lattice_check(s: PuiseuxSeries, t: Fraction, K: int, name: str) -> CheckReport:
    """c(F - K E, E) = (-1)^(2 t K) c(F + t K^2, E + 2 t K) for every pair inside the window.

    Each stored coefficient is paired with its image and its preimage; a
    pair is compared whenever its other end lies at or below the truncation.
    Coefficients below the lowest stored exponent are known zeros.
    """
    p = s.profile
    table = _coeff_table(s)
    if table is None:
        return CheckReport(name, False, 0, None, "coefficients are not Laurent polynomials in y")
    sign = -1 if (2 * t * K) % 2 else 1
    dq = Fraction(K * p.Nq, p.Ly)  # q-shift per unit of u-exponent
    shift_q = t * K * K * p.Nq
    shift_k = int(2 * t * K * p.Ly)
    zero = Cyclotomic.zero(p.Nzeta)
    compared = 0
    bad = []
    for (f, k), a in sorted(table.items()):
        for f2, k2 in ((f + dq * k + shift_q, k + shift_k), (f - dq * k + shift_q, k - shift_k)):
            f2 = Fraction(f2)
            if f2 > s.trunc:
                continue
            compared += 1
            if f2.denominator != 1:
                bad.append((Fraction(f, p.Nq), Fraction(k, p.Ly)))
                continue
            if not (table.get((int(f2), k2), zero) == a * sign):
                lo = min((f, k), (int(f2), k2))
                bad.append((Fraction(lo[0], p.Nq), Fraction(lo[1], p.Ly)))
    if compared == 0 and (table or s.trunc < 0):
        raise InsufficientTruncation(f"{name}: no coefficient pair falls inside the known window")
    if bad:
        return CheckReport(name, False, compared, min(bad), "automorphy factor of index d/2 violated")
    return CheckReport(name, True, compared)
