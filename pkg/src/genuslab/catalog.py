"""Built-in varieties and orbifold data, plus the JSON variety format."""
from __future__ import annotations

import itertools
import json
import re
from fractions import Fraction
from pathlib import Path

from .cohom import ChernData, CohomClass, Divisor, Generator, Pullback, RingDescription, Variety
from .errors import ValidationError
from .genus import DivisorRestriction, Orbifold, Sector, SectorComponent, TwistedPart

__all__ = [
    "proj_space",
    "product",
    "hypersurface",
    "blowup_p2",
    "blowup_p2_twice",
    "formal_torus",
    "kummer_datum",
    "CATALOG",
    "get",
    "keys",
    "variety_to_json",
    "variety_from_json",
    "load_variety",
    "save_variety",
    "CHARACTER_DENOMINATOR_CEILING",
]

CHARACTER_DENOMINATOR_CEILING = 60


def _series_poly(coeffs, ring, gen="h"):
    """Class sum_k coeffs[k] gen^k."""
    i = ring.generator_index(gen)
    out = CohomClass(ring)
    for k, c in enumerate(coeffs):
        if c:
            m = tuple(k if j == i else 0 for j in range(len(ring.generators)))
            out = out + CohomClass.monomial(ring, m, Fraction(c))
    return out


def _binomial_row(n, upto):
    row = [1]
    for k in range(1, upto + 1):
        row.append(row[-1] * (n - k + 1) // k)
    return row


def proj_space(n: int) -> Variety:
    """P^n with H* = Q[h]/(h^(n+1)), c = (1+h)^(n+1), integral of h^n = 1."""
    if n < 1:
        raise ValidationError("projective space needs n >= 1")
    ring = RingDescription.truncated_polynomial([Generator("h", 1, n)], n)
    c = _series_poly(_binomial_row(n + 1, n), ring)
    return Variety(f"P{n}", n, ring, ChernData(c, n), {(n,): 1})


def hypersurface(n: int, a: int) -> Variety:
    """Degree-a hypersurface in P^n on the restricted ring Q[h]/(h^n)."""
    if n < 2 or a < 1:
        raise ValidationError("hypersurface needs n >= 2 and a >= 1")
    d = n - 1
    ring = RingDescription.truncated_polynomial([Generator("h", 1, d)], d)
    # (1+h)^(n+1) / (1+a h) truncated at h^d
    top = _binomial_row(n + 1, d)
    inv = [(-a) ** k for k in range(d + 1)]
    c = [sum(top[j] * inv[k - j] for j in range(k + 1)) for k in range(d + 1)]
    return Variety(f"hypersurface({n},{a})", d, ring, ChernData(_series_poly(c, ring), d), {(d,): a})


def product(*factors: Variety) -> Variety:
    """Cartesian product of varieties without divisors or orbifold data."""
    if len(factors) < 2:
        raise ValidationError("product needs at least two factors")
    X = factors[0]
    for Y in factors[1:]:
        X = _product2(X, Y)
    return X


def _product2(X: Variety, Y: Variety) -> Variety:
    if X.divisors or Y.divisors or X.orbifold or Y.orbifold:
        raise ValidationError("products of pairs or orbifolds are not supported")
    names = [g.name for g in X.ring.generators]
    gens = list(X.ring.generators)
    for g in Y.ring.generators:
        name = g.name
        k = 2
        while name in names:
            name = f"{g.name}{k}"
            k += 1
        names.append(name)
        gens.append(Generator(name, g.degree, g.cap))
    nx = len(X.ring.generators)
    d = X.dim + Y.dim

    def caps(ring):
        return [g.cap if g.cap is not None else ring.dim // g.degree for g in ring.generators]

    basis1, basis2 = set(X.ring.basis), set(Y.ring.basis)
    relations, basis = {}, []
    ranges = [range(c + 1) for c in caps(X.ring) + caps(Y.ring)]
    gens = [Generator(g.name, g.degree, c) for g, c in zip(gens, caps(X.ring) + caps(Y.ring))]
    for m in itertools.product(*ranges):
        deg = sum(e * g.degree for e, g in zip(m, gens))
        if deg > d:
            continue
        m1, m2 = m[:nx], m[nx:]
        if m1 in basis1 and m2 in basis2:
            basis.append(m)
            continue
        comb = {}
        for b1, c1 in X.ring.reduce_monomial(m1).items():
            for b2, c2 in Y.ring.reduce_monomial(m2).items():
                comb[b1 + b2] = comb.get(b1 + b2, 0) + c1 * c2
        relations[m] = {b: c for b, c in comb.items() if c}
    ring = RingDescription.truncated_polynomial(gens, d, relations, basis)

    def lift(cls, left):
        out = {}
        for m, c in cls.coeffs.items():
            key = m + Y.ring.unit() if left else X.ring.unit() + m
            out[key] = c
        return CohomClass(ring, out)

    chern = lift(X.tangent.total, True) * lift(Y.tangent.total, False)
    integral = {}
    for m1, v1 in X.integral.items():
        for m2, v2 in Y.integral.items():
            integral[m1 + m2] = v1 * v2
    return Variety(f"{X.name}x{Y.name}", d, ring, ChernData(chern, d), integral)


def _blowup_ring(n_exc: int):
    gens = [Generator("h", 1, 2)] + [Generator(f"e{i + 1}" if n_exc > 1 else "e", 1, 2) for i in range(n_exc)]
    k = len(gens)

    def mono(**exps):
        names = [g.name for g in gens]
        m = [0] * k
        for name, e in exps.items():
            m[names.index(name)] = e
        return tuple(m)

    pt = mono(h=2)
    enames = [g.name for g in gens[1:]]
    relations = {}
    for e in enames:
        relations[mono(h=1, **{e: 1})] = {}
        relations[mono(**{e: 2})] = {pt: Fraction(-1)}
    for e, f in itertools.combinations(enames, 2):
        relations[mono(**{e: 1, f: 1})] = {}
    basis = [mono(), mono(h=1)] + [mono(**{e: 1}) for e in enames] + [pt]
    return RingDescription.truncated_polynomial(gens, 2, relations, basis), mono


def blowup_p2(discrepancy: bool = True) -> Variety:
    """P^2 blown up at a point; with the discrepancy pair D = -E when requested."""
    ring, mono = _blowup_ring(1)
    c = reduce_text(ring, {mono(): 1, mono(h=1): 3, mono(e=1): -1, mono(h=2): 4})
    divisors = [Divisor("E", CohomClass.monomial(ring, mono(e=1)), 1)] if discrepancy else []
    name = "blowup-p2" if discrepancy else "blowup-p2-smooth"
    return Variety(name, 2, ring, ChernData(c, 2), {mono(h=2): 1}, divisors)


def blowup_p2_twice(discrepancy: bool = True) -> Variety:
    """Blow up P^2 at a point, then at a point of the exceptional curve.

    The discrepancy pair is D = -E1' - 2 E2, with E1' the strict transform
    of the first exceptional curve (class e1 - e2) and E2 the second one.
    """
    ring, mono = _blowup_ring(2)
    c = reduce_text(ring, {mono(): 1, mono(h=1): 3, mono(e1=1): -1, mono(e2=1): -1, mono(h=2): 5})
    divisors = []
    if discrepancy:
        e1 = CohomClass.monomial(ring, mono(e1=1))
        e2 = CohomClass.monomial(ring, mono(e2=1))
        divisors = [Divisor("E1'", e1 - e2, 1), Divisor("E2", e2, 2)]
    name = "blowup-p2-twice" if discrepancy else "blowup-p2-twice-smooth"
    return Variety(name, 2, ring, ChernData(c, 2), {mono(h=2): 1}, divisors)


def reduce_text(ring, terms: dict) -> CohomClass:
    out = CohomClass(ring)
    for m, c in terms.items():
        out = out + CohomClass.monomial(ring, m, Fraction(c))
    return out


def formal_torus(d: int, with_top_class: bool = True) -> Variety:
    """Torus of complex dimension d: formal top ring, trivial tangent, omega pulled back from B pi."""
    if d < 1:
        raise ValidationError("torus needs d >= 1")
    ring = RingDescription.formal_top(d)
    omega = CohomClass.generator(ring, "omega")
    pulls = [Pullback("omega", omega, d)] if with_top_class else []
    return Variety(f"T{2 * d}", d, ring, ChernData.trivial(ring, d), {(1,): 1}, (), pulls)


def kummer_datum() -> Variety:
    """T^4 with the sign involution: three twisted sectors of 16 fixed points each."""
    base = formal_torus(2, with_top_class=False)
    point = RingDescription.formal_point()
    half = Fraction(1, 2)

    def points(lg, lh):
        part = TwistedPart(ChernData.trivial(point, 2), lg, lh)
        return SectorComponent(point, {(): Fraction(1)}, ChernData.trivial(point, 0), (part,), multiplicity=16)

    untwisted = SectorComponent(base.ring, dict(base.integral), ChernData.trivial(base.ring, 2))
    sectors = (
        Sector("1", "1", (untwisted,)),
        Sector("1", "s", (points(0, half),)),
        Sector("s", "1", (points(half, 0),)),
        Sector("s", "s", (points(half, half),)),
    )
    return Variety("kummer", 2, base.ring, base.tangent, dict(base.integral), orbifold=Orbifold(2, sectors))


CATALOG = {
    "p1": lambda: proj_space(1),
    "p2": lambda: proj_space(2),
    "p3": lambda: proj_space(3),
    "p1xp1": lambda: product(proj_space(1), proj_space(1)),
    "cubic-curve": lambda: hypersurface(2, 3),
    "k3-quartic": lambda: hypersurface(3, 4),
    "quintic": lambda: hypersurface(4, 5),
    "blowup-p2": lambda: blowup_p2(True),
    "blowup-p2-smooth": lambda: blowup_p2(False),
    "blowup-p2-twice": lambda: blowup_p2_twice(True),
    "torus2": lambda: formal_torus(1),
    "torus4": lambda: formal_torus(2),
    "kummer": kummer_datum,
}

_PN = re.compile(r"^p(\d+)$")


def keys():
    return sorted(CATALOG) + ["pN"]


def get(key: str) -> Variety:
    """Catalog entry by key; ``pN`` for any N >= 1 builds projective N-space."""
    if key in CATALOG:
        X = CATALOG[key]()
    else:
        m = _PN.match(key)
        if not m:
            raise ValidationError(f"unknown catalog key {key!r}; known: {', '.join(keys())}")
        X = proj_space(int(m.group(1)))
    X.meta["key"] = key
    return X


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def _frac(s) -> Fraction:
    try:
        return Fraction(s)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ValidationError(f"not a rational number: {s!r}") from None


def _fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _integral_json(ring, integral):
    return [[ring.format_monomial(m), _fmt(v)] for m, v in sorted(integral.items())]


def _integral_from(ring, items):
    return {ring.parse_monomial(m): _frac(v) for m, v in items}


def _pullbacks_json(pulls):
    return [{"name": a.name, "class": a.cls.to_text(), "halfDegree": a.half_degree} for a in pulls]


def _pullbacks_from(ring, items):
    return [Pullback(a["name"], CohomClass.from_text(ring, a["class"]), int(a["halfDegree"])) for a in items]


def variety_to_json(X: Variety) -> dict:
    out = {
        "name": X.name,
        "dimension": X.dim,
        "ring": X.ring.to_json(),
        "chern": X.tangent.total.to_text(),
        "integrate": _integral_json(X.ring, X.integral),
        "divisors": [{"name": D.name, "class": D.cls.to_text(), "delta": _fmt(D.delta)} for D in X.divisors],
        "pullbackClasses": _pullbacks_json(X.pullbacks),
    }
    if X.orbifold is not None:
        sectors = []
        for s in X.orbifold.sectors:
            comps = []
            for c in s.components:
                comps.append({
                    "ring": c.ring.to_json(),
                    "integrate": _integral_json(c.ring, c.integral),
                    "zeroPart": {"chern": c.zero_part.total.to_text(), "rank": c.zero_part.rank},
                    "twistedParts": [
                        {"chern": t.chern.total.to_text(), "rank": t.chern.rank,
                         "lambdaG": _fmt(t.lambda_g), "lambdaH": _fmt(t.lambda_h)}
                        for t in c.twisted_parts
                    ],
                    "divisorRestrictions": [
                        {"name": D.name, "eClass": D.e_class.to_text(), "epsG": _fmt(D.eps_g),
                         "epsH": _fmt(D.eps_h), "delta": _fmt(D.delta)}
                        for D in c.divisor_restrictions
                    ],
                    "restrictedPullbacks": _pullbacks_json(c.restricted_pullbacks),
                    "multiplicity": c.multiplicity,
                })
            sectors.append({"g": s.g, "h": s.h, "components": comps})
        out["sectors"] = {"groupOrder": X.orbifold.group_order, "list": sectors}
    return out


def _check_character(v: Fraction, ceiling: int) -> Fraction:
    if v.denominator > ceiling:
        raise ValidationError(f"character {v} has denominator above the ceiling {ceiling}")
    return v


def variety_from_json(data: dict, ceiling: int = CHARACTER_DENOMINATOR_CEILING) -> Variety:
    """Validated Variety from the JSON schema (klt, rank sums, character denominators)."""
    try:
        ring = RingDescription.from_json({**data["ring"], "dimension": data["ring"].get("dimension", data["dimension"])})
        d = int(data["dimension"])
        chern = ChernData(CohomClass.from_text(ring, data["chern"]), d)
        divisors = [Divisor(D["name"], CohomClass.from_text(ring, D["class"]), _frac(D["delta"]))
                    for D in data.get("divisors", [])]
        pulls = _pullbacks_from(ring, data.get("pullbackClasses", []))
        orbifold = None
        if data.get("sectors"):
            sec = data["sectors"]
            sectors = []
            for s in sec["list"]:
                comps = []
                for c in s["components"]:
                    cr = RingDescription.from_json(c["ring"])
                    zp = ChernData(CohomClass.from_text(cr, c["zeroPart"]["chern"]), int(c["zeroPart"]["rank"]))
                    tw = tuple(
                        TwistedPart(ChernData(CohomClass.from_text(cr, t["chern"]), int(t["rank"])),
                                    _check_character(_frac(t["lambdaG"]), ceiling),
                                    _check_character(_frac(t["lambdaH"]), ceiling))
                        for t in c.get("twistedParts", [])
                    )
                    dr = tuple(
                        DivisorRestriction(D["name"], CohomClass.from_text(cr, D["eClass"]),
                                           _check_character(_frac(D["epsG"]), ceiling),
                                           _check_character(_frac(D["epsH"]), ceiling), _frac(D["delta"]))
                        for D in c.get("divisorRestrictions", [])
                    )
                    comps.append(SectorComponent(cr, _integral_from(cr, c["integrate"]), zp, tw, dr,
                                                 tuple(_pullbacks_from(cr, c.get("restrictedPullbacks", []))),
                                                 int(c.get("multiplicity", 1))))
                sectors.append(Sector(str(s["g"]), str(s["h"]), tuple(comps)))
            orbifold = Orbifold(int(sec["groupOrder"]), tuple(sectors))
            orbifold.validate(d)
        return Variety(data["name"], d, ring, chern, _integral_from(ring, data["integrate"]),
                       divisors, pulls, orbifold)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"variety file does not match the schema: missing or malformed {exc}") from None


def save_variety(X: Variety, path) -> None:
    Path(path).write_text(json.dumps(variety_to_json(X), indent=2, sort_keys=True) + "\n")


def load_variety(path, ceiling: int = CHARACTER_DENOMINATOR_CEILING) -> Variety:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    return variety_from_json(data, ceiling)
