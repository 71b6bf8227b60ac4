"""Truncated graded rings, characteristic classes and integration.

A ring is described by generators of fixed complex degree, optional
exponent caps, and a finite table rewriting non-basis monomials as linear
combinations of basis monomials.  Every monomial of degree above the ring
dimension, or above a cap, is zero.  Classes are dictionaries from basis
monomials to coefficients, where coefficients are rationals or
:class:`PuiseuxSeries`.

Multiplicative classes prod_i f(x_i) are obtained from the total Chern
class alone: with g = log(f / f(0)) and power sums p_k of the Chern roots,

    prod_i f(x_i) = f(0)^rank * exp(sum_k g_k p_k).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .arith.series import PuiseuxSeries
from .arith.xseries import XSeries, scalar_inverse, scalar_is_zero
from .errors import DegenerateRootFunction, IncompleteRingError, KltError, ValidationError

__all__ = [
    "Generator",
    "RingDescription",
    "CohomClass",
    "ChernData",
    "Divisor",
    "Pullback",
    "Variety",
    "reduce",
    "integrate",
    "power_sums",
    "genus_class_from_root_function",
    "substitute_nilpotent",
]

Monomial = tuple


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int = 1
    cap: int | None = None


_MONO_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?$")


class RingDescription:
    """Graded ring with an explicit finite basis and relation table.

    ``kind`` is one of ``truncatedPolynomial``, ``formalPoint``, ``formalTop``.
    ``relations`` maps monomials (exponent tuples) that are not basis
    elements to dictionaries {basis monomial: Fraction}.
    """

    def __init__(self, kind: str, generators, dim: int, relations: dict | None = None, basis=None):
        if kind not in ("truncatedPolynomial", "formalPoint", "formalTop"):
            raise ValidationError(f"unknown ring kind {kind!r}")
        if dim < 0:
            raise ValidationError("ring dimension must be nonnegative")
        self.kind = kind
        self.generators = tuple(generators)
        self.dim = dim
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate generator names")
        for g in self.generators:
            if g.degree < 1:
                raise ValidationError(f"generator {g.name} must have positive degree")
        self.relations = {
            tuple(m): {tuple(b): Fraction(c) for b, c in comb.items() if c != 0}
            for m, comb in (relations or {}).items()
        }
        self.basis = self._enumerate_basis()
        if basis is not None:
            declared = {tuple(b) for b in basis}
            for b in declared:
                if len(b) != len(self.generators) or self._vanishes(b):
                    raise ValidationError(f"declared basis monomial {b} vanishes in the ring")
            for m in self.basis:
                if m not in declared:
                    raise IncompleteRingError(
                        f"incomplete ring description: {self.format_monomial(m)} is neither a basis "
                        "monomial nor covered by the relation table"
                    )
        self._basis_set = frozenset(self.basis)
        for m, comb in self.relations.items():
            if m in self._basis_set or len(m) != len(self.generators):
                raise ValidationError(f"relation key {self.format_monomial(m)} is malformed")
            for b in comb:
                if b not in self._basis_set:
                    raise ValidationError(f"relation for {self.format_monomial(m)} uses non-basis monomial")
                if self.degree(b) != self.degree(m):
                    raise ValidationError(f"relation for {self.format_monomial(m)} is not homogeneous")
        self._gen_table = self._build_generator_table()
        self._reduce_cache: dict = {}
        self._product_cache: dict = {}

    # -- constructors ---------------------------------------------------
    @classmethod
    def truncated_polynomial(cls, generators, dim: int, relations: dict | None = None,
                             basis=None) -> "RingDescription":
        return cls("truncatedPolynomial", generators, dim, relations, basis)

    @classmethod
    def formal_point(cls) -> "RingDescription":
        return cls("formalPoint", (), 0)

    @classmethod
    def formal_top(cls, d: int, name: str = "omega") -> "RingDescription":
        return cls("formalTop", (Generator(name, d, 1),), d)

    # -- structure ------------------------------------------------------
    def degree(self, m: Monomial) -> int:
        return sum(e * g.degree for e, g in zip(m, self.generators))

    def _vanishes(self, m: Monomial) -> bool:
        if self.degree(m) > self.dim:
            return True
        return any(g.cap is not None and e > g.cap for e, g in zip(m, self.generators))

    def _enumerate_basis(self):
        n = len(self.generators)
        out = []

        def rec(i, cur):
            if i == n:
                m = tuple(cur)
                if m not in self.relations:
                    out.append(m)
                return
            e = 0
            while True:
                cur.append(e)
                if self._vanishes(tuple(cur) + (0,) * (n - i - 1)):
                    cur.pop()
                    break
                rec(i + 1, cur)
                cur.pop()
                e += 1

        rec(0, [])
        out.sort(key=lambda m: (self.degree(m), tuple(-e for e in m)))
        return tuple(out)

    def _build_generator_table(self):
        table = {}
        for b in self.basis:
            for i in range(len(self.generators)):
                m = tuple(e + (1 if j == i else 0) for j, e in enumerate(b))
                if self._vanishes(m):
                    table[b, i] = {}
                elif m in self._basis_set:
                    table[b, i] = {m: Fraction(1)}
                elif m in self.relations:
                    table[b, i] = self.relations[m]
                else:
                    raise IncompleteRingError(
                        f"incomplete ring description: {self.format_monomial(m)} is neither a basis "
                        "monomial nor covered by the relation table"
                    )
        return table

    def top_basis(self):
        return tuple(b for b in self.basis if self.degree(b) == self.dim)

    def unit(self) -> Monomial:
        return (0,) * len(self.generators)

    def generator_index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise ValidationError(f"unknown generator {name!r}")

    def reduce_monomial(self, m: Monomial) -> dict:
        """Normal form of an arbitrary monomial, built one generator at a time."""
        m = tuple(m)
        hit = self._reduce_cache.get(m)
        if hit is not None:
            return hit
        cur = {self.unit(): Fraction(1)}
        for i, e in enumerate(m):
            for _ in range(e):
                nxt: dict = {}
                for b, c in cur.items():
                    for b2, c2 in self._gen_table[b, i].items():
                        nxt[b2] = nxt.get(b2, 0) + c * c2
                cur = {b: c for b, c in nxt.items() if c != 0}
                if not cur:
                    break
        self._reduce_cache[m] = cur
        return cur

    def product(self, b1: Monomial, b2: Monomial) -> dict:
        key = (b1, b2)
        hit = self._product_cache.get(key)
        if hit is None:
            hit = self.reduce_monomial(tuple(x + y for x, y in zip(b1, b2)))
            self._product_cache[key] = hit
        return hit

    # -- monomial text ----------------------------------------------------
    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for e, g in zip(m, self.generators):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) or "1"

    def parse_monomial(self, s: str) -> Monomial:
        return _parse_monomial(self.generators, s)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "dimension": self.dim,
            "generators": [{"name": g.name, "degree": g.degree, "cap": g.cap} for g in self.generators],
            "basis": [self.format_monomial(b) for b in self.basis],
            "relations": [
                {
                    "monomial": self.format_monomial(m),
                    "combination": [[self.format_monomial(b), _fmt(c)] for b, c in sorted(comb.items())],
                }
                for m, comb in sorted(self.relations.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RingDescription":
        gens = [Generator(g["name"], int(g.get("degree", 1)), g.get("cap")) for g in data.get("generators", [])]
        rels = {}
        for r in data.get("relations", []):
            rels[_parse_monomial(gens, r["monomial"])] = {
                _parse_monomial(gens, b): Fraction(c) for b, c in r["combination"]
            }
        basis = None
        if "basis" in data:
            basis = [_parse_monomial(gens, b) for b in data["basis"]]
        return cls(data["kind"], gens, int(data["dimension"]), rels, basis)

    def _key(self):
        return (self.kind, self.generators, self.dim, tuple(sorted((m, tuple(sorted(c.items())))
                                                                   for m, c in self.relations.items())))

    def __eq__(self, other):
        return isinstance(other, RingDescription) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        gens = ", ".join(g.name for g in self.generators) or "-"
        return f"RingDescription({self.kind}, dim={self.dim}, gens=[{gens}], basis={len(self.basis)})"


def _parse_monomial(generators, s: str) -> Monomial:
    exps = [0] * len(generators)
    s = s.replace(" ", "")
    if s in ("", "1"):
        return tuple(exps)
    names = [g.name for g in generators]
    for tok in s.split("*"):
        mt = _MONO_RE.match(tok)
        if not mt or mt.group(1) not in names:
            raise ValidationError(f"cannot parse monomial {s!r}")
        exps[names.index(mt.group(1))] += int(mt.group(2) or 1)
    return tuple(exps)


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class CohomClass:
    """Element of a :class:`RingDescription`, stored in the monomial basis."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: RingDescription, coeffs: dict | None = None):
        self.ring = ring
        self.coeffs = {m: c for m, c in (coeffs or {}).items() if not scalar_is_zero(c)}

    @classmethod
    def constant(cls, ring, c) -> "CohomClass":
        return cls(ring, {ring.unit(): c})

    @classmethod
    def monomial(cls, ring, m, c=1) -> "CohomClass":
        if isinstance(m, str):
            m = ring.parse_monomial(m)
        return reduce(ring, {tuple(m): c})

    @classmethod
    def generator(cls, ring, name: str, c=1) -> "CohomClass":
        i = ring.generator_index(name)
        return cls.monomial(ring, tuple(1 if j == i else 0 for j in range(len(ring.generators))), c)

    @classmethod
    def from_text(cls, ring, terms) -> "CohomClass":
        """From [[monomial string, rational string], ...]."""
        return reduce(ring, _accumulate((ring.parse_monomial(m), Fraction(c)) for m, c in terms))

    def to_text(self):
        out = []
        for m in self.ring.basis:
            if m in self.coeffs:
                c = self.coeffs[m]
                if not isinstance(c, (int, Fraction)):
                    raise ValidationError("only rational classes have a text form")
                out.append([self.ring.format_monomial(m), _fmt(c)])
        return out

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant_term(self):
        return self.coeffs.get(self.ring.unit(), 0)

    def part(self, j: int) -> "CohomClass":
        return CohomClass(self.ring, {m: c for m, c in self.coeffs.items() if self.ring.degree(m) == j})

    def degree(self) -> int:
        """Highest degree carrying a nonzero coefficient (-1 for zero)."""
        return max((self.ring.degree(m) for m in self.coeffs), default=-1)

    def low_degree(self) -> int:
        return min((self.ring.degree(m) for m in self.coeffs), default=self.ring.dim + 1)

    def is_homogeneous(self) -> bool:
        return len({self.ring.degree(m) for m in self.coeffs}) <= 1

    def _coerce(self, other):
        if isinstance(other, CohomClass):
            if other.ring != self.ring:
                raise ValidationError("classes live in different rings")
            return other
        return CohomClass.constant(self.ring, other)

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.coeffs)
        for m, c in o.coeffs.items():
            out[m] = out[m] + c if m in out else c
        return CohomClass(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return CohomClass(self.ring, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CohomClass):
            if scalar_is_zero(other):
                return CohomClass(self.ring)
            return CohomClass(self.ring, {m: c * other for m, c in self.coeffs.items()})
        o = self._coerce(other)
        out: dict = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in o.coeffs.items():
                prod = self.ring.product(m1, m2)
                if not prod:
                    continue
                c = c1 * c2
                for m, k in prod.items():
                    v = c * k
                    out[m] = out[m] + v if m in out else v
        return CohomClass(self.ring, out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers of classes are not supported")
        out = CohomClass.constant(self.ring, 1)
        for _ in range(k):
            out = out * self
        return out

    def map(self, fn) -> "CohomClass":
        return CohomClass(self.ring, {m: fn(c) for m, c in self.coeffs.items()})

    def exp_nilpotent(self) -> "CohomClass":
        """exp(c) for c without a degree-0 component."""
        if self.ring.unit() in self.coeffs:
            raise ValueError("exp_nilpotent needs a class without constant term")
        out = CohomClass.constant(self.ring, 1)
        term = CohomClass.constant(self.ring, 1)
        for j in range(1, self.ring.dim + 1):
            term = term * self * Fraction(1, j)
            if term.is_zero():
                break
            out = out + term
        return out

    def __eq__(self, other):
        if not isinstance(other, CohomClass):
            other = CohomClass.constant(self.ring, other)
        if other.ring != self.ring:
            return False
        for m in set(self.coeffs) | set(other.coeffs):
            a = self.coeffs.get(m, 0)
            b = other.coeffs.get(m, 0)
            if isinstance(a, PuiseuxSeries) or isinstance(b, PuiseuxSeries):
                if not (a - b).is_zero():
                    return False
            elif a != b:
                return False
        return True

    __hash__ = None

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({self.coeffs[m]})*{self.ring.format_monomial(m)}"
                          for m in self.ring.basis if m in self.coeffs)


def _accumulate(pairs) -> dict:
    out: dict = {}
    for m, c in pairs:
        out[m] = out[m] + c if m in out else c
    return out


def reduce(ring: RingDescription, terms: dict) -> CohomClass:
    """Rewrite {monomial: coefficient} in the basis of ``ring``."""
    out: dict = {}
    for m, c in terms.items():
        if scalar_is_zero(c):
            continue
        for b, k in ring.reduce_monomial(tuple(m)).items():
            v = c * k
            out[b] = out[b] + v if b in out else v
    return CohomClass(ring, out)


@dataclass(frozen=True)
class ChernData:
    """Total Chern class of a bundle of the given rank."""

    total: CohomClass
    rank: int

    def __post_init__(self):
        c = self.total
        if c.constant_term() != 1:
            raise ValidationError("total Chern class must have constant term 1")
        for m, v in c.coeffs.items():
            if not isinstance(v, (int, Fraction)):
                raise ValidationError("Chern classes must have rational coefficients")
        if c.degree() > self.rank:
            raise ValidationError(f"Chern class has a component above the rank {self.rank}")
        if self.rank < 0:
            raise ValidationError("rank must be nonnegative")

    @classmethod
    def trivial(cls, ring, rank: int) -> "ChernData":
        return cls(CohomClass.constant(ring, 1), rank)

    @property
    def ring(self):
        return self.total.ring

    def c(self, j: int) -> CohomClass:
        return self.total.part(j)

    def c1(self) -> CohomClass:
        return self.c(1)


def power_sums(chern: ChernData, upto: int) -> list:
    """[p_1, ..., p_upto] of the Chern roots from Newton's identities."""
    ring = chern.ring
    e = [CohomClass.constant(ring, 1)] + [chern.c(j) for j in range(1, upto + 1)]
    p: list = [None]
    for k in range(1, upto + 1):
        acc = e[k] * ((-1) ** (k - 1) * k)
        for i in range(1, k):
            acc = acc + e[i] * p[k - i] * ((-1) ** (i - 1))
        p.append(acc)
    return p[1:]


def genus_class_from_root_function(f: XSeries, chern: ChernData) -> CohomClass:
    """prod_i f(x_i) over the Chern roots x_i of ``chern``."""
    ring = chern.ring
    d = ring.dim
    if f.order < min(d, chern.rank) and chern.rank > 0 and d > 0:
        raise ValidationError(f"root function known only through x^{f.order}, ring dimension {d}")
    f0 = f[0]
    if scalar_is_zero(f0):
        raise DegenerateRootFunction("degenerate root function: f(0) = 0")
    try:
        inv0 = scalar_inverse(f0)
    except Exception as exc:
        raise DegenerateRootFunction(f"degenerate root function: f(0) not invertible ({exc})") from None
    n = min(f.order, d)
    unit = f * inv0
    unit = XSeries([1] + list(unit.coeffs[1: n + 1]))
    g = unit.log1()
    s = CohomClass(ring)
    if n > 0:
        for k, pk in enumerate(power_sums(chern, n), start=1):
            if scalar_is_zero(g[k]) or pk.is_zero():
                continue
            s = s + pk * g[k]
    lead = f0 ** chern.rank if chern.rank else 1
    return s.exp_nilpotent() * lead


def substitute_nilpotent(f: XSeries, c: CohomClass) -> CohomClass:
    """sum_k f_k c^k for a class c without constant term."""
    ring = c.ring
    if ring.unit() in c.coeffs:
        raise ValueError("substitution needs a nilpotent class")
    out = CohomClass.constant(ring, f[0])
    power = CohomClass.constant(ring, 1)
    for k in range(1, min(f.order, ring.dim) + 1):
        power = power * c
        if power.is_zero():
            break
        if not scalar_is_zero(f[k]):
            out = out + power * f[k]
    return out


@dataclass(frozen=True)
class Divisor:
    """Component D_k of the boundary divisor D = -sum delta_k D_k."""

    name: str
    cls: CohomClass
    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "delta", Fraction(self.delta))


@dataclass(frozen=True)
class Pullback:
    """Pulled-back class f*(alpha) of complex degree ``half_degree``."""

    name: str
    cls: CohomClass
    half_degree: int


def integrate(ring: RingDescription, integral: dict, c: CohomClass):
    """Top-degree pairing; returns 0 when c has no top-degree component."""
    total = 0
    for m, v in integral.items():
        coeff = c.coeffs.get(m)
        if coeff is None or v == 0:
            continue
        total = total + coeff * v
    return total


@dataclass
class Variety:
    name: str
    dim: int
    ring: RingDescription
    tangent: ChernData
    integral: dict
    divisors: tuple = ()
    pullbacks: tuple = ()
    orbifold: object = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.integral = {tuple(m): Fraction(v) for m, v in self.integral.items()}
        self.divisors = tuple(self.divisors)
        self.pullbacks = tuple(self.pullbacks)
        self.validate()

    def validate(self):
        if self.ring.dim != self.dim:
            raise ValidationError(f"{self.name}: ring dimension {self.ring.dim} differs from {self.dim}")
        top = set(self.ring.top_basis())
        for m in self.integral:
            if m not in top:
                raise ValidationError(f"{self.name}: integration is defined on a non-top monomial")
        if self.tangent.ring != self.ring or self.tangent.rank != self.dim:
            raise ValidationError(f"{self.name}: tangent Chern data must have rank {self.dim} in the variety ring")
        names = set()
        for D in self.divisors:
            if D.delta <= -1:
                raise KltError(f"not Kawamata log-terminal: divisor {D.name} has delta = {D.delta} <= -1")
            if D.cls.ring != self.ring or D.cls.constant_term() != 0:
                raise ValidationError(f"{self.name}: divisor {D.name} must be a class without constant term")
            names.add(D.name)
        for a in self.pullbacks:
            if not a.cls.is_homogeneous():
                raise ValidationError(f"pullback class {a.name} is not homogeneous")
            if not a.cls.is_zero() and a.cls.degree() != a.half_degree:
                raise ValidationError(f"pullback class {a.name} has degree {a.cls.degree()}, not {a.half_degree}")
            names.add(a.name)

    def integrate(self, c: CohomClass):
        return integrate(self.ring, self.integral, c)

    def pullback(self, name: str) -> Pullback:
        for a in self.pullbacks:
            if a.name == name:
                return a
        raise ValidationError(f"{self.name}: no pullback class named {name!r}")
