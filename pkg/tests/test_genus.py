from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from genuslab import catalog
from genuslab.arith.series import PuiseuxSeries
from genuslab.arith.yfrac import YFraction
from genuslab.cohom import ChernData, CohomClass, Pullback, Variety
from genuslab.errors import InsufficientTruncation, KltError, ThetaPoleError, ValidationError
from genuslab.genus import (
    GenusResult,
    Orbifold,
    Sector,
    SectorComponent,
    TorsionTable,
    TwistedPart,
    chi_y,
    divisor_factor,
    elliptic_class,
    elliptic_class_pair,
    elliptic_genus,
    functional_equation_check,
    higher_genus,
    normalization_factor,
    profile_for,
    singular_genus,
    specialize,
    to_eq2,
    twist,
    twisted_root,
)
from genuslab.jacobi import generator_expansion

HALF = Fraction(1, 2)


def poly(profile, coeffs: dict) -> YFraction:
    """Laurent polynomial in y from {y-exponent: rational}."""
    out = YFraction(profile.Nzeta)
    for e, c in coeffs.items():
        out = out + YFraction.monomial(profile.Nzeta, profile.y_num(e), c)
    return out


@pytest.fixture(scope="module")
def k3():
    return elliptic_genus(catalog.get("k3-quartic"))


@pytest.fixture(scope="module")
def kummer():
    return elliptic_genus(catalog.get("kummer"))


# -- q^0 coefficients against Hodge numbers ------------------------------------------

@pytest.mark.parametrize("key, hodge", [
    ("p1", {0: 1, 1: 1}),
    ("p2", {0: 1, 1: 1, 2: 1}),
    ("p3", {0: 1, 1: 1, 2: 1, 3: 1}),
    ("p1xp1", {0: 1, 1: 2, 2: 1}),
    ("k3-quartic", {0: 2, 1: 20, 2: 2}),
    ("blowup-p2-smooth", {0: 1, 1: 2, 2: 1}),
])
def test_chi_y_matches_hodge_numbers(key, hodge):
    # chi_{-y} = sum_p chi(Omega^p) y^p from the Hodge diamond
    r = elliptic_genus(catalog.get(key), qorder=0)
    assert chi_y(r) == poly(r.series.profile, hodge)


def test_k3_q0_row(k3):
    p = k3.series.profile
    assert k3.series.coefficient(0) == poly(p, {-1: 2, 0: 20, 1: 2})


@pytest.mark.parametrize("key, todd, euler, signature", [
    ("p1", 1, 2, 0),
    ("p2", 1, 3, 1),
    ("p3", 1, 4, 0),
    ("k3-quartic", 2, 24, -16),
    ("p1xp1", 1, 4, 0),
    ("quintic", 0, -200, 0),
])
def test_specializations(key, todd, euler, signature):
    r = elliptic_genus(catalog.get(key), qorder=0)
    assert specialize(r, "todd") == todd
    assert specialize(r, "euler") == euler
    assert specialize(r, "signature") == signature


@pytest.mark.parametrize("key", ["p2", "k3-quartic"])
def test_specializations_do_not_depend_on_convention(key):
    X = catalog.get(key)
    a = elliptic_genus(X, "eq2", qorder=1)
    b = elliptic_genus(X, "normalized", qorder=1)
    for kind in ("todd", "euler", "signature"):
        assert specialize(a, kind) == specialize(b, kind)


def test_unknown_specialization():
    with pytest.raises(ValidationError):
        specialize(elliptic_genus(catalog.get("p1"), qorder=0), "genus2")


# -- conventions ----------------------------------------------------------------

def test_normalized_root_has_constant_term_one():
    X = catalog.get("p1")
    cls = elliptic_class(X, "normalized")
    lead = cls.constant_term()
    assert lead == PuiseuxSeries.one(lead.profile, lead.trunc)


@pytest.mark.parametrize("key", ["p1", "p2", "p1xp1", "k3-quartic", "cubic-curve", "blowup-p2", "kummer"])
def test_convention_covariance(key):
    X = catalog.get(key)
    a = elliptic_genus(X, "eq2")
    b = elliptic_genus(X, "normalized")
    p = a.series.profile
    N = normalization_factor(p, a.series.trunc)
    assert a.series.agrees_with(b.series * N ** (-X.dim))
    assert to_eq2(b).series.agrees_with(a.series)


# -- pairs ------------------------------------------------------------------------

def test_empty_boundary_gives_the_plain_class():
    X = catalog.get("p2")
    assert elliptic_class_pair(X) == elliptic_class(X)


def test_zero_discrepancy_factor_is_one():
    p = profile_for(catalog.get("p2"))
    f = divisor_factor(Fraction(0), Fraction(0), Fraction(0), p, 16, 2)
    assert f.coeffs[0] == PuiseuxSeries.one(p, 16)
    assert all(c == 0 for c in f.coeffs[1:])


@pytest.mark.parametrize("key", ["blowup-p2", "blowup-p2-twice"])
def test_k_equivalent_resolutions_of_p2(key):
    a = elliptic_genus(catalog.get(key))
    b = elliptic_genus(catalog.get("p2"), profile=a.series.profile)
    assert a.series == b.series
    assert specialize(a, "todd") == specialize(b, "todd") == 1


def test_two_resolutions_agree():
    a = elliptic_genus(catalog.get("blowup-p2"))
    b = elliptic_genus(catalog.get("blowup-p2-twice"), profile=a.series.profile)
    assert a.series == b.series


def test_singular_genus_of_smooth_model_is_ordinary_genus():
    X = catalog.get("k3-quartic")
    assert singular_genus(X).series == elliptic_genus(X).series


def test_smooth_blowup_differs_from_p2():
    a = elliptic_genus(catalog.get("blowup-p2-smooth"))
    b = elliptic_genus(catalog.get("p2"), profile=a.series.profile)
    assert a.series != b.series


def test_klt_violation_in_pair():
    X = catalog.get("blowup-p2")
    D = X.divisors[0]
    with pytest.raises(KltError):
        Variety(X.name, 2, X.ring, X.tangent, X.integral, (type(D)("E", D.cls, Fraction(-3, 2)),))


# -- orbifolds --------------------------------------------------------------------

def test_trivial_group_reproduces_the_elliptic_class():
    X = catalog.get("k3-quartic")
    comp = SectorComponent(X.ring, X.integral, X.tangent)
    orb = Variety("k3-trivial-group", 2, X.ring, X.tangent, X.integral,
                  orbifold=Orbifold(1, (Sector("1", "1", (comp,)),)))
    assert elliptic_genus(orb).series == elliptic_genus(X).series


def test_kummer_equals_k3(kummer, k3):
    assert kummer.series == k3.series


def test_kummer_untwisted_sector_vanishes(kummer):
    assert kummer.sectors["1,1"].is_zero()


def test_fixed_point_factor_at_q0():
    # theta(1/2 - z) / theta(1/2) at q^0 is (y^(-1/2) + y^(1/2)) / 2
    p = profile_for(catalog.get("kummer"))
    f = twisted_root(HALF, Fraction(0), p, 0, 0)
    assert f.coeffs[0].coefficient(0) == poly(p, {-HALF: HALF, HALF: HALF})


def test_untwisted_character_pair_is_a_pole():
    point = catalog.kummer_datum().orbifold.sectors[1].components[0].ring
    comp = SectorComponent(point, {(): Fraction(1)}, ChernData.trivial(point, 0),
                           (TwistedPart(ChernData.trivial(point, 2), 0, 0),))
    T = catalog.formal_torus(2, with_top_class=False)
    X = Variety("bad", 2, T.ring, T.tangent, T.integral, orbifold=Orbifold(2, (Sector("1", "s", (comp,)),)))
    with pytest.raises(ThetaPoleError):
        elliptic_genus(X, qorder=1)


def test_character_rank_mismatch_is_rejected():
    point = catalog.kummer_datum().orbifold.sectors[1].components[0].ring
    comp = SectorComponent(point, {(): Fraction(1)}, ChernData.trivial(point, 0),
                           (TwistedPart(ChernData.trivial(point, 1), HALF, 0),))
    with pytest.raises(ValidationError):
        Orbifold(2, (Sector("1", "s", (comp,)),)).validate(2)


def test_characters_must_be_normalized():
    point = catalog.kummer_datum().orbifold.sectors[1].components[0].ring
    with pytest.raises(ValidationError):
        TwistedPart(ChernData.trivial(point, 2), Fraction(3, 2), 0)


def test_thread_count_does_not_change_the_result(kummer):
    X = catalog.get("kummer")
    for n in (1, 3):
        assert elliptic_genus(X, threads=n).series.to_json() == kummer.series.to_json()


# -- discrete torsion ---------------------------------------------------------------

def test_trivial_torsion_is_the_identity(kummer):
    r = elliptic_genus(catalog.get("kummer"), torsion=TorsionTable({}))
    assert r.series == kummer.series


def test_torsion_rejects_non_inverse_pairs():
    with pytest.raises(ValidationError):
        TorsionTable({("g", "h"): Fraction(1, 4), ("h", "g"): Fraction(1, 4)})


def test_torsion_rejects_nontrivial_diagonal():
    with pytest.raises(ValidationError):
        TorsionTable({("g", "g"): HALF})


def test_sign_torsion_changes_the_kummer_result(kummer):
    table = TorsionTable({("1", "s"): HALF, ("s", "1"): HALF})
    r = elliptic_genus(catalog.get("kummer"), torsion=table)
    assert r.series != kummer.series


def test_torsion_json_round_trip():
    t = TorsionTable({("a", "b"): Fraction(1, 3), ("b", "a"): Fraction(2, 3)})
    assert TorsionTable.from_json(t.to_json()).phases == t.phases


phase = st.sampled_from([Fraction(k, 6) for k in range(6)])


@given(st.dictionaries(st.sampled_from([("a", "b"), ("a", "c"), ("b", "c")]), phase))
def test_twisting_by_a_table_and_its_inverse_is_the_identity(phases):
    full = dict(phases)
    for (g, h), v in phases.items():
        full[(h, g)] = -v
    table = TorsionTable(full)
    p = profile_for(catalog.get("p1"))
    p = type(p)(p.Ly, p.Nq, 12)
    contrib = {(g, h): PuiseuxSeries.monomial(p, 8, 0, i, i + 1)
               for i, (g, h) in enumerate([("a", "b"), ("b", "a"), ("a", "c"), ("c", "a"), ("a", "a")])}
    once = twist(contrib, table)
    back = twist(once, table.inverse())
    assert all(back[k] == contrib[k] for k in contrib)
    assert twist(contrib, TorsionTable({})) == contrib


# -- higher genera ----------------------------------------------------------------

def test_unit_class_gives_the_ordinary_genus():
    X = catalog.get("k3-quartic")
    cls = elliptic_class(X)
    assert higher_genus(X, cls).series == elliptic_genus(X).series


def test_torus_higher_genus_is_a_multiple_of_phi_minus_one_half():
    r = elliptic_genus(catalog.get("torus2"), alpha="omega")
    assert r.weight == -1 and r.index == HALF
    phi = generator_expansion("phiM1half", r.series.trunc, r.series.profile)
    assert r.series == phi * -1


def test_torus_without_alpha_vanishes():
    assert elliptic_genus(catalog.get("torus4")).series.is_zero()


def _with_excess_pullback(X, k):
    m = [b for b in X.ring.basis if X.ring.degree(b) == min(k, X.dim)]
    cls = CohomClass(X.ring, {m[0]: 1}) if k <= X.dim else CohomClass(X.ring)
    return Variety(X.name, X.dim, X.ring, X.tangent, X.integral, X.divisors, (Pullback("alpha", cls, k),))


@pytest.mark.parametrize("key", ["p1", "p2", "k3-quartic", "torus2"])
@given(st.integers(1, 4))
def test_excess_degree_pullback_kills_the_genus(key, extra):
    X = catalog.get(key)
    r = elliptic_genus(_with_excess_pullback(X, X.dim + extra), alpha="alpha", qorder=1)
    assert r.series.is_zero()
    assert r.weight == -(X.dim + extra)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_lattice_check_is_independent_of_weight(k):
    X = catalog.get("k3-quartic")
    r = elliptic_genus(_with_excess_pullback(X, k), alpha="alpha")
    assert r.weight == -k
    assert functional_equation_check(r, "modular3").passed
    assert functional_equation_check(r, "lattice", 2).passed


# -- functional equations ----------------------------------------------------------

@pytest.mark.parametrize("key", ["cubic-curve", "k3-quartic", "quintic", "kummer", "torus2"])
def test_calabi_yau_functional_equations(key):
    alpha = "omega" if key == "torus2" else None
    r = elliptic_genus(catalog.get(key), alpha=alpha)
    for law in ("modular1", "modular3", "modular4"):
        rep = functional_equation_check(r, law)
        assert rep.passed, (law, rep)
        assert rep.compared > 0 or r.series.is_zero()


def test_p2_fails_the_elliptic_law():
    r = elliptic_genus(catalog.get("p2"))
    rep = functional_equation_check(r, "modular3")
    assert not rep.passed
    assert rep.discrepancy is not None


def test_lattice_check_needs_a_window(k3):
    short = GenusResult(k3.series.truncate(-k3.series.profile.Nq), 0, Fraction(1), "eq2")
    with pytest.raises(InsufficientTruncation):
        functional_equation_check(short, "modular3")


@pytest.mark.parametrize("law", ["modular1", "modular3", "modular4"])
def test_zero_series_passes_every_law(law):
    p = profile_for(catalog.get("p1"))
    r = GenusResult(PuiseuxSeries.zero(p, 8), 0, Fraction(1), "eq2")
    assert functional_equation_check(r, law).passed


def test_result_json_fields(k3):
    data = k3.to_json()
    assert data["index"] == [1, 1]
    assert data["weight"] == 0
    assert data["truncation"] == k3.series.trunc
    assert PuiseuxSeries.from_json(data["series"]) == k3.series
