import json
from fractions import Fraction

import pytest

from genuslab import catalog
from genuslab.cohom import CohomClass
from genuslab.errors import KltError, ValidationError
from genuslab.genus import elliptic_genus, specialize

SMOOTH = ["p1", "p2", "p3", "p1xp1", "cubic-curve", "k3-quartic", "quintic", "blowup-p2-smooth", "torus2", "torus4"]


def test_projective_plane_data():
    X = catalog.get("p2")
    h = CohomClass.generator(X.ring, "h")
    one = CohomClass.constant(X.ring, 1)
    assert X.tangent.total == one + h * 3 + h * h * 3
    assert X.integrate(h * h) == 1


def test_quartic_model():
    X = catalog.hypersurface(3, 4)
    h = CohomClass.generator(X.ring, "h")
    assert X.tangent.total == CohomClass.constant(X.ring, 1) + h * h * 6
    assert X.integrate(X.tangent.c(2)) == 24


def test_quintic_model():
    X = catalog.get("quintic")
    h = CohomClass.generator(X.ring, "h")
    assert X.integrate(h ** 3) == 5
    assert X.tangent.c1().is_zero()
    assert X.integrate(X.tangent.c(3)) == -200


def test_blowup_data():
    X = catalog.blowup_p2()
    ring = X.ring
    assert [ring.format_monomial(b) for b in ring.basis] == ["1", "h", "e", "h^2"]
    h, e = CohomClass.generator(ring, "h"), CohomClass.generator(ring, "e")
    assert X.tangent.c1() == h * 3 - e
    assert X.integrate(X.tangent.c(2)) == 4
    assert X.integrate(e * e) == -1
    assert [(D.name, D.delta) for D in X.divisors] == [("E", 1)]


def test_pn_keys():
    assert catalog.get("p5").dim == 5
    with pytest.raises(ValidationError):
        catalog.get("not-a-variety")


@pytest.mark.parametrize("key", SMOOTH + ["kummer", "blowup-p2", "blowup-p2-twice"])
def test_json_round_trip(key, tmp_path):
    X = catalog.get(key)
    path = tmp_path / f"{key}.json"
    catalog.save_variety(X, path)
    Y = catalog.load_variety(path)
    assert catalog.variety_to_json(Y) == catalog.variety_to_json(X)


def test_klt_boundary_in_file(tmp_path):
    data = catalog.variety_to_json(catalog.get("blowup-p2"))
    data["divisors"][0]["delta"] = "-1"
    with pytest.raises(KltError):
        catalog.variety_from_json(data)


def test_sector_rank_mismatch_in_file():
    data = catalog.variety_to_json(catalog.get("kummer"))
    data["sectors"]["list"][1]["components"][0]["twistedParts"][0]["rank"] = 1
    data["sectors"]["list"][1]["components"][0]["twistedParts"][0]["chern"] = [["1", "1"]]
    with pytest.raises(ValidationError):
        catalog.variety_from_json(data)


def test_character_denominator_ceiling():
    data = catalog.variety_to_json(catalog.get("kummer"))
    data["sectors"]["list"][1]["components"][0]["twistedParts"][0]["lambdaH"] = "1/61"
    with pytest.raises(ValidationError):
        catalog.variety_from_json(data)
    assert catalog.variety_from_json(data, ceiling=61).orbifold is not None


def test_malformed_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ValidationError):
        catalog.load_variety(path)
    path.write_text(json.dumps({"name": "x"}))
    with pytest.raises(ValidationError):
        catalog.load_variety(path)


@pytest.mark.parametrize("key", SMOOTH)
def test_euler_specialization_is_top_chern_number(key):
    X = catalog.get(key)
    r = elliptic_genus(X, qorder=0)
    assert specialize(r, "euler") == X.integrate(X.tangent.c(X.dim))


@pytest.mark.parametrize("key, euler", [("blowup-p2", 3), ("blowup-p2-twice", 3), ("kummer", 24)])
def test_euler_of_pairs_and_orbifolds(key, euler):
    assert specialize(elliptic_genus(catalog.get(key), qorder=0), "euler") == euler


def test_elliptic_curve_genus_vanishes():
    assert elliptic_genus(catalog.get("cubic-curve")).series.is_zero()


def test_product_requires_plain_factors():
    with pytest.raises(ValidationError):
        catalog.product(catalog.get("p1"), catalog.get("blowup-p2"))


def test_product_integral():
    X = catalog.product(catalog.get("p1"), catalog.get("p2"))
    assert X.dim == 3
    assert X.integrate(X.tangent.c(3)) == 6
    assert sum(X.integral.values()) == Fraction(1)
