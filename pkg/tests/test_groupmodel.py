import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mulhopf import gallery
from mulhopf import groupmodel as gm
from mulhopf.derive import derive_antipode, derive_counit_left
from mulhopf.report import run_group

Z = gm.IntegerLattice(1)
Z2 = gm.IntegerLattice(2)


def pointwise(g, which, x, y, s, t):
    """Value at (s, t) of T(δx⊗δy), straight from Δ(f)(s, t) = f(st)."""
    mul = g.multiply
    if which in ("T1", "T3"):  # a = δx, b = δy: a(st) b(t)
        return int(mul(s, t) == x and t == y)
    return int(s == x and mul(s, t) == y)  # c = δx, a = δy: c(s) a(st)


points_z = st.integers(-6, 6)
points_z2 = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
coeff = st.fractions(min_value=-5, max_value=5, max_denominator=5).filter(bool)


def tensors(points):
    return st.dictionaries(st.tuples(points, points), coeff, max_size=5)


@pytest.mark.parametrize("g", [Z, Z2, gm.cyclic_group(5)], ids=["z", "z2", "c5"])
@pytest.mark.parametrize("which", ["T1", "T2", "T3", "T4"])
def test_closed_forms_match_pointwise_definition(g, which):
    fwd, _ = gm.KG_MAPS[which]
    pts = g.window(2)
    for x in pts:
        for y in pts:
            image = fwd(g, {(x, y): 1})
            grid = {(s, t) for s in pts for t in pts} | set(image)
            for s, t in grid:
                assert image.get((s, t), 0) == pointwise(g, which, x, y, s, t)


@pytest.mark.parametrize("which", ["T1", "T2", "T3", "T4"])
@settings(max_examples=60, deadline=None)
@given(t=tensors(points_z))
def test_round_trip_on_z(which, t):
    fwd, inv = gm.KG_MAPS[which]
    t = {k: Fraction(v) for k, v in t.items()}
    assert inv(Z, fwd(Z, t)) == t
    assert fwd(Z, inv(Z, t)) == t


@pytest.mark.parametrize("which", ["T1", "T4"])
@settings(max_examples=40, deadline=None)
@given(t=tensors(points_z2))
def test_round_trip_on_z2_is_componentwise(which, t):
    fwd, _ = gm.KG_MAPS[which]
    t = {k: Fraction(v) for k, v in t.items()}
    # each coordinate of Z² transforms like an independent copy of Z
    for ((s0, s1), (t0, t1)), v in t.items():
        ((u0, w0),) = fwd(Z, {(s0, t0): 1})
        ((u1, w1),) = fwd(Z, {(s1, t1): 1})
        assert fwd(Z2, {((s0, s1), (t0, t1)): v}) == {((u0, u1), (w0, w1)): v}


def test_generic_derivation_on_z_window():
    window = Z.window(10)
    r = gm.kg_derive(Z, window)
    for n in window:
        assert r.epsilon[n] == int(n == 0)
        assert r.epsilon_prime[n] == int(n == 0)
        assert r.antipode[n] == gm.FinSuppFunction.delta(-n)
        assert r.antipode_inverse[n] == gm.FinSuppFunction.delta(-n)


def test_completion_on_window():
    assert gm.kg_completion_mismatch(Z, Z.window(4)) is None
    assert gm.kg_completion_mismatch(Z2, Z2.window(2)) is None


def test_membership_verdicts_on_z():
    radius = 10
    unit = gm.kg_membership(Z, gm.unit_multiplier(), radius)
    assert not unit.member and unit.boundary_hits
    delta4 = gm.kg_membership(Z, gm.coproduct_multiplier(Z, 4), radius, pairs=True)
    assert not delta4.member
    # the support of Δ(δ4) in the window is {(s, 4 - s)} with both coordinates in [-10, 10]
    assert set(delta4.support) == {(s, 4 - s) for s in range(-6, 11)}
    elem = gm.kg_membership(Z, gm.embed_function(gm.FinSuppFunction.delta(3)), radius)
    assert elem.member and elem.support == (3,)


def test_finite_group_elements_are_members():
    c4 = gm.cyclic_group(4)
    assert gm.kg_membership(c4, gm.unit_multiplier(), 0).member
    assert gm.kg_membership(c4, gm.coproduct_multiplier(c4, 1), 0, pairs=True).member


@pytest.mark.parametrize("n", range(2, 9))
def test_cross_backend_agreement_on_cyclic_groups(n):
    g = gm.cyclic_group(n)
    generic = gm.kg_derive(g, g.window(0))
    d = gallery.get(f"fcyclic-{n}").coproduct
    eps = derive_counit_left(d)
    s = derive_antipode(d, eps)
    # the basis dictionary: group element k ↔ δ_k ↔ basis index k
    for k in g.elements():
        assert eps.values[k] == generic.epsilon[k]
        assert s.map.column(k) == dict(generic.antipode[k].support)
    rep = run_group(g, "kg", 0)
    assert {e.name: e.status for e in rep.entries}["cross-backend"] == "pass"


def test_group_algebra_model_refuses_infinite_groups():
    with pytest.raises(gm.InfiniteGroupVerdictRefused):
        gm.group_algebra_model(Z)
    d = gm.group_algebra_model(gm.cyclic_group(3))
    assert d.n == 3


def test_parse_group_spec(tmp_path):
    assert gm.parse_group_spec("z").rank == 1
    assert gm.parse_group_spec("Z^3").rank == 3
    assert gm.parse_group_spec("cyclic:6").order == 6
    path = tmp_path / "v4.json"
    path.write_text(json.dumps({"name": "V4", "order": 4, "table": [[i ^ j for j in range(4)] for i in range(4)]}))
    v4 = gm.parse_group_spec(f"cayley:{path}")
    assert v4.order == 4 and v4.name == "V4"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"table": [[0, 1], [0, 1]]}))
    for spec in ("q", "cyclic:0", "z^0", f"cayley:{bad}", f"cayley:{tmp_path / 'missing.json'}"):
        with pytest.raises(gm.GroupSpecError):
            gm.parse_group_spec(spec)


def test_cayley_group_rejects_non_groups():
    with pytest.raises(gm.GroupAxiomError):
        gm.CayleyGroup([[0, 1, 2], [1, 0, 0], [2, 0, 1]])


def test_spot_check_finds_broken_laws():
    class Broken(gm.IntegerLattice):
        def multiply(self, a, b):
            return a - b

    assert gm.spot_check_axioms(Z, Z.window(3)) is None
    assert gm.spot_check_axioms(Broken(1), Broken(1).window(3)) is not None


def test_finsupp_arithmetic():
    f = gm.FinSuppFunction({1: 2, 2: 0})
    assert f.support == {1: 2}
    g = gm.FinSuppFunction.delta(1, 3) + gm.FinSuppFunction.delta(5)
    assert (f * g).support == {1: 6}
    assert f.scale(Fraction(1, 2))(1) == 1


def test_random_tensor_is_seeded():
    pts = Z.window(3)
    a = gm.random_tensor(pts, random.Random(3))
    b = gm.random_tensor(pts, random.Random(3))
    assert a == b and a
