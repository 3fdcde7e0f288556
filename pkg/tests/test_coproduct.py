import random
from fractions import Fraction

import pytest

import oracles
from fuzzgen import random_case
from mulhopf import gallery
from mulhopf.algebra import flip_matrix
from mulhopf.coproduct import (
    AXIOM_ORDER,
    MULTIPLIER,
    Coproduct,
    axiom_results,
    canonical_map,
    check_fullness,
    check_pentagon,
    classify,
    coopposite,
    opposite_coproduct,
)
from mulhopf.exactlin import rank

POSITIVE = gallery.POSITIVE + ["fcyclic-3", "fcyclic-4", "s3-group-algebra", "fs3-function-algebra"]


def dense_tensors(d):
    n = d.n
    return [[t.get(k, Fraction(0)) for k in range(n * n)] for t in d.element_values()]


def as_multiplier_kind(d):
    return Coproduct(d.algebra, d.values, MULTIPLIER)


@pytest.mark.parametrize("name", ["qc2-group-algebra", "fc2-function-algebra", "sweedler-h4", "cyclic-3", "s3-group-algebra"])
def test_canonical_maps_match_defining_formulas(name):
    d = gallery.get(name).coproduct
    tensors = dense_tensors(d)
    for which in ("T1", "T2", "T3", "T4"):
        assert canonical_map(d, which).matrix.to_dense() == oracles.canonical_dense(d.algebra, tensors, which)


@pytest.mark.parametrize("name", POSITIVE)
def test_positive_gallery_is_regular(name):
    d = gallery.get(name).coproduct
    cls = classify(d)
    assert cls.is_left_MHA and cls.is_right_MHA and cls.is_regular_MHA
    assert check_pentagon(d).passed
    assert all(r.passed for r in check_fullness(d))
    n = d.n
    for which in ("T1", "T2", "T3", "T4"):
        assert canonical_map(d, which).rank == n * n


def test_group_algebra_closed_form():
    # Q[C3]: T1(u_g⊗u_h) = u_g⊗u_{gh}
    d = gallery.get("cyclic-3").coproduct
    t1 = canonical_map(d, "T1").matrix
    for g in range(3):
        for h in range(3):
            assert t1.column(g * 3 + h) == {g * 3 + (g + h) % 3: 1}


def test_multiplier_form_of_h4_agrees_with_element_form():
    elem = gallery.get("sweedler-h4").coproduct
    mult = gallery.get("sweedler-h4-multiplier-form").coproduct
    assert mult.kind == MULTIPLIER
    for which in ("T1", "T2", "T3", "T4"):
        assert canonical_map(mult, which).matrix == canonical_map(elem, which).matrix
    a, b = axiom_results(elem), axiom_results(mult)
    assert {k: v.status for k, v in a.items()} == {k: v.status for k, v in b.items()}


def test_element_and_multiplier_paths_agree_on_random_inputs():
    rng = random.Random(7)
    checked = 0
    for _ in range(30):
        _, d = random_case(rng)
        if d.kind == MULTIPLIER or not d.algebra.nondegeneracy.ok:
            continue
        m = as_multiplier_kind(d)
        a, b = axiom_results(d), axiom_results(m)
        assert {k: v.status for k, v in a.items()} == {k: v.status for k, v in b.items()}
        for which in ("T1", "T2", "T3", "T4"):
            assert canonical_map(m, which).matrix == canonical_map(d, which).matrix
        checked += 1
    assert checked >= 10


@pytest.mark.parametrize("name", ["sweedler-h4", "fcyclic-4", "s3-group-algebra", "pathological-qc2", "broken-homomorphism"])
def test_coopposite_swaps_canonical_maps(name):
    d = gallery.get(name).coproduct
    c = coopposite(d)
    f = flip_matrix(d.n)
    for mine, theirs in (("T1", "T4"), ("T2", "T3")):
        a, b = canonical_map(c, mine), canonical_map(d, theirs)
        if a.matrix is not None and b.matrix is not None:
            assert a.matrix == f @ b.matrix @ f
        assert a.bijective == b.bijective


@pytest.mark.parametrize("name", POSITIVE + gallery.NEGATIVE)
def test_opposite_algebra_swaps_sides(name):
    d = gallery.get(name).coproduct
    cls, op = classify(d), classify(opposite_coproduct(d))
    assert op.is_left_MHA == cls.is_right_MHA
    assert op.is_right_MHA == cls.is_left_MHA


def test_broken_homomorphism_witness():
    d = gallery.get("broken-homomorphism").coproduct
    res = axiom_results(d)
    failing = [k for k in AXIOM_ORDER if res[k].failed]
    assert failing == ["homomorphism"]
    w = res["homomorphism"].witness
    assert w.indices == (1, 1)
    # Δ(t·t) - Δ(t)Δ(t) = -2 t⊗t
    assert w.residual == {1 * 2 + 1: -2}


def test_broken_coassoc_witness():
    d = gallery.get("broken-coassoc").coproduct
    res = axiom_results(d)
    assert res["coassoc-left"].failed and res["coassoc-right"].failed
    for which in ("T1", "T2", "T3", "T4"):
        assert res[f"{which}-bijective"].passed
    assert res["coassoc-left"].witness.residual


def test_degenerate_product_has_annihilator():
    d = gallery.get("degenerate-product").coproduct
    res = axiom_results(d)
    assert res["nondegenerate"].failed
    w = res["nondegenerate"].witness
    assert any(w.residual.values())
    alg = d.algebra
    vec = [w.residual.get(k, 0) for k in range(alg.dimension)]
    for b in range(alg.dimension):
        e = oracles.unit(alg.dimension, b)
        assert not any(alg.multiply_coords(vec, e)) or not any(alg.multiply_coords(e, vec))


def test_zero_coproduct_is_not_bijective():
    d = gallery.get("zero-coproduct").coproduct
    res = axiom_results(d)
    for which in ("T1", "T2", "T3", "T4"):
        assert res[f"{which}-bijective"].failed
        w = res[f"{which}-bijective"].witness
        assert w is not None and w.residual


def test_pathological_qc2_fails_both_sides():
    d = gallery.get("pathological-qc2").coproduct
    cls = classify(d)
    assert not cls.is_left_MHA and not cls.is_right_MHA
    assert cls.first_left_failure == "T4-bijective"
    assert cls.first_right_failure == "T2-bijective"
    # Δ′(g) = g⊗e is still multiplicative and coassociative, and T1 is the identity
    res = axiom_results(d)
    assert res["homomorphism"].passed and res["coassoc-left"].passed
    assert canonical_map(d, "T1").matrix.is_identity()


def test_bijectivity_matches_oracle_rank():
    rng = random.Random(11)
    for _ in range(30):
        _, d = random_case(rng)
        if d.kind == MULTIPLIER or not d.algebra.nondegeneracy.ok:
            continue
        tensors = dense_tensors(d)
        for which in ("T1", "T4"):
            dense = oracles.canonical_dense(d.algebra, tensors, which)
            assert canonical_map(d, which).matrix.to_dense() == dense
            assert rank(canonical_map(d, which).matrix) == oracles.rank(dense)
