from fractions import Fraction

import pytest

import oracles
from mulhopf import gallery
from mulhopf.derive import (
    DerivationError,
    PreconditionError,
    check_antipode_identities,
    check_completion,
    check_counit_properties,
    check_flip,
    check_misc,
    complete_to_regular,
    derive_antipode,
    derive_counit_left,
    derive_counit_right,
    derive_right_side,
)
from mulhopf.exactlin import Matrix

POSITIVE = gallery.POSITIVE + ["fcyclic-2", "fcyclic-5", "s3-group-algebra", "fs3-function-algebra", "sweedler-h4-multiplier-form"]


def derived(name):
    d = gallery.get(name).coproduct
    eps = derive_counit_left(d)
    return d, eps, derive_antipode(d, eps)


def dense_delta(d):
    n = d.n
    return [[t.get(k, Fraction(0)) for k in range(n * n)] for t in d.element_values()]


def oracle_counit(d):
    """Solve (ε⊗ι)Δ(e_a) = e_a for ε by Gauss-Jordan."""
    n = d.n
    delta = dense_delta(d)
    rows = []
    for a in range(n):
        for q in range(n):
            rows.append([delta[a][p * n + q] for p in range(n)] + [Fraction(int(q == a))])
    red, piv = oracles.rref(rows)
    assert n not in piv, "no counit"
    assert len(piv) == n, "counit not unique"
    return [red[k][n] for k in range(n)]


def oracle_antipode(d, eps):
    """Solve Σ S(a1)a2 = ε(a)1 = Σ a1 S(a2) for the matrix of S."""
    n = d.n
    alg = d.algebra
    c = oracles.dense_structure(alg)
    # the unit: solve u e_i = e_i for all i
    rows = []
    for i in range(n):
        for k in range(n):
            rows.append([c[j][i][k] for j in range(n)] + [Fraction(int(k == i))])
    red, piv = oracles.rref(rows)
    one = [red[j][n] for j in range(n)]
    delta = dense_delta(d)
    # unknown X[r][p] at index r*n + p; S(e_p) = Σ_r X[r][p] e_r
    rows = []
    for a in range(n):
        for k in range(n):
            left = [Fraction(0)] * (n * n)
            right = [Fraction(0)] * (n * n)
            for pq, coef in enumerate(delta[a]):
                if not coef:
                    continue
                p, q = divmod(pq, n)
                for r in range(n):
                    left[r * n + p] += coef * c[r][q][k]
                    right[r * n + q] += coef * c[p][r][k]
            rhs = eps[a] * one[k]
            rows.append(left + [rhs])
            rows.append(right + [rhs])
    red, piv = oracles.rref(rows)
    assert n * n not in piv and len(piv) == n * n
    return [[red[r * n + p][n * n] for p in range(n)] for r in range(n)]


@pytest.mark.parametrize("name", [f"cyclic-{k}" for k in range(2, 9)] + ["qc2-group-algebra", "s3-group-algebra"])
def test_group_algebra_counit_and_antipode(name):
    d, eps, s = derived(name)
    assert eps.values == tuple(Fraction(1) for _ in range(d.n))
    table = d.algebra._table
    for g in range(d.n):
        image = s.map.column(g)
        (h, v), = image.items()
        assert v == 1
        assert table[g][h] == {0: 1}  # S(u_g) = u_{g⁻¹}


@pytest.mark.parametrize("k", range(2, 9))
def test_function_algebra_counit_and_antipode(k):
    d, eps, s = derived(f"fcyclic-{k}")
    assert eps.values == tuple(Fraction(int(i == 0)) for i in range(k))
    for i in range(k):
        assert s.map.column(i) == {(-i) % k: 1}


def test_h4_closed_forms():
    d, eps, s = derived("sweedler-h4")
    assert eps.values == (1, 1, 0, 0)
    # S(1) = 1, S(g) = g, S(x) = -gx, S(gx) = x
    assert s.map.to_dense() == Matrix.from_columns(4, [{0: 1}, {1: 1}, {3: -1}, {2: 1}]).to_dense()
    assert not s.squares_to_identity()
    assert (s.map @ s.inverse_map).is_identity()
    assert (s.inverse_map @ s.map).is_identity()
    # S′ = S⁻¹ really differs from S
    assert s.inverse_map != s.map


@pytest.mark.parametrize("name", POSITIVE)
def test_derivation_agrees_with_independent_oracles(name):
    d, eps, s = derived(name)
    if d.element_values() is None:
        pytest.skip("multiplier-valued Δ outside A⊗A")
    assert list(eps.values) == oracle_counit(d)
    assert s.map.to_dense() == oracle_antipode(d, list(eps.values))


@pytest.mark.parametrize("name", POSITIVE)
def test_full_identity_suite_passes(name):
    d, eps, s = derived(name)
    assert derive_counit_right(d).values == eps.values
    results = (
        check_counit_properties(d, eps)
        + check_antipode_identities(d, eps, s)
        + check_flip(d, s)
        + check_completion(d, s)
        + check_misc(d)
    )
    bad = [(r.name, r.detail) for r in results if not r.passed]
    assert bad == []
    uniq = next(r for r in results if r.name == "counit-uniqueness")
    assert uniq.data["kernel_dim"] == 0


@pytest.mark.parametrize("name", POSITIVE)
def test_completion_reproduces_direct_maps(name):
    from mulhopf.coproduct import canonical_map
    from mulhopf.exactlin import rank

    d, _, s = derived(name)
    cert = complete_to_regular(d, s)
    assert cert.direct_match
    assert cert.T3_matrix == canonical_map(d, "T3").matrix
    assert cert.T2_matrix == canonical_map(d, "T2").matrix
    assert rank(cert.T3_matrix) == rank(cert.T2_matrix) == d.n ** 2


@pytest.mark.parametrize("name", ["sweedler-h4", "fcyclic-3", "s3-group-algebra"])
def test_right_side_derivation_agrees(name):
    d, eps, s = derived(name)
    eps_r, s_r = derive_right_side(d)
    assert eps_r.values == eps.values
    assert s_r.map == s.map


@pytest.mark.parametrize("name", ["pathological-qc2", "zero-coproduct", "broken-coassoc", "degenerate-product"])
def test_derivation_refuses_non_mha(name):
    d = gallery.get(name).coproduct
    with pytest.raises(PreconditionError):
        derive_counit_left(d)


def test_errors_carry_a_check_name():
    d = gallery.get("broken-coassoc").coproduct
    with pytest.raises(DerivationError) as info:
        derive_counit_left(d)
    assert info.value.check
