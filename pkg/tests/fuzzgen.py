"""Random small associative algebras with random or transported coproducts."""
from __future__ import annotations

import random
from fractions import Fraction

from mulhopf.algebra import FiniteAlgebra
from mulhopf.coproduct import MULTIPLIER, Coproduct
from mulhopf.exactlin import Matrix, invert
from mulhopf.gallery import cyclic_table, sweedler_h4


def _group(table):
    n = len(table)
    prod = {(i, j, table[i][j]): 1 for i in range(n) for j in range(n)}
    return prod, [{(i, i): 1} for i in range(n)], [{(i, j): 1 for i in range(n) for j in range(n) if table[i][j] == k} for k in range(n)]


def _klein():
    return [[i ^ j for j in range(4)] for i in range(4)]


def catalogue():
    """(name, dim, product, genuine coproducts) for algebras of dimension 2 to 4."""
    out = []
    for table, nm in ((cyclic_table(2), "C2"), (cyclic_table(3), "C3"), (cyclic_table(4), "C4"), (_klein(), "V4")):
        prod, grouplike, _ = _group(table)
        n = len(table)
        out.append((f"Q[{nm}]", n, prod, [grouplike]))
        # the function algebra of the same group
        fprod = {(i, i, i): 1 for i in range(n)}
        _, _, fcop = _group(table)
        out.append((f"F({nm})", n, fprod, [fcop]))
    h4 = sweedler_h4()
    out.append(("H4", 4, dict(h4.algebra.structure_constants), [_h4_pairs()]))
    for k in (2, 3, 4):
        prod = {(i, j, i + j): 1 for i in range(k) for j in range(k) if i + j < k}
        out.append((f"Q[t]/t^{k}", k, prod, []))
    # upper triangular 2x2: e11, e12, e22
    out.append(("UT2", 3, {(0, 0, 0): 1, (0, 1, 1): 1, (1, 2, 1): 1, (2, 2, 2): 1}, []))
    # 2x2 matrices: e11, e12, e21, e22
    mat = {}
    for a in range(2):
        for b in range(2):
            for c in range(2):
                mat[(2 * a + b, 2 * b + c, 2 * a + c)] = 1
    out.append(("M2", 4, mat, []))
    out.append(("zero-2", 2, {}, []))
    out.append(("tQ[t]/t^3", 2, {(0, 0, 1): 1}, []))
    out.append(("Q+zero", 2, {(0, 0, 0): 1}, []))
    return out


def _h4_pairs():
    h = sweedler_h4()
    n = h.n
    return [{divmod(pq, n): c for pq, c in t.items()} for t in h.element_values()]


def random_basis_change(n: int, rng: random.Random) -> tuple[Matrix, Matrix]:
    """A random unimodular integer matrix and its inverse (a product of elementary moves)."""
    dense = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(rng.randint(1, 2 * n)):
        i, j = rng.sample(range(n), 2)
        f = rng.choice((1, -1, 2))
        dense[i] = [a + f * b for a, b in zip(dense[i], dense[j])]
    if rng.random() < 0.5:
        rng.shuffle(dense)
    p = Matrix.from_dense(dense)
    return p, invert(p)


def transport(n: int, product: dict, tensors: list, p: Matrix, pinv: Matrix):
    """Rewrite structure constants and Δ in the basis f_i = Σ_k p[k, i] e_k."""
    alg = FiniteAlgebra(n, product, check=False)
    new_prod = {}
    cols = [p.column(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            img = pinv.apply(alg.multiply_sparse(cols[i], cols[j]))
            for k, c in img.items():
                new_prod[(i, j, k)] = c
    new_tensors = []
    for i in range(n):
        acc: dict = {}
        for k, ck in cols[i].items():
            for (a, b), v in tensors[k].items():
                for x, px in pinv.column(a).items():
                    for y, py in pinv.column(b).items():
                        acc[(x, y)] = acc.get((x, y), 0) + ck * v * px * py
        new_tensors.append({key: v for key, v in acc.items() if v})
    return new_prod, new_tensors


def random_tensors(n: int, rng: random.Random) -> list:
    out = []
    for _ in range(n):
        t = {}
        for _ in range(rng.randint(0, 3)):
            t[(rng.randrange(n), rng.randrange(n))] = Fraction(rng.choice((1, -1, 2, 1, -2)), rng.choice((1, 1, 2)))
        out.append(t)
    return out


def random_case(rng: random.Random) -> tuple[str, Coproduct]:
    cat = catalogue()
    name, n, product, genuine = rng.choice(cat)
    mode = rng.random()
    if genuine and mode < 0.45:
        tensors = [dict(t) for t in rng.choice(genuine)]
        label = "genuine"
    elif genuine and mode < 0.6:
        tensors = [dict(t) for t in rng.choice(genuine)]
        i = rng.randrange(n)
        key = (rng.randrange(n), rng.randrange(n))
        tensors[i][key] = tensors[i].get(key, 0) + rng.choice((1, -1))
        label = "perturbed"
    else:
        tensors = random_tensors(n, rng)
        label = "random"
    if rng.random() < 0.7:
        p, pinv = random_basis_change(n, rng)
        product, tensors = transport(n, product, tensors, p, pinv)
    alg = FiniteAlgebra(n, product, name=f"{name}~")
    d = Coproduct.from_tensors(alg, tensors)
    if rng.random() < 0.1:
        d = Coproduct(alg, d.values, MULTIPLIER, verify=False)
    return f"{name}/{label}", d


def audit(label: str, report) -> list[str]:
    """Invariant violations in one pipeline report (empty when everything holds).

    Every failing entry must carry a concrete witness, and an input classified
    as a left multiplier Hopf algebra must pass the whole derivation suite.
    A genuine coproduct transported along a basis change must stay regular.
    """
    problems = []
    for e in report.entries:
        r = e.result
        if r.failed and (r.witness is None or not (r.witness.indices or r.witness.residual)):
            problems.append(f"{label}: {r.name} failed without a witness")
    cls = report.classification
    if cls["is_left_MHA"]:
        bad = [e.result.name for e in report.entries if e.section in ("structure", "derivation", "misc") and not e.result.passed]
        if bad:
            problems.append(f"{label}: left MHA but {bad} did not pass")
    if label.endswith("/genuine") and not cls["is_regular_MHA"]:
        problems.append(f"{label}: transported genuine coproduct is not regular")
    return problems
