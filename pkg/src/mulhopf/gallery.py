"""Built-in example instances, positive and negative."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Sequence

from .algebra import FiniteAlgebra
from .coproduct import Coproduct


@dataclass(frozen=True)
class Instance:
    name: str
    coproduct: Coproduct
    expected: str

    @property
    def algebra(self) -> FiniteAlgebra:
        return self.coproduct.algebra


def group_algebra(table: Sequence[Sequence[int]], labels: Sequence[str] | None = None, name: str = "Q[G]") -> Coproduct:
    """Q[G] with group-like coproduct Δ(u_g) = u_g ⊗ u_g."""
    n = len(table)
    product = {(i, j, table[i][j]): 1 for i in range(n) for j in range(n)}
    alg = FiniteAlgebra(n, product, labels, name=name)
    return Coproduct.from_tensors(alg, [{(i, i): 1} for i in range(n)])


def function_algebra(table: Sequence[Sequence[int]], labels: Sequence[str] | None = None, name: str = "F(G)") -> Coproduct:
    """Functions on a finite set with Δ(δ_k) = Σ_{i*j=k} δ_i ⊗ δ_j.

    ``table`` need not be a group table; a non-associative quasigroup gives
    a coproduct with bijective canonical maps that fails coassociativity.
    """
    n = len(table)
    alg = FiniteAlgebra(n, {(i, i, i): 1 for i in range(n)}, labels, name=name)
    tensors: list[dict] = [{} for _ in range(n)]
    for i in range(n):
        for j in range(n):
            tensors[table[i][j]][(i, j)] = 1
    return Coproduct.from_tensors(alg, tensors)


def cyclic_table(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def symmetric3_table() -> tuple[list[list[int]], list[str]]:
    from itertools import permutations

    perms = sorted(permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms]
    labels = ["".join(map(str, p)) for p in perms]
    return table, labels


def sweedler_h4() -> Coproduct:
    """Sweedler's 4-dimensional Hopf algebra: g² = 1, x² = 0, xg = -gx."""
    # basis 0:1 1:g 2:x 3:gx
    product = {
        (0, 0, 0): 1, (0, 1, 1): 1, (0, 2, 2): 1, (0, 3, 3): 1,
        (1, 0, 1): 1, (1, 1, 0): 1, (1, 2, 3): 1, (1, 3, 2): 1,
        (2, 0, 2): 1, (2, 1, 3): -1,
        (3, 0, 3): 1, (3, 1, 2): -1,
    }
    alg = FiniteAlgebra(4, product, ["1", "g", "x", "gx"], name="H4")
    tensors = [
        {(0, 0): 1},
        {(1, 1): 1},
        {(2, 0): 1, (1, 2): 1},  # x⊗1 + g⊗x
        {(3, 1): 1, (0, 3): 1},  # gx⊗g + 1⊗gx
    ]
    return Coproduct.from_tensors(alg, tensors)


def dual_numbers_primitive() -> Coproduct:
    """Q[t]/(t²) with Δ(t) = t⊗1 + 1⊗t, which is not multiplicative."""
    alg = FiniteAlgebra(2, {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1}, ["1", "t"], name="Q[t]/(t^2)")
    return Coproduct.from_tensors(alg, [{(0, 0): 1}, {(1, 0): 1, (0, 1): 1}])


def degenerate_product() -> Coproduct:
    alg = FiniteAlgebra(1, {}, ["u"], name="zero-product")
    return Coproduct.from_tensors(alg, [{(0, 0): 1}])


def zero_coproduct() -> Coproduct:
    cop = group_algebra(cyclic_table(2), ["e", "g"], name="Q[C2]")
    return Coproduct.from_tensors(cop.algebra, [{}, {}])


def pathological_qc2() -> Coproduct:
    """Q[C2] with Δ′(e) = e⊗e, Δ′(g) = g⊗e."""
    cop = group_algebra(cyclic_table(2), ["e", "g"], name="Q[C2]")
    return Coproduct.from_tensors(cop.algebra, [{(0, 0): 1}, {(1, 0): 1}])


def quasigroup3_table() -> list[list[int]]:
    # x*y = -x-y mod 3: a Latin square that is not associative
    return [[(-i - j) % 3 for j in range(3)] for i in range(3)]


def h4_multiplier_form() -> Coproduct:
    cop = sweedler_h4()
    return Coproduct(cop.algebra, cop.values, "multiplier")


_FIXED: dict[str, tuple[Callable[[], Coproduct], str]] = {
    "qc2-group-algebra": (lambda: group_algebra(cyclic_table(2), ["e", "g"], "Q[C2]"), "regular MHA"),
    "fc2-function-algebra": (lambda: function_algebra(cyclic_table(2), ["d0", "d1"], "F(C2)"), "regular MHA"),
    "sweedler-h4": (sweedler_h4, "regular MHA (S∘S ≠ id)"),
    "sweedler-h4-multiplier-form": (h4_multiplier_form, "regular MHA (multiplier-valued encoding)"),
    "s3-group-algebra": (
        lambda: group_algebra(*symmetric3_table(), name="Q[S3]"),
        "regular MHA",
    ),
    "fs3-function-algebra": (
        lambda: function_algebra(*symmetric3_table(), name="F(S3)"),
        "regular MHA",
    ),
    "broken-coassoc": (
        lambda: function_algebra(quasigroup3_table(), ["q0", "q1", "q2"], "F(Q3)"),
        "fails coassoc-left",
    ),
    "pathological-qc2": (pathological_qc2, "fails T4-bijective"),
    "broken-homomorphism": (dual_numbers_primitive, "fails homomorphism"),
    "degenerate-product": (degenerate_product, "fails nondegenerate"),
    "zero-coproduct": (zero_coproduct, "fails T1-bijective"),
}

_CYCLIC = re.compile(r"^(f?)cyclic-(\d+)$")


def names() -> list[str]:
    out = list(_FIXED)
    out.insert(2, "cyclic-n")
    out.insert(3, "fcyclic-n")
    return out


def listing() -> list[tuple[str, str]]:
    rows = []
    for name in names():
        if name == "cyclic-n":
            rows.append(("cyclic-<n>", "regular MHA (Q[C_n], group-like Δ)"))
        elif name == "fcyclic-n":
            rows.append(("fcyclic-<n>", "regular MHA (F(C_n))"))
        else:
            rows.append((name, _FIXED[name][1]))
    return rows


def get(name: str) -> Instance:
    match = _CYCLIC.match(name)
    if match:
        order = int(match.group(2))
        if order < 1:
            raise KeyError(name)
        labels = ["e"] + [f"g{k}" for k in range(1, order)]
        if match.group(1):
            cop = function_algebra(cyclic_table(order), [f"d{k}" for k in range(order)], f"F(C{order})")
        else:
            cop = group_algebra(cyclic_table(order), labels, f"Q[C{order}]")
        return Instance(name, cop, "regular MHA")
    if name not in _FIXED:
        raise KeyError(name)
    builder, expected = _FIXED[name]
    return Instance(name, builder(), expected)


POSITIVE = ["qc2-group-algebra", "fc2-function-algebra", "sweedler-h4"] + [f"cyclic-{n}" for n in range(2, 9)]
NEGATIVE = ["broken-homomorphism", "broken-coassoc", "degenerate-product", "zero-coproduct", "pathological-qc2"]
