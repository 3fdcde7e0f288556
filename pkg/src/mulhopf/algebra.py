"""Finite-dimensional algebras given by structure constants.

Basis products are ``e_i e_j = sum_k c(i, j, k) e_k``.  The tensor square
uses the lexicographic basis ``e_i (x) e_j -> i*n + j``; every matrix of a
canonical map depends on this ordering.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .exactlin import Matrix, RationalLike, as_rational, format_rational, kernel, span_rank

DEFAULT_MAX_DIM = 32


class AssociativityError(ValueError):
    def __init__(self, triple: tuple[int, int, int], message: str):
        super().__init__(message)
        self.triple = triple


class DimensionGuardError(ValueError):
    pass


class AlgebraMismatchError(ValueError):
    pass


def pair_index(i: int, j: int, n: int) -> int:
    return i * n + j


def split_pair(index: int, n: int) -> tuple[int, int]:
    return divmod(index, n)


def format_vector(vec: Mapping[int, Fraction] | Sequence[Fraction], labels: Sequence[str]) -> str:
    """Render a coordinate vector as ``2*g - 1/2*x``."""
    items = sorted(vec.items()) if isinstance(vec, Mapping) else list(enumerate(vec))
    parts = []
    for i, c in items:
        if not c:
            continue
        mag = abs(c)
        term = labels[i] if mag == 1 else f"{format_rational(mag)}*{labels[i]}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts) if parts else "0"


def _prune(rows: dict[int, dict[int, Fraction]]) -> dict[int, dict[int, Fraction]]:
    out = {}
    for r, row in rows.items():
        row = {c: v for c, v in row.items() if v}
        if row:
            out[r] = row
    return out


class FiniteAlgebra:
    """Associative algebra over Q with a chosen basis.

    Associativity is checked on every basis triple at construction unless
    ``check=False``.  Non-degeneracy is *not* required; see
    :func:`check_nondegenerate`.
    """

    def __init__(
        self,
        dimension: int,
        product: Mapping[tuple[int, int, int], RationalLike] | Sequence,
        basis_labels: Sequence[str] | None = None,
        name: str | None = None,
        *,
        check: bool = True,
    ):
        if dimension < 1:
            raise ValueError("an algebra needs dimension >= 1")
        n = dimension
        table: list[list[dict[int, Fraction]]] = [[{} for _ in range(n)] for _ in range(n)]
        items = product.items() if isinstance(product, Mapping) else product
        for (i, j, k), c in items:
            if not all(0 <= t < n for t in (i, j, k)):
                raise IndexError(f"structure constant index ({i}, {j}, {k}) outside dimension {n}")
            c = as_rational(c)
            cell = table[i][j]
            s = cell.get(k, 0) + c
            if s:
                cell[k] = s
            else:
                cell.pop(k, None)
        if basis_labels is None:
            basis_labels = [f"e{i}" for i in range(n)]
        if len(basis_labels) != n:
            raise ValueError("need one label per basis element")
        self.dimension = n
        self.name = name or "algebra"
        self.basis_labels = tuple(basis_labels)
        self._table = table
        if check:
            self._check_associativity()

    def _check_associativity(self) -> None:
        n, t = self.dimension, self._table
        for i in range(n):
            for j in range(n):
                left_ij = t[i][j]
                for l in range(n):
                    lhs: dict[int, Fraction] = {}
                    for k, c in left_ij.items():
                        for m, d in t[k][l].items():
                            lhs[m] = lhs.get(m, 0) + c * d
                    rhs: dict[int, Fraction] = {}
                    for k, c in t[j][l].items():
                        for m, d in t[i][k].items():
                            rhs[m] = rhs.get(m, 0) + c * d
                    if {m: v for m, v in lhs.items() if v} != {m: v for m, v in rhs.items() if v}:
                        lab = self.basis_labels
                        raise AssociativityError(
                            (i, j, l), f"not associative at ({lab[i]}, {lab[j]}, {lab[l]})"
                        )

    @property
    def structure_constants(self) -> dict[tuple[int, int, int], Fraction]:
        return {
            (i, j, k): c
            for i, row in enumerate(self._table)
            for j, cell in enumerate(row)
            for k, c in sorted(cell.items())
        }

    def basis_product(self, i: int, j: int) -> dict[int, Fraction]:
        return dict(self._table[i][j])

    def multiply_coords(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.dimension
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self._table[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                f = xi * yj
                for k, c in row[j].items():
                    out[k] += f * c
        return tuple(out)

    def multiply_sparse(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        t = self._table
        for i, xi in x.items():
            row = t[i]
            for j, yj in y.items():
                f = xi * yj
                for k, c in row[j].items():
                    out[k] = out.get(k, 0) + f * c
        return {k: v for k, v in out.items() if v}

    @cached_property
    def left_regular(self) -> tuple[Matrix, ...]:
        """L_i with column j equal to e_i e_j."""
        n = self.dimension
        reps = []
        for i in range(n):
            rows: dict[int, dict[int, Fraction]] = {}
            for j in range(n):
                for k, c in self._table[i][j].items():
                    rows.setdefault(k, {})[j] = c
            reps.append(Matrix._trusted(n, n, rows))
        return tuple(reps)

    @cached_property
    def right_regular(self) -> tuple[Matrix, ...]:
        """R_j with column i equal to e_i e_j."""
        n = self.dimension
        reps = []
        for j in range(n):
            rows: dict[int, dict[int, Fraction]] = {}
            for i in range(n):
                for k, c in self._table[i][j].items():
                    rows.setdefault(k, {})[i] = c
            reps.append(Matrix._trusted(n, n, rows))
        return tuple(reps)

    def left_rep(self, vec: Mapping[int, Fraction]) -> Matrix:
        """Matrix of b -> x b, built straight from the structure constants."""
        rows: dict[int, dict[int, Fraction]] = {}
        table = self._table
        for k, v in vec.items():
            for j, cell in enumerate(table[k]):
                for r, c in cell.items():
                    row = rows.setdefault(r, {})
                    row[j] = row.get(j, 0) + v * c
        return Matrix._trusted(self.dimension, self.dimension, _prune(rows))

    def right_rep(self, vec: Mapping[int, Fraction]) -> Matrix:
        """Matrix of a -> a x."""
        rows: dict[int, dict[int, Fraction]] = {}
        table = self._table
        for k, v in vec.items():
            for i, row_cells in enumerate(table):
                for r, c in row_cells[k].items():
                    row = rows.setdefault(r, {})
                    row[i] = row.get(i, 0) + v * c
        return Matrix._trusted(self.dimension, self.dimension, _prune(rows))

    def element(self, coords: Sequence[RationalLike]) -> "Element":
        return Element(self, coords)

    def basis(self, i: int) -> "Element":
        coords = [0] * self.dimension
        coords[i] = 1
        return Element(self, coords)

    def zero(self) -> "Element":
        return Element(self, [0] * self.dimension)

    def format(self, vec) -> str:
        return format_vector(vec, self.basis_labels)

    @cached_property
    def nondegeneracy(self) -> "NondegeneracyResult":
        return check_nondegenerate(self)

    def same_structure(self, other: "FiniteAlgebra") -> bool:
        return self.dimension == other.dimension and self._table == other._table

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return self.same_structure(other)

    def __hash__(self) -> int:
        return hash((self.dimension, tuple(self.structure_constants.items())))

    def __repr__(self) -> str:
        return f"FiniteAlgebra({self.name!r}, dim={self.dimension})"


class TensorSquare(FiniteAlgebra):
    """A (x) A with componentwise product and lexicographic basis."""

    def __init__(self, base: FiniteAlgebra):
        n = base.dimension
        bt = base._table
        product = {}
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    cik = bt[i][k]
                    if not cik:
                        continue
                    for l in range(n):
                        cjl = bt[j][l]
                        for p, a in cik.items():
                            for q, b in cjl.items():
                                product[(i * n + j, k * n + l, p * n + q)] = a * b
        labels = [f"{a}⊗{b}" for a in base.basis_labels for b in base.basis_labels]
        super().__init__(n * n, product, labels, name=f"{base.name}⊗{base.name}", check=False)
        self.base = base

    @cached_property
    def left_regular(self) -> tuple[Matrix, ...]:
        bl = self.base.left_regular
        return tuple(a.kron(b) for a in bl for b in bl)

    @cached_property
    def right_regular(self) -> tuple[Matrix, ...]:
        br = self.base.right_regular
        return tuple(a.kron(b) for a in br for b in br)


class Element:
    """An element of a FiniteAlgebra, stored as a dense coordinate tuple."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: FiniteAlgebra, coords: Sequence[RationalLike]):
        coords = tuple(as_rational(c) for c in coords)
        if len(coords) != algebra.dimension:
            raise ValueError(f"expected {algebra.dimension} coordinates, got {len(coords)}")
        self.algebra = algebra
        self.coords = coords

    def _check(self, other: "Element") -> None:
        if self.algebra is not other.algebra and not self.algebra.same_structure(other.algebra):
            raise AlgebraMismatchError("elements belong to different algebras")

    @property
    def sparse(self) -> dict[int, Fraction]:
        return {i: c for i, c in enumerate(self.coords) if c}

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "Element":
        return Element(self.algebra, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        s = as_rational(other)
        return Element(self.algebra, [s * a for a in self.coords])

    def __rmul__(self, other):
        s = as_rational(other)
        return Element(self.algebra, [s * a for a in self.coords])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra.same_structure(other.algebra) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return self.algebra.format(self.coords)


def multiply(x: Element, y: Element) -> Element:
    x._check(y)
    return Element(x.algebra, x.algebra.multiply_coords(x.coords, y.coords))


def multiply_opposite(x: Element, y: Element) -> Element:
    return multiply(y, x)


@dataclass(frozen=True)
class NondegeneracyResult:
    ok: bool
    witness: Element | None = None
    side: str | None = None  # "left": witness*A = 0; "right": A*witness = 0

    def __bool__(self) -> bool:
        return self.ok


def _annihilator(reps: Sequence[Matrix], n: int) -> tuple[Fraction, ...] | None:
    # columns are vec(L_i); a kernel vector a gives sum a_i L_i = 0
    rows: dict[int, dict[int, Fraction]] = {}
    for i, rep in enumerate(reps):
        for (r, c), v in rep.entries():
            rows.setdefault(r * n + c, {})[i] = v
    m = Matrix._trusted(n * n, len(reps), rows)
    basis = kernel(m)
    return basis[0] if basis else None


def check_nondegenerate(alg: FiniteAlgebra) -> NondegeneracyResult:
    """True iff the product has no nonzero left or right annihilators."""
    n = alg.dimension
    vec = _annihilator(alg.left_regular, n)
    if vec is not None:
        return NondegeneracyResult(False, Element(alg, vec), "left")
    vec = _annihilator(alg.right_regular, n)
    if vec is not None:
        return NondegeneracyResult(False, Element(alg, vec), "right")
    return NondegeneracyResult(True)


def check_idempotent(alg: FiniteAlgebra) -> bool:
    """True iff the products e_i e_j span A."""
    n = alg.dimension
    vectors = [cell for row in alg._table for cell in row if cell]
    return span_rank(vectors, n) == n


def opposite(alg: FiniteAlgebra) -> FiniteAlgebra:
    product = {(j, i, k): c for (i, j, k), c in alg.structure_constants.items()}
    name = alg.name[:-3] if alg.name.endswith("^op") else f"{alg.name}^op"
    return FiniteAlgebra(alg.dimension, product, alg.basis_labels, name=name, check=False)


def tensor_square(alg: FiniteAlgebra, max_dim: int = DEFAULT_MAX_DIM) -> TensorSquare:
    if alg.dimension > max_dim:
        raise DimensionGuardError(
            f"dimension {alg.dimension} exceeds the cap {max_dim}; raise it explicitly to continue"
        )
    return TensorSquare(alg)


def tensor_element(x: Element, y: Element, square: TensorSquare) -> Element:
    n = square.base.dimension
    coords = [Fraction(0)] * (n * n)
    for i, a in enumerate(x.coords):
        if a:
            for j, b in enumerate(y.coords):
                if b:
                    coords[i * n + j] = a * b
    return Element(square, coords)


def flip_matrix(n: int) -> Matrix:
    """The flip a (x) b -> b (x) a on the lexicographic basis of A (x) A."""
    return Matrix.permutation([j * n + i for i in range(n) for j in range(n)])


def flip23_matrix(n: int) -> Matrix:
    """Flip of the last two legs on A (x) A (x) A."""
    images = [0] * (n ** 3)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                images[(i * n + j) * n + k] = (i * n + k) * n + j
    return Matrix.permutation(images)
