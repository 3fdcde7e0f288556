"""Exact rational linear algebra on sparse matrices.

Scalars are :class:`fractions.Fraction` throughout; floats are rejected at
every entry point.  Elimination is fraction-free (Bareiss) on integer rows,
with a fixed pivot rule: columns are scanned left to right and the first
remaining row with a nonzero entry in the current column becomes the pivot.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Iterator, Mapping, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]
SparseVector = dict  # int -> Fraction, no stored zeros

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction."""
    match = _RATIONAL_RE.match(text)
    if not match:
        raise ValueError(f"not an exact rational: {text!r}")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def sparse_from_dense(values: Sequence[RationalLike]) -> SparseVector:
    out = {}
    for i, v in enumerate(values):
        v = as_rational(v)
        if v:
            out[i] = v
    return out


def dense_from_sparse(vec: Mapping[int, Fraction], length: int) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * length
    for i, v in vec.items():
        out[i] = v
    return tuple(out)


def sparse_iadd(out: dict, y: Mapping[int, Fraction], scale: Fraction = Fraction(1)) -> dict:
    """In-place out += scale*y; returns out."""
    if not scale:
        return out
    for k, v in y.items():
        t = out.get(k, 0) + scale * v
        if t:
            out[k] = t
        else:
            out.pop(k, None)
    return out


def sparse_add(x: Mapping[int, Fraction], y: Mapping[int, Fraction], scale: Fraction = Fraction(1)) -> SparseVector:
    """Return x + scale*y."""
    out = dict(x)
    if not scale:
        return out
    for k, v in y.items():
        s = out.get(k, 0) + scale * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def sparse_scale(x: Mapping[int, Fraction], scale: Fraction) -> SparseVector:
    if not scale:
        return {}
    return {k: v * scale for k, v in x.items()}


class Matrix:
    """Immutable sparse matrix over Q.

    Rows are stored as ``{row: {col: value}}`` with no zero entries and no
    empty rows.
    """

    __slots__ = ("_nrows", "_ncols", "_rows", "_cols")

    def __init__(self, nrows: int, ncols: int, entries=None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        rows: dict[int, dict[int, Fraction]] = {}
        if entries:
            items = entries.items() if isinstance(entries, Mapping) else entries
            for (r, c), v in items:
                if not (0 <= r < nrows and 0 <= c < ncols):
                    raise IndexError(f"entry ({r}, {c}) outside {nrows}x{ncols}")
                v = as_rational(v)
                row = rows.setdefault(r, {})
                if v:
                    row[c] = v
                else:
                    row.pop(c, None)
            rows = {r: row for r, row in rows.items() if row}
        self._nrows = nrows
        self._ncols = ncols
        self._rows = rows
        self._cols = None

    @classmethod
    def _trusted(cls, nrows: int, ncols: int, rows: dict) -> "Matrix":
        m = cls.__new__(cls)
        m._nrows = nrows
        m._ncols = ncols
        m._rows = rows
        m._cols = None
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "Matrix":
        return cls._trusted(nrows, nrows if ncols is None else ncols, {})

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._trusted(n, n, {i: {i: Fraction(1)} for i in range(n)})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[RationalLike]]) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        out = {}
        for r, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            srow = sparse_from_dense(row)
            if srow:
                out[r] = srow
        return cls._trusted(nrows, ncols, out)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Mapping[int, RationalLike]]) -> "Matrix":
        rows: dict[int, dict[int, Fraction]] = {}
        for c, col in enumerate(columns):
            for r, v in col.items():
                if not 0 <= r < nrows:
                    raise IndexError(f"row {r} outside {nrows}")
                v = as_rational(v)
                if v:
                    rows.setdefault(r, {})[c] = v
        return cls._trusted(nrows, len(columns), rows)

    @classmethod
    def permutation(cls, images: Sequence[int]) -> "Matrix":
        """Matrix sending basis vector j to basis vector images[j]."""
        n = len(images)
        return cls._trusted(n, n, {images[j]: {j: Fraction(1)} for j in range(n)})

    @property
    def shape(self) -> tuple[int, int]:
        return (self._nrows, self._ncols)

    @property
    def nrows(self) -> int:
        return self._nrows

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self._rows.values())

    def density(self) -> float:
        total = self._nrows * self._ncols
        return self.nnz / total if total else 0.0

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        r, c = key
        return self._rows.get(r, {}).get(c, Fraction(0))

    def row(self, r: int) -> SparseVector:
        return dict(self._rows.get(r, {}))

    def _columns(self) -> dict[int, dict[int, Fraction]]:
        if self._cols is None:
            cols: dict[int, dict[int, Fraction]] = {}
            for r, row in self._rows.items():
                for c, v in row.items():
                    cols.setdefault(c, {})[r] = v
            self._cols = cols
        return self._cols

    def column(self, c: int) -> SparseVector:
        return dict(self._columns().get(c, {}))

    def entries(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        for r in sorted(self._rows):
            row = self._rows[r]
            for c in sorted(row):
                yield (r, c), row[c]

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self._ncols for _ in range(self._nrows)]
        for r, row in self._rows.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def transpose(self) -> "Matrix":
        return Matrix._trusted(self._ncols, self._nrows, {c: dict(col) for c, col in self._columns().items()})

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def apply(self, vec: Mapping[int, Fraction]) -> SparseVector:
        """Sparse matrix-vector product."""
        cols = self._columns()
        out: dict[int, Fraction] = {}
        for c, x in vec.items():
            col = cols.get(c)
            if not col:
                continue
            for r, v in col.items():
                out[r] = out.get(r, 0) + v * x
        return {r: v for r, v in out.items() if v}

    def matvec(self, vec: Sequence[RationalLike]) -> tuple[Fraction, ...]:
        if len(vec) != self._ncols:
            raise ValueError("vector length does not match matrix columns")
        vec = [as_rational(v) for v in vec]
        out = [Fraction(0)] * self._nrows
        for r, row in self._rows.items():
            out[r] = sum((v * vec[c] for c, v in row.items()), Fraction(0))
        return tuple(out)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self._ncols != other._nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other._rows
        out = {}
        for r, row in self._rows.items():
            acc: dict[int, Fraction] = {}
            for k, v in row.items():
                orow = orows.get(k)
                if not orow:
                    continue
                for c, w in orow.items():
                    acc[c] = acc.get(c, 0) + v * w
            acc = {c: v for c, v in acc.items() if v}
            if acc:
                out[r] = acc
        return Matrix._trusted(self._nrows, other._ncols, out)

    def _combine(self, other: "Matrix", sign: int) -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = {r: dict(row) for r, row in self._rows.items()}
        for r, row in other._rows.items():
            acc = out.setdefault(r, {})
            for c, v in row.items():
                s = acc.get(c, 0) + sign * v
                if s:
                    acc[c] = s
                else:
                    acc.pop(c, None)
        return Matrix._trusted(self._nrows, self._ncols, {r: row for r, row in out.items() if row})

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, 1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, -1)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, factor: RationalLike) -> "Matrix":
        factor = as_rational(factor)
        if not factor:
            return Matrix.zeros(self._nrows, self._ncols)
        return Matrix._trusted(
            self._nrows, self._ncols, {r: {c: v * factor for c, v in row.items()} for r, row in self._rows.items()}
        )

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product; row (r1, r2) -> r1*other.nrows + r2."""
        orows = other._rows
        on, oc = other._nrows, other._ncols
        out = {}
        for r1, row1 in self._rows.items():
            for r2, row2 in orows.items():
                row = {}
                for c1, v1 in row1.items():
                    base = c1 * oc
                    for c2, v2 in row2.items():
                        row[base + c2] = v1 * v2
                out[r1 * on + r2] = row
        return Matrix._trusted(self._nrows * on, self._ncols * oc, out)

    def is_zero(self) -> bool:
        return not self._rows

    def is_identity(self) -> bool:
        return self._nrows == self._ncols and self == Matrix.identity(self._nrows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, tuple(self.entries())))

    def __repr__(self) -> str:
        return f"Matrix({self._nrows}x{self._ncols}, nnz={self.nnz})"


# -- fraction-free elimination ------------------------------------------------


def _integer_row(row: Mapping[int, Fraction]) -> dict[int, int]:
    if not row:
        return {}
    den = lcm(*(v.denominator for v in row.values()))
    out = {c: v.numerator * (den // v.denominator) for c, v in row.items()}
    g = 0
    for v in out.values():
        g = gcd(g, v)
        if g == 1:
            return out
    return {c: v // g for c, v in out.items()}


def _bareiss(rows: list[dict[int, int]], ncoef: int):
    """Forward Bareiss elimination over the first ``ncoef`` columns.

    Columns at index >= ncoef ride along (augmented part).  Returns
    ``(pivot_rows, pivot_cols, leftover)`` where leftover rows vanish on
    every coefficient column.
    """
    remaining = [r for r in rows if r]
    pivot_rows: list[dict[int, int]] = []
    pivot_cols: list[int] = []
    prev = 1
    for col in range(ncoef):
        idx = next((i for i, row in enumerate(remaining) if col in row), None)
        if idx is None:
            continue
        prow = remaining.pop(idx)
        p = prow[col]
        updated = []
        for row in remaining:
            a = row.get(col)
            if a is None:
                if p == prev:
                    updated.append(row)
                    continue
                new = {}
                for c, v in row.items():
                    q, rem = divmod(v * p, prev)
                    if rem:
                        raise ArithmeticError("inexact Bareiss division")
                    new[c] = q
            else:
                new = {}
                for c in row.keys() | prow.keys():
                    v = row.get(c, 0) * p - a * prow.get(c, 0)
                    if v:
                        q, rem = divmod(v, prev)
                        if rem:
                            raise ArithmeticError("inexact Bareiss division")
                        new[c] = q
            if new:
                updated.append(new)
        remaining = updated
        pivot_rows.append(prow)
        pivot_cols.append(col)
        prev = p
    return pivot_rows, pivot_cols, remaining


def _back_substitute(pivot_rows: list[dict[int, int]], pivot_cols: list[int]) -> list[dict[int, Fraction]]:
    """Reduced row echelon rows (pivot entries equal to 1)."""
    out: list[dict[int, Fraction]] = [{} for _ in pivot_rows]
    for k in range(len(pivot_rows) - 1, -1, -1):
        row = pivot_rows[k]
        p = row[pivot_cols[k]]
        frow = {c: Fraction(v, p) for c, v in row.items()}
        for k2 in range(k + 1, len(pivot_rows)):
            f = frow.get(pivot_cols[k2])
            if f:
                frow = sparse_add(frow, out[k2], -f)
        out[k] = frow
    return out


def _rows_of(m: Matrix, augment: Mapping[int, Mapping[int, Fraction]] | None = None) -> list[dict[int, int]]:
    rows = []
    for r in range(m.nrows):
        row = dict(m._rows.get(r, {}))
        if augment and r in augment:
            row.update(augment[r])
        rows.append(_integer_row(row))
    return rows


def solve(m: Matrix, rhs: Sequence[RationalLike]) -> tuple[Fraction, ...] | None:
    """Some exact solution x of m x = rhs, or None if the system is inconsistent.

    Free variables are set to zero, so the result is deterministic.
    """
    if len(rhs) != m.nrows:
        raise ValueError("rhs length must equal the number of rows")
    n = m.ncols
    aug = {r: {n: as_rational(v)} for r, v in enumerate(rhs) if as_rational(v)}
    pivot_rows, pivot_cols, leftover = _bareiss(_rows_of(m, aug), n)
    if leftover:
        return None
    reduced = _back_substitute(pivot_rows, pivot_cols)
    x = [Fraction(0)] * n
    for row, pc in zip(reduced, pivot_cols):
        x[pc] = row.get(n, Fraction(0))
    return tuple(x)


def rank(m: Matrix) -> int:
    _, pivot_cols, _ = _bareiss(_rows_of(m), m.ncols)
    return len(pivot_cols)


def kernel(m: Matrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right null space, one vector per free column."""
    n = m.ncols
    pivot_rows, pivot_cols, _ = _bareiss(_rows_of(m), n)
    reduced = _back_substitute(pivot_rows, pivot_cols)
    pivots = set(pivot_cols)
    basis = []
    for f in range(n):
        if f in pivots:
            continue
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for row, pc in zip(reduced, pivot_cols):
            vec[pc] = -row.get(f, Fraction(0))
        basis.append(tuple(vec))
    return basis


def invert(m: Matrix) -> Matrix | None:
    if m.nrows != m.ncols:
        raise ValueError("only square matrices can be inverted")
    n = m.ncols
    aug = {r: {n + r: Fraction(1)} for r in range(n)}
    pivot_rows, pivot_cols, _ = _bareiss(_rows_of(m, aug), n)
    if len(pivot_cols) < n:
        return None
    reduced = _back_substitute(pivot_rows, pivot_cols)
    out = {}
    for row, pc in zip(reduced, pivot_cols):
        inv_row = {c - n: v for c, v in row.items() if c >= n}
        if inv_row:
            out[pc] = inv_row
    return Matrix._trusted(n, n, out)


def row_basis(m: Matrix) -> list[int]:
    """Indices of a maximal linearly independent set of rows (first-found order)."""
    _, pivot_cols, _ = _bareiss(_rows_of(m.transpose()), m.nrows)
    return pivot_cols


def membership_in_span(
    v: Sequence[RationalLike], generators: Sequence[Sequence[RationalLike]]
) -> tuple[Fraction, ...] | None:
    """Coefficients expressing v as a combination of the generators, or None."""
    length = len(v)
    for g in generators:
        if len(g) != length:
            raise ValueError("all vectors must have the same length")
    if not generators:
        return () if all(as_rational(x) == 0 for x in v) else None
    m = Matrix.from_columns(length, [sparse_from_dense(g) for g in generators])
    return solve(m, v)


def span_rank(vectors: Iterable[Mapping[int, Fraction]], length: int) -> int:
    rows = [_integer_row(v) for v in vectors]
    _, pivot_cols, _ = _bareiss(rows, length)
    return len(pivot_cols)


@dataclass(frozen=True)
class LinearFunctional:
    """A linear functional given by its coefficients in a fixed basis."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(as_rational(c) for c in self.coefficients))

    def __len__(self) -> int:
        return len(self.coefficients)

    def __call__(self, vec: Sequence[RationalLike] | Mapping[int, Fraction]) -> Fraction:
        if isinstance(vec, Mapping):
            return sum((self.coefficients[i] * v for i, v in vec.items()), Fraction(0))
        if len(vec) != len(self.coefficients):
            raise ValueError("functional applied to a vector of the wrong length")
        return sum((c * as_rational(x) for c, x in zip(self.coefficients, vec)), Fraction(0))
