"""Left, right and two-sided multipliers of a finite-dimensional algebra.

A multiplier is stored as an explicit pair of matrices: ``left`` with column
j equal to ``x e_j`` and ``right`` with column j equal to ``e_j x``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import Element, FiniteAlgebra, TensorSquare, check_idempotent
from .exactlin import Matrix, invert, row_basis


class MultiplierError(ValueError):
    pass


class CompatibilityError(MultiplierError):
    """The two actions of a would-be multiplier do not fit together."""

    def __init__(self, index: int, message: str):
        super().__init__(message)
        self.index = index


class DegenerateAlgebraError(MultiplierError):
    """Membership is ill-posed on an algebra with a degenerate product."""


def _check_left_law(alg: FiniteAlgebra, action: Matrix) -> int | None:
    # x(ab) = (xa)b  <=>  X commutes with every right-regular R_b
    for b, rb in enumerate(alg.right_regular):
        if action @ rb != rb @ action:
            return b
    return None


def _check_right_law(alg: FiniteAlgebra, action: Matrix) -> int | None:
    # (ab)y = a(by)  <=>  Y commutes with every left-regular L_a
    for a, la in enumerate(alg.left_regular):
        if action @ la != la @ action:
            return a
    return None


def _check_compatibility(alg: FiniteAlgebra, left: Matrix, right: Matrix) -> int | None:
    # a(xb) = (ax)b  <=>  L_a X = L_{a x} for every basis a
    for a, la in enumerate(alg.left_regular):
        if la @ left != alg.left_rep(right.column(a)):
            return a
    return None


def _check_shape(alg: FiniteAlgebra, action: Matrix) -> None:
    n = alg.dimension
    if action.shape != (n, n):
        raise MultiplierError(f"action must be {n}x{n}, got {action.shape[0]}x{action.shape[1]}")


class LeftMultiplier:
    __slots__ = ("algebra", "action")

    def __init__(self, algebra: FiniteAlgebra, action: Matrix, *, verify: bool = True):
        _check_shape(algebra, action)
        if verify:
            bad = _check_left_law(algebra, action)
            if bad is not None:
                raise CompatibilityError(bad, f"left module law fails against {algebra.basis_labels[bad]}")
        self.algebra = algebra
        self.action = action

    def apply(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        return self.action.apply(vec)


class RightMultiplier:
    __slots__ = ("algebra", "action")

    def __init__(self, algebra: FiniteAlgebra, action: Matrix, *, verify: bool = True):
        _check_shape(algebra, action)
        if verify:
            bad = _check_right_law(algebra, action)
            if bad is not None:
                raise CompatibilityError(bad, f"right module law fails against {algebra.basis_labels[bad]}")
        self.algebra = algebra
        self.action = action

    def apply(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        return self.action.apply(vec)


class Multiplier:
    """Two-sided multiplier: a compatible (left, right) action pair."""

    __slots__ = ("algebra", "left", "right")

    def __init__(self, algebra: FiniteAlgebra, left: Matrix, right: Matrix, *, verify: bool = True):
        _check_shape(algebra, left)
        _check_shape(algebra, right)
        if verify:
            bad = _check_left_law(algebra, left)
            if bad is not None:
                raise CompatibilityError(bad, "left action is not a left multiplier")
            bad = _check_right_law(algebra, right)
            if bad is not None:
                raise CompatibilityError(bad, "right action is not a right multiplier")
            bad = _check_compatibility(algebra, left, right)
            if bad is not None:
                raise CompatibilityError(
                    bad, f"actions are incompatible at basis element {algebra.basis_labels[bad]}"
                )
        self.algebra = algebra
        self.left = left
        self.right = right

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multiplier):
            return NotImplemented
        return self.left == other.left and self.right == other.right

    def __hash__(self) -> int:
        return hash((self.left, self.right))

    def __add__(self, other: "Multiplier") -> "Multiplier":
        return Multiplier(self.algebra, self.left + other.left, self.right + other.right, verify=False)

    def __sub__(self, other: "Multiplier") -> "Multiplier":
        return Multiplier(self.algebra, self.left - other.left, self.right - other.right, verify=False)

    def scale(self, factor) -> "Multiplier":
        return Multiplier(self.algebra, self.left.scale(factor), self.right.scale(factor), verify=False)

    def is_zero(self) -> bool:
        return self.left.is_zero() and self.right.is_zero()

    def __repr__(self) -> str:
        return f"Multiplier(on {self.algebra.name}, nnz={self.left.nnz}+{self.right.nnz})"


def embed(x: Element) -> Multiplier:
    alg = x.algebra
    vec = x.sparse
    return Multiplier(alg, alg.left_rep(vec), alg.right_rep(vec), verify=False)


def multiplier_product(x: Multiplier, y: Multiplier, *, verify: bool = True) -> Multiplier:
    """The product xy: left action x.left∘y.left, right action y.right∘x.right."""
    if x.algebra is not y.algebra and not x.algebra.same_structure(y.algebra):
        raise MultiplierError("multipliers live on different algebras")
    return Multiplier(x.algebra, x.left @ y.left, y.right @ x.right, verify=verify)


def unit_multiplier(alg: FiniteAlgebra) -> Multiplier:
    ident = Matrix.identity(alg.dimension)
    return Multiplier(alg, ident, ident, verify=False)


def combine(multipliers: Sequence[Multiplier], coeffs: Mapping[int, Fraction], alg: FiniteAlgebra) -> Multiplier:
    """sum_k coeffs[k] * multipliers[k]."""
    n = alg.dimension
    left, right = Matrix.zeros(n), Matrix.zeros(n)
    for k, c in coeffs.items():
        left = left + multipliers[k].left.scale(c)
        right = right + multipliers[k].right.scale(c)
    return Multiplier(alg, left, right, verify=False)


def tensor_multiplier(square: TensorSquare, x: Multiplier, y: Multiplier) -> Multiplier:
    """x (x) y acting on A (x) A."""
    return Multiplier(square, x.left.kron(y.left), x.right.kron(y.right), verify=False)


def one_tensor(square: TensorSquare, b: Element) -> Multiplier:
    """The multiplier 1 (x) b of A (x) A."""
    return tensor_multiplier(square, unit_multiplier(square.base), embed(b))


def tensor_one(square: TensorSquare, c: Element) -> Multiplier:
    """The multiplier c (x) 1 of A (x) A."""
    return tensor_multiplier(square, embed(c), unit_multiplier(square.base))


class _MembershipSolver:
    """Recovers a from L_a using n independent entries of the regular representation."""

    def __init__(self, alg: FiniteAlgebra):
        n = alg.dimension
        rows: dict[int, dict[int, Fraction]] = {}
        for k, rep in enumerate(alg.left_regular):
            for (r, c), v in rep.entries():
                rows.setdefault(r * n + c, {})[k] = v
        big = Matrix._trusted(n * n, n, rows)
        picks = row_basis(big)
        if len(picks) < n:
            raise DegenerateAlgebraError(f"{alg.name} has a left annihilator; membership is ill-posed")
        square = Matrix._trusted(n, n, {a: dict(rows[p]) for a, p in enumerate(picks) if p in rows})
        inv = invert(square)
        assert inv is not None
        self.n = n
        self.picks = [divmod(p, n) for p in picks]
        self.inverse = inv

    def solve(self, left: Matrix) -> dict[int, Fraction]:
        rhs = {a: left[r, c] for a, (r, c) in enumerate(self.picks) if left[r, c]}
        return self.inverse.apply(rhs)


def _solver(alg: FiniteAlgebra) -> _MembershipSolver:
    solver = alg.__dict__.get("_membership_solver")
    if solver is None:
        nondegenerate = alg.base.nondegeneracy.ok if isinstance(alg, TensorSquare) else alg.nondegeneracy.ok
        if not nondegenerate:
            raise DegenerateAlgebraError(f"{alg.name} is degenerate; membership is ill-posed")
        if not isinstance(alg, TensorSquare) and not check_idempotent(alg):
            raise DegenerateAlgebraError(f"{alg.name} is not idempotent; membership is ill-posed")
        solver = _MembershipSolver(alg)
        alg.__dict__["_membership_solver"] = solver
    return solver


def membership_vector(alg: FiniteAlgebra, left: Matrix, right: Matrix | None = None) -> dict[int, Fraction] | None:
    """Sparse coordinates of the unique a with L_a = left (and R_a = right), or None."""
    s = _solver(alg).solve(left)
    if alg.left_rep(s) != left:
        return None
    if right is not None and alg.right_rep(s) != right:
        return None
    return s


def membership(x: Multiplier) -> Element | None:
    """The element a with embed(a) == x, if there is one."""
    s = membership_vector(x.algebra, x.left, x.right)
    if s is None:
        return None
    coords = [Fraction(0)] * x.algebra.dimension
    for k, v in s.items():
        coords[k] = v
    return Element(x.algebra, coords)


def left_membership(x: LeftMultiplier) -> Element | None:
    """The element a with a·b = x·b for all b, if there is one."""
    s = membership_vector(x.algebra, x.action)
    if s is None:
        return None
    coords = [Fraction(0)] * x.algebra.dimension
    for k, v in s.items():
        coords[k] = v
    return Element(x.algebra, coords)
