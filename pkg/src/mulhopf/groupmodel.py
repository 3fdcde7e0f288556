"""K(G) and Q[G] for discrete groups, evaluated pointwise on finite windows.

K(G) is the algebra of finitely supported functions on G with pointwise
product and Δ(f)(s, t) = f(st).  A tensor in K(G)⊗K(G) is a dict mapping
pairs of group tokens to rationals, i.e. a combination of δ_s⊗δ_t.

For infinite groups only window statements are produced ("consistent with
the axioms on window W"); global verdicts need a finite group.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Callable, Hashable, Iterable, Mapping

from .coproduct import Coproduct

Token = Hashable
Tensor = dict  # {(s, t): Fraction}


class GroupSpecError(ValueError):
    pass


class GroupAxiomError(ValueError):
    pass


class ClosedFormMismatch(AssertionError):
    """The generic formulas disagree with the closed forms of K(G)."""

    def __init__(self, message: str, point=None):
        super().__init__(message)
        self.point = point


class InfiniteGroupVerdictRefused(RuntimeError):
    pass


# -- group oracles -------------------------------------------------------------


class GroupOracle:
    name = "G"
    order: int | None = None  # None for infinite groups

    @property
    def identity(self) -> Token:
        raise NotImplementedError

    def multiply(self, a: Token, b: Token) -> Token:
        raise NotImplementedError

    def invert(self, a: Token) -> Token:
        raise NotImplementedError

    def encode(self, a: Token) -> str:
        return str(a)

    def decode(self, text: str) -> Token:
        raise NotImplementedError

    @property
    def finite(self) -> bool:
        return self.order is not None

    def elements(self) -> list:
        raise InfiniteGroupVerdictRefused(f"{self.name} is infinite")

    def window(self, radius: int) -> list:
        """A finite symmetric neighbourhood of the identity, in a fixed order."""
        raise NotImplementedError

    def on_boundary(self, a: Token, radius: int) -> bool:
        return False


class IntegerLattice(GroupOracle):
    """Z^d under addition.  Tokens are ints for d = 1 and tuples otherwise."""

    def __init__(self, rank: int = 1):
        if rank < 1:
            raise GroupSpecError("lattice rank must be positive")
        self.rank = rank
        self.name = "Z" if rank == 1 else f"Z^{rank}"

    @property
    def identity(self):
        return 0 if self.rank == 1 else (0,) * self.rank

    def multiply(self, a, b):
        if self.rank == 1:
            return a + b
        return tuple(x + y for x, y in zip(a, b))

    def invert(self, a):
        if self.rank == 1:
            return -a
        return tuple(-x for x in a)

    def encode(self, a) -> str:
        if self.rank == 1:
            return str(a)
        return "(" + ",".join(str(x) for x in a) + ")"

    def decode(self, text: str):
        parts = [int(p) for p in text.strip().strip("()").split(",")]
        if len(parts) != self.rank:
            raise GroupSpecError(f"expected {self.rank} coordinates in {text!r}")
        return parts[0] if self.rank == 1 else tuple(parts)

    def window(self, radius: int) -> list:
        span = range(-radius, radius + 1)
        if self.rank == 1:
            return list(span)
        return list(cartesian(span, repeat=self.rank))

    def on_boundary(self, a, radius: int) -> bool:
        coords = (a,) if self.rank == 1 else a
        return max(abs(x) for x in coords) == radius


class CayleyGroup(GroupOracle):
    """A finite group given by its multiplication table; element 0 is the identity."""

    def __init__(self, table, name: str = "G"):
        self.table = [list(row) for row in table]
        self.order = len(self.table)
        self.name = name
        n = self.order
        if n == 0 or any(len(row) != n for row in self.table):
            raise GroupAxiomError("Cayley table must be a non-empty square")
        for row in self.table:
            for v in row:
                if not (isinstance(v, int) and 0 <= v < n):
                    raise GroupAxiomError(f"table entry {v!r} is not an element index")
        for i in range(n):
            if self.table[0][i] != i or self.table[i][0] != i:
                raise GroupAxiomError("element 0 is not the identity")
        self._inverse = {}
        for i in range(n):
            inv = [j for j in range(n) if self.table[i][j] == 0]
            if len(inv) != 1 or self.table[inv[0]][i] != 0:
                raise GroupAxiomError(f"element {i} has no two-sided inverse")
            self._inverse[i] = inv[0]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.table[self.table[i][j]][k] != self.table[i][self.table[j][k]]:
                        raise GroupAxiomError(f"associativity fails at ({i}, {j}, {k})")

    @property
    def identity(self):
        return 0

    def multiply(self, a, b):
        return self.table[a][b]

    def invert(self, a):
        return self._inverse[a]

    def decode(self, text: str):
        value = int(text)
        if not 0 <= value < self.order:
            raise GroupSpecError(f"{value} is not an element of {self.name}")
        return value

    def elements(self) -> list:
        return list(range(self.order))

    def window(self, radius: int) -> list:
        return self.elements()


def cyclic_group(n: int) -> CayleyGroup:
    return CayleyGroup([[(i + j) % n for j in range(n)] for i in range(n)], name=f"C{n}")


def parse_group_spec(spec: str) -> GroupOracle:
    """``z``, ``z^d``, ``cyclic:n`` or ``cayley:<path to JSON table>``."""
    text = spec.strip()
    low = text.lower()
    if low == "z":
        return IntegerLattice(1)
    if low.startswith("z^"):
        try:
            return IntegerLattice(int(low[2:]))
        except ValueError:
            raise GroupSpecError(f"bad lattice rank in {spec!r}") from None
    if low.startswith("cyclic:"):
        try:
            n = int(low.split(":", 1)[1])
        except ValueError:
            raise GroupSpecError(f"bad cyclic order in {spec!r}") from None
        if n < 1:
            raise GroupSpecError("cyclic order must be positive")
        return cyclic_group(n)
    if low.startswith("cayley:"):
        path = text.split(":", 1)[1]
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise GroupSpecError(f"cannot read {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise GroupSpecError(f"{path}: line {exc.lineno}: {exc.msg}") from None
        if not isinstance(data, dict) or "table" not in data:
            raise GroupSpecError(f"{path}: expected an object with 'order' and 'table'")
        table = data["table"]
        if data.get("order", len(table)) != len(table):
            raise GroupSpecError(f"{path}: 'order' does not match the table size")
        try:
            return CayleyGroup(table, name=data.get("name", "G"))
        except GroupAxiomError as exc:
            raise GroupSpecError(f"{path}: {exc}") from None
    raise GroupSpecError(f"unknown group spec {spec!r} (use z, z^d, cyclic:n or cayley:<path>)")


def spot_check_axioms(g: GroupOracle, points: list, samples: int = 200, seed: int = 0) -> tuple | None:
    """Return a failing tuple, or None when the sampled group laws hold."""
    rng = random.Random(seed)
    e = g.identity
    for a in points:
        if g.multiply(e, a) != a or g.multiply(a, e) != a:
            return ("identity", a)
        if g.multiply(a, g.invert(a)) != e or g.multiply(g.invert(a), a) != e:
            return ("inverse", a)
    for _ in range(samples):
        a, b, c = (rng.choice(points) for _ in range(3))
        if g.multiply(g.multiply(a, b), c) != g.multiply(a, g.multiply(b, c)):
            return ("associativity", a, b, c)
    return None


# -- functions and multipliers ---------------------------------------------------


@dataclass(frozen=True)
class FinSuppFunction:
    support: Mapping

    def __post_init__(self):
        clean = {k: Fraction(v) for k, v in self.support.items() if v}
        object.__setattr__(self, "support", clean)

    @classmethod
    def delta(cls, point, value=1) -> "FinSuppFunction":
        return cls({point: value})

    def __call__(self, point) -> Fraction:
        return self.support.get(point, Fraction(0))

    def __add__(self, other: "FinSuppFunction") -> "FinSuppFunction":
        out = dict(self.support)
        for k, v in other.support.items():
            out[k] = out.get(k, 0) + v
        return FinSuppFunction(out)

    def __mul__(self, other: "FinSuppFunction") -> "FinSuppFunction":
        return FinSuppFunction({k: v * other(k) for k, v in self.support.items()})

    def scale(self, c) -> "FinSuppFunction":
        return FinSuppFunction({k: c * v for k, v in self.support.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, FinSuppFunction) and self.support == other.support

    def __hash__(self) -> int:
        return hash(frozenset(self.support.items()))


@dataclass(frozen=True)
class OracleMultiplier:
    """A function on G (or G×G) known only through evaluation; acts by pointwise product."""

    evaluate: Callable
    label: str = "x"

    def __call__(self, point) -> Fraction:
        return Fraction(self.evaluate(point))

    def act(self, f: FinSuppFunction) -> FinSuppFunction:
        return FinSuppFunction({k: v * self(k) for k, v in f.support.items()})


def unit_multiplier() -> OracleMultiplier:
    return OracleMultiplier(lambda _p: 1, "1")


def embed_function(f: FinSuppFunction) -> OracleMultiplier:
    return OracleMultiplier(f, "f")


def coproduct_multiplier(g: GroupOracle, point) -> OracleMultiplier:
    """Δ(δ_point) as a function on G×G: (s, t) ↦ [st = point]."""
    return OracleMultiplier(lambda st: int(g.multiply(st[0], st[1]) == point), f"Δ(δ_{g.encode(point)})")


# -- closed-form canonical maps on K(G)⊗K(G) -------------------------------------


def _push(out: dict, key, v) -> None:
    s = out.get(key, 0) + v
    if s:
        out[key] = s
    else:
        out.pop(key, None)


def _map_pairs(tensor: Mapping, rule) -> Tensor:
    out: Tensor = {}
    for (s, t), v in tensor.items():
        _push(out, rule(s, t), Fraction(v))
    return out


def kg_T1(g: GroupOracle, tensor: Mapping) -> Tensor:
    """T1(δ_m⊗δ_n) = δ_{m n⁻¹}⊗δ_n."""
    return _map_pairs(tensor, lambda m, n: (g.multiply(m, g.invert(n)), n))


def kg_T1_inverse(g: GroupOracle, tensor: Mapping) -> Tensor:
    """T1⁻¹(δ_a⊗δ_b) = δ_{ab}⊗δ_b."""
    return _map_pairs(tensor, lambda a, b: (g.multiply(a, b), b))


def kg_T3(g: GroupOracle, tensor: Mapping) -> Tensor:
    """T3(a⊗b) = (1⊗b)Δ(a); K(G) is commutative so T3 = T1."""
    return kg_T1(g, tensor)


def kg_T3_inverse(g: GroupOracle, tensor: Mapping) -> Tensor:
    return kg_T1_inverse(g, tensor)


def kg_T4(g: GroupOracle, tensor: Mapping) -> Tensor:
    """T4(δ_c⊗δ_a) = δ_c⊗δ_{c⁻¹a}."""
    return _map_pairs(tensor, lambda c, a: (c, g.multiply(g.invert(c), a)))


def kg_T4_inverse(g: GroupOracle, tensor: Mapping) -> Tensor:
    """T4⁻¹(δ_c⊗δ_x) = δ_c⊗δ_{cx}."""
    return _map_pairs(tensor, lambda c, x: (c, g.multiply(c, x)))


def kg_T2(g: GroupOracle, tensor: Mapping) -> Tensor:
    """T2(c⊗a) = (c⊗1)Δ(a) coincides with T4 by commutativity."""
    return kg_T4(g, tensor)


def kg_T2_inverse(g: GroupOracle, tensor: Mapping) -> Tensor:
    return kg_T4_inverse(g, tensor)


KG_MAPS = {
    "T1": (kg_T1, kg_T1_inverse),
    "T2": (kg_T2, kg_T2_inverse),
    "T3": (kg_T3, kg_T3_inverse),
    "T4": (kg_T4, kg_T4_inverse),
}


def random_tensor(points: list, rng: random.Random, terms: int = 4) -> Tensor:
    out: Tensor = {}
    for _ in range(rng.randint(1, terms)):
        key = (rng.choice(points), rng.choice(points))
        _push(out, key, Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
    return out


# -- generic derivation ------------------------------------------------------------


def _mult(tensor: Mapping) -> FinSuppFunction:
    """m(δ_s⊗δ_t) = [s = t] δ_s."""
    out: dict = {}
    for (s, t), v in tensor.items():
        if s == t:
            _push(out, s, v)
    return FinSuppFunction(out)


def _mult_op(tensor: Mapping) -> FinSuppFunction:
    return _mult({(t, s): v for (s, t), v in tensor.items()})


class _GenericCounit:
    """ε evaluated by the E formula, probing b over a finite set of points."""

    def __init__(self, g: GroupOracle, probes: list, side: str = "left"):
        self.g = g
        self.probes = probes
        self.side = side
        self._cache: dict = {}

    def __call__(self, x) -> Fraction:
        if x in self._cache:
            return self._cache[x]
        lam = None
        for b in self.probes:
            if self.side == "left":
                # E(δ_x)δ_b = m T1⁻¹(δ_x⊗δ_b)
                image = _mult(kg_T1_inverse(self.g, {(x, b): 1}))
            else:
                # E′(δ_x)δ_b = m^op T4⁻¹(δ_b⊗δ_x)
                image = _mult_op(kg_T4_inverse(self.g, {(b, x): 1}))
            extra = {k: v for k, v in image.support.items() if k != b}
            if extra:
                raise ClosedFormMismatch(f"E(δ_{self.g.encode(x)}) is not scalar on δ_{self.g.encode(b)}", x)
            value = image(b)
            if lam is None:
                lam = value
            elif value != lam:
                raise ClosedFormMismatch(f"E(δ_{self.g.encode(x)}) takes two scalar values", x)
        self._cache[x] = lam
        return lam


@dataclass
class KGDerivation:
    window: list
    epsilon: dict = field(default_factory=dict)
    epsilon_prime: dict = field(default_factory=dict)
    antipode: dict = field(default_factory=dict)
    antipode_inverse: dict = field(default_factory=dict)


def kg_derive(g: GroupOracle, window: list) -> KGDerivation:
    """Run the generic ε and S formulas on δ_n for n in the window and check the closed forms."""
    e = g.identity
    members = set(window)
    if e not in members:
        raise ValueError("window must contain the identity")
    for n in window:
        if g.invert(n) not in members:
            raise ValueError(f"window is not closed under inverses at {g.encode(n)}")
    eps = _GenericCounit(g, window, "left")
    eps_prime = _GenericCounit(g, window, "right")
    out = KGDerivation(list(window))
    for n in window:
        value = eps(n)
        out.epsilon[n] = value
        out.epsilon_prime[n] = eps_prime(n)
        expected = Fraction(int(n == e))
        if value != expected or out.epsilon_prime[n] != expected:
            raise ClosedFormMismatch(f"ε(δ_{g.encode(n)}) = {value}, expected {expected}", n)
    for n in window:
        # S(δ_n)δ_b = (ε⊗ι)T1⁻¹(δ_n⊗δ_b); the element is read off from its action on the window
        s_coeffs: dict = {}
        sp_coeffs: dict = {}
        for b in window:
            for (p, q), v in kg_T1_inverse(g, {(n, b): 1}).items():
                _push(s_coeffs, q, eps(p) * v)
            # S′(δ_n)δ_c = (ι⊗ε)T4⁻¹(δ_c⊗δ_n)
            for (p, q), v in kg_T4_inverse(g, {(b, n): 1}).items():
                _push(sp_coeffs, p, eps(q) * v)
        s_val = FinSuppFunction(s_coeffs)
        sp_val = FinSuppFunction(sp_coeffs)
        expected = FinSuppFunction.delta(g.invert(n))
        if s_val != expected:
            raise ClosedFormMismatch(f"S(δ_{g.encode(n)}) differs from δ_{g.encode(g.invert(n))}", n)
        if sp_val != expected:
            raise ClosedFormMismatch(f"S′(δ_{g.encode(n)}) differs from δ_{g.encode(g.invert(n))}", n)
        out.antipode[n] = s_val
        out.antipode_inverse[n] = sp_val
    return out


def kg_antipode(g: GroupOracle, tensor_leg: Mapping) -> dict:
    """Closed-form S on a finitely supported function given as {point: value}."""
    return {g.invert(k): v for k, v in tensor_leg.items()}


def kg_completion_mismatch(g: GroupOracle, window: list):
    """Compare the completion formulas against the direct T2, T3 on window pairs.

    T3 = (ι⊗S⁻¹) T1⁻¹ (ι⊗S) and T2 = (S⊗ι) T4⁻¹ (S⁻¹⊗ι), with S(δ_n) = δ_{n⁻¹}.
    Returns None on agreement, else (which, pair).
    """
    inv = g.invert
    for a, b in cartesian(window, window):
        step = kg_T1_inverse(g, {(a, inv(b)): 1})
        derived = _map_pairs(step, lambda s, t: (s, inv(t)))
        if derived != kg_T3(g, {(a, b): 1}):
            return ("T3", (a, b))
        step = kg_T4_inverse(g, {(inv(a), b): 1})
        derived = _map_pairs(step, lambda s, t: (inv(s), t))
        if derived != kg_T2(g, {(a, b): 1}):
            return ("T2", (a, b))
    return None


# -- membership on a window ----------------------------------------------------------


@dataclass(frozen=True)
class MembershipVerdict:
    member: bool
    support: tuple
    boundary_hits: tuple
    window_size: int

    @property
    def detail(self) -> str:
        if self.member:
            return f"finitely supported inside the window, support size {len(self.support)}"
        return (
            f"nonzero at {len(self.boundary_hits)} boundary point(s) out of {len(self.support)} "
            "support point(s) in the window: not an element at this scale"
        )


def kg_membership(g: GroupOracle, x: OracleMultiplier, radius: int, pairs: bool = False) -> MembershipVerdict:
    """Does x, seen on the window, look like an element of finite support inside it?

    A function that is still nonzero on the window boundary is reported as a
    non-member: its support is not contained in the window.  For pairs the
    window is the product window and the boundary is where either coordinate
    lies on the boundary.
    """
    points = g.window(radius)
    domain = list(cartesian(points, points)) if pairs else points
    support = []
    hits = []
    for p in domain:
        if x(p):
            support.append(p)
            on_edge = (g.on_boundary(p[0], radius) or g.on_boundary(p[1], radius)) if pairs else g.on_boundary(p, radius)
            if on_edge:
                hits.append(p)
    return MembershipVerdict(not hits, tuple(support), tuple(hits), len(domain))


# -- finite models -------------------------------------------------------------------


def _finite_table(g: GroupOracle) -> list:
    return [[g.multiply(a, b) for b in g.elements()] for a in g.elements()]


def group_algebra_model(g: GroupOracle, verdict: bool = True) -> Coproduct:
    """Q[G] with Δ(u_g) = u_g⊗u_g, for a finite group."""
    from .gallery import group_algebra

    if not g.finite:
        if verdict:
            raise InfiniteGroupVerdictRefused(
                f"{g.name} is infinite: only window-pointwise statements are possible, no global axiom verdict"
            )
        raise InfiniteGroupVerdictRefused(f"{g.name} is infinite")
    labels = ["e" if k == 0 else f"u{g.encode(k)}" for k in g.elements()]
    return group_algebra(_finite_table(g), labels, name=f"Q[{g.name}]")


def function_algebra_model(g: GroupOracle) -> Coproduct:
    """The finite backend's K(G) for finite G; basis index k is δ_k."""
    from .gallery import function_algebra

    if not g.finite:
        raise InfiniteGroupVerdictRefused(f"{g.name} is infinite")
    return function_algebra(_finite_table(g), [f"d{g.encode(k)}" for k in g.elements()], name=f"F({g.name})")


def truncated_table(g: GroupOracle, radius: int) -> list:
    """The multiplication table on the window, with None where the product leaves it.

    For reporting only; it never feeds an axiom verdict.
    """
    points = g.window(radius)
    inside = {p: i for i, p in enumerate(points)}
    return [[inside.get(g.multiply(a, b)) for b in points] for a in points]


def tokens(g: GroupOracle, items: Iterable) -> list[str]:
    return [g.encode(x) for x in items]
