"""Three-valued check outcomes with concrete failure witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass(frozen=True)
class Witness:
    """Basis indices where a check failed plus the nonzero residual.

    ``roles`` names the index positions (e.g. ``("a", "b", "c")``) and
    ``space`` tells which tensor power the residual lives in (1, 2 or 3).
    """

    indices: tuple[int, ...]
    residual: dict[int, Fraction]
    roles: tuple[str, ...] = ()
    space: int = 1


@dataclass
class CheckResult:
    name: str
    status: str
    witness: Witness | None = None
    detail: str = ""
    duration_ms: float = 0.0
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def __bool__(self) -> bool:
        return self.status == PASS


def passed(name: str, detail: str = "", **data) -> CheckResult:
    return CheckResult(name, PASS, None, detail, data=data)


def failed(name: str, witness: Witness, detail: str = "", **data) -> CheckResult:
    return CheckResult(name, FAIL, witness, detail, data=data)


def skipped(name: str, reason: str) -> CheckResult:
    return CheckResult(name, SKIPPED, None, reason)


def diff(lhs: dict[int, Fraction], rhs: dict[int, Fraction]) -> dict[int, Fraction]:
    out = dict(lhs)
    for k, v in rhs.items():
        s = out.get(k, 0) - v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out
