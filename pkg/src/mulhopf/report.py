"""The check pipeline and its reports.

Entry order is fixed: the twelve axioms, then the structural checks
(pentagon, fullness), then derivations (counit, antipode, identities,
flip, completion), then the miscellaneous consequences.  Exit codes:
0 when nothing failed, 1 when any entry failed; input errors (2) are
raised before a report exists.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import derive as dv
from .algebra import FiniteAlgebra
from .checks import FAIL, PASS, SKIPPED, CheckResult, Witness, failed, passed, skipped
from .coproduct import (
    AXIOM_ORDER,
    Classification,
    Coproduct,
    axiom_results,
    check_fullness,
    check_pentagon,
    classify,
    opposite_coproduct,
)
from .exactlin import format_rational

SECTIONS = ("axioms", "structure", "derivation", "misc")
EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


@dataclass
class Entry:
    section: str
    result: CheckResult


@dataclass
class CheckReport:
    name: str
    algebra: FiniteAlgebra
    side: str
    classification: dict
    entries: list[Entry] = field(default_factory=list)
    structure: dict | None = None
    notes: list[str] = field(default_factory=list)
    banner: str | None = None

    @property
    def exit_code(self) -> int:
        return exit_code([e.result.status for e in self.entries])

    def statuses(self) -> dict[str, str]:
        return {e.result.name: e.result.status for e in self.entries}

    def first_failure(self) -> CheckResult | None:
        return next((e.result for e in self.entries if e.result.failed), None)


def exit_code(statuses) -> int:
    return EXIT_FAIL if any(s == FAIL for s in statuses) else EXIT_OK


def _timed(fn: Callable):
    t0 = time.perf_counter()
    out = fn()
    ms = (time.perf_counter() - t0) * 1000.0
    results = out if isinstance(out, list) else [out]
    for r in results:
        r.duration_ms = ms / max(len(results), 1)
    return results


DERIVATION_NAMES = (
    "counit-derivation",
    "counit-equality",
    "counit-identity-T1",
    "counit-identity-T4",
    "counit-homomorphism",
    "counit-uniqueness",
    "antipode-derivation",
    "antipode-T1inv-closed-form",
    "antipode-convolution-left",
    "antipode-T4inv-closed-form",
    "antipode-convolution-right",
    "antipode-S-first-leg",
    "antipode-S'-second-leg",
    "antipode-antihomomorphism",
    "antipode-inverse-antihomomorphism",
    "antipode-S-of-S'",
    "antipode-S'-of-S",
    "antipode-span",
    "antipode-inverse",
    "flip",
    "flip-pentagon-route",
    "completion-T3",
    "completion-T2",
)


def _derivation_suite(d: Coproduct) -> tuple[list[CheckResult], dv.Counit | None, dv.Antipode | None]:
    """Run the left derivation suite on d, stopping cleanly at the first broken step."""
    out: list[CheckResult] = []

    def stop(exc: dv.DerivationError, name: str):
        out.append(failed(name, exc.witness or Witness((), {}, (), 1), str(exc)))
        done = {r.name for r in out}
        reason = f"not reached: {name} failed"
        out.extend(skipped(nm, reason) for nm in DERIVATION_NAMES if nm not in done)
        return out, None, None

    t0 = time.perf_counter()
    try:
        eps = dv.derive_counit_left(d)
    except dv.DerivationError as exc:
        return stop(exc, "counit-derivation")
    out.append(passed("counit-derivation", "E(a) is scalar for every basis a"))
    out[-1].duration_ms = (time.perf_counter() - t0) * 1000.0
    t0 = time.perf_counter()
    try:
        dv.derive_counit_right(d)
    except dv.DerivationError as exc:
        return stop(exc, "counit-equality")
    out.append(passed("counit-equality", "ε = ε′"))
    out[-1].duration_ms = (time.perf_counter() - t0) * 1000.0
    out.extend(_timed(lambda: dv.check_counit_properties(d, eps)))

    t0 = time.perf_counter()
    try:
        s = dv.derive_antipode(d, eps)
    except dv.DerivationError as exc:
        return stop(exc, "antipode-derivation")
    out.append(passed("antipode-derivation", "S(a) and S′(a) lie in A"))
    out[-1].duration_ms = (time.perf_counter() - t0) * 1000.0
    out.extend(_timed(lambda: dv.check_antipode_identities(d, eps, s)))
    out.extend(_timed(lambda: dv.check_flip(d, s)))
    out.extend(_timed(lambda: dv.check_completion(d, s)))
    return out, eps, s


def _right_agreement(d: Coproduct, eps: dv.Counit, s: dv.Antipode) -> CheckResult:
    """The derivation through A^op must give the same ε and S."""
    try:
        eps_r, s_r = dv.derive_right_side(d)
    except dv.DerivationError as exc:
        return failed("right-side-agreement", exc.witness or Witness((), {}, (), 1), str(exc))
    for i, (a, b) in enumerate(zip(eps.values, eps_r.values)):
        if a != b:
            return failed("right-side-agreement", Witness((i,), {0: a - b}, ("a",), 0), "ε differs")
    if s_r.map != s.map:
        delta = s_r.map - s.map
        col = min(delta.transpose()._rows)
        return failed("right-side-agreement", Witness((col,), delta.column(col), ("a",), 1), "S differs")
    return passed("right-side-agreement", "ε and S agree with the derivation on A^op")


def run_check(name: str, d: Coproduct, side: str = "both", derive: bool = False) -> CheckReport:
    if side not in ("left", "right", "both"):
        raise ValueError(f"side must be left, right or both, not {side!r}")
    t0 = time.perf_counter()
    axioms = axiom_results(d)
    axiom_ms = (time.perf_counter() - t0) * 1000.0
    cls: Classification = classify(d)
    report = CheckReport(name, d.algebra, side, cls.as_dict())
    for nm in AXIOM_ORDER:
        r = axioms[nm]
        if not r.duration_ms:
            r.duration_ms = axiom_ms / len(AXIOM_ORDER)
        report.entries.append(Entry("axioms", r))

    for r in _timed(lambda: check_pentagon(d)):
        report.entries.append(Entry("structure", r))
    for r in _timed(lambda: check_fullness(d)):
        report.entries.append(Entry("structure", r))

    use_left = cls.is_left_MHA and side in ("left", "both")
    use_right = cls.is_right_MHA and side in ("right", "both")
    eps = s = None
    if use_left:
        results, eps, s = _derivation_suite(d)
        if use_right and eps is not None:
            results.append(_right_agreement(d, eps, s))
    elif use_right:
        # a right MHA is a left MHA over A^op with the same Δ
        dop = opposite_coproduct(d)
        results, eps_op, s_op = _derivation_suite(dop)
        for r in results:
            r.detail = (r.detail + " (computed on A^op)").strip()
        if eps_op is not None:
            eps = dv.Counit(eps_op.functional, "right-side")
            s = dv.Antipode(s_op.inverse_map, s_op.map, s_op.span_rank)
    else:
        gate = {"left": "left", "right": "right", "both": "left or right"}[side]
        results = [skipped(nm, f"not a {gate} multiplier Hopf algebra") for nm in DERIVATION_NAMES]
    for r in results:
        report.entries.append(Entry("derivation", r))

    for r in _timed(lambda: dv.check_misc(d)):
        report.entries.append(Entry("misc", r))

    if s is not None and not s.squares_to_identity():
        report.notes.append("S∘S ≠ id: S and its inverse S′ are different maps")
    if derive and eps is not None:
        report.structure = structure_dump(d.algebra, eps, s)
    return report


def structure_dump(alg: FiniteAlgebra, eps: dv.Counit, s: dv.Antipode) -> dict:
    n = alg.dimension
    return {
        "epsilon": [format_rational(v) for v in eps.values],
        "S": [[format_rational(s.map[i, j]) for j in range(n)] for i in range(n)],
        "S_inverse": [[format_rational(s.inverse_map[i, j]) for j in range(n)] for i in range(n)],
        "S_images": {alg.basis_labels[i]: alg.format(s.map.column(i)) for i in range(n)},
        "S_squared_is_identity": s.squares_to_identity(),
    }


# -- rendering ------------------------------------------------------------------


def _index_label(alg: FiniteAlgebra, role: str, idx: int) -> str:
    labels = alg.basis_labels
    n = alg.dimension
    if role == "covering" and 0 <= idx < n * n:
        i, j = divmod(idx, n)
        return f"{labels[i]}⊗{labels[j]}"
    if 0 <= idx < n:
        return labels[idx]
    return str(idx)


def _space_label(alg: FiniteAlgebra, space: int, idx: int) -> str:
    labels = alg.basis_labels
    n = alg.dimension
    if space == 0:
        return "1"
    parts = []
    for _ in range(space):
        idx, r = divmod(idx, n)
        parts.append(labels[r])
    return "⊗".join(reversed(parts))


def witness_json(alg: FiniteAlgebra, w: Witness) -> dict:
    roles = list(w.roles) + [f"i{k}" for k in range(len(w.roles), len(w.indices))]
    return {
        "indices": list(w.indices),
        "roles": roles[: len(w.indices)],
        "labels": [_index_label(alg, roles[k], i) for k, i in enumerate(w.indices)],
        "space": w.space,
        "residual": {_space_label(alg, w.space, k): format_rational(v) for k, v in sorted(w.residual.items())},
    }


def witness_text(alg: FiniteAlgebra, w: Witness) -> str:
    data = witness_json(alg, w)
    at = ", ".join(f"{r}={lab}" for r, lab in zip(data["roles"], data["labels"]))
    terms = []
    for label, v in data["residual"].items():
        terms.append(label if v == "1" else f"-{label}" if v == "-1" else f"{v}*{label}")
    residual = " + ".join(terms).replace("+ -", "- ") if terms else "0"
    return f"at ({at}), residual {residual}"


def entry_json(alg: FiniteAlgebra, e: Entry, timing: bool = True) -> dict:
    r = e.result
    out = {
        "name": r.name,
        "section": e.section,
        "status": r.status,
        "detail": r.detail,
        "witness": witness_json(alg, r.witness) if r.witness is not None else None,
    }
    if timing:
        out["duration_ms"] = round(r.duration_ms, 3)
    return out


def report_json(report: CheckReport, timing: bool = True) -> dict:
    counts = {st: sum(1 for e in report.entries if e.result.status == st) for st in (PASS, FAIL, SKIPPED)}
    return {
        "instance": report.name,
        "algebra": report.algebra.name,
        "dimension": report.algebra.dimension,
        "side": report.side,
        "classification": report.classification,
        "entries": [entry_json(report.algebra, e, timing) for e in report.entries],
        "summary": counts,
        "notes": list(report.notes),
        "structure": report.structure,
        "banner": report.banner,
        "exit_code": report.exit_code,
    }


def render_json(report: CheckReport, timing: bool = True) -> str:
    return json.dumps(report_json(report, timing), indent=2, ensure_ascii=False) + "\n"


def render_text(report: CheckReport, timing: bool = True) -> str:
    alg = report.algebra
    lines = [f"instance: {report.name} ({alg.name}, dimension {alg.dimension})"]
    if report.banner:
        lines.append(f"[{report.banner}]")
    c = report.classification
    lines.append(
        "classification: left MHA={}, right MHA={}, regular MHA={}".format(
            "yes" if c["is_left_MHA"] else "no",
            "yes" if c["is_right_MHA"] else "no",
            "yes" if c["is_regular_MHA"] else "no",
        )
    )
    section = None
    for e in report.entries:
        if e.section != section:
            section = e.section
            lines.append(f"-- {section}")
        r = e.result
        text = f"  {r.status.upper():7} {r.name}"
        if r.detail:
            text += f"  ({r.detail})"
        if timing:
            text += f"  [{r.duration_ms:.1f} ms]"
        lines.append(text)
    first = report.first_failure()
    if first is not None and first.witness is not None:
        lines.append(f"first failure: {first.name} {witness_text(alg, first.witness)}")
    for note in report.notes:
        lines.append(f"note: {note}")
    if report.structure:
        st = report.structure
        lines.append("epsilon: (" + ", ".join(st["epsilon"]) + ")")
        for label, img in st["S_images"].items():
            lines.append(f"S({label}) = {img}")
    lines.append(f"exit code: {report.exit_code}")
    return "\n".join(lines) + "\n"


# -- group models -------------------------------------------------------------------


@dataclass
class GroupEntry:
    name: str
    status: str
    detail: str = ""
    witness: dict | None = None
    duration_ms: float = 0.0


@dataclass
class GroupReport:
    group: str
    model: str
    window: str
    entries: list[GroupEntry] = field(default_factory=list)
    banner: str | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return exit_code([e.status for e in self.entries])


# Pointwise definitions, evaluated at (s, t) on basis inputs (x, y):
#   T1(δx⊗δy) = Δ(δx)(1⊗δy)   T2(δx⊗δy) = (δx⊗1)Δ(δy)
#   T3(δx⊗δy) = (1⊗δy)Δ(δx)   T4(δx⊗δy) = Δ(δy)(δx⊗1)
def _pointwise(g, which: str) -> Callable:
    mul = g.multiply
    if which in ("T1", "T3"):
        return lambda x, y, s, t: int(mul(s, t) == x and t == y)
    return lambda x, y, s, t: int(s == x and mul(s, t) == y)


def run_group(g, model: str = "kg", radius: int = 5, seed: int = 0, samples: int = 500) -> "GroupReport | CheckReport":
    from . import groupmodel as gm

    if model == "qg":
        try:
            d = gm.group_algebra_model(g)
        except gm.InfiniteGroupVerdictRefused as exc:
            rep = GroupReport(g.name, "qg", f"radius {radius}")
            rep.banner = "window-only"
            rep.entries.append(GroupEntry("global-verdict", SKIPPED, str(exc)))
            table = gm.truncated_table(g, radius)
            closed = sum(1 for row in table for v in row if v is not None)
            total = sum(len(row) for row in table)
            rep.entries.append(
                GroupEntry(
                    "window-table",
                    PASS,
                    f"{len(table)} window elements; {closed} of {total} products stay in the window (reporting only)",
                )
            )
            return rep
        report = run_check(f"Q[{g.name}]", d, "both", derive=True)
        return report
    if model != "kg":
        raise ValueError(f"unknown model {model!r}")

    points = g.window(radius)
    wlabel = "all elements" if g.finite else f"radius {radius}, {len(points)} points"
    rep = GroupReport(g.name, "kg", wlabel)
    if not g.finite:
        rep.banner = f"window-only: consistent with the axioms on the window ({wlabel}); no global verdict"
    enc = g.encode

    def add(name, fn):
        t0 = time.perf_counter()
        status, detail, witness = fn()
        rep.entries.append(GroupEntry(name, status, detail, witness, (time.perf_counter() - t0) * 1000.0))

    def axioms():
        bad = gm.spot_check_axioms(g, points, seed=seed)
        if bad is None:
            return PASS, f"identity and inverse laws on {len(points)} points, associativity sampled", None
        return FAIL, f"{bad[0]} law fails", {"points": [enc(p) for p in bad[1:]]}

    add("group-axioms", axioms)

    rng = random.Random(seed)
    probe_pairs = [(g.identity, g.identity)] + [(rng.choice(points), rng.choice(points)) for _ in range(24)]

    for which in ("T1", "T2", "T3", "T4"):
        fwd, _ = gm.KG_MAPS[which]
        oracle = _pointwise(g, which)

        def closed(which=which, fwd=fwd, oracle=oracle):
            for x, y in probe_pairs:
                image = fwd(g, {(x, y): 1})
                grid = set(image) | {(s, t) for s in points for t in points}
                for s, t in grid:
                    if image.get((s, t), 0) != oracle(x, y, s, t):
                        return FAIL, "closed form differs from the pointwise definition", {
                            "input": [enc(x), enc(y)],
                            "point": [enc(s), enc(t)],
                        }
            return PASS, f"{len(probe_pairs)} inputs evaluated on the window grid", None

        add(f"closed-form-{which}", closed)

    for which in ("T1", "T2", "T3", "T4"):
        fwd, inv = gm.KG_MAPS[which]

        def roundtrip(fwd=fwd, inv=inv):
            local = random.Random(f"{seed}-{which}")
            for k in range(samples):
                t = gm.random_tensor(points, local)
                if inv(g, fwd(g, t)) != t or fwd(g, inv(g, t)) != t:
                    return FAIL, f"round trip fails on sample {k}", {
                        "tensor": {f"{enc(s)}⊗{enc(u)}": format_rational(v) for (s, u), v in sorted(t.items(), key=str)}
                    }
            return PASS, f"{samples} random tensors, both directions", None

        add(f"roundtrip-{which}", roundtrip)

    derivation = {}

    def generic():
        try:
            derivation["r"] = gm.kg_derive(g, points)
        except gm.ClosedFormMismatch as exc:
            return FAIL, str(exc), {"point": enc(exc.point)} if exc.point is not None else None
        return PASS, "ε(δn) = [n = e] and S(δn) = S′(δn) = δ(n⁻¹) at every window point", None

    add("generic-derivation", generic)

    def completion():
        bad = gm.kg_completion_mismatch(g, points)
        if bad is None:
            return PASS, "completion formulas reproduce T2 and T3 on all window pairs", None
        return FAIL, f"{bad[0]} differs", {"point": [enc(p) for p in bad[1]]}

    add("completion", completion)

    def pick(step: int):
        if g.finite:
            return points[min(1, len(points) - 1)]
        k = max(0, min(step, radius - 1))
        return k if g.rank == 1 else (k,) + (0,) * (g.rank - 1)

    def member_element():
        p = pick(2)
        v = gm.kg_membership(g, gm.embed_function(gm.FinSuppFunction.delta(p)), radius)
        ok = v.member and v.support == (p,)
        return (PASS if ok else FAIL), f"δ({enc(p)}): {v.detail}", None if ok else {"support": [enc(x) for x in v.support]}

    def member_unit():
        v = gm.kg_membership(g, gm.unit_multiplier(), radius)
        expected = g.finite
        ok = v.member == expected
        what = "the unit lies in A (finite group)" if expected else "the unit is not in A"
        return (PASS if ok else FAIL), f"{what}; {v.detail}", {"boundary": [enc(x) for x in v.boundary_hits]} if v.boundary_hits else None

    def member_coproduct():
        p = pick(4)
        v = gm.kg_membership(g, gm.coproduct_multiplier(g, p), radius, pairs=True)
        expected = g.finite
        ok = v.member == expected
        what = f"Δ(δ({enc(p)})) lies in A⊗A" if expected else f"Δ(δ({enc(p)})) is a multiplier outside A⊗A"
        wit = {"boundary": [f"{enc(s)}⊗{enc(t)}" for s, t in v.boundary_hits]} if v.boundary_hits else None
        return (PASS if ok else FAIL), f"{what}; {v.detail}", wit

    add("membership-element", member_element)
    add("membership-unit", member_unit)
    add("membership-coproduct", member_coproduct)

    if g.finite:

        def cross():
            r = derivation.get("r")
            if r is None:
                return SKIPPED, "generic derivation did not finish", None
            d = gm.function_algebra_model(g)
            try:
                eps = dv.derive_counit_left(d)
                s = dv.derive_antipode(d, eps)
            except dv.DerivationError as exc:
                return FAIL, f"finite backend: {exc}", None
            for k in g.elements():
                if eps.values[k] != r.epsilon[k]:
                    return FAIL, "ε differs between backends", {"point": enc(k)}
                if s.map.column(k) != {i: v for i, v in r.antipode[k].support.items()}:
                    return FAIL, "S differs between backends", {"point": enc(k)}
            cls = classify(d)
            if not cls.is_regular_MHA:
                return FAIL, "finite backend does not classify F(G) as regular", None
            return PASS, f"ε and S agree with the finite backend on all {g.order} basis functions", None

        add("cross-backend", cross)
    return rep


def group_report_json(rep: GroupReport, timing: bool = True) -> dict:
    entries = []
    for e in rep.entries:
        item = {"name": e.name, "section": "group", "status": e.status, "detail": e.detail, "witness": e.witness}
        if timing:
            item["duration_ms"] = round(e.duration_ms, 3)
        entries.append(item)
    counts = {st: sum(1 for e in rep.entries if e.status == st) for st in (PASS, FAIL, SKIPPED)}
    return {
        "instance": f"{rep.model}:{rep.group}",
        "group": rep.group,
        "model": rep.model,
        "window": rep.window,
        "entries": entries,
        "summary": counts,
        "notes": list(rep.notes),
        "banner": rep.banner,
        "exit_code": rep.exit_code,
    }


def render_group_text(rep: GroupReport, timing: bool = True) -> str:
    lines = [f"group: {rep.group}  model: {rep.model}  window: {rep.window}"]
    if rep.banner:
        lines.append(f"[{rep.banner}]")
    for e in rep.entries:
        text = f"  {e.status.upper():7} {e.name}"
        if e.detail:
            text += f"  ({e.detail})"
        if timing:
            text += f"  [{e.duration_ms:.1f} ms]"
        lines.append(text)
        if e.witness and e.status == FAIL:
            lines.append(f"          witness: {json.dumps(e.witness, ensure_ascii=False, sort_keys=True)}")
    lines.append(f"exit code: {rep.exit_code}")
    return "\n".join(lines) + "\n"


def render(report, fmt: str = "text", timing: bool = True) -> str:
    if isinstance(report, GroupReport):
        if fmt == "json":
            return json.dumps(group_report_json(report, timing), indent=2, ensure_ascii=False) + "\n"
        return render_group_text(report, timing)
    return render_json(report, timing) if fmt == "json" else render_text(report, timing)
