"""Reading and writing instance files (algebra plus coproduct) as JSON."""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .algebra import DEFAULT_MAX_DIM, AssociativityError, DimensionGuardError, FiniteAlgebra
from .coproduct import ELEMENT, MULTIPLIER, Coproduct
from .exactlin import Matrix, format_rational, parse_rational
from .multiplier import CompatibilityError, Multiplier


class InstanceError(ValueError):
    """An instance file that cannot be used.  ``where`` is a line or a field path."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where
        self.reason = message


class _FloatLiteral:
    """Stand-in for a JSON float so that schema validation reports it."""

    def __init__(self, text: str):
        self.text = text

    def __repr__(self) -> str:
        return self.text


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("mulhopf").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _field_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def parse_json(text: str, source: str = "<input>"):
    try:
        return json.loads(text, parse_float=_FloatLiteral)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc.msg} (column {exc.colno})", f"{source}: line {exc.lineno}") from None


def validate_instance(data, source: str = "<input>") -> None:
    validator = jsonschema.Draft202012Validator(load_schema("instance"))
    errors = sorted(validator.iter_errors(data), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if not errors:
        return
    err = jsonschema.exceptions.best_match(errors)
    where = f"{source}: field {_field_path(err.absolute_path)}"
    if isinstance(err.instance, _FloatLiteral):
        raise InstanceError(f"floating-point literal {err.instance.text}; write exact rationals as strings such as \"3/2\"", where)
    raise InstanceError(err.message, where)


def _rational(value, where: str) -> Fraction:
    if isinstance(value, int):
        return Fraction(value)
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise InstanceError(str(exc), where) from None


def _sparse_matrix(obj: dict, size: int, where: str) -> Matrix:
    if obj["rows"] != size or obj["cols"] != size:
        raise InstanceError(f"expected a {size}x{size} matrix, got {obj['rows']}x{obj['cols']}", where)
    rows: dict[int, dict[int, Fraction]] = {}
    for k, ent in enumerate(obj["entries"]):
        r, c = ent["r"], ent["c"]
        if r >= size or c >= size:
            raise InstanceError(f"entry ({r}, {c}) outside the {size}x{size} matrix", f"{where}.entries[{k}]")
        v = _rational(ent["v"], f"{where}.entries[{k}].v")
        row = rows.setdefault(r, {})
        s = row.get(c, 0) + v
        if s:
            row[c] = s
        else:
            row.pop(c, None)
    return Matrix._trusted(size, size, {r: row for r, row in rows.items() if row})


def instance_from_data(data, source: str = "<input>", max_dim: int = DEFAULT_MAX_DIM) -> tuple[str, Coproduct]:
    validate_instance(data, source)
    n = data["dimension"]
    if n > max_dim:
        raise InstanceError(f"dimension {n} exceeds the guard of {max_dim} (raise it with --max-dim)", f"{source}: field $.dimension")
    labels = data.get("basis_labels")
    if labels is not None and len(labels) != n:
        raise InstanceError(f"{len(labels)} labels for dimension {n}", f"{source}: field $.basis_labels")
    product = []
    for k, t in enumerate(data["product"]):
        where = f"{source}: field $.product[{k}]"
        if max(t["i"], t["j"], t["k"]) >= n:
            raise InstanceError(f"index outside dimension {n}", where)
        product.append(((t["i"], t["j"], t["k"]), _rational(t["c"], where + ".c")))
    try:
        alg = FiniteAlgebra(n, product, labels, name=data["name"])
    except AssociativityError as exc:
        raise InstanceError(f"product is not associative at basis triple {exc.triple}", f"{source}: field $.product") from None

    cop = data["coproduct"]
    values = cop["values"]
    if len(values) != n:
        raise InstanceError(f"need {n} coproduct values, got {len(values)}", f"{source}: field $.coproduct.values")
    try:
        if cop["kind"] == ELEMENT:
            tensors = []
            for i, terms in enumerate(values):
                t: dict[tuple[int, int], Fraction] = {}
                for k, term in enumerate(terms):
                    where = f"{source}: field $.coproduct.values[{i}][{k}]"
                    if term["p"] >= n or term["q"] >= n:
                        raise InstanceError(f"tensor index outside dimension {n}", where)
                    key = (term["p"], term["q"])
                    t[key] = t.get(key, 0) + _rational(term["c"], where + ".c")
                tensors.append(t)
            return data["name"], Coproduct.from_tensors(alg, tensors, max_dim=max_dim)
        size = n * n
        mults = []
        for i, v in enumerate(values):
            where = f"{source}: field $.coproduct.values[{i}]"
            left = _sparse_matrix(v["left"], size, where + ".left")
            right = _sparse_matrix(v["right"], size, where + ".right")
            mults.append((left, right))
        from .algebra import tensor_square

        square = tensor_square(alg, max_dim)
        built = []
        for i, (left, right) in enumerate(mults):
            try:
                built.append(Multiplier(square, left, right))
            except CompatibilityError as exc:
                raise InstanceError(f"not a multiplier of A⊗A: {exc}", f"{source}: field $.coproduct.values[{i}]") from None
        return data["name"], Coproduct(alg, built, MULTIPLIER, max_dim=max_dim, verify=False)
    except DimensionGuardError as exc:
        raise InstanceError(str(exc), f"{source}: field $.dimension") from None


def load_instance(path, max_dim: int = DEFAULT_MAX_DIM) -> tuple[str, Coproduct]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceError(f"cannot read file: {exc.strerror or exc}", str(path)) from None
    data = parse_json(text, str(path))
    return instance_from_data(data, str(path), max_dim)


def _matrix_json(m: Matrix) -> dict:
    rows, cols = m.shape
    return {
        "rows": rows,
        "cols": cols,
        "entries": [{"r": r, "c": c, "v": format_rational(v)} for (r, c), v in m.entries()],
    }


def instance_to_data(name: str, d: Coproduct) -> dict:
    alg = d.algebra
    n = alg.dimension
    product = [
        {"i": i, "j": j, "k": k, "c": format_rational(c)}
        for (i, j, k), c in sorted(alg.structure_constants.items())
    ]
    if d.kind == ELEMENT:
        tensors = d.element_values()
        if tensors is None:
            raise ValueError("element-kind coproduct has a value outside A⊗A")
        values = [
            [{"p": pq // n, "q": pq % n, "c": format_rational(c)} for pq, c in sorted(t.items())]
            for t in tensors
        ]
        cop = {"kind": ELEMENT, "values": values}
    else:
        cop = {
            "kind": MULTIPLIER,
            "values": [{"left": _matrix_json(v.left), "right": _matrix_json(v.right)} for v in d.values],
        }
    return {
        "name": name,
        "dimension": n,
        "basis_labels": list(alg.basis_labels),
        "product": product,
        "coproduct": cop,
    }


def dumps_instance(name: str, d: Coproduct) -> str:
    return json.dumps(instance_to_data(name, d), indent=2, ensure_ascii=False) + "\n"
