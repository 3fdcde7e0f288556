import json

import pytest

from mulhopf import gallery
from mulhopf.coproduct import MULTIPLIER, axiom_results, canonical_map
from mulhopf.io import InstanceError, dumps_instance, instance_from_data, load_instance, parse_json

ROUND_TRIP = ["sweedler-h4", "sweedler-h4-multiplier-form", "broken-homomorphism", "degenerate-product", "cyclic-4"]


def minimal():
    return {
        "name": "Q[C2]",
        "dimension": 2,
        "product": [
            {"i": 0, "j": 0, "k": 0, "c": 1},
            {"i": 0, "j": 1, "k": 1, "c": 1},
            {"i": 1, "j": 0, "k": 1, "c": 1},
            {"i": 1, "j": 1, "k": 0, "c": "1"},
        ],
        "coproduct": {
            "kind": "element",
            "values": [[{"p": 0, "q": 0, "c": 1}], [{"p": 1, "q": 1, "c": "1/1"}]],
        },
    }


@pytest.mark.parametrize("name", ROUND_TRIP)
def test_round_trip(name, tmp_path):
    inst = gallery.get(name)
    path = tmp_path / "x.json"
    path.write_text(dumps_instance(inst.name, inst.coproduct))
    loaded_name, d = load_instance(path)
    assert loaded_name == inst.name
    assert d.kind == inst.coproduct.kind
    assert d.algebra.same_structure(inst.algebra)
    a, b = axiom_results(d), axiom_results(inst.coproduct)
    assert {k: v.status for k, v in a.items()} == {k: v.status for k, v in b.items()}
    # and a second dump is byte-identical
    assert dumps_instance(loaded_name, d) == path.read_text()


def test_multiplier_kind_is_loaded_as_multipliers(tmp_path):
    inst = gallery.get("sweedler-h4-multiplier-form")
    _, d = instance_from_data(json.loads(dumps_instance(inst.name, inst.coproduct)))
    assert d.kind == MULTIPLIER
    assert canonical_map(d, "T1").matrix == canonical_map(gallery.get("sweedler-h4").coproduct, "T1").matrix


def test_minimal_instance():
    name, d = instance_from_data(minimal())
    assert name == "Q[C2]" and d.n == 2


def errors_for(data):
    with pytest.raises(InstanceError) as info:
        instance_from_data(data, "inst.json")
    return str(info.value)


def test_float_literals_are_rejected_with_a_field_path():
    text = json.dumps(minimal()).replace('"c": "1/1"', '"c": 0.5')
    data = parse_json(text, "inst.json")
    msg = errors_for(data)
    assert "$.coproduct.values[1][0].c" in msg
    assert "floating-point" in msg


def test_bad_rational_string():
    data = minimal()
    data["product"][0]["c"] = "1/0"
    assert "$.product[0]" in errors_for(data)


def test_missing_field():
    data = minimal()
    del data["coproduct"]
    assert "coproduct" in errors_for(data)


def test_index_out_of_range():
    data = minimal()
    data["product"][2]["k"] = 5
    assert "$.product[2]" in errors_for(data)
    data = minimal()
    data["coproduct"]["values"][0][0]["q"] = 2
    assert "$.coproduct.values[0][0]" in errors_for(data)


def test_wrong_number_of_values():
    data = minimal()
    data["coproduct"]["values"].pop()
    assert "$.coproduct.values" in errors_for(data)


def test_non_associative_product():
    data = minimal()
    data["product"] = [{"i": 0, "j": 0, "k": 1, "c": 1}, {"i": 0, "j": 1, "k": 0, "c": 1}]
    assert "not associative" in errors_for(data)


def test_dimension_guard():
    data = minimal()
    with pytest.raises(InstanceError) as info:
        instance_from_data(data, "inst.json", max_dim=1)
    assert "--max-dim" in str(info.value)


def test_incompatible_multiplier(tmp_path):
    inst = gallery.get("sweedler-h4-multiplier-form")
    data = json.loads(dumps_instance(inst.name, inst.coproduct))
    data["coproduct"]["values"][1]["right"] = data["coproduct"]["values"][2]["right"]
    msg = errors_for(data)
    assert "$.coproduct.values[1]" in msg and "multiplier" in msg


def test_syntax_error_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "name": "x",\n  "dimension": 2,,\n}')
    with pytest.raises(InstanceError) as info:
        load_instance(path)
    assert "line 3" in str(info.value)


def test_missing_file(tmp_path):
    with pytest.raises(InstanceError):
        load_instance(tmp_path / "nope.json")
