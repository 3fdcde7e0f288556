import json
import subprocess
import sys

import jsonschema
import pytest

from mulhopf import gallery
from mulhopf.cli import main
from mulhopf.io import load_schema


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def emitted(tmp_path_factory):
    root = tmp_path_factory.mktemp("gallery")
    paths = {}
    for name in gallery.POSITIVE + gallery.NEGATIVE + ["sweedler-h4-multiplier-form"]:
        path = root / f"{name}.json"
        assert main(["examples", "emit", name, "-o", str(path)]) == 0
        paths[name] = path
    return paths


def test_examples_list(capsys):
    code, out, _ = run(capsys, "examples", "list")
    assert code == 0
    assert "sweedler-h4" in out and "broken-coassoc" in out


def test_unknown_example(capsys):
    code, _, err = run(capsys, "examples", "emit", "nope")
    assert code == 2 and "unknown example" in err


@pytest.mark.parametrize("name", gallery.POSITIVE + ["sweedler-h4-multiplier-form"])
def test_positive_exit_zero(name, emitted, capsys):
    code, out, _ = run(capsys, "check", str(emitted[name]), "--format", "json")
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, load_schema("report"))
    assert all(e["status"] == "pass" for e in report["entries"])


@pytest.mark.parametrize("name", gallery.NEGATIVE)
def test_negative_exit_one_with_witness(name, emitted, capsys):
    code, out, _ = run(capsys, "check", str(emitted[name]), "--format", "json")
    assert code == 1
    report = json.loads(out)
    jsonschema.validate(report, load_schema("report"))
    failing = [e for e in report["entries"] if e["status"] == "fail"]
    assert failing and all(e["witness"] for e in failing)


def test_broken_homomorphism_text_report(emitted, capsys):
    code, out, _ = run(capsys, "check", str(emitted["broken-homomorphism"]))
    assert code == 1
    assert "FAIL    homomorphism" in out
    assert "first failure: homomorphism at (a=t, b=t), residual -2*t⊗t" in out


def test_derive_dumps_structure(emitted, capsys):
    code, out, _ = run(capsys, "check", str(emitted["sweedler-h4"]), "--derive", "--format", "json")
    report = json.loads(out)
    assert code == 0
    assert report["structure"]["epsilon"] == ["1", "1", "0", "0"]
    assert any("S∘S" in n for n in report["notes"])


def test_side_option(emitted, capsys):
    code, out, _ = run(capsys, "check", str(emitted["pathological-qc2"]), "--side", "left", "--format", "json")
    assert code == 1
    report = json.loads(out)
    statuses = {e["name"]: e["status"] for e in report["entries"]}
    assert statuses["counit-derivation"] == "skipped"


def test_input_errors_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x", "dimension": 1, "product": [{"i": 0, "j": 0, "k": 0, "c": 1.5}], '
                   '"coproduct": {"kind": "element", "values": [[]]}}')
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2 and "$.product[0].c" in err
    code, _, err = run(capsys, "check", str(tmp_path / "missing.json"))
    assert code == 2
    with pytest.raises(SystemExit) as info:
        main(["check"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["check", str(bad), "--max-dim", "0"])
    assert info.value.code == 2


def test_max_dim_guard(emitted, capsys):
    code, _, err = run(capsys, "check", str(emitted["sweedler-h4"]), "--max-dim", "3")
    assert code == 2 and "--max-dim" in err


def test_determinism(emitted, capsys):
    for fmt in ("text", "json"):
        outs = {run(capsys, "check", str(emitted["sweedler-h4"]), "--derive", "--no-timing", "--format", fmt)[1] for _ in range(3)}
        assert len(outs) == 1
    outs = {run(capsys, "group", "--group", "z", "--window", "4", "--samples", "50", "--no-timing", "--format", "json")[1] for _ in range(2)}
    assert len(outs) == 1


def test_group_kg_on_z(capsys):
    code, out, _ = run(capsys, "group", "--group", "z", "--window", "10", "--format", "json")
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, load_schema("report"))
    statuses = {e["name"]: e["status"] for e in report["entries"]}
    assert set(statuses.values()) == {"pass"}
    assert "window-only" in report["banner"]


def test_group_qg_on_finite_and_infinite(tmp_path, capsys):
    code, out, _ = run(capsys, "group", "--group", "z", "--model", "qg")
    assert code == 0 and "window-only" in out
    target = tmp_path / "c3.json"
    code, out, _ = run(capsys, "group", "--group", "cyclic:3", "--model", "qg", "--emit", str(target))
    assert code == 0 and target.exists()
    code, _, _ = run(capsys, "check", str(target))
    assert code == 0


def test_group_errors(capsys):
    code, _, err = run(capsys, "group", "--group", "q8")
    assert code == 2 and "unknown group spec" in err
    code, _, err = run(capsys, "group", "--group", "z", "--emit", "x.json")
    assert code == 2


def test_module_entry_point(emitted):
    proc = subprocess.run(
        [sys.executable, "-m", "mulhopf", "check", str(emitted["zero-coproduct"]), "--no-timing"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1
    assert "FAIL" in proc.stdout
