import random

import jsonschema

from fuzzgen import audit, random_case
from mulhopf.io import load_schema
from mulhopf.report import report_json, run_check


def test_random_pipeline_runs_keep_their_invariants():
    rng = random.Random(2024)
    schema = load_schema("report")
    problems = []
    left = 0
    for k in range(150):
        label, d = random_case(rng)
        report = run_check(label, d)
        problems += audit(f"#{k} {label}", report)
        jsonschema.validate(report_json(report, timing=False), schema)
        left += report.classification["is_left_MHA"]
    assert problems == []
    # the generator must actually exercise both verdicts
    assert 10 < left < 140
