#!/usr/bin/env python3
"""Checks the shipped schemas against the CLI.

usage: validate_schema.py <subschur_cli> <source_dir>

1. `schema` prints exactly schema/scenario.schema.json.
2. Every scenario under scenarios/ validates against it.
3. Malformed scenarios are rejected by both the schema and the CLI (exit 2).
4. Reports produced from the scenarios and from every gallery example
   validate against schema/report.schema.json.
"""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def fail(msg):
    print("FAIL:", msg)
    sys.exit(1)


def main():
    cli, src = sys.argv[1], pathlib.Path(sys.argv[2])
    shipped = json.loads((src / "schema" / "scenario.schema.json").read_text())
    report_schema = json.loads((src / "schema" / "report.schema.json").read_text())

    printed = subprocess.run([cli, "schema"], capture_output=True, text=True, check=True).stdout
    if json.loads(printed) != shipped:
        fail("`schema` output differs from schema/scenario.schema.json")
    jsonschema.Draft202012Validator.check_schema(shipped)
    jsonschema.Draft202012Validator.check_schema(report_schema)
    scenario_v = jsonschema.Draft202012Validator(shipped)
    report_v = jsonschema.Draft202012Validator(report_schema)

    scenarios = sorted((src / "scenarios").glob("*.json"))
    if not scenarios:
        fail("no scenarios found")
    for path in scenarios:
        errors = list(scenario_v.iter_errors(json.loads(path.read_text())))
        if errors:
            fail(f"{path.name}: {errors[0].message}")

    bad = [
        {"kernel": {"type": "matrix", "rows": [[1]]}},
        {"q": 0, "kernel": {"type": "matrix", "rows": [[1]]}},
        {"q": 0.5, "kernel": {"type": "matrix", "rows": [[1]]}, "tasks": ["no_such_task"]},
        {"q": 0.5, "kernel": {"type": "triangle"}},
        {"q": 0.5, "kernel": {"type": "matrix", "rows": [[-1]]}},
    ]
    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        for i, doc in enumerate(bad):
            if scenario_v.is_valid(doc):
                fail(f"schema accepts malformed scenario {doc}")
            f = tmp / f"bad{i}.json"
            f.write_text(json.dumps(doc))
            rc = subprocess.run([cli, "analyze", str(f), "--out", str(tmp / "bad")], capture_output=True).returncode
            if rc != 2:
                fail(f"CLI exit {rc} on malformed scenario {doc}")

        out = tmp / "reports"
        rc = subprocess.run([cli, "analyze", *map(str, scenarios), "--out", str(out), "--jobs", "2"]).returncode
        if rc != 0:
            fail(f"analyze exited {rc}")
        for name in ["block", "geometric", "geometric_positive", "harmonic", "riesz", "interval_green"]:
            rc = subprocess.run([cli, "gallery", name, "--out", str(out)], capture_output=True).returncode
            if rc != 0:
                fail(f"gallery {name} exited {rc}")
        reports = sorted(out.glob("*.json"))
        if len(reports) != len(scenarios) + 6:
            fail(f"expected {len(scenarios) + 6} reports, found {len(reports)}")
        for path in reports:
            errors = list(report_v.iter_errors(json.loads(path.read_text())))
            if errors:
                fail(f"{path.name}: {errors[0].json_path}: {errors[0].message}")

    print(f"ok: {len(scenarios)} scenarios, {len(reports)} reports valid")


if __name__ == "__main__":
    main()
