#!/usr/bin/env python3
"""Validate fixtures and fresh CLI artifacts against schemas/."""
import json
import subprocess
import sys
from pathlib import Path

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

root = Path(__file__).resolve().parent.parent
cli = sys.argv[1]
fx = root / "fixtures"

resources = {}
for p in (root / "schemas").glob("*.schema.json"):
    schema = json.loads(p.read_text())
    resources[schema["$id"]] = Resource.from_contents(schema)
registry = Registry().with_resources(resources.items())


def validator(name):
    return Draft202012Validator(resources[name + ".schema.json"].contents, registry=registry)


def run(*args, expect):
    proc = subprocess.run([cli, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        raise SystemExit(f"{' '.join(args)}: exit {proc.returncode}, wanted {expect}\n{proc.stderr}")
    return json.loads(proc.stdout)


def m(name):
    return str(fx / "maps" / f"{name}.json")


checks = []
checks += [("map", json.loads(p.read_text()), p.name) for p in sorted((fx / "maps").glob("*.json"))]
checks += [("polyline", json.loads(p.read_text()), p.name) for p in sorted((fx / "curves").glob("*.json"))]
checks += [("grid", json.loads((fx / "grids" / "uniform_k4.json").read_text()), "uniform_k4.json")]
checks += [
    ("grid", run("grid", "build", "--map", m("cavitation"), "--K", "4", "--seed", "7", expect=0), "grid build"),
    ("arrival", run("arrival", "build", "--map", m("shear_0.5"), "--grid", str(fx / "grids" / "uniform_k4.json"),
                    "--eta", "0.1", "--seed", "1", expect=0), "arrival build"),
    ("gridmap", run("injectify", "run", "--map", m("twist"), "--K", "3", "--eta", "0.2", "--seed", "5", expect=0),
     "injectify run"),
    ("inv", run("inv", "check", "--map", m("counterexample"), "--tol", "inv_check.n_curve=64", expect=1), "inv check"),
    ("witness", run("witness", "run", "--curve", str(fx / "curves" / "s_curve.json"), "--eps", "0.1", expect=0),
     "witness run"),
    ("error", run("injectify", "run", "--map", m("embedded_counterexample"), "--grid",
                  str(fx / "grids" / "uniform_k4.json"), "--eta", "0.1", "--seed", "1", expect=1), "collapse"),
    ("error", run("witness", "run", "--curve", str(fx / "curves" / "non_transversal.json"), "--eps", "0.05", expect=1),
     "non-transversal"),
]

failed = 0
for schema, doc, label in checks:
    errors = list(validator(schema).iter_errors(doc))
    for e in errors[:3]:
        print(f"{label} vs {schema}: {e.message} at {list(e.absolute_path)}")
    failed += bool(errors)
print(f"{len(checks) - failed}/{len(checks)} documents valid")
sys.exit(1 if failed else 0)
