"""Run every CLI command and validate the emitted summaries against the published schemas."""
import json
import pathlib
import subprocess
import sys

from jsonschema import Draft202012Validator
from referencing import Registry, Resource


def main() -> int:
    smvt, schema_dir, data_dir, out = sys.argv[1:5]
    schema_dir = pathlib.Path(schema_dir)
    out = pathlib.Path(out)
    schemas = {p.name: json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    registry = Registry().with_resources(
        (name, Resource.from_contents(s)) for name, s in schemas.items())
    summary = Draft202012Validator(schemas["summary.schema.json"], registry=registry)
    config = Draft202012Validator(schemas["config.schema.json"], registry=registry)
    space = Draft202012Validator(schemas["space.schema.json"], registry=registry)

    die = pathlib.Path(data_dir) / "die.json"
    runs = [
        ["solve", "--fn", "poly:0,0,1", "--a", "0", "--x", "2"],
        ["solve", "--fn", "sincos", "--a", "0,0", "--x", "1,2", "--n", "2"],
        ["expand", "--fn", "sin", "--a", "0.3", "--x", "0.7", "--n", "3"],
        ["verify", "--fn", "sin", "--n", "3", "--N", "500", "--seed", "7"],
        ["verify", "--fn", "log1p", "--N", "200", "--seed", "3"],
        ["measurability", "--fn", "exp", "--space", str(die)],
        ["mle-demo", "--reps", "50", "--seed", "1"],
        ["delta-demo", "--fn", "poly:0,0,1", "--dist", "uniform:0,1", "--reps", "50", "--seed", "2"],
        ["two-rv", "--fn", "sin", "--N", "50", "--y-dist", "normal:0,1", "--seed", "4"],
        ["two-rv", "--fn", "exp", "--space", str(die), "--y-space", str(die)],
    ]
    problems = 0
    for k, args in enumerate(runs):
        target = out / str(k)
        proc = subprocess.run([smvt, *args, "--out", str(target)], capture_output=True, text=True)
        if proc.returncode not in (0, 2):
            print(f"FAIL {' '.join(args)}: exit {proc.returncode}\n{proc.stderr}")
            problems += 1
            continue
        for path in target.glob("*.json"):
            doc = json.loads(path.read_text())
            errors = list(summary.iter_errors(doc))
            errors += list(config.iter_errors(doc["config"]))
            for e in errors:
                print(f"FAIL {path}: {e.json_path}: {e.message}")
            problems += len(errors)
            if not errors:
                print(f"ok   {' '.join(args)}")
    for e in space.iter_errors(json.loads(die.read_text())):
        print(f"FAIL {die}: {e.json_path}: {e.message}")
        problems += 1
    return 1 if problems else 0


if __name__ == "__main__":
    sys.exit(main())
