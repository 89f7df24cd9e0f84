"""End-to-end checks of the qgrad command line: exit codes, files, determinism."""

import csv
import json
import subprocess
import sys
import tempfile
from pathlib import Path

QGRAD = sys.argv[1]
CONFIGS = Path(sys.argv[2])
failures = []


def run(*args):
    return subprocess.run([QGRAD, *map(str, args)], capture_output=True, text=True, timeout=600)


def expect(name, proc, code):
    if proc.returncode != code:
        failures.append(f"{name}: exit {proc.returncode}, expected {code}\n{proc.stderr}")
    return proc


def write(tmp, name, text):
    p = Path(tmp) / name
    p.write_text(text)
    return p


with tempfile.TemporaryDirectory() as tmp:
    expect("check ok", run("check", "--config", CONFIGS / "example1d.ini"), 0)
    bad = expect("check violation", run("check", "--config", CONFIGS / "bad_split.ini"), 2)
    if json.loads(bad.stdout)["ok"] is not False:
        failures.append("check violation: ok should be false")

    expect("no subcommand", run(), 1)
    expect("unknown scenario", run("scenario", "nope"), 1)
    expect("missing config", run("solve", "--config", Path(tmp) / "none.ini"), 1)
    unknown = write(tmp, "unknown.ini", "[problem]\nspeed = 3\n")
    expect("unknown key", run("solve", "--config", unknown), 1)
    broken = write(tmp, "broken.ini", '[problem]\nh = "1 +"\n')
    err = expect("parse error", run("solve", "--config", broken), 1)
    if json.loads(err.stdout)["error"] != {"type": "ParseError", "message": "unexpected end of input at offset 3", "offset": 3}:
        failures.append(f"parse error document: {err.stdout}")

    split = write(tmp, "split.ini", "[domain]\nn = 50\n[problem]\ncplus = 1\ncminus = 1\n[lambda]\nvalue = 1\n")
    spec = expect("spec error on solve", run("solve", "--config", split), 2)
    if json.loads(spec.stdout)["error"]["type"] != "SpecError":
        failures.append("spec error type")

    beyond = write(tmp, "beyond.ini", "[domain]\nn = 100\n[problem]\nh = 0.05\n[lambda]\nvalue = 9.5\n")
    expect("solver failure beyond the fold", run("solve", "--config", beyond), 3)

    expect("verdict failure", run("scenario", "example1d", "--grid", 20), 4)

    out = Path(tmp) / "out"
    expect("sweep", run("sweep", "--config", CONFIGS / "h0_unit.ini", "--grid", 100, "--out", out), 0)
    with open(out / "sweep.csv") as f:
        rows = list(csv.DictReader(f))
    if not rows or list(rows[0]) != ["scenario", "lambda", "kind", "energy", "residual", "umin", "umax", "ordering"]:
        failures.append("sweep csv columns")
    doc = json.loads((out / "sweep.json").read_text())
    if doc["schema"] != "qgrad.branch_diagram/1" or not doc["records"]:
        failures.append("sweep json schema")

    first, second = Path(tmp) / "a", Path(tmp) / "b"
    for d in (first, second):
        expect("scenario", run("scenario", "th3_sign", "--seed", 5, "--out", d), 0)
    for name in ("th3_sign.json", "th3_sign.csv"):
        if (first / name).read_bytes() != (second / name).read_bytes():
            failures.append(f"{name} differs between identical runs")

    md = expect("md", run("md", "--config", CONFIGS / "md_unit.ini", "--grid", 100), 0)
    if abs(json.loads(md.stdout)["md"] - 0.8986795) > 1e-4:
        failures.append(f"md value {md.stdout[:80]}")

for f in failures:
    print("FAIL", f)
print("cli e2e:", "FAIL" if failures else "PASS")
sys.exit(1 if failures else 0)
