"""End-to-end checks of the rkit command line: exit codes, outputs, determinism."""
import json
import os
import subprocess
import sys
import tempfile

RKIT = sys.argv[1]
failures = []


def run(*args, env=None):
    return subprocess.run([RKIT, *args], capture_output=True, text=True, env=env)


def expect(cond, what):
    if not cond:
        failures.append(what)


def stable(path):
    with open(path) as fh:
        doc = json.load(fh)
    doc.pop("timing", None)
    return json.dumps(doc, sort_keys=True)


with tempfile.TemporaryDirectory() as tmp:
    p = lambda name: os.path.join(tmp, name)

    with open(p("f.csv"), "w") as fh:
        fh.write("x,value\n-1,1\n0,3\n1,2\n")
    r = run("rearrange", "--kind", "decreasing", "--input", p("f.csv"), "--output", p("d.csv"))
    expect(r.returncode == 0, "rearrange exit 0: " + r.stderr)
    with open(p("d.csv")) as fh:
        vals = [float(line.split(",")[1]) for line in fh.read().splitlines()[1:]]
    expect(vals == [3.0, 2.0, 1.0], "decreasing values %r" % vals)

    expect(run("rearrange", "--input", p("f.csv")).returncode == 2, "missing --kind exits 2")
    with open(p("bad.csv"), "w") as fh:
        fh.write("x,value\n0,1\n1,2\n3,1\n")
    r = run("rearrange", "--kind", "symmetric", "--input", p("bad.csv"), "--output", p("o.csv"))
    expect(r.returncode == 2, "non-uniform grid exits 2, got %d" % r.returncode)

    with open(p("spec.txt"), "w") as fh:
        fh.write("kind=power\np=3\n")
    r = run("minimize", "--spec", p("spec.txt"), "--alpha", "1", "--h", "0.05", "--out", p("m.json"))
    expect(r.returncode == 0, "minimize exit 0: " + r.stderr)
    with open(p("m.json")) as fh:
        m = json.load(fh)
    expect("manifest" in m, "minimize manifest")
    energy = json.dumps(m)
    expect("-0.0104" in energy, "minimize energy near -1/96")

    r = run("sweep", "--alphas", "0.5,1,2", "--h", "0.05", "--out", p("curve.csv"))
    expect(r.returncode == 0, "sweep exit 0: " + r.stderr)
    with open(p("curve.csv")) as fh:
        rows = [list(map(float, line.split(","))) for line in fh.read().splitlines()[1:]]
    expect(all(b[1] < a[1] for a, b in zip(rows, rows[1:])), "sweep decreasing")

    expect(run("verify", "--suite", "nope").returncode == 2, "unknown suite exits 2")

    outs = []
    for jobs in ("1", "1", "4"):
        name = p("v%d.json" % len(outs))
        r = run("verify", "--suite", "all", "--seed", "7", "--jobs", jobs, "--out", name)
        expect(r.returncode == 0, "verify all passes: " + r.stdout[-400:])
        outs.append(stable(name))
    expect(outs[0] == outs[1], "verify identical across runs")
    expect(outs[0] == outs[2], "verify identical across --jobs")

    env = dict(os.environ, RKIT_SEED="3")
    run("verify", "--suite", "lemma1", "--seed", "7", "--out", p("s.json"), env=env)
    with open(p("s.json")) as fh:
        expect(json.load(fh)["manifest"]["seed"] == 3, "RKIT_SEED overrides --seed")

for f in failures:
    print("FAIL:", f)
print("cli smoke:", "FAIL" if failures else "PASS")
sys.exit(1 if failures else 0)
