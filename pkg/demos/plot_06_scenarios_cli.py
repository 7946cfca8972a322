"""
Scenario files and the command line
===================================

A scenario is a JSON file: a threefold model (or volumes), a surface
lattice, the chambers of the divisor, and the curves and points to refine
along.  ``deltakit run`` evaluates it and can compare against expected
values.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from deltakit import bundled, run, scale_scenario
from deltakit.scenario import bundled_path

print(sorted(bundled()))

# Run a bundled scenario and print selected results.
rep = run(bundled("r1"), ["s_divisor", "delta"])
print({k: str(x) for k, x in rep.results.items()})

# Doubling the divisor doubles every S and F value and leaves delta alone.
sc = bundled("qp")
a, b = run(sc), run(scale_scenario(sc, 2))
print(a.results["s_curve:B"], "->", b.results["s_curve:B"], "; delta", a.results["delta"], b.results["delta"])

# The CLI reports a wrong expected value with exit code 2.
data = json.loads(bundled_path("e2").read_text())
data["expected"]["s_curve:l2"] = "1"
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "wrong.json"
    path.write_text(json.dumps(data))
    cmd = [sys.executable, "-m", "deltakit.cli", "run", str(path), "--check", "--format", "md"]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    print("exit code", proc.returncode)
    print(proc.stdout[:600])
