"""
Volume files and the command line
=================================

Volumes are stored as one JSON header line followed by a raw little-endian
payload.  The ``volmrf`` command chains the whole pipeline over such files.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from volmrf import read_volume

work = Path(tempfile.mkdtemp())


def volmrf(*args):
    cmd = [sys.executable, "-m", "volmrf", *map(str, args)]
    print("$ volmrf", " ".join(map(str, args)))
    subprocess.run(cmd, check=True)


volmrf("phantom", "--out", work, "--seed", 7, "--dims", "24,24,24")
blob = (work / "prob.vol").read_bytes()
print("header:", json.loads(blob[: blob.index(b"\n")]))

volmrf("argmax", "--prob", work / "prob.vol", "--out", work / "argmax.vol")
volmrf("refine", "--prob", work / "prob.vol", "--intensity", work / "intensity.vol",
       "--out", work / "refined.vol", "--lambda", 1.0)
report = json.loads((work / "refined.vol.report.json").read_text())
print(f"energy {report['initial_energy']:.1f} -> {report['final_energy']:.1f}, "
      f"{report['sweeps_executed']} sweeps")

for name in ("argmax", "refined"):
    volmrf("evaluate", "--pred", work / f"{name}.vol", "--gt", work / "gt.vol", "--out", work / f"{name}.csv")
    print((work / f"{name}.csv").read_text())

print("refined labels:", read_volume(work / "refined.vol").data.shape)
