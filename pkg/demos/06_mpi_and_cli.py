"""
Poverty index and the command line
==================================

The MPI summary of an indicator matrix, then the same dataset pushed through
the ``bicausal`` commands.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from bicausal import BinaryDataset, mpi_index, save_csv

# Four households, four indicators; deprivation scores 1/4, 1/2, 3/4 and 1.
ds = BinaryDataset(np.tril(np.ones((4, 4), dtype=np.uint8)), ["water", "school", "income", "health"])
res = mpi_index(ds, threshold=0.5)
print("per-row:", res.per_row_deprivation, " m0 = q0 * a0 =", res.q0, "*", res.a0, "=", res.m0)

work = Path(tempfile.mkdtemp())
save_csv(ds, work / "households.csv")


def bicausal(*args):
    out = subprocess.run([sys.executable, "-m", "bicausal", *args], capture_output=True, text=True)
    print("$ bicausal", " ".join(args), f"-> exit {out.returncode}")
    print(out.stdout.strip() or out.stderr.strip())
    return out


bicausal("mpi", str(work / "households.csv"), "--threshold", "0.5")
bicausal("mpi", str(work / "households.csv"), "--threshold", "1.5")  # configuration error, exit 2

bicausal("simulate", "--benchmark", "0.3", "--n", "500", "--seed", "7", "--out", str(work / "sim"))
bicausal("discover", str(work / "sim" / "data.csv"), "--seed", "1", "--format", "dot",
         "--out", str(work / "disc"))

# The manifest lists the resolved arguments; rerunning them reproduces report.json exactly.
manifest = json.loads((work / "disc" / "manifest.json").read_text())
print("manifest argv:", manifest["argv"])
print((work / "disc" / "graph.dot").read_text())
