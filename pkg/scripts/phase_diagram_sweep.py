#!/usr/bin/env python3
"""Steady-state cooling performance across the phase diagram.

Sweeps the transverse field over both gapped phases and the critical point
on a process pool; the aggregated energy ratios land in
runs/phase-diagram/sweep.csv.
"""

import pathlib
import sys

from floqcool.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    sys.exit(
        main(
            [
                "sweep",
                "--config", str(ROOT / "configs" / "sweep_phase_diagram.yaml"),
                "--out", "runs/phase-diagram",
            ]
        )
    )
