#!/usr/bin/env python3
"""Boundary-driven transport in the three anisotropy regimes.

Runs the easy-plane, isotropic, and easy-axis points in parallel and writes
per-regime currents and density profiles under runs/transport/point-000*/.
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
                "--config", str(ROOT / "configs" / "transport_regimes.yaml"),
                "--out", "runs/transport",
            ]
        )
    )
