#!/usr/bin/env python3
"""Cool a 12-site chain at the hardware operating point.

Writes the energy relaxation curve and the final mode occupations (raw and
purified) to runs/cooling-experimental/.
"""

import pathlib
import sys

from floqcool.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    sys.exit(
        main(
            [
                "cool",
                "--config", str(ROOT / "configs" / "cooling_experimental.yaml"),
                "--out", "runs/cooling-experimental",
            ]
        )
    )
