#!/usr/bin/env python3
"""Run the full end-to-end validation battery.

Prints one verdict line per check and writes runs/validation/validation.csv.
The trajectory-sampled comparisons dominate the runtime (expect on the
order of fifteen minutes); exits nonzero if any check fails.
"""

import sys

from floqcool.cli import main

if __name__ == "__main__":
    sys.exit(main(["validate", "--out", "runs/validation"]))
