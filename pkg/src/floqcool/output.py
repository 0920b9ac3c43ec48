"""Result files: self-describing CSV tables and JSON run manifests.

Every CSV starts with ``#``-comment lines carrying the fully resolved config
(one JSON line), the seed/engine the run used, and a units/conventions block
naming the meaning of each column, so a result file is interpretable on its
own.  Numeric cells are written with ``repr`` (shortest round-trip form) and
must be finite; a NaN or infinity anywhere is a bug in the producing command
and raises instead of being written.  Each run directory also gets a
``manifest.json`` recording the command, config, seed, library versions, wall
time, and the list of files written.
"""

from __future__ import annotations

import csv
import json
import math
import platform
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import scipy

from . import __version__

_CONVENTIONS = (
    "angles in radians; one cycle = one Floquet period",
    "qubit |0> is the +1 eigenstate of Z and maps to an occupied fermion mode",
    "quasienergies phi in (-pi, pi] per cycle; energies in the Hamiltonian's "
    "own units",
)


@dataclass
class Family:
    """One observable family: a named CSV table plus per-column units."""

    name: str
    columns: Sequence[str]
    units: Sequence[str]  # one description per column
    rows: List[Sequence]

    def __post_init__(self) -> None:
        if len(self.units) != len(self.columns):
            raise ValueError(
                f"{self.name}: {len(self.columns)} columns but "
                f"{len(self.units)} unit descriptions"
            )


@dataclass
class RunResult:
    """Everything a command computed: CSV families plus summary scalars."""

    families: List[Family]
    summary: Dict[str, object] = field(default_factory=dict)


def _format_cell(value, column: str, row_index: int, name: str) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(
                f"{name}.csv: non-finite value in column {column!r} "
                f"at data row {row_index}"
            )
        return repr(value)
    if isinstance(value, str):
        return value
    raise TypeError(
        f"{name}.csv: unsupported cell type {type(value).__name__} "
        f"in column {column!r}"
    )


def write_family(
    out_dir: Path,
    family: Family,
    header_lines: Sequence[str],
) -> Path:
    path = out_dir / f"{family.name}.csv"
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("# columns:\n")
        for col, unit in zip(family.columns, family.units):
            fh.write(f"#   {col}: {unit}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(family.columns)
        for i, row in enumerate(family.rows):
            if len(row) != len(family.columns):
                raise ValueError(
                    f"{family.name}.csv: row {i} has {len(row)} cells, "
                    f"expected {len(family.columns)}"
                )
            writer.writerow(
                [_format_cell(v, c, i, family.name) for v, c in zip(row, family.columns)]
            )
    return path


def header_lines(command: str, config: dict, seed, engine: str,
                 trajectories: int) -> List[str]:
    lines = [
        f"floqcool {command} (package version {__version__})",
        "config: " + json.dumps(config, sort_keys=True, separators=(",", ":")),
        f"seed: {seed}  engine: {engine}  trajectories: {trajectories}",
        "conventions:",
    ]
    lines += [f"  {c}" for c in _CONVENTIONS]
    return lines


def write_run(
    out_dir: str | Path,
    command: str,
    config: dict,
    seed,
    engine: str,
    trajectories: int,
    result: RunResult,
    wall_time_s: Optional[float] = None,
    argv: Optional[Sequence[str]] = None,
) -> Path:
    """Write all families plus the manifest; returns the run directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    head = header_lines(command, config, seed, engine, trajectories)
    written = [write_family(out, fam, head) for fam in result.families]
    manifest = {
        "command": command,
        "argv": list(argv) if argv is not None else None,
        "config": config,
        "seed": seed,
        "engine": engine,
        "trajectories": trajectories,
        "summary": _jsonable(result.summary),
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "floqcool": __version__,
        },
        "wall_time_s": wall_time_s,
        "outputs": [p.name for p in written],
    }
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    return value
