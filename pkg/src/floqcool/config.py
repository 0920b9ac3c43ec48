"""Config files: schema, loading, and validation.

A run is configured by a YAML file with one section per command, each section
mirroring the fields of the corresponding dataclass (``cooling`` ->
:class:`~floqcool.cooling.CoolingConfig`, ``xxz`` ->
:class:`~floqcool.xxz.XXZConfig`, and so on; see ``docs/config_schema.md``).
Sections a command does not use are ignored, and every field is optional:
omitted fields keep their dataclass defaults, so the empty file is a valid
config.  Any unknown field, wrong type, or value rejected by a dataclass
raises :class:`ConfigError` carrying the dotted path of the offending field.
"""

from __future__ import annotations

import dataclasses
import typing
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
import yaml

from .cooling import CoolingConfig, NoiseRates, OneQubitConfig
from .xxz import XXZConfig


class ConfigError(ValueError):
    """A config file violated the schema; the message names the field path."""


@dataclass(frozen=True)
class EigenmodeSection:
    """Parameters of a bare eigenmode solve (no circuit run)."""

    L: int = 6
    g: float = 0.2
    J: float = 0.2


@dataclass(frozen=True)
class SecularSection:
    """Parameters of a golden-rule steady-state evaluation."""

    L: int = 6
    g: float = 0.2
    J: float = 0.2
    theta: float = 0.11 * np.pi  # radians
    h: float = 1.6
    reset_period: int = 4
    optimize: bool = False  # also scan h and report the optimum


@dataclass(frozen=True)
class CompareSection:
    """Parameters of the dissipative-vs-unitary preparation comparison."""

    L_values: Tuple[int, ...] = (6, 12, 18)
    g: float = 0.2
    J: float = 0.2
    theta: float = 0.11 * np.pi  # radians
    h: float = 1.65
    reset_period: int = 4
    cycles: int = 150  # cooling cycles per trajectory (trajectory mode only)
    trajectories: int = 0  # 0 -> deterministic dephasing-averaged comparison
    noise: NoiseRates = field(default_factory=NoiseRates)


@dataclass(frozen=True)
class SweepSection:
    """A parameter sweep over one of the other commands.

    ``vary`` maps dotted field paths (for example ``cooling.g``) to the list
    of values to scan; the grid is the cartesian product in the order the
    fields appear.  ``workers`` bounds the process pool (0 means one worker
    per CPU).  Each grid point runs with seed ``base seed + point index``
    unless the seed itself is varied.
    """

    command: str = "cool"
    vary: Dict[str, tuple] = field(default_factory=dict)
    workers: int = 0


SECTION_TYPES = {
    "cooling": CoolingConfig,
    "eigenmodes": EigenmodeSection,
    "secular": SecularSection,
    "xxz": XXZConfig,
    "one_qubit": OneQubitConfig,
    "compare": CompareSection,
    "sweep": SweepSection,
}


def load_config(path: Optional[str]) -> dict:
    """Read a YAML config file into a raw dict (no path -> empty config)."""
    if path is None:
        return {}
    with open(path) as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: not valid YAML: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping of sections")
    unknown = sorted(set(data) - set(SECTION_TYPES))
    if unknown:
        raise ConfigError(
            f"{unknown[0]}: unknown section (choose from {sorted(SECTION_TYPES)})"
        )
    return data


def build_section(name: str, raw: dict):
    """Construct the dataclass for one section from the raw config dict."""
    cls = SECTION_TYPES[name]
    return _build(cls, raw.get(name) or {}, name)


def _build(cls, data, path: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping, got {type(data).__name__}")
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(f"{path}.{unknown[0]}: unknown field")
    kwargs = {
        key: _coerce(hints[key], value, f"{path}.{key}")
        for key, value in data.items()
    }
    try:
        return cls(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _coerce(tp, value, path: str):
    origin = typing.get_origin(tp)
    args = typing.get_args(tp)
    if origin is typing.Union:  # Optional[...]
        if value is None:
            if type(None) in args:
                return None
            raise ConfigError(f"{path}: may not be null")
        inner = [a for a in args if a is not type(None)]
        return _coerce(inner[0], value, path)
    if dataclasses.is_dataclass(tp):
        return _build(tp, value if value is not None else {}, path)
    if tp is bool:
        if isinstance(value, bool):
            return value
        raise ConfigError(f"{path}: expected a boolean, got {value!r}")
    if tp is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{path}: expected an integer, got {value!r}")
        return value
    if tp is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}: expected a number, got {value!r}")
        return float(value)
    if tp is str:
        if not isinstance(value, str):
            raise ConfigError(f"{path}: expected a string, got {value!r}")
        return value
    if origin is tuple:
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{path}: expected a list, got {value!r}")
        elem = args[0] if args else float
        return tuple(
            _coerce(elem, v, f"{path}[{i}]") for i, v in enumerate(value)
        )
    if origin is dict:
        if not isinstance(value, dict):
            raise ConfigError(f"{path}: expected a mapping, got {value!r}")
        out = {}
        for key, val in value.items():
            if not isinstance(key, str):
                raise ConfigError(f"{path}: keys must be strings, got {key!r}")
            if not isinstance(val, (list, tuple)):
                raise ConfigError(f"{path}.{key}: expected a list of values")
            out[key] = tuple(val)
        return out
    raise ConfigError(f"{path}: unsupported field type {tp!r}")


def set_by_path(raw: dict, dotted: str, value) -> None:
    """Set ``section.field[.subfield]`` in a raw config dict (for sweeps)."""
    parts = dotted.split(".")
    if len(parts) < 2 or parts[0] not in SECTION_TYPES:
        raise ConfigError(
            f"sweep.vary.{dotted}: paths look like '<section>.<field>' with "
            f"section one of {sorted(SECTION_TYPES)}"
        )
    node = raw
    for part in parts[:-1]:
        nxt = node.get(part)
        if nxt is None:
            nxt = node[part] = {}
        elif not isinstance(nxt, dict):
            raise ConfigError(f"sweep.vary.{dotted}: {part} is not a mapping")
        node = nxt
    node[parts[-1]] = value


def resolved_dict(section) -> dict:
    """Dataclass -> plain JSON-ready dict (nested dataclasses included)."""
    out = dataclasses.asdict(section)

    def clean(v):
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [clean(x) for x in v]
        if isinstance(v, (np.floating, np.integer)):
            return v.item()
        return v

    return clean(out)
