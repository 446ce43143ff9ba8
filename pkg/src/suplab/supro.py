"""SUP Representation Objects: declarative models of one appliance operation mode.

A SUPRO describes the cycle structure of a single usage profile as an
ordered list of phases, each repeating a group of (power, duration) cycles
between a lower and upper repetition bound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import SuproParseError, SuproValidationError

MODES = ("Light", "Medium", "Heavy")


@dataclass(frozen=True)
class CycleSpec:
    name: str
    power: float        # watts, > 0
    duration: int       # seconds, >= 1


@dataclass(frozen=True)
class PhaseSpec:
    repeat_min: int
    repeat_max: int
    cycles: tuple[CycleSpec, ...]


@dataclass(frozen=True)
class Supro:
    appliance: str
    operation_mode: str
    phases: tuple[PhaseSpec, ...]


def _require(obj: dict, key: str, kind, path: str):
    if key not in obj:
        raise SuproValidationError(f"{path}.{key}", "missing required field")
    value = obj[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise SuproValidationError(f"{path}.{key}", f"expected a number, got {value!r}")
        return float(value)
    if kind is int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise SuproValidationError(f"{path}.{key}", f"expected an integer, got {value!r}")
        return value
    if not isinstance(value, kind):
        raise SuproValidationError(f"{path}.{key}", f"expected {kind.__name__}, got {value!r}")
    return value


def _reject_unknown(obj: dict, allowed: set, path: str):
    unknown = set(obj) - allowed
    if unknown:
        name = sorted(unknown)[0]
        raise SuproValidationError(f"{path}.{name}", "unknown field")


def _parse_cycle(obj, path: str) -> CycleSpec:
    if not isinstance(obj, dict):
        raise SuproValidationError(path, "cycle must be an object")
    _reject_unknown(obj, {"name", "power", "duration"}, path)
    name = _require(obj, "name", str, path)
    power = _require(obj, "power", float, path)
    duration = _require(obj, "duration", int, path)
    if power <= 0:
        raise SuproValidationError(f"{path}.power", f"must be > 0, got {power}")
    if duration < 1:
        raise SuproValidationError(f"{path}.duration", f"must be >= 1, got {duration}")
    return CycleSpec(name, power, duration)


def _parse_phase(obj, path: str) -> PhaseSpec:
    if not isinstance(obj, dict):
        raise SuproValidationError(path, "phase must be an object")
    _reject_unknown(obj, {"repeatMin", "repeatMax", "cycles"}, path)
    rep_min = _require(obj, "repeatMin", int, path)
    rep_max = _require(obj, "repeatMax", int, path)
    cycles = _require(obj, "cycles", list, path)
    if rep_min < 1:
        raise SuproValidationError(f"{path}.repeatMin", f"must be >= 1, got {rep_min}")
    if rep_min > rep_max:
        raise SuproValidationError(path, f"repeatMin {rep_min} exceeds repeatMax {rep_max}")
    if not cycles:
        raise SuproValidationError(f"{path}.cycles", "must not be empty")
    parsed = tuple(_parse_cycle(c, f"{path}.cycles[{i}]") for i, c in enumerate(cycles))
    return PhaseSpec(rep_min, rep_max, parsed)


def parse_supro(text: str) -> Supro:
    """Parse and strictly validate a SUPRO JSON document.

    Unknown fields are rejected so configuration typos surface early.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SuproParseError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict):
        raise SuproValidationError("$", "document must be a JSON object")
    _reject_unknown(doc, {"appliance", "operationMode", "phases"}, "$")
    appliance = _require(doc, "appliance", str, "$")
    mode = _require(doc, "operationMode", str, "$")
    phases = _require(doc, "phases", list, "$")
    if not appliance:
        raise SuproValidationError("$.appliance", "must not be empty")
    if not mode:
        raise SuproValidationError("$.operationMode", "must not be empty")
    if not phases:
        raise SuproValidationError("$.phases", "must not be empty")
    parsed = tuple(_parse_phase(p, f"$.phases[{i}]") for i, p in enumerate(phases))
    return Supro(appliance, mode, parsed)


def serialize_supro(supro: Supro) -> str:
    """Inverse of parse_supro (round-trips on valid values)."""
    doc = {
        "appliance": supro.appliance,
        "operationMode": supro.operation_mode,
        "phases": [
            {
                "repeatMin": p.repeat_min,
                "repeatMax": p.repeat_max,
                "cycles": [
                    {"name": c.name, "power": c.power, "duration": c.duration}
                    for c in p.cycles
                ],
            }
            for p in supro.phases
        ],
    }
    return json.dumps(doc, indent=2)


def duration_bounds(supro: Supro) -> tuple[int, int]:
    """(min, max) total seconds over all phase repetition choices."""
    lo = hi = 0
    for phase in supro.phases:
        per_rep = sum(c.duration for c in phase.cycles)
        lo += phase.repeat_min * per_rep
        hi += phase.repeat_max * per_rep
    return lo, hi


def load_supro_file(path) -> Supro:
    return parse_supro(Path(path).read_text(encoding="utf-8"))


def load_library(directory) -> dict[str, dict[str, Supro]]:
    """Load every ``<appliance>_<mode>.json`` in a directory.

    Returns {appliance: {mode: Supro}}; duplicate (appliance, mode) pairs
    are rejected.
    """
    directory = Path(directory)
    library: dict[str, dict[str, Supro]] = {}
    for path in sorted(directory.glob("*.json")):
        supro = load_supro_file(path)
        modes = library.setdefault(supro.appliance, {})
        if supro.operation_mode in modes:
            raise SuproValidationError(
                "$.operationMode",
                f"duplicate ({supro.appliance}, {supro.operation_mode}) in {directory}",
            )
        modes[supro.operation_mode] = supro
    return library
