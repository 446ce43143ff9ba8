"""Operation-mode classification by DTW distance to per-mode reference patterns."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import InvalidInputError
from .series import PowerSeries
from .supro import MODES, Supro


@dataclass(frozen=True)
class ModeReferenceSet:
    """One reference pattern per operation mode; its length sets the segment size."""

    entries: dict[str, PowerSeries]

    def __post_init__(self):
        if set(self.entries) != set(MODES):
            raise InvalidInputError(f"reference set must cover exactly {MODES}")

    def size(self, mode: str) -> int:
        return len(self.entries[mode])


@dataclass(frozen=True)
class DtwResult:
    distances: dict[str, float]
    chosen_mode: str
    chosen_distance: float


def build_mode_references(supros: dict[str, Supro], smoother_window: int = 5) -> ModeReferenceSet:
    """Zero-variation profile per mode, used both as pattern and segment size."""
    from .simulate import canonical_ssup

    return ModeReferenceSet({m: canonical_ssup(supros[m], smoother_window) for m in MODES})


def segment(day: PowerSeries, t_on: int, size: int) -> PowerSeries:
    """Day slice [t_on, t_on + size], both ends inclusive (size + 1 samples)."""
    if t_on < 0 or t_on + size >= len(day):
        raise InvalidInputError(
            f"segment [{t_on}, {t_on + size}] out of range; day has {len(day)} samples"
        )
    return PowerSeries(day.samples[t_on:t_on + size + 1], day.origin + t_on)


@njit(cache=True)
def _dtw_cost(x: np.ndarray, y: np.ndarray) -> float:
    n, m = x.size, y.size
    prev = np.empty(m)
    curr = np.empty(m)
    prev[0] = abs(x[0] - y[0])
    for j in range(1, m):
        prev[j] = prev[j - 1] + abs(x[0] - y[j])
    for i in range(1, n):
        curr[0] = prev[0] + abs(x[i] - y[0])
        for j in range(1, m):
            best = prev[j]
            if prev[j - 1] < best:
                best = prev[j - 1]
            if curr[j - 1] < best:
                best = curr[j - 1]
            curr[j] = best + abs(x[i] - y[j])
        prev, curr = curr, prev
    return prev[m - 1]


def dtw_distance(x: PowerSeries, y: PowerSeries) -> float:
    """Classic dynamic time warping with absolute-difference local cost.

    Full matrix, no warping window; first samples align to first and last
    to last; returns the accumulated cost of the cheapest warping path.
    """
    if len(x) == 0 or len(y) == 0:
        raise InvalidInputError("DTW inputs must be non-empty")
    return float(_dtw_cost(x.samples, y.samples))


def classify_dtw(day: PowerSeries, t_on: int, refs: ModeReferenceSet) -> DtwResult:
    """Segment the day once per mode and pick the mode with minimum distance.

    Segments running past the day end are truncated; ties resolve in fixed
    (Light, Medium, Heavy) order.
    """
    if t_on < 0 or t_on >= len(day):
        raise InvalidInputError(f"t_on {t_on} outside day of {len(day)} samples")
    distances = {}
    for mode in MODES:
        size = min(refs.size(mode), len(day) - 1 - t_on)
        seg = segment(day, t_on, size)
        distances[mode] = dtw_distance(seg, refs.entries[mode])
    chosen = min(MODES, key=lambda m: distances[m])
    return DtwResult(distances, chosen, distances[chosen])
