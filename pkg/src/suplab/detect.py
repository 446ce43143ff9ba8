"""Turn-on detection by normalized absolute-difference cross-correlation.

A reference pattern (the start of a usage profile) is slid across the day;
positions where the mean absolute difference is small score high, and the
maxima of the thresholded score give candidate turn-on times.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, InvalidParameterError
from .series import PowerSeries, series_max


@dataclass(frozen=True)
class ReferencePattern:
    """A slice of a usage profile's start used for matching."""

    series: PowerSeries
    source_mode: str = ""

    def __len__(self) -> int:
        return len(self.series)


@dataclass(frozen=True)
class DetectionConfig:
    delta: float = 0.90   # low-amplitude canceling coefficient

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise InvalidParameterError(f"delta must be in (0, 1), got {self.delta}")


@dataclass(frozen=True)
class DetectionResult:
    turn_ons: list[int]
    threshold: float
    xcorr: np.ndarray | None = None
    residue: np.ndarray | None = None


def slice_reference(profile: PowerSeries, size: int, source_mode: str = "") -> ReferencePattern:
    """First ``size`` samples of a profile; sizes beyond the profile are invalid."""
    if size < 1:
        raise InvalidInputError(f"reference size must be >= 1, got {size}")
    if size > len(profile):
        raise InvalidInputError(
            f"reference size {size} exceeds profile length {len(profile)}"
        )
    return ReferencePattern(PowerSeries(profile.samples[:size]), source_mode)


def xcorr(ref: ReferencePattern, day: PowerSeries) -> np.ndarray:
    """Similarity score for every alignment of the reference inside the day.

    Score at offset t is the average of the two series maxima minus the mean
    absolute difference over the window, so an exact match scores the
    average maximum and larger mismatches score lower.
    """
    s = ref.series.samples
    d = day.samples
    n, m = s.size, d.size
    if n > m:
        raise InvalidInputError(f"reference ({n}) longer than day ({m})")
    avg_max = 0.5 * (series_max(ref.series) + series_max(day))
    width = m - n + 1
    acc = np.zeros(width)
    tmp = np.empty(width)
    for k in range(n):
        np.subtract(d[k:k + width], s[k], out=tmp)
        np.abs(tmp, out=tmp)
        acc += tmp
    return avg_max - acc / n


def residue(
    x: np.ndarray, ref: ReferencePattern, day: PowerSeries, cfg: DetectionConfig
) -> tuple[np.ndarray, float]:
    """Score minus the threshold tau = delta * average-of-maxima."""
    tau = cfg.delta * 0.5 * (series_max(ref.series) + series_max(day))
    return x - tau, tau


def extract_turn_ons(res: np.ndarray) -> list[int]:
    """Index of the maximum within each maximal run of positive residue.

    Ties inside a run resolve to the earliest index.
    """
    res = np.asarray(res)
    positive = res > 0
    if not positive.any():
        return []
    idx = np.flatnonzero(positive)
    splits = np.flatnonzero(np.diff(idx) > 1)
    run_starts = np.concatenate(([idx[0]], idx[splits + 1]))
    run_ends = np.concatenate((idx[splits], [idx[-1]]))
    out = []
    for a, b in zip(run_starts, run_ends):
        seg = res[a:b + 1]
        out.append(int(a + np.argmax(seg)))
    return out


def detect(
    ref: ReferencePattern, day: PowerSeries, cfg: DetectionConfig, keep_trace: bool = False
) -> DetectionResult:
    """Full pipeline: score, threshold, and extract candidate turn-on times."""
    x = xcorr(ref, day)
    res, tau = residue(x, ref, day, cfg)
    turn_ons = extract_turn_ons(res)
    if keep_trace:
        return DetectionResult(turn_ons, tau, x, res)
    return DetectionResult(turn_ons, tau)
