"""Power time series, smoothing, and the seeded randomness contract.

All series are 1 Hz sequences of instantaneous power readings in watts.
A full day is exactly 86,400 samples.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, InvalidParameterError

DAY_SAMPLES = 86_400
SAMPLE_RATE_HZ = 1


@dataclass(frozen=True)
class PowerSeries:
    """Immutable 1 Hz power sequence.

    ``origin`` is the day sample index of the first element, so slices of a
    day remember where they came from.
    """

    samples: np.ndarray
    origin: int = 0

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidInputError("a power series needs at least one sample")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("power series contains non-finite samples")
        if np.any(arr < 0):
            raise InvalidInputError("power series contains negative samples")
        if self.origin < 0:
            raise InvalidInputError(f"origin must be >= 0, got {self.origin}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return self.samples.size


class RandomSource:
    """Deterministic pseudo-random stream.

    The same seed always yields the same draw sequence, and ``derive``
    produces independent child streams keyed by integers or strings so
    that parallel generation tasks stay order-independent.
    """

    def __init__(self, seed):
        if isinstance(seed, int):
            key = (seed,)
        else:
            key = tuple(seed)
        self._key = key
        self._rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))

    @property
    def seed_key(self) -> tuple:
        return self._key

    def derive(self, *labels) -> "RandomSource":
        """Independent child stream for (seed, *labels); strings are hashed."""
        ints = [lab if isinstance(lab, int) else zlib.crc32(str(lab).encode()) for lab in labels]
        return RandomSource(self._key + tuple(ints))

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        return self._rng.uniform(low, high, size)

    def integer(self, low: int, high: int) -> int:
        """Uniform integer with both bounds inclusive."""
        return int(self._rng.integers(low, high + 1))

    def normal(self, sigma: float, size=None):
        return self._rng.normal(0.0, sigma, size)


def median_smooth(series: PowerSeries, window: int) -> PowerSeries:
    """Centered running median; window must be odd and fit the series.

    Boundary samples use the window shrunk symmetrically around the index,
    so no phantom values are padded in.
    """
    n = len(series)
    if window < 1 or window % 2 == 0:
        raise InvalidParameterError(f"smoother window must be odd and positive, got {window}")
    if window > n:
        raise InvalidParameterError(f"smoother window {window} exceeds series length {n}")
    if window == 1:
        return series
    x = series.samples
    half = window // 2
    out = np.empty(n)
    windows = np.lib.stride_tricks.sliding_window_view(x, window)
    out[half:n - half] = np.median(windows, axis=1)
    for i in range(half):
        out[i] = np.median(x[: 2 * i + 1])
        j = n - 1 - i
        out[j] = np.median(x[j - i:])
    return PowerSeries(out, series.origin)


def series_max(series: PowerSeries) -> float:
    """Maximum sample value in watts."""
    return float(np.max(series.samples))


def std_dev(values) -> float:
    """Population standard deviation (divide by N)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise InvalidInputError("standard deviation of an empty sequence")
    return float(np.std(arr))
