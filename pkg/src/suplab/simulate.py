"""Synthetic single-usage-profile and day-consumption generation.

A usage profile is expanded from its SUPRO by drawing a repetition count
per phase, a duration variation per cycle instance, and a power variation
per sample, then median-smoothing the result. A day is idle noise with one
profile planted at a sampled turn-on time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import GenerationError, InvalidInputError, InvalidParameterError
from .io import LabelRecord, read_day_series, write_day_series, write_labels
from .series import DAY_SAMPLES, PowerSeries, RandomSource, median_smooth
from .supro import MODES, Supro

MODE_MAJOR_SHARE = 0.6
MODE_MINOR_SHARE = 0.2
INTENSITIES = ("Low", "Medium", "High")
_MAJOR_FOR_INTENSITY = {"Low": "Light", "Medium": "Medium", "High": "Heavy"}


@dataclass(frozen=True)
class TurnOnDistribution:
    """Hourly turn-on probabilities over the 24 day partitions."""

    pdf: np.ndarray
    cdf: np.ndarray = field(init=False)

    def __post_init__(self):
        pdf = np.asarray(self.pdf, dtype=np.float64)
        if pdf.shape != (24,):
            raise InvalidInputError(f"turn-on pdf needs 24 hourly values, got shape {pdf.shape}")
        if np.any(pdf < 0):
            raise InvalidInputError("turn-on pdf has negative probabilities")
        if abs(pdf.sum() - 1.0) > 1e-9:
            raise InvalidInputError(f"turn-on pdf sums to {pdf.sum()}, expected 1")
        pdf = pdf.copy()
        pdf.setflags(write=False)
        cdf = np.cumsum(pdf)
        cdf.setflags(write=False)
        object.__setattr__(self, "pdf", pdf)
        object.__setattr__(self, "cdf", cdf)

    @classmethod
    def uniform(cls) -> "TurnOnDistribution":
        return cls(np.full(24, 1.0 / 24.0))


@dataclass(frozen=True)
class IntensityDistribution:
    """Multinomial bias of a household toward one major operation mode."""

    intensity: str
    mode_probs: dict[str, float]

    def __post_init__(self):
        if set(self.mode_probs) != set(MODES):
            raise InvalidInputError(f"mode probabilities must cover {MODES}")
        total = sum(self.mode_probs.values())
        if abs(total - 1.0) > 1e-9:
            raise InvalidInputError(f"mode probabilities sum to {total}, expected 1")

    @classmethod
    def for_intensity(cls, intensity: str) -> "IntensityDistribution":
        """Canonical 60/20/20 split with the major mode set by intensity."""
        name = intensity.capitalize()
        if name not in _MAJOR_FOR_INTENSITY:
            raise InvalidParameterError(f"intensity must be one of {INTENSITIES}, got {intensity!r}")
        major = _MAJOR_FOR_INTENSITY[name]
        probs = {m: (MODE_MAJOR_SHARE if m == major else MODE_MINOR_SHARE) for m in MODES}
        return cls(name, probs)

    @property
    def major_mode(self) -> str:
        return max(self.mode_probs, key=self.mode_probs.get)


@dataclass(frozen=True)
class SimTuning:
    """Stochastic variation knobs for the generator."""

    alpha_sigma: float = 0.2      # per-sample power variation
    beta_sigma: float = 0.2       # per-cycle duration variation
    gamma: float = 40.0           # idle-noise ceiling, watts
    smoother_window: int = 5

    def __post_init__(self):
        if self.alpha_sigma <= 0 or self.beta_sigma <= 0:
            raise InvalidParameterError("alpha_sigma and beta_sigma must be > 0")
        if not 0 < self.gamma <= 40:
            raise InvalidParameterError(f"gamma must be in (0, 40], got {self.gamma}")
        if self.smoother_window < 1 or self.smoother_window % 2 == 0:
            raise InvalidParameterError("smoother window must be odd and >= 1")


@dataclass(frozen=True)
class SyntheticDay:
    series: PowerSeries
    t_on: int
    appliance: str
    mode: str
    ssup_length: int


def sample_turn_on(dist: TurnOnDistribution, rng: RandomSource) -> int:
    """Inverse-transform sample of an hour, refined to a uniform second."""
    u = rng.uniform()
    hour = int(np.searchsorted(dist.cdf, u, side="left"))
    hour = min(hour, 23)
    return hour * 3600 + rng.integer(0, 3599)


def sample_mode(dist: IntensityDistribution, rng: RandomSource) -> str:
    """Inverse-transform sample over modes in fixed (Light, Medium, Heavy) order."""
    u = rng.uniform()
    acc = 0.0
    for mode in MODES:
        acc += dist.mode_probs[mode]
        if u < acc:
            return mode
    return MODES[-1]


def generate_ssup(supro: Supro, tuning: SimTuning, rng: RandomSource) -> PowerSeries:
    """Expand a SUPRO into one synthetic single usage profile.

    Per phase a repetition count is drawn uniformly within its bounds; each
    cycle instance gets one duration variation draw and per-sample power
    variation draws; the concatenation is median-smoothed.
    """
    chunks = []
    for phase in supro.phases:
        repeats = rng.integer(phase.repeat_min, phase.repeat_max)
        for _ in range(repeats):
            for cycle in phase.cycles:
                beta = float(np.clip(rng.normal(tuning.beta_sigma), -0.95, 1.0))
                duration = max(1, round(cycle.duration * (1.0 + beta)))
                alpha = np.clip(rng.normal(tuning.alpha_sigma, size=duration), -1.0, 1.0)
                chunks.append(np.maximum(cycle.power * (1.0 + alpha), 0.0))
    samples = np.concatenate(chunks)
    return median_smooth(PowerSeries(samples), tuning.smoother_window)


def canonical_ssup(supro: Supro, smoother_window: int = 5) -> PowerSeries:
    """Zero-variation profile: midpoint repetition counts, exact powers and
    durations. Used as the reference pattern for detection and DTW."""
    chunks = []
    for phase in supro.phases:
        repeats = (phase.repeat_min + phase.repeat_max) // 2
        for _ in range(repeats):
            for cycle in phase.cycles:
                chunks.append(np.full(cycle.duration, cycle.power))
    samples = np.concatenate(chunks)
    return median_smooth(PowerSeries(samples), smoother_window)


def generate_day(
    supro_library: dict[str, Supro],
    turn_on: TurnOnDistribution,
    intensity: IntensityDistribution,
    tuning: SimTuning,
    rng: RandomSource,
    appliance: str | None = None,
) -> SyntheticDay:
    """One 86,400-sample day: idle noise with a single profile planted at a
    sampled turn-on time."""
    for mode, prob in intensity.mode_probs.items():
        if prob > 0 and mode not in supro_library:
            raise InvalidInputError(f"supro library is missing mode {mode!r}")
    t_on = sample_turn_on(turn_on, rng)
    mode = sample_mode(intensity, rng)
    ssup = generate_ssup(supro_library[mode], tuning, rng)
    length = len(ssup)
    if length > DAY_SAMPLES:
        raise GenerationError(f"profile of {length} samples cannot fit a day")
    attempts = 0
    while t_on + length > DAY_SAMPLES:
        attempts += 1
        if attempts >= 1000:
            raise GenerationError("could not place the profile within the day after 1000 attempts")
        t_on = sample_turn_on(turn_on, rng)
    day = rng.uniform(0.0, tuning.gamma, size=DAY_SAMPLES)
    day[t_on:t_on + length] = ssup.samples
    name = appliance if appliance is not None else supro_library[mode].appliance
    return SyntheticDay(PowerSeries(day), t_on, name, mode, length)


@dataclass(frozen=True)
class ApplianceConfig:
    """Everything needed to simulate one appliance."""

    name: str
    supros: dict[str, Supro]
    turn_on: TurnOnDistribution
    intensity: IntensityDistribution


@dataclass
class LabeledDataset:
    """A persisted corpus of day files plus their ground-truth labels."""

    root: Path
    records: list[LabelRecord]
    intensity: str | None = None

    def load_day(self, record: LabelRecord) -> PowerSeries:
        return read_day_series(self.root / record.day_file)


def day_source(seed: int, appliance_index: int, day_index: int) -> RandomSource:
    """The per-day random stream; independent of generation order."""
    return RandomSource(seed).derive(appliance_index, day_index)


def generate_dataset(
    appliances: list[ApplianceConfig],
    days: int,
    tuning: SimTuning,
    seed: int,
    out_dir,
    intensity_tag: str | None = None,
    jobs: int = 1,
) -> LabeledDataset:
    """One day file per appliance per day, plus a labels.csv manifest.

    Deterministic under the seed: each day draws from an independent stream
    derived from (seed, appliance index, day index), so the corpus does not
    depend on generation order or worker count.
    """
    if days < 1:
        raise InvalidParameterError(f"days must be >= 1, got {days}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tasks = [(ai, di) for ai in range(len(appliances)) for di in range(days)]

    def build(task):
        ai, di = task
        cfg = appliances[ai]
        rng = day_source(seed, ai, di)
        day = generate_day(cfg.supros, cfg.turn_on, cfg.intensity, tuning, rng, cfg.name)
        fname = f"{cfg.name}_{di}.csv"
        write_day_series(out_dir / fname, day.series)
        return LabelRecord(fname, day.t_on, day.appliance, day.mode, day.ssup_length)

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(build, tasks))
    else:
        records = [build(t) for t in tasks]
    write_labels(out_dir / "labels.csv", records)
    return LabeledDataset(out_dir, records, intensity_tag)


def load_dataset(root, intensity_tag: str | None = None) -> LabeledDataset:
    root = Path(root)
    from .io import read_labels

    return LabeledDataset(root, read_labels(root / "labels.csv"), intensity_tag)
