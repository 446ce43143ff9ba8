"""CSV file formats: day series, dataset labels, and training sets.

All writers produce byte-stable output so identical seeds yield identical
corpora.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .series import PowerSeries

DAY_HEADER = "t,power"
LABELS_HEADER = ["day_file", "t_on", "appliance", "mode", "ssup_length"]
TRAINING_HEADER = ["x0", "x1", "x2", "mode"]


def write_day_series(path, series: PowerSeries) -> None:
    """One line per sample: ``day_index,power_watts`` after a ``t,power`` header."""
    lines = [DAY_HEADER]
    lines.extend(f"{t},{v:.3f}" for t, v in enumerate(series.samples, start=series.origin))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_day_series(path) -> PowerSeries:
    text = Path(path).read_text(encoding="utf-8").splitlines()
    if not text or text[0].strip() != DAY_HEADER:
        raise InvalidInputError(f"{path}: expected header '{DAY_HEADER}'")
    rows = [line.split(",") for line in text[1:] if line]
    if not rows:
        raise InvalidInputError(f"{path}: no samples")
    origin = int(rows[0][0])
    values = np.array([float(r[1]) for r in rows])
    return PowerSeries(values, origin)


@dataclass(frozen=True)
class LabelRecord:
    """Ground truth for one synthetic day."""

    day_file: str
    t_on: int
    appliance: str
    mode: str
    ssup_length: int


def write_labels(path, records: list[LabelRecord]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(LABELS_HEADER)
        for r in records:
            writer.writerow([r.day_file, r.t_on, r.appliance, r.mode, r.ssup_length])


def read_labels(path) -> list[LabelRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != LABELS_HEADER:
            raise InvalidInputError(f"{path}: expected header {','.join(LABELS_HEADER)}")
        return [
            LabelRecord(row[0], int(row[1]), row[2], row[3], int(row[4]))
            for row in reader
            if row
        ]


def write_training_csv(path, features: np.ndarray, labels: list[str]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRAINING_HEADER)
        for row, mode in zip(features, labels):
            writer.writerow([f"{x:.6f}" for x in row] + [mode])


def read_training_csv(path) -> tuple[np.ndarray, list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != TRAINING_HEADER:
            raise InvalidInputError(f"{path}: expected header {','.join(TRAINING_HEADER)}")
        rows = [row for row in reader if row]
    if not rows:
        raise InvalidInputError(f"{path}: no observations")
    features = np.array([[float(x) for x in row[:-1]] for row in rows])
    labels = [row[-1] for row in rows]
    return features, labels
