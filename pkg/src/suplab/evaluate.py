"""Metrics, method comparison, the detection-size sweep, and the seeded benchmark."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .detect import DetectionConfig, detect, slice_reference
from .dtw import ModeReferenceSet, build_mode_references, classify_dtw
from .errors import InvalidInputError, SuplabError
from .omicc import OmiccParams, TrainingSet, feature_vector, omicc_classify
from .series import RandomSource
from .simulate import (
    INTENSITIES,
    IntensityDistribution,
    LabeledDataset,
    SimTuning,
    TurnOnDistribution,
    canonical_ssup,
    generate_day,
)
from .supro import MODES, Supro


@dataclass
class ConfusionMatrix:
    """3x3 counts indexed (true mode, predicted mode) in fixed mode order."""

    counts: np.ndarray = field(default_factory=lambda: np.zeros((3, 3), dtype=np.int64))

    def add(self, true_mode: str, predicted_mode: str) -> None:
        self.counts[MODES.index(true_mode), MODES.index(predicted_mode)] += 1

    def merge(self, other: "ConfusionMatrix") -> None:
        self.counts += other.counts

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class ModeMetrics:
    precision: dict[str, float]
    recall: dict[str, float]
    f1: dict[str, float]
    macro_precision: float
    macro_recall: float
    macro_f1: float


def metrics(cm: ConfusionMatrix) -> ModeMetrics:
    """One-vs-rest precision/recall/F1 per mode plus unweighted macro averages.

    Cells with a zero denominator score 0.
    """
    if cm.total == 0:
        raise InvalidInputError("confusion matrix holds no events")
    counts = cm.counts
    precision, recall, f1 = {}, {}, {}
    for i, mode in enumerate(MODES):
        col = counts[:, i].sum()
        row = counts[i, :].sum()
        p = counts[i, i] / col if col else 0.0
        r = counts[i, i] / row if row else 0.0
        precision[mode] = float(p)
        recall[mode] = float(r)
        f1[mode] = float(2 * p * r / (p + r)) if (p + r) else 0.0
    return ModeMetrics(
        precision,
        recall,
        f1,
        float(np.mean(list(precision.values()))),
        float(np.mean(list(recall.values()))),
        float(np.mean(list(f1.values()))),
    )


@dataclass
class MethodOutcome:
    cm: ConfusionMatrix
    errors: int = 0

    def metrics(self) -> ModeMetrics:
        if self.cm.total == 0:
            zeros = {m: 0.0 for m in MODES}
            return ModeMetrics(dict(zeros), dict(zeros), dict(zeros), 0.0, 0.0, 0.0)
        return metrics(self.cm)


@dataclass
class ExperimentReport:
    """Everything the evaluation emits: headline metrics, the per-intensity
    breakdown, and (optionally) the detection sweep table."""

    methods: dict[str, MethodOutcome]
    per_intensity: dict[str, dict[str, MethodOutcome]] = field(default_factory=dict)
    sweep: dict[str, dict[int, float]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        def outcome_dict(out: MethodOutcome) -> dict:
            m = out.metrics()
            return {
                "per_mode": {
                    mode: {
                        "precision": round(m.precision[mode], 6),
                        "recall": round(m.recall[mode], 6),
                        "f1": round(m.f1[mode], 6),
                    }
                    for mode in MODES
                },
                "macro": {
                    "precision": round(m.macro_precision, 6),
                    "recall": round(m.macro_recall, 6),
                    "f1": round(m.macro_f1, 6),
                },
                "events": out.cm.total,
                "errors": out.errors,
                "confusion": out.cm.counts.tolist(),
            }

        doc = {"methods": {name: outcome_dict(o) for name, o in self.methods.items()}}
        if self.per_intensity:
            doc["per_intensity"] = {
                intensity: {name: outcome_dict(o) for name, o in outs.items()}
                for intensity, outs in self.per_intensity.items()
            }
        if self.sweep:
            doc["sweep"] = {
                app: {str(n): round(v, 6) for n, v in table.items()}
                for app, table in self.sweep.items()
            }
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        lines = []
        header = f"{'method':<8} {'mode':<8} {'precision':>9} {'recall':>9} {'f1':>9}"
        lines.append(header)
        lines.append("-" * len(header))
        for name, out in self.methods.items():
            m = out.metrics()
            for mode in MODES:
                lines.append(
                    f"{name:<8} {mode:<8} {m.precision[mode]:>9.3f} "
                    f"{m.recall[mode]:>9.3f} {m.f1[mode]:>9.3f}"
                )
            lines.append(
                f"{name:<8} {'macro':<8} {m.macro_precision:>9.3f} "
                f"{m.macro_recall:>9.3f} {m.macro_f1:>9.3f}"
            )
        return "\n".join(lines) + "\n"


def score_events(events, refs_by_app, training_by_app, params: OmiccParams, jobs: int = 1):
    """Run both classifiers on identical (appliance, mode, t_on, series)
    events; per-event failures count as errors, not predictions.

    With ``jobs`` > 1 events are classified by a thread pool; results are
    folded in event order, so the outcome is independent of worker count.
    """

    def classify(event):
        appliance, true_mode, t_on, series = event
        row = {}
        for name, run in (
            ("dtw", lambda: classify_dtw(series, t_on, refs_by_app[appliance]).chosen_mode),
            ("omicc", lambda: omicc_classify(series, t_on, training_by_app[appliance], params)),
        ):
            try:
                row[name] = run()
            except SuplabError:
                row[name] = None
        return true_mode, row

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(classify, events)
    else:
        results = map(classify, events)

    outcomes = {"dtw": MethodOutcome(ConfusionMatrix()), "omicc": MethodOutcome(ConfusionMatrix())}
    for true_mode, row in results:
        for name, pred in row.items():
            if pred is None:
                outcomes[name].errors += 1
            else:
                outcomes[name].cm.add(true_mode, pred)
    return outcomes


def compare_methods(
    dataset: LabeledDataset,
    refs_by_app: dict[str, ModeReferenceSet],
    training_by_app: dict[str, TrainingSet],
    params: OmiccParams,
    jobs: int = 1,
) -> ExperimentReport:
    """Both classifiers over every labeled event of a persisted dataset,
    using the ground-truth turn-on times."""
    if not dataset.records:
        raise InvalidInputError("dataset holds no labeled events")

    def events():
        for rec in dataset.records:
            yield rec.appliance, rec.mode, rec.t_on, dataset.load_day(rec)

    outcomes = score_events(events(), refs_by_app, training_by_app, params, jobs)
    report = ExperimentReport(outcomes)
    if dataset.intensity:
        report.per_intensity[dataset.intensity] = outcomes
    return report


@dataclass(frozen=True)
class ApplianceSpec:
    """Benchmark description of one appliance: its profiles and habits."""

    name: str
    supros: dict[str, Supro]
    turn_on: TurnOnDistribution


def _intensity_share(days: int) -> dict[str, int]:
    base, rem = divmod(days, len(INTENSITIES))
    return {name: base + (1 if i < rem else 0) for i, name in enumerate(INTENSITIES)}


def _stream_days(specs, intensity: str, days: int, tuning: SimTuning, source: RandomSource):
    dist = IntensityDistribution.for_intensity(intensity)
    for ai, spec in enumerate(specs):
        for di in range(days):
            rng = source.derive(ai, di)
            yield generate_day(spec.supros, spec.turn_on, dist, tuning, rng, spec.name)


def run_benchmark(
    specs: list[ApplianceSpec],
    seed: int = 42,
    train_days: int = 200,
    test_days: int = 100,
    tuning: SimTuning | None = None,
    params: OmiccParams | None = None,
) -> ExperimentReport:
    """End-to-end seeded evaluation.

    Per appliance, ``train_days`` and ``test_days`` synthetic days are
    spread over the three usage intensities; training features and test
    events are generated from independent derived streams, so the result
    is a pure function of the arguments.
    """
    tuning = tuning or SimTuning()
    params = params or OmiccParams()
    root = RandomSource(seed)
    refs_by_app = {
        s.name: build_mode_references(s.supros, tuning.smoother_window) for s in specs
    }

    train_rows: dict[str, list] = {s.name: [] for s in specs}
    train_labels: dict[str, list] = {s.name: [] for s in specs}
    for intensity, days in _intensity_share(train_days).items():
        source = root.derive("train", intensity)
        for day in _stream_days(specs, intensity, days, tuning, source):
            try:
                fv = feature_vector(day.series, day.t_on, params)
            except SuplabError:
                continue
            train_rows[day.appliance].append(fv)
            train_labels[day.appliance].append(day.mode)
    training_by_app = {
        name: TrainingSet(np.array(rows), tuple(train_labels[name]), name)
        for name, rows in train_rows.items()
    }

    headline = {"dtw": MethodOutcome(ConfusionMatrix()), "omicc": MethodOutcome(ConfusionMatrix())}
    per_intensity = {}
    for intensity, days in _intensity_share(test_days).items():
        source = root.derive("test", intensity)
        events = (
            (d.appliance, d.mode, d.t_on, d.series)
            for d in _stream_days(specs, intensity, days, tuning, source)
        )
        outcomes = score_events(events, refs_by_app, training_by_app, params)
        per_intensity[intensity] = outcomes
        for name in headline:
            headline[name].cm.merge(outcomes[name].cm)
            headline[name].errors += outcomes[name].errors
    return ExperimentReport(headline, per_intensity)


def detection_sweep(
    spec: ApplianceSpec,
    sizes: list[int],
    days: int = 50,
    seed: int = 42,
    delta: float = 0.90,
    tuning: SimTuning | None = None,
) -> dict[int, float]:
    """Mean detected-usage count per reference size over seeded days.

    Each day plants one profile with a uniformly random mode. The
    reference is sliced from the zero-variation profile of a per-day
    random mode; sizes longer than that profile count zero detections,
    since no reference of that size can be taken from it.
    """
    if not sizes or min(sizes) < 1:
        raise InvalidInputError("sizes must be positive")
    tuning = tuning or SimTuning()
    cfg = DetectionConfig(delta)
    root = RandomSource(seed)
    uniform_modes = IntensityDistribution("Uniform", {m: 1.0 / 3.0 for m in MODES})
    patterns = {m: canonical_ssup(spec.supros[m], tuning.smoother_window) for m in MODES}

    day_src = root.derive("sweep-days")
    ref_src = root.derive("sweep-refs")
    day_list = []
    ref_modes = []
    for di in range(days):
        rng = day_src.derive(di)
        day_list.append(
            generate_day(spec.supros, spec.turn_on, uniform_modes, tuning, rng, spec.name)
        )
        ref_modes.append(MODES[ref_src.derive(di).integer(0, len(MODES) - 1)])

    table: dict[int, float] = {}
    for n in sizes:
        counts = []
        for day, ref_mode in zip(day_list, ref_modes):
            profile = patterns[ref_mode]
            if n > len(profile):
                counts.append(0)
                continue
            ref = slice_reference(profile, n, ref_mode)
            counts.append(len(detect(ref, day.series, cfg).turn_ons))
        table[n] = float(np.mean(counts))
    return table
