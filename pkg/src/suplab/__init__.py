"""Residential appliance usage simulation, detection, and mode classification."""

from .detect import DetectionConfig, DetectionResult, ReferencePattern, detect
from .dtw import ModeReferenceSet, build_mode_references, classify_dtw, dtw_distance
from .evaluate import (
    ApplianceSpec,
    ConfusionMatrix,
    ExperimentReport,
    compare_methods,
    detection_sweep,
    metrics,
    run_benchmark,
)
from .omicc import OmiccParams, TrainingSet, build_training_set, omicc_classify
from .series import DAY_SAMPLES, PowerSeries, RandomSource, median_smooth
from .simulate import (
    ApplianceConfig,
    IntensityDistribution,
    SimTuning,
    TurnOnDistribution,
    canonical_ssup,
    generate_dataset,
    generate_day,
    generate_ssup,
)
from .supro import MODES, Supro, duration_bounds, parse_supro, serialize_supro

__version__ = "0.1.0"
