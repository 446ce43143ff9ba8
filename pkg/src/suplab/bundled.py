"""Bundled appliance models and benchmark configuration.

Three preprogrammed appliances (dishwasher, clothes washer, clothes dryer),
each modeled in Light/Medium/Heavy operation modes, plus hourly turn-on
habits for each. These drive the reproducible benchmark and give the CLI
sensible defaults.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .evaluate import ApplianceSpec
from .simulate import TurnOnDistribution
from .supro import load_library


def data_dir() -> Path:
    return Path(resources.files("suplab") / "data")


def bundled_supro_dir() -> Path:
    return data_dir() / "supro"


def load_benchmark_specs(supro_dir=None, config_path=None) -> list[ApplianceSpec]:
    """Appliance specs for the benchmark: bundled by default, overridable."""
    supro_dir = Path(supro_dir) if supro_dir else bundled_supro_dir()
    config_path = Path(config_path) if config_path else data_dir() / "benchmark.json"
    library = load_library(supro_dir)
    config = json.loads(config_path.read_text(encoding="utf-8"))
    specs = []
    for name in sorted(library):
        entry = config.get("appliances", {}).get(name, {})
        weights = entry.get("turn_on_weights")
        if weights is None:
            turn_on = TurnOnDistribution.uniform()
        else:
            w = np.asarray(weights, dtype=np.float64)
            turn_on = TurnOnDistribution(w / w.sum())
        specs.append(ApplianceSpec(name, library[name], turn_on))
    return specs
