import numpy as np
import pytest

from suplab.series import PowerSeries, RandomSource
from suplab.supro import CycleSpec, PhaseSpec, Supro


class FakeRandom:
    """Scripted stand-in for RandomSource: pops pre-set draws in order."""

    def __init__(self, uniforms=(), integers=(), normals=()):
        self.uniforms = list(uniforms)
        self.integers_queue = list(integers)
        self.normals = list(normals)

    def uniform(self, low=0.0, high=1.0, size=None):
        if size is not None:
            return np.full(size, low)
        return self.uniforms.pop(0)

    def integer(self, low, high):
        if self.integers_queue:
            return self.integers_queue.pop(0)
        return low

    def normal(self, sigma, size=None):
        if size is not None:
            return np.zeros(size)
        return self.normals.pop(0) if self.normals else 0.0


@pytest.fixture
def rng():
    return RandomSource(1234)


def make_supro(appliance="dryer", mode="Heavy", phases=None):
    if phases is None:
        phases = [PhaseSpec(1, 1, (CycleSpec("MaxHeat", 5000.0, 300),))]
    return Supro(appliance, mode, tuple(phases))


def series(values, origin=0):
    return PowerSeries(np.asarray(values, dtype=float), origin)
