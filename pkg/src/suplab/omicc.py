"""Operation-mode identification via cycle clustering.

Pipeline: slice the day from the turn-on time, median-smooth it, locate
abrupt power changes with a moving step test, thin the resulting edge
regions to exact change points, form cycles between consecutive change
points, cluster cycle power levels, turn clusters into energy features,
and classify with k-nearest neighbors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateInputError,
    InvalidInputError,
    InvalidParameterError,
    InvalidStateError,
    NoCyclesError,
    PipelineError,
    SuplabError,
)
from .series import PowerSeries, median_smooth, std_dev
from .supro import MODES


@dataclass(frozen=True)
class OmiccParams:
    half_window: int = 20       # step-test window on each side
    zeta: int = 2               # threshold multiplier on sigma of the indicator
    smoother_window: int = 5
    clusters: int = 3
    neighbors: int = 5

    def __post_init__(self):
        if self.half_window < 1:
            raise InvalidParameterError("half_window must be >= 1")
        if self.zeta < 1:
            raise InvalidParameterError("zeta must be a positive integer")
        if self.smoother_window < 1 or self.smoother_window % 2 == 0:
            raise InvalidParameterError("smoother window must be odd and >= 1")
        if self.clusters < 1:
            raise InvalidParameterError("clusters must be >= 1")
        if self.neighbors < 1:
            raise InvalidParameterError("neighbors must be >= 1")


@dataclass(frozen=True)
class ThickEdge:
    t_s: int
    t_e: int  # inclusive

    def center(self) -> int:
        return (self.t_s + self.t_e) // 2


@dataclass(frozen=True)
class Cycle:
    t_s: int
    t_e: int
    power: float

    @property
    def duration(self) -> int:
        return self.t_e - self.t_s


@dataclass(frozen=True)
class ClusterModel:
    centroids: np.ndarray        # ascending
    assignment: np.ndarray       # observation index -> cluster index

    @property
    def k(self) -> int:
        return self.centroids.size


@dataclass(frozen=True)
class TrainingSet:
    """Feature vectors with ground-truth mode labels for one appliance."""

    features: np.ndarray      # (n, k)
    labels: tuple[str, ...]
    appliance: str = ""

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        if feats.ndim != 2 or feats.shape[0] == 0:
            raise InvalidStateError("training set must contain at least one observation")
        if feats.shape[0] != len(self.labels):
            raise InvalidStateError("feature rows and labels differ in count")
        object.__setattr__(self, "features", feats)

    def __len__(self) -> int:
        return self.features.shape[0]


def tail_series(day: PowerSeries, t_on: int, window: int) -> PowerSeries:
    """Median-smoothed slice from the turn-on time to the end of the day."""
    if t_on < 0 or t_on >= len(day):
        raise InvalidInputError(f"t_on {t_on} outside day of {len(day)} samples")
    tail = PowerSeries(day.samples[t_on:], day.origin + t_on)
    if window > len(tail):
        window = len(tail) if len(tail) % 2 == 1 else len(tail) - 1
    if window < 1:
        window = 1
    return median_smooth(tail, window)


def indicator(tail: PowerSeries, half_window: int) -> np.ndarray:
    """Moving step test: |median of the leading window - median of the lagging
    window| at every position, zero within half_window of either boundary.

    The sample at the evaluated position belongs to neither window.
    """
    ell = half_window
    x = tail.samples
    n = x.size
    if ell < 1:
        raise InvalidParameterError("half_window must be >= 1")
    if n <= 2 * ell:
        raise InvalidInputError(f"series of {n} samples too short for half_window {ell}")
    med = np.median(np.lib.stride_tricks.sliding_window_view(x, ell), axis=1)
    out = np.zeros(n)
    t = np.arange(ell, n - ell)
    out[t] = np.abs(med[t + 1] - med[t - ell])
    return out


def thick_edges(ind: np.ndarray, zeta: int) -> tuple[list[ThickEdge], float]:
    """Maximal runs where the indicator exceeds zeta times its own deviation."""
    ind = np.asarray(ind)
    if ind.size == 0:
        raise InvalidInputError("empty indicator")
    if zeta < 1:
        raise InvalidParameterError("zeta must be a positive integer")
    tau = zeta * std_dev(ind)
    above = ind > tau
    if not above.any():
        return [], tau
    idx = np.flatnonzero(above)
    splits = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate(([idx[0]], idx[splits + 1]))
    ends = np.concatenate((idx[splits], [idx[-1]]))
    return [ThickEdge(int(a), int(b)) for a, b in zip(starts, ends)], tau


def thin_edges(edges: list[ThickEdge]) -> list[int]:
    """Center index of each thick edge (floor at half-integers)."""
    return [e.center() for e in edges]


def extract_cycles(tail: PowerSeries, exact_edges: list[int]) -> list[Cycle]:
    """One cycle per consecutive edge pair; power is the median between them."""
    if len(exact_edges) < 2:
        raise NoCyclesError(
            f"need at least 2 exact edges to form a cycle, got {len(exact_edges)}"
        )
    x = tail.samples
    cycles = []
    for a, b in zip(exact_edges, exact_edges[1:]):
        cycles.append(Cycle(a, b, float(np.median(x[a:b + 1]))))
    return cycles


def _optimal_1d_partition(values: np.ndarray, k: int) -> list[np.ndarray]:
    """Minimum within-cluster-sum-of-squares partition of 1-D data.

    Sorts the observations and solves the contiguous-partition dynamic
    program exactly, so the result is the global optimum (contiguity of
    optimal 1-D clusters is a classical fact).
    Returns the member indices (into ``values``) of each cluster, ordered
    by ascending centroid.
    """
    order = np.argsort(values, kind="stable")
    v = values[order]
    n = v.size
    pref = np.concatenate(([0.0], np.cumsum(v)))
    pref2 = np.concatenate(([0.0], np.cumsum(v * v)))

    def cost(i: int, j: int) -> float:  # inclusive, on sorted values
        cnt = j - i + 1
        s = pref[j + 1] - pref[i]
        return (pref2[j + 1] - pref2[i]) - s * s / cnt

    best = np.full((k, n), np.inf)
    split = np.zeros((k, n), dtype=np.int64)
    for j in range(n):
        best[0, j] = cost(0, j)
    for c in range(1, k):
        for j in range(c, n):
            for i in range(c, j + 1):
                cand = best[c - 1, i - 1] + cost(i, j)
                if cand < best[c, j]:
                    best[c, j] = cand
                    split[c, j] = i
    bounds = []
    j = n - 1
    for c in range(k - 1, 0, -1):
        i = split[c, j]
        bounds.append((i, j))
        j = i - 1
    bounds.append((0, j))
    bounds.reverse()
    return [order[a:b + 1] for a, b in bounds]


def cluster_cycles(cycles: list[Cycle], k: int = 3) -> ClusterModel:
    """Cluster cycle power levels into k groups by exact 1-D k-means.

    The caller is expected to have dropped the trailing idle cycle already.
    """
    if len(cycles) < k:
        raise DegenerateInputError(f"{len(cycles)} observations cannot form {k} clusters")
    powers = np.array([c.power for c in cycles])
    if np.unique(powers).size < k:
        raise DegenerateInputError(
            f"only {np.unique(powers).size} distinct power levels for {k} clusters"
        )
    groups = _optimal_1d_partition(powers, k)
    centroids = np.array([powers[g].mean() for g in groups])
    order = np.argsort(centroids, kind="stable")
    centroids = centroids[order]
    assignment = np.empty(powers.size, dtype=np.int64)
    for rank, gi in enumerate(order):
        assignment[groups[gi]] = rank
    return ClusterModel(centroids, assignment)


def features(cycles: list[Cycle], model: ClusterModel) -> np.ndarray:
    """Per-cluster energy: centroid power times total member duration,
    ordered by ascending centroid."""
    out = np.zeros(model.k)
    for idx, cycle in enumerate(cycles):
        out[model.assignment[idx]] += abs(cycle.t_e - cycle.t_s)
    return model.centroids * out


def knn_classify(query: np.ndarray, training: TrainingSet, k_neighbors: int) -> str:
    """Plurality vote among the k nearest training observations.

    Distances are Euclidean over features standardized by the training
    set's per-dimension mean and deviation; dimensions with zero spread
    carry no weight. Vote ties resolve to the smallest summed distance,
    then to fixed (Light, Medium, Heavy) order.
    """
    if len(training) == 0:
        raise InvalidStateError("empty training set")
    if k_neighbors > len(training):
        raise InvalidInputError(
            f"k_neighbors {k_neighbors} exceeds training size {len(training)}"
        )
    feats = training.features
    mu = feats.mean(axis=0)
    sigma = feats.std(axis=0)
    scale = np.where(sigma > 0, sigma, np.inf)  # zero-spread dims contribute nothing
    q = (np.asarray(query, dtype=np.float64) - mu) / scale
    z = (feats - mu) / scale
    dist = np.sqrt(((z - q) ** 2).sum(axis=1))
    nearest = np.argsort(dist, kind="stable")[:k_neighbors]
    votes: dict[str, int] = {}
    summed: dict[str, float] = {}
    for i in nearest:
        lab = training.labels[i]
        votes[lab] = votes.get(lab, 0) + 1
        summed[lab] = summed.get(lab, 0.0) + float(dist[i])
    top = max(votes.values())
    tied = [m for m in votes if votes[m] == top]
    if len(tied) > 1:
        low = min(summed[m] for m in tied)
        tied = [m for m in tied if summed[m] == low]
    if len(tied) > 1:
        mode_rank = {m: i for i, m in enumerate(MODES)}
        tied.sort(key=lambda m: mode_rank.get(m, len(MODES)))
    return tied[0]


def feature_vector(day: PowerSeries, t_on: int, params: OmiccParams) -> np.ndarray:
    """Run the feature pipeline for one detected usage; raises PipelineError
    naming the failing stage."""
    stage = "tail"
    try:
        tail = tail_series(day, t_on, params.smoother_window)
        stage = "indicator"
        ind = indicator(tail, params.half_window)
        stage = "thick_edges"
        edges, _ = thick_edges(ind, params.zeta)
        stage = "extract_cycles"
        cycles = extract_cycles(tail, thin_edges(edges))
        kept = cycles[:-1]  # trailing cycle is idle time after the usage
        stage = "cluster_cycles"
        model = cluster_cycles(kept, params.clusters)
        stage = "features"
        return features(kept, model)
    except SuplabError as exc:
        raise PipelineError(stage, exc) from exc


def omicc_classify(
    day: PowerSeries, t_on: int, training: TrainingSet, params: OmiccParams
) -> str:
    """Feature pipeline followed by KNN against the training set."""
    fv = feature_vector(day, t_on, params)
    try:
        return knn_classify(fv, training, params.neighbors)
    except SuplabError as exc:
        raise PipelineError("knn", exc) from exc


def build_training_set(dataset, params: OmiccParams, appliance: str | None = None):
    """Feature vectors at every ground-truth turn-on of a labeled dataset.

    Events whose pipeline fails are skipped and counted. Returns
    (TrainingSet, skipped_count).
    """
    records = dataset.records
    if appliance is not None:
        records = [r for r in records if r.appliance == appliance]
    else:
        names = {r.appliance for r in records}
        if len(names) > 1:
            raise InvalidInputError(
                f"dataset mixes appliances {sorted(names)}; pass one explicitly"
            )
        appliance = next(iter(names)) if names else ""
    rows, labels, skipped = [], [], 0
    for rec in records:
        day = dataset.load_day(rec)
        try:
            rows.append(feature_vector(day, rec.t_on, params))
            labels.append(rec.mode)
        except PipelineError:
            skipped += 1
    if not rows:
        raise InvalidStateError("every event failed the feature pipeline")
    return TrainingSet(np.array(rows), tuple(labels), appliance), skipped
