import numpy as np
import pytest

from suplab.detect import (
    DetectionConfig,
    ReferencePattern,
    detect,
    extract_turn_ons,
    residue,
    slice_reference,
    xcorr,
)
from suplab.errors import InvalidInputError, InvalidParameterError
from suplab.series import PowerSeries, RandomSource
from suplab.simulate import (
    IntensityDistribution,
    SimTuning,
    TurnOnDistribution,
    canonical_ssup,
    generate_day,
)
from suplab.supro import CycleSpec, PhaseSpec, Supro

from conftest import series


def brute_xcorr(s, d):
    """Direct evaluation of the normalized score at every offset."""
    n, m = len(s), len(d)
    avg_max = (max(s) + max(d)) / 2
    return [avg_max - sum(abs(s[k] - d[t + k]) for k in range(n)) / n
            for t in range(m - n + 1)]


def brute_turn_ons(values):
    """Scan positive runs and take each run's first maximum."""
    out, i = [], 0
    while i < len(values):
        if values[i] > 0:
            j = i
            while j + 1 < len(values) and values[j + 1] > 0:
                j += 1
            run = values[i:j + 1]
            out.append(i + run.index(max(run)))
            i = j + 1
        else:
            i += 1
    return out


class TestXcorr:
    def test_hand_example(self):
        ref = ReferencePattern(series([0, 10]))
        day = series([0, 0, 10, 0])
        out = xcorr(ref, day)
        assert out.tolist() == brute_xcorr([0, 10], [0, 0, 10, 0]) == [5.0, 10.0, 0.0]

    def test_exact_match_scores_average_of_maxima(self):
        rng = np.random.default_rng(0)
        content = rng.uniform(0, 100, 30)
        day_values = np.concatenate([rng.uniform(0, 5, 17), content, rng.uniform(0, 5, 11)])
        ref = ReferencePattern(PowerSeries(content))
        out = xcorr(ref, PowerSeries(day_values))
        avg_max = (content.max() + day_values.max()) / 2
        assert out[17] == pytest.approx(avg_max)
        assert out.argmax() == 17
        assert np.all(out <= avg_max + 1e-9)

    def test_all_zero_series(self):
        out = xcorr(ReferencePattern(series([0, 0])), series([0, 0, 0, 0]))
        assert np.array_equal(out, np.zeros(3))

    def test_reference_longer_than_day_rejected(self):
        with pytest.raises(InvalidInputError):
            xcorr(ReferencePattern(series([1, 2, 3])), series([1, 2]))

    def test_matches_brute_oracle_on_random_input(self):
        rng = np.random.default_rng(7)
        s = list(rng.integers(0, 50, 5).astype(float))
        d = list(rng.integers(0, 50, 40).astype(float))
        out = xcorr(ReferencePattern(series(s)), series(d))
        assert np.allclose(out, brute_xcorr(s, d))


class TestResidue:
    def test_tau_arithmetic(self):
        ref = ReferencePattern(series([1000, 0]))
        day = series([0, 1000, 0])
        x = xcorr(ref, day)
        res, tau = residue(x, ref, day, DetectionConfig(0.9))
        assert tau == pytest.approx(900.0)
        assert np.allclose(res, x - 900.0)

    def test_exact_match_residue_positive(self):
        content = [500.0, 900.0, 100.0]
        day = series([0, 0] + content + [0])
        ref = ReferencePattern(series(content))
        x = xcorr(ref, day)
        res, _ = residue(x, ref, day, DetectionConfig(0.9))
        assert res[2] == pytest.approx(0.1 * 900.0)

    def test_delta_validated(self):
        with pytest.raises(InvalidParameterError):
            DetectionConfig(0.0)
        with pytest.raises(InvalidParameterError):
            DetectionConfig(1.0)


class TestExtractTurnOns:
    def test_two_runs(self):
        res = [-1, -1, 2, 5, 3, -1, 1, 4, -2]
        assert extract_turn_ons(np.array(res, float)) == brute_turn_ons(res) == [3, 7]

    def test_all_negative(self):
        assert extract_turn_ons(np.array([-1.0, -0.5, -2.0])) == []

    def test_plateau_tie_takes_earliest(self):
        res = [-1, 4, 4, -1]
        assert extract_turn_ons(np.array(res, float)) == brute_turn_ons(res) == [1]

    def test_random_traces_match_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            res = list(rng.integers(-5, 5, 30).astype(float))
            assert extract_turn_ons(np.array(res)) == brute_turn_ons(res)


def dryer_like_supro():
    return Supro("dryer", "Medium", (
        PhaseSpec(1, 1, (CycleSpec("Start", 350, 80),)),
        PhaseSpec(1, 1, (CycleSpec("MaxHeat", 4500, 2000),)),
        PhaseSpec(5, 8, (CycleSpec("NoHeat", 250, 140), CycleSpec("HalfHeat", 2800, 120))),
        PhaseSpec(1, 1, (CycleSpec("End", 250, 140),)),
    ))


class TestDetect:
    def test_planted_profile_found_within_tolerance(self):
        supro = dryer_like_supro()
        pdf = np.zeros(24)
        pdf[8] = 1.0
        day = generate_day({"Medium": supro}, TurnOnDistribution(pdf),
                           IntensityDistribution("Medium", {"Light": 0, "Medium": 1.0, "Heavy": 0}),
                           SimTuning(), RandomSource(13))
        ref = slice_reference(canonical_ssup(supro), 800, "Medium")
        result = detect(ref, day.series, DetectionConfig(0.9))
        assert len(result.turn_ons) == 1
        assert abs(result.turn_ons[0] - day.t_on) <= 60

    def test_idle_day_has_no_detections(self):
        rng = RandomSource(19)
        day = PowerSeries(rng.uniform(0, 40.0, size=20_000))
        ref = slice_reference(canonical_ssup(dryer_like_supro()), 800)
        result = detect(ref, day, DetectionConfig(0.9))
        assert result.turn_ons == []

    def test_trace_kept_on_request(self):
        day = series([0, 0, 10, 0])
        ref = ReferencePattern(series([0, 10]))
        result = detect(ref, day, DetectionConfig(0.5), keep_trace=True)
        assert result.xcorr is not None and result.residue is not None
        assert len(result.xcorr) == len(result.residue) == 3

    def test_invariant_under_appended_idle_noise(self):
        supro = dryer_like_supro()
        pdf = np.zeros(24)
        pdf[2] = 1.0
        day = generate_day({"Medium": supro}, TurnOnDistribution(pdf),
                           IntensityDistribution("Medium", {"Light": 0, "Medium": 1.0, "Heavy": 0}),
                           SimTuning(), RandomSource(29))
        ref = slice_reference(canonical_ssup(supro), 700)
        cfg = DetectionConfig(0.9)
        base = detect(ref, day.series, cfg).turn_ons
        extra = RandomSource(31).uniform(0, 40.0, size=5000)
        extended = PowerSeries(np.concatenate([day.series.samples, extra]))
        assert detect(ref, extended, cfg).turn_ons == base

    def test_raising_delta_shrinks_detection_regions(self):
        # Raising the threshold never uncovers new regions: every detection at a
        # higher delta falls inside a positive run of every lower delta, and the
        # positive set only shrinks. (The raw run COUNT is not monotone: a noisy
        # hump can split into several runs when the threshold slices its top.)
        supro = dryer_like_supro()
        ref = slice_reference(canonical_ssup(supro), 800)
        dist = IntensityDistribution("Medium", {"Light": 0, "Medium": 1.0, "Heavy": 0})
        rng = RandomSource(37)
        deltas = (0.60, 0.75, 0.85, 0.90, 0.97)
        for _ in range(3):
            day = generate_day({"Medium": supro}, TurnOnDistribution.uniform(), dist,
                               SimTuning(), rng)
            x = xcorr(ref, day.series)
            positives, turn_ons = [], []
            for d in deltas:
                res, _ = residue(x, ref, day.series, DetectionConfig(d))
                positives.append(res > 0)
                turn_ons.append(extract_turn_ons(res))
            for lo, hi in zip(positives, positives[1:]):
                assert np.all(lo[hi])  # higher-delta positives nest in lower-delta ones
            for lower_pos, higher in zip(positives, turn_ons[1:]):
                assert all(lower_pos[t] for t in higher)
            assert turn_ons[-1] == []  # delta near 1 cancels everything

    def test_detection_counts_on_separated_thresholds(self):
        # on a clean planted day, widely separated deltas give shrinking counts
        supro = dryer_like_supro()
        ref = slice_reference(canonical_ssup(supro), 800)
        pdf = np.zeros(24)
        pdf[9] = 1.0
        day = generate_day({"Medium": supro}, TurnOnDistribution(pdf),
                           IntensityDistribution("Medium", {"Light": 0, "Medium": 1.0, "Heavy": 0}),
                           SimTuning(), RandomSource(41))
        x = xcorr(ref, day.series)
        counts = []
        for d in (0.60, 0.90, 0.97):
            res, _ = residue(x, ref, day.series, DetectionConfig(d))
            counts.append(len(extract_turn_ons(res)))
        assert counts == sorted(counts, reverse=True)
        assert counts[1] == 1


class TestSliceReference:
    def test_slices_profile_start(self):
        profile = series([1, 2, 3, 4, 5])
        ref = slice_reference(profile, 3, "Light")
        assert ref.series.samples.tolist() == [1, 2, 3]
        assert ref.source_mode == "Light"

    def test_oversized_slice_rejected(self):
        with pytest.raises(InvalidInputError):
            slice_reference(series([1, 2, 3]), 4)
