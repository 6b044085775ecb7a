import math

import pytest

from ifmsim.errors import InvalidDistribution
from ifmsim.interferometer import DetectorDistribution, Outcome
from ifmsim.montecarlo import (
    OUTCOME_ORDER,
    SplitMix64,
    TrialRecord,
    Xoshiro256StarStar,
    frequency_check,
    sample_outcomes,
)

EV = DetectorDistribution(0.25, 0.25, 0.5)


class TestGenerators:
    def test_splitmix64_reference(self):
        sm = SplitMix64(1234567)
        assert [sm.next_u64() for _ in range(3)] == [
            6457827717110365317,
            3203168211198807973,
            9817491932198370423,
        ]

    def test_xoshiro_reference(self):
        rng = Xoshiro256StarStar(0)
        rng.s = [1, 2, 3, 4]
        assert [rng.next_u64() for _ in range(4)] == [11520, 0, 1509978240, 1215971899390074240]

    def test_uniform_range(self):
        rng = Xoshiro256StarStar(7)
        xs = [rng.random() for _ in range(10_000)]
        assert all(0.0 <= x < 1.0 for x in xs)
        assert sum(xs) / len(xs) == pytest.approx(0.5, abs=0.02)

    def test_seeds_differ(self):
        a, b = Xoshiro256StarStar(1), Xoshiro256StarStar(2)
        assert [a.next_u64() for _ in range(4)] != [b.next_u64() for _ in range(4)]


class TestSampling:
    def test_degenerate_ld(self):
        recs = sample_outcomes(DetectorDistribution(1, 0, 0), 1000, seed=3)
        assert {r.outcome for r in recs} == {Outcome.LD}

    def test_degenerate_dd(self):
        recs = sample_outcomes((0, 1, 0), 5, seed=3)
        assert [r.outcome for r in recs] == [Outcome.DD] * 5
        assert [r.trial_index for r in recs] == list(range(5))

    def test_zero_weight_outcome_unreachable(self):
        # cumulative sum stops short of 1; draws past it must not land on ABS
        dist = DetectorDistribution(0.1, 0.9 - 5e-11, 0.0)
        recs = sample_outcomes(dist, 20_000, seed=11)
        assert Outcome.ABS not in {r.outcome for r in recs}

    def test_reproducible(self):
        assert sample_outcomes(EV, 500, seed=42) == sample_outcomes(EV, 500, seed=42)
        assert sample_outcomes(EV, 500, seed=42) != sample_outcomes(EV, 500, seed=43)

    def test_ev_frequencies(self):
        report = frequency_check(sample_outcomes(EV, 100_000, seed=42), EV)
        for o in OUTCOME_ORDER:
            assert abs(report.empirical[o] - EV[o]) < 0.01
        assert report.passed

    def test_pinned_counts(self):
        report = frequency_check(sample_outcomes(EV, 100_000, seed=42), EV)
        assert report.counts == {Outcome.LD: 24870, Outcome.DD: 25016, Outcome.ABS: 50114}

    def test_invalid(self):
        with pytest.raises(InvalidDistribution):
            sample_outcomes((0.5, 0.6, 0.1), 10, seed=1)
        with pytest.raises(InvalidDistribution):
            sample_outcomes("nope", 10, seed=1)
        with pytest.raises(ValueError):
            sample_outcomes(EV, 0, seed=1)


class TestFrequencyCheck:
    def test_perfect_match(self):
        recs = [TrialRecord(o, i) for i, o in enumerate([Outcome.LD, Outcome.DD, Outcome.ABS, Outcome.ABS])]
        report = frequency_check(recs, EV)
        assert all(z == 0 for z in report.z_scores.values())
        assert report.passed
        assert sum(report.counts.values()) == report.n == 4

    def test_adversarial(self):
        recs = [TrialRecord(Outcome.LD, i) for i in range(100)]
        report = frequency_check(recs, EV)
        assert report.z_scores[Outcome.DD] == pytest.approx(-5.773502691896258, abs=1e-12)
        assert report.z_scores[Outcome.LD] == pytest.approx(17.320508075688775, abs=1e-12)
        assert not report.passed

    def test_degenerate_has_zero_z(self):
        dist = DetectorDistribution(1, 0, 0)
        report = frequency_check(sample_outcomes(dist, 50, seed=9), dist)
        assert report.z_scores == {o: 0.0 for o in OUTCOME_ORDER}
        assert report.passed

    def test_impossible_outcome_fails(self):
        report = frequency_check([TrialRecord(Outcome.DD, 0)], DetectorDistribution(1, 0, 0))
        assert math.isinf(report.z_scores[Outcome.DD])
        assert not report.passed

    def test_single_record(self):
        report = frequency_check(sample_outcomes(EV, 1, seed=42), EV)
        assert report.n == 1
        assert all(math.isfinite(z) for z in report.z_scores.values())

    def test_empty(self):
        with pytest.raises(ValueError):
            frequency_check([], EV)

    def test_most_seeds_pass(self):
        passes = sum(frequency_check(sample_outcomes(EV, 20_000, seed=s), EV).passed for s in range(10))
        assert passes >= 9

    def test_to_dict(self):
        d = frequency_check(sample_outcomes(EV, 10, seed=1), EV).to_dict()
        assert set(d["counts"]) == {"LD", "DD", "ABS"}
        assert d["threshold"] == 4.0
