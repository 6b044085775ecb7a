"""Single-shot detector sampling and frequency checks against Born-rule predictions.

Random numbers come from xoshiro256** (Blackman & Vigna), with its 256-bit
state seeded by four consecutive SplitMix64 outputs. Uniform doubles in
[0, 1) take the top 53 bits: ``(x >> 11) * 2**-53``. Both generators are
pure integer arithmetic, so a seed yields the same stream on any
implementation of the same algorithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvalidDistribution
from .interferometer import DetectorDistribution, Outcome

__all__ = [
    "SplitMix64",
    "Xoshiro256StarStar",
    "TrialRecord",
    "TallyReport",
    "OUTCOME_ORDER",
    "Z_THRESHOLD",
    "sample_outcomes",
    "frequency_check",
]

MASK64 = (1 << 64) - 1
OUTCOME_ORDER = (Outcome.LD, Outcome.DD, Outcome.ABS)
Z_THRESHOLD = 4.0


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256StarStar:
    """xoshiro256** 1.0 generator.

    >>> rng = Xoshiro256StarStar(42)
    >>> 0.0 <= rng.random() < 1.0
    True
    """

    def __init__(self, seed: int):
        sm = SplitMix64(seed)
        self.s = [sm.next_u64() for _ in range(4)]

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class TrialRecord:
    outcome: Outcome
    trial_index: int


@dataclass(frozen=True)
class TallyReport:
    n: int
    counts: dict[Outcome, int]
    empirical: dict[Outcome, float]
    expected: dict[Outcome, float]
    z_scores: dict[Outcome, float]
    threshold: float = field(default=Z_THRESHOLD)

    @property
    def passed(self) -> bool:
        return all(abs(z) < self.threshold for z in self.z_scores.values())

    def to_dict(self) -> dict:
        def keyed(d):
            return {o.value: d[o] for o in OUTCOME_ORDER}

        return {
            "n": self.n,
            "counts": keyed(self.counts),
            "empirical": keyed(self.empirical),
            "expected": keyed(self.expected),
            "z_scores": keyed(self.z_scores),
            "threshold": self.threshold,
            "passed": self.passed,
        }


def _validated(dist) -> DetectorDistribution:
    if isinstance(dist, DetectorDistribution):
        return dist
    try:
        return DetectorDistribution(*dist)
    except TypeError as exc:
        raise InvalidDistribution(f"cannot interpret {dist!r} as a distribution") from exc


def sample_outcomes(
    dist: DetectorDistribution | Sequence[float], n: int, seed: int
) -> list[TrialRecord]:
    """Draw ``n`` independent detector outcomes by inverse CDF over (LD, DD, ABS)."""
    dist = _validated(dist)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    probs = [dist[o] for o in OUTCOME_ORDER]
    cdf = []
    acc = 0.0
    for p in probs:
        acc += p
        cdf.append(acc)
    # rounding can leave the cumulative sum just below 1; the last outcome
    # with nonzero weight absorbs any draw past it
    last = max(i for i, p in enumerate(probs) if p > 0.0)
    c_ld, c_dd = cdf[0], cdf[1]

    rng = Xoshiro256StarStar(seed)
    records = []
    for i in range(n):
        u = rng.random()
        if u < c_ld:
            k = 0
        elif u < c_dd:
            k = 1
        else:
            k = 2
        if k > last or probs[k] == 0.0:
            k = last
        records.append(TrialRecord(OUTCOME_ORDER[k], i))
    return records


def frequency_check(
    records: Iterable[TrialRecord], dist: DetectorDistribution | Sequence[float]
) -> TallyReport:
    """Compare empirical outcome frequencies with ``dist`` via per-outcome z-scores.

    ``z = (empirical - expected) * sqrt(n) / sqrt(expected * (1 - expected))``.
    When ``expected`` is 0 or 1 the binomial variance vanishes; ``z`` is
    then 0 if the tally agrees exactly and infinite otherwise.
    """
    dist = _validated(dist)
    records = list(records)
    n = len(records)
    if n == 0:
        raise ValueError("records must be non-empty")
    counts = {o: 0 for o in OUTCOME_ORDER}
    for r in records:
        counts[r.outcome] += 1
    empirical = {o: counts[o] / n for o in OUTCOME_ORDER}
    expected = {o: dist[o] for o in OUTCOME_ORDER}
    z_scores = {}
    for o in OUTCOME_ORDER:
        p = expected[o]
        diff = empirical[o] - p
        var = p * (1.0 - p)
        if var > 0.0:
            z_scores[o] = diff * math.sqrt(n) / math.sqrt(var)
        elif diff == 0.0:
            z_scores[o] = 0.0
        else:
            z_scores[o] = math.copysign(math.inf, diff)
    return TallyReport(n, counts, empirical, expected, z_scores)
