"""Monte Carlo check of hash-and-retry search for a planted noisy duplicate.

Each trial draws M uniform points, picks one of them as x and plants
y = x + e with Bernoulli(gamma) noise.  Round 1 hashes everything; when y
misses x's bucket every point is shifted by a fresh uniform vector and hashed
again, up to a retry cap.  Only x + s and y + s decide whether a shifted round
succeeds, so later rounds hash just those two words.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .analysis import as_curve
from .bitvec import RNG_NAME, make_rng, random_error_array
from .codes import BlockCode, parse_code
from .distdist import DistDist, collision_probability, rho_exponent

MAX_POINT_DIM = 63
MAX_DEFAULT_RETRIES = 1 << 20
SHIFT_CHUNK = 1 << 16


@dataclass(frozen=True)
class ExperimentConfig:
    code: str
    M: int
    gamma: float
    trials: int
    seed: int = 0
    max_retries: int | None = None  # None: ceil(4 / P), at most MAX_DEFAULT_RETRIES

    def __post_init__(self):
        if self.M < 2:
            raise ValueError("M must be at least 2")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if not 0.0 <= self.gamma < 0.5:
            raise ValueError("gamma must lie in [0, 1/2)")
        if self.max_retries is not None and self.max_retries < 1:
            raise ValueError("max_retries must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class ExperimentReport:
    config: dict
    rng: str
    n: int
    k: int
    predicted_p1: float
    empirical_p1: float
    p1_sigma: float
    predicted_bucket: float
    empirical_bucket_mean: float
    predicted_pair_rate: float
    empirical_pair_rate: float
    max_retries: int
    censored: int
    mean_rounds: float | None
    rounds_histogram: dict[int, int] = field(default_factory=dict)
    rho_estimate: float | None = None
    rho_predicted: float | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    x: int
    y: int
    round: int  # 0 when censored
    bucket: int  # points other than x sharing y's round-1 bucket


def predicted_collision(code: BlockCode, gamma: float) -> float:
    c = as_curve(code)
    return collision_probability(DistDist(c.coeffs, c.n, c.size), gamma)


def default_retries(p: float) -> int:
    if p <= 0:
        return MAX_DEFAULT_RETRIES
    return int(min(MAX_DEFAULT_RETRIES, max(1, math.ceil(4.0 / p))))


def _run(cfg: ExperimentConfig) -> tuple[ExperimentReport, list[TrialRecord]]:
    code = parse_code(cfg.code)
    n, k = code.n, code.k
    if n > MAX_POINT_DIM:
        raise ValueError(f"points are packed in 64 bits; code length {n} > {MAX_POINT_DIM}")
    p = predicted_collision(code, cfg.gamma)
    cap = cfg.max_retries or default_retries(p)
    top = np.uint64((1 << n) - 1) if n < 64 else np.uint64(2**64 - 1)

    records = []
    for t in range(cfg.trials):
        rng = make_rng(cfg.seed, t)
        pts = rng.integers(0, int(top), size=cfg.M, dtype=np.uint64, endpoint=True)
        xi = int(rng.integers(cfg.M))
        x = pts[xi]
        y = x ^ random_error_array(rng, cfg.gamma, n, 1)[0]
        h = code.hash_array(pts)
        hy = code.hash_array(np.array([y], dtype=np.uint64))[0]
        bucket = int(np.count_nonzero(h == hy)) - int(h[xi] == hy)
        rnd = 1 if h[xi] == hy else 0
        done_rounds = 1
        while not rnd and done_rounds < cap:
            m = min(SHIFT_CHUNK, cap - done_rounds)
            shifts = rng.integers(0, int(top), size=m, dtype=np.uint64, endpoint=True)
            hit = np.nonzero(code.hash_array(x ^ shifts) == code.hash_array(y ^ shifts))[0]
            if hit.size:
                rnd = done_rounds + int(hit[0]) + 1
            done_rounds += m
        records.append(TrialRecord(t, int(x), int(y), rnd, bucket))

    rounds = np.array([r.round for r in records])
    buckets = np.array([r.bucket for r in records], dtype=float)
    done = rounds[rounds > 0]
    hist = {int(r): int(c) for r, c in zip(*np.unique(done, return_counts=True))}
    p1 = float(np.mean(rounds == 1))
    pair_rate = float(buckets.mean() / (cfg.M - 1))
    report = ExperimentReport(
        config=asdict(cfg),
        rng=RNG_NAME,
        n=n,
        k=k,
        predicted_p1=p,
        empirical_p1=p1,
        p1_sigma=math.sqrt(p * (1 - p) / cfg.trials),
        predicted_bucket=cfg.M / 2**k,
        empirical_bucket_mean=float(buckets.mean()),
        predicted_pair_rate=2.0**-k,
        empirical_pair_rate=pair_rate,
        max_retries=cap,
        censored=int(np.count_nonzero(rounds == 0)),
        mean_rounds=float(done.mean()) if done.size else None,
        rounds_histogram=hist,
        rho_estimate=rho_exponent(p1, 2.0**-k) if 0 < p1 and k > 0 else None,
        rho_predicted=rho_exponent(p, 2.0**-k) if 0 < p and k > 0 else None,
    )
    return report, records


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Deterministic given the config: trial t draws from the stream (seed, t).

    Round-1 success is observed in every trial, so ``empirical_p1`` uses all
    of them; censored trials (cap reached) only drop out of the round counts.
    """
    return _run(cfg)[0]


def run_trials(cfg: ExperimentConfig) -> list[TrialRecord]:
    return _run(cfg)[1]


def trials_csv(records: list[TrialRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["trial", "x", "y", "round", "bucket"])
    for r in records:
        w.writerow([r.trial, format(r.x, "x"), format(r.y, "x"), r.round, r.bucket])
    return buf.getvalue()


def estimate_rho(cfg: ExperimentConfig) -> float:
    """lg(1/p1) / lg(2^k) from the empirical round-1 collision rate."""
    report = run_experiment(cfg)
    if report.empirical_p1 == 0.0:
        raise ValueError("no round-1 collisions observed; increase trials")
    return rho_exponent(report.empirical_p1, 2.0**-report.k)
