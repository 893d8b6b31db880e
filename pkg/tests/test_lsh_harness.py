import json
import math

import pytest

from lshcube.codes import golay_code
from lshcube.lsh_harness import (
    ExperimentConfig,
    MAX_DEFAULT_RETRIES,
    default_retries,
    estimate_rho,
    predicted_collision,
    run_experiment,
    run_trials,
    trials_csv,
)
from lshcube.distdist import rho_exponent


@pytest.fixture(scope="module")
def golay_run():
    return run_experiment(ExperimentConfig("golay", M=2**12, gamma=0.3, trials=10_000, seed=1))


def test_golay_round_one_rate(golay_run):
    r = golay_run
    assert r.predicted_p1 == pytest.approx(predicted_collision(golay_code(), 0.3))
    assert abs(r.empirical_p1 - r.predicted_p1) < 3 * r.p1_sigma


def test_bucket_mean_balanced(golay_run):
    assert golay_run.predicted_bucket == 1.0
    assert abs(golay_run.empirical_bucket_mean - 1.0) < 0.05


def test_background_pairs_collide_at_two_to_minus_k(golay_run):
    p = 2.0**-12
    sigma = math.sqrt(p * (1 - p) / ((2**12 - 1) * 10_000))
    assert abs(golay_run.empirical_pair_rate - p) < 3 * sigma


def test_round_bookkeeping(golay_run):
    r = golay_run
    assert r.max_retries == default_retries(r.predicted_p1) == math.ceil(4 / r.predicted_p1)
    done = sum(r.rounds_histogram.values())
    assert done + r.censored == 10_000
    assert r.rounds_histogram[1] == round(r.empirical_p1 * 10_000)
    assert max(r.rounds_histogram) <= r.max_retries
    assert r.rng == "numpy.random.PCG64"


def test_golay_rho_below_projection(golay_run):
    proj = rho_exponent(0.7**12, 2.0**-12)
    assert proj == pytest.approx(-math.log2(0.7))
    assert golay_run.rho_predicted < proj


def test_same_config_same_bytes():
    cfg = ExperimentConfig("hamming:4", M=512, gamma=0.2, trials=300, seed=9)
    assert run_experiment(cfg).to_json() == run_experiment(cfg).to_json()
    other = ExperimentConfig("hamming:4", M=512, gamma=0.2, trials=300, seed=10)
    assert run_experiment(cfg).to_json() != run_experiment(other).to_json()


def test_report_json_fields():
    cfg = ExperimentConfig("projection:20,8", M=64, gamma=0.1, trials=50, seed=3, max_retries=5)
    d = json.loads(run_experiment(cfg).to_json())
    assert d["config"]["code"] == "projection:20,8" and d["max_retries"] == 5
    for key in ("empirical_p1", "empirical_bucket_mean", "empirical_pair_rate"):
        assert 0.0 <= d[key] <= 64


def test_noiseless_always_collides():
    r = run_experiment(ExperimentConfig("golay", M=256, gamma=0.0, trials=200))
    assert r.empirical_p1 == 1.0 and r.censored == 0 and r.mean_rounds == 1.0


def test_trial_records_and_csv():
    cfg = ExperimentConfig("hamming:3", M=32, gamma=0.25, trials=40, seed=2)
    recs = run_trials(cfg)
    assert [r.trial for r in recs] == list(range(40))
    lines = trials_csv(recs).splitlines()
    assert lines[0] == "trial,x,y,round,bucket" and len(lines) == 41
    assert recs == run_trials(cfg)


def test_estimate_rho():
    cfg = ExperimentConfig("projection:16,4", M=64, gamma=0.1, trials=4000, seed=5)
    assert estimate_rho(cfg) == pytest.approx(-math.log2(0.9), abs=0.03)
    with pytest.raises(ValueError):
        estimate_rho(ExperimentConfig("projection:63,60", M=8, gamma=0.45, trials=20))


def test_config_validation():
    for bad in (dict(M=1), dict(trials=0), dict(gamma=0.5), dict(max_retries=0), dict(seed=-1)):
        kw = dict(code="golay", M=16, gamma=0.1, trials=1) | bad
        with pytest.raises(ValueError):
            ExperimentConfig(**kw)
    with pytest.raises(ValueError):
        run_experiment(ExperimentConfig("projection:64,10", M=4, gamma=0.1, trials=1))


def test_default_retries_are_bounded():
    assert default_retries(1e-16) == MAX_DEFAULT_RETRIES
    assert default_retries(0.0) == MAX_DEFAULT_RETRIES
    assert default_retries(0.5) == 8
