import math

import numpy as np
import pytest

import qbp
from qbp.simulate import DETECTED, LOGICAL, SUCCESS, classify_residual


def test_sample_error_extremes():
    rng = np.random.default_rng(0)
    assert qbp.sample_error(qbp.depolarizing_prior(20, 0.0), rng).is_identity
    full = qbp.sample_error(qbp.depolarizing_prior(20, 1.0), rng)
    assert full.weight == 20


def test_sample_error_frequencies():
    rng = np.random.default_rng(1)
    prior = qbp.depolarizing_prior(1, 0.3)
    counts = np.zeros(4)
    draws = 100_000
    for _ in range(draws):
        counts[qbp.sample_error(prior, rng).letters()[0]] += 1
    for v, p in enumerate([0.7, 0.1, 0.1, 0.1]):
        sigma = math.sqrt(p * (1 - p) * draws)
        assert abs(counts[v] - p * draws) <= 3 * sigma


def test_classify_residual(toy, five):
    assert classify_residual(toy, qbp.parse("IX"), qbp.parse("II")) == DETECTED
    assert classify_residual(toy, qbp.parse("IX"), qbp.parse("XI")) == SUCCESS
    assert classify_residual(toy, qbp.parse("IX"), qbp.parse("IX")) == SUCCESS
    logical = five.canonical_generators()[1][0]
    assert classify_residual(five, logical, qbp.PauliOperator.identity(5)) == LOGICAL


def test_run_trial_toy_detected(toy):
    # at eps = 1 the sampled error has full weight, so the toy decoder without
    # heuristics either matches or reports a detected failure
    prior = qbp.depolarizing_prior(2, 0.4)
    rng = np.random.default_rng(2)
    for _ in range(50):
        out = qbp.run_trial(toy, prior, qbp.DecodeConfig(), rng)
        assert out.classification in (SUCCESS, DETECTED, LOGICAL)
        assert 1 <= out.iterations_used <= 90
        assert 0 <= out.error_weight <= 2


def test_detected_iff_not_converged(five):
    prior = qbp.depolarizing_prior(5, 0.15)
    for t in range(60):
        rng = np.random.default_rng([4, t])
        e = qbp.sample_error(prior, rng)
        s = five.syndrome(e)
        res, _ = qbp.decode_with_heuristics(five, prior, s, qbp.DecodeConfig(heuristic="freeze", seed=t))
        cls = classify_residual(five, e, res.correction)
        assert (cls == DETECTED) == (not res.converged)


def test_wilson_interval():
    lo, hi = qbp.wilson_interval(0, 100)
    assert lo == 0.0 and 0 < hi < 0.05
    lo, hi = qbp.wilson_interval(100, 100)
    assert hi == 1.0
    # reference values from the closed-form score interval
    lo, hi = qbp.wilson_interval(1, 10)
    z = 1.959963984540054
    p, n = 0.1, 10
    denom = 1 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    assert abs(lo - (center - half)) <= 1e-15 and abs(hi - (center + half)) <= 1e-15
    lo, hi = qbp.wilson_interval(5, 50)
    assert lo < 5 / 50 < hi
    with pytest.raises(ValueError):
        qbp.wilson_interval(0, 0)


def test_run_simulation_zero_eps(five):
    stats = qbp.run_simulation(five, [0.0], 50, qbp.DecodeConfig(), master_seed=1)
    p = stats.points[0]
    assert p.failures == 0 and p.bler == 0.0 and p.mean_iterations == 1.0
    assert p.ci_low == 0.0 and not p.early_stopped


def test_run_simulation_monotone_within_ci(small_bicycle):
    cfg = qbp.DecodeConfig(heuristic="none")
    stats = qbp.run_simulation(small_bicycle, [0.02, 0.08, 0.2], 400, cfg, master_seed=3, max_failures=None)
    pts = stats.points
    for a, b in zip(pts, pts[1:]):
        assert a.bler <= b.bler or a.ci_low <= b.ci_high
    assert pts[0].bler <= pts[-1].bler


def test_run_simulation_deterministic_across_jobs(small_bicycle):
    cfg = qbp.DecodeConfig(heuristic="perturb")
    runs = [
        qbp.run_simulation(small_bicycle, [0.05, 0.1], 200, cfg, master_seed=7, jobs=j, max_failures=None)
        for j in (1, 2, 1)
    ]
    texts = [qbp.stats_to_csv(s) for s in runs]
    assert texts[0] == texts[1] == texts[2]
    jsons = [qbp.stats_to_json(s) for s in runs]
    assert jsons[0] == jsons[1] == jsons[2]


def test_early_stop_deterministic(small_bicycle):
    cfg = qbp.DecodeConfig()
    a = qbp.run_simulation(small_bicycle, [0.25], 500, cfg, master_seed=11, jobs=1, max_failures=10)
    b = qbp.run_simulation(small_bicycle, [0.25], 500, cfg, master_seed=11, jobs=2, max_failures=10)
    assert qbp.stats_to_csv(a) == qbp.stats_to_csv(b)
    p = a.points[0]
    assert p.early_stopped and p.failures == 10 and p.trials < 500


def test_stats_serialization_fields(small_bicycle):
    stats = qbp.run_simulation(small_bicycle, [0.05], 30, qbp.DecodeConfig(), master_seed=5)
    csv_text = qbp.stats_to_csv(stats)
    header = csv_text.splitlines()
    assert header[2] == "epsilon,trials,failures,detected,logical,bler,ci_low,ci_high,mean_iterations"
    assert header[0].startswith("# qbp")
    assert stats.code_fingerprint == small_bicycle.fingerprint()
    js = qbp.stats_to_json(stats)
    assert '"master_seed": 5' in js and '"points"' in js


def test_failures_decompose(small_bicycle):
    stats = qbp.run_simulation(small_bicycle, [0.15], 200, qbp.DecodeConfig(), master_seed=13, max_failures=None)
    p = stats.points[0]
    assert p.failures == p.detected + p.logical
    assert p.trials == 200
    assert math.isclose(p.bler, p.failures / 200)
    assert p.ci_low <= p.bler <= p.ci_high
