"""Monte Carlo block-error evaluation over depolarizing channels.

Each trial draws a Pauli error, decodes its syndrome, and classifies the
residual (error times correction): a nontrivial residual syndrome is a
detected failure, a residual inside the stabilizer group is a success, and
anything else is a logical (undetected) failure.  Trials use counter-based
RNG streams derived from (master seed, epsilon index, trial index), so
results are bit-identical regardless of how many workers run them.
"""

from __future__ import annotations

import dataclasses
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .bp import DecodeConfig, depolarizing_prior, validate_prior
from .codes import STABILIZER, StabilizerCode
from .heuristics import decode_with_heuristics
from .pauli import PauliOperator

SUCCESS = "success"
DETECTED = "detected"
LOGICAL = "logical"

_CLASS_CODES = {SUCCESS: 0, DETECTED: 1, LOGICAL: 2}
_CLASS_NAMES = {v: k for k, v in _CLASS_CODES.items()}

_CHUNK_TRIALS = 50


@dataclass(frozen=True)
class TrialOutcome:
    classification: str
    iterations_used: int
    perturbations: int
    error_weight: int


@dataclass
class PointStats:
    epsilon: float
    trials: int
    failures: int
    detected: int
    logical: int
    bler: float
    ci_low: float
    ci_high: float
    mean_iterations: float
    early_stopped: bool


@dataclass
class SimStats:
    points: list
    master_seed: int
    trials_requested: int
    max_failures: int | None
    config: DecodeConfig
    code_fingerprint: str


def wilson_interval(failures: int, trials: int, z: float = 1.959963984540054):
    """95% Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = failures / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    lo = 0.0 if failures == 0 else max(0.0, center - half)
    hi = 1.0 if failures == trials else min(1.0, center + half)
    return lo, hi


def sample_error(prior: np.ndarray, rng) -> PauliOperator:
    """Independent per-qubit draw from the channel prior."""
    prior = validate_prior(prior, prior.shape[0])
    cum = np.cumsum(prior, axis=1)
    r = rng.random(prior.shape[0])
    letters = (r[:, None] >= cum[:, :3]).sum(axis=1).astype(np.int8)
    return PauliOperator.from_letters(letters)


def classify_residual(code: StabilizerCode, error: PauliOperator, correction: PauliOperator) -> str:
    residual = error * correction
    if any(c.commute(residual) != 1 for c in code.checks):
        return DETECTED
    return SUCCESS if code.residual_class(residual) == STABILIZER else LOGICAL


def run_trial(code: StabilizerCode, prior: np.ndarray, config: DecodeConfig, rng) -> TrialOutcome:
    error = sample_error(prior, rng)
    syndrome = code.syndrome(error)
    result, events = decode_with_heuristics(code, prior, syndrome, config, rng=rng)
    return TrialOutcome(
        classification=classify_residual(code, error, result.correction),
        iterations_used=result.iterations_used,
        perturbations=len(events),
        error_weight=error.weight,
    )


# -- parallel plumbing -------------------------------------------------------

_WORKER: dict = {}


def _init_worker(code: StabilizerCode, config: DecodeConfig, master_seed: int):
    _WORKER["code"] = code
    _WORKER["config"] = config
    _WORKER["master_seed"] = master_seed
    _WORKER["priors"] = {}


def _trial_tuple(code, prior, config, master_seed, eps_index, trial_index):
    rng = np.random.default_rng([master_seed, eps_index, trial_index])
    out = run_trial(code, prior, config, rng)
    return (_CLASS_CODES[out.classification], out.iterations_used, out.perturbations, out.error_weight)


def _run_chunk(args):
    eps_index, eps, start, stop = args
    code = _WORKER["code"]
    config = _WORKER["config"]
    master_seed = _WORKER["master_seed"]
    prior = _WORKER["priors"].get(eps_index)
    if prior is None:
        prior = depolarizing_prior(code.n, eps)
        _WORKER["priors"][eps_index] = prior
    return [
        _trial_tuple(code, prior, config, master_seed, eps_index, t)
        for t in range(start, stop)
    ]


def _aggregate(eps: float, outcomes, early_stopped: bool) -> PointStats:
    trials = len(outcomes)
    detected = sum(1 for o in outcomes if o[0] == _CLASS_CODES[DETECTED])
    logical = sum(1 for o in outcomes if o[0] == _CLASS_CODES[LOGICAL])
    failures = detected + logical
    total_iters = sum(o[1] for o in outcomes)
    lo, hi = wilson_interval(failures, trials)
    return PointStats(
        epsilon=eps,
        trials=trials,
        failures=failures,
        detected=detected,
        logical=logical,
        bler=failures / trials,
        ci_low=lo,
        ci_high=hi,
        mean_iterations=total_iters / trials,
        early_stopped=early_stopped,
    )


def run_simulation(code: StabilizerCode, epsilons, trials: int, config: DecodeConfig,
                   master_seed: int, jobs: int = 1, max_failures: int | None = 100) -> SimStats:
    """Sweep the depolarizing strengths; deterministic for a fixed master seed.

    max_failures, when set, stops each sweep point after the failure count is
    reached on the trial-index-ordered prefix (the cut is identical however
    many workers are used).  Pass None to always run every trial.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    epsilons = [float(e) for e in epsilons]
    points = []
    executor = None
    try:
        if jobs > 1:
            executor = ProcessPoolExecutor(
                max_workers=jobs, initializer=_init_worker, initargs=(code, config, master_seed)
            )
        else:
            _init_worker(code, config, master_seed)
        for eps_index, eps in enumerate(epsilons):
            chunks = [
                (eps_index, eps, start, min(start + _CHUNK_TRIALS, trials))
                for start in range(0, trials, _CHUNK_TRIALS)
            ]
            if executor is not None:
                results = executor.map(_run_chunk, chunks)
            else:
                results = map(_run_chunk, chunks)
            outcomes = []
            early = False
            failures = 0
            for chunk_out in results:
                for tup in chunk_out:
                    outcomes.append(tup)
                    if tup[0] != _CLASS_CODES[SUCCESS]:
                        failures += 1
                        if max_failures is not None and failures >= max_failures:
                            early = len(outcomes) < trials
                            break
                else:
                    continue
                break
            points.append(_aggregate(eps, outcomes, early))
    finally:
        if executor is not None:
            executor.shutdown(cancel_futures=True)
    return SimStats(
        points=points,
        master_seed=master_seed,
        trials_requested=trials,
        max_failures=max_failures,
        config=config,
        code_fingerprint=code.fingerprint(),
    )


# -- serialization -----------------------------------------------------------

def _config_echo(stats: SimStats) -> dict:
    return {
        "version": __version__,
        "config": dataclasses.asdict(stats.config),
        "master_seed": stats.master_seed,
        "trials_requested": stats.trials_requested,
        "max_failures": stats.max_failures,
        "code_fingerprint": stats.code_fingerprint,
    }


def stats_to_csv(stats: SimStats) -> str:
    lines = [f"# qbp {__version__}", f"# {json.dumps(_config_echo(stats), sort_keys=True)}"]
    lines.append("epsilon,trials,failures,detected,logical,bler,ci_low,ci_high,mean_iterations")
    for p in stats.points:
        lines.append(
            f"{p.epsilon},{p.trials},{p.failures},{p.detected},{p.logical},"
            f"{p.bler},{p.ci_low},{p.ci_high},{p.mean_iterations}"
        )
    return "\n".join(lines) + "\n"


def stats_to_json(stats: SimStats) -> str:
    payload = _config_echo(stats)
    payload["points"] = [dataclasses.asdict(p) for p in stats.points]
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
