"""Quaternary belief propagation on the decorated Tanner graph.

Messages are probability 4-vectors over {I, X, Y, Z} attached to each
directed Tanner edge.  The check update is evaluated in the commutation
domain: each incoming message collapses to a single number d = P(commute) -
P(anticommute) against the edge decoration, the syndrome constraint only
sees the product of those numbers, and the outgoing 4-vector splits the
resulting two-way mass evenly over the commuting and anticommuting letters.
This is contractually identical to the naive sum over all neighbor
assignments but costs O(degree) instead of O(4^degree).

The schedule is synchronous flooding: all checks update, then all qubits,
then beliefs, hard decision, and the halting test, once per iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codes import StabilizerCode
from .pauli import PauliOperator

# Strictly positive floor applied to message and belief entries after each
# normalization so that no letter is ever absorbed at exactly zero.  The value
# must stay far below every oracle-equivalence tolerance: a floored entry
# renormalizes to roughly floor / (consistent mass), which at 1e-12 already
# exceeds 1e-10 for low-mass rows.
EPS_FLOOR = 1e-30

HEURISTICS = ("none", "freeze", "perturb", "collision_freeze", "collision_perturb")


def depolarizing_prior(n: int, eps: float) -> np.ndarray:
    """Per-qubit prior (1-eps, eps/3, eps/3, eps/3) as an (n, 4) array."""
    if not 0 <= eps <= 1:
        raise ValueError(f"depolarizing strength must lie in [0, 1], got {eps}")
    row = np.array([1.0 - eps, eps / 3.0, eps / 3.0, eps / 3.0])
    return np.tile(row, (n, 1))


def validate_prior(prior: np.ndarray, n: int) -> np.ndarray:
    prior = np.asarray(prior, dtype=np.float64)
    if prior.shape != (n, 4):
        raise ValueError(f"prior must have shape ({n}, 4), got {prior.shape}")
    if (prior < 0).any():
        raise ValueError("prior has negative entries")
    if np.abs(prior.sum(axis=1) - 1.0).max() > 1e-12:
        raise ValueError("prior rows must sum to 1")
    return prior


@dataclass(frozen=True)
class DecodeConfig:
    max_iterations: int = 90
    t_pert: int = 6
    delta: float = 0.1
    heuristic: str = "none"
    seed: int | None = None

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 1 <= self.t_pert <= self.max_iterations:
            raise ValueError("need 1 <= t_pert <= max_iterations")
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if self.heuristic not in HEURISTICS:
            raise ValueError(f"unknown heuristic {self.heuristic!r}; choose from {HEURISTICS}")


@dataclass
class MessageState:
    """Mutable per-decode state: edge messages plus the working priors.

    Message arrays are indexed in check-major edge order.  The working prior
    starts as a copy of the channel prior; heuristics mutate it in place.
    """

    working_prior: np.ndarray  # (n, 4)
    m_qc: np.ndarray           # (E, 4) qubit-to-check
    m_cq: np.ndarray           # (E, 4) check-to-qubit


@dataclass
class DecodeResult:
    correction: PauliOperator
    converged: bool
    iterations_used: int
    final_beliefs: np.ndarray = field(repr=False)


def init_messages(code: StabilizerCode, prior: np.ndarray) -> MessageState:
    """Each qubit opens by sending its prior; check messages start uniform."""
    prior = validate_prior(prior, code.n)
    wp = np.maximum(prior, EPS_FLOOR)
    ea = code.edges
    m_qc = wp[ea.qubit].copy()
    m_cq = np.full((len(ea.qubit), 4), 0.25)
    return MessageState(working_prior=wp, m_qc=m_qc, m_cq=m_cq)


def check_update(state: MessageState, code: StabilizerCode, syndrome: np.ndarray) -> None:
    """Refresh every check-to-qubit message for the given syndrome.

    The outgoing value for letter E is (1 + s_c * sign(E) * prod) / 4 where
    prod multiplies the commute/anticommute biases of all other incoming
    messages; zero biases are handled exactly.
    """
    ea = code.edges
    s_edge = syndrome.astype(np.float64)[ea.check]
    d = np.einsum("ij,ij->i", state.m_qc, ea.sign)
    zero = d == 0.0
    if zero.any():
        d1 = np.where(zero, 1.0, d)
        total = np.multiply.reduceat(d1, ea.check_start[:-1])
        nzero = np.add.reduceat(zero.astype(np.int64), ea.check_start[:-1])
        tot_e = total[ea.check]
        nz_e = nzero[ea.check]
        prod_excl = np.where(nz_e == 0, tot_e / d1, np.where((nz_e == 1) & zero, tot_e, 0.0))
    else:
        total = np.multiply.reduceat(d, ea.check_start[:-1])
        prod_excl = total[ea.check] / d
    t = s_edge * prod_excl
    t *= 0.25
    m_cq = t[:, None] * ea.sign
    m_cq += 0.25
    np.maximum(m_cq, EPS_FLOOR, out=m_cq)
    state.m_cq = m_cq


def _qubit_products(state: MessageState, code: StabilizerCode):
    """Unnormalized beliefs: working prior times the product of all incoming messages."""
    ea = code.edges
    w = state.m_cq.take(ea.qubit_order, axis=0)
    prod = np.multiply.reduceat(w, ea.qubit_start[:-1], axis=0)
    bu = state.working_prior.copy()
    bu[ea.active_qubits] *= prod
    return bu, w


def _normalize_rows(rows: np.ndarray) -> np.ndarray:
    totals = rows[:, 0] + rows[:, 1] + rows[:, 2] + rows[:, 3]
    dead = totals <= 0.0
    if dead.any():
        rows[dead] = 0.25
        totals[dead] = 1.0
    rows /= totals[:, None]
    np.maximum(rows, EPS_FLOOR, out=rows)
    return rows


def qubit_update(state: MessageState, code: StabilizerCode) -> np.ndarray:
    """Refresh every qubit-to-check message; returns the fresh beliefs."""
    ea = code.edges
    bu, w = _qubit_products(state, code)
    out = bu.take(ea.qubit_of_sorted, axis=0)
    out /= w
    _normalize_rows(out)
    state.m_qc[ea.qubit_order] = out
    return _normalize_rows(bu)


def compute_beliefs(state: MessageState, code: StabilizerCode) -> np.ndarray:
    """Normalized per-qubit beliefs from the current check messages."""
    bu, _ = _qubit_products(state, code)
    return _normalize_rows(bu)


def hard_decision(beliefs: np.ndarray) -> PauliOperator:
    """Per-qubit argmax with deterministic tie-break order I < X < Y < Z."""
    return PauliOperator.from_letters(np.argmax(beliefs, axis=1).astype(np.int8))


def _run(code, prior, syndrome, config, intervene=None, trace=None) -> DecodeResult:
    """Flooding-schedule driver shared by the plain and heuristic decoders.

    intervene, when given, is called as intervene(state, iteration, frustrated)
    after every t_pert unconverged iterations, with frustrated listing the
    checks whose syndrome bit disagrees with the current hard decision.
    """
    syndrome = np.asarray(syndrome, dtype=np.int8)
    if syndrome.shape != (code.m,):
        raise ValueError(f"syndrome must have {code.m} bits, got shape {syndrome.shape}")
    state = init_messages(code, prior)
    target01 = ((1 - syndrome) // 2).astype(np.uint8)
    beliefs = state.working_prior.copy()
    letters = np.argmax(beliefs, axis=1).astype(np.int8)
    since_intervention = 0
    iterations = 0
    for iteration in range(1, config.max_iterations + 1):
        iterations = iteration
        check_update(state, code, syndrome)
        beliefs = qubit_update(state, code)
        letters = np.argmax(beliefs, axis=1).astype(np.int8)
        if trace is not None:
            trace.append((iteration, beliefs.copy()))
        violated = code.syndrome01_of_letters(letters)
        if np.array_equal(violated, target01):
            return DecodeResult(
                correction=PauliOperator.from_letters(letters),
                converged=True,
                iterations_used=iteration,
                final_beliefs=beliefs,
            )
        since_intervention += 1
        if intervene is not None and since_intervention >= config.t_pert and iteration < config.max_iterations:
            frustrated = np.flatnonzero(violated != target01)
            intervene(state, iteration, [int(c) for c in frustrated])
            # outgoing qubit messages must reflect the mutated priors in the
            # very next iteration (a no-op for untouched qubits)
            qubit_update(state, code)
            since_intervention = 0
    return DecodeResult(
        correction=PauliOperator.from_letters(letters),
        converged=False,
        iterations_used=iterations,
        final_beliefs=beliefs,
    )


def decode(code: StabilizerCode, prior: np.ndarray, syndrome: np.ndarray,
           config: DecodeConfig | None = None, trace=None) -> DecodeResult:
    """Plain BP decoding: iterate to the first syndrome-matching hard decision.

    Non-convergence within max_iterations is reported via converged=False,
    not as an error.
    """
    config = config or DecodeConfig()
    return _run(code, prior, syndrome, config, intervene=None, trace=trace)
