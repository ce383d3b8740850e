"""Brute-force reference decoders for small instances.

These enumerate the full Pauli group (or the full stabilizer group), so they
are exact by construction and guarded by hard size limits rather than
silently approximating.  They exist to check the message-passing decoder and
to expose the gap between most-likely-error and most-likely-coset decoding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import StabilizerCode
from .bp import validate_prior
from .pauli import ANTI_TABLE, PauliOperator

MAX_ENUM_QUBITS = 12
MAX_COSET_CHECKS = 16
MAX_COSET_LOGICALS = 4

_CHUNK = 1 << 16


def _letters_block(n: int, start: int, stop: int) -> np.ndarray:
    """Letter codes for enumeration indices [start, stop); qubit 0 is the most
    significant base-4 digit, so index order is lexicographic operator order."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, n), dtype=np.int8)
    for q in range(n):
        out[:, q] = (idx >> (2 * (n - 1 - q))) & 3
    return out


def _block_probs(letters: np.ndarray, prior: np.ndarray) -> np.ndarray:
    probs = np.ones(letters.shape[0])
    for q in range(letters.shape[1]):
        probs *= prior[q, letters[:, q]]
    return probs


def _block_consistent(letters: np.ndarray, code: StabilizerCode, target01: np.ndarray) -> np.ndarray:
    ok = np.ones(letters.shape[0], dtype=bool)
    for c, adj in enumerate(code.tanner):
        acc = np.zeros(letters.shape[0], dtype=np.uint8)
        for q, letter in adj:
            acc ^= ANTI_TABLE[letter, letters[:, q]]
        ok &= acc == target01[c]
    return ok


def _check_enum_size(code: StabilizerCode):
    if code.n > MAX_ENUM_QUBITS:
        raise ValueError(f"exact enumeration is limited to {MAX_ENUM_QUBITS} qubits, code has {code.n}")


def exact_marginals(code: StabilizerCode, prior: np.ndarray, syndrome: np.ndarray) -> np.ndarray:
    """Exact conditional marginals p_q(E_q | s) by full enumeration."""
    _check_enum_size(code)
    prior = validate_prior(prior, code.n)
    target01 = ((1 - np.asarray(syndrome, dtype=np.int8)) // 2).astype(np.uint8)
    mass = np.zeros((code.n, 4))
    total = 1 << (2 * code.n)
    for start in range(0, total, _CHUNK):
        letters = _letters_block(code.n, start, min(start + _CHUNK, total))
        probs = _block_probs(letters, prior)
        probs[~_block_consistent(letters, code, target01)] = 0.0
        for q in range(code.n):
            for v in range(4):
                mass[q, v] += probs[letters[:, q] == v].sum()
    norm = mass.sum(axis=1, keepdims=True)
    if (norm <= 0).any():
        raise RuntimeError("no operator is consistent with the syndrome")
    return mass / norm


def exact_map(code: StabilizerCode, prior: np.ndarray, syndrome: np.ndarray) -> PauliOperator:
    """A most likely syndrome-consistent error; ties go to the lexicographically first."""
    _check_enum_size(code)
    prior = validate_prior(prior, code.n)
    target01 = ((1 - np.asarray(syndrome, dtype=np.int8)) // 2).astype(np.uint8)
    best_p = -1.0
    best_letters = None
    total = 1 << (2 * code.n)
    for start in range(0, total, _CHUNK):
        letters = _letters_block(code.n, start, min(start + _CHUNK, total))
        probs = _block_probs(letters, prior)
        probs[~_block_consistent(letters, code, target01)] = -1.0
        i = int(np.argmax(probs))
        if probs[i] > best_p:
            best_p = probs[i]
            best_letters = letters[i].copy()
    if best_letters is None or best_p < 0:
        raise RuntimeError("no operator is consistent with the syndrome")
    return PauliOperator.from_letters(best_letters)


@dataclass(frozen=True)
class CosetTable:
    """Probability mass of every logical class for one syndrome."""

    logicals: tuple[PauliOperator, ...]   # class representatives (logical part only)
    raw_mass: np.ndarray                  # unnormalized: sums to p(s) over classes

    @property
    def normalized(self) -> np.ndarray:
        return self.raw_mass / self.raw_mass.sum()


def _prob_of_row(row: int, code: StabilizerCode, prior: np.ndarray) -> float:
    mask = (1 << code.n) - 1
    x, z = row & mask, row >> code.n
    p = 1.0
    for q in range(code.n):
        xb = (x >> q) & 1
        zb = (z >> q) & 1
        p *= prior[q, xb + zb * (3 - 2 * xb)]
    return p


def coset_decode(code: StabilizerCode, prior: np.ndarray, syndrome: np.ndarray):
    """Most likely logical class given the syndrome, with the full class table.

    Sums p(S * t(s) * L) over the whole stabilizer group for every logical
    class L; the recovery operator for the winning class is t(s) * L.
    Returns (L_star, CosetTable).
    """
    if code.m > MAX_COSET_CHECKS:
        raise ValueError(f"coset enumeration is limited to {MAX_COSET_CHECKS} checks, code has {code.m}")
    if code.k > MAX_COSET_LOGICALS:
        raise ValueError(f"coset enumeration is limited to {MAX_COSET_LOGICALS} logical qubits, code has {code.k}")
    prior = validate_prior(prior, code.n)
    rows = [code._symplectic_row(op) for op in code.checks]
    stab_elems = [0]
    for r in rows:
        stab_elems += [e ^ r for e in stab_elems]
    _, logicals = code.canonical_generators()
    logical_rows = [code._symplectic_row(op) for op in logicals]
    t_row = code._symplectic_row(code.pure_error_for_syndrome(np.asarray(syndrome, dtype=np.int8)))

    n_classes = 1 << (2 * code.k)
    mass = np.zeros(n_classes)
    reps = []
    for ell in range(n_classes):
        l_row = 0
        for b in range(2 * code.k):
            if (ell >> b) & 1:
                l_row ^= logical_rows[b]
        base = t_row ^ l_row
        mass[ell] = sum(_prob_of_row(base ^ s, code, prior) for s in stab_elems)
        reps.append(code._op_from_row(l_row))
    table = CosetTable(logicals=tuple(reps), raw_mass=mass)
    best = int(np.argmax(mass))
    return reps[best], table
