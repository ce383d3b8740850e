"""Generators for bicycle CSS codes and the bundled pedagogical codes.

A bicycle code starts from a sparse cyclic matrix C built from a random
weight-w/2 vector, forms the self-dual block H0 = (C | C^T), deletes rows
down to the target check count, and emits one Z-type and one X-type check
per remaining row.  Self-duality of H makes all checks commute.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .codes import StabilizerCode
from .pauli import PauliOperator

_BUILTINS = {
    "two_qubit_toy": ("XX", "ZZ"),
    "five_qubit": ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"),
}


class GenerationError(RuntimeError):
    """Raised when bicycle generation exhausts its retry budget."""


@dataclass(frozen=True)
class BicycleSpec:
    n: int
    m: int
    w: int
    seed: int | None = None

    def __post_init__(self):
        if self.n % 2 or self.m % 2 or self.w % 2:
            raise ValueError(f"n, m, w must all be even, got {(self.n, self.m, self.w)}")
        if not 0 < self.m < self.n:
            raise ValueError(f"need 0 < m < n, got m={self.m}, n={self.n}")
        if not 0 < self.w // 2 <= self.n // 2:
            raise ValueError(f"row weight w={self.w} out of range for n={self.n}")


def cyclic_matrix(a: np.ndarray) -> np.ndarray:
    """Circulant binary matrix with C[i, j] = a[(j - i) mod d].

    Row i is the generating vector cyclically shifted right by i, so all row
    and column weights equal weight(a).  Note the j - i index: the symmetric
    i + j variant would make C its own transpose and give the two halves of a
    bicycle block identical columns, i.e. weight-2 undetectable errors.
    """
    a = np.asarray(a, dtype=np.uint8)
    d = a.shape[0]
    if d < 1:
        raise ValueError("empty generating vector")
    idx = (np.arange(d)[None, :] - np.arange(d)[:, None]) % d
    return a[idx]


def _matrix_rows(h: np.ndarray) -> list[int]:
    return [int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little") for row in h]


def _checks_from_matrix(h: np.ndarray) -> list[PauliOperator]:
    rows = _matrix_rows(h)
    n = h.shape[1]
    checks = [PauliOperator(n, 0, r) for r in rows]       # Z-type
    checks += [PauliOperator(n, r, 0) for r in rows]      # X-type
    return checks


def _self_dual_witness(h: np.ndarray):
    overlap = (h.astype(np.int64) @ h.T.astype(np.int64)) % 2
    bad = np.argwhere(overlap == 1)
    return (int(bad[0][0]), int(bad[0][1])) if bad.size else None


def css_from_matrix(h: np.ndarray) -> StabilizerCode:
    """CSS code from a self-dual full-rank binary matrix: Z rows then X rows."""
    h = np.asarray(h, dtype=np.uint8) % 2
    if h.ndim != 2 or h.size == 0:
        raise ValueError("expected a nonempty binary matrix")
    witness = _self_dual_witness(h)
    if witness is not None:
        raise ValueError(f"matrix is not self-dual: rows {witness[0]} and {witness[1]} have odd overlap")
    if gf2.rank(_matrix_rows(h)) < h.shape[0]:
        raise ValueError("matrix is rank deficient")
    return StabilizerCode(_checks_from_matrix(h))


def _balanced_deletion(h0: np.ndarray, keep: int) -> np.ndarray:
    """Greedily delete rows, minimizing the column-weight variance at each step."""
    remaining = list(range(h0.shape[0]))
    colw = h0.sum(axis=0).astype(np.int64)
    while len(remaining) > keep:
        rows = h0[remaining].astype(np.int64)
        variances = ((colw[None, :] - rows) ** 2).mean(axis=1) - ((colw[None, :] - rows).mean(axis=1)) ** 2
        drop = int(np.argmin(variances))
        colw -= rows[drop]
        remaining.pop(drop)
    return np.array(remaining, dtype=np.int64)


def generate_bicycle(spec: BicycleSpec, deletion: str = "balanced", max_attempts: int = 100) -> StabilizerCode:
    """Draw a random bicycle code for the given block parameters.

    Deterministic for a fixed spec (including seed).  Retries with fresh
    randomness when the deleted matrix has a zero-weight column or dependent
    rows, and fails after max_attempts draws.
    """
    if deletion not in ("balanced", "random"):
        raise ValueError(f"unknown deletion mode {deletion!r}")
    if spec.m * spec.w < 2 * spec.n:
        raise GenerationError(
            f"infeasible spec {spec}: {spec.m // 2} rows of weight {spec.w} cannot cover "
            f"{spec.n} columns, so a zero-weight column is unavoidable"
        )
    rng = np.random.default_rng(spec.seed)
    d = spec.n // 2
    keep = spec.m // 2
    for attempt in range(max_attempts):
        a = np.zeros(d, dtype=np.uint8)
        a[rng.choice(d, size=spec.w // 2, replace=False)] = 1
        h0 = np.hstack([cyclic_matrix(a), cyclic_matrix(a).T])
        deletion_tries = 1 if deletion == "balanced" else 5
        for _ in range(deletion_tries):
            if deletion == "balanced":
                rows = _balanced_deletion(h0, keep)
            else:
                rows = np.sort(rng.choice(d, size=keep, replace=False))
            h = h0[rows]
            if (h.sum(axis=0) == 0).any():
                continue
            # Duplicate columns pair up into weight-2 undetectable errors, so
            # avoid them while fresh draws remain; tiny instances may not
            # admit distinct columns at all, so relax once the budget is half
            # spent rather than failing outright.
            if attempt < max_attempts // 2 and len({tuple(col) for col in h.T}) < spec.n:
                continue
            if gf2.rank(_matrix_rows(h)) < keep:
                continue
            return StabilizerCode(_checks_from_matrix(h))
    raise GenerationError(f"no valid bicycle code after {max_attempts} attempts for {spec}")


def check_matrix(code: StabilizerCode) -> np.ndarray:
    """Recover the binary CSS matrix H from a bicycle/CSS code (Z rows first)."""
    half = code.m // 2
    h = np.zeros((half, code.n), dtype=np.uint8)
    for c in range(half):
        h[c] = code.checks[c].z_array()
    return h


def builtin(name: str) -> StabilizerCode:
    """One of the bundled codes: two_qubit_toy or five_qubit."""
    try:
        checks = _BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown builtin code {name!r}; choose from {sorted(_BUILTINS)}") from None
    return StabilizerCode(checks)
