"""GF(2) linear algebra on bit-packed integer row vectors.

Rows are Python ints; column j is bit j.  Pivots are chosen at the lowest
set bit, so for symplectic (x|z) layouts with x in the low half the X block
is eliminated first.
"""

from __future__ import annotations


def lowest_bit(v: int) -> int:
    return (v & -v).bit_length() - 1


def echelon(rows) -> list[tuple[int, int]]:
    """Reduced row-echelon basis as (pivot, row) pairs."""
    basis: list[tuple[int, int]] = []
    for r in rows:
        r = reduce_vector(r, basis)
        if r == 0:
            continue
        p = lowest_bit(r)
        for i, (p2, r2) in enumerate(basis):
            if (r2 >> p) & 1:
                basis[i] = (p2, r2 ^ r)
        basis.append((p, r))
    return basis


def reduce_vector(v: int, basis) -> int:
    for p, row in basis:
        if (v >> p) & 1:
            v ^= row
    return v


def rank(rows) -> int:
    return len(echelon(rows))


def in_rowspan(v: int, basis) -> bool:
    return reduce_vector(v, basis) == 0


def first_dependent(rows) -> int | None:
    """Index of the first row lying in the span of the earlier ones."""
    basis: list[tuple[int, int]] = []
    for i, r in enumerate(rows):
        r = reduce_vector(r, basis)
        if r == 0:
            return i
        p = lowest_bit(r)
        for j, (p2, r2) in enumerate(basis):
            if (r2 >> p) & 1:
                basis[j] = (p2, r2 ^ r)
        basis.append((p, r))
    return None


def nullspace(rows, ncols: int) -> list[int]:
    """Basis of {v : parity(row & v) = 0 for every row}."""
    basis = echelon(rows)
    pivots = {p for p, _ in basis}
    out = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = 1 << f
        for p, row in basis:
            if (row >> f) & 1:
                v |= 1 << p
        out.append(v)
    return out


def solve_unit_targets(rows) -> list[int]:
    """For full-row-rank constraints, vectors v_c with parity(rows[j] & v_c) = [j == c].

    Raises ValueError if the rows are dependent.
    """
    basis: list[tuple[int, int, int]] = []  # (pivot, row, combination tag)
    for i, r in enumerate(rows):
        tag = 1 << i
        for p, row, t in basis:
            if (r >> p) & 1:
                r ^= row
                tag ^= t
        if r == 0:
            raise ValueError(f"row {i} is dependent on earlier rows")
        p = lowest_bit(r)
        for j, (p2, r2, t2) in enumerate(basis):
            if (r2 >> p) & 1:
                basis[j] = (p2, r2 ^ r, t2 ^ tag)
        basis.append((p, r, tag))
    sols = []
    for c in range(len(rows)):
        v = 0
        for p, _row, tag in basis:
            if (tag >> c) & 1:
                v |= 1 << p
        sols.append(v)
    return sols
