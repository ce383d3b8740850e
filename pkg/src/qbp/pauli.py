"""Phase-free n-qubit Pauli operators in binary symplectic form.

An operator is stored as a pair of bit-packed integers: bit q of ``x_bits``
is set when the factor on qubit q is X or Y, bit q of ``z_bits`` when it is
Z or Y.  Multiplication is then XOR and the commutation sign is a popcount
parity, so group operations cost O(n / wordsize).  Phases are dropped at
construction time; the represented group is the Pauli group modulo its
center, which is all a Pauli channel can distinguish.
"""

from __future__ import annotations

import numpy as np

LETTERS = "IXYZ"

# Letter codes used throughout the package: I=0, X=1, Y=2, Z=3.
_X_BIT = (0, 1, 1, 0)
_Z_BIT = (0, 0, 1, 1)

# Single-qubit commutation signs, SIGN_TABLE[a, b] for letter codes a, b.
# I commutes with everything; X, Y, Z pairwise anticommute.
SIGN_TABLE = np.array(
    [
        [1, 1, 1, 1],
        [1, 1, -1, -1],
        [1, -1, 1, -1],
        [1, -1, -1, 1],
    ],
    dtype=np.int8,
)

# 1 where the two letters anticommute.
ANTI_TABLE = ((1 - SIGN_TABLE) // 2).astype(np.uint8)


def commute_single(a: str, b: str) -> int:
    """Commutation sign (+1 or -1) of two single-qubit Pauli letters."""
    return int(SIGN_TABLE[LETTERS.index(a), LETTERS.index(b)])


class PauliOperator:
    """An n-qubit Pauli operator modulo phase."""

    __slots__ = ("n", "x_bits", "z_bits")

    def __init__(self, n: int, x_bits: int, z_bits: int):
        if n < 1:
            raise ValueError("operator needs at least one qubit")
        mask = (1 << n) - 1
        if x_bits & ~mask or z_bits & ~mask:
            raise ValueError("bit vector longer than qubit count")
        self.n = n
        self.x_bits = x_bits
        self.z_bits = z_bits

    # -- construction -------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, 0, 0)

    @classmethod
    def from_string(cls, text: str) -> "PauliOperator":
        """Parse a string such as ``"XIIY"``; leftmost letter is qubit 0."""
        if not text:
            raise ValueError("empty Pauli string")
        x = z = 0
        for q, ch in enumerate(text):
            if ch == "I":
                continue
            if ch == "X":
                x |= 1 << q
            elif ch == "Y":
                x |= 1 << q
                z |= 1 << q
            elif ch == "Z":
                z |= 1 << q
            else:
                raise ValueError(f"invalid Pauli letter {ch!r} at position {q}")
        return cls(len(text), x, z)

    @classmethod
    def from_letters(cls, letters: np.ndarray) -> "PauliOperator":
        """Build from an array of letter codes (0=I, 1=X, 2=Y, 3=Z)."""
        letters = np.asarray(letters)
        n = letters.shape[0]
        xb = np.packbits((letters == 1) | (letters == 2), bitorder="little")
        zb = np.packbits((letters == 2) | (letters == 3), bitorder="little")
        return cls(n, int.from_bytes(xb.tobytes(), "little"), int.from_bytes(zb.tobytes(), "little"))

    # -- views ---------------------------------------------------------

    def x_array(self) -> np.ndarray:
        return _bits_to_array(self.x_bits, self.n)

    def z_array(self) -> np.ndarray:
        return _bits_to_array(self.z_bits, self.n)

    def letters(self) -> np.ndarray:
        """Per-qubit letter codes as an int8 array."""
        xb = _bits_to_array(self.x_bits, self.n).astype(np.int8)
        zb = _bits_to_array(self.z_bits, self.n).astype(np.int8)
        return xb + zb * (3 - 2 * xb)

    def support(self) -> int:
        """Bit mask of qubits with a non-identity factor."""
        return self.x_bits | self.z_bits

    @property
    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    # -- group operations ----------------------------------------------

    def commute(self, other: "PauliOperator") -> int:
        """Commutation sign: +1 if the operators commute, -1 otherwise.

        Equals the parity of the binary symplectic inner product, which in
        turn equals the product of the per-qubit sign table entries.
        """
        if self.n != other.n:
            raise ValueError(f"qubit count mismatch: {self.n} != {other.n}")
        parity = ((self.x_bits & other.z_bits).bit_count() + (self.z_bits & other.x_bits).bit_count()) & 1
        return -1 if parity else 1

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        if self.n != other.n:
            raise ValueError(f"qubit count mismatch: {self.n} != {other.n}")
        return PauliOperator(self.n, self.x_bits ^ other.x_bits, self.z_bits ^ other.z_bits)

    # -- plumbing --------------------------------------------------------

    def __str__(self) -> str:
        return "".join(LETTERS[c] for c in self.letters())

    def __repr__(self) -> str:
        return f"PauliOperator({str(self)!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return self.n == other.n and self.x_bits == other.x_bits and self.z_bits == other.z_bits

    def __hash__(self) -> int:
        return hash((self.n, self.x_bits, self.z_bits))


def _bits_to_array(bits: int, n: int) -> np.ndarray:
    raw = np.frombuffer(bits.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little", count=n)


def parse(text: str) -> PauliOperator:
    return PauliOperator.from_string(text)


def render(op: PauliOperator) -> str:
    return str(op)


def commute(e: PauliOperator, f: PauliOperator) -> int:
    return e.commute(f)


def multiply(e: PauliOperator, f: PauliOperator) -> PauliOperator:
    return e * f


def weight(e: PauliOperator) -> int:
    return e.weight
