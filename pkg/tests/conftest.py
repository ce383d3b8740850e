import numpy as np
import pytest

import qbp


@pytest.fixture(scope="session")
def toy():
    return qbp.builtin("two_qubit_toy")


@pytest.fixture(scope="session")
def five():
    return qbp.builtin("five_qubit")


@pytest.fixture(scope="session")
def small_bicycle():
    return qbp.generate_bicycle(qbp.BicycleSpec(n=20, m=10, w=6, seed=42))


def random_pauli(rng, n):
    return qbp.PauliOperator.from_letters(rng.integers(0, 4, size=n).astype(np.int8))


def random_single_check_code(rng, max_weight=6):
    w = int(rng.integers(1, max_weight + 1))
    letters = rng.integers(1, 4, size=w).astype(np.int8)
    return qbp.StabilizerCode([qbp.PauliOperator.from_letters(letters)])
