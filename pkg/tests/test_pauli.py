import numpy as np
import pytest
from hypothesis import given, strategies as st

import qbp
from qbp.pauli import LETTERS, PauliOperator, commute_single

pauli_strings = st.text(alphabet="IXYZ", min_size=1, max_size=48)


def paired_strings(draw):
    s = draw(pauli_strings)
    t = draw(st.text(alphabet="IXYZ", min_size=len(s), max_size=len(s)))
    return s, t


# the single-qubit commutation table: I commutes with everything,
# X, Y, Z pairwise anticommute
TABLE = {
    ("I", "I"): 1, ("I", "X"): 1, ("I", "Y"): 1, ("I", "Z"): 1,
    ("X", "I"): 1, ("X", "X"): 1, ("X", "Y"): -1, ("X", "Z"): -1,
    ("Y", "I"): 1, ("Y", "X"): -1, ("Y", "Y"): 1, ("Y", "Z"): -1,
    ("Z", "I"): 1, ("Z", "X"): -1, ("Z", "Y"): -1, ("Z", "Z"): 1,
}


def test_commute_single_full_table():
    for (a, b), want in TABLE.items():
        assert commute_single(a, b) == want


@pytest.mark.parametrize(
    "e,f,want",
    [
        ("XZZXI", "IXZZX", 1),
        ("IX", "ZZ", -1),
        ("XIIY", "IIII", 1),
        ("XZZXI", "XIXZZ", 1),
    ],
)
def test_commute_examples(e, f, want):
    assert qbp.commute(qbp.parse(e), qbp.parse(f)) == want


def test_commute_length_mismatch():
    with pytest.raises(ValueError):
        qbp.commute(qbp.parse("XX"), qbp.parse("X"))


@pytest.mark.parametrize(
    "e,f,want",
    [
        ("XI", "IX", "XX"),
        ("XX", "IX", "XI"),
        ("Y", "X", "Z"),
        ("XZZXI", "XZZXI", "IIIII"),
    ],
)
def test_multiply_examples(e, f, want):
    assert str(qbp.multiply(qbp.parse(e), qbp.parse(f))) == want


@pytest.mark.parametrize("text,want", [("XIIY", 2), ("IIII", 0), ("XZZXI", 4)])
def test_weight(text, want):
    assert qbp.weight(qbp.parse(text)) == want


def test_parse_bit_layout():
    op = qbp.parse("XIIY")
    assert list(op.x_array()) == [1, 0, 0, 1]
    assert list(op.z_array()) == [0, 0, 0, 1]
    assert list(op.letters()) == [1, 0, 0, 2]


@pytest.mark.parametrize("bad", ["", "XA", "xz", "I I"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        qbp.parse(bad)


@given(pauli_strings)
def test_roundtrip(text):
    assert qbp.render(qbp.parse(text)) == text


@given(st.data())
def test_commute_symmetry_and_table_product(data):
    s = data.draw(pauli_strings)
    t = data.draw(st.text(alphabet="IXYZ", min_size=len(s), max_size=len(s)))
    e, f = qbp.parse(s), qbp.parse(t)
    assert e.commute(f) == f.commute(e)
    prod = 1
    for a, b in zip(s, t):
        prod *= TABLE[(a, b)]
    assert e.commute(f) == prod


@given(st.data())
def test_bicharacter_and_involution(data):
    n = data.draw(st.integers(min_value=1, max_value=32))
    strs = [data.draw(st.text(alphabet="IXYZ", min_size=n, max_size=n)) for _ in range(3)]
    e, f, g = (qbp.parse(x) for x in strs)
    assert (e * f).commute(g) == e.commute(g) * f.commute(g)
    assert (e * e).is_identity
    assert (e * f) * g == e * (f * g)


def test_commute_matches_table_product_bulk():
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        n = int(rng.integers(1, 9))
        a = rng.integers(0, 4, size=n)
        b = rng.integers(0, 4, size=n)
        e = PauliOperator.from_letters(a.astype(np.int8))
        f = PauliOperator.from_letters(b.astype(np.int8))
        prod = 1
        for x, y in zip(a, b):
            prod *= TABLE[(LETTERS[x], LETTERS[y])]
        assert e.commute(f) == prod


def test_equality_and_hash():
    assert qbp.parse("XY") == qbp.parse("XY")
    assert qbp.parse("XY") != qbp.parse("YX")
    assert len({qbp.parse("XY"), qbp.parse("XY"), qbp.parse("YX")}) == 2


def test_from_letters_matches_parse():
    rng = np.random.default_rng(5)
    for _ in range(50):
        letters = rng.integers(0, 4, size=int(rng.integers(1, 70))).astype(np.int8)
        text = "".join(LETTERS[v] for v in letters)
        assert PauliOperator.from_letters(letters) == qbp.parse(text)
