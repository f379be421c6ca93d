import numpy as np
import pytest
from hypothesis import given, strategies as st

from e7theta import f2
from e7theta.errors import DimensionError


def test_bit_order_is_msb_first():
    assert f2.bit(0, 4) == 0b1000
    assert f2.pack([1, 0, 1, 1]) == 0b1011
    assert f2.unpack(0b1011, 4) == (1, 0, 1, 1)


def test_as_vector_rejects_out_of_range():
    with pytest.raises(DimensionError):
        f2.as_vector(16, 4)
    with pytest.raises(DimensionError):
        f2.as_vector([1, 0], 3)


def test_hex_round_trip():
    assert f2.to_hex(0b1011, 6) == "0b"
    assert f2.from_hex("0b", 6) == 0b1011


@given(st.lists(st.integers(0, 1), min_size=1, max_size=20))
def test_pack_unpack_inverse(coords):
    assert list(f2.unpack(f2.pack(coords), len(coords))) == coords


def _random_invertible(rng, n):
    while True:
        m = rng.integers(0, 2, size=(n, n))
        cols = f2.array_to_cols(m)
        if f2.rank(cols) == n:
            return cols


@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_inverse_and_product(n, seed):
    rng = np.random.default_rng(seed)
    a = _random_invertible(rng, n)
    inv = f2.mat_inverse(a)
    assert f2.mat_mul(a, inv) == f2.identity(n)
    assert f2.mat_mul(inv, a) == f2.identity(n)


@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_matrix_array_agreement(n, seed):
    rng = np.random.default_rng(seed)
    m = rng.integers(0, 2, size=(n, n))
    x = rng.integers(0, 2, size=n)
    cols = f2.array_to_cols(m)
    assert f2.unpack(f2.mat_apply(cols, f2.pack(x)), n) == tuple((m @ x) % 2)
    assert np.array_equal(f2.cols_to_array(cols), m % 2)


@given(st.lists(st.integers(0, 2**7 - 1), min_size=1, max_size=9))
def test_nullspace_dimension(rows):
    n = 7
    null = f2.nullspace(rows, n)
    assert len(null) == n - f2.rank(rows)
    for v in null:
        assert all(f2.dot(r, v) == 0 for r in rows)


def test_gram_schmidt_on_standard_form():
    g = 3
    n = 2 * g

    def form(u, v):
        sw = (v >> g) | ((v & ((1 << g) - 1)) << g)
        return f2.dot(u, sw)

    es, fs, rest = f2.symplectic_gram_schmidt([f2.bit(k, n) for k in range(n)], form)
    assert len(es) == len(fs) == g and rest == []
    for i in range(g):
        for j in range(g):
            assert form(es[i], fs[j]) == (i == j)
            assert form(es[i], es[j]) == 0 and form(fs[i], fs[j]) == 0
