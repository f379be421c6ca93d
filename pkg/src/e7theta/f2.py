"""Bit-packed linear algebra over F2.

A vector of length ``n`` is a Python ``int``; coordinate ``k`` (0-based) lives
in bit ``n - 1 - k``, so integer order equals lexicographic order of the
coordinate tuple.  A matrix is a tuple of its column vectors.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DimensionError


def bit(k: int, n: int) -> int:
    """The k-th standard basis vector of F2^n."""
    return 1 << (n - 1 - k)


def pack(coords: Sequence[int]) -> int:
    v = 0
    for c in coords:
        v = (v << 1) | (int(c) & 1)
    return v


def unpack(v: int, n: int) -> tuple[int, ...]:
    return tuple((v >> (n - 1 - k)) & 1 for k in range(n))


def parity(x: int) -> int:
    return x.bit_count() & 1


def dot(u: int, v: int) -> int:
    return (u & v).bit_count() & 1


def as_vector(x, n: int) -> int:
    """Coerce an int or a 0/1 sequence to a packed vector of length ``n``."""
    if isinstance(x, (int, np.integer)):
        x = int(x)
        if x < 0 or x >> n:
            raise DimensionError(f"integer {x} does not encode a vector of length {n}")
        return x
    coords = list(x)
    if len(coords) != n:
        raise DimensionError(f"expected {n} coordinates, got {len(coords)}")
    return pack(coords)


def to_hex(v: int, n: int) -> str:
    return format(v, "0{}x".format(max(1, (n + 3) // 4)))


def from_hex(s: str, n: int) -> int:
    return as_vector(int(s, 16), n)


def rank(vectors: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for v in vectors:
        v = reduce_vector(pivots, v)
        if v:
            pivots[v.bit_length()] = v
    return len(pivots)


def reduce_vector(pivots: dict[int, int], v: int) -> int:
    """Reduce ``v`` against an echelon basis keyed by leading-bit position."""
    while v:
        p = pivots.get(v.bit_length())
        if p is None:
            return v
        v ^= p
    return 0


def nullspace(rows: Sequence[int], n: int) -> list[int]:
    """Basis of {x : row . x = 0 for every row}, as packed vectors of length n."""
    # Gauss-Jordan on the rows; free columns give the kernel basis.
    rows = [r for r in rows]
    pivot_cols: list[int] = []
    r = 0
    for col in range(n):
        mask = bit(col, n)
        sel = next((i for i in range(r, len(rows)) if rows[i] & mask), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & mask:
                rows[i] ^= rows[r]
        pivot_cols.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivot_cols]
    basis = []
    for fc in free:
        v = bit(fc, n)
        for i, pc in enumerate(pivot_cols):
            if rows[i] & bit(fc, n):
                v |= bit(pc, n)
        basis.append(v)
    return basis


def mat_apply(cols: Sequence[int], x: int) -> int:
    n = len(cols)
    out = 0
    for k in range(n):
        if (x >> (n - 1 - k)) & 1:
            out ^= cols[k]
    return out


def mat_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(mat_apply(a, c) for c in b)


def identity(n: int) -> tuple[int, ...]:
    return tuple(bit(k, n) for k in range(n))


def mat_inverse(cols: Sequence[int]) -> tuple[int, ...]:
    """Inverse of a square matrix given by columns; raises if singular."""
    n = len(cols)
    # row-reduce [A | I] using rows of A
    a = cols_to_rows(cols)
    inv = list(identity(n))
    for col in range(n):
        mask = bit(col, n)
        sel = next((i for i in range(col, n) if a[i] & mask), None)
        if sel is None:
            raise DimensionError("matrix is singular over F2")
        a[col], a[sel] = a[sel], a[col]
        inv[col], inv[sel] = inv[sel], inv[col]
        for i in range(n):
            if i != col and a[i] & mask:
                a[i] ^= a[col]
                inv[i] ^= inv[col]
    return rows_to_cols(inv)


def cols_to_rows(cols: Sequence[int]) -> list[int]:
    n = len(cols)
    rows = []
    for i in range(n):
        r = 0
        for k in range(n):
            r = (r << 1) | ((cols[k] >> (n - 1 - i)) & 1)
        rows.append(r)
    return rows


def rows_to_cols(rows: Sequence[int]) -> tuple[int, ...]:
    return tuple(cols_to_rows(rows))


def cols_to_array(cols: Sequence[int], nrows: int | None = None) -> np.ndarray:
    nrows = len(cols) if nrows is None else nrows
    out = np.zeros((nrows, len(cols)), dtype=np.uint8)
    for k, c in enumerate(cols):
        out[:, k] = unpack(c, nrows)
    return out


def array_to_cols(m) -> tuple[int, ...]:
    m = np.asarray(m) % 2
    return tuple(pack(m[:, k]) for k in range(m.shape[1]))


def symplectic_gram_schmidt(
    vectors: Sequence[int], form: Callable[[int, int], int]
) -> tuple[list[int], list[int], list[int]]:
    """Split a spanning set into a symplectic basis plus a radical part.

    Deterministic: always pairs the first vector that has a partner with its
    first partner, then projects the remaining vectors off the new plane.
    Returns ``(es, fs, rest)`` where ``rest`` spans the radical of ``form``
    restricted to the span.
    """
    rem = [v for v in vectors if v]
    es: list[int] = []
    fs: list[int] = []
    while True:
        pair = next(
            ((i, j) for i, u in enumerate(rem) for j, w in enumerate(rem) if form(u, w)),
            None,
        )
        if pair is None:
            break
        i, j = pair
        e, f = rem[i], rem[j]
        es.append(e)
        fs.append(f)
        rem = [x ^ (e if form(x, f) else 0) ^ (f if form(x, e) else 0) for k, x in enumerate(rem) if k not in (i, j)]
        rem = [x for x in rem if x]
    pivots: dict[int, int] = {}
    rest = []
    for v in rem:
        if reduce_vector(pivots, v):
            w = reduce_vector(pivots, v)
            pivots[w.bit_length()] = w
            rest.append(v)
    return es, fs, rest
