"""Hot loops: symplectic-basis enumeration, Aronhold lifting/counting and the
W(E7) closure.

Every public kernel dispatches to ``_<name>_nb`` (numba loops) or
``_<name>_np`` (vectorised numpy) depending on :func:`e7theta._accel.use_numba`.
Both paths return identical arrays.  Vectors are packed ints exactly as in
:mod:`e7theta.f2`; a quadratic form is represented by its linear part.
"""

from __future__ import annotations

from functools import lru_cache
from math import prod

import numpy as np

from ._accel import njit, use_numba

# -- lookup tables -------------------------------------------------------------


def _popcount_parity(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.int64)
    p = np.zeros_like(a)
    while np.any(a):
        p ^= a & 1
        a = a >> 1
    return p


@lru_cache(maxsize=None)
def swap_table(g: int) -> np.ndarray:
    v = np.arange(1 << (2 * g), dtype=np.int64)
    mask = (1 << g) - 1
    return (v >> g) | ((v & mask) << g)


@lru_cache(maxsize=None)
def pairing_table(g: int) -> np.ndarray:
    """pairing_table(g)[u, v] = <u, v> for the standard form."""
    v = np.arange(1 << (2 * g), dtype=np.int64)
    sw = swap_table(g)
    return _popcount_parity(v[:, None] & sw[None, :]).astype(np.uint8)


@lru_cache(maxsize=None)
def arf_table(g: int) -> np.ndarray:
    """Arf invariant of the form with linear part d, for every d."""
    d = np.arange(1 << (2 * g), dtype=np.int64)
    mask = (1 << g) - 1
    return _popcount_parity((d >> g) & d & mask).astype(np.uint8)


@lru_cache(maxsize=None)
def form_table(g: int) -> np.ndarray:
    """form_table(g)[d, x] = q_d(x)."""
    x = np.arange(1 << (2 * g), dtype=np.int64)
    mask = (1 << g) - 1
    q0 = _popcount_parity((x >> g) & x & mask)
    lin = _popcount_parity(x[:, None] & x[None, :])
    return ((lin + q0[None, :]) & 1).astype(np.uint8)


def _sp_order(g: int) -> int:
    return 2 ** (g * g) * prod(4**i - 1 for i in range(1, g + 1))


@lru_cache(maxsize=None)
def _subset_tables(g: int) -> tuple[np.ndarray, np.ndarray]:
    """Popcount and required Arf for every subset mask of the 2g+1 slots.

    ``want[m]`` is only meaningful for odd popcount; even masks carry 255.
    """
    eps = 0 if g % 4 in (0, 1) else 1
    k = 2 * g + 1
    masks = np.arange(1 << k, dtype=np.int64)
    size = np.array([int(m).bit_count() for m in masks], dtype=np.int64)
    want = np.where(size % 2 == 1, (eps + (size - 1) // 2) % 2, 255).astype(np.uint8)
    return size, want


# -- symplectic bases ------------------------------------------------------------


@njit(cache=True)
def _symplectic_bases_nb(g, total, ptab):
    n = 2 * g
    nv = 1 << n
    out = np.empty((total, n), dtype=np.int64)
    chosen = np.zeros(n, dtype=np.int64)
    last = np.zeros(n, dtype=np.int64)
    level = 0
    count = 0
    while level >= 0:
        v = last[level] + 1
        pair = level // 2
        is_f = level % 2
        found = -1
        while v < nv:
            ok = True
            for j in range(pair):
                if ptab[v, chosen[2 * j]] != 0 or ptab[v, chosen[2 * j + 1]] != 0:
                    ok = False
                    break
            if ok and is_f == 1 and ptab[v, chosen[2 * pair]] != 1:
                ok = False
            if ok:
                found = v
                break
            v += 1
        if found < 0:
            level -= 1
            continue
        chosen[level] = found
        last[level] = found
        if level == n - 1:
            for i in range(g):
                out[count, i] = chosen[2 * i]
                out[count, g + i] = chosen[2 * i + 1]
            count += 1
        else:
            level += 1
            last[level] = 0
    return out[:count]


def _symplectic_bases_np(g: int) -> np.ndarray:
    n = 2 * g
    ptab = pairing_table(g)
    cand = np.arange(1, 1 << n, dtype=np.int64)
    partial = np.zeros((1, 0), dtype=np.int64)  # columns in choice order e1, f1, e2, ...
    for level in range(n):
        pair, is_f = divmod(level, 2)
        ok = np.ones((partial.shape[0], cand.size), dtype=bool)
        for j in range(2 * pair):
            ok &= ptab[partial[:, j]][:, cand] == 0
        if is_f:
            ok &= ptab[partial[:, 2 * pair]][:, cand] == 1
        rows, cols = np.nonzero(ok)
        partial = np.concatenate([partial[rows], cand[cols][:, None]], axis=1)
    order = [2 * i for i in range(g)] + [2 * i + 1 for i in range(g)]
    return np.ascontiguousarray(partial[:, order])


def symplectic_bases(g: int) -> np.ndarray:
    if use_numba():
        return _symplectic_bases_nb(g, _sp_order(g), pairing_table(g))
    return _symplectic_bases_np(g)


# -- Aronhold lifts of symplectic bases ------------------------------------------


def _offsets_np(bases: np.ndarray, g: int) -> np.ndarray:
    """c_k with q_k = q_1 + c_k, for each basis row (columns e_1..e_g, f_1..f_g)."""
    es, fs = bases[:, :g], bases[:, g:]
    c = np.zeros((bases.shape[0], 2 * g + 1), dtype=np.int64)
    c[:, 1] = es[:, 0]
    c[:, 2 * g] = fs[:, 0]
    for i in range(2, g + 1):
        c[:, 2 * i - 2] = c[:, 2 * i - 3] ^ fs[:, i - 1] ^ fs[:, i - 2]
        c[:, 2 * i - 1] = c[:, 2 * i - 2] ^ es[:, i - 1]
    return c


@njit(cache=True)
def _aronhold_lift_nb(bases, g, sw, atab, size, want):
    n = 2 * g
    k = n + 1
    nm = 1 << k
    total = bases.shape[0]
    out = np.full((total, k), -1, dtype=np.int64)
    nfound = np.zeros(total, dtype=np.int64)
    eps = 0 if g % 4 in (0, 1) else 1
    c = np.zeros(k, dtype=np.int64)
    cs = np.zeros(nm, dtype=np.int64)
    for r in range(total):
        c[0] = 0
        c[1] = bases[r, 0]
        c[n] = bases[r, g]
        for i in range(2, g + 1):
            c[2 * i - 2] = c[2 * i - 3] ^ bases[r, g + i - 1] ^ bases[r, g + i - 2]
            c[2 * i - 1] = c[2 * i - 2] ^ bases[r, i - 1]
        cs[0] = 0
        for m in range(1, nm):
            low = m & (-m)
            idx = 0
            while (1 << idx) != low:
                idx += 1
            cs[m] = cs[m ^ low] ^ c[idx]
        for d1 in range(1 << n):
            ok = True
            for j in range(k):
                if atab[d1 ^ sw[c[j]]] != eps:
                    ok = False
                    break
            if not ok:
                continue
            for m in range(1, nm):
                if size[m] % 2 == 1 and atab[d1 ^ sw[cs[m]]] != want[m]:
                    ok = False
                    break
            if ok:
                if nfound[r] == 0:
                    for j in range(k):
                        out[r, j] = d1 ^ sw[c[j]]
                nfound[r] += 1
    return out, nfound


def _aronhold_lift_np(bases: np.ndarray, g: int, chunk: int = 65536) -> tuple[np.ndarray, np.ndarray]:
    n = 2 * g
    k = n + 1
    sw = swap_table(g)
    atab = arf_table(g)
    size, want = _subset_tables(g)
    odd = np.nonzero(size % 2 == 1)[0]
    eps = 0 if g % 4 in (0, 1) else 1
    total = bases.shape[0]
    out = np.full((total, k), -1, dtype=np.int64)
    nfound = np.zeros(total, dtype=np.int64)
    for start in range(0, total, chunk):
        b = bases[start : start + chunk]
        c = _offsets_np(b, g)
        cs = np.zeros((b.shape[0], 1 << k), dtype=np.int64)
        for m in range(1, 1 << k):
            low = m & -m
            cs[:, m] = cs[:, m ^ low] ^ c[:, low.bit_length() - 1]
        swc = sw[c]
        swcs = sw[cs[:, odd]]
        for d1 in range(1 << n):
            single = np.all(atab[d1 ^ swc] == eps, axis=1)
            rows = np.nonzero(single)[0]
            if rows.size == 0:
                continue
            full = np.all(atab[d1 ^ swcs[rows]] == want[odd][None, :], axis=1)
            hit = rows[full]
            first = hit[nfound[start + hit] == 0]
            out[start + first] = d1 ^ swc[first]
            nfound[start + hit] += 1
    return out, nfound


def aronhold_lift(bases: np.ndarray, g: int) -> tuple[np.ndarray, np.ndarray]:
    """Exhaustive Aronhold lift of each symplectic basis row.

    Returns ``(diags, nfound)``: the linear parts of the first lift found and
    the number of lifts (must be 1 everywhere).
    """
    bases = np.ascontiguousarray(bases, dtype=np.int64)
    if use_numba():
        size, want = _subset_tables(g)
        return _aronhold_lift_nb(bases, g, swap_table(g), arf_table(g), size, want)
    return _aronhold_lift_np(bases, g)


def symplectic_from_aronhold(diags: np.ndarray, g: int) -> np.ndarray:
    """Vectorised inverse conversion (plain XORs, no dispatch needed)."""
    sw = swap_table(g)
    d = np.asarray(diags, dtype=np.int64)
    out = np.zeros((d.shape[0], 2 * g), dtype=np.int64)
    prefix = np.zeros(d.shape[0], dtype=np.int64)
    for i in range(1, g + 1):
        out[:, i - 1] = sw[d[:, 2 * i - 2] ^ d[:, 2 * i - 1]]
        prefix ^= d[:, 0] if i == 1 else d[:, 2 * i - 3] ^ d[:, 2 * i - 2]
        out[:, g + i - 1] = sw[prefix ^ d[:, 2 * g]]
    return out


# -- counting Aronhold tuples directly ---------------------------------------------


@njit(cache=True)
def _count_aronhold_nb(g, atab, size, want):
    n = 2 * g
    k = n + 1
    nv = 1 << n
    eps = 0 if g % 4 in (0, 1) else 1
    xs = np.zeros(1 << k, dtype=np.int64)
    last = np.full(k, -1, dtype=np.int64)
    level = 0
    count = 0
    while level >= 0:
        v = last[level] + 1
        found = -1
        lo = 1 << level
        while v < nv:
            ok = atab[v] == eps
            if ok:
                for m in range(lo):
                    x = xs[m] ^ v
                    s = size[m]
                    if s % 2 == 1:
                        # independence in W: an odd sum of earlier members equals v
                        if x == 0:
                            ok = False
                            break
                    elif atab[x] != want[m | lo]:
                        ok = False
                        break
            if ok:
                found = v
                break
            v += 1
        if found < 0:
            level -= 1
            continue
        last[level] = found
        for m in range(lo):
            xs[m | lo] = xs[m] ^ found
        if level == k - 1:
            count += 1
        else:
            level += 1
            last[level] = -1
    return count


def _count_aronhold_np(g: int, chunk: int = 20000) -> int:
    n = 2 * g
    k = n + 1
    eps = 0 if g % 4 in (0, 1) else 1
    atab = arf_table(g)
    size, want = _subset_tables(g)
    pool = np.nonzero(atab == eps)[0].astype(np.int64)
    xs = np.zeros((1, 1), dtype=np.int64)  # xor table over chosen prefix
    for level in range(k):
        lo = 1 << level
        odd_m = np.nonzero(size[:lo] % 2 == 1)[0]
        even_m = np.nonzero(size[:lo] % 2 == 0)[0]
        pieces = []
        for start in range(0, xs.shape[0], chunk):
            blk = xs[start : start + chunk]
            x_even = blk[:, even_m][:, :, None] ^ pool[None, None, :]
            ok = np.all(atab[x_even] == want[even_m | lo][None, :, None], axis=1)
            if odd_m.size:
                ok &= np.all((blk[:, odd_m][:, :, None] ^ pool[None, None, :]) != 0, axis=1)
            rows, cols = np.nonzero(ok)
            new = blk[rows] ^ pool[cols][:, None]
            pieces.append(np.concatenate([blk[rows], new], axis=1))
        xs = np.concatenate(pieces, axis=0) if pieces else np.zeros((0, 2 * lo), dtype=np.int64)
    return int(xs.shape[0])


def count_aronhold_tuples(g: int) -> int:
    """Number of ordered Aronhold bases, by pruned search over the forms."""
    if use_numba():
        size, want = _subset_tables(g)
        return int(_count_aronhold_nb(g, arf_table(g), size, want))
    return _count_aronhold_np(g)


# -- W(E7) closure on the 56 exceptional classes ---------------------------------------

KEY_SLOTS = 7  # images of E_1..E_7 (class indices 0..6) determine an element


def perm_keys(perms: np.ndarray) -> np.ndarray:
    p = perms[..., :KEY_SLOTS].astype(np.int64)
    key = np.zeros(p.shape[:-1], dtype=np.int64)
    for i in range(KEY_SLOTS):
        key |= p[..., i] << (6 * i)
    return key


@njit(cache=True)
def _closure_nb(gens, budget):
    ng, npts = gens.shape
    cap = 1
    while cap < 2 * budget:
        cap <<= 1
    table = np.full(cap, -1, dtype=np.int64)
    out = np.empty((budget, npts), dtype=np.uint8)
    depth = np.empty(budget, dtype=np.int16)
    for x in range(npts):
        out[0, x] = x
    depth[0] = 0
    key = 0
    for i in range(7):
        key |= np.int64(i) << (6 * i)
    h = ((key ^ (key >> 17)) * 0x9E3779B1) & (cap - 1)
    table[h] = key
    size = 1
    head = 0
    overflow = False
    new = np.empty(npts, dtype=np.uint8)
    while head < size:
        for s in range(ng):
            for x in range(npts):
                new[x] = gens[s, out[head, x]]
            key = 0
            for i in range(7):
                key |= np.int64(new[i]) << (6 * i)
            h = ((key ^ (key >> 17)) * 0x9E3779B1) & (cap - 1)
            while table[h] != -1 and table[h] != key:
                h = (h + 1) & (cap - 1)
            if table[h] == key:
                continue
            if size >= budget:
                overflow = True
                break
            table[h] = key
            out[size, :] = new
            depth[size] = depth[head] + 1
            size += 1
        if overflow:
            break
        head += 1
    return out[:size], depth[:size], overflow


def _closure_np(gens: np.ndarray, budget: int):
    npts = gens.shape[1]
    frontier = np.arange(npts, dtype=np.uint8)[None, :]
    seen = perm_keys(frontier)
    levels, depths = [frontier], [np.zeros(1, dtype=np.int16)]
    size, d = 1, 0
    while frontier.shape[0]:
        d += 1
        cand = gens[:, frontier].reshape(-1, npts)
        keys = perm_keys(cand)
        keys, idx = np.unique(keys, return_index=True)
        fresh = ~np.isin(keys, seen, assume_unique=True)
        frontier = cand[idx[fresh]]
        if size + frontier.shape[0] > budget:
            return None, None, True
        size += frontier.shape[0]
        seen = np.union1d(seen, keys[fresh])
        levels.append(frontier)
        depths.append(np.full(frontier.shape[0], d, dtype=np.int16))
    return np.concatenate(levels), np.concatenate(depths), False


def weyl_closure(gens: np.ndarray, budget: int):
    """Breadth-first closure of permutation generators under left multiplication.

    Returns ``(perms, depth, overflow)``; rows are sorted by (depth, key) so
    both paths agree element for element.  ``depth`` is the word length.
    """
    gens = np.ascontiguousarray(gens, dtype=np.uint8)
    if use_numba():
        perms, depth, overflow = _closure_nb(gens, budget)
    else:
        perms, depth, overflow = _closure_np(gens, budget)
    if overflow:
        return None, None, True
    order = np.lexsort((perm_keys(perms), depth))
    return perms[order], depth[order], False
