"""The Picard lattice H_{9-d} of a degree-d del Pezzo surface.

Coordinates are ordered (H, E_1, ..., E_{9-d}) and the pairing is
diag(1, -1, ..., -1).  K = -3H + sum E_i is the canonical class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import isqrt
from typing import NamedTuple, Sequence

import numpy as np

from . import f2
from .errors import DimensionError, LatticeError
from .symplectic import QuadraticForm, SymplecticSpace

ROOT_TAGS = ("ZIJ", "ZIJK", "ZI", "Z3H")
EXCEPTIONAL_TAGS = ("E", "HEE", "3H2E6E", "2H5E")


@dataclass(frozen=True, order=True)
class PicardLattice:
    degree: int

    def __post_init__(self):
        if not 1 <= self.degree <= 7:
            raise LatticeError(f"degree must lie in 1..7, got {self.degree}")

    @property
    def n(self) -> int:
        """Number of exceptional generators E_i."""
        return 9 - self.degree

    @property
    def rank(self) -> int:
        return 10 - self.degree

    @cached_property
    def gram(self) -> np.ndarray:
        return np.diag([1] + [-1] * self.n).astype(np.int64)

    def vector(self, coords: Sequence[int]) -> "LatticeVector":
        return LatticeVector(self, tuple(int(c) for c in coords))

    @property
    def H(self) -> "LatticeVector":
        return self.vector([1] + [0] * self.n)

    def E(self, i: int) -> "LatticeVector":
        c = [0] * self.rank
        c[i] = 1
        return self.vector(c)

    @property
    def K(self) -> "LatticeVector":
        return self.vector([-3] + [1] * self.n)

    def intersect(self, u: "LatticeVector", v: "LatticeVector") -> int:
        return intersect(u, v)

    def signature(self) -> tuple[int, int]:
        d = np.diag(self.gram)
        return int((d > 0).sum()), int((d < 0).sum())

    def is_unimodular(self) -> bool:
        return abs(round(np.linalg.det(self.gram))) == 1 and np.all(self.gram == np.round(self.gram))


@dataclass(frozen=True)
class LatticeVector:
    lattice: PicardLattice
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.lattice.rank:
            raise DimensionError(f"expected {self.lattice.rank} coordinates, got {len(self.coords)}")

    def _check(self, other: "LatticeVector"):
        if not isinstance(other, LatticeVector) or other.lattice != self.lattice:
            raise LatticeError("vectors belong to different lattices")

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(self.lattice, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(self.lattice, tuple(-a for a in self.coords))

    def __rmul__(self, k: int) -> "LatticeVector":
        return LatticeVector(self.lattice, tuple(k * a for a in self.coords))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    def square(self) -> int:
        return intersect(self, self)

    def __repr__(self) -> str:
        return f"LatticeVector(d={self.lattice.degree}, {list(self.coords)})"


def intersect(u: LatticeVector, v: LatticeVector) -> int:
    u._check(v)
    c = u.coords
    return c[0] * v.coords[0] - sum(a * b for a, b in zip(c[1:], v.coords[1:]))


# -- roots ---------------------------------------------------------------------------


def _root_templates(lat: PicardLattice) -> list[tuple[str, tuple[int, ...], LatticeVector]]:
    """Positive roots in the fixed template order (tag, indices, vector)."""
    n = lat.n
    H, E = lat.H, lat.E
    idx = range(1, n + 1)
    out = []
    for i, j in combinations(idx, 2):
        out.append(("ZIJ", (i, j), E(i) - E(j)))
    for i, j, k in combinations(idx, 3):
        out.append(("ZIJK", (i, j, k), H - E(i) - E(j) - E(k)))
    if n >= 6:
        for omit in combinations(idx, n - 6):
            v = 2 * H
            for k in idx:
                if k not in omit:
                    v = v - E(k)
            out.append(("ZI", omit, v))
    if n == 8:
        for i in idx:
            v = 3 * H - E(i)
            for k in idx:
                v = v - E(k)
            out.append(("Z3H", (i,), v))
    return out


class RootLabel(NamedTuple):
    tag: str
    indices: tuple[int, ...]
    sign: int


@lru_cache(maxsize=None)
def _root_data(degree: int):
    lat = PicardLattice(degree)
    pos = _root_templates(lat)
    vecs = [v for _, _, v in pos] + [-v for _, _, v in pos]
    labels = [RootLabel(t, ix, 1) for t, ix, _ in pos] + [RootLabel(t, ix, -1) for t, ix, _ in pos]
    return tuple(vecs), tuple(labels)


def roots(d: int) -> tuple[LatticeVector, ...]:
    """All roots: positive ones in template order, then their negatives."""
    return _root_data(d)[0]


def positive_roots(d: int) -> tuple[LatticeVector, ...]:
    r = roots(d)
    return r[: len(r) // 2]


def root_labels(d: int) -> tuple[RootLabel, ...]:
    return _root_data(d)[1]


@lru_cache(maxsize=None)
def roots_array(d: int) -> np.ndarray:
    return np.array([r.coords for r in roots(d)], dtype=np.int64)


@lru_cache(maxsize=None)
def root_index(d: int) -> dict[tuple[int, ...], int]:
    return {r.coords: i for i, r in enumerate(roots(d))}


def is_root(v: LatticeVector) -> bool:
    return v.square() == -2 and intersect(v, v.lattice.K) == 0


def blind_search(lat: PicardLattice, self_pairing: int, k_pairing: int) -> list[LatticeVector]:
    """Every v with v.v = self_pairing and v.K = k_pairing, by bounded brute force.

    Writing v = (a0; a_1..a_n): sum a_i = -3 a0 - k_pairing and
    sum a_i^2 = a0^2 - self_pairing.  Cauchy-Schwarz (sum)^2 <= n (sum of squares)
    bounds a0 since 9 > n, and prunes the coordinate-by-coordinate search.
    """
    n, s, t = lat.n, self_pairing, k_pairing
    found = []

    def extend(prefix, left, sq):
        k = n - len(prefix)
        if k == 0:
            if left == 0 and sq == 0:
                found.append(prefix)
            return
        b = isqrt(sq)
        for a in range(-b, b + 1):
            l2, s2 = left - a, sq - a * a
            if l2 * l2 <= (k - 1) * s2 or (k == 1 and l2 == 0 and s2 == 0):
                extend(prefix + (a,), l2, s2)

    # |total| >= 3|a0| - |t|, so past this point Cauchy-Schwarz always fails
    a0 = abs(t)
    while (3 * a0 - abs(t)) ** 2 <= n * (a0 * a0 + abs(s)):
        a0 += 1
    for x0 in range(-a0, a0 + 1):
        sq = x0 * x0 - s
        total = -3 * x0 - t
        if sq < 0 or total * total > n * sq:
            continue
        before = len(found)
        extend((), total, sq)
        found[before:] = [lat.vector((x0,) + rest) for rest in found[before:]]
    return sorted(found, key=lambda v: v.coords)


def roots_blind(d: int) -> list[LatticeVector]:
    return blind_search(PicardLattice(d), -2, 0)


def simple_roots(d: int) -> tuple[LatticeVector, ...]:
    """alpha_0 = H - E_1 - E_2 - E_3 (when n >= 3), then alpha_i = E_i - E_{i+1}."""
    lat = PicardLattice(d)
    out = []
    if lat.n >= 3:
        out.append(lat.H - lat.E(1) - lat.E(2) - lat.E(3))
    for i in range(1, lat.n):
        out.append(lat.E(i) - lat.E(i + 1))
    return tuple(out)


def _solve_exact(rows: Sequence[Sequence[int]], target: Sequence[int]) -> list[Fraction]:
    """Solve c . rows = target over Q (unique solution required)."""
    m, k = len(rows), len(target)
    # columns of the augmented system: unknowns c_0..c_{m-1}
    a = [[Fraction(rows[r][j]) for r in range(m)] + [Fraction(target[j])] for j in range(k)]
    piv_cols = []
    r = 0
    for col in range(m):
        sel = next((i for i in range(r, k) if a[i][col] != 0), None)
        if sel is None:
            continue
        a[r], a[sel] = a[sel], a[r]
        pv = a[r][col]
        a[r] = [x / pv for x in a[r]]
        for i in range(k):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(col)
        r += 1
    if len(piv_cols) != m:
        raise LatticeError("simple roots are linearly dependent")
    if any(a[i][m] != 0 for i in range(r, k)):
        raise LatticeError("vector is not in the span of the simple roots")
    return [a[i][m] for i in range(m)]


def decompose(v: LatticeVector) -> tuple[int, ...]:
    """Integer coefficients of v in the simple roots."""
    sr = simple_roots(v.lattice.degree)
    c = _solve_exact([s.coords for s in sr], v.coords)
    if any(x.denominator != 1 for x in c):
        raise LatticeError(f"{v} is not in the root lattice")
    return tuple(int(x) for x in c)


@lru_cache(maxsize=None)
def root_decompositions(d: int) -> np.ndarray:
    return np.array([decompose(r) for r in roots(d)], dtype=np.int64)


def k_orthogonal_basis(d: int) -> tuple[LatticeVector, ...]:
    """A Z-basis of the orthogonal complement of K: E_i - E_{i+1} and H - 3E_n."""
    lat = PicardLattice(d)
    out = [lat.E(i) - lat.E(i + 1) for i in range(1, lat.n)]
    out.append(lat.H - 3 * lat.E(lat.n))
    return tuple(out)


def reflect(beta: LatticeVector, x: LatticeVector) -> LatticeVector:
    """sigma_beta(x) = x + (x . beta) beta."""
    if not is_root(beta):
        raise LatticeError(f"{beta} is not a root")
    return x + intersect(x, beta) * beta


def reflection_matrix(beta: LatticeVector) -> np.ndarray:
    if not is_root(beta):
        raise LatticeError(f"{beta} is not a root")
    b = beta.array
    return np.eye(beta.lattice.rank, dtype=np.int64) + np.outer(b, beta.lattice.gram @ b)


# -- exceptional classes -------------------------------------------------------------


def _exceptional_templates(lat: PicardLattice) -> list[tuple[str, tuple[int, ...], LatticeVector]]:
    n = lat.n
    H, E = lat.H, lat.E
    idx = range(1, n + 1)
    out = [("E", (i,), E(i)) for i in idx]
    out += [("HEE", (i, j), H - E(i) - E(j)) for i, j in combinations(idx, 2)]
    if n == 7:
        for i in idx:
            v = 3 * H - E(i)
            for k in idx:
                v = v - E(k)
            out.append(("3H2E6E", (i,), v))
    if n >= 5:
        for omit in combinations(idx, n - 5):
            v = 2 * H
            for k in idx:
                if k not in omit:
                    v = v - E(k)
            out.append(("2H5E", omit, v))
    return out


@lru_cache(maxsize=None)
def _exceptional_data(d: int):
    if not 2 <= d <= 7:
        raise LatticeError(f"exceptional classes are supported for degrees 2..7, got {d}")
    t = _exceptional_templates(PicardLattice(d))
    return tuple(v for _, _, v in t), tuple((tag, ix) for tag, ix, _ in t)


def exceptional_classes(d: int = 2) -> tuple[LatticeVector, ...]:
    """Classes with E.E = -1 and E.K = -1.  For d = 2 class a pairs with a + 28."""
    return _exceptional_data(d)[0]


def exceptional_labels(d: int = 2) -> tuple[tuple[str, tuple[int, ...]], ...]:
    return _exceptional_data(d)[1]


@lru_cache(maxsize=None)
def exceptional_array(d: int = 2) -> np.ndarray:
    return np.array([e.coords for e in exceptional_classes(d)], dtype=np.int64)


@lru_cache(maxsize=None)
def exceptional_index(d: int = 2) -> dict[tuple[int, ...], int]:
    return {e.coords: i for i, e in enumerate(exceptional_classes(d))}


def is_exceptional(v: LatticeVector) -> bool:
    return v.square() == -1 and intersect(v, v.lattice.K) == -1


def exceptional_blind(d: int = 2) -> list[LatticeVector]:
    return blind_search(PicardLattice(d), -1, -1)


def geiser_pair(e: LatticeVector) -> LatticeVector:
    """-K - E, the other half of the bitangent through E."""
    if e.lattice.degree != 2:
        raise LatticeError("the Geiser pairing is defined for degree 2")
    if not is_exceptional(e):
        raise LatticeError(f"{e} is not an exceptional class")
    return -e.lattice.K - e


def bitangent_pairs() -> tuple[tuple[int, int], ...]:
    """The 28 Geiser pairs as index pairs into exceptional_classes(2)."""
    idx = exceptional_index(2)
    out = []
    for a, e in enumerate(exceptional_classes(2)):
        b = idx[geiser_pair(e).coords]
        if a < b:
            out.append((a, b))
    return tuple(out)


# -- the mod-2 quotient -----------------------------------------------------------------


@dataclass(frozen=True)
class Mod2Quotient:
    """K-orthogonal lattice mod 2 modulo its radical, identified with (F2^6, Omega).

    A lattice vector x maps to the standard coordinates (x.F_1, .., x.F_g,
    x.E'_1, .., x.E'_g) mod 2, where E'_i, F_i are integral lifts of the
    symplectic basis found by Gram-Schmidt on the simple roots.
    """

    degree: int
    space: SymplecticSpace
    e_lifts: tuple[LatticeVector, ...]
    f_lifts: tuple[LatticeVector, ...]
    radical: tuple[LatticeVector, ...]
    simple_gram_mod2: np.ndarray

    def reduce(self, x: LatticeVector) -> int:
        vals = [intersect(x, fl) & 1 for fl in self.f_lifts] + [intersect(x, el) & 1 for el in self.e_lifts]
        return f2.pack(vals)

    def lift(self, v: int) -> LatticeVector:
        lat = PicardLattice(self.degree)
        out = lat.vector([0] * lat.rank)
        for b, lv in zip(self.space.standard_basis(), self.e_lifts + self.f_lifts):
            if v & b:
                out = out + lv
        return out

    @cached_property
    def functionals(self) -> np.ndarray:
        """Rows r_k with reduce(x)_k = (r_k . x) mod 2 in plain coordinates."""
        lat = PicardLattice(self.degree)
        rows = [lat.gram @ fl.array for fl in self.f_lifts] + [lat.gram @ el.array for el in self.e_lifts]
        return np.array(rows, dtype=np.int64)

    def reduce_array(self, xs: np.ndarray) -> np.ndarray:
        bits = (np.asarray(xs, dtype=np.int64) @ self.functionals.T) & 1
        n = bits.shape[-1]
        w = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
        return bits @ w

    def theta_form(self, e: LatticeVector) -> QuadraticForm:
        """q_E(x) = x.x/2 + x.E mod 2 on the quotient; odd for exceptional E."""
        diag = 0
        n = self.space.dim
        for k, b in enumerate(self.space.standard_basis()):
            lv = self.lift(b)
            if (lv.square() // 2 + intersect(lv, e)) & 1:
                diag |= f2.bit(k, n)
        return QuadraticForm(self.space, diag)


@lru_cache(maxsize=None)
def orthogonal_complement_mod2(d: int = 2) -> Mod2Quotient:
    lat = PicardLattice(d)
    sr = simple_roots(d)
    m = len(sr)
    gram = np.array([[intersect(a, b) & 1 for b in sr] for a in sr], dtype=np.uint8)

    def lift(u: int) -> LatticeVector:
        out = lat.vector([0] * lat.rank)
        for k in range(m):
            if (u >> (m - 1 - k)) & 1:
                out = out + sr[k]
        return out

    def form(u: int, v: int) -> int:
        return intersect(lift(u), lift(v)) & 1

    es, fs, rest = f2.symplectic_gram_schmidt([f2.bit(k, m) for k in range(m)], form)
    space = SymplecticSpace(len(es))
    return Mod2Quotient(
        degree=d,
        space=space,
        e_lifts=tuple(lift(e) for e in es),
        f_lifts=tuple(lift(f) for f in fs),
        radical=tuple(lift(r) for r in rest),
        simple_gram_mod2=gram,
    )


def tag_records(vectors: Sequence[LatticeVector], labels) -> list[dict]:
    """JSON-ready records: {"tag", "indices", "coords"} (plus "sign" for roots)."""
    out = []
    for v, lab in zip(vectors, labels):
        rec = {"tag": lab[0], "indices": list(lab[1]), "coords": list(v.coords)}
        if isinstance(lab, RootLabel):
            rec["sign"] = lab.sign
        out.append(rec)
    return out
