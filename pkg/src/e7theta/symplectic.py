"""Symplectic spaces, quadratic forms and Aronhold bases over F2.

Coordinates on F2^{2g} are ordered ``(e_1, ..., e_g, f_1, ..., f_g)`` and the
standard form pairs ``e_i`` with ``f_i``.  Every quadratic refinement of that
form is ``q(x) = sum_i x_{e_i} x_{f_i} + sum_k d_k x_k``; the linear part ``d``
(the diagonal of the upper-triangular coefficient matrix) is all a form
stores.  ``q0`` denotes the form with ``d = 0``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from math import prod
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from . import f2, kernels
from .errors import (
    BudgetError,
    DecompositionError,
    DimensionError,
    NotAronholdError,
    NotSymplecticError,
)

MAX_FORM_GENUS = int(os.environ.get("E7THETA_MAX_FORM_GENUS", 4))
MAX_GROUP_GENUS = int(os.environ.get("E7THETA_MAX_GROUP_GENUS", 3))


@dataclass(frozen=True, order=True)
class SymplecticSpace:
    g: int

    def __post_init__(self):
        if self.g < 1:
            raise ValueError("genus must be positive")

    @property
    def dim(self) -> int:
        return 2 * self.g

    @cached_property
    def gram(self) -> np.ndarray:
        g = self.g
        m = np.zeros((2 * g, 2 * g), dtype=np.uint8)
        for i in range(g):
            m[i, g + i] = m[g + i, i] = 1
        return m

    def vector(self, x) -> int:
        return f2.as_vector(x, self.dim)

    def swap(self, v: int) -> int:
        """Omega applied to v: exchanges the e- and f-halves."""
        g = self.g
        mask = (1 << g) - 1
        return (v >> g) | ((v & mask) << g)

    def pairing(self, u, v) -> int:
        return f2.dot(self.vector(u), self.swap(self.vector(v)))

    def e(self, i: int) -> int:
        return f2.bit(i - 1, self.dim)

    def f(self, i: int) -> int:
        return f2.bit(self.g + i - 1, self.dim)

    def standard_basis(self) -> tuple[int, ...]:
        return tuple(self.e(i) for i in range(1, self.g + 1)) + tuple(self.f(i) for i in range(1, self.g + 1))

    def unpack(self, v: int) -> tuple[int, ...]:
        return f2.unpack(v, self.dim)

    def transvection(self, v) -> "Symplectomorphism":
        v = self.vector(v)
        cols = tuple(b ^ (v if self.pairing(b, v) else 0) for b in self.standard_basis())
        return Symplectomorphism(self, cols)


def pairing(space: SymplecticSpace, u, v) -> int:
    return space.pairing(u, v)


@dataclass(frozen=True)
class QuadraticForm:
    space: SymplecticSpace
    diag: int

    def __post_init__(self):
        if self.diag < 0 or self.diag >> self.space.dim:
            raise DimensionError("linear part does not fit the space")

    @classmethod
    def from_coeffs(cls, space: SymplecticSpace, coeffs) -> "QuadraticForm":
        c = np.asarray(coeffs, dtype=np.int64) % 2
        n = space.dim
        if c.shape != (n, n):
            raise DimensionError(f"expected a {n}x{n} coefficient matrix")
        if np.any(np.tril(c, -1)):
            raise ValueError("coefficient matrix must be upper triangular")
        off = np.triu(c, 1)
        if not np.array_equal((off + off.T) % 2, space.gram):
            raise ValueError("coefficients violate q(x+y)+q(x)+q(y) = <x,y>")
        return cls(space, f2.pack(np.diag(c)))

    @classmethod
    def from_hex(cls, space: SymplecticSpace, s: str) -> "QuadraticForm":
        n = space.dim
        bits = f2.unpack(int(s, 16), n * (n + 1) // 2)
        c = np.zeros((n, n), dtype=np.uint8)
        c[np.triu_indices(n)] = bits
        return cls.from_coeffs(space, c)

    @property
    def coeffs(self) -> np.ndarray:
        g = self.space.g
        c = np.zeros((2 * g, 2 * g), dtype=np.uint8)
        for i in range(g):
            c[i, g + i] = 1
        c[np.diag_indices(2 * g)] = self.space.unpack(self.diag)
        return c

    def to_hex(self) -> str:
        n = self.space.dim
        packed = f2.pack(self.coeffs[np.triu_indices(n)])
        return f2.to_hex(packed, n * (n + 1) // 2)

    def __call__(self, x) -> int:
        x = self.space.vector(x)
        g = self.space.g
        return (((x >> g) & x & ((1 << g) - 1)).bit_count() + (self.diag & x).bit_count()) & 1

    def translate(self, v) -> "QuadraticForm":
        """The form x -> q(x) + <v, x>."""
        return QuadraticForm(self.space, self.diag ^ self.space.swap(self.space.vector(v)))

    @property
    def arf(self) -> int:
        """sum_i q(e_i) q(f_i)."""
        g = self.space.g
        return ((self.diag >> g) & self.diag & ((1 << g) - 1)).bit_count() & 1

    def zero_count(self) -> int:
        return sum(1 for x in range(1 << self.space.dim) if not self(x))

    def value_table(self) -> np.ndarray:
        return np.array([self(x) for x in range(1 << self.space.dim)], dtype=np.uint8)

    def as_w(self) -> "WElement":
        return WElement(self.space, 1, self.space.swap(self.diag))

    def sort_key(self) -> int:
        return self.diag

    def __repr__(self) -> str:
        return f"QuadraticForm(g={self.space.g}, {self.to_hex()})"


def eval_form(q: QuadraticForm, x) -> int:
    return q(x)


def translate(q: QuadraticForm, v) -> QuadraticForm:
    return q.translate(v)


def arf(q: QuadraticForm) -> int:
    return q.arf


def even_zero_count(g: int) -> int:
    return 2 ** (g - 1) * (2**g + 1)


def arf_by_zero_count(q: QuadraticForm) -> int:
    return 0 if q.zero_count() == even_zero_count(q.space.g) else 1


def base_form(space: SymplecticSpace) -> QuadraticForm:
    return QuadraticForm(space, 0)


@dataclass(frozen=True)
class WElement:
    """Element of W = V u QV.  ``parity=1, data=w`` encodes the form q0 + w."""

    space: SymplecticSpace
    parity: int
    data: int

    @classmethod
    def vector(cls, space: SymplecticSpace, v) -> "WElement":
        return cls(space, 0, space.vector(v))

    def __add__(self, other: "WElement") -> "WElement":
        if other.space != self.space:
            raise DimensionError("W-elements live in different spaces")
        return WElement(self.space, self.parity ^ other.parity, self.data ^ other.data)

    @property
    def code(self) -> int:
        return (self.parity << self.space.dim) | self.data

    def to_form(self) -> QuadraticForm:
        if not self.parity:
            raise NotAronholdError("parity-0 element of W is a vector, not a form")
        return QuadraticForm(self.space, self.space.swap(self.data))


def w_sum(items: Sequence) -> WElement:
    ws = [x.as_w() if isinstance(x, QuadraticForm) else x for x in items]
    out = ws[0]
    for w in ws[1:]:
        out = out + w
    return out


# -- isotropic decompositions ------------------------------------------------


def form_from_isotropic(space: SymplecticSpace, x1: Sequence, x2: Sequence) -> QuadraticForm:
    """The form q(x + y) = <x, y> for x in span(x1), y in span(x2)."""
    g, n = space.g, space.dim
    a = [space.vector(v) for v in x1]
    b = [space.vector(v) for v in x2]
    if len(a) != g or len(b) != g:
        raise DecompositionError(f"each Lagrangian needs {g} basis vectors")
    for part in (a, b):
        if f2.rank(part) != g:
            raise DecompositionError("basis vectors are dependent")
        if any(space.pairing(u, v) for u in part for v in part):
            raise DecompositionError("subspace is not totally isotropic")
    if f2.rank(a + b) != n:
        raise DecompositionError("subspaces intersect nontrivially")
    inv = f2.mat_inverse(a + b)
    diag = 0
    for k, bk in enumerate(space.standard_basis()):
        c = f2.mat_apply(inv, bk)
        x = f2.mat_apply(a, c >> g)
        y = f2.mat_apply(b, c & ((1 << g) - 1))
        if space.pairing(x, y):
            diag |= f2.bit(k, n)
    return QuadraticForm(space, diag)


# -- enumeration ---------------------------------------------------------------


class FormCensus(NamedTuple):
    forms: tuple[QuadraticForm, ...]
    even: int
    odd: int


def _check_form_budget(g: int, cap: int | None = None):
    cap = MAX_FORM_GENUS if cap is None else cap
    if not 1 <= g <= cap:
        raise BudgetError(f"form enumeration is capped at g <= {cap} (asked for g={g})")


def enumerate_forms(g: int, cap: int | None = None) -> FormCensus:
    _check_form_budget(g, cap)
    space = SymplecticSpace(g)
    forms = tuple(QuadraticForm(space, d) for d in range(1 << space.dim))
    odd = sum(q.arf for q in forms)
    return FormCensus(forms, len(forms) - odd, odd)


def odd_forms(g: int) -> tuple[QuadraticForm, ...]:
    return tuple(q for q in enumerate_forms(g).forms if q.arf)


def even_forms(g: int) -> tuple[QuadraticForm, ...]:
    return tuple(q for q in enumerate_forms(g).forms if not q.arf)


# -- the symplectic group ----------------------------------------------------------


@dataclass(frozen=True)
class Symplectomorphism:
    space: SymplecticSpace
    cols: tuple[int, ...]

    def __post_init__(self):
        basis = self.space.standard_basis()
        if len(self.cols) != len(basis):
            raise DimensionError("wrong number of columns")
        p = self.space.pairing
        for i, u in enumerate(basis):
            for j in range(i + 1, len(basis)):
                if p(self.cols[i], self.cols[j]) != p(u, basis[j]):
                    raise NotSymplecticError("matrix does not preserve the symplectic form")

    @classmethod
    def from_matrix(cls, space: SymplecticSpace, m) -> "Symplectomorphism":
        return cls(space, f2.array_to_cols(m))

    @classmethod
    def identity(cls, space: SymplecticSpace) -> "Symplectomorphism":
        return cls(space, space.standard_basis())

    @property
    def matrix(self) -> np.ndarray:
        return f2.cols_to_array(self.cols)

    def __call__(self, x) -> int:
        return f2.mat_apply(self.cols, self.space.vector(x))

    def __matmul__(self, other: "Symplectomorphism") -> "Symplectomorphism":
        return Symplectomorphism(self.space, f2.mat_mul(self.cols, other.cols))

    def inverse(self) -> "Symplectomorphism":
        # Omega M^T Omega
        rows = f2.cols_to_rows(self.cols)
        sw = self.space.swap
        g = self.space.g
        n = self.space.dim
        # column k of M^{-1} = Omega (row of M indexed by Omega(b_k))
        cols = []
        for k in range(n):
            src = k + g if k < g else k - g
            cols.append(sw(rows[src]))
        return Symplectomorphism(self.space, tuple(cols))

    def act_on_form(self, q: QuadraticForm) -> QuadraticForm:
        """(sigma . q)(x) = q(sigma^{-1} x)."""
        inv = self.inverse().cols
        n = self.space.dim
        d = 0
        for k in range(n):
            if q(inv[k]):
                d |= f2.bit(k, n)
        return QuadraticForm(self.space, d)

    def act_on_w(self, w: WElement) -> WElement:
        if w.parity:
            return self.act_on_form(w.to_form()).as_w()
        return WElement(self.space, 0, self(w.data))

    def is_identity(self) -> bool:
        return self.cols == self.space.standard_basis()


def sp_order(g: int) -> int:
    return 2 ** (g * g) * prod(4**i - 1 for i in range(1, g + 1))


def _check_group_budget(g: int, cap: int | None = None):
    cap = MAX_GROUP_GENUS if cap is None else cap
    if not 1 <= g <= cap:
        raise BudgetError(f"group enumeration is capped at g <= {cap} (asked for g={g})")


def symplectic_bases_array(g: int, cap: int | None = None) -> np.ndarray:
    """All symplectic bases (e_1..e_g, f_1..f_g) as rows of packed vectors."""
    _check_group_budget(g, cap)
    return kernels.symplectic_bases(g)


def sp_elements(g: int, cap: int | None = None) -> Iterator[Symplectomorphism]:
    space = SymplecticSpace(g)
    for row in symplectic_bases_array(g, cap):
        yield Symplectomorphism(space, tuple(int(c) for c in row))


def sp_order_via_group(g: int) -> int:
    """Order of the group generated by all transvections, by Schreier-Sims."""
    from sympy.combinatorics import Permutation, PermutationGroup

    space = SymplecticSpace(g)
    n = 1 << space.dim
    gens = []
    for v in range(1, n):
        t = space.transvection(v)
        gens.append(Permutation([t(x) for x in range(n)]))
    return int(PermutationGroup(gens).order())


def is_symplectic_basis(space: SymplecticSpace, vectors: Sequence) -> bool:
    g = space.g
    vs = [space.vector(v) for v in vectors]
    if len(vs) != 2 * g:
        return False
    es, fs = vs[:g], vs[g:]
    p = space.pairing
    for i in range(g):
        for j in range(g):
            if p(es[i], fs[j]) != (i == j):
                return False
            if p(es[i], es[j]) or p(fs[i], fs[j]):
                return False
    return True


# -- Aronhold bases ------------------------------------------------------------------


def aronhold_arf(g: int) -> int:
    """Common Arf invariant of the members of an Aronhold basis in genus g."""
    return 0 if g % 4 in (0, 1) else 1


@lru_cache(maxsize=None)
def odd_subsets(g: int) -> tuple[tuple[int, int], ...]:
    """(subset mask over the 2g+1 basis slots, required Arf of the W-sum)."""
    eps = aronhold_arf(g)
    out = []
    for m in range(1, 1 << (2 * g + 1)):
        s = m.bit_count()
        if s & 1:
            out.append((m, (eps + (s - 1) // 2) & 1))
    return tuple(out)


class AronholdCheck(NamedTuple):
    ok: bool
    reason: str

    def __bool__(self) -> bool:
        return self.ok


def _as_forms(candidate: Sequence) -> tuple[QuadraticForm, ...]:
    out = []
    for x in candidate:
        if isinstance(x, WElement):
            x = x.to_form()
        if not isinstance(x, QuadraticForm):
            raise NotAronholdError(f"{x!r} is not a quadratic form")
        out.append(x)
    return tuple(out)


def is_aronhold(candidate: Sequence) -> AronholdCheck:
    forms = _as_forms(candidate)
    if not forms:
        raise DimensionError("empty candidate")
    space = forms[0].space
    g = space.g
    if len(forms) != 2 * g + 1:
        raise DimensionError(f"an Aronhold basis in genus {g} has {2 * g + 1} members, got {len(forms)}")
    if any(q.space != space for q in forms):
        raise DimensionError("forms live on different spaces")
    if f2.rank(q.as_w().code for q in forms) != 2 * g + 1:
        return AronholdCheck(False, "not a basis of W")
    eps = aronhold_arf(g)
    bad = [i + 1 for i, q in enumerate(forms) if q.arf != eps]
    if bad:
        return AronholdCheck(False, f"members {bad} do not have Arf invariant {eps}")
    diags = [q.diag for q in forms]
    for mask, want in odd_subsets(g):
        d = 0
        for i, di in enumerate(diags):
            if (mask >> i) & 1:
                d ^= di
        if QuadraticForm(space, d).arf != want:
            members = [i + 1 for i in range(len(diags)) if (mask >> i) & 1]
            return AronholdCheck(False, f"sum over {members} has Arf {1 - want}, expected {want}")
    return AronholdCheck(True, "ok")


@dataclass(frozen=True)
class AronholdBasis:
    forms: tuple[QuadraticForm, ...]

    def __post_init__(self):
        check = is_aronhold(self.forms)
        if not check:
            raise NotAronholdError(check.reason)

    @property
    def space(self) -> SymplecticSpace:
        return self.forms[0].space

    def act(self, sigma: Symplectomorphism) -> "AronholdBasis":
        return AronholdBasis(tuple(sigma.act_on_form(q) for q in self.forms))

    def diags(self) -> tuple[int, ...]:
        return tuple(q.diag for q in self.forms)


def aronhold_to_symplectic(basis) -> tuple[int, ...]:
    """e_i = q_{2i-1} + q_{2i},  f_i = q_1 + ... + q_{2i-1} + q_{2g+1}."""
    if not isinstance(basis, AronholdBasis):
        basis = AronholdBasis(_as_forms(basis))
    space = basis.space
    g = space.g
    d = basis.diags()
    es, fs = [], []
    prefix = 0
    for i in range(1, g + 1):
        es.append(space.swap(d[2 * i - 2] ^ d[2 * i - 1]))
        prefix ^= d[2 * i - 2] if i == 1 else d[2 * i - 3] ^ d[2 * i - 2]
        fs.append(space.swap(prefix ^ d[2 * g]))
    return tuple(es + fs)


def _offsets(space: SymplecticSpace, es: Sequence[int], fs: Sequence[int]) -> list[int]:
    """Vectors c_k with q_k = q_1 + c_k forced by the conversion formulas."""
    g = space.g
    c = [0] * (2 * g + 1)
    c[1] = es[0]
    c[2 * g] = fs[0]
    for i in range(2, g + 1):
        c[2 * i - 2] = c[2 * i - 3] ^ fs[i - 1] ^ fs[i - 2]
        c[2 * i - 1] = c[2 * i - 2] ^ es[i - 1]
    return c


def aronhold_candidates(space: SymplecticSpace, vectors: Sequence) -> list[AronholdBasis]:
    """Every Aronhold basis mapping to the given symplectic basis (exhaustive over q_1)."""
    vs = [space.vector(v) for v in vectors]
    if not is_symplectic_basis(space, vs):
        raise NotSymplecticError("input is not a symplectic basis")
    g = space.g
    c = _offsets(space, vs[:g], vs[g:])
    found = []
    for d1 in range(1 << space.dim):
        forms = tuple(QuadraticForm(space, d1 ^ space.swap(ck)) for ck in c)
        if is_aronhold(forms):
            found.append(AronholdBasis(forms))
    return found


def symplectic_to_aronhold(space: SymplecticSpace, vectors: Sequence) -> AronholdBasis:
    found = aronhold_candidates(space, vectors)
    if len(found) != 1:
        raise AssertionError(f"expected a unique Aronhold lift, found {len(found)}")
    return found[0]


def standard_aronhold_basis(g: int) -> AronholdBasis:
    space = SymplecticSpace(g)
    return symplectic_to_aronhold(space, space.standard_basis())


def aronhold_bases_exhaustive(g: int) -> list[tuple[int, ...]]:
    """All ordered Aronhold bases as tuples of linear parts (brute force, g <= 2)."""
    if g > 2:
        raise BudgetError("exhaustive Aronhold search is for g <= 2")
    space = SymplecticSpace(g)
    eps = aronhold_arf(g)
    pool = [d for d in range(1 << space.dim) if QuadraticForm(space, d).arf == eps]
    out = []
    for tup in product(pool, repeat=2 * g + 1):
        if len(set(tup)) != len(tup):
            continue
        if is_aronhold([QuadraticForm(space, d) for d in tup]):
            out.append(tup)
    return out
