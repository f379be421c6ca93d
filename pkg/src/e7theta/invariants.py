"""Square-free polynomials over F2 in degree-one classes alpha_1..alpha_n.

A monomial is a bitmask (bit i-1 stands for alpha_i).  Coefficients are F2,
and alpha_i^2 = 0, so any product with a repeated index vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DimensionError, ReportError

COEFFICIENT_MODE = "F2 coefficients, alpha_i^2 = 0"
DEGREE_CAP = 14


@dataclass(frozen=True)
class ExteriorPolynomial:
    n: int
    terms: frozenset

    def __post_init__(self):
        t = frozenset(int(m) for m in self.terms)
        if any(m < 0 or m >> self.n for m in t):
            raise DimensionError(f"monomial uses a generator beyond alpha_{self.n}")
        object.__setattr__(self, "terms", t)

    @classmethod
    def zero(cls, n: int) -> "ExteriorPolynomial":
        return cls(n, frozenset())

    @classmethod
    def one(cls, n: int) -> "ExteriorPolynomial":
        return cls(n, frozenset({0}))

    @classmethod
    def generator(cls, n: int, i: int) -> "ExteriorPolynomial":
        """alpha_i, 1-based."""
        if not 1 <= i <= n:
            raise DimensionError(f"alpha_{i} does not exist for n = {n}")
        return cls(n, frozenset({1 << (i - 1)}))

    @classmethod
    def linear(cls, row: Sequence[int]) -> "ExteriorPolynomial":
        """sum_j row[j] alpha_{j+1}."""
        return cls(len(row), frozenset(1 << j for j, c in enumerate(row) if int(c) & 1))

    @classmethod
    def from_indices(cls, n: int, monomials: Iterable[Sequence[int]]) -> "ExteriorPolynomial":
        terms: set[int] = set()
        for mono in monomials:
            mono = list(mono)
            if len(set(mono)) != len(mono):
                raise ValueError("repeated index inside a monomial")
            m = 0
            for i in mono:
                if not 1 <= i <= n:
                    raise DimensionError(f"alpha_{i} does not exist for n = {n}")
                m |= 1 << (i - 1)
            terms ^= {m}
        return cls(n, frozenset(terms))

    def _check(self, other: "ExteriorPolynomial"):
        if self.n != other.n:
            raise DimensionError(f"generator counts differ: {self.n} vs {other.n}")

    def __add__(self, other: "ExteriorPolynomial") -> "ExteriorPolynomial":
        self._check(other)
        return ExteriorPolynomial(self.n, self.terms ^ other.terms)

    def __mul__(self, other: "ExteriorPolynomial") -> "ExteriorPolynomial":
        return multiply(self, other)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((m.bit_count() for m in self.terms), default=-1)

    def homogeneous(self, d: int) -> "ExteriorPolynomial":
        return ExteriorPolynomial(self.n, frozenset(m for m in self.terms if m.bit_count() == d))

    def monomials(self) -> list[list[int]]:
        """Sorted index lists, ordered by degree then lexicographically."""
        out = [[i + 1 for i in range(self.n) if (m >> i) & 1] for m in self.terms]
        return sorted(out, key=lambda x: (len(x), x))

    def to_json(self) -> list[list[int]]:
        return self.monomials()

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = ["1" if not m else "*".join(f"a{i}" for i in m) for m in self.monomials()]
        return " + ".join(parts)


def multiply(p: ExteriorPolynomial, q: ExteriorPolynomial) -> ExteriorPolynomial:
    p._check(q)
    out: set[int] = set()
    for a in p.terms:
        for b in q.terms:
            if not a & b:
                out ^= {a | b}
    return ExteriorPolynomial(p.n, frozenset(out))


def product(polys: Sequence[ExteriorPolynomial], n: int) -> ExteriorPolynomial:
    out = ExteriorPolynomial.one(n)
    for p in polys:
        out = multiply(out, p)
    return out


def _as_matrix(c) -> np.ndarray:
    m = np.asarray(c, dtype=np.int64)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionError("an F2 matrix needs positive row and column counts")
    return (m % 2).astype(np.uint8)


def f2_matmul(c, d) -> np.ndarray:
    c, d = _as_matrix(c), _as_matrix(d)
    if c.shape[1] != d.shape[0]:
        raise DimensionError("inner dimensions differ")
    return ((c.astype(np.int64) @ d.astype(np.int64)) % 2).astype(np.uint8)


def pullback(c, p: ExteriorPolynomial) -> ExteriorPolynomial:
    """Ring map alpha_i -> sum_j c[i][j] alpha_j from m to n generators."""
    c = _as_matrix(c)
    m, n = c.shape
    if p.n != m:
        raise DimensionError(f"polynomial has {p.n} generators, matrix has {m} rows")
    images = [ExteriorPolynomial.linear(c[i]) for i in range(m)]
    out = ExteriorPolynomial.zero(n)
    for mono in p.terms:
        out = out + product([images[i] for i in range(m) if (mono >> i) & 1], n)
    return out


def _check_linear(forms: Sequence[ExteriorPolynomial]) -> int:
    if not forms:
        raise ValueError("need at least one form to fix the generator count")
    n = forms[0].n
    for f in forms:
        f._check(forms[0])
        if any(m.bit_count() > 1 for m in f.terms):
            raise ValueError("elementary symmetric functions need forms of degree at most 1")
    return n


def elementary_symmetric(d: int, forms: Sequence[ExteriorPolynomial], method: str = "recursive") -> ExteriorPolynomial:
    """sigma_d of the forms.  ``method`` is "recursive" or "subsets"."""
    n = _check_linear(forms)
    if not 0 <= d <= len(forms):
        raise ValueError(f"degree {d} outside 0..{len(forms)}")
    if method == "subsets":
        out = ExteriorPolynomial.zero(n)
        for sub in combinations(forms, d):
            out = out + product(sub, n)
        return out
    if method != "recursive":
        raise ValueError(f"unknown method {method!r}")
    e = [ExteriorPolynomial.one(n)] + [ExteriorPolynomial.zero(n)] * d
    for f in forms:
        for k in range(d, 0, -1):
            e[k] = e[k] + multiply(f, e[k - 1])
    return e[d]


def total_class(forms: Sequence[ExteriorPolynomial], cap: int = DEGREE_CAP) -> list[ExteriorPolynomial]:
    """Graded pieces 0..cap of prod (1 + l)."""
    n = _check_linear(forms)
    out = ExteriorPolynomial.one(n)
    one = ExteriorPolynomial.one(n)
    for f in forms:
        out = multiply(out, one + f)
    return [out.homogeneous(k) for k in range(cap + 1)]


def sw_total_of_perm_rep(report, cap: int = DEGREE_CAP) -> list[ExteriorPolynomial]:
    """Total class of the permutation representation described by an abelian report.

    Each orbit contributes prod over its nontrivial characters of (1 + l_chi).
    """
    if not report.verify():
        raise ReportError("report does not reconstruct its generators")
    k = report.n_generators
    rows = report.flattened_matrix
    if not rows:
        one = ExteriorPolynomial.one(k)
        return [one] + [ExteriorPolynomial.zero(k)] * cap
    return total_class([ExteriorPolynomial.linear(r) for r in rows], cap)


class BasisEntry(NamedTuple):
    name: str
    degree: int
    computable: bool


@dataclass(frozen=True)
class InvariantBasisTable:
    group: str
    entries: tuple
    notes: tuple = ()

    @property
    def degrees(self) -> list[int]:
        return [e.degree for e in self.entries]

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "generators": [{"name": e.name, "degree": e.degree, "computable": e.computable} for e in self.entries],
            "notes": list(self.notes),
        }


SP6_TABLE = InvariantBasisTable(
    "B Sp6(2)",
    (
        BasisEntry("1", 0, True),
        BasisEntry("w2", 2, True),
        BasisEntry("f3", 3, False),
        BasisEntry("w4", 4, True),
        BasisEntry("w6", 6, True),
    ),
    (
        "free module listed with five generators (degrees 0, 2, 3, 4, 6) although described as rank four; five entries stored",
        "f3 comes from the Witt ring ideal I^3 and is metadata only",
    ),
)

WE7_TABLE = InvariantBasisTable(
    "B W(E7)",
    (
        BasisEntry("1", 0, True),
        BasisEntry("w1", 1, True),
        BasisEntry("w2", 2, True),
        BasisEntry("w3", 3, True),
        BasisEntry("f3", 3, False),
        BasisEntry("w1*f3", 4, False),
        BasisEntry("w4", 4, True),
        BasisEntry("w5", 5, True),
        BasisEntry("w6", 6, True),
        BasisEntry("w7", 7, True),
    ),
    ("f3-type generators are metadata only",),
)


def sp6_pullback_certificate() -> dict:
    """Pullbacks of w_d, d = 1..7, of the 28-point class through the frame subgroup."""
    from . import weyl

    frame = weyl.find_orthogonal_frame()
    report = weyl.abelian_action_report(frame)
    pieces = sw_total_of_perm_rep(report, cap=7)
    return {
        "mode": COEFFICIENT_MODE,
        "frame": frame.to_json(),
        "identification": weyl.identification_table(),
        "report_type": report.conjugacy_type,
        "pullbacks": {str(d): pieces[d].to_json() for d in range(1, 8)},
        "degree_one_vanishes": pieces[1].is_zero(),
        "tables": [SP6_TABLE.to_json(), WE7_TABLE.to_json()],
    }
