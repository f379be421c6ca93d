"""Characters of the E7 root lattice over F_p and seven points on a nodal cubic.

A torus point is chi given by its values c_0..c_6 on the simple roots.  It is
turned into parameters t_1..t_7 in F_p^* (with chi(E_i - E_j) = t_i / t_j and
chi(H - E_i - E_j - E_k) = 1 / (t_i t_j t_k)), and t is placed on the cubic
y^2 z = x^2 (x + z) by

    P(t) = [4t(1 - t) : 4t(1 + t) : (1 - t)^3].

On this model three points are collinear iff their parameters multiply to 1,
and six lie on a conic iff their parameters multiply to 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple, Sequence

from . import lattice as lat
from .errors import DivisorError, LatticeError, RetryBudgetExceeded

N_POINTS = 7
DEFAULT_MAX_RETRIES = 10**6


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int, need_cube_roots: bool = True) -> None:
    if not is_prime(p) or p <= 3:
        raise ValueError(f"p must be a prime greater than 3, got {p}")
    if need_cube_roots and p % 3 != 2:
        raise ValueError(f"p must be 2 mod 3 so that cube roots are unique, got {p}")


@dataclass(frozen=True)
class PrimeFieldElement:
    p: int
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, PrimeFieldElement):
            if other.p != self.p:
                raise ValueError("elements of different fields")
            return other.value
        return int(other) % self.p

    def __mul__(self, other) -> "PrimeFieldElement":
        return PrimeFieldElement(self.p, self.value * self._coerce(other))

    def __truediv__(self, other) -> "PrimeFieldElement":
        return self * PrimeFieldElement(self.p, self._coerce(other)).inverse()

    def __add__(self, other) -> "PrimeFieldElement":
        return PrimeFieldElement(self.p, self.value + self._coerce(other))

    def __sub__(self, other) -> "PrimeFieldElement":
        return PrimeFieldElement(self.p, self.value - self._coerce(other))

    def __pow__(self, k: int) -> "PrimeFieldElement":
        return PrimeFieldElement(self.p, pow(self.value, k, self.p))

    def inverse(self) -> "PrimeFieldElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return PrimeFieldElement(self.p, pow(self.value, -1, self.p))

    def cube_root(self) -> "PrimeFieldElement":
        """Unique cube root when p = 2 mod 3 (cubing is then a bijection)."""
        if self.p % 3 != 2:
            raise ArithmeticError("cube roots are unique only for p = 2 mod 3")
        return PrimeFieldElement(self.p, pow(self.value, (2 * self.p - 1) // 3, self.p))

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True)
class TorusPoint:
    p: int
    values: tuple[int, ...]  # chi(alpha_0), ..., chi(alpha_6)

    def __post_init__(self):
        vals = tuple(int(v) % self.p for v in self.values)
        if len(vals) != N_POINTS:
            raise ValueError(f"a torus point has {N_POINTS} values, got {len(vals)}")
        if any(v == 0 for v in vals):
            raise ValueError("torus values must be units")
        object.__setattr__(self, "values", vals)

    def inverse(self) -> "TorusPoint":
        return TorusPoint(self.p, tuple(pow(v, -1, self.p) for v in self.values))

    def to_json(self) -> dict:
        return {"p": self.p, "values": list(self.values)}

    @classmethod
    def from_json(cls, doc: dict) -> "TorusPoint":
        return cls(int(doc["p"]), tuple(doc["values"]))


def _root_position(alpha) -> int:
    if isinstance(alpha, int):
        return alpha
    pos = lat.root_index(2).get(alpha.coords)
    if pos is None:
        raise LatticeError(f"{alpha} is not a root")
    return pos


def evaluate_on_root(chi: TorusPoint, alpha) -> int:
    """prod c_i^{n_i} where alpha = sum n_i alpha_i (alpha: root or index into roots(2))."""
    n = lat.root_decompositions(2)[_root_position(alpha)]
    out = 1
    for c, k in zip(chi.values, n.tolist()):
        out = out * pow(c, k, chi.p) % chi.p
    return out


class DivisorCheck(NamedTuple):
    in_divisor: bool
    witness: int | None  # index into roots(2)
    kernel: tuple[int, ...]  # every positive root index with chi = 1

    def witness_label(self):
        return None if self.witness is None else lat.root_labels(2)[self.witness]


def in_divisor(chi: TorusPoint) -> DivisorCheck:
    """Scan the 63 positive roots for one in the kernel of chi."""
    kern = tuple(i for i in range(len(lat.positive_roots(2))) if evaluate_on_root(chi, i) == 1)
    return DivisorCheck(bool(kern), kern[0] if kern else None, kern)


@dataclass
class SampleStats:
    attempts: int = 0
    rejections: int = 0
    by_type: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"attempts": self.attempts, "rejections": self.rejections, "rejections_by_type": dict(sorted(self.by_type.items()))}


def sample_torus_point(p: int, seed: int, max_retries: int = DEFAULT_MAX_RETRIES) -> tuple[TorusPoint, SampleStats]:
    """Rejection-sample chi off the root divisor; deterministic in (p, seed)."""
    check_prime(p, need_cube_roots=False)
    stats = SampleStats()
    if p - 1 < N_POINTS:
        # chi(E_i - E_j) != 1 forces seven distinct units t_i
        raise RetryBudgetExceeded(
            f"F_{p}^* has {p - 1} units; seven distinct parameters are impossible, every point lies on the divisor",
            stats.to_json(),
        )
    rng = random.Random(seed)
    while stats.attempts < max_retries:
        stats.attempts += 1
        chi = TorusPoint(p, tuple(rng.randrange(1, p) for _ in range(N_POINTS)))
        check = in_divisor(chi)
        if not check.in_divisor:
            return chi, stats
        stats.rejections += 1
        tag = check.witness_label().tag
        stats.by_type[tag] = stats.by_type.get(tag, 0) + 1
    raise RetryBudgetExceeded(f"no point off the divisor after {max_retries} attempts", stats.to_json())


def torus_point_from_parameters(p: int, t: Sequence[int]) -> TorusPoint:
    """The chi with chi(E_i - E_{i+1}) = t_i / t_{i+1} and chi(alpha_0) = 1/(t_1 t_2 t_3)."""
    t = [int(x) % p for x in t]
    vals = [pow(t[0] * t[1] * t[2], -1, p)] + [t[i] * pow(t[i + 1], -1, p) % p for i in range(N_POINTS - 1)]
    return TorusPoint(p, tuple(vals))


def parameters_from_torus(chi: TorusPoint, s1: int = 1) -> tuple[int, ...]:
    """s_1 = s1, s_{i+1} = s_i / c_i, then rescale by the cube root of 1/(c_0 s_1 s_2 s_3)."""
    p = chi.p
    check_prime(p)
    s = [s1 % p]
    if s[0] == 0:
        raise ValueError("the gauge s1 must be a unit")
    for c in chi.values[1:]:
        s.append(s[-1] * pow(c, -1, p) % p)
    h = PrimeFieldElement(p, chi.values[0] * s[0] * s[1] * s[2])
    u = h.inverse().cube_root()
    if (u**3 * h).value != 1:
        raise ArithmeticError("cube root normalization failed")
    return tuple(u.value * x % p for x in s)


def cubic_point(p: int, t: int) -> tuple[int, int, int]:
    """P(t) on y^2 z = x^2 (x + z), normalized so the first nonzero coordinate is 1."""
    t %= p
    if t == 0:
        raise ValueError("t = 0 is the node")
    x = 4 * t * (1 - t) % p
    y = 4 * t * (1 + t) % p
    z = pow(1 - t, 3, p)
    return normalize((x, y, z), p)


def normalize(pt: Sequence[int], p: int) -> tuple[int, int, int]:
    pt = [int(c) % p for c in pt]
    lead = next((c for c in pt if c), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    inv = pow(lead, -1, p)
    return tuple(c * inv % p for c in pt)


def on_cubic(pt: Sequence[int], p: int) -> bool:
    x, y, z = pt
    return (y * y * z - x * x * (x + z)) % p == 0


def is_node(pt: Sequence[int], p: int) -> bool:
    return normalize(pt, p) == (0, 0, 1)


@dataclass(frozen=True)
class PointConfiguration:
    p: int
    parameters: tuple[int, ...]
    points: tuple[tuple[int, int, int], ...]

    def to_json(self, certificate: dict | None = None) -> dict:
        doc = {"points": [list(pt) for pt in self.points], "parameters": list(self.parameters), "curve": "y^2 z = x^2 (x + z)"}
        if certificate is not None:
            doc["certificate"] = certificate
        return doc


def configuration_from_parameters(p: int, t: Sequence[int]) -> PointConfiguration:
    t = tuple(int(x) % p for x in t)
    return PointConfiguration(p, t, tuple(cubic_point(p, x) for x in t))


def points_from_torus(chi: TorusPoint, s1: int = 1, allow_divisor: bool = False) -> PointConfiguration:
    if not allow_divisor:
        check = in_divisor(chi)
        if check.in_divisor:
            raise DivisorError("chi lies on the root divisor", witness=lat.roots(2)[check.witness])
    return configuration_from_parameters(chi.p, parameters_from_torus(chi, s1))


def det_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    """Determinant over F_p by Gaussian elimination on Python ints."""
    a = [[int(x) % p for x in r] for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant needs a square matrix")
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c] % p
        inv = pow(a[c][c], -1, p)
        for i in range(c + 1, n):
            f = a[i][c] * inv % p
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[c])]
    return det % p


def veronese(pt: Sequence[int]) -> list[int]:
    x, y, z = pt
    return [x * x, y * y, z * z, x * y, x * z, y * z]


def collinear(pts: Sequence[Sequence[int]], p: int) -> bool:
    return det_mod_p(pts, p) == 0


def on_common_conic(pts: Sequence[Sequence[int]], p: int) -> bool:
    return det_mod_p([veronese(pt) for pt in pts], p) == 0


def general_position_check(config: PointConfiguration) -> dict:
    """Distinctness, 35 line determinants and 7 conic determinants.  Subsets are 1-based."""
    p = config.p
    pts = config.points
    if len(pts) != N_POINTS or any(len(pt) != 3 for pt in pts):
        raise ValueError("expected seven points with three coordinates each")
    for pt in pts:
        if not any(int(c) % p for c in pt):
            raise ValueError("the zero vector is not a projective point")
    norm = [normalize(pt, p) for pt in pts]
    idx = range(N_POINTS)
    pairs = [[i + 1, j + 1] for i, j in combinations(idx, 2) if norm[i] == norm[j]]
    lines = [[i + 1 for i in s] for s in combinations(idx, 3) if collinear([norm[i] for i in s], p)]
    conics = [[i + 1 for i in s] for s in combinations(idx, 6) if on_common_conic([norm[i] for i in s], p)]
    return {
        "passed": not (pairs or lines or conics),
        "coincident_pairs": pairs,
        "collinear_triples": lines,
        "conic_sextuples": conics,
        "determinants_checked": {"lines": 35, "conics": 7},
    }


def predicted_violations(kernel: Sequence[int]) -> dict:
    """Subsets that must fail, given the positive roots in the kernel of chi."""
    labels = lat.root_labels(2)
    pairs, lines, conics = set(), set(), set()
    full = set(range(1, N_POINTS + 1))
    for k in kernel:
        lab = labels[k]
        if lab.tag == "ZIJ":
            i, j = lab.indices
            pairs.add((i, j))
            lines |= {s for s in combinations(sorted(full), 3) if i in s and j in s}
            conics |= {s for s in combinations(sorted(full), 6) if i in s and j in s}
        elif lab.tag == "ZIJK":
            lines.add(tuple(lab.indices))
        elif lab.tag == "ZI":
            conics.add(tuple(sorted(full - {lab.indices[0]})))
    return {
        "coincident_pairs": [list(s) for s in sorted(pairs)],
        "collinear_triples": [list(s) for s in sorted(lines)],
        "conic_sextuples": [list(s) for s in sorted(conics)],
    }


def _violations(cert: dict) -> dict:
    return {k: cert[k] for k in ("coincident_pairs", "collinear_triples", "conic_sextuples")}


def conditioned_parameters(p: int, rng: random.Random, tag: str, indices: Sequence[int]) -> tuple[int, ...]:
    """Random units t with the root of the given type forced into the kernel."""
    t = [rng.randrange(1, p) for _ in range(N_POINTS)]
    ix = [i - 1 for i in indices]
    if tag == "ZIJ":
        t[ix[1]] = t[ix[0]]
    elif tag == "ZIJK":
        t[ix[2]] = pow(t[ix[0]] * t[ix[1]], -1, p)
    elif tag == "ZI":
        rest = [k for k in range(N_POINTS) if k != ix[0]]
        prod = 1
        for k in rest[:-1]:
            prod = prod * t[k] % p
        t[rest[-1]] = pow(prod, -1, p)
    else:
        raise ValueError(f"unknown root type {tag!r}")
    return tuple(t)


def random_root_choice(rng: random.Random) -> tuple[str, tuple[int, ...]]:
    pos = lat.root_labels(2)[: len(lat.positive_roots(2))]
    tag = rng.choice(["ZIJ", "ZIJK", "ZI"])
    lab = rng.choice([l for l in pos if l.tag == tag])
    return tag, lab.indices


def torus_equivalence_experiment(p: int, trials: int, seed: int) -> dict:
    """Check in_divisor(chi) == (configuration fails general position) on random chi.

    Each trial draws one unconstrained chi and one chi forced onto the divisor
    along a random root; for the latter the failing subsets must match the
    prediction from the kernel roots exactly.
    """
    check_prime(p)
    rng = random.Random(seed)
    out = {
        "p": p,
        "trials": trials,
        "seed": seed,
        "unconstrained": {"agree": 0, "in_divisor": 0, "off_divisor": 0},
        "conditioned": {"agree": 0, "exact_prediction": 0, "witness_type_matches": 0, "by_type": {}},
        "failures": [],
    }
    for trial in range(trials):
        chi = TorusPoint(p, tuple(rng.randrange(1, p) for _ in range(N_POINTS)))
        check = in_divisor(chi)
        cert = general_position_check(points_from_torus(chi, allow_divisor=True))
        u = out["unconstrained"]
        u["in_divisor" if check.in_divisor else "off_divisor"] += 1
        if check.in_divisor == (not cert["passed"]):
            u["agree"] += 1
        else:
            out["failures"].append({"trial": trial, "kind": "unconstrained", "chi": chi.to_json()})

        tag, ix = random_root_choice(rng)
        t = conditioned_parameters(p, rng, tag, ix)
        chi = torus_point_from_parameters(p, t)
        check = in_divisor(chi)
        cert = general_position_check(points_from_torus(chi, allow_divisor=True))
        c = out["conditioned"]
        c["by_type"][tag] = c["by_type"].get(tag, 0) + 1
        forced = lat.root_index(2)[_root_vector(tag, ix).coords]
        if check.in_divisor and not cert["passed"]:
            c["agree"] += 1
        else:
            out["failures"].append({"trial": trial, "kind": "conditioned", "chi": chi.to_json()})
        if _violations(cert) == predicted_violations(check.kernel):
            c["exact_prediction"] += 1
        own = predicted_violations((forced,))
        if all(set(map(tuple, own[k])) <= set(map(tuple, cert[k])) for k in own):
            c["witness_type_matches"] += 1
    out["conditioned"]["by_type"] = dict(sorted(out["conditioned"]["by_type"].items()))
    out["all_agree"] = not out["failures"] and out["conditioned"]["exact_prediction"] == trials
    return out


def _root_vector(tag: str, indices: Sequence[int]) -> lat.LatticeVector:
    for r, lab in zip(lat.roots(2), lat.root_labels(2)):
        if lab.tag == tag and tuple(lab.indices) == tuple(indices) and lab.sign == 1:
            return r
    raise ValueError(f"no root {tag}{tuple(indices)}")


def act_on_torus_point(chi: TorusPoint, w) -> TorusPoint:
    """(w . chi)(x) = chi(w x) for a Weyl element w of degree 2."""
    idx = lat.root_index(2)
    vals = []
    for a in lat.simple_roots(2):
        vals.append(evaluate_on_root(chi, idx[w(a).coords]))
    return TorusPoint(chi.p, tuple(vals))


def relabel_points(chi: TorusPoint, perm: Sequence[int]) -> TorusPoint:
    """chi composed with E_i -> E_{perm[i]} (0-based perm of the seven points)."""
    L = lat.PicardLattice(2)
    idx = lat.root_index(2)
    vals = []
    for a in lat.simple_roots(2):
        c = list(a.coords)
        img = [c[0]] + [0] * N_POINTS
        for i in range(N_POINTS):
            img[1 + perm[i]] = c[1 + i]
        vals.append(evaluate_on_root(chi, idx[L.vector(img).coords]))
    return TorusPoint(chi.p, tuple(vals))


def smallest_viable_prime(limit: int = 200) -> int | None:
    """Least p = 2 mod 3 admitting a point off the divisor, by exhaustive search on t."""
    for p in range(5, limit):
        if not is_prime(p) or p % 3 != 2:
            continue
        units = range(1, p)
        # chi off the divisor <=> seven distinct t with no triple or sextuple product 1
        for t in combinations(units, N_POINTS):
            if _params_general(t, p):
                return p
    return None


def _params_general(t: Sequence[int], p: int) -> bool:
    for a, b, c in combinations(t, 3):
        if a * b * c % p == 1:
            return False
    total = 1
    for x in t:
        total = total * x % p
    for x in t:
        if total * pow(x, -1, p) % p == 1:
            return False
    return len(set(t)) == len(t)
