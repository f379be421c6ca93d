"""The Weyl group W(E7) acting on the degree-2 Picard lattice.

Elements are integer matrices on (H, E_1, .., E_7) coordinates.  For bulk work
an element is stored as the permutation it induces on the 56 exceptional
classes (this is faithful), which is what the closure kernel enumerates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations
from typing import NamedTuple, Sequence

import numpy as np

from . import f2, kernels
from . import lattice as lat
from .errors import BudgetError, LatticeError, ReportError
from .symplectic import SymplecticSpace, Symplectomorphism, odd_forms, sp_order

W_E7_ORDER = 2903040
DEFAULT_GROUP_BUDGET = 4_000_000


# -- elements --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WeylElement:
    degree: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.int64)
        r = 10 - self.degree
        if m.shape != (r, r):
            raise LatticeError(f"expected a {r}x{r} matrix")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, d: int = 2) -> "WeylElement":
        return cls(d, np.eye(10 - d, dtype=np.int64))

    @property
    def lattice(self) -> lat.PicardLattice:
        return lat.PicardLattice(self.degree)

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElement) and self.degree == other.degree and np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash((self.degree, self.matrix.tobytes()))

    def __matmul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.degree, self.matrix @ other.matrix)

    def __call__(self, x: lat.LatticeVector) -> lat.LatticeVector:
        return self.lattice.vector((self.matrix @ x.array).tolist())

    def inverse(self) -> "WeylElement":
        g = self.lattice.gram
        return WeylElement(self.degree, g @ self.matrix.T @ g)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, np.eye(len(self.matrix), dtype=np.int64)))

    def preserves_pairing(self) -> bool:
        g = self.lattice.gram
        return bool(np.array_equal(self.matrix.T @ g @ self.matrix, g))

    def fixes_canonical(self) -> bool:
        k = self.lattice.K.array
        return bool(np.array_equal(self.matrix @ k, k))

    def det(self) -> int:
        return int_det(self.matrix)

    def to_list(self) -> list[list[int]]:
        return self.matrix.tolist()


def int_det(m: np.ndarray) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [[int(x) for x in row] for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if sw is None:
                return 0
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def reflection(beta: lat.LatticeVector) -> WeylElement:
    return WeylElement(beta.lattice.degree, lat.reflection_matrix(beta))


def weyl_generators(d: int) -> tuple[WeylElement, ...]:
    """Reflections at the simple roots, in simple-root order."""
    return tuple(reflection(a) for a in lat.simple_roots(d))


def geiser_involution(d: int = 2) -> WeylElement:
    """iota(x) = -x + (x.K) K, i.e. -1 on the K-orthogonal part (needs K.K = 2)."""
    L = lat.PicardLattice(d)
    if L.K.square() != 2:
        raise LatticeError("the Geiser involution needs K.K = 2 (degree 2)")
    k = L.K.array
    m = -np.eye(L.rank, dtype=np.int64) + np.outer(k, L.gram @ k)
    return WeylElement(d, m)


@dataclass(frozen=True)
class Permutation:
    """A permutation of {0..n-1} stored as its image array."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError("images do not form a permutation")
        object.__setattr__(self, "images", imgs)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __matmul__(self, other: "Permutation") -> "Permutation":
        """Composition: (p @ q)(i) = p(q(i))."""
        return Permutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            c = [s]
            seen[s] = True
            j = self.images[s]
            while j != s:
                c.append(j)
                seen[j] = True
                j = self.images[j]
            out.append(tuple(c))
        return out

    def cycle_type(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.cycles():
            out[len(c)] = out.get(len(c), 0) + 1
        return dict(sorted(out.items()))

    def to_list(self) -> list[int]:
        return list(self.images)


# -- cached degree-2 data --------------------------------------------------------------


class E7Data(NamedTuple):
    exc: np.ndarray  # (56, 8) exceptional classes
    exc_index: dict
    gens: tuple  # WeylElements
    gen_perms: np.ndarray  # (7, 56) uint8
    iota: WeylElement
    quotient: lat.Mod2Quotient
    red56: np.ndarray  # mod-2 image of each exceptional class (as a functional value)
    lifts: np.ndarray  # (6, 8) integer lifts of the standard basis of F2^6
    odd: tuple  # the 28 odd forms in lexicographic order
    identification: np.ndarray  # bitangent b -> index of its odd form


def exceptional_perm(w: WeylElement) -> np.ndarray:
    """Images of the 56 exceptional classes under w, as class indices."""
    exc = lat.exceptional_array(2)
    idx = lat.exceptional_index(2)
    imgs = exc @ w.matrix.T
    return np.array([idx[tuple(r)] for r in imgs.tolist()], dtype=np.uint8)


@lru_cache(maxsize=1)
def e7_data() -> E7Data:
    gens = weyl_generators(2)
    q = lat.orthogonal_complement_mod2(2)
    exc = lat.exceptional_array(2)
    odd = odd_forms(3)
    pos = {f.diag: i for i, f in enumerate(odd)}
    ident = np.array([pos[q.theta_form(e).diag] for e in lat.exceptional_classes(2)[:28]], dtype=np.int64)
    return E7Data(
        exc=exc,
        exc_index=lat.exceptional_index(2),
        gens=gens,
        gen_perms=np.stack([exceptional_perm(g) for g in gens]),
        iota=geiser_involution(2),
        quotient=q,
        red56=q.reduce_array(exc),
        lifts=np.array([q.lift(b).coords for b in q.space.standard_basis()], dtype=np.int64),
        odd=odd,
        identification=ident,
    )


def element_from_perm(perm: Sequence[int]) -> WeylElement:
    """Rebuild the matrix: w(E_i) is class perm[i-1], w(H) = w(H-E1-E2) + w(E1) + w(E2)."""
    exc = lat.exceptional_array(2)
    p = np.asarray(perm, dtype=np.int64)
    cols = [exc[p[7]] + exc[p[0]] + exc[p[1]]] + [exc[p[i]] for i in range(7)]
    return WeylElement(2, np.stack(cols, axis=1))


# -- mod-2 reduction ------------------------------------------------------------------


def mod2_symplectic(w: WeylElement) -> Symplectomorphism:
    """The induced map on the K-orthogonal lattice mod 2 modulo its radical."""
    if w.degree != 2:
        raise LatticeError("the mod-2 reduction is built for degree 2")
    q = e7_data().quotient
    cols = tuple(q.reduce(w(q.lift(b))) for b in q.space.standard_basis())
    return Symplectomorphism(q.space, cols)


def sp_code(sigma: Symplectomorphism) -> int:
    """Pack the columns of a 6x6 map into one 36-bit integer."""
    code = 0
    for c in sigma.cols:
        code = (code << sigma.space.dim) | c
    return code


def mod2_codes(perms: np.ndarray) -> np.ndarray:
    """sp_code of the mod-2 image of every element given by its 56-point permutation.

    Uses only linearity: reduce(w(L)) = sum_j L_j reduce(w(basis_j)) mod 2, with
    w(basis_j) written as a sum of exceptional classes.
    """
    data = e7_data()
    red = data.red56
    p = np.asarray(perms).astype(np.int64)
    colimg = [red[p[:, 7]] ^ red[p[:, 0]] ^ red[p[:, 1]]] + [red[p[:, i]] for i in range(7)]
    code = np.zeros(len(p), dtype=np.int64)
    for k in range(6):
        img = np.zeros(len(p), dtype=np.int64)
        for j in range(8):
            if data.lifts[k, j] & 1:
                img ^= colimg[j]
        code = (code << 6) | img
    return code


def transvection_check() -> bool:
    """Each root reflection reduces to x -> x + <x, v> v with v the root's image."""
    q = e7_data().quotient
    for r in lat.roots(2):
        v = q.reduce(r)
        if v == 0 or mod2_symplectic(reflection(r)).cols != q.space.transvection(v).cols:
            return False
    return True


# -- bitangents ------------------------------------------------------------------------


def bitangent_perm(perm56: np.ndarray) -> np.ndarray:
    """Permutation of the 28 Geiser pairs; pair b is {b, b + 28}."""
    return (np.asarray(perm56)[..., :28] % 28).astype(np.uint8)


def bitangent_action(w: WeylElement) -> Permutation:
    return Permutation(tuple(bitangent_perm(exceptional_perm(w)).tolist()))


def odd_form_action(sigma: Symplectomorphism) -> Permutation:
    """Permutation of the 28 odd forms (lexicographic order) under sigma."""
    odd = e7_data().odd
    pos = {f.diag: i for i, f in enumerate(odd)}
    return Permutation(tuple(pos[sigma.act_on_form(f).diag] for f in odd))


def bitangent_action_via_forms(w: WeylElement) -> Permutation:
    """Same action computed through mod2_symplectic and the pinned identification."""
    ident = e7_data().identification
    back = np.argsort(ident)
    fp = odd_form_action(mod2_symplectic(w)).images
    return Permutation(tuple(int(back[fp[ident[b]]]) for b in range(28)))


def identification_table() -> list[dict]:
    """Bitangent index -> its two exceptional classes and the odd form (hex)."""
    data = e7_data()
    out = []
    for b in range(28):
        out.append(
            {
                "bitangent": b,
                "classes": [data.exc[b].tolist(), data.exc[b + 28].tolist()],
                "form": data.odd[int(data.identification[b])].to_hex(),
            }
        )
    return out


# -- random elements -------------------------------------------------------------------


def random_elements(count: int, seed: int, length: int = 60, d: int = 2) -> list[WeylElement]:
    """Products of ``length`` random simple reflections."""
    rng = np.random.default_rng(seed)
    gens = [g.matrix for g in weyl_generators(d)]
    out = []
    for _ in range(count):
        m = np.eye(10 - d, dtype=np.int64)
        for k in rng.integers(0, len(gens), size=length):
            m = m @ gens[k]
        out.append(WeylElement(d, m))
    return out


# -- whole-group computations ----------------------------------------------------------


@dataclass(frozen=True)
class GroupStore:
    perms: np.ndarray  # (N, 56) uint8, sorted by (word length, key)
    depth: np.ndarray

    @property
    def order(self) -> int:
        return len(self.perms)

    def det(self) -> np.ndarray:
        """det = (-1)^(word length), since every generator is a reflection."""
        return np.where(self.depth % 2 == 0, 1, -1)


def enumerate_group(d: int = 2, budget: int = DEFAULT_GROUP_BUDGET) -> GroupStore:
    """Breadth-first closure of W(E7) on the 56 exceptional classes."""
    if d != 2:
        raise LatticeError("full enumeration is provided for degree 2 only")
    perms, depth, overflow = kernels.weyl_closure(e7_data().gen_perms, budget)
    if overflow:
        raise BudgetError(f"group closure exceeded the budget of {budget} elements")
    return GroupStore(perms, depth)


@lru_cache(maxsize=None)
def weyl_order_schreier_sims(d: int) -> int:
    """|W| from a base and strong generating set of the action on the roots."""
    from sympy.combinatorics import Permutation as SPerm, PermutationGroup

    idx = lat.root_index(d)
    arr = lat.roots_array(d)
    gens = []
    for g in weyl_generators(d):
        imgs = arr @ g.matrix.T
        gens.append(SPerm([idx[tuple(r)] for r in imgs.tolist()]))
    return int(PermutationGroup(gens).order())


def perm_group_order(perms: Sequence[Sequence[int]]) -> int:
    from sympy.combinatorics import Permutation as SPerm, PermutationGroup

    return int(PermutationGroup([SPerm(list(map(int, p))) for p in perms]).order())


def orbit(points: Sequence[int], gen_perms: np.ndarray) -> list[int]:
    seen = set(points)
    todo = list(points)
    while todo:
        x = todo.pop()
        for g in gen_perms:
            y = int(g[x])
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return sorted(seen)


def central_elements(store: GroupStore) -> np.ndarray:
    """Indices of elements commuting with every generator."""
    p = store.perms
    mask = np.ones(len(p), dtype=bool)
    for g in e7_data().gen_perms:
        mask &= np.all(p[:, g] == g[p], axis=1)
    return np.nonzero(mask)[0]


class SplitReport(NamedTuple):
    order: int
    image_order: int
    kernel: list  # kernel elements as 56-point permutations
    kernel_is_identity_and_iota: bool
    bitangent_kernel_size: int
    bitangent_kernel_is_identity_and_iota: bool
    center_size: int
    iota_central: bool
    splitting_injective: bool
    iota_det: int


def split_check(store: GroupStore) -> SplitReport:
    """Kernel, image and splitting W -> Sp6(2) x {+-1}, w -> (mod-2 image, det)."""
    data = e7_data()
    iota = exceptional_perm(data.iota)
    ident = np.arange(56, dtype=np.uint8)
    codes = mod2_codes(store.perms)
    id_code = mod2_codes(ident[None, :])[0]
    ker = np.nonzero(codes == id_code)[0]
    ker_perms = store.perms[ker]
    expected = {ident.tobytes(), iota.tobytes()}
    bit = bitangent_perm(store.perms)
    bker = np.nonzero(np.all(bit == np.arange(28, dtype=np.uint8), axis=1))[0]
    central = central_elements(store)
    pairs = codes * 2 + (store.det() < 0)
    return SplitReport(
        order=store.order,
        image_order=int(len(np.unique(codes))),
        kernel=[k.tolist() for k in ker_perms],
        kernel_is_identity_and_iota={k.tobytes() for k in ker_perms} == expected and len(ker) == 2,
        bitangent_kernel_size=int(len(bker)),
        bitangent_kernel_is_identity_and_iota={b.tobytes() for b in store.perms[bker]} == expected and len(bker) == 2,
        center_size=int(len(central)),
        iota_central={c.tobytes() for c in store.perms[central]} == expected,
        splitting_injective=int(len(np.unique(pairs))) == store.order,
        iota_det=data.iota.det(),
    )


def split_check_orbit_stabilizer() -> dict:
    """Orders via Schreier-Sims: whole group, its image on bitangents and mod 2."""
    data = e7_data()
    gens56 = data.gen_perms
    order = perm_group_order(gens56)
    bit_order = perm_group_order(bitangent_perm(gens56))
    # the mod-2 image acts faithfully on the 63 nonzero vectors
    mod2_perms = []
    for g in data.gens:
        s = mod2_symplectic(g)
        mod2_perms.append([s(v) - 1 for v in range(1, 64)])
    mod2_order = perm_group_order(mod2_perms)
    iota = data.iota
    return {
        "order": order,
        "bitangent_image_order": bit_order,
        "mod2_image_order": mod2_order,
        "kernel_size": order // mod2_order,
        "bitangent_kernel_size": order // bit_order,
        "iota_in_kernel": mod2_symplectic(iota).is_identity() and bitangent_action(iota).is_identity(),
        "iota_central": all((iota @ g) == (g @ iota) for g in data.gens),
        "iota_det": iota.det(),
    }


# -- orthogonal frames and abelian reports --------------------------------------------


@dataclass(frozen=True)
class OrthogonalFrame:
    indices: tuple[int, ...]  # into lattice.roots(2)
    roots: tuple[lat.LatticeVector, ...]
    reflections: tuple[WeylElement, ...]

    @cached_property
    def mod2_images(self) -> tuple[int, ...]:
        q = e7_data().quotient
        return tuple(q.reduce(r) for r in self.roots)

    def product(self) -> WeylElement:
        out = WeylElement.identity(2)
        for r in self.reflections:
            out = out @ r
        return out

    def to_json(self) -> dict:
        labels = lat.root_labels(2)
        return {
            "root_indices": list(self.indices),
            "roots": [list(r.coords) for r in self.roots],
            "tags": [{"tag": labels[i].tag, "indices": list(labels[i].indices)} for i in self.indices],
            "mod2_images": list(self.mod2_images),
        }


def find_orthogonal_frame() -> OrthogonalFrame:
    """Lexicographically least 7 pairwise orthogonal positive roots with product iota."""
    pos = lat.positive_roots(2)
    arr = np.array([r.coords for r in pos], dtype=np.int64)
    gram = arr @ lat.PicardLattice(2).gram @ arr.T
    iota = geiser_involution(2)
    refl = [lat.reflection_matrix(r) for r in pos]
    n = len(pos)

    def search(chosen):
        if len(chosen) == 7:
            m = np.eye(8, dtype=np.int64)
            for i in chosen:
                m = m @ refl[i]
            return chosen if np.array_equal(m, iota.matrix) else None
        start = chosen[-1] + 1 if chosen else 0
        for j in range(start, n):
            if all(gram[i, j] == 0 for i in chosen):
                hit = search(chosen + [j])
                if hit:
                    return hit
        return None

    found = search([])
    if found is None:
        raise RuntimeError("no orthogonal frame found")
    return OrthogonalFrame(
        tuple(found), tuple(pos[i] for i in found), tuple(reflection(pos[i]) for i in found)
    )


def frame_is_isotropic_plane(frame: OrthogonalFrame) -> bool:
    """Mod-2 images are the 7 nonzero vectors of a totally isotropic 3-space."""
    sp = e7_data().quotient.space
    v = frame.mod2_images
    if f2.rank(v) != 3 or len(set(v)) != 7 or 0 in v:
        return False
    if any(sp.pairing(a, b) for a in v for b in v):
        return False
    span = {0}
    for x in v:
        span |= {s ^ x for s in span}
    return span - {0} == set(v)


@dataclass(frozen=True)
class OrbitRecord:
    members: tuple[int, ...]
    quotient_rank: int
    characters: tuple[tuple[int, ...], ...]  # F2 rows over the generators

    def to_json(self) -> dict:
        return {
            "members": list(self.members),
            "quotient_rank": self.quotient_rank,
            "characters": [list(c) for c in self.characters],
        }


def _char_value(chi: Sequence[int], a: int, k: int) -> int:
    """chi . a where a is a bitmask over k generators (bit j = generator j)."""
    return sum(chi[j] for j in range(k) if (a >> j) & 1) & 1


@dataclass(frozen=True)
class AbelianActionReport:
    generators: tuple[Permutation, ...]
    orbits: tuple[OrbitRecord, ...]

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    @property
    def n_points(self) -> int:
        return self.generators[0].n if self.generators else sum(len(o.members) for o in self.orbits)

    @property
    def flattened_matrix(self) -> list[list[int]]:
        return [list(c) for o in self.orbits for c in o.characters]

    @property
    def transposition_matrix(self) -> list[list[int]] | None:
        """Rows of the size-2 orbits, only when no orbit is larger than 2."""
        if any(len(o.members) > 2 for o in self.orbits):
            return None
        return [list(o.characters[0]) for o in self.orbits if len(o.members) == 2]

    @property
    def orbit_sizes(self) -> list[int]:
        return [len(o.members) for o in self.orbits]

    @property
    def conjugacy_type(self) -> str:
        sizes = {s for s in self.orbit_sizes if s > 1}
        if sizes <= {2}:
            return "transposition"
        if sizes == {4}:
            return "regular-klein"
        return "mixed:" + ",".join(str(s) for s in sorted(sizes))

    @property
    def image_rank(self) -> int:
        """Rank of the elementary abelian group generated inside the symmetric group."""
        return f2.rank(f2.pack(r) for r in _transpose(self.flattened_matrix, self.n_generators))

    def reconstruct(self) -> tuple[Permutation, ...]:
        """Generator permutations rebuilt from the orbit/character data alone."""
        n = self.n_points
        out = []
        for j in range(self.n_generators):
            img = list(range(n))
            for o in self.orbits:
                r = o.quotient_rank
                shift = sum(o.characters[(1 << i) - 1][j] << i for i in range(r))
                for t, m in enumerate(o.members):
                    img[m] = o.members[t ^ shift]
            out.append(Permutation(tuple(img)))
        return tuple(out)

    def verify(self) -> bool:
        if self.reconstruct() != self.generators:
            return False
        for o in self.orbits:
            if len(set(o.characters)) != len(o.characters) or any(not any(c) for c in o.characters):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "generators": [g.to_list() for g in self.generators],
            "orbits": [o.to_json() for o in self.orbits],
            "flattened_matrix": self.flattened_matrix,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "AbelianActionReport":
        try:
            gens = tuple(Permutation(tuple(g)) for g in doc["generators"])
            orbits = tuple(
                OrbitRecord(tuple(o["members"]), int(o["quotient_rank"]), tuple(tuple(c) for c in o["characters"]))
                for o in doc["orbits"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ReportError(f"malformed report: {exc}") from exc
        rep = cls(gens, orbits)
        for o in orbits:
            if len(o.characters) != (1 << o.quotient_rank) - 1 or len(o.members) != 1 << o.quotient_rank:
                raise ReportError("orbit size and character count disagree with the quotient rank")
            if any(len(c) != len(gens) for c in o.characters):
                raise ReportError("character rows must have one entry per generator")
        return rep


def _transpose(rows: list[list[int]], ncols: int) -> list[list[int]]:
    return [[r[j] for r in rows] for j in range(ncols)]


def build_abelian_report(gens: Sequence[Permutation]) -> AbelianActionReport:
    """Orbit partition and character data of commuting involutions."""
    gens = tuple(gens)
    k = len(gens)
    if k == 0:
        raise ReportError("need at least one generator")
    n = gens[0].n
    for a in gens:
        if not (a @ a).is_identity():
            raise ReportError("generators must be involutions")
        for b in gens:
            if a @ b != b @ a:
                raise ReportError("generators do not commute")

    def act(mask: int, x: int) -> int:
        for j in range(k):
            if (mask >> j) & 1:
                x = gens[j](x)
        return x

    seen = set()
    orbits = []
    for base in range(n):
        if base in seen:
            continue
        images = {a: act(a, base) for a in range(1 << k)}
        members = sorted(set(images.values()))
        seen.update(members)
        stab = [a for a, x in images.items() if x == base]
        # characters: nonzero chi in F2^k vanishing on the stabilizer
        chis = [
            tuple((c >> j) & 1 for j in range(k))
            for c in range(1, 1 << k)
            if all(_char_value(tuple((c >> j) & 1 for j in range(k)), s, k) == 0 for s in stab)
        ]
        r = (len(chis) + 1).bit_length() - 1
        if len(members) != 1 << r:
            raise ReportError("orbit size is not 2^(quotient rank)")
        basis: list[tuple[int, ...]] = []
        piv: dict[int, int] = {}
        for c in chis:
            v = f2.pack(c)
            if f2.reduce_vector(piv, v):
                w = f2.reduce_vector(piv, v)
                piv[w.bit_length()] = w
                basis.append(c)
            if len(basis) == r:
                break
        ordered = []
        for t in range(1, 1 << r):
            row = [0] * k
            for i in range(r):
                if (t >> i) & 1:
                    row = [x ^ y for x, y in zip(row, basis[i])]
            ordered.append(tuple(row))
        label = {}
        for a, x in images.items():
            label[x] = sum(_char_value(basis[i], a, k) << i for i in range(r))
        by_label = [None] * (1 << r)
        for x, t in label.items():
            by_label[t] = x
        orbits.append(OrbitRecord(tuple(by_label), r, tuple(ordered)))
    rep = AbelianActionReport(gens, tuple(orbits))
    if not rep.verify():
        raise ReportError("report does not reconstruct its generators")
    return rep


def abelian_action_report(frame: OrthogonalFrame | None = None) -> AbelianActionReport:
    frame = find_orthogonal_frame() if frame is None else frame
    return build_abelian_report([bitangent_action(r) for r in frame.reflections])


# -- hyperelliptic model ---------------------------------------------------------------


@dataclass(frozen=True)
class HyperellipticMap:
    """S_{2g+2} acting on even subsets of {0..2g+1} modulo complement.

    The pairing is |S n T| mod 2.  Subsets are bitmasks with point i at bit i.
    """

    g: int
    e_sets: tuple[int, ...]
    f_sets: tuple[int, ...]

    @property
    def points(self) -> int:
        return 2 * self.g + 2

    @property
    def space(self) -> SymplecticSpace:
        return SymplecticSpace(self.g)

    def reduce(self, s: int) -> int:
        if s.bit_count() % 2:
            raise ValueError("only even subsets lie in the model")
        vals = [(s & f).bit_count() & 1 for f in self.f_sets] + [(s & e).bit_count() & 1 for e in self.e_sets]
        return f2.pack(vals)

    def lift(self, v: int) -> int:
        out = 0
        for b, s in zip(self.space.standard_basis(), self.e_sets + self.f_sets):
            if v & b:
                out ^= s
        return out

    def image(self, perm: Sequence[int]) -> Symplectomorphism:
        cols = tuple(self.reduce(_permute_set(perm, self.lift(b))) for b in self.space.standard_basis())
        return Symplectomorphism(self.space, cols)

    def image_code(self, perm: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.reduce(_permute_set(perm, self.lift(b))) for b in self.space.standard_basis())


def _permute_set(perm: Sequence[int], s: int) -> int:
    out = 0
    for i, j in enumerate(perm):
        if (s >> i) & 1:
            out |= 1 << j
    return out


@lru_cache(maxsize=None)
def hyperelliptic_symplectic(g: int) -> HyperellipticMap:
    if not 1 <= g <= 3:
        raise ValueError(f"g must lie in 1..3, got {g}")
    n = 2 * g + 2
    start = [(1 << i) | (1 << (i + 1)) for i in range(n - 1)]
    es, fs, rest = f2.symplectic_gram_schmidt(start, lambda s, t: (s & t).bit_count() & 1)
    if len(es) != g or rest != [] and any(r != (1 << n) - 1 for r in rest):
        raise RuntimeError("unexpected radical in the hyperelliptic model")
    return HyperellipticMap(g, tuple(es), tuple(fs))


def _sym_generators(n: int) -> list[tuple[int, ...]]:
    """A transposition and an n-cycle."""
    t = list(range(n))
    t[0], t[1] = 1, 0
    c = [(i + 1) % n for i in range(n)]
    return [tuple(t), tuple(c)]


def hyperelliptic_census(g: int) -> dict:
    """Image and kernel sizes of S_{2g+2} -> Sp_{2g}(2) by full enumeration."""
    h = hyperelliptic_symplectic(g)
    n = h.points
    ident = tuple(h.space.standard_basis())
    images = set()
    kernel = 0
    total = 0
    for p in permutations(range(n)):
        c = h.image_code(p)
        images.add(c)
        kernel += c == ident
        total += 1
    # homomorphism on generator products, and validity of generator images
    gens = _sym_generators(n)
    hom = True
    for a in gens:
        for b in gens:
            ab = tuple(a[b[i]] for i in range(n))
            hom &= h.image(ab).cols == (h.image(a) @ h.image(b)).cols
    return {
        "g": g,
        "source_order": total,
        "target_order": sp_order(g),
        "image_order": len(images),
        "kernel_order": kernel,
        "surjective": len(images) == sp_order(g),
        "injective": kernel == 1,
        "homomorphism_on_generators": bool(hom),
    }


def hyperelliptic_abelian_report(g: int) -> AbelianActionReport:
    """Disjoint transpositions (0 1), (2 3), ... acting on the odd forms."""
    h = hyperelliptic_symplectic(g)
    gens = []
    for i in range(g + 1):
        p = list(range(h.points))
        p[2 * i], p[2 * i + 1] = 2 * i + 1, 2 * i
        sigma = h.image(p)
        odd = odd_forms(g)
        pos = {f.diag: j for j, f in enumerate(odd)}
        gens.append(Permutation(tuple(pos[sigma.act_on_form(f).diag] for f in odd)))
    return build_abelian_report(gens)
