from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from e7theta import lattice as lat
from e7theta.errors import LatticeError

ROOT_COUNTS = {1: 240, 2: 126, 3: 72, 4: 40, 5: 20, 6: 8, 7: 2}
EXCEPTIONAL_COUNTS = {2: 56, 3: 27, 4: 16, 5: 10, 6: 6, 7: 3}


def test_lattice_basics():
    L = lat.PicardLattice(2)
    assert L.rank == 8 and L.n == 7
    assert L.K.coords == (-3, 1, 1, 1, 1, 1, 1, 1)
    assert L.K.square() == 2
    assert L.signature() == (1, 7)
    with pytest.raises(LatticeError):
        lat.PicardLattice(9)


@pytest.mark.parametrize("d", sorted(ROOT_COUNTS))
def test_root_census_and_blind_search(d):
    rs = lat.roots(d)
    assert len(rs) == ROOT_COUNTS[d]
    assert len(set(r.coords for r in rs)) == len(rs)
    assert all(lat.is_root(r) for r in rs)
    assert sorted(r.coords for r in rs) == [v.coords for v in lat.roots_blind(d)]


@pytest.mark.parametrize("d", sorted(EXCEPTIONAL_COUNTS))
def test_exceptional_census_and_blind_search(d):
    es = lat.exceptional_classes(d)
    assert len(es) == EXCEPTIONAL_COUNTS[d]
    assert all(e.square() == -1 and lat.intersect(e, e.lattice.K) == -1 for e in es)
    assert sorted(e.coords for e in es) == [v.coords for v in lat.exceptional_blind(d)]


def test_degree2_root_types():
    tags = Counter(l.tag for l in lat.root_labels(2) if l.sign == 1)
    assert tags == {"ZIJ": 21, "ZIJK": 35, "ZI": 7}
    labels = lat.exceptional_labels(2)
    assert Counter(t for t, _ in labels) == {"E": 7, "HEE": 21, "3H2E6E": 7, "2H5E": 21}


@pytest.mark.parametrize("d", [2, 3, 4])
def test_root_closure_under_reflections(d):
    index = lat.root_index(d)
    rs = lat.roots(d)
    for b in rs:
        m = lat.reflection_matrix(b)
        imgs = lat.roots_array(d) @ m.T
        assert {tuple(r) for r in imgs.tolist()} == set(index)
        assert np.array_equal(m @ m, np.eye(lat.PicardLattice(d).rank, dtype=np.int64))


def test_reflection_fixes_k_and_negates_root():
    L = lat.PicardLattice(2)
    for b in lat.roots(2):
        assert lat.reflect(b, b) == -b
        assert lat.reflect(b, L.K) == L.K


def test_reflect_rejects_non_root():
    L = lat.PicardLattice(2)
    with pytest.raises(LatticeError):
        lat.reflect(L.H, L.E(1))


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 6])
def test_simple_roots_are_an_integral_basis(d):
    sr = lat.simple_roots(d)
    dec = lat.root_decompositions(d)
    # every root is an integer combination with coefficients of one sign
    assert all(np.all(row >= 0) or np.all(row <= 0) for row in dec)
    assert np.array_equal(dec @ np.array([s.coords for s in sr]), lat.roots_array(d))
    # and the simple roots span the K-orthogonal lattice over Z
    for b in lat.k_orthogonal_basis(d):
        assert all(isinstance(c, int) for c in lat.decompose(b))
    assert all(lat.intersect(s, s.lattice.K) == 0 for s in sr)


def test_degree2_cartan_matrix():
    sr = lat.simple_roots(2)
    cartan = -np.array([[lat.intersect(a, b) for b in sr] for a in sr])
    assert np.all(np.diag(cartan) == 2)
    assert round(np.linalg.det(cartan)) == 2  # E7
    edges = sorted((i, j) for i in range(7) for j in range(i + 1, 7) if cartan[i, j])
    assert edges == [(0, 3), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]


def test_positive_roots_of_degree2():
    pos = lat.positive_roots(2)
    assert len(pos) == 63
    assert all(np.all(row >= 0) for row in lat.root_decompositions(2)[:63])


def test_geiser_pairs():
    L = lat.PicardLattice(2)
    es = lat.exceptional_classes(2)
    idx = lat.exceptional_index(2)
    images = [idx[lat.geiser_pair(e).coords] for e in es]
    assert all(images[images[a]] == a and images[a] != a for a in range(56))
    assert images[:28] == list(range(28, 56))
    pairs = lat.bitangent_pairs()
    assert len(pairs) == 28
    for a, b in pairs:
        assert es[a] + es[b] == -L.K
        assert lat.intersect(es[a], es[b]) == 2


def test_geiser_pair_errors():
    with pytest.raises(LatticeError):
        lat.geiser_pair(lat.PicardLattice(3).E(1))
    with pytest.raises(LatticeError):
        lat.geiser_pair(lat.PicardLattice(2).H)


def test_mod2_quotient_structure():
    q = lat.orthogonal_complement_mod2(2)
    assert q.space.g == 3
    assert len(q.radical) == 1
    assert q.radical[0].coords == (1, -1, -1, -1, 1, -1, 1, -1)
    # the mod-2 Gram matrix of the simple roots has rank 6
    from e7theta import f2

    assert f2.rank(f2.pack(r) for r in q.simple_gram_mod2) == 6
    sp = q.space
    for u in sp.standard_basis():
        for v in sp.standard_basis():
            assert lat.intersect(q.lift(u), q.lift(v)) % 2 == sp.pairing(u, v)
        assert q.reduce(q.lift(u)) == u


def test_roots_reduce_to_nonzero_vectors():
    q = lat.orthogonal_complement_mod2(2)
    imgs = [q.reduce(r) for r in lat.roots(2)]
    assert 0 not in imgs
    counts = Counter(imgs)
    assert len(counts) == 63 and set(counts.values()) == {2}  # +-beta share an image
    assert np.array_equal(q.reduce_array(lat.roots_array(2)), np.array(imgs))


@given(st.lists(st.integers(-3, 3), min_size=7, max_size=7), st.lists(st.integers(-3, 3), min_size=7, max_size=7))
@settings(max_examples=200, deadline=None)
def test_reduction_preserves_pairing(a, b):
    q = lat.orthogonal_complement_mod2(2)
    sr = lat.simple_roots(2)
    L = lat.PicardLattice(2)
    x = L.vector([0] * 8)
    y = L.vector([0] * 8)
    for c, s in zip(a, sr):
        x = x + c * s
    for c, s in zip(b, sr):
        y = y + c * s
    assert q.space.pairing(q.reduce(x), q.reduce(y)) == lat.intersect(x, y) % 2


def test_theta_forms_are_odd_and_match_geiser_pairs():
    q = lat.orthogonal_complement_mod2(2)
    es = lat.exceptional_classes(2)
    forms = [q.theta_form(e) for e in es]
    assert all(f.arf == 1 for f in forms)
    assert all(forms[a] == forms[a + 28] for a in range(28))
    assert len({f.diag for f in forms[:28]}) == 28


def test_tag_records():
    recs = lat.tag_records(lat.roots(2)[:2], lat.root_labels(2)[:2])
    assert recs[0] == {"tag": "ZIJ", "indices": [1, 2], "coords": [0, 1, -1, 0, 0, 0, 0, 0], "sign": 1}
    ex = lat.tag_records(lat.exceptional_classes(2)[:1], lat.exceptional_labels(2)[:1])
    assert ex[0] == {"tag": "E", "indices": [1], "coords": [0, 1, 0, 0, 0, 0, 0, 0]}


def test_exceptional_degree_bounds():
    with pytest.raises(LatticeError):
        lat.exceptional_classes(1)
