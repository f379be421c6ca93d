from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from e7theta import symplectic as sy
from e7theta.errors import BudgetError, DecompositionError, DimensionError, NotAronholdError, NotSymplecticError


def space(g):
    return sy.SymplecticSpace(g)


def all_forms(g):
    return sy.enumerate_forms(g).forms


# -- examples ------------------------------------------------------------------------


def test_translate_examples():
    sp = space(1)
    q = sy.QuadraticForm(sp, 0)  # x1 x2
    assert q.translate(0) == q
    shifted = q.translate([1, 1])
    assert [shifted(x) for x in range(4)] == [(a * b + a + b) % 2 for a, b in [(0, 0), (0, 1), (1, 0), (1, 1)]]


def test_arf_examples():
    sp = space(1)
    assert sy.QuadraticForm(sp, 0).arf == 0
    assert sy.QuadraticForm(sp, 0).zero_count() == 3
    odd = sy.QuadraticForm(sp, 0b11)  # x1 + x1 x2 + x2
    assert odd.arf == 1 and odd.zero_count() == 1


@pytest.mark.parametrize("g", [1, 2, 3])
def test_form_from_standard_decomposition(g):
    sp = space(g)
    es = [sp.e(i) for i in range(1, g + 1)]
    fs = [sp.f(i) for i in range(1, g + 1)]
    q = sy.form_from_isotropic(sp, es, fs)
    assert q.diag == 0 and q.arf == 0
    assert q.zero_count() == sy.even_zero_count(g)
    assert sy.form_from_isotropic(sp, fs, es) == q


def test_form_from_isotropic_random_lagrangians():
    rng = np.random.default_rng(0)
    g = 3
    sp = space(g)
    bases = sy.symplectic_bases_array(g)
    for row in bases[rng.choice(len(bases), 50, replace=False)]:
        es, fs = [int(v) for v in row[:g]], [int(v) for v in row[g:]]
        q = sy.form_from_isotropic(sp, es, fs)
        assert q.arf == 0
        for part in (es, fs):
            for mask in range(1 << g):
                x = 0
                for i in range(g):
                    if (mask >> i) & 1:
                        x ^= part[i]
                assert q(x) == 0


def test_form_from_isotropic_errors():
    sp = space(2)
    with pytest.raises(DecompositionError):
        sy.form_from_isotropic(sp, [sp.e(1), sp.f(1)], [sp.e(2), sp.f(2)])
    with pytest.raises(DecompositionError):
        sy.form_from_isotropic(sp, [sp.e(1), sp.e(2)], [sp.e(1), sp.f(2)])
    with pytest.raises(DecompositionError):
        sy.form_from_isotropic(sp, [sp.e(1)], [sp.f(1)])


@pytest.mark.parametrize("g, even, odd", [(1, 3, 1), (2, 10, 6), (3, 36, 28), (4, 136, 120)])
def test_form_census(g, even, odd):
    census = sy.enumerate_forms(g)
    assert len(census.forms) == 4**g
    assert (census.even, census.odd) == (even, odd)


def test_form_budget():
    with pytest.raises(BudgetError):
        sy.enumerate_forms(5)
    with pytest.raises(BudgetError):
        sy.symplectic_bases_array(4)


def test_hex_round_trip():
    for g in (1, 2, 3):
        sp = space(g)
        for q in all_forms(g):
            assert sy.QuadraticForm.from_hex(sp, q.to_hex()) == q


def test_hex_layout_g1():
    # packed upper triangle (c11, c12, c22), first entry most significant
    sp = space(1)
    assert sy.QuadraticForm(sp, 0).to_hex() == "2"
    assert sy.QuadraticForm(sp, 0b11).to_hex() == "7"


def test_from_coeffs_rejects_bad_cross_terms():
    sp = space(1)
    with pytest.raises(ValueError):
        sy.QuadraticForm.from_coeffs(sp, [[1, 0], [0, 1]])
    with pytest.raises(DimensionError):
        sy.QuadraticForm.from_coeffs(sp, np.eye(3, dtype=int))


# -- exhaustive properties -----------------------------------------------------------


@pytest.mark.parametrize("g", [1, 2, 3])
def test_polarization(g):
    sp = space(g)
    n = 1 << sp.dim
    for q in all_forms(g):
        t = q.value_table()
        for x in range(n):
            for y in range(n):
                assert t[x ^ y] ^ t[x] ^ t[y] == sp.pairing(x, y)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_zero_count_law_and_arf_agreement(g):
    for q in all_forms(g):
        z = q.zero_count()
        assert z == 2 ** (2 * g - 1) + (-1) ** q.arf * 2 ** (g - 1)
        assert sy.arf_by_zero_count(q) == q.arf


@pytest.mark.parametrize("g", [1, 2, 3])
def test_translation_is_free_and_transitive(g):
    sp = space(g)
    q0 = sy.base_form(sp)
    for q in all_forms(g):
        images = {q.translate(v) for v in range(1 << sp.dim)}
        assert len(images) == 4**g
    for target in all_forms(g):
        assert sum(1 for v in range(1 << sp.dim) if q0.translate(v) == target) == 1


@pytest.mark.parametrize("g", [1, 2, 3])
def test_arf_of_translate(g):
    sp = space(g)
    for q in all_forms(g):
        for v in range(1 << sp.dim):
            assert q.translate(v).arf == q.arf ^ q(v)


@pytest.mark.parametrize("g", [1, 2])
def test_arf_classes_are_the_sp_orbits(g):
    forms = all_forms(g)
    group = list(sy.sp_elements(g))
    for q in forms:
        orbit = {s.act_on_form(q) for s in group}
        assert {f.arf for f in orbit} == {q.arf}
        assert len(orbit) == sum(1 for f in forms if f.arf == q.arf)


def test_arf_classes_are_the_sp_orbits_g3():
    # transvections generate Sp6(2), so their orbits are the group orbits
    g = 3
    sp = space(g)
    gens = [sp.transvection(v) for v in range(1, 1 << sp.dim)]
    forms = all_forms(g)
    seen = set()
    orbits = []
    for q in forms:
        if q in seen:
            continue
        orbit, todo = {q}, [q]
        while todo:
            x = todo.pop()
            for t in gens:
                y = t.act_on_form(x)
                if y not in orbit:
                    orbit.add(y)
                    todo.append(y)
        seen |= orbit
        orbits.append(orbit)
    assert sorted(len(o) for o in orbits) == [28, 36]
    for o in orbits:
        assert len({f.arf for f in o}) == 1


# -- the symplectic group ------------------------------------------------------------


@pytest.mark.parametrize("g, order", [(1, 6), (2, 720), (3, 1451520)])
def test_sp_order_and_enumeration(g, order):
    assert sy.sp_order(g) == order
    bases = sy.symplectic_bases_array(g)
    assert len(bases) == order
    assert len({tuple(r) for r in bases.tolist()}) == order


@pytest.mark.parametrize("g", [1, 2, 3])
def test_sp_order_by_schreier_sims(g):
    assert sy.sp_order_via_group(g) == sy.sp_order(g)


def test_enumerated_elements_preserve_form():
    rng = np.random.default_rng(1)
    sp = space(3)
    bases = sy.symplectic_bases_array(3)
    for row in bases[rng.choice(len(bases), 200, replace=False)]:
        assert sy.is_symplectic_basis(sp, [int(v) for v in row])


def test_non_symplectic_matrix_rejected():
    sp = space(2)
    with pytest.raises(NotSymplecticError):
        sy.Symplectomorphism(sp, (sp.e(1), sp.e(1) ^ sp.e(2), sp.f(1), sp.f(2)))


@given(st.integers(0, 719), st.integers(0, 719), st.integers(0, 15))
@settings(max_examples=200, deadline=None)
def test_group_action_laws_g2(i, j, d):
    bases = sy.symplectic_bases_array(2)
    sp = space(2)
    a = sy.Symplectomorphism(sp, tuple(int(v) for v in bases[i]))
    b = sy.Symplectomorphism(sp, tuple(int(v) for v in bases[j]))
    q = sy.QuadraticForm(sp, d)
    assert (a @ a.inverse()).is_identity()
    assert (a @ b).act_on_form(q) == a.act_on_form(b.act_on_form(q))
    assert a.act_on_form(q).arf == q.arf


# -- Aronhold bases --------------------------------------------------------------------


def test_is_aronhold_g1_examples():
    sp = space(1)
    x1x2, plus_x2, plus_x1 = (sy.QuadraticForm(sp, d) for d in (0, 1, 2))
    assert sy.is_aronhold([x1x2, plus_x2, plus_x1])
    odd = sy.QuadraticForm(sp, 3)
    for pair in combinations([x1x2, plus_x2, plus_x1], 2):
        check = sy.is_aronhold([*pair, odd])
        assert not check and check.reason


def test_is_aronhold_errors():
    sp = space(1)
    with pytest.raises(DimensionError):
        sy.is_aronhold([sy.QuadraticForm(sp, 0)] * 2)
    with pytest.raises(NotAronholdError):
        sy.is_aronhold([sy.WElement.vector(sp, 1)] * 3)


def test_aronhold_arf_by_genus():
    assert [sy.aronhold_arf(g) for g in range(1, 9)] == [0, 1, 1, 0, 0, 1, 1, 0]


def _oracle_aronhold(g, c0, c1):
    """Ordered tuples of distinct forms with a(q_S) = c0 + c1 (|S| - 1)/2 for odd S.

    Independent of the library: Arf comes from raw zero counts of value tables.
    """
    n = 2 * g
    mask = (1 << g) - 1

    def value(d, x):
        return (((x >> g) & x & mask).bit_count() + (d & x).bit_count()) & 1

    even_zeros = 2 ** (g - 1) * (2**g + 1)
    arf = {d: int(sum(1 for x in range(1 << n) if not value(d, x)) != even_zeros) for d in range(1 << n)}
    m = 2 * g + 1
    subsets = [(s, (c0 + c1 * ((k - 1) // 2)) & 1) for k in range(3, m + 1, 2) for s in combinations(range(m), k)]
    pool = [d for d in range(1 << n) if arf[d] == c0]
    out = []
    for tup in product(pool, repeat=m):
        if len(set(tup)) < m:
            continue
        ok = True
        for s, want in subsets:
            d = 0
            for i in s:
                d ^= tup[i]
            if arf[d] != want:
                ok = False
                break
        if ok:
            out.append(tup)
    return out


@pytest.mark.parametrize("g", [1, 2])
def test_arf_congruence_calibration(g):
    """Of the four affine rules a(q_S) = c0 + c1 (|S|-1)/2 only the adopted one has bases."""
    counts = {(c0, c1): len(_oracle_aronhold(g, c0, c1)) for c0 in (0, 1) for c1 in (0, 1)}
    adopted = (sy.aronhold_arf(g), 1)
    assert counts[adopted] == sy.sp_order(g)
    assert all(v == 0 for k, v in counts.items() if k != adopted)
    assert sorted(_oracle_aronhold(g, *adopted)) == sorted(sy.aronhold_bases_exhaustive(g))


@pytest.mark.parametrize("g", [1, 2])
def test_aronhold_torsor_exhaustive(g):
    sp = space(g)
    bases = {tuple(t) for t in sy.aronhold_bases_exhaustive(g)}
    assert len(bases) == sy.sp_order(g)
    start = sy.standard_aronhold_basis(g)
    orbit = {}
    for s in sy.sp_elements(g):
        img = start.act(s).diags()
        assert img not in orbit  # free
        orbit[img] = s
    assert set(orbit) == bases  # transitive
    assert all(sy.is_aronhold([sy.QuadraticForm(sp, d) for d in t]) for t in bases)


def test_standard_basis_g1_conversion():
    b = sy.standard_aronhold_basis(1)
    assert b.diags() == (0, 1, 2)  # x1x2, x1x2 + x2, x1x2 + x1
    e1, f1 = sy.aronhold_to_symplectic(b)
    sp = space(1)
    assert (e1, f1) == (sp.e(1), sp.f(1))
    assert sp.pairing(e1, f1) == 1


@pytest.mark.parametrize("g", [1, 2])
def test_conversion_round_trip_exhaustive(g):
    sp = space(g)
    for row in sy.symplectic_bases_array(g):
        vs = tuple(int(v) for v in row)
        ab = sy.symplectic_to_aronhold(sp, vs)
        assert sy.aronhold_to_symplectic(ab) == vs
    for t in sy.aronhold_bases_exhaustive(g):
        ab = sy.AronholdBasis(tuple(sy.QuadraticForm(sp, d) for d in t))
        out = sy.aronhold_to_symplectic(ab)
        assert sy.is_symplectic_basis(sp, out)
        assert sy.symplectic_to_aronhold(sp, out).diags() == t


def test_conversion_round_trip_g3_random():
    rng = np.random.default_rng(3)
    sp = space(3)
    bases = sy.symplectic_bases_array(3)
    for row in bases[rng.choice(len(bases), 40, replace=False)]:
        vs = tuple(int(v) for v in row)
        assert sy.aronhold_to_symplectic(sy.symplectic_to_aronhold(sp, vs)) == vs


def test_conversion_equivariance_g2():
    sp = space(2)
    base = sy.standard_aronhold_basis(2)
    image = sy.aronhold_to_symplectic(base)
    for s in sy.sp_elements(2):
        assert sy.aronhold_to_symplectic(base.act(s)) == tuple(s(v) for v in image)


def test_symplectic_to_aronhold_rejects_non_basis():
    sp = space(2)
    with pytest.raises(NotSymplecticError):
        sy.symplectic_to_aronhold(sp, [sp.e(1), sp.e(2), sp.e(1), sp.f(2)])
