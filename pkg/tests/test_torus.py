import random
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from e7theta import lattice as lat
from e7theta import torus as T
from e7theta import weyl
from e7theta.errors import DivisorError, LatticeError, RetryBudgetExceeded

P = 101
PINNED_CHI = (82, 15, 4, 95, 36, 32, 29)
PINNED_PARAMS = (22, 89, 98, 51, 94, 85, 90)

units = st.integers(1, P - 1)
chis = st.lists(units, min_size=7, max_size=7).map(lambda v: T.TorusPoint(P, tuple(v)))


def test_prime_checks():
    assert [p for p in range(30) if T.is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    with pytest.raises(ValueError):
        T.check_prime(7)  # 7 = 1 mod 3: cube roots are not unique
    with pytest.raises(ValueError):
        T.check_prime(3)
    T.check_prime(101)


def test_field_element():
    x = T.PrimeFieldElement(P, 5)
    assert (x * x.inverse()).value == 1
    assert (x.cube_root() ** 3).value == 5
    for v in range(1, P):
        assert (T.PrimeFieldElement(P, v).cube_root() ** 3).value == v


def test_torus_point_validation_and_json():
    chi = T.TorusPoint(P, PINNED_CHI)
    assert T.TorusPoint.from_json(chi.to_json()) == chi
    assert chi.to_json() == {"p": P, "values": list(PINNED_CHI)}
    with pytest.raises(ValueError):
        T.TorusPoint(P, (1, 2, 3, 4, 5, 6, 101))
    with pytest.raises(ValueError):
        T.TorusPoint(P, (1, 2, 3))


# -- characters on roots ----------------------------------------------------------------


def test_evaluate_examples():
    chi = T.TorusPoint(P, PINNED_CHI)
    sr = lat.simple_roots(2)
    c = chi.values
    assert T.evaluate_on_root(chi, sr[1]) == c[1]  # E1 - E2
    assert T.evaluate_on_root(chi, sr[0] + sr[3]) == c[0] * c[3] % P
    with pytest.raises(LatticeError):
        T.evaluate_on_root(chi, sr[0] + sr[1])  # alpha_0 meets only alpha_3
    for i, r in enumerate(lat.roots(2)):
        assert T.evaluate_on_root(chi, -r) * T.evaluate_on_root(chi, r) % P == 1


def _root_sums():
    rs = lat.roots(2)
    idx = lat.root_index(2)
    return [(i, j, idx[(rs[i] + rs[j]).coords]) for i in range(126) for j in range(126) if (rs[i] + rs[j]).coords in idx]


ROOT_SUMS = _root_sums()


@given(chis, st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_evaluate_is_multiplicative(chi, k):
    i, j, s = ROOT_SUMS[k % len(ROOT_SUMS)]
    assert T.evaluate_on_root(chi, s) == T.evaluate_on_root(chi, i) * T.evaluate_on_root(chi, j) % P


def test_in_divisor_examples():
    trivial = T.TorusPoint(P, (1,) * 7)
    check = T.in_divisor(trivial)
    assert check.in_divisor and check.witness == 0 and len(check.kernel) == 63
    assert not T.in_divisor(T.TorusPoint(P, PINNED_CHI)).in_divisor
    # a generator of F_101^* and its powers g^1..g^7
    g = 2
    assert len({pow(g, k, P) for k in range(1, P)}) == P - 1
    chi = T.TorusPoint(P, tuple(pow(g, k, P) for k in range(1, 8)))
    brute = any(T.evaluate_on_root(chi, i) == 1 for i in range(126))
    assert T.in_divisor(chi).in_divisor == brute


@given(chis)
@settings(max_examples=60, deadline=None)
def test_divisor_is_weyl_and_mu2_invariant(chi):
    base = T.in_divisor(chi).in_divisor
    assert T.in_divisor(chi.inverse()).in_divisor == base
    for w in weyl.weyl_generators(2):
        assert T.in_divisor(T.act_on_torus_point(chi, w)).in_divisor == base


def test_weyl_action_is_an_action():
    chi = T.TorusPoint(P, PINNED_CHI)
    v, w = weyl.random_elements(2, seed=4)
    # (w . chi)(x) = chi(w x), so acting by v then w is acting by v w
    assert T.act_on_torus_point(T.act_on_torus_point(chi, v), w) == T.act_on_torus_point(chi, v @ w)


# -- sampling ---------------------------------------------------------------------------


def test_pinned_sample():
    chi, stats = T.sample_torus_point(P, 42)
    assert chi.values == PINNED_CHI
    assert stats.attempts == 1 and stats.rejections == 0
    assert T.parameters_from_torus(chi) == PINNED_PARAMS
    cert = T.general_position_check(T.points_from_torus(chi))
    assert cert["passed"]
    assert cert["determinants_checked"] == {"lines": 35, "conics": 7}


def test_sampling_is_deterministic():
    assert T.sample_torus_point(P, 9)[0] == T.sample_torus_point(P, 9)[0]


def test_sample_stays_off_divisor_under_generators():
    chi, _ = T.sample_torus_point(P, 42)
    for w in weyl.weyl_generators(2):
        assert not T.in_divisor(T.act_on_torus_point(chi, w)).in_divisor


def test_small_field_is_impossible():
    with pytest.raises(RetryBudgetExceeded) as info:
        T.sample_torus_point(5, 1)
    assert "units" in str(info.value)


def test_retry_budget_reports_statistics():
    with pytest.raises(RetryBudgetExceeded) as info:
        T.sample_torus_point(23, 0, max_retries=3)
    assert info.value.stats["attempts"] == 3


def test_smallest_viable_prime():
    assert T.smallest_viable_prime() == 23
    chi, stats = T.sample_torus_point(23, 1)
    assert not T.in_divisor(chi).in_divisor
    assert T.general_position_check(T.points_from_torus(chi))["passed"]


# -- the nodal cubic ---------------------------------------------------------------------


def test_cubic_points():
    for t in range(1, P):
        pt = T.cubic_point(P, t)
        assert T.on_cubic(pt, P) and not T.is_node(pt, P)
        assert pt[next(i for i, c in enumerate(pt) if c)] == 1
    assert T.cubic_point(P, 1) == (0, 1, 0)  # the inflection at infinity
    assert len({T.cubic_point(P, t) for t in range(1, P)}) == P - 1
    with pytest.raises(ValueError):
        T.cubic_point(P, 0)


def test_collinearity_law_against_determinants():
    rng = random.Random(1)
    hits = 0
    for _ in range(1000):
        a, b = rng.randrange(1, P), rng.randrange(1, P)
        # half the triples are forced onto a line by the group law
        c = pow(a * b, -1, P) if rng.random() < 0.5 else rng.randrange(1, P)
        if len({a, b, c}) < 3:
            continue
        pts = [T.cubic_point(P, x) for x in (a, b, c)]
        law = a * b * c % P == 1
        hits += law
        assert T.collinear(pts, P) == law
    assert hits > 300


def test_conic_law_against_determinants():
    rng = random.Random(2)
    hits = 0
    for _ in range(300):
        t = rng.sample(range(1, P), 5)
        prod = 1
        for x in t:
            prod = prod * x % P
        t.append(pow(prod, -1, P) if rng.random() < 0.5 else rng.randrange(1, P))
        if len(set(t)) < 6 or any(a * b * c % P == 1 for a, b, c in combinations(t, 3)):
            continue
        pts = [T.cubic_point(P, x) for x in t]
        law = prod * t[-1] % P == 1
        hits += law
        assert T.on_common_conic(pts, P) == law
    assert hits > 50


def test_det_mod_p():
    rng = np.random.default_rng(0)
    for _ in range(30):
        m = rng.integers(0, 7, size=(4, 4))
        assert T.det_mod_p(m.tolist(), 7) == round(np.linalg.det(m)) % 7


# -- configurations ----------------------------------------------------------------------


def test_divisor_refusal():
    chi = T.TorusPoint(P, (1,) * 7)
    with pytest.raises(DivisorError):
        T.points_from_torus(chi)


def test_gauge_independence():
    chi = T.TorusPoint(P, PINNED_CHI)
    ref = T.points_from_torus(chi)
    for s1 in range(1, P):
        assert T.points_from_torus(chi, s1=s1) == ref


def test_parameters_round_trip():
    chi = T.TorusPoint(P, PINNED_CHI)
    assert T.torus_point_from_parameters(P, T.parameters_from_torus(chi)) == chi


def test_relabeling_permutes_parameters():
    rng = random.Random(5)
    for seed in range(50):
        chi, _ = T.sample_torus_point(P, 1000 + seed)
        perm = list(range(7))
        rng.shuffle(perm)
        t = T.parameters_from_torus(chi)
        moved = T.parameters_from_torus(T.relabel_points(chi, perm))
        assert moved == tuple(t[perm[k]] for k in range(7))


def test_injected_collinear_triple():
    chi = T.TorusPoint(P, PINNED_CHI)
    cfg = T.points_from_torus(chi)
    pts = list(cfg.points)
    x1, y1, z1 = pts[0]
    x2, y2, z2 = pts[1]
    pts[2] = T.normalize((x1 + x2, y1 + y2, z1 + z2), P)
    bad = T.PointConfiguration(P, cfg.parameters, tuple(pts))
    cert = T.general_position_check(bad)
    assert not cert["passed"]
    assert [1, 2, 3] in cert["collinear_triples"]


def test_general_position_rejects_malformed():
    with pytest.raises(ValueError):
        T.general_position_check(T.PointConfiguration(P, (), ((1, 0, 0),) * 6))
    with pytest.raises(ValueError):
        T.general_position_check(T.PointConfiguration(P, (), ((0, 0, 0),) * 7))


@pytest.mark.parametrize("tag, ix", [("ZIJ", (2, 5)), ("ZIJK", (1, 3, 6)), ("ZI", (4,))])
def test_conditioned_failures_match_prediction(tag, ix):
    rng = random.Random(11)
    for _ in range(10):
        t = T.conditioned_parameters(P, rng, tag, ix)
        chi = T.torus_point_from_parameters(P, t)
        check = T.in_divisor(chi)
        assert check.in_divisor
        cert = T.general_position_check(T.points_from_torus(chi, allow_divisor=True))
        pred = T.predicted_violations(check.kernel)
        assert {k: cert[k] for k in pred} == pred
        if tag == "ZIJK":
            assert list(ix) in cert["collinear_triples"]


def test_equivalence_experiment_pinned():
    out = T.torus_equivalence_experiment(P, 200, 7)
    assert out["all_agree"]
    assert out["unconstrained"] == {"agree": 200, "in_divisor": 95, "off_divisor": 105}
    assert out["conditioned"]["agree"] == out["conditioned"]["exact_prediction"] == 200
    assert out["conditioned"]["by_type"] == {"ZI": 60, "ZIJ": 86, "ZIJK": 54}


def test_equivalence_experiment_empty():
    out = T.torus_equivalence_experiment(P, 0, 7)
    assert out["unconstrained"]["agree"] == 0 and out["failures"] == [] and out["all_agree"]
