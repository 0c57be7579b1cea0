import random

import pytest

from helpers import INF, ZERO, divisor, minus_z

from eqrr.engine import BundleData, CoverData, EngineError, HypothesisError, chi_hrr, degree_identity, \
    divisor_bundle, euler_char, kock_cross_check, mackey_check, n_pi, pullback_twist_chi, \
    projective_multiplicities, regular_class, w_g
from eqrr.groups import cyclic_group
from eqrr.oracle import build_cover, bundle_from_divisor
from eqrr.ramification import BundleStalk
from eqrr.suite import random_divisor

COVERS = {
    "mu3-F7": (7, [(2, 0)]),
    "mu4-F13": (13, [(5, 0)]),
    "as-F3": (3, [(1, 1)]),
    "as-F4": (4, [(1, 1)]),
    "aff-5-4": (5, [(2, 0), (1, 1)]),
    "aff-7-3": (7, [(2, 0), (1, 1)]),
}


@pytest.fixture(scope="module", params=sorted(COVERS))
def cover(request):
    q, gens = COVERS[request.param]
    return build_cover(q, gens)


def _is_zero(cls):
    return all(v.is_zero() for v in cls.values)


# ------------------------------------------------------------ pieces

def test_chi_hrr_examples():
    assert chi_hrr(1, 0, 0) == 1
    assert chi_hrr(1, 0, -1) == 0
    assert chi_hrr(2, 1, 3) == 3


def test_n_pi_vanishes_for_p_group_cover(asf2):
    assert _is_zero(n_pi(asf2.cover))
    assert _is_zero(n_pi(build_cover(9, [(1, 1), (1, 3)]).cover))


def test_n_pi_and_w_vanish_unramified():
    cd = CoverData(cyclic_group(3), 5, 1, 1, [])
    b = BundleData(1, [], chi_EG=2)
    assert _is_zero(n_pi(cd)) and _is_zero(w_g(cd, b))
    assert euler_char(cd, b) == regular_class(cd.group, 5) * 2


def test_w_vanishes_when_l_is_zero(c2f5):
    b = bundle_from_divisor(c2f5, divisor(c2f5, [(INF, 0), (ZERO, 0)]))
    assert _is_zero(w_g(c2f5.cover, b))


# ------------------------------------------------------------ euler_char examples

def test_c2f5_structure_sheaf(c2f5):
    chi = euler_char(c2f5.cover, bundle_from_divisor(c2f5, divisor(c2f5, [])))
    assert [v.to_rational() for v in chi.values] == [1, 1]
    # = trivial line: projective cover multiplicities (0, 1) over the two simples
    mult = projective_multiplicities(chi)
    assert sorted(m.to_rational() for m in mult) == [0, 1]


def test_artin_schreier_minus_infinity(asf2):
    b = bundle_from_divisor(asf2, divisor(asf2, [(INF, -1)]))
    assert b.deg_EG == -1
    assert _is_zero(euler_char(asf2.cover, b))


def test_ew_violation_raises(asf2):
    bad = BundleData(1, [BundleStalk((0,))], deg_EG=0)
    with pytest.raises(HypothesisError):
        euler_char(asf2.cover, bad)


def test_identity_value_is_degree_plus_rank(cover):
    """chi(1) = deg E + rk (1 - g_L); the covers here have g_L = 0."""
    divs = [minus_z(cover)] + ([divisor(cover, [])] if cover.cover.is_tame() else [])
    for D in divs:
        b = bundle_from_divisor(cover, D)
        assert euler_char(cover.cover, b).at_identity() == b.deg_E + b.rank


# ------------------------------------------------------------ intended shape

def test_pullback_twist_matches_euler_char(cover):
    cd = cover.cover
    degZ = sum(cd.base_degree(o) for o in cd.orbits().values())
    b = divisor_bundle(cd, [-1] * len(cd.places))
    assert pullback_twist_chi(cd, 1, 0, degZ) == euler_char(cd, b)
    b2 = divisor_bundle(cd, [-1] * len(cd.places), rank=2, degF=3)
    assert pullback_twist_chi(cd, 2, 3, degZ) == euler_char(cd, b2)


def test_pullback_twist_unramified():
    cd = CoverData(cyclic_group(2), 3, 1, 0, [])
    assert _is_zero(pullback_twist_chi(cd, 1, 0, 1))


def test_pullback_twist_rejects_small_z(c2f5):
    with pytest.raises(EngineError):
        pullback_twist_chi(c2f5.cover, 1, 0, 1)


def test_pullback_twist_p_group_has_no_ramification_term(asf2):
    cd = asf2.cover
    assert pullback_twist_chi(cd, 1, 0, 1) == regular_class(cd.group, 2) * 0


# ------------------------------------------------------------ identities

def test_degree_identity_examples(c2f5, asf2):
    b = bundle_from_divisor(c2f5, minus_z(c2f5))
    assert b.deg_E == -2
    r = degree_identity(c2f5.cover, b)
    assert r["lhs"] == r["rhs"] == 2 and r["holds"]
    b = bundle_from_divisor(asf2, minus_z(asf2))
    r = degree_identity(asf2.cover, b)
    assert b.deg_E == -1 and r["lhs"] == r["rhs"] == 1


def test_degree_identity_unramified():
    cd = CoverData(cyclic_group(3), 5, 1, 1, [])
    assert degree_identity(cd, BundleData(1, [], deg_E=6, deg_EG=2))["holds"]


def test_degree_identity_corpus(cover):
    rng = random.Random(7)
    for _ in range(4):
        D = divisor(cover, random_divisor(cover, rng))
        assert degree_identity(cover.cover, bundle_from_divisor(cover, D))["holds"]


def test_kock_agrees_off_identity(cover):
    b = bundle_from_divisor(cover, minus_z(cover))
    rep = kock_cross_check(cover.cover, b)
    assert rep["agree_off_identity"]
    assert rep["identity_value_hurwitz"] == rep["identity_value_engine"]


def test_mackey_congruences(cover):
    b = bundle_from_divisor(cover, minus_z(cover))
    for rec in mackey_check(cover.cover, b):
        assert rec["N"] and rec.get("W", True)


def test_p_group_degeneration():
    """All I_w = P_w: chi = chi_k(E^G) [kG] exactly."""
    for q, gens in ((2, [(1, 1)]), (9, [(1, 1), (1, 3)]), (5, [(1, 1)])):
        cov = build_cover(q, gens)
        rng = random.Random(q)
        for _ in range(3):
            b = bundle_from_divisor(cov, divisor(cov, random_divisor(cov, rng)))
            assert euler_char(cov.cover, b) == regular_class(cov.cover.group, cov.F.p) * b.chi(0)


def test_trivial_psi_multiplicity_vanishes_off_zero(cover):
    from eqrr.characters import PsiSpec
    from eqrr.psi import m_psi_w
    for pl in cover.cover.places:
        d = pl.datum
        triv = PsiSpec.trivial(d.group)
        assert [m_psi_w(triv, d, j) for j in range(d.e)] == [d.f_w] + [0] * (d.e - 1)
