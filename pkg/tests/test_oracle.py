import pytest

from helpers import INF, ZERO, divisor, minus_z

from eqrr.engine import HypothesisError
from eqrr.fields import GF
from eqrr.oracle import GDivisor, OracleError, build_cover, euler_brauer, h0_with_action, \
    local_freeness_check, rational_point, rr_space, verify_cover


def test_affine_composition():
    cov = build_cover(7, [(3, 0), (1, 1)])
    assert cov.cover.group.order == 42
    cov2 = build_cover(9, [(1, 1), (1, 3)])
    assert cov2.cover.group.order == 9


def test_rr_space_examples():
    P1 = build_cover(5, [])
    assert rr_space(divisor(P1, [])) == [([1], [1])]
    assert rr_space(divisor(P1, [(INF, 2)])) == [([1], [1]), ([0, 1], [1]), ([0, 0, 1], [1])]
    basis = rr_space(divisor(P1, [(INF, 1), (ZERO, 1)]))
    assert len(basis) == 3 and all(den == [0, 1] for _, den in basis)


def test_riemann_roch_dimensions():
    cov = build_cover(7, [(2, 0)])
    for n in range(-3, 4):
        D = divisor(cov, [(INF, n)])
        H0 = h0_with_action(cov, D)
        assert H0.dim == max(0, n + 1)


def test_stability_enforced(c2f5):
    D = GDivisor(c2f5.F, {rational_point(c2f5.F, 1): 1})
    assert not D.is_stable(c2f5)
    assert divisor(c2f5, [(rational_point(c2f5.F, 1), 1)]).is_stable(c2f5)


def test_ramified_points_and_filtrations(c2f5, asf2):
    assert set(c2f5.points) == {INF, ZERO}
    assert asf2.points == [INF]
    assert asf2.filtration_by_valuation(INF)[:2] == [2, 2]
    aff = build_cover(5, [(2, 0), (1, 1)])
    assert aff.filtration_by_valuation(INF)[:3] == [20, 5, 1]


def test_verify_c2f5_structure_sheaf(c2f5):
    rep = verify_cover(c2f5, divisor(c2f5, []))
    assert rep["match"] and rep["ok"]
    assert rep["h0"] == 1 and rep["h1"] == 0


def test_verify_artin_schreier(asf2):
    rep = verify_cover(asf2, minus_z(asf2))
    assert rep["match"] and rep["h0"] == 0 and rep["h1"] == 0
    assert rep["dimension"] == "0"


def test_verify_affine_f5_mu4():
    cov = build_cover(5, [(2, 0), (1, 1)])
    rep = verify_cover(cov, minus_z(cov))
    assert rep["ok"] and rep["degree_identity"]["holds"] and rep["mackey"] and rep["projective"]


def test_verify_rejects_ew_violation(asf2):
    with pytest.raises(HypothesisError):
        verify_cover(asf2, divisor(asf2, [(INF, 0)]))
    rep = verify_cover(asf2, divisor(asf2, [(INF, 0)]), expect_ew=False)
    assert rep["match"] is None


def test_corrupted_engine_divisor_mismatch(asf2):
    rep = verify_cover(asf2, divisor(asf2, [(INF, 1)]), engine_divisor=divisor(asf2, [(INF, 3)]))
    assert rep["match"] is False and rep["diff"]


def test_brauer_of_h0_h1_dimension(c2f5):
    D = divisor(c2f5, [(INF, 2), (ZERO, 1)])
    cls, H0, H1 = euler_brauer(c2f5, D)
    assert cls.at_identity() == H0.dim - H1.dim == D.degree + 1


def test_local_freeness_examples(c2f5, asf2):
    for n in range(-3, 4):
        assert local_freeness_check(c2f5, ZERO, n)
    assert local_freeness_check(asf2, INF, 1)
    assert local_freeness_check(asf2, INF, -1)
    assert not local_freeness_check(asf2, INF, 0)


def test_unramified_point_rejected_as_place(c2f5):
    with pytest.raises((OracleError, ValueError, KeyError)):
        c2f5.place_index(rational_point(c2f5.F, 1))
