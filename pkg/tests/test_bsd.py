from fractions import Fraction

import pytest

from eqrr.bsd import BSDError, GlobalArithmeticInput, assumption_check, chi_bsd, determinant, \
    in_pth_powers, lie_degree_elliptic, lo_value, predict_coprime, predict_main, vol_exponent, \
    z2_correction
from eqrr.characters import PsiSpec
from eqrr.cyclotomic import CycNumber
from eqrr.engine import HypothesisError
from eqrr.io import PsiDegree
from eqrr.oracle import build_cover
from eqrr.psi import LambdaSpec


def test_vol_exponent():
    assert vol_exponent(1, 0, 3, -2) == -4
    assert vol_exponent(0, 5, 7, 3) == 3
    assert vol_exponent(2, 1, 0, 0) == 0


def test_lie_degree_elliptic():
    assert lie_degree_elliptic(24) == -2
    assert lie_degree_elliptic(12) == -1
    with pytest.raises(BSDError):
        lie_degree_elliptic(13)


def test_lo_value_examples(c2f5):
    G = c2f5.cover.group
    sign = PsiSpec(G, [1 if g == G.identity else -1 for g in G.class_reps()])
    assert lo_value(c2f5.cover, 1, sign) == 1
    assert lo_value(c2f5.cover, 1, PsiSpec.trivial(G)) == 0


def test_lo_vanishes_for_p_extensions():
    cov = build_cover(9, [(1, 1), (1, 3)])
    for psi in (PsiSpec.trivial(cov.cover.group), PsiSpec.regular(cov.cover.group)):
        assert lo_value(cov.cover, 1, psi) == 0


def test_z2_correction():
    assert z2_correction([], 5) == 0
    assert z2_correction([{"r": [0], "kv": 5}], 5) == 1
    assert z2_correction([{"r": [1, 2], "kv": 125}], 5) == 0
    assert z2_correction([{"order": 25}, {"r": [0, 0], "kv": 5}], 5) == 4
    with pytest.raises(BSDError):
        z2_correction([{"order": 6}], 5)


def test_determinant_rational_and_cyclotomic():
    assert determinant([]) == 1
    assert determinant([[2, 1], [1, 3]]) == 5
    i = CycNumber.root(4)
    assert determinant([[i, 0], [0, i]]) == CycNumber.rational(-1)


def test_chi_bsd_examples():
    lam = LambdaSpec(5)
    assert chi_bsd([], 0, 10, 0, lam) == 0
    assert chi_bsd([[Fraction(10 * 3)]], 1, 10, 2, lam) == 2
    with pytest.raises(BSDError):
        chi_bsd([[0]], 1, 10, 0, lam)
    with pytest.raises(BSDError):
        chi_bsd([[1]], 2, 10, 0, lam)


def test_chi_bsd_scaling_by_group_order():
    lam = LambdaSpec(5, 2)
    gram = [[Fraction(3), Fraction(1)], [Fraction(1), Fraction(7)]]
    base = chi_bsd(gram, 2, 1, 0, lam)
    G = 25
    scaled = [[x * G for x in row] for row in gram]
    # det scales by |G|^r: v(det) gains r v(|G|), cancelled by the |G|^-r factor
    assert chi_bsd(scaled, 2, G, 0, lam) == base
    assert chi_bsd(scaled, 2, 1, 0, lam) - base == 2 * 2 * 2


def _toy(**kw):
    args = dict(p=5, s=1, dimA=1, g_K=0, degZ1=3, psi=PsiDegree(1), lam=LambdaSpec(5), G_order=1,
                degLieA=-2, lo=0)
    args.update(kw)
    return GlobalArithmeticInput(**args)


def test_predict_main_trivial_group_classical_shape():
    gram = [[Fraction(5 * 7)]]
    inp = _toy(gram=gram, r_alg=1, sha_length=3)
    pred = predict_main(inp)
    assert pred.exponent == vol_exponent(1, 0, 3, -2) + 1 + 3
    assert pred.exponent == sum(pred.breakdown.values())


def test_predict_main_toy_c2(c2f5):
    G = c2f5.cover.group
    sign = PsiSpec(G, [1 if g == G.identity else -1 for g in G.class_reps()])
    for s in (1, 2):
        inp = _toy(s=s, psi=sign, cover=c2f5.cover, G_order=2, lo=None)
        assert predict_main(inp).exponent == -4 * s + 1


def test_predict_main_rejects_wrong_lo(c2f5):
    G = c2f5.cover.group
    inp = _toy(psi=PsiSpec.trivial(G), cover=c2f5.cover, G_order=2, lo=5)
    with pytest.raises(BSDError):
        predict_main(inp)


def test_predict_main_ell_not_p():
    inp = _toy(lam=LambdaSpec(3), gram=[[Fraction(9)]], r_alg=1, sha_length=1, G_order=2)
    pred = predict_main(inp)
    assert pred.breakdown["volume"] == 0 and pred.exponent == 2 + 1


def test_predict_main_needs_weak_ramification():
    with pytest.raises(HypothesisError):
        predict_main(_toy(weakly_ramified=False))


def test_predict_coprime():
    inp = _toy(lam=LambdaSpec(3), G_order=2)
    assert predict_coprime(inp).exponent == predict_main(inp).exponent
    assert predict_coprime(_toy(lam=LambdaSpec(3), G_order=2, local_lengths=[2])).exponent == \
        predict_main(inp).exponent + 2
    assert predict_coprime(_toy(lam=LambdaSpec(3), G_order=2, tors_A=1, tors_At=1)).exponent == \
        predict_main(inp).exponent - 2
    with pytest.raises(HypothesisError):
        predict_coprime(_toy(lam=LambdaSpec(3), G_order=6))


# ------------------------------------------------------------ assumptions

def _ulmer_den(d, p):
    return [0] * d + [1] + [0] * (d - 1) + [(-432) % p]


def test_j_not_pth_power_for_ulmer_curve():
    assert not in_pth_powers([1], _ulmer_den(6, 5), 5)
    assert not in_pth_powers([1], _ulmer_den(4, 7), 7, 2)


def test_pth_powers_detected():
    assert in_pth_powers([0, 0, 0, 0, 0, 1], [1], 5)      # t^5
    assert in_pth_powers([1], [1, 0, 0, 0, 0, 0, 0, 1], 7)  # 1/(1 + t^7)
    assert not in_pth_powers([0, 1], [1], 5)


def test_assumption_sheet():
    sheet = {"ell": 5, "p": 5, "j_invariant": {"num": [1], "den": _ulmer_den(6, 5)},
             "local_orders": {"inf": 1},
             "flags": {"weakly_ramified": True, "semistable_over_L": True, "tame_at_non_semistable": True}}
    rep = assumption_check(sheet)
    assert rep["j_not_in_Lp"] and rep["mordell_weil_torsion"] == "pass"
    assert rep["local_components"] == {"inf": "pass"}
    assert rep["overall"] == "pass"
    sheet["j_invariant"] = {"num": [0, 0, 0, 0, 0, 1], "den": [1]}
    assert assumption_check(sheet)["mordell_weil_torsion"] == "inconclusive"
    sheet["local_orders"] = {"inf": 10}
    assert assumption_check(sheet)["overall"] == "fail"


def test_sha_monotonicity():
    for sha in range(4):
        a = predict_main(_toy(sha_length=sha)).exponent
        b = predict_main(_toy(sha_length=sha + 1)).exponent
        assert b == a + 1
