"""Assembly of the predicted lambda-adic valuation of the leading term
L_U(A, psi) from arithmetic inputs.

Geometry-derived quantities (Neron exponents r_{w,i}, component groups,
torsion orders, Sha lengths, height pairings) are inputs; nothing here is
computed from a curve equation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import polys
from .characters import PsiSpec
from .cyclotomic import CycNumber
from .engine import BundleData, CoverData, HypothesisError
from .fields import GF
from .intutil import valuation
from .psi import LambdaSpec, ra
from .ramification import BundleStalk, d_prime, l_from_neron
from .valuation import v_lambda


class BSDError(ValueError):
    pass


# ------------------------------------------------------------ local factors

def vol_exponent(dimA: int, g_K: int, degZ1: int, degLieA: int) -> int:
    """log_{|k|} vol_{Z_1}(A/K)."""
    return dimA * (1 - g_K - degZ1) + degLieA


def lie_degree_elliptic(degDelta: int) -> int:
    if degDelta % 12:
        raise BSDError(f"deg Delta = {degDelta} is not divisible by 12")
    return -degDelta // 12


def lie_bundle(cover: CoverData, dimA: int, r_by_place: Sequence[Sequence[int]] | None = None,
               in_zprime: Sequence[bool] | bool = False) -> BundleData:
    """Stalk data of Lie(A_L)(-Z_L): l_{w,i} from the Neron exponents r_{w,i}
    (all places outside Z' when r is omitted)."""
    stalks = []
    for i, pl in enumerate(cover.places):
        r = [0] * dimA if r_by_place is None else list(r_by_place[i])
        if len(r) != dimA:
            raise BSDError(f"need {dimA} Neron exponents at {pl.label!r}")
        z = in_zprime if isinstance(in_zprime, bool) else in_zprime[i]
        stalks.append(BundleStalk(tuple([-1] * dimA), tuple(l_from_neron(r, z, pl.datum))))
    return BundleData(dimA, stalks, chi_EG=0)


def lo_value(cover: CoverData, dimA: int, psi: PsiSpec, r_by_place=None, in_zprime=False) -> int:
    """log_p lo_{Z_L}(A, psi) = ra of Lie(A_L)(-Z_L)."""
    return ra(cover, lie_bundle(cover, dimA, r_by_place, in_zprime), psi)


def _log_p(n: int, p: int) -> int:
    if n < 1 or p ** valuation(n, p) != n:
        raise BSDError(f"{n} is not a power of {p}")
    return valuation(n, p)


def z2_correction(entries: Sequence[dict], p: int) -> int:
    """log_p of prod_{v in Z_2} |Lie(A_L)(k_v~)^{G_v~}|.  Each entry gives
    either ``order`` directly or ``r`` (Neron exponents) and ``kv`` = |k_v|."""
    total = 0
    for ent in entries:
        if "order" in ent:
            total += _log_p(int(ent["order"]), p)
        elif "r" in ent:
            total += d_prime(ent["r"]) * _log_p(int(ent["kv"]), p)
        else:
            raise BSDError("Z_2 entry needs 'order' or 'r' and 'kv'")
    return total


# ------------------------------------------------------------ chi^BSD

def determinant(M: Sequence[Sequence]):
    """Exact determinant over Q or a cyclotomic field (Gaussian elimination)."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise BSDError("Gram matrix must be square")
    if n == 0:
        return Fraction(1)
    cyc = any(isinstance(x, CycNumber) for row in M for x in row)
    conv = (lambda x: x if isinstance(x, CycNumber) else CycNumber.rational(Fraction(x))) if cyc \
        else Fraction
    A = [[conv(x) for x in row] for row in M]

    def zero(x):
        return x.is_zero() if cyc else x == 0

    det = conv(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if not zero(A[r][c])), None)
        if piv is None:
            return conv(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c]
        inv = conv(1) / A[c][c]
        for r in range(c + 1, n):
            if not zero(A[r][c]):
                f = A[r][c] * inv
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return det


def chi_bsd(gram: Sequence[Sequence], r_alg: int, G_order: int, sha_length: int, lam: LambdaSpec) -> int:
    """v_lambda(Reg / |G|^r_alg) + length(Sha)."""
    if len(gram) != r_alg:
        raise BSDError(f"Gram matrix has size {len(gram)}, expected r_alg = {r_alg}")
    if sha_length < 0:
        raise BSDError("Sha length must be non-negative")
    det = determinant(gram)
    if (det.is_zero() if isinstance(det, CycNumber) else det == 0):
        raise BSDError("singular Gram matrix: the height pairing is degenerate")
    return v_lambda(det, lam) - r_alg * v_lambda(G_order, lam) + sha_length


# ------------------------------------------------------------ prediction

@dataclass
class GlobalArithmeticInput:
    p: int
    s: int
    dimA: int
    g_K: int
    degZ1: int
    psi: PsiSpec
    lam: LambdaSpec
    G_order: int
    gram: list = field(default_factory=list)
    r_alg: int = 0
    sha_length: int = 0
    degLieA: int | None = None
    degDelta: int | None = None
    z2: list = field(default_factory=list)
    lo: int | None = None
    cover: CoverData | None = None
    neron_r: list | None = None
    in_zprime: list | bool = False
    weakly_ramified: bool | None = None
    tame_over_z2: bool | None = None
    tors_A: int = 0
    tors_At: int = 0
    local_lengths: list = field(default_factory=list)

    def lie_degree(self) -> int:
        if self.degLieA is not None:
            return self.degLieA
        if self.degDelta is not None:
            if self.dimA != 1:
                raise BSDError("deg Delta only determines deg Lie for elliptic curves")
            return lie_degree_elliptic(self.degDelta)
        raise BSDError("need deg Lie(A) or deg Delta")


@dataclass
class Prediction:
    lam: LambdaSpec
    exponent: int
    breakdown: dict

    def to_json(self) -> dict:
        return {"lambda": self.lam.to_json(), "exponent": self.exponent,
                "breakdown": dict(sorted(self.breakdown.items()))}


def _lo_exponent(inp: GlobalArithmeticInput) -> int:
    if inp.cover is not None:
        val = lo_value(inp.cover, inp.dimA, inp.psi, inp.neron_r, inp.in_zprime)
        if inp.lo is not None and inp.lo != val:
            raise BSDError(f"supplied lo exponent {inp.lo} disagrees with the computed {val}")
        return val
    if inp.lo is None:
        raise BSDError("need cover data or an lo exponent")
    return inp.lo


def _check_p_hypotheses(inp: GlobalArithmeticInput) -> None:
    weak = inp.weakly_ramified
    if weak is None and inp.cover is not None:
        weak = inp.cover.is_weakly_ramified()
    if weak is False:
        raise HypothesisError("weak ramification", "ell = p needs L/K weakly ramified everywhere")
    if inp.tame_over_z2 is False:
        raise HypothesisError("tame over Z_2", "ell = p needs L/K tamely ramified over Z_2")


def predict_main(inp: GlobalArithmeticInput) -> Prediction:
    lam = inp.lam
    b: dict = {}
    if lam.ell == inp.p:
        _check_p_hypotheses(inp)
        vp = lam.e
        b["volume"] = inp.psi.degree * vol_exponent(inp.dimA, inp.g_K, inp.degZ1, inp.lie_degree()) * inp.s * vp
        b["z2_correction"] = -inp.psi.degree * z2_correction(inp.z2, inp.p) * vp
        b["lo"] = _lo_exponent(inp) * vp
    else:
        b["volume"] = b["z2_correction"] = b["lo"] = 0
    chi = chi_bsd(inp.gram, inp.r_alg, inp.G_order, inp.sha_length, lam)
    b["sha"] = inp.sha_length
    b["g_power"] = -inp.r_alg * v_lambda(inp.G_order, lam)
    b["regulator"] = chi - b["sha"] - b["g_power"]
    return Prediction(lam, sum(b.values()), b)


def predict_coprime(inp: GlobalArithmeticInput) -> Prediction:
    if inp.G_order % inp.lam.ell == 0:
        raise HypothesisError("ell coprime to |G|", f"ell = {inp.lam.ell} divides |G| = {inp.G_order}")
    lengths = [inp.tors_A, inp.tors_At, *inp.local_lengths]
    if any(x < 0 for x in lengths):
        raise BSDError("lengths must be non-negative")
    pred = predict_main(inp)
    b = dict(pred.breakdown)
    b["torsion_A"] = -inp.tors_A
    b["torsion_At"] = -inp.tors_At
    b["local_components"] = sum(inp.local_lengths)
    return Prediction(inp.lam, sum(b.values()), b)


# ------------------------------------------------------------ assumptions

def in_pth_powers(num: Sequence[int], den: Sequence[int], p: int, n: int = 1) -> bool:
    """Is num/den (coefficients in F_{p^n}, low degree first) a p-th power
    in F_{p^n}(t)?  Over a perfect field this holds iff the derivative
    vanishes, i.e. num' den = num den'."""
    F = GF(p, n)
    N = polys.trim([int(c) % F.q for c in num])
    D = polys.trim([int(c) % F.q for c in den])
    if not D:
        raise BSDError("zero denominator")
    lhs = polys.mul(F, polys.derivative(F, N), D)
    rhs = polys.mul(F, N, polys.derivative(F, D))
    return polys.trim(polys.sub(F, lhs, rhs)) == []


def assumption_check(sheet: dict) -> dict:
    """Evaluate the torsion-freeness conditions from supplied data.  Each
    entry is 'pass', 'fail' or 'inconclusive'."""
    ell = int(sheet["ell"])
    p = int(sheet["p"])
    out: dict = {}

    def coprime(n):
        return "pass" if int(n) % ell else "fail"

    tors = sheet.get("torsion_orders", {})
    mw = []
    for key in ("A", "At"):
        if key in tors:
            mw.append(coprime(tors[key]))
    j = sheet.get("j_invariant")
    if ell == p and j is not None:
        pth = in_pth_powers(j["num"], j["den"], p, int(j.get("n", 1)))
        out["j_not_in_Lp"] = not pth
        mw.append("pass" if not pth else "inconclusive")
    if mw:
        out["mordell_weil_torsion"] = "fail" if "fail" in mw else ("inconclusive" if "inconclusive" in mw
                                                                   else "pass")
    else:
        out["mordell_weil_torsion"] = "inconclusive"
    locs = sheet.get("local_orders", {})
    out["local_components"] = {str(k): coprime(v) for k, v in sorted(locs.items())}
    if ell == p:
        flags = sheet.get("flags", {})
        res = {}
        for name in ("weakly_ramified", "semistable_over_L", "tame_at_non_semistable"):
            if name in flags:
                res[name] = "pass" if flags[name] else "fail"
            else:
                res[name] = "inconclusive"
        out["p_conditions"] = res
    vals = [out["mordell_weil_torsion"], *out["local_components"].values(),
            *out.get("p_conditions", {}).values()]
    out["overall"] = "fail" if "fail" in vals else ("inconclusive" if "inconclusive" in vals else "pass")
    return out


__all__ = [
    "BSDError", "vol_exponent", "lie_degree_elliptic", "lie_bundle", "lo_value", "z2_correction",
    "determinant", "chi_bsd", "GlobalArithmeticInput", "Prediction", "predict_main",
    "predict_coprime", "in_pth_powers", "assumption_check",
]
