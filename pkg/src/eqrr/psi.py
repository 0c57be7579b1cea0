"""psi-isotypic parts: theta-eigenspace multiplicities, m_{psi,w}(j), the
ramification correction ra_E(psi) and the lambda-adic valuations built from
them.

Characters are characteristic-zero class functions (``PsiSpec``); every
quantity needed here is a character computation, so no integral lattice is
ever chosen.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .characters import PsiSpec
from .classfun import ClassFunction, dual, inner_product, restrict_to_fp
from .cyclotomic import CycNumber
from .engine import BundleData, CoverData, EngineError, HypothesisError, _check_bundle
from .intutil import mult_order
from .ramification import LocalDatum, l_exponents


class PsiError(ValueError):
    pass


@dataclass(frozen=True)
class LambdaSpec:
    """A prime lambda of the coefficient field over ell, with ramification
    index e, so that v_lambda(ell) = e."""

    ell: int
    e: int = 1

    def __post_init__(self):
        if self.ell < 2:
            raise PsiError("ell must be a prime")
        if self.e < 1:
            raise PsiError("ramification index must be positive")

    @property
    def v_ell(self) -> int:
        return self.e

    def to_json(self) -> dict:
        return {"ell": self.ell, "e": self.e}


def psi_brauer(psi: PsiSpec, p: int) -> ClassFunction:
    """Restriction of psi to the p-regular classes: the Brauer character of
    any reduction of a lattice in V_psi."""
    G = psi.group
    return ClassFunction.from_function(G, p, psi)


def theta_multiplicities(psi: PsiSpec, dat: LocalDatum) -> dict[int, int]:
    """s mod |C_w| -> dim of the theta^s eigenspace of C_w on T_psi."""
    if psi.group is not dat.group:
        raise PsiError("psi and the local datum live on different groups")
    e = dat.e
    G = dat.group
    out = {}
    for s in range(e):
        acc = CycNumber.rational(0)
        c = G.identity
        for _ in range(e):
            acc = acc + psi(c) * CycNumber.root(e, (-s * dat.tau(c)) % e)
            c = G.mul(c, dat.theta_gen)
        acc = acc * Fraction(1, e)
        if not acc.is_rational() or acc.to_rational().denominator != 1 or acc.to_rational() < 0:
            raise PsiError(f"eigenspace multiplicity {acc} at s = {s} is not a non-negative integer")
        out[s] = int(acc.to_rational())
    if sum(out.values()) != psi.degree:
        raise PsiError("eigenspace dimensions do not add up to deg psi")
    return out


def m_psi_w(psi: PsiSpec, dat: LocalDatum, j: int, mult: dict[int, int] | None = None) -> int:
    """sum over a < [k_w:F_p] of dim T_psi[theta^{j p^a}]."""
    if mult is None:
        mult = theta_multiplicities(psi, dat)
    e = dat.e
    return sum(mult[(j * pow(dat.p, a, e)) % e] for a in range(dat.f_w)) if e > 1 \
        else dat.f_w * mult[0]


def ra_fraction(cover: CoverData, bundle: BundleData, psi: PsiSpec) -> Fraction:
    """ra_E(psi) as an exact rational, without the integrality check."""
    _check_bundle(cover, bundle)
    G = cover.group
    total = Fraction(0)
    for pl, st in zip(cover.places, bundle.stalks):
        d = pl.datum
        if d.e == 1:
            continue
        mult = theta_multiplicities(psi, d)
        m = {j: m_psi_w(psi, d, j, mult) for j in range(d.e)}
        wild = sum(j * m[(-j) % d.e] for j in range(1, d.e))
        for l in l_exponents(st, d):
            total += -d.P.order * wild + d.I.order * sum(m[j % d.e] for j in range(1, l + 1))
    return total / G.order


def ra(cover: CoverData, bundle: BundleData, psi: PsiSpec) -> int:
    val = ra_fraction(cover, bundle, psi)
    if val.denominator != 1:
        if not cover.is_weakly_ramified():
            raise HypothesisError("weak ramification", f"ra = {val} is not an integer")
        raise HypothesisError("wild congruence", f"ra = {val} is not an integer")
    return int(val)


def _intended_shape(cover: CoverData, bundle: BundleData) -> None:
    for pl, st in zip(cover.places, bundle.stalks):
        d = pl.datum
        if any(l != d.e - 1 for l in l_exponents(st, d)):
            raise HypothesisError("intended bundle shape", f"E is not pi^*F(-Z_L) at {pl.label!r}")


def ra_closed_tame(cover: CoverData, bundle: BundleData, psi: PsiSpec, simple: bool = False) -> Fraction:
    """Closed form of ra for a tame cover, deg psi = 1 and E = pi^*F(-Z_L).
    With ``simple`` the form valid when every |I_w| divides p - 1."""
    if not cover.is_tame():
        raise HypothesisError("tame", "the cover has wild ramification")
    if psi.degree != 1:
        raise HypothesisError("deg psi = 1", f"deg psi = {psi.degree}")
    _check_bundle(cover, bundle)
    _intended_shape(cover, bundle)
    p = cover.p
    total = Fraction(0)
    for pl in cover.places:
        d = pl.datum
        e = d.I.order
        mult = theta_multiplicities(psi, d)
        j0 = next(s for s, k in mult.items() if k)
        if simple:
            if (p - 1) % e:
                raise HypothesisError("|I_w| divides p-1", f"|I_w| = {e} at {pl.label!r}")
            total += j0 * d.f_w
            continue
        dw = mult_order(p, e) if e > 1 else 1
        if d.f_w % dw:
            raise EngineError("d_w does not divide [k_w:F_p]")
        inv = pow(p, -1, e) if e > 1 else 0
        total += Fraction(d.f_w, dw) * sum((j0 * pow(inv, a, e)) % e if e > 1 else 0 for a in range(dw))
    return total * Fraction(bundle.rank, cover.group.order)


def rho_psi_valuation(cover: CoverData, bundle: BundleData, psi: PsiSpec, lam: LambdaSpec) -> int:
    """v_lambda(rho^psi(chi^G_ell(E))); zero for ell != p by convention."""
    if lam.ell != cover.p:
        return 0
    for pl in cover.places:
        if not pl.datum.is_weakly_ramified():
            raise HypothesisError("weak ramification", f"I_w,2 != 1 at {pl.label!r}")
    neg_v = cover.s * psi.degree * bundle.chi(cover.genus) + ra(cover, bundle, psi)
    return -lam.e * neg_v


def m_psi_of_class(cls: ClassFunction, psi: PsiSpec) -> Fraction:
    """dim of Hom(T_psi, P) for the projective class of Brauer character cls."""
    val = inner_product(cls, psi_brauer(psi, cls.p))
    if not val.is_rational():
        raise PsiError("multiplicity is not rational")
    return val.to_rational()


def rho_psi_valuation_from_class(chi_k: ClassFunction, psi: PsiSpec, s: int, lam: LambdaSpec) -> int:
    """The same valuation read off a K_0(kG) class directly: view it over
    F_p, dualize, and take the psi-multiplicity."""
    if lam.ell != chi_k.p:
        return 0
    m = m_psi_of_class(dual(restrict_to_fp(chi_k, s)), psi)
    if m.denominator != 1:
        raise PsiError(f"psi-multiplicity {m} is not an integer")
    return -lam.e * int(m)


def torsion_euler_valuation(lengths: Sequence[tuple[int, int]]) -> int:
    """sum_i (-1)^(i+1) length(H^i) for a complex with torsion cohomology."""
    total = 0
    for i, length in lengths:
        if length < 0:
            raise PsiError("lengths must be non-negative")
        total += (-1) ** (i + 1) * length
    return total


def psi_torsion_valuation(m_value: int, lam: LambdaSpec) -> int:
    return -lam.e * m_value


__all__ = [
    "LambdaSpec", "PsiError", "psi_brauer", "theta_multiplicities", "m_psi_w", "ra", "ra_fraction",
    "ra_closed_tame", "rho_psi_valuation", "rho_psi_valuation_from_class", "m_psi_of_class",
    "torsion_euler_valuation", "psi_torsion_valuation",
]
