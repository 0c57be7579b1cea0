"""Closed-form equivariant Euler characteristics in K_0(kG) (x) Q.

All classes are Brauer class functions (see ``classfun``).  A cover is given
point by point: one ``Place`` per closed point of X_L in Z_L^ram, each with
its own inertia datum.  Points in one G-orbit share an ``orbit`` tag.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .classfun import ClassFunction, K0Class, induce, restrict, stable_equal
from .cyclotomic import CycNumber, sum_roots
from .groups import FiniteGroup, Subgroup
from .ramification import (BundleStalk, LocalDatum, RamificationError, check_ew,
                           descent_exponent, l_exponents)


class EngineError(ValueError):
    pass


class HypothesisError(EngineError):
    """A hypothesis of the closed formula fails; ``assumption`` names it."""

    def __init__(self, assumption: str, detail: str = ""):
        super().__init__(f"{assumption}: {detail}" if detail else assumption)
        self.assumption = assumption
        self.detail = detail


@dataclass
class Place:
    datum: LocalDatum
    orbit: str = ""

    @property
    def label(self) -> str:
        return self.datum.label


@dataclass
class CoverData:
    """A G-cover X_L -> X over k = F_{p^s}; ``places`` lists the ramified
    closed points of X_L (one entry per point, not per orbit)."""

    group: FiniteGroup
    p: int
    s: int
    genus: int
    places: list[Place]
    name: str = ""

    def __post_init__(self):
        for pl in self.places:
            d = pl.datum
            if d.group is not self.group or d.p != self.p:
                raise EngineError(f"place {pl.label!r} belongs to another group or characteristic")
            if d.f_w % self.s:
                raise EngineError(f"place {pl.label!r}: k_w must contain k")
            if d.I.order == 1:
                raise EngineError(f"place {pl.label!r} is unramified")

    @property
    def q(self) -> int:
        return self.p ** self.s

    def residue_degree(self, pl: Place) -> int:
        """[k_w : k]."""
        return pl.datum.f_w // self.s

    def orbits(self) -> dict[str, list[Place]]:
        out: dict[str, list[Place]] = {}
        for i, pl in enumerate(self.places):
            out.setdefault(pl.orbit or f"#{i}", []).append(pl)
        return out

    def base_degree(self, orbit: list[Place]) -> Fraction:
        """deg v of the image of an orbit: deg w * e_w * |orbit| / |G|."""
        pl = orbit[0]
        return Fraction(self.residue_degree(pl) * pl.datum.I.order * len(orbit), self.group.order)

    def is_weakly_ramified(self) -> bool:
        return all(pl.datum.is_weakly_ramified() for pl in self.places)

    def is_tame(self) -> bool:
        return all(not pl.datum.wild for pl in self.places)


@dataclass
class BundleData:
    """Stalk data of a G-bundle E at every ramified point (same order as
    ``cover.places``) plus chi_k(E^G), or deg E^G to derive it."""

    rank: int
    stalks: list[BundleStalk]
    chi_EG: int | None = None
    deg_EG: int | None = None
    deg_E: int | None = None
    meta: dict = field(default_factory=dict)

    def chi(self, genus: int) -> int:
        if self.chi_EG is not None:
            return self.chi_EG
        if self.deg_EG is None:
            raise EngineError("bundle needs chi_k(E^G) or deg(E^G)")
        return chi_hrr(self.rank, genus, self.deg_EG)


def _check_bundle(cover: CoverData, bundle: BundleData, need_ew: bool = True) -> None:
    if len(bundle.stalks) != len(cover.places):
        raise EngineError("one stalk per ramified point is required")
    for pl, st in zip(cover.places, bundle.stalks):
        if st.rank != bundle.rank:
            raise EngineError(f"stalk at {pl.label!r} has rank {st.rank}, expected {bundle.rank}")
        if need_ew and st.l is None and pl.datum.wild and not check_ew(st, pl.datum):
            raise HypothesisError("wild congruence", f"stalk exponents {list(st.n)} at {pl.label!r} "
                                  f"are not -1 mod |P_w| = {pl.datum.P.order}")


def _check_weak(cover: CoverData) -> None:
    for pl in cover.places:
        if not pl.datum.is_weakly_ramified():
            raise HypothesisError("weak ramification", f"I_w,2 != 1 at {pl.label!r}")


# ------------------------------------------------------------ local classes

_MW_CACHE: dict = {}


def line_character(dat: LocalDatum, j: int, s: int | None = None) -> ClassFunction:
    """Brauer character on I_w of the k_w-line theta^j viewed over F_{p^s}
    (s = None means over F_p): sum of the [k_w : F_{p^s}] Frobenius twists."""
    Ig = dat.I.group
    s = s or 1
    deg = dat.f_w // s
    Q = dat.p ** s
    e = dat.e

    def value(r: int) -> CycNumber:
        t = dat.tau(Ig.embedding[r])
        return sum_roots(e, [(t * j * pow(Q, a, e)) % e for a in range(deg)]) if e > 1 \
            else CycNumber.rational(deg)

    return ClassFunction.from_function(Ig, dat.p, value)


def mw_projective_class(dat: LocalDatum, j: int, s: int | None = None) -> K0Class:
    """Brauer class of M_w(j) = Ind_{C_w}^{I_w}(theta^j) on I_w, over F_{p^s}."""
    key = (id(dat), j % dat.e, s or 1)
    hit = _MW_CACHE.get(key)
    if hit is not None and hit[0] is dat:
        return hit[1]
    G = dat.group
    Ig = dat.I.group
    s_ = s or 1
    deg = dat.f_w // s_
    Q = dat.p ** s_
    e = dat.e
    Cset = set(dat.C.elements)
    Ilist = dat.I.elements
    vals = []
    for r in Ig.class_reps(dat.p):
        g = Ig.embedding[r]
        acc = CycNumber.rational(0)
        for x in Ilist:
            y = G.conj(int(G.inv[x]), g)
            if y in Cset:
                t = dat.tau(y)
                acc = acc + (sum_roots(e, [(t * j * pow(Q, a, e)) % e for a in range(deg)])
                             if e > 1 else CycNumber.rational(deg))
        vals.append(acc * Fraction(1, dat.C.order))
    out = K0Class(Ig, dat.p, vals, provenance="from-projective-module")
    _MW_CACHE[key] = (dat, out)
    return out


def _ind(dat: LocalDatum, phi: ClassFunction) -> ClassFunction:
    return induce(phi, dat.group)


# ------------------------------------------------------------ the formula

def n_pi(cover: CoverData) -> K0Class:
    G = cover.group
    acc = K0Class.zero(G, cover.p)
    for pl in cover.places:
        d = pl.datum
        if d.e == 1:
            continue
        inner = K0Class.zero(d.I.group, d.p)
        for j in range(1, d.e):
            inner = inner + mw_projective_class(d, j, cover.s) * j
        acc = acc + _ind(d, inner) * Fraction(d.P.order, G.order)
    return K0Class.of(acc)


def w_g(cover: CoverData, bundle: BundleData) -> K0Class:
    _check_bundle(cover, bundle)
    G = cover.group
    acc = K0Class.zero(G, cover.p)
    for pl, st in zip(cover.places, bundle.stalks):
        d = pl.datum
        ls = l_exponents(st, d)
        if not any(ls):
            continue
        inner = K0Class.zero(d.I.group, d.p)
        for l in ls:
            for j in range(1, l + 1):
                inner = inner + mw_projective_class(d, -j, cover.s)
        acc = acc + _ind(d, inner) * Fraction(d.I.order, G.order)
    return K0Class.of(acc)


def chi_hrr(rank: int, g_K: int, degEG: int) -> int:
    return rank * (1 - g_K) + degEG


def regular_class(G: FiniteGroup, p: int) -> K0Class:
    return K0Class.of(ClassFunction.regular(G, p), provenance="from-projective-module")


def euler_char(cover: CoverData, bundle: BundleData, check_hypotheses: bool = True) -> K0Class:
    """-rk [N(pi)] + [W_G(E)] + chi_k(E^G) [kG], with integrality asserted."""
    if check_hypotheses:
        _check_weak(cover)
    _check_bundle(cover, bundle)
    G = cover.group
    chi = -bundle.rank * n_pi(cover) + w_g(cover, bundle) + regular_class(G, cover.p) * bundle.chi(cover.genus)
    out = K0Class.of(chi, provenance="formal-combination")
    dim = out.at_identity()
    if dim.denominator != 1:
        raise EngineError(f"Euler characteristic has non-integral dimension {dim}")
    mult = projective_multiplicities(out)
    if mult is not None:
        bad = [m for m in mult if not m.is_rational() or m.to_rational().denominator != 1]
        if bad:
            raise EngineError("Euler characteristic has non-integral projective multiplicities")
    return out


def pullback_twist_chi(cover: CoverData, rkF: int, degF: int, degZ: Fraction | int) -> K0Class:
    """The intended-case shape E = pi^*F(-Z_L); degZ = deg Z on X (Z must
    contain the image of every ramified point)."""
    G = cover.group
    ram_deg = sum(cover.base_degree(o) for o in cover.orbits().values())
    if Fraction(degZ) < ram_deg:
        raise EngineError(f"deg Z = {degZ} is smaller than the degree {ram_deg} of the branch locus")
    acc = K0Class.zero(G, cover.p)
    for pl in cover.places:
        d = pl.datum
        inner = K0Class.zero(d.I.group, d.p)
        for j in range(1, d.e):
            inner = inner + mw_projective_class(d, -j, cover.s) * (j * d.P.order)
        acc = acc + _ind(d, inner)
    acc = acc * Fraction(rkF, G.order)
    c = Fraction(rkF) * (1 - cover.genus - Fraction(degZ)) + degF
    if c.denominator != 1:
        raise EngineError("deg Z must be an integer")
    return K0Class.of(acc + regular_class(G, cover.p) * int(c))


def descended_degree(cover: CoverData, n_by_place: Sequence[int]) -> Fraction:
    """deg D_K for the ramified part of a G-stable divisor D_L = sum n_w w
    (n constant on orbits): sum over orbits of n_v * deg v."""
    pos = {id(pl): i for i, pl in enumerate(cover.places)}
    total = Fraction(0)
    for orbit in cover.orbits().values():
        ns = {n_by_place[pos[id(pl)]] for pl in orbit}
        if len(ns) != 1:
            raise EngineError("divisor is not constant on an orbit")
        n = ns.pop()
        total += descent_exponent(n, orbit[0].datum.I.order) * cover.base_degree(orbit)
    return total


def divisor_bundle(cover: CoverData, n_by_place: Sequence[int], unramified_deg_K: int = 0,
                   rank: int = 1, degF: int = 0) -> BundleData:
    """Data of (pi^*F)(D_L) where D_L has coefficient n_by_place[i] at the
    i-th ramified point plus an unramified part pulled back from a divisor
    of degree ``unramified_deg_K`` on X."""
    G = cover.group
    deg_ram_L = sum(n * cover.residue_degree(pl) for n, pl in zip(n_by_place, cover.places))
    deg_D_K = descended_degree(cover, n_by_place) + unramified_deg_K
    if deg_D_K.denominator != 1:
        raise EngineError("descended divisor has fractional degree")
    deg_E = rank * (deg_ram_L + G.order * unramified_deg_K) + G.order * degF
    deg_EG = rank * int(deg_D_K) + degF
    stalks = [BundleStalk(tuple([n] * rank)) for n in n_by_place]
    return BundleData(rank, stalks, deg_EG=deg_EG, deg_E=deg_E)


# ------------------------------------------------------------ decomposition

def _quotient_chars(G: FiniteGroup, p: int):
    """Irreducible Brauer characters of G when G has a normal Sylow
    p-subgroup P: the ordinary irreducibles of a complement H ~ G/P."""
    from .characters import CharacterError, irreducible_characters
    S = G.sylow(p)
    if not S.is_normal_in(G.whole()):
        return None
    H = None
    n = G.order // S.order
    # a complement: the subgroup generated by p-regular elements if it has order |G/P|
    preg = [g for g in range(G.order) if G.element_orders[g] % p]
    cand = G.generated(preg)
    if cand.order == n:
        H = cand
    if H is None:
        return None
    try:
        chars = irreducible_characters(H.group)
    except CharacterError:
        return None
    Pset = set(S.elements)
    Hset = H.elements
    Hloc = H.group.local_index
    out = []
    for ch in chars:
        vals = []
        for r in G.class_reps(p):
            h = next(x for x in Hset if G.mul(int(G.inv[x]), r) in Pset)
            vals.append(ch(Hloc[h]))
        out.append(ClassFunction(G, p, vals))
    return out


def projective_multiplicities(cls: ClassFunction) -> list[CycNumber] | None:
    """Multiplicities (over a splitting field) of the projective
    indecomposables in a class, when G has a normal Sylow p-subgroup with a
    complement whose character table is available; otherwise None."""
    G, p = cls.group, cls.p
    cache = G.__dict__.setdefault("_brauer_irr", {})
    if p not in cache:
        cache[p] = _quotient_chars(G, p)
    irr = cache[p]
    if irr is None:
        return None
    from .classfun import inner_product
    return [inner_product(cls, phi) for phi in irr]


# ------------------------------------------------------------ identities

def degree_identity(cover: CoverData, bundle: BundleData, degE: int | None = None,
                    degEG: int | None = None) -> dict:
    """deg E - |G| deg E^G against sum_w [k_w:k] sum_i (|P_w|(l+1) - 1)."""
    degE = bundle.deg_E if degE is None else degE
    degEG = bundle.deg_EG if degEG is None else degEG
    if degE is None or degEG is None:
        raise EngineError("degree identity needs deg E and deg E^G")
    G = cover.group
    lhs = degE - G.order * degEG
    rhs = 0
    rhs_n: int | None = 0
    for pl, st in zip(cover.places, bundle.stalks):
        d = pl.datum
        f = cover.residue_degree(pl)
        for l in l_exponents(st, d):
            rhs += f * (d.P.order * (l + 1) - 1)
        if rhs_n is not None and st.l is None and all(0 <= n < d.I.order for n in st.n):
            rhs_n += f * sum(st.n)
        else:
            rhs_n = None
    return {"lhs": lhs, "rhs": rhs, "rhs_normalized": rhs_n,
            "holds": lhs == rhs and (rhs_n is None or rhs_n == lhs)}


def kock_cross_check(cover: CoverData, bundle: BundleData, chi: K0Class | None = None) -> dict:
    """Compare the Brauer-character formula built from the graded pieces
    m^j E_w / m^{j+1} E_w = sum_i theta^{j - n_i} with ``euler_char`` away
    from the identity.  The [kG] coefficient c' is reported, never asserted:
    once as quoted and once re-derived from Riemann-Hurwitz."""
    G = cover.group
    for pl in cover.places:
        if pl.datum.filtration is None:
            raise EngineError(f"missing filtration at {pl.label!r}")
    for st in bundle.stalks:
        if st.l is not None:
            raise EngineError("graded pieces need stalk exponents n, not l")
    if chi is None:
        chi = euler_char(cover, bundle)
    acc = ClassFunction.zero(G, cover.p)
    for pl, st in zip(cover.places, bundle.stalks):
        d = pl.datum
        if d.e == 1:
            continue
        inner = ClassFunction.zero(d.I.group, d.p)
        for j in range(1, d.e):
            for n in st.n:
                inner = inner + line_character(d, j - n, cover.s) * j
        acc = acc + _ind(d, inner) * Fraction(d.P.order, G.order)
    kock = -acc
    mism = []
    for r, a, b in zip(chi.reps, chi.values, kock.values):
        if r != G.identity and a != b:
            mism.append(G.labels[r])
    c_quoted = c_rh = None
    if bundle.deg_E is not None:
        quoted = Fraction(0)
        rh = Fraction(0)
        for pl in cover.places:
            d = pl.datum
            fil = d.filtration
            higher = sum(x - 1 for x in fil[2:])
            f = cover.residue_degree(pl)
            quoted += f * ((d.e - 1) * (d.P.order + 1) + higher)
            rh += f * ((d.e + 1) * (d.P.order - 1) + higher)
        base = Fraction(bundle.deg_E, G.order)
        c_quoted = 1 + cover.genus + base - Fraction(bundle.rank, 2 * G.order) * quoted
        c_rh = bundle.rank * (1 - cover.genus) + base - Fraction(bundle.rank, 2 * G.order) * rh
    dim_rh = None if c_rh is None else c_rh * G.order + kock.at_identity()
    return {
        "agree_off_identity": not mism,
        "mismatched_classes": mism,
        "c_prime_quoted": None if c_quoted is None else str(c_quoted),
        "c_prime_hurwitz": None if c_rh is None else str(c_rh),
        "identity_value_hurwitz": None if dim_rh is None else str(dim_rh),
        "identity_value_engine": str(chi.at_identity()),
    }


# ------------------------------------------------------------ Mackey

def p_regular_cyclic_subgroups(G: FiniteGroup, p: int) -> list[Subgroup]:
    return [H for H in G.cyclic_subgroups() if H.order > 1 and H.order % p]


def restrict_cover(cover: CoverData, H: Subgroup) -> tuple[CoverData, list[int]]:
    """X_L -> X_L/H for a p-regular subgroup H: the points with
    H_w = H n I_w != 1, each tame with C = H_w.  Returns the H-cover and the
    indices of the retained places."""
    G = cover.group
    if H.order % cover.p == 0:
        raise EngineError("restriction is only defined for p-regular subgroups")
    Hg = H.group
    loc = Hg.local_index
    places = []
    kept = []
    for i, pl in enumerate(cover.places):
        d = pl.datum
        Hw = H.intersect(d.I)
        if Hw.order == 1:
            continue
        h = Hw.cyclic_generator()
        I_loc = Hg.subgroup([loc[x] for x in Hw.elements])
        dat = LocalDatum(Hg, cover.p, I_loc, Hg.trivial(), I_loc, loc[h], d.theta_of(h), d.f_w,
                         filtration=(Hw.order, 1), label=d.label)
        places.append(Place(dat, orbit=""))
        kept.append(i)
    sub = CoverData(Hg, cover.p, cover.s, 0, places, name=f"{cover.name}|H")
    return sub, kept


def mackey_check(cover: CoverData, bundle: BundleData | None = None) -> list[dict]:
    """stable_equal(Res_H [N], [N_H]) and the same for [W] for every
    p-regular cyclic H != 1."""
    G = cover.group
    N = n_pi(cover)
    W = w_g(cover, bundle) if bundle is not None and all(st.l is None for st in bundle.stalks) else None
    out = []
    for H in p_regular_cyclic_subgroups(G, cover.p):
        sub, kept = restrict_cover(cover, H)
        okN, cN = stable_equal(restrict(N, H), n_pi(sub))
        rec = {"H": [G.labels[g] for g in H.elements], "N": okN, "cN": cN}
        if W is not None:
            stalks = []
            for i in kept:
                d_H = sub.places[len(stalks)].datum
                st = bundle.stalks[i]
                stalks.append(BundleStalk(tuple(n % d_H.I.order for n in st.n)))
            sb = BundleData(bundle.rank, stalks, chi_EG=0)
            okW, cW = stable_equal(restrict(W, H), w_g(sub, sb))
            rec.update({"W": okW, "cW": cW})
        out.append(rec)
    return out


__all__ = [
    "EngineError", "HypothesisError", "Place", "CoverData", "BundleData", "line_character",
    "mw_projective_class", "n_pi", "w_g", "chi_hrr", "euler_char", "pullback_twist_chi",
    "descended_degree", "divisor_bundle", "projective_multiplicities", "degree_identity",
    "kock_cross_check", "restrict_cover", "mackey_check", "p_regular_cyclic_subgroups",
    "regular_class", "RamificationError",
]
