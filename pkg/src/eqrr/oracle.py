"""Brute-force ground truth on the projective line.

A finite group of affine maps x -> a x + b over F_q acts on P^1; we compute
the ramification data of the cover P^1 -> P^1/G, the Riemann-Roch spaces of
G-stable divisors with their G-action, H^1 through Serre duality, and the
local lattices m_w^{-n} / pi_v m_w^{-n} at ramified points.

Functions act on the left by (sigma . f)(x) = f(sigma^{-1} x).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import linalg as LA
from . import polys as PL
from .classfun import ClassFunction, K0Class, stable_equal
from .engine import (BundleData, CoverData, EngineError, HypothesisError, Place, degree_identity,
                     divisor_bundle, euler_char, kock_cross_check, mackey_check)
from .fields import Field, field_of_size
from .groups import FiniteGroup, find_complement, group_from_elements
from .modules import MatrixModule, brauer_character, is_projective
from .ramification import LocalDatum

INF = "inf"


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class AffineMap:
    a: int
    b: int

    def compose(self, other: "AffineMap", F: Field) -> "AffineMap":
        """self o other."""
        return AffineMap(F.mul(self.a, other.a), F.add(F.mul(self.a, other.b), self.b))

    def inverse(self, F: Field) -> "AffineMap":
        ai = F.inv(self.a)
        return AffineMap(ai, F.neg(F.mul(ai, self.b)))

    def __call__(self, x: int, F: Field) -> int:
        return F.add(F.mul(self.a, x), self.b)


# ------------------------------------------------------------ points

Point = object  # INF or a tuple of coefficients of a monic irreducible polynomial


def rational_point(F: Field, alpha: int) -> tuple[int, ...]:
    return (F.neg(alpha), 1)


def point_degree(P) -> int:
    return 1 if P == INF else len(P) - 1


def point_image(F: Field, sigma: AffineMap, P):
    """sigma(P): the zeros of f o sigma^{-1}, made monic."""
    if P == INF:
        return INF
    inv = sigma.inverse(F)
    return tuple(PL.monic(F, PL.compose_affine(F, list(P), inv.a, inv.b)))


def _check_point(F: Field, P) -> None:
    if P == INF:
        return
    if len(P) < 2 or P[-1] != 1 or not PL.is_irreducible(F, list(P)):
        raise OracleError(f"{list(P)} is not a monic irreducible polynomial")


# ------------------------------------------------------------ covers

class AffineCover:
    """The group generated by affine maps over F_q, with its ramification."""

    def __init__(self, q: int, generators: Sequence[AffineMap | tuple[int, int]]):
        self.q = q
        self.F = F = field_of_size(q)
        gens = [g if isinstance(g, AffineMap) else AffineMap(int(g[0]), int(g[1])) for g in generators]
        for g in gens:
            if not (0 < g.a < q and 0 <= g.b < q):
                raise OracleError(f"invalid affine map {g}")
        ident = AffineMap(1, 0)
        self.group, self.elements = group_from_elements(
            gens, lambda x, y: x.compose(y, F), ident,
            label=lambda m: f"({m.a},{m.b})", sort_key=lambda m: (m.a != 1, m.a, m.b))
        self.index = {m: i for i, m in enumerate(self.elements)}
        self.generators = gens
        self.cover = self._build()

    # ---------------------------------------------------------- structure
    def act(self, g: int, P):
        return point_image(self.F, self.elements[g], P)

    def orbit(self, P) -> list:
        seen = []
        for g in range(self.group.order):
            Q = self.act(g, P)
            if Q not in seen:
                seen.append(Q)
        return sorted(seen, key=_point_key)

    def stabilizer(self, P) -> list[int]:
        return [g for g in range(self.group.order) if self.act(g, P) == P]

    def ramified_points(self) -> list:
        F = self.F
        pts = set()
        if self.group.order > 1:
            pts.add(INF)
        for m in self.elements:
            if m.a != 1:
                alpha = F.div(m.b, F.sub(1, m.a))
                pts.add(rational_point(F, alpha))
        return sorted(pts, key=_point_key)

    def _theta(self, P, g: int) -> int:
        """Action of g on the cotangent line at a fixed point P."""
        m = self.elements[g]
        return m.a if P == INF else self.F.inv(m.a)

    def _build(self) -> CoverData:
        G, F = self.group, self.F
        places = []
        self.points = self.ramified_points()
        orbit_of = {}
        for P in self.points:
            if P not in orbit_of:
                for Q in self.orbit(P):
                    orbit_of[Q] = _point_label(P)
        for P in self.points:
            stab = self.stabilizer(P)
            I = G.subgroup(stab)
            if P == INF:
                P_w = G.subgroup([g for g in stab if self.elements[g].a == 1])
                filt = (I.order, P_w.order, 1)
            else:
                P_w = G.trivial()
                filt = (I.order, 1)
            C = find_complement(I, P_w)
            c = C.cyclic_generator()
            dat = LocalDatum(G, F.p, I, P_w, C, c, self._theta(P, c), F.n, filtration=filt,
                             label=_point_label(P))
            places.append(Place(dat, orbit=orbit_of[P]))
        return CoverData(G, F.p, F.n, 0, places, name=f"q={self.q} gens={[(g.a, g.b) for g in self.generators]}")

    def filtration_by_valuation(self, P) -> list[int]:
        """|I_{w,s}| from the valuation of sigma(t) - t, computed from scratch."""
        F = self.F
        stab = self.stabilizer(P)
        vals = []
        for g in stab:
            m = self.elements[g]
            if m == AffineMap(1, 0):
                continue
            if P == INF:
                # sigma.t - t = t (a - 1 + b t) / (1 - b t)
                vals.append(1 if m.a != 1 else 2)
            else:
                vals.append(1)  # sigma.t = t / a with a != 1
        top = max(vals, default=0)
        return [1 + sum(1 for v in vals if v >= s + 1) for s in range(top + 1)]

    def place_index(self, P) -> int:
        return self.points.index(P)


def build_cover(q: int, generators) -> AffineCover:
    return AffineCover(q, generators)


def _point_key(P):
    return (0,) if P == INF else (1, len(P)) + tuple(P)


def _point_label(P) -> str:
    if P == INF:
        return "inf"
    return "x" if P == (0, 1) else "poly" + "".join(f"_{c}" for c in P)


# ------------------------------------------------------------ divisors

class GDivisor:
    """A divisor on P^1 over F_q: closed point -> coefficient."""

    def __init__(self, F: Field, coeffs: dict):
        self.F = F
        self.coeffs = {}
        for P, n in coeffs.items():
            P = INF if P == INF else tuple(int(c) for c in P)
            _check_point(F, P)
            if n:
                self.coeffs[P] = int(n)

    @classmethod
    def from_orbits(cls, cover: AffineCover, entries: Iterable[tuple[object, int]]) -> "GDivisor":
        d = {}
        for P, n in entries:
            P = INF if P == INF else tuple(P)
            _check_point(cover.F, P)
            for Q in cover.orbit(P):
                d[Q] = d.get(Q, 0) + int(n)
        return cls(cover.F, d)

    @property
    def degree(self) -> int:
        return sum(n * point_degree(P) for P, n in self.coeffs.items())

    def __call__(self, P) -> int:
        return self.coeffs.get(P, 0)

    def is_stable(self, cover: AffineCover) -> bool:
        return all(self(cover.act(g, P)) == n for P, n in self.coeffs.items()
                   for g in cover.group.generators)

    def scaled(self, k: int, shift_inf: int = 0) -> "GDivisor":
        d = {P: k * n for P, n in self.coeffs.items()}
        if shift_inf:
            d[INF] = d.get(INF, 0) + shift_inf
        return GDivisor(self.F, d)

    def to_json(self) -> list:
        return [{"point": INF if P == INF else list(P), "n": n}
                for P, n in sorted(self.coeffs.items(), key=lambda kv: _point_key(kv[0]))]


def _finite_parts(D: GDivisor):
    """A = prod f_P^{n_P} over n_P > 0, B = prod f_P^{-n_P} over n_P < 0."""
    F = D.F
    A, B = [1], [1]
    for P, n in D.coeffs.items():
        if P == INF:
            continue
        for _ in range(abs(n)):
            if n > 0:
                A = PL.mul(F, A, list(P))
            else:
                B = PL.mul(F, B, list(P))
    return A, B


def rr_space(D: GDivisor) -> list[tuple[list[int], list[int]]]:
    """Basis of L(D) as (numerator, denominator) pairs x^i B / A, i = 0..deg D."""
    A, B = _finite_parts(D)
    out = []
    for i in range(D.degree + 1):
        num = PL.mul(D.F, [0] * i + [1], B)
        out.append((num, A))
    _verify_rr_basis(D, out)
    return out


def _valuation_at(F: Field, f, P) -> int:
    if P == INF:
        return -PL.deg(f)
    v = 0
    f = PL.trim(list(f))
    while True:
        q_, r = PL.divmod_poly(F, f, list(P))
        if PL.trim(r) != []:
            return v
        f = q_
        v += 1


def _verify_rr_basis(D: GDivisor, basis) -> None:
    F = D.F
    for num, den in basis:
        for P, n in D.coeffs.items():
            v = _valuation_at(F, num, P) - _valuation_at(F, den, P)
            if P == INF:
                v = PL.deg(den) - PL.deg(num)
            if v + n < 0:
                raise OracleError("Riemann-Roch basis fails a valuation check")
        if INF not in D.coeffs and PL.deg(num) > PL.deg(den):
            raise OracleError("Riemann-Roch basis has a pole at infinity")


def _rr_matrices(cover: AffineCover, D: GDivisor, twist: bool = False) -> list[np.ndarray]:
    """Matrices of the generators on L(D) (twist: on L(D) dx)."""
    F = cover.F
    A, B = _finite_parts(D)
    d = D.degree + 1
    mats = []
    for gi in cover.group.generators:
        m = cover.elements[gi]
        inv = m.inverse(F)
        ai, bi = inv.a, inv.b
        # A(ai x + bi) = c_A A(x) by stability of D
        cA = F.pow(ai, PL.deg(A))
        cB = F.pow(ai, PL.deg(B))
        if PL.compose_affine(F, A, ai, bi) != PL.scale(F, A, cA) or \
                PL.compose_affine(F, B, ai, bi) != PL.scale(F, B, cB):
            raise OracleError("divisor is not G-stable")
        scal = F.div(cB, cA)
        if twist:
            scal = F.mul(scal, ai)
        M = np.zeros((max(d, 0), max(d, 0)), dtype=np.int64)
        for i in range(d):
            # (ai x + bi)^i = sum_k C(i,k) ai^k bi^(i-k) x^k
            for k in range(i + 1):
                c = F.from_int(comb(i, k))
                if c:
                    M[k, i] = F.mul(scal, F.mul(c, F.mul(F.pow(ai, k), F.pow(bi, i - k))))
        mats.append(M)
    return mats


def h0_with_action(cover: AffineCover, D: GDivisor) -> MatrixModule:
    if not D.is_stable(cover):
        raise OracleError("divisor is not G-stable")
    d = max(D.degree + 1, 0)
    return MatrixModule(cover.group, cover.F, _rr_matrices(cover, D), d)


def h1_with_action(cover: AffineCover, D: GDivisor) -> MatrixModule:
    """H^1(O(D)) = L(-D - 2 inf) dx dual, with the contragredient action."""
    if not D.is_stable(cover):
        raise OracleError("divisor is not G-stable")
    K = D.scaled(-1, shift_inf=-2)
    d = max(K.degree + 1, 0)
    omega = MatrixModule(cover.group, cover.F, _rr_matrices(cover, K, twist=True), d)
    return omega.contragredient() if d else omega


def serre_dimension_check(D: GDivisor) -> bool:
    """dim H^1(D) two ways: through L(K - D) and through Riemann-Roch."""
    K = D.scaled(-1, shift_inf=-2)
    h0 = max(D.degree + 1, 0)
    h1 = max(K.degree + 1, 0)
    return h0 - h1 == D.degree + 1


# ------------------------------------------------------------ comparison

def bundle_from_divisor(cover: AffineCover, D: GDivisor) -> BundleData:
    ns = [D(P) for P in cover.points]
    unram = Fraction(0)
    seen = set()
    G = cover.group
    for P, n in D.coeffs.items():
        if P in cover.points or P in seen:
            continue
        orb = cover.orbit(P)
        seen.update(orb)
        unram += Fraction(n * point_degree(P) * len(orb), G.order)
    if unram.denominator != 1:
        raise OracleError("unramified part does not descend to an integral divisor")
    return divisor_bundle(cover.cover, ns, int(unram))


def euler_brauer(cover: AffineCover, D: GDivisor) -> tuple[ClassFunction, MatrixModule, MatrixModule]:
    H0 = h0_with_action(cover, D)
    H1 = h1_with_action(cover, D)
    return brauer_character(H0) - brauer_character(H1), H0, H1


def ew_holds(cover: AffineCover, D: GDivisor) -> bool:
    return all((D(P) + 1) % pl.datum.P.order == 0 for P, pl in zip(cover.points, cover.cover.places))


def verify_cover(cover: AffineCover, D: GDivisor, expect_ew: bool = True,
                 engine_divisor: GDivisor | None = None) -> dict:
    """Compare the brute-force Brauer character of H^0 - H^1 with the closed
    formula, plus the side identities.  ``engine_divisor`` feeds the formula
    a different divisor than the cohomology (used to exercise mismatches)."""
    cd = cover.cover
    rep = {"divisor": D.to_json(), "degree": D.degree}
    ew = ew_holds(cover, D)
    rep["ew"] = ew
    if engine_divisor is not None:
        rep["engine_divisor"] = engine_divisor.to_json()
        ew = ew and ew_holds(cover, engine_divisor)
    if expect_ew and not ew:
        raise HypothesisError("wild congruence", "divisor coefficient at a wild point is not -1 mod |P_w|")
    lhs, H0, H1 = euler_brauer(cover, D)
    rep["h0"] = H0.dim
    rep["h1"] = H1.dim
    rep["riemann_roch"] = H0.dim - H1.dim == D.degree + 1 and serre_dimension_check(D)
    bundle = bundle_from_divisor(cover, D if engine_divisor is None else engine_divisor)
    rep["deg_EG"] = bundle.deg_EG
    rep["oracle"] = lhs.to_json()
    if not ew:
        rep["match"] = None
        return rep
    rhs = euler_char(cd, bundle)
    rep["engine"] = rhs.to_json()
    rep["match"] = lhs == rhs
    rep["diff"] = lhs.diff(rhs)
    rep["dimension"] = str(rhs.at_identity())
    rep["degree_identity"] = degree_identity(cd, bundle)
    mk = mackey_check(cd, bundle)
    rep["mackey"] = all(r["N"] and r.get("W", True) for r in mk)
    rep["mackey_subgroups"] = len(mk)
    both = H0.direct_sum(H1) if H0.dim and H1.dim else (H0 if H0.dim else H1)
    rep["projective"] = is_projective(both) if both.dim else True
    rep["kock"] = kock_cross_check(cd, bundle, rhs)
    rep["ok"] = bool(rep["match"] and rep["riemann_roch"] and rep["degree_identity"]["holds"]
                     and rep["mackey"] and rep["projective"] and rep["kock"]["agree_off_identity"])
    return rep


# ------------------------------------------------------------ local freeness

def _gen_binom(m: int, k: int) -> int:
    """C(m, k) for any integer m."""
    num = 1
    for i in range(k):
        num *= m - i
    den = 1
    for i in range(1, k + 1):
        den *= i
    return num // den


def local_module(cover: AffineCover, P, n: int) -> MatrixModule:
    """m_w^{-n} / pi_v m_w^{-n} as a k[I_w]-module, basis t^{-n+r}, r < e_w."""
    F = cover.F
    G = cover.group
    stab = cover.stabilizer(P)
    I = G.subgroup(stab)
    Ig = I.group
    e = I.order
    if e == 1:
        raise OracleError("point is unramified")
    exps = [-n + r for r in range(e)]
    mats = []
    for loc in range(Ig.order):
        m = cover.elements[Ig.embedding[loc]]
        M = np.zeros((e, e), dtype=np.int64)
        for col, i in enumerate(exps):
            if P == INF:
                # sigma.t^i = a^i t^i (1 - b t)^(-i) = a^i sum_k C(i+k-1, k) b^k t^(i+k)
                ai = F.pow(m.a, i % (F.q - 1))
                for k in range(e - col):
                    c = F.from_int(_gen_binom(i + k - 1, k))
                    if c:
                        M[col + k, col] = F.mul(ai, F.mul(c, F.pow(m.b, k)))
            else:
                M[col, col] = F.pow(F.inv(m.a), i % (F.q - 1))
        mats.append(M)
    return MatrixModule(Ig, F, mats, e, all_elements=True)


def local_freeness_check(cover: AffineCover, P, n: int) -> bool:
    return is_projective(local_module(cover, P, n))


__all__ = [
    "INF", "OracleError", "AffineMap", "AffineCover", "build_cover", "GDivisor", "rr_space",
    "h0_with_action", "h1_with_action", "bundle_from_divisor", "euler_brauer", "verify_cover",
    "local_module", "local_freeness_check", "rational_point", "point_image", "ew_holds",
    "serre_dimension_check",
]
