"""Characteristic-zero characters: the PsiSpec type and irreducible
character tables for abelian groups and for N x| C with N abelian normal and
C cyclic (Clifford theory), which covers every built-in group shape."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .cyclotomic import CycNumber
from .groups import FiniteGroup, GroupError, Subgroup


class CharacterError(ValueError):
    pass


class PsiSpec:
    """A (virtual) character psi of G in characteristic 0, one value per
    conjugacy class in ``G.classes`` order."""

    def __init__(self, group: FiniteGroup, values: Sequence, name: str = ""):
        self.group = group
        vals = []
        for v in values:
            vals.append(v if isinstance(v, CycNumber) else CycNumber.rational(Fraction(v)))
        if len(vals) != len(group.classes):
            raise CharacterError(f"expected {len(group.classes)} class values")
        self.values = tuple(vals)
        self.name = name
        deg = self.values[group.class_index[group.identity]]
        if not deg.is_rational() or deg.to_rational().denominator != 1:
            raise CharacterError("value at the identity must be an integer")
        self.degree = int(deg.to_rational())
        for v in self.values:
            if not v.is_integral():
                raise CharacterError("character values must be algebraic integers")

    def __call__(self, g: int) -> CycNumber:
        return self.values[self.group.class_index[g]]

    def __add__(self, other: "PsiSpec") -> "PsiSpec":
        if other.group is not self.group:
            raise CharacterError("characters of different groups")
        return PsiSpec(self.group, [a + b for a, b in zip(self.values, other.values)],
                       name=f"{self.name}+{other.name}")

    def __mul__(self, k: int) -> "PsiSpec":
        return PsiSpec(self.group, [a * k for a in self.values], name=f"{k}*{self.name}")

    __rmul__ = __mul__

    def inner(self, other: "PsiSpec") -> Fraction:
        G = self.group
        acc = CycNumber.rational(0)
        for cl, a, b in zip(G.classes, self.values, other.values):
            acc = acc + a * b.conjugate() * len(cl)
        acc = acc * Fraction(1, G.order)
        return acc.to_rational()

    @classmethod
    def trivial(cls, G: FiniteGroup) -> "PsiSpec":
        return cls(G, [1] * len(G.classes), name="trivial")

    @classmethod
    def regular(cls, G: FiniteGroup) -> "PsiSpec":
        return cls(G, [G.order if G.identity in cl else 0 for cl in G.classes], name="regular")

    def to_json(self) -> dict:
        return {"name": self.name, "degree": self.degree,
                "values": [v.to_json() for v in self.values]}


# ------------------------------------------------------------ construction

def _abelian_exponent_chars(G: FiniteGroup, elements: Sequence[int], E: int) -> list[dict[int, int]]:
    """Characters of the abelian subgroup on ``elements`` as maps g -> t with
    chi(g) = zeta_E^t (E a multiple of the exponent)."""
    els = set(elements)
    gens: list[int] = []
    span = {G.identity}
    for g in sorted(els, key=lambda x: (-G.element_orders[x], x)):
        if g not in span:
            gens.append(g)
            span = set(G.closure(gens))
    chars: list[dict[int, int]] = [{G.identity: 0}]
    sub = [G.identity]
    for g in gens:
        subset = set(sub)
        k, x = 1, g
        while x not in subset:
            x = G.mul(x, g)
            k += 1
        new_chars = []
        for chi in chars:
            t = chi[x]
            t0 = next(u for u in range(E) if (k * u - t) % E == 0)
            for j in range(k):
                tt = t0 + j * (E // k)
                ext = {}
                gp = G.identity
                for i in range(k):
                    for s in sub:
                        ext[G.mul(s, gp)] = (chi[s] + i * tt) % E
                    gp = G.mul(gp, g)
                new_chars.append(ext)
        chars = new_chars
        sub = list(chars[0].keys())
    return chars


def _derived_subgroup(G: FiniteGroup) -> Subgroup:
    comms = set()
    for a in range(G.order):
        for b in range(G.order):
            comms.add(G.mul(G.mul(a, b), G.mul(int(G.inv[a]), int(G.inv[b]))))
    return G.generated(sorted(comms))


def _induce_char(G: FiniteGroup, H_elems: set, phi: dict) -> list[CycNumber]:
    out = []
    nH = len(H_elems)
    for cl in G.classes:
        acc = CycNumber.rational(0)
        for y in cl:
            if y in H_elems:
                acc = acc + phi[y]
        out.append(acc * Fraction(G.order, nH * len(cl)) if not acc.is_zero() else acc)
    return out


def _decompositions(G: FiniteGroup):
    cands = []
    D = _derived_subgroup(G)
    cands.append(D)
    from .intutil import prime_divisors
    for p in prime_divisors(G.order):
        S = G.sylow(p)
        if S.is_normal_in(G.whole()):
            cands.append(S)
    for N in cands:
        Ng = N.group
        if not Ng.is_abelian():
            continue
        e = G.order // N.order
        for c in range(G.order):
            if G.element_orders[c] != e:
                continue
            C = G.generated([c])
            if len(C.intersect(N)) == 1:
                return N, C, c
    return None


def irreducible_characters(G: FiniteGroup) -> list[PsiSpec]:
    """Irreducible complex characters, sorted by (degree, value vector)."""
    E = G.exponent
    if G.is_abelian():
        chars = []
        for chi in _abelian_exponent_chars(G, range(G.order), E):
            chars.append([CycNumber.root(E, chi[cl[0]]) for cl in G.classes])
    else:
        dec = _decompositions(G)
        if dec is None:
            raise CharacterError("character tables are only built for abelian groups and N x| C shapes")
        N, C, c0 = dec
        EN = N.group.exponent
        nchars = _abelian_exponent_chars(G, N.elements, EN)
        c_list = [G.power(c0, k) for k in range(C.order)]
        seen: set = set()
        chars = []
        for chi in nchars:
            key = tuple(sorted(chi.items()))
            if key in seen:
                continue
            orbit_stab = []
            for k, c in enumerate(c_list):
                ci = int(G.inv[c])
                img = {n: chi[G.conj(ci, n)] for n in N.elements}
                seen.add(tuple(sorted(img.items())))
                if img == chi:
                    orbit_stab.append(k)
            step = min(k for k in orbit_stab if k > 0) if len(orbit_stab) > 1 else C.order
            stab_order = C.order // step
            c1 = G.power(c0, step)
            H_elems = set()
            base = {}
            for n in N.elements:
                for i in range(stab_order):
                    h = G.mul(n, G.power(c1, i))
                    H_elems.add(h)
                    base[h] = (n, i)
            for u in range(stab_order):
                phi = {h: CycNumber.root(EN, chi[n]) * CycNumber.root(stab_order, u * i)
                       for h, (n, i) in base.items()}
                chars.append(_induce_char(G, H_elems, phi))
    out = [PsiSpec(G, vals) for vals in chars]
    out.sort(key=lambda ch: (ch.degree, _sort_key(ch)))
    for i, ch in enumerate(out):
        ch.name = f"chi{i}"
    if len(out) != len(G.classes) or sum(ch.degree ** 2 for ch in out) != G.order:
        raise CharacterError("character table construction failed its sanity checks")
    return out


def _sort_key(ch: PsiSpec):
    return tuple(tuple(v.coerce(ch.group.exponent).c) for v in ch.values)


def linear_characters(G: FiniteGroup) -> list[PsiSpec]:
    return [ch for ch in irreducible_characters(G) if ch.degree == 1]


__all__ = ["PsiSpec", "irreducible_characters", "linear_characters", "CharacterError", "GroupError"]
