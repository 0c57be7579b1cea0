"""Local ramification data at one ramified point of a G-cover."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .fields import GF
from .groups import FiniteGroup, Subgroup


class RamificationError(ValueError):
    pass


def _is_elementary_abelian(S: Subgroup, p: int) -> bool:
    G = S.parent
    if any(G.element_orders[g] not in (1, p) for g in S.elements):
        return False
    return S.group.is_abelian()


class LocalDatum:
    """Inertia data I_w = P_w x| C_w at a point w, with the cotangent
    character theta_w given by its value on one generator of C_w.

    theta_value is an element of the default field F_{p^f_w} (int encoding).
    """

    def __init__(self, group: FiniteGroup, p: int, I: Subgroup, P: Subgroup, C: Subgroup,
                 theta_gen: int, theta_value: int, f_w: int,
                 filtration: Sequence[int] | None = None, label: str = ""):
        self.group = group
        self.p = p
        self.I, self.P, self.C = I, P, C
        self.theta_gen = int(theta_gen)
        self.theta_value = int(theta_value)
        self.f_w = int(f_w)
        self.filtration = None if filtration is None else tuple(int(x) for x in filtration)
        self.label = label
        self._validate()
        self._tau = self._theta_exponents()

    # ------------------------------------------------------------ checks
    def _validate(self) -> None:
        G, p = self.group, self.p
        I, P, C = self.I, self.P, self.C
        if not (P.issubset(I) and C.issubset(I)):
            raise RamificationError("P_w and C_w must lie in I_w")
        np_ = 1
        n = I.order
        while n % p == 0:
            n //= p
            np_ *= p
        if P.order != np_ or any(G.element_orders[g] % p and g != G.identity for g in P.elements):
            raise RamificationError("P_w is not the Sylow p-subgroup of I_w")
        if not P.is_normal_in(I):
            raise RamificationError("P_w is not normal in I_w")
        if len(P.intersect(C)) != 1 or P.order * C.order != I.order:
            raise RamificationError("C_w is not a complement to P_w")
        if not C.is_cyclic():
            raise RamificationError("C_w is not cyclic")
        if self.theta_gen not in C or G.element_orders[self.theta_gen] != C.order:
            raise RamificationError("theta generator does not generate C_w")
        if self.f_w < 1:
            raise RamificationError("residue degree must be positive")
        k = GF(p, self.f_w)
        if not 0 < self.theta_value < k.q:
            raise RamificationError("theta value must be a nonzero element of k_w")
        if k.order(self.theta_value) != C.order:
            raise RamificationError(
                f"theta has order {k.order(self.theta_value)}, expected |I_w/P_w| = {C.order}")
        if self.filtration is not None:
            f = self.filtration
            if any(a < b for a, b in zip(f, f[1:])):
                raise RamificationError("filtration must be non-increasing")
            if f[0] != I.order:
                raise RamificationError("|I_{w,0}| must equal |I_w|")
            if len(f) > 1 and f[1] != P.order:
                raise RamificationError("|I_{w,1}| must equal |P_w|")

    def _theta_exponents(self) -> dict[int, int]:
        """tau(g) mod e for every g in I_w: lift(theta(g)) = zeta_e^tau(g)."""
        G = self.group
        e = self.C.order
        k = GF(self.p, self.f_w)
        t1 = k.lift_exponent(self.theta_value, e) if e > 1 else 0
        tau_c = {}
        c = G.identity
        for i in range(e):
            tau_c[c] = (i * t1) % e
            c = G.mul(c, self.theta_gen)
        out = {}
        Pset = set(self.P.elements)
        for g in self.I.elements:
            for cc, t in tau_c.items():
                # g P = cc P  iff  cc^-1 g in P
                if G.mul(int(G.inv[cc]), g) in Pset:
                    out[g] = t
                    break
        return out

    # ------------------------------------------------------------ data
    @property
    def e(self) -> int:
        """|I_w/P_w|."""
        return self.C.order

    @property
    def wild(self) -> bool:
        return self.P.order > 1

    def tau(self, g: int) -> int:
        return self._tau[g]

    def theta_of(self, g: int) -> int:
        """theta_w(g) as an element of k_w."""
        k = GF(self.p, self.f_w)
        return k.pow(self.theta_value, self._power_in_C(g))

    def _power_in_C(self, g: int) -> int:
        G = self.group
        Pset = set(self.P.elements)
        c = G.identity
        for i in range(self.e):
            if G.mul(int(G.inv[c]), g) in Pset:
                return i
            c = G.mul(c, self.theta_gen)
        raise RamificationError("element not in I_w")

    def is_weakly_ramified(self) -> bool:
        if self.filtration is not None:
            return is_weakly_ramified(self.filtration)
        return self.structurally_weak()

    def structurally_weak(self) -> bool:
        """Necessary conditions for weak ramification visible in (P, C)."""
        if not self.wild:
            return True
        if not _is_elementary_abelian(self.P, self.p):
            return False
        G = self.group
        Cset = set(self.C.elements)
        for g in self.P.elements:
            if g == G.identity:
                continue
            conj = {G.conj(g, c) for c in self.C.elements}
            if len(conj & Cset) != 1:
                return False
        return True

    def conjugate(self, x: int, label: str = "") -> "LocalDatum":
        """Data at the point x.w: everything conjugated by x."""
        G = self.group
        return LocalDatum(G, self.p, self.I.conjugate(x), self.P.conjugate(x), self.C.conjugate(x),
                          G.conj(x, self.theta_gen), self.theta_value, self.f_w,
                          self.filtration, label or self.label)

    def with_complement(self, C: Subgroup) -> "LocalDatum":
        """The same datum with another complement; theta transported along I/P."""
        g = C.cyclic_generator()
        return LocalDatum(self.group, self.p, self.I, self.P, C, g, self.theta_of(g), self.f_w,
                          self.filtration, self.label)

    def to_json(self) -> dict:
        d = {
            "label": self.label,
            "I": list(self.I.elements),
            "P": list(self.P.elements),
            "C": list(self.C.elements),
            "theta": {"generator": self.theta_gen, "value": self.theta_value},
            "f_w": self.f_w,
        }
        if self.filtration is not None:
            d["filtration"] = list(self.filtration)
        return d


def make_local_datum(group: FiniteGroup, p: int, I_elements, theta_gen: int, theta_value: int,
                     f_w: int, filtration=None, label: str = "") -> LocalDatum:
    """Build a datum from I_w and a generator of the tame complement:
    P_w is the Sylow p-subgroup of I_w and C_w = <theta_gen>."""
    I = group.subgroup(I_elements)
    P_local = I.group.sylow(p)
    P = group.subgroup([I.group.embedding[g] for g in P_local.elements])
    C = group.generated([theta_gen])
    return LocalDatum(group, p, I, P, C, theta_gen, theta_value, f_w, filtration, label)


# ------------------------------------------------------------ stalks

@dataclass(frozen=True)
class BundleStalk:
    """Stalk exponents n_{w,i}; optional explicit l_{w,i} override them for
    the W-term (used when l comes from Neron data)."""

    n: tuple[int, ...]
    l: tuple[int, ...] | None = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def rank(self) -> int:
        return len(self.n) if self.l is None else len(self.l)


def is_weakly_ramified(filtration: Sequence[int] | None) -> bool:
    if filtration is None:
        raise RamificationError("missing filtration")
    f = list(filtration)
    if any(a < b for a, b in zip(f, f[1:])):
        raise RamificationError("filtration must be non-increasing")
    if len(f) < 3:
        return True
    return f[2] == 1


def check_ew(stalk: BundleStalk, dat: LocalDatum) -> bool:
    P = dat.P.order
    return all((n + 1) % P == 0 for n in stalk.n)


def l_exponents(stalk: BundleStalk, dat: LocalDatum) -> list[int]:
    if stalk.l is not None:
        return list(stalk.l)
    P, e = dat.P.order, dat.e
    out = []
    for n in stalk.n:
        if (1 + n) % P:
            raise RamificationError(f"stalk exponent {n} is not -1 mod |P_w| = {P}")
        out.append(((1 + n) // P - 1) % e)
    return out


def l_from_neron(r: Sequence[int], in_zprime: Sequence[bool] | bool, dat: LocalDatum) -> list[int]:
    e = dat.e
    if isinstance(in_zprime, bool):
        in_zprime = [in_zprime] * len(r)
    out = []
    for ri, z in zip(r, in_zprime):
        if not 0 <= ri < dat.I.order:
            raise RamificationError(f"r = {ri} out of range [0, |I_w|)")
        if not z:
            out.append(e - 1)
        elif ri != 0:
            out.append(ri - 1)
        else:
            out.append(e - 1)
    return out


def d_prime(r: Sequence[int]) -> int:
    return sum(1 for x in r if x == 0)


def descent_exponent(n: int, e: int) -> int:
    if e < 1:
        raise RamificationError("inertia order must be positive")
    return -1 + -((-(n + 1)) // e)
