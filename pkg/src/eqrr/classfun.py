"""Brauer class functions and K_0(kG) (x) Q classes.

A class function is a vector of CycNumbers indexed by the p-regular classes
of a group, in the group's fixed class order.  By injectivity of the Cartan
map into Brauer characters, two K_0 classes are equal exactly when their
class functions are.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .cyclotomic import CycNumber
from .groups import FiniteGroup, Subgroup


class ClassFunction:
    provenance = "formal-combination"

    def __init__(self, group: FiniteGroup, p: int, values: Sequence):
        self.group = group
        self.p = p
        self.m = group.p_regular_exponent(p)
        idx = group.p_regular_classes(p)
        if len(values) != len(idx):
            raise ValueError(f"expected {len(idx)} class values, got {len(values)}")
        vals = []
        for v in values:
            if not isinstance(v, CycNumber):
                v = CycNumber.rational(Fraction(v))
            vals.append(v.coerce(self.m) if v.m != self.m else v)
        self.values = tuple(vals)
        self._class_pos = {c: i for i, c in enumerate(idx)}

    # ------------------------------------------------------------ builders
    @classmethod
    def zero(cls, group: FiniteGroup, p: int):
        return cls(group, p, [0] * len(group.p_regular_classes(p)))

    @classmethod
    def from_function(cls, group: FiniteGroup, p: int, fn):
        """Evaluate fn at each p-regular class representative."""
        return cls(group, p, [fn(r) for r in group.class_reps(p)])

    @classmethod
    def regular(cls, group: FiniteGroup, p: int):
        """Brauer character of kG: |G| at 1, zero elsewhere."""
        return cls.from_function(group, p, lambda g: group.order if g == group.identity else 0)

    # ------------------------------------------------------------ access
    @property
    def reps(self) -> list[int]:
        return self.group.class_reps(self.p)

    def __call__(self, g: int) -> CycNumber:
        ci = self.group.class_index[g]
        pos = self._class_pos.get(ci)
        if pos is None:
            raise ValueError(f"element {g} is not {self.p}-regular")
        return self.values[pos]

    def at_identity(self) -> Fraction:
        return self(self.group.identity).to_rational()

    def _same(self, other):
        if not isinstance(other, ClassFunction):
            raise TypeError("expected a class function")
        if other.group is not self.group or other.p != self.p:
            raise ValueError("class functions live on different groups")

    def _new(self, values):
        return ClassFunction(self.group, self.p, values)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._same(other)
        return self._new([a + b for a, b in zip(self.values, other.values)])

    __radd__ = __add__

    def __sub__(self, other):
        self._same(other)
        return self._new([a - b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return self._new([-a for a in self.values])

    def __mul__(self, c):
        if isinstance(c, ClassFunction):
            self._same(c)
            return self._new([a * b for a, b in zip(self.values, c.values)])
        return self._new([a * c for a in self.values])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return other.group is self.group and other.p == self.p and self.values == other.values

    def __hash__(self):
        return hash((id(self.group), self.p, len(self.values)))

    def galois(self, k: int):
        return self._new([v.galois(k % self.m if self.m > 1 else 1) for v in self.values])

    def is_rational_valued(self) -> bool:
        return all(v.is_rational() for v in self.values)

    def diff(self, other) -> list[dict]:
        """Per-class differences (for mismatch reports)."""
        self._same(other)
        out = []
        for r, a, b in zip(self.reps, self.values, other.values):
            if a != b:
                out.append({"class": self.group.labels[r], "left": a.to_json(), "right": b.to_json()})
        return out

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "class_reps": [self.group.labels[r] for r in self.reps],
            "values": [v.to_json() for v in self.values],
        }

    def __repr__(self):
        return f"ClassFunction({list(self.values)})"


class K0Class(ClassFunction):
    """A class function known (or asserted) to come from K_0(kG) (x) Q."""

    def __init__(self, group, p, values, provenance: str = "formal-combination"):
        super().__init__(group, p, values)
        self.provenance = provenance

    @classmethod
    def of(cls, cf: ClassFunction, provenance: str = "formal-combination") -> "K0Class":
        return cls(cf.group, cf.p, cf.values, provenance)

    def _new(self, values):
        return K0Class(self.group, self.p, values)

    def check_identity_denominator(self) -> bool:
        v = self.at_identity()
        return self.group.order % v.denominator == 0

    def to_json(self) -> dict:
        d = super().to_json()
        d["provenance"] = self.provenance
        return d


# ------------------------------------------------------------ operations

def _check_sub(H: FiniteGroup, G: FiniteGroup | None = None) -> FiniteGroup:
    parent = getattr(H, "parent_group", None)
    if parent is None:
        raise ValueError("the subgroup class function must live on Subgroup.group")
    if G is not None and parent is not G:
        raise ValueError("mismatched group ids")
    return parent


def induce(phi: ClassFunction, G: FiniteGroup | None = None) -> ClassFunction:
    """Ind_H^G phi for phi on H = Subgroup.group."""
    H = phi.group
    G = _check_sub(H, G)
    emb = H.embedding
    local = H.local_index
    out = []
    for ci in G.p_regular_classes(phi.p):
        cl = G.classes[ci]
        acc = CycNumber.rational(0, phi.m)
        hits = 0
        for y in cl:
            j = local.get(y)
            if j is not None:
                acc = acc + phi(j)
                hits += 1
        if hits:
            acc = acc * Fraction(G.order, H.order * len(cl))
        out.append(acc)
    del emb
    cls = K0Class if isinstance(phi, K0Class) else ClassFunction
    return cls(G, phi.p, out)


def induce_from(H: Subgroup, phi: ClassFunction) -> ClassFunction:
    if phi.group is not H.group:
        raise ValueError("class function does not live on this subgroup")
    return induce(phi, H.parent)


def restrict(phi: ClassFunction, H: Subgroup | FiniteGroup) -> ClassFunction:
    Hg = H.group if isinstance(H, Subgroup) else H
    _check_sub(Hg, phi.group)
    emb = Hg.embedding
    vals = [phi(emb[r]) for r in Hg.class_reps(phi.p)]
    cls = K0Class if isinstance(phi, K0Class) else ClassFunction
    return cls(Hg, phi.p, vals)


def dual(phi: ClassFunction) -> ClassFunction:
    G = phi.group
    vals = [phi(int(G.inv[r])) for r in G.class_reps(phi.p)]
    cls = K0Class if isinstance(phi, K0Class) else ClassFunction
    return cls(G, phi.p, vals)


restrict_class = restrict
dual_class = dual
induce_class_function = induce_from


def stable_equal(a: ClassFunction, b: ClassFunction) -> tuple[bool, int | None]:
    """a = b + c[kG]?  Returns (True, c) or (False, None)."""
    a._same(b)
    G = a.group
    for r, x, y in zip(a.reps, a.values, b.values):
        if r != G.identity and x != y:
            return False, None
    d = a.at_identity() - b.at_identity()
    if d.denominator != 1 or d.numerator % G.order:
        return False, None
    return True, int(d.numerator) // G.order


def inner_product(a: ClassFunction, b: ClassFunction) -> CycNumber:
    """(1/|G|) sum over p-regular g of a(g) * conj(b(g))."""
    a._same(b)
    G = a.group
    acc = CycNumber.rational(0, a.m)
    for ci, x, y in zip(G.p_regular_classes(a.p), a.values, b.values):
        acc = acc + x * y.conjugate() * len(G.classes[ci])
    return acc * Fraction(1, G.order)


def restrict_to_fp(phi: ClassFunction, s: int) -> ClassFunction:
    """Brauer character of a k-module viewed over F_p, k = F_{p^s}."""
    out = phi
    for a in range(1, s):
        out = out + phi.galois(phi.p ** a)
    return out
