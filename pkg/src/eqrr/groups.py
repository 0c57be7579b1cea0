"""Finite groups as multiplication tables, with subgroups and class data."""
from __future__ import annotations

from functools import cached_property
from math import gcd
from typing import Callable, Hashable, Sequence

import numpy as np

from .intutil import factorize, lcm

MAX_ORDER = 512


class GroupError(ValueError):
    pass


class FiniteGroup:
    """Elements are 0..n-1; ``table[a, b]`` is the index of a*b."""

    def __init__(self, table, generators: Sequence[int] | None = None,
                 labels: Sequence[str] | None = None, check: bool = True):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n):
            raise GroupError("multiplication table must be square")
        if n > MAX_ORDER:
            raise GroupError(f"group order {n} exceeds {MAX_ORDER}")
        self.order = n
        self.table = table
        ids = [e for e in range(n) if np.array_equal(table[e], np.arange(n))]
        if len(ids) != 1:
            raise GroupError("no unique identity element")
        self.identity = ids[0]
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        inv = np.full(n, -1, dtype=np.int64)
        for a in range(n):
            hits = np.nonzero(table[a] == self.identity)[0]
            if len(hits) != 1:
                raise GroupError(f"element {a} has no unique inverse")
            inv[a] = hits[0]
        self.inv = inv
        if check:
            self._check_axioms()
        if generators is None:
            generators = self._greedy_generators()
        self.generators = [int(g) for g in generators]
        if len(self.closure(self.generators)) != n:
            raise GroupError("generators do not generate the group")

    def _check_axioms(self) -> None:
        T = self.table
        n = self.order
        for row in T:
            if len(set(row.tolist())) != n:
                raise GroupError("table rows are not permutations")
        if n <= MAX_ORDER:
            # (ab)c = a(bc) for all triples, vectorised over c
            for a in range(n):
                left = T[T[a]]          # left[b, c] = (ab)c
                right = T[a][T]         # right[b, c] = a(bc)
                if not np.array_equal(left, right):
                    raise GroupError("multiplication is not associative")

    def _greedy_generators(self) -> list[int]:
        gens: list[int] = []
        span = {self.identity}
        for g in range(self.order):
            if g not in span:
                gens.append(g)
                span = self.closure(gens)
        return gens

    # ------------------------------------------------------------ basics
    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def conj(self, x: int, g: int) -> int:
        """x g x^-1."""
        return int(self.table[self.table[x, g], self.inv[x]])

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g = int(self.inv[g])
            k = -k
        out = self.identity
        for _ in range(k):
            out = int(self.table[out, g])
        return out

    @cached_property
    def element_orders(self) -> list[int]:
        out = []
        for g in range(self.order):
            k, x = 1, g
            while x != self.identity:
                x = int(self.table[x, g])
                k += 1
            out.append(k)
        return out

    def closure(self, gens: Sequence[int]) -> frozenset[int]:
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    @cached_property
    def exponent(self) -> int:
        return lcm(*self.element_orders)

    def p_regular_exponent(self, p: int) -> int:
        return lcm(*[o for o in self.element_orders if o % p])

    def is_abelian(self) -> bool:
        return np.array_equal(self.table, self.table.T)

    # ------------------------------------------------------------ classes
    @cached_property
    def classes(self) -> list[tuple[int, ...]]:
        """Conjugacy classes, each sorted, ordered by (element order, min index)."""
        seen: set[int] = set()
        out = []
        T, inv = self.table, self.inv
        for g in range(self.order):
            if g in seen:
                continue
            cl = sorted({int(T[T[x, g], inv[x]]) for x in range(self.order)})
            seen.update(cl)
            out.append(tuple(cl))
        out.sort(key=lambda c: (self.element_orders[c[0]], c[0]))
        return out

    @cached_property
    def class_index(self) -> list[int]:
        idx = [0] * self.order
        for i, cl in enumerate(self.classes):
            for g in cl:
                idx[g] = i
        return idx

    def p_regular_classes(self, p: int) -> list[int]:
        """Indices into ``classes`` of the p-regular classes (same order)."""
        return [i for i, cl in enumerate(self.classes) if self.element_orders[cl[0]] % p]

    def class_reps(self, p: int | None = None) -> list[int]:
        idx = range(len(self.classes)) if p is None else self.p_regular_classes(p)
        return [self.classes[i][0] for i in idx]

    # ------------------------------------------------------------ subgroups
    def subgroup(self, elements) -> "Subgroup":
        return Subgroup(self, elements)

    def generated(self, gens) -> "Subgroup":
        return Subgroup(self, self.closure(list(gens)))

    def whole(self) -> "Subgroup":
        return Subgroup(self, range(self.order))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, [self.identity])

    def sylow(self, p: int) -> "Subgroup":
        target = 1
        for r, e in factorize(self.order):
            if r == p:
                target = p ** e
        S = {self.identity}
        p_elements = [g for g in range(self.order) if _is_p_power(self.element_orders[g], p)]
        while len(S) < target:
            for x in p_elements:
                if x in S:
                    continue
                T = self.closure(sorted(S) + [x])
                if _is_p_power(len(T), p):
                    S = set(T)
                    break
            else:  # pragma: no cover - Sylow theory forbids this
                raise GroupError("Sylow search failed")
        return Subgroup(self, S)

    def cyclic_subgroups(self) -> list["Subgroup"]:
        seen = {}
        for g in range(self.order):
            H = self.closure([g])
            seen.setdefault(H, g)
        return [Subgroup(self, H) for H in sorted(seen, key=lambda s: (len(s), sorted(s)))]

    def to_json(self) -> dict:
        return {"order": self.order, "table": self.table.tolist(),
                "generators": self.generators, "labels": self.labels}

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


class Subgroup:
    """A subgroup of a parent group, stored as a sorted element tuple."""

    def __init__(self, parent: FiniteGroup, elements):
        els = tuple(sorted({int(e) for e in elements}))
        self.parent = parent
        self.elements = els
        self._set = frozenset(els)
        if parent.identity not in self._set:
            raise GroupError("subgroup must contain the identity")
        T = parent.table
        arr = np.array(els)
        if not set(T[np.ix_(arr, arr)].ravel().tolist()) <= self._set:
            raise GroupError("subset is not closed under multiplication")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self._set

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.parent is self.parent and other.elements == self.elements

    def __hash__(self):
        return hash(self.elements)

    def issubset(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def intersect(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, self._set & other._set)

    def conjugate(self, x: int) -> "Subgroup":
        return Subgroup(self.parent, [self.parent.conj(x, g) for g in self.elements])

    def is_normal_in(self, other: "Subgroup") -> bool:
        return all(self.parent.conj(x, g) in self._set for x in other.elements for g in self.elements)

    def is_cyclic(self) -> bool:
        return any(self.parent.element_orders[g] == self.order for g in self.elements)

    def cyclic_generator(self) -> int:
        for g in self.elements:
            if self.parent.element_orders[g] == self.order:
                return g
        raise GroupError("subgroup is not cyclic")

    def index_in(self, other: "Subgroup | FiniteGroup") -> int:
        n = other.order
        if n % self.order:
            raise GroupError("not a subgroup")
        return n // self.order

    @property
    def group(self) -> FiniteGroup:
        """This subgroup as a group in its own right; ``embedding`` maps back."""
        cache = self.parent.__dict__.setdefault("_subgroup_groups", {})
        G = cache.get(self.elements)
        if G is None:
            G = self._make_group()
            cache[self.elements] = G
        return G

    def _make_group(self) -> FiniteGroup:
        els = self.elements
        pos = {g: i for i, g in enumerate(els)}
        T = self.parent.table
        arr = np.array(els)
        lookup = np.full(self.parent.order, -1, dtype=np.int64)
        lookup[arr] = np.arange(len(els))
        local = lookup[T[np.ix_(arr, arr)]]
        gens = _subgroup_generators(self.parent, els)
        G = FiniteGroup(local, generators=[pos[g] for g in gens],
                        labels=[self.parent.labels[g] for g in els], check=False)
        G.embedding = list(els)
        G.local_index = pos
        G.parent_group = self.parent
        return G

    def to_json(self) -> list[int]:
        return list(self.elements)

    def __repr__(self):
        return f"Subgroup(order={self.order})"


def _subgroup_generators(G: FiniteGroup, els) -> list[int]:
    gens: list[int] = []
    span = frozenset([G.identity])
    for g in sorted(els, key=lambda x: (-G.element_orders[x], x)):
        if g not in span:
            gens.append(g)
            span = G.closure(gens)
        if len(span) == len(els):
            break
    return gens


def find_complement(I: Subgroup, P: Subgroup) -> Subgroup:
    """First cyclic C <= I with |C| = [I:P] and C meeting P trivially."""
    G = I.parent
    e = I.order // P.order
    for g in I.elements:
        if G.element_orders[g] != e:
            continue
        C = G.generated([g])
        if len(C.intersect(P)) == 1:
            return C
    raise GroupError("no cyclic complement found")


def all_complements(I: Subgroup, P: Subgroup) -> list[Subgroup]:
    G = I.parent
    e = I.order // P.order
    out = set()
    for g in I.elements:
        if G.element_orders[g] == e:
            C = G.generated([g])
            if len(C.intersect(P)) == 1:
                out.add(C)
    return sorted(out, key=lambda s: s.elements)


# ------------------------------------------------------------ constructors

def group_from_elements(gens: Sequence[Hashable], mul: Callable, identity: Hashable,
                        label: Callable[[Hashable], str] = str,
                        sort_key: Callable | None = None) -> tuple[FiniteGroup, list]:
    """Close gens under mul; returns the table group and the element list."""
    elems = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    if len(seen) >= MAX_ORDER:
                        raise GroupError(f"group order exceeds {MAX_ORDER}")
                    seen.add(y)
                    elems.append(y)
                    nxt.append(y)
        frontier = nxt
    if sort_key is not None:
        rest = sorted(elems[1:], key=sort_key)
        elems = [identity] + rest
    pos = {x: i for i, x in enumerate(elems)}
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            table[i, j] = pos[mul(x, y)]
    G = FiniteGroup(table, generators=[pos[g] for g in gens] or None,
                    labels=[label(x) for x in elems], check=n <= 128)
    return G, elems


def cyclic_group(n: int) -> FiniteGroup:
    table = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return FiniteGroup(table, generators=[1 % n] if n > 1 else [0],
                       labels=[f"g^{i}" for i in range(n)], check=False)


def abelian_group(orders: Sequence[int]) -> FiniteGroup:
    """Direct product of cyclic groups; element index is mixed radix."""
    orders = list(orders)
    n = 1
    for o in orders:
        n *= o
    coords = []
    for idx in range(n):
        c = []
        r = idx
        for o in reversed(orders):
            r, x = divmod(r, o)
            c.append(x)
        coords.append(tuple(reversed(c)))
    pos = {c: i for i, c in enumerate(coords)}
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(coords):
        for j, b in enumerate(coords):
            table[i, j] = pos[tuple((x + y) % o for x, y, o in zip(a, b, orders))]
    gens = []
    for k in range(len(orders)):
        c = [0] * len(orders)
        c[k] = 1 % orders[k]
        gens.append(pos[tuple(c)])
    return FiniteGroup(table, generators=gens, labels=[str(c) for c in coords], check=False)


def elementary_abelian(p: int, r: int) -> FiniteGroup:
    return abelian_group([p] * r)


def semidirect_cyclic(n: int, m: int, a: int) -> FiniteGroup:
    """C_n x| C_m with the generator of C_m acting on C_n by x -> a x (a^m = 1 mod n)."""
    if pow(a, m, n) != 1 % n or gcd(a, n) != 1:
        raise GroupError("invalid action")

    def mul(x, y):
        (u, i), (v, j) = x, y
        return ((u + pow(a, i, n) * v) % n, (i + j) % m)

    G, _ = group_from_elements([(1 % n, 0), (0, 1 % m)], mul, (0, 0),
                               label=lambda x: f"({x[0]},{x[1]})",
                               sort_key=lambda x: (x[1], x[0]))
    return G


def symmetric_group(n: int) -> FiniteGroup:
    ident = tuple(range(n))
    gens = [tuple([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))

    def mul(x, y):  # (xy)(i) = x(y(i))
        return tuple(x[y[i]] for i in range(n))

    G, _ = group_from_elements(gens, mul, ident, label=lambda x: str(list(x)),
                               sort_key=lambda x: x)
    return G


def direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    n = A.order * B.order
    table = np.empty((n, n), dtype=np.int64)
    for a1 in range(A.order):
        for b1 in range(B.order):
            i = a1 * B.order + b1
            table[i] = np.repeat(A.table[a1], B.order) * B.order + np.tile(B.table[b1], A.order)
    gens = [g * B.order + B.identity for g in A.generators] + [A.identity * B.order + h for h in B.generators]
    labels = [f"({A.labels[a]},{B.labels[b]})" for a in range(A.order) for b in range(B.order)]
    return FiniteGroup(table, generators=gens, labels=labels, check=False)
