"""Matrix representations over finite fields: Brauer characters and
projectivity (freeness over a Sylow subgroup, cross-checked by Higman's
trace criterion when the dimension is small)."""
from __future__ import annotations

from functools import cached_property

import numpy as np

from . import linalg as LA
from .classfun import ClassFunction, K0Class
from .cyclotomic import sum_roots
from .fields import GF, Field
from .groups import FiniteGroup, Subgroup
from .intutil import lcm, mult_order

HIGMAN_MAX_DIM = 16


class ModuleError(ValueError):
    pass


class MatrixModule:
    """A kG-module given by one matrix per generator (or per element)."""

    def __init__(self, group: FiniteGroup, field: Field, gen_mats, dim: int | None = None,
                 all_elements: bool = False):
        self.group = group
        self.field = field
        mats = [np.asarray(m, dtype=np.int64) for m in gen_mats]
        if dim is None:
            dim = mats[0].shape[0] if mats else 0
        self.dim = dim
        if all_elements:
            if len(mats) != group.order:
                raise ModuleError("need one matrix per group element")
            self._all = mats
            self.gen_mats = [mats[g] for g in group.generators]
            self._verify_all()
        else:
            if len(mats) != len(group.generators):
                raise ModuleError("need one matrix per generator")
            self.gen_mats = mats
            self._all = None
        for m in self.gen_mats:
            if m.shape != (dim, dim):
                raise ModuleError("matrix has the wrong shape")

    def _verify_all(self) -> None:
        G, F = self.group, self.field
        if not np.array_equal(self._all[G.identity], np.eye(self.dim, dtype=np.int64)):
            raise ModuleError("identity does not act trivially")
        for g in range(G.order):
            for s in G.generators:
                lhs = LA.ff_matmul(F, self._all[g], self._all[s])
                if not np.array_equal(lhs, self._all[G.mul(g, s)]):
                    raise ModuleError("matrices do not define a representation")

    @property
    def element_matrices(self) -> list[np.ndarray]:
        if self._all is None:
            self._all = self._expand()
        return self._all

    def _expand(self) -> list[np.ndarray]:
        """Matrices of all elements by BFS over words; consistency is checked
        whenever an element is reached twice."""
        G, F, d = self.group, self.field, self.dim
        mats: list = [None] * G.order
        mats[G.identity] = np.eye(d, dtype=np.int64)
        frontier = [G.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s, M in zip(G.generators, self.gen_mats):
                    y = G.mul(x, s)
                    prod = LA.ff_matmul(F, mats[x], M) if d else mats[x]
                    if mats[y] is None:
                        mats[y] = prod
                        nxt.append(y)
                    elif not np.array_equal(mats[y], prod):
                        raise ModuleError("generator matrices violate a relation of the group")
            frontier = nxt
        # remaining relations: every product x*s was visited above
        return mats

    def matrix(self, g: int) -> np.ndarray:
        return self.element_matrices[g]

    def restrict(self, H: Subgroup) -> "MatrixModule":
        Hg = H.group
        return MatrixModule(Hg, self.field, [self.matrix(g) for g in Hg.embedding], self.dim,
                            all_elements=True)

    def direct_sum(self, other: "MatrixModule") -> "MatrixModule":
        if other.group is not self.group or other.field is not self.field:
            raise ModuleError("modules over different groups or fields")
        d = self.dim + other.dim
        mats = []
        for g in range(self.group.order):
            M = np.zeros((d, d), dtype=np.int64)
            M[:self.dim, :self.dim] = self.matrix(g)
            M[self.dim:, self.dim:] = other.matrix(g)
            mats.append(M)
        return MatrixModule(self.group, self.field, mats, d, all_elements=True)

    def contragredient(self) -> "MatrixModule":
        G, F = self.group, self.field
        mats = [np.ascontiguousarray(LA.ff_inverse(F, self.matrix(g)).T) if self.dim else self.matrix(g)
                for g in range(G.order)]
        return MatrixModule(G, F, mats, self.dim, all_elements=True)

    @cached_property
    def brauer(self) -> ClassFunction:
        return brauer_character(self)


# ------------------------------------------------------------ constructors

def regular_module(G: FiniteGroup, F: Field) -> MatrixModule:
    mats = []
    for g in range(G.order):
        M = np.zeros((G.order, G.order), dtype=np.int64)
        for x in range(G.order):
            M[G.mul(g, x), x] = 1
        mats.append(M)
    return MatrixModule(G, F, mats, G.order, all_elements=True)


def permutation_module(G: FiniteGroup, F: Field, H: Subgroup) -> MatrixModule:
    """k[G/H] with G permuting left cosets."""
    cosets: list[frozenset] = []
    where = {}
    for x in range(G.order):
        if x in where:
            continue
        c = frozenset(G.mul(x, h) for h in H.elements)
        for y in c:
            where[y] = len(cosets)
        cosets.append(c)
    n = len(cosets)
    mats = []
    for g in range(G.order):
        M = np.zeros((n, n), dtype=np.int64)
        for i, c in enumerate(cosets):
            x = next(iter(c))
            M[where[G.mul(g, x)], i] = 1
        mats.append(M)
    return MatrixModule(G, F, mats, n, all_elements=True)


def one_dim_module(G: FiniteGroup, F: Field, values) -> MatrixModule:
    """1-dimensional module with g acting by values[g]."""
    mats = [np.array([[values[g]]], dtype=np.int64) for g in range(G.order)]
    return MatrixModule(G, F, mats, 1, all_elements=True)


# ------------------------------------------------------------ Brauer characters

def _splitting_field(F: Field, order: int) -> Field:
    """Smallest default field containing F and the order-th roots of unity."""
    return GF(F.p, lcm(F.n, mult_order(F.p, order)))


def eigenvalue_multiplicities(F: Field, A: np.ndarray, order: int) -> dict[int, int]:
    """For a matrix with A^order = 1 (order prime to p): t -> multiplicity of
    the eigenvalue whose lift is zeta_order^t.  Multiplicities come from
    kernel dimensions, which is exact because A is semisimple."""
    d = A.shape[0]
    if order == 1:
        return {0: d}
    E = _splitting_field(F, order)
    B = LA.ff_embed(F, A, E)
    step = (E.q - 1) // order
    out: dict[int, int] = {}
    total = 0
    for t in range(order):
        lam = E.exp(t * step)
        M = B.copy()
        M[np.arange(d), np.arange(d)] = LA.ff_sub(E, B[np.arange(d), np.arange(d)], np.full(d, lam))
        mult = d - LA.ff_rank(E, M)
        if mult:
            out[t] = mult
            total += mult
            if total == d:
                break
    if total != d:
        raise ModuleError("eigenvalue multiplicities do not sum to the dimension")
    return out


def brauer_character(M: MatrixModule) -> ClassFunction:
    G, F = M.group, M.field
    p = F.p
    vals = []
    for g in G.class_reps(p):
        o = G.element_orders[g]
        if o % p == 0:  # pragma: no cover - class_reps(p) are p-regular
            raise ModuleError("eigenvalue of order divisible by p")
        if M.dim == 0:
            vals.append(0)
            continue
        mults = eigenvalue_multiplicities(F, M.matrix(g), o)
        vals.append(sum_roots(o, [t for t, k in mults.items() for _ in range(k)]))
    return K0Class(G, p, vals, provenance="from-module")


# ------------------------------------------------------------ projectivity

def free_rank_over(M: MatrixModule, S: Subgroup) -> tuple[bool, int]:
    """Is M free over k[S] (S a p-group)?  Uses dim of S-coinvariants:
    M is free iff dim M = |S| * dim(M / I_S M)."""
    F, d = M.field, M.dim
    if d == 0:
        return True, 0
    gens = S.group.generators
    emb = S.group.embedding
    blocks = [LA.ff_sub(F, M.matrix(emb[s]), np.eye(d, dtype=np.int64)) for s in gens]
    if not blocks:
        return True, d
    stacked = np.hstack(blocks)
    coinv = d - LA.ff_rank(F, stacked)
    return d == S.order * coinv, coinv


def higman_criterion(M: MatrixModule, S: Subgroup | None = None) -> bool:
    """Is the identity of M a trace sum_s s phi s^-1 over the Sylow subgroup?"""
    G, F, d = M.group, M.field, M.dim
    if d == 0:
        return True
    if S is None:
        S = G.sylow(F.p)
    mats = np.array([M.matrix(s) for s in S.elements])
    invs = np.array([M.matrix(int(G.inv[s])) for s in S.elements])
    from . import _kernels as K
    Kmat = K.conj_sum_matrix(mats, invs, F.tables)
    target = np.eye(d, dtype=np.int64).reshape(-1)
    return LA.ff_solve(F, Kmat, target) is not None


def is_projective(M: MatrixModule, cross_check: bool = True) -> bool:
    S = M.group.sylow(M.field.p)
    free, _ = free_rank_over(M, S)
    if cross_check and 0 < M.dim <= HIGMAN_MAX_DIM:
        hig = higman_criterion(M, S)
        if hig != free:  # pragma: no cover - would be a bug
            raise ModuleError("Higman criterion disagrees with the freeness test")
    return free
