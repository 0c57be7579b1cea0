"""Exact dense linear algebra: finite-field matrices (via the kernels) and
matrices of Fractions or CycNumbers (plain Gaussian elimination)."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import _kernels as K
from .fields import Field


class LinAlgError(ArithmeticError):
    pass


# ------------------------------------------------------------ finite fields

def ff_matmul(F: Field, A, B) -> np.ndarray:
    return K.matmul(np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64), F.tables)


def ff_rref(F: Field, A):
    return K.rref(np.asarray(A, dtype=np.int64), F.tables)


def ff_rank(F: Field, A) -> int:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return 0
    return int(len(ff_rref(F, A)[1]))


def ff_identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def ff_add(F: Field, A, B) -> np.ndarray:
    return K.vadd(A, B, F.tables)


def ff_sub(F: Field, A, B) -> np.ndarray:
    return K.vadd(A, K.vneg(B, F.tables), F.tables)


def ff_scale(F: Field, A, c: int) -> np.ndarray:
    return K.vmul(A, np.full_like(np.asarray(A, dtype=np.int64), c), F.tables)


def ff_nullspace(F: Field, A) -> np.ndarray:
    """Rows spanning {x : A x = 0}."""
    A = np.asarray(A, dtype=np.int64)
    rows, cols = A.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = ff_rref(F, A)
    piv = [int(c) for c in piv]
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for r, pc in enumerate(piv):
            basis[k, pc] = F.neg(int(R[r, fc]))
    return basis


def ff_solve(F: Field, A, b):
    """One solution x of A x = b, or None when inconsistent (residual checked)."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    aug = np.hstack([A, b])
    R, piv = ff_rref(F, aug)
    cols = A.shape[1]
    if any(int(c) == cols for c in piv):
        return None
    x = np.zeros(cols, dtype=np.int64)
    for r, c in enumerate(piv):
        x[int(c)] = R[r, cols]
    check = ff_matmul(F, A, x.reshape(-1, 1)).reshape(-1)
    if not np.array_equal(check, b.reshape(-1)):
        raise LinAlgError("residual check failed")
    return x


def ff_inverse(F: Field, A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    R, piv = ff_rref(F, np.hstack([A, np.eye(n, dtype=np.int64)]))
    if len(piv) < n or int(piv[n - 1]) != n - 1:
        raise LinAlgError("matrix is singular")
    inv = R[:, n:]
    if not np.array_equal(ff_matmul(F, A, inv), np.eye(n, dtype=np.int64)):
        raise LinAlgError("residual check failed")
    return np.ascontiguousarray(inv)


def ff_embed(F: Field, A, target: Field) -> np.ndarray:
    if target is F:
        return np.asarray(A, dtype=np.int64)
    return F.embedding_array(target)[np.asarray(A, dtype=np.int64)]


# ------------------------------------------------------------ rationals

def _gauss(M, zero, one, inv):
    """In-place row reduction; returns (rank, det sign/product, pivots)."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    r = 0
    det = one
    piv = []
    for c in range(cols):
        pr = next((i for i in range(r, rows) if M[i][c] != zero), None)
        if pr is None:
            continue
        if pr != r:
            M[r], M[pr] = M[pr], M[r]
            det = -det
        pv = M[r][c]
        det = det * pv
        ipv = inv(pv)
        M[r] = [x * ipv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != zero:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv.append(c)
        r += 1
        if r == rows:
            break
    return r, det, piv


def rational_rank(M) -> int:
    A = [[Fraction(x) for x in row] for row in M]
    if not A:
        return 0
    return _gauss(A, Fraction(0), Fraction(1), lambda x: 1 / x)[0]


def rational_det(M) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(1)
    A = [[Fraction(x) for x in row] for row in M]
    r, det, _ = _gauss(A, Fraction(0), Fraction(1), lambda x: 1 / x)
    return det if r == n else Fraction(0)


def rational_solve(M, rhs) -> list[Fraction]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(M, rhs)]
    r, _, piv = _gauss(A, Fraction(0), Fraction(1), lambda x: 1 / x)
    cols = len(M[0])
    if cols in piv:
        raise LinAlgError("inconsistent rational system")
    x = [Fraction(0)] * cols
    for i, c in enumerate(piv):
        x[c] = A[i][cols]
    for row, b in zip(M, rhs):
        if sum(Fraction(a) * y for a, y in zip(row, x)) != Fraction(b):
            raise LinAlgError("residual check failed")
    del n, r
    return x


def cyc_det(M):
    """Determinant of a square matrix of CycNumbers (or rationals)."""
    from .cyclotomic import CycNumber
    n = len(M)
    if n == 0:
        return CycNumber.rational(1)
    A = [[x if isinstance(x, CycNumber) else CycNumber.rational(x) for x in row] for row in M]
    zero = CycNumber.rational(0)
    r, det, _ = _gauss(A, zero, CycNumber.rational(1), lambda x: x.inverse())
    return det if r == n else zero
