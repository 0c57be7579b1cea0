"""Dense linear algebra over a finite field stored as exp/log/Zech tables.

Elements are ints in [0, q).  Two interchangeable backends exist: numba
compiled loops and a vectorised numpy path.  Set ``EQRR_DISABLE_NUMBA=1``
to force the numpy path (it is also used when numba is not importable).
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

_BACKEND = "numpy"
if _HAVE_NUMBA and os.environ.get("EQRR_DISABLE_NUMBA", "").strip() not in ("1", "true", "yes"):
    _BACKEND = "numba"


def backend() -> str:
    return _BACKEND


def set_backend(name: str) -> None:
    """Switch backends at runtime (used by the benchmark and the tests)."""
    global _BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not _HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    _BACKEND = name


class Tables:
    """Arithmetic tables of one field.

    exp has length 2(q-1) so that exp[log a + log b] never wraps; log[0] is
    a harmless 0 and every routine masks zeros explicitly.  zech[d] is
    log(1 + g^d) or -1 when 1 + g^d = 0.  Negation is a shift of the log by
    ``neg`` ((q-1)/2 for odd p, 0 in characteristic 2).
    """

    __slots__ = ("exp", "log", "zech", "qm1", "neg", "q")

    def __init__(self, exp, log, zech, q, neg):
        self.exp = np.ascontiguousarray(exp, dtype=np.int64)
        self.log = np.ascontiguousarray(log, dtype=np.int64)
        self.zech = np.ascontiguousarray(zech, dtype=np.int64)
        self.q = int(q)
        self.qm1 = int(q) - 1
        self.neg = int(neg)


# ---------------------------------------------------------------- numba path

if _HAVE_NUMBA:

    @njit(cache=True, inline="always")
    def _add(a, b, exp, log, zech, qm1):
        if a == 0:
            return b
        if b == 0:
            return a
        la = log[a]
        d = log[b] - la
        if d < 0:
            d += qm1
        z = zech[d]
        if z < 0:
            return 0
        return exp[la + z]

    @njit(cache=True, inline="always")
    def _mul(a, b, exp, log):
        if a == 0 or b == 0:
            return 0
        return exp[log[a] + log[b]]

    @njit(cache=True)
    def _matmul_nb(A, B, exp, log, zech, qm1):
        n, k = A.shape
        m = B.shape[1]
        C = np.zeros((n, m), dtype=np.int64)
        for i in range(n):
            for t in range(k):
                a = A[i, t]
                if a == 0:
                    continue
                la = log[a]
                for j in range(m):
                    b = B[t, j]
                    if b == 0:
                        continue
                    C[i, j] = _add(C[i, j], exp[la + log[b]], exp, log, zech, qm1)
        return C

    @njit(cache=True)
    def _rref_nb(A, exp, log, zech, qm1, neg):
        M = A.copy()
        rows, cols = M.shape
        piv = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            pr = -1
            for i in range(r, rows):
                if M[i, c] != 0:
                    pr = i
                    break
            if pr < 0:
                continue
            if pr != r:
                for j in range(cols):
                    tmp = M[r, j]
                    M[r, j] = M[pr, j]
                    M[pr, j] = tmp
            inv_log = (qm1 - log[M[r, c]]) % qm1
            for j in range(c, cols):
                if M[r, j] != 0:
                    M[r, j] = exp[log[M[r, j]] + inv_log]
            for i in range(rows):
                if i == r or M[i, c] == 0:
                    continue
                fl = (log[M[i, c]] + neg) % qm1
                for j in range(c, cols):
                    v = M[r, j]
                    if v != 0:
                        M[i, j] = _add(M[i, j], exp[log[v] + fl], exp, log, zech, qm1)
            piv[r] = c
            r += 1
        return M, piv[:r].copy()

    @njit(cache=True)
    def _conj_sum_nb(mats, invs, exp, log, zech, qm1):
        # matrix of phi -> sum_s rho(s) phi rho(s)^-1 acting on row-major vec(phi)
        ns, d, _ = mats.shape
        K = np.zeros((d * d, d * d), dtype=np.int64)
        for s in range(ns):
            R = mats[s]
            Ri = invs[s]
            for i in range(d):
                for j in range(d):
                    row = i * d + j
                    for a in range(d):
                        x = R[i, a]
                        if x == 0:
                            continue
                        lx = log[x]
                        for b in range(d):
                            y = Ri[b, j]
                            if y == 0:
                                continue
                            col = a * d + b
                            K[row, col] = _add(K[row, col], exp[lx + log[y]], exp, log, zech, qm1)
        return K


# ---------------------------------------------------------------- numpy path

def _vmul(a, b, T: Tables):
    out = T.exp[T.log[a] + T.log[b]]
    return np.where((a == 0) | (b == 0), 0, out)


def _vadd(a, b, T: Tables):
    la = T.log[a]
    d = (T.log[b] - la) % T.qm1 if T.qm1 > 0 else np.zeros_like(la)
    z = T.zech[d]
    res = np.where(z < 0, 0, T.exp[la + np.maximum(z, 0)])
    res = np.where(b == 0, a, res)
    return np.where(a == 0, b, res)


def _matmul_np(A, B, T: Tables):
    n, k = A.shape
    C = np.zeros((n, B.shape[1]), dtype=np.int64)
    for t in range(k):
        C = _vadd(C, _vmul(A[:, t:t + 1], B[t:t + 1, :], T), T)
    return C


def _rref_np(A, T: Tables):
    M = A.copy()
    rows, cols = M.shape
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            M[[r, pr]] = M[[pr, r]]
        inv_log = (T.qm1 - T.log[M[r, c]]) % T.qm1
        M[r] = np.where(M[r] == 0, 0, T.exp[T.log[M[r]] + inv_log])
        others = np.nonzero(M[:, c])[0]
        others = others[others != r]
        if others.size:
            f = T.exp[(T.log[M[others, c]] + T.neg) % T.qm1]
            M[others] = _vadd(M[others], _vmul(f[:, None], M[r][None, :], T), T)
        piv.append(c)
        r += 1
    return M, np.array(piv, dtype=np.int64)


def _conj_sum_np(mats, invs, T: Tables):
    ns, d, _ = mats.shape
    K = np.zeros((d * d, d * d), dtype=np.int64)
    for s in range(ns):
        # kron(R, Ri^T): entry (i*d+j, a*d+b) = R[i,a] * Ri[b,j]
        prod = _vmul(mats[s][:, None, :, None], invs[s].T[None, :, None, :], T)
        K = _vadd(K, prod.reshape(d * d, d * d), T)
    return K


# ---------------------------------------------------------------- dispatch

def matmul(A: np.ndarray, B: np.ndarray, T: Tables) -> np.ndarray:
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ValueError("shape mismatch")
    if _BACKEND == "numba":
        return _matmul_nb(A, B, T.exp, T.log, T.zech, T.qm1)
    return _matmul_np(A, B, T)


def rref(A: np.ndarray, T: Tables):
    A = np.ascontiguousarray(A, dtype=np.int64)
    if A.size == 0:
        return A.copy(), np.zeros(0, dtype=np.int64)
    if _BACKEND == "numba":
        return _rref_nb(A, T.exp, T.log, T.zech, T.qm1, T.neg)
    return _rref_np(A, T)


def conj_sum_matrix(mats: np.ndarray, invs: np.ndarray, T: Tables) -> np.ndarray:
    mats = np.ascontiguousarray(mats, dtype=np.int64)
    invs = np.ascontiguousarray(invs, dtype=np.int64)
    if _BACKEND == "numba":
        return _conj_sum_nb(mats, invs, T.exp, T.log, T.zech, T.qm1)
    return _conj_sum_np(mats, invs, T)


def vadd(a, b, T: Tables):
    return _vadd(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64), T)


def vmul(a, b, T: Tables):
    return _vmul(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64), T)


def vneg(a, T: Tables):
    a = np.asarray(a, dtype=np.int64)
    if T.neg == 0:
        return a.copy()
    return np.where(a == 0, 0, T.exp[(T.log[a] + T.neg) % T.qm1])
