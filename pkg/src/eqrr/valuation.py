"""lambda-adic valuations of rationals and cyclotomic numbers.

For x in Q(zeta_m) and a prime ell not dividing m, the prime lambda_0 of
Q(zeta_m) over ell is pinned down by the same convention as the Brauer lift:
zeta_m reduces to g^((q-1)/m), g the Conway generator of F_q, q = ell^f.
The valuation is computed exactly by evaluating x at the Teichmueller lift
of that root inside W(F_q)/ell^k.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm

from .cyclotomic import CycNumber
from .fields import GF
from .intutil import mult_order, valuation


class ValuationError(ValueError):
    pass


def v_rational(x, ell: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValuationError("valuation of zero")
    return valuation(x.numerator, ell) - valuation(x.denominator, ell)


def _pmul(a: list[int], b: list[int], mod: list[int], N: int) -> list[int]:
    """a*b in (Z/N)[X]/(mod), mod monic given low-first."""
    d = len(mod) - 1
    out = [0] * (2 * d - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    for k in range(len(out) - 1, d - 1, -1):
        c = out[k] % N
        if c:
            for i in range(d):
                out[k - d + i] -= c * mod[i]
        out[k] = 0
    return [x % N for x in out[:d]]


def _ppow(a: list[int], e: int, mod: list[int], N: int) -> list[int]:
    d = len(mod) - 1
    r = [1] + [0] * (d - 1)
    while e:
        if e & 1:
            r = _pmul(r, a, mod, N)
        a = _pmul(a, a, mod, N)
        e >>= 1
    return r


def teichmuller_root(m: int, ell: int, k: int) -> tuple[list[int], list[int]]:
    """(Omega, modulus): a primitive m-th root of unity in (Z/ell^k)[X]/(C)
    lifting g^((q-1)/m), C the Conway polynomial of F_{ell^f}."""
    f = mult_order(ell, m)
    F = GF(ell, f)
    mod = [int(c) for c in F.conway.modulus]
    if len(mod) != f + 1:
        mod = mod + [1] if len(mod) == f else mod
    N = ell ** k
    q = ell ** f
    if f == 1:
        base = [F.conway.generator]
    else:
        base = [0, 1] + [0] * (f - 2)
    w0 = _ppow(base, (q - 1) // m, mod, N)
    return _ppow(w0, q ** k, mod, N), mod


def v_cyclotomic(x: CycNumber, ell: int) -> int:
    """Valuation of x at lambda_0 (normalized so v(ell) = 1)."""
    if x.is_zero():
        raise ValuationError("valuation of zero")
    if x.is_rational():
        return v_rational(x.to_rational(), ell)
    m = x.m
    if m % ell == 0:
        raise ValuationError(f"ell = {ell} divides the conductor {m}; only unramified primes are supported")
    D = lcm(*(c.denominator for c in x.c))
    y = [int(c * D) for c in x.c]
    nv = v_rational((x * D).norm(), ell)
    f = mult_order(ell, m)
    k = nv // f + 1
    N = ell ** k
    omega, mod = teichmuller_root(m, ell, k)
    d = len(mod) - 1
    acc = [0] * d
    pw = [1] + [0] * (d - 1)
    for c in y:
        if c:
            acc = [(a + c * b) % N for a, b in zip(acc, pw)]
        pw = _pmul(pw, omega, mod, N)
    vals = [valuation(a, ell) for a in acc if a % N]
    v = min(vals) if vals else k
    if v >= k:  # pragma: no cover - excluded by the norm bound
        raise ValuationError("precision bound violated")
    return v - valuation(D, ell)


def v_lambda(x, lam) -> int:
    """v_lambda(x) for x rational or cyclotomic; lam has ``ell`` and ``e``."""
    if isinstance(x, CycNumber):
        return lam.e * v_cyclotomic(x, lam.ell)
    return lam.e * v_rational(x, lam.ell)
