"""Univariate polynomials over a finite field, as coefficient lists (low first).

Factorisation is square-free decomposition, distinct-degree splitting and
Cantor-Zassenhaus equal-degree splitting driven by ``random.Random(seed)``;
the factor list is sorted, so the output does not depend on the seed.
"""
from __future__ import annotations

import random

from .fields import Field


def trim(f: list[int]) -> list[int]:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def deg(f: list[int]) -> int:
    return len(trim(f)) - 1


def add(F: Field, f, g) -> list[int]:
    n = max(len(f), len(g))
    out = [F.add(f[i] if i < len(f) else 0, g[i] if i < len(g) else 0) for i in range(n)]
    return trim(out)


def neg(F: Field, f) -> list[int]:
    return [F.neg(c) for c in f]


def sub(F: Field, f, g) -> list[int]:
    return add(F, f, neg(F, g))


def scale(F: Field, f, c: int) -> list[int]:
    return trim([F.mul(a, c) for a in f])


def mul(F: Field, f, g) -> list[int]:
    f, g = trim(f), trim(g)
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] = F.add(out[i + j], F.mul(a, b))
    return trim(out)


def divmod_poly(F: Field, f, g):
    f, g = trim(f), trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    inv_lead = F.inv(g[-1])
    if len(r) - 1 < dg:
        return [], r
    qt = [0] * (len(r) - dg)
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k]
        if c == 0:
            continue
        c = F.mul(c, inv_lead)
        qt[k - dg] = c
        for i in range(dg + 1):
            if g[i]:
                r[k - dg + i] = F.sub(r[k - dg + i], F.mul(c, g[i]))
    return trim(qt), trim(r[:dg])


def rem(F: Field, f, g) -> list[int]:
    return divmod_poly(F, f, g)[1]


def monic(F: Field, f) -> list[int]:
    f = trim(f)
    if not f:
        return f
    return scale(F, f, F.inv(f[-1]))


def gcd(F: Field, f, g) -> list[int]:
    f, g = trim(f), trim(g)
    while g:
        f, g = g, rem(F, f, g)
    return monic(F, f)


def mulmod(F: Field, f, g, m) -> list[int]:
    return rem(F, mul(F, f, g), m)


def powmod(F: Field, f, e: int, m) -> list[int]:
    result = [1]
    base = rem(F, f, m)
    while e:
        if e & 1:
            result = mulmod(F, result, base, m)
        base = mulmod(F, base, base, m)
        e >>= 1
    return rem(F, result, m) if deg(m) > 0 else []


def derivative(F: Field, f) -> list[int]:
    return trim([F.mul(F.from_int(i), f[i]) for i in range(1, len(f))])


def evaluate(F: Field, f, x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def compose_affine(F: Field, f, a: int, b: int) -> list[int]:
    """f(a*x + b)."""
    out: list[int] = []
    lin = trim([b, a])
    for c in reversed(trim(f)):
        out = add(F, mul(F, out, lin), [c])
    return out


def _pth_root(F: Field, f) -> list[int]:
    # f = g(x^p); return g with coefficients replaced by their p-th roots
    p = F.p
    e = F.q // p
    return trim([F.pow(f[i], e) for i in range(0, len(f), p)])


def squarefree_decomposition(F: Field, f) -> list[tuple[list[int], int]]:
    """Monic square-free factors with multiplicities (Yun-style, char p safe)."""
    f = monic(F, f)
    out: list[tuple[list[int], int]] = []

    def rec(f, mult):
        if deg(f) <= 0:
            return
        d = derivative(F, f)
        if not d:
            rec(monic(F, _pth_root(F, f)), mult * F.p)
            return
        c = gcd(F, f, d)
        w = divmod_poly(F, f, c)[0]
        i = 1
        while deg(w) > 0:
            y = gcd(F, w, c)
            z = divmod_poly(F, w, y)[0]
            if deg(z) > 0:
                out.append((monic(F, z), i * mult))
            i += 1
            w = y
            c = divmod_poly(F, c, y)[0]
        if deg(c) > 0:
            rec(monic(F, _pth_root(F, c)), mult * F.p)

    rec(f, 1)
    return out


def distinct_degree(F: Field, f) -> list[tuple[list[int], int]]:
    """Split a monic square-free f into products of irreducibles of equal degree."""
    out = []
    h = [0, 1]
    d = 0
    f = list(f)
    while deg(f) >= 2 * (d + 1):
        d += 1
        h = powmod(F, h, F.q, f)
        g = gcd(F, f, sub(F, h, [0, 1]))
        if deg(g) > 0:
            out.append((g, d))
            f = divmod_poly(F, f, g)[0]
            h = rem(F, h, f)
    if deg(f) > 0:
        out.append((monic(F, f), deg(f)))
    return out


def equal_degree(F: Field, f, d: int, rng: random.Random) -> list[list[int]]:
    n = deg(f)
    if n == d:
        return [monic(F, f)]
    while True:
        a = trim([rng.randrange(F.q) for _ in range(n)])
        if deg(a) <= 0:
            continue
        if F.p == 2:
            # trace map a + a^2 + ... + a^(2^(k d - 1)) with q = 2^k
            t = list(a)
            cur = list(a)
            for _ in range(F.n * d - 1):
                cur = mulmod(F, cur, cur, f)
                t = add(F, t, cur)
            b = t
        else:
            b = sub(F, powmod(F, a, (F.q ** d - 1) // 2, f), [1])
        g = gcd(F, f, b)
        if 0 < deg(g) < n:
            return (equal_degree(F, g, d, rng)
                    + equal_degree(F, divmod_poly(F, f, g)[0], d, rng))


def factor_polynomial(F: Field, f, seed: int = 0):
    """Return (leading coefficient, [(monic irreducible, multiplicity), ...])."""
    f = trim(f)
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    lead = f[-1]
    rng = random.Random(seed)
    factors: dict[tuple[int, ...], int] = {}
    for sqf, mult in squarefree_decomposition(F, f):
        for g, d in distinct_degree(F, sqf):
            for h in equal_degree(F, g, d, rng):
                key = tuple(h)
                factors[key] = factors.get(key, 0) + mult
    items = sorted(factors.items(), key=lambda kv: (len(kv[0]), kv[0][::-1]))
    return lead, [(list(k), m) for k, m in items]


def is_irreducible(F: Field, f) -> bool:
    """Rabin's test."""
    f = trim(f)
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    f = monic(F, f)
    from .intutil import prime_divisors
    x = [0, 1]
    for r in prime_divisors(n):
        h = powmod(F, x, F.q ** (n // r), f)
        if deg(gcd(F, f, sub(F, h, x))) > 0:
            return False
    return powmod(F, x, F.q ** n, f) == rem(F, x, f)


def poly_roots(F: Field, f) -> list[int]:
    """Roots of f in F, sorted."""
    f = trim(f)
    g = gcd(F, f, sub(F, powmod(F, [0, 1], F.q, f), [0, 1])) if deg(f) > 0 else []
    if deg(g) <= 0:
        return []
    roots = []
    for h in equal_degree(F, g, 1, random.Random(0)):
        roots.append(F.neg(h[0]))
    return sorted(roots)


def expand(F: Field, lead: int, factors) -> list[int]:
    out = [lead]
    for g, m in factors:
        for _ in range(m):
            out = mul(F, out, g)
    return out


def monic_irreducibles(F: Field, d: int):
    """All monic irreducible polynomials of degree d over F (small q^d only)."""
    import itertools
    for tail in itertools.product(range(F.q), repeat=d):
        f = list(tail) + [1]
        if is_irreducible(F, f):
            yield f
