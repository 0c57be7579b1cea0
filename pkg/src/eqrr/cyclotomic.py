"""Exact arithmetic in cyclotomic fields Q(zeta_m).

A CycNumber stores rational coordinates in the power basis
1, zeta, ..., zeta^(phi(m)-1).  Values with different conductors are
compared and combined in Q(zeta_lcm).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .intutil import divisors, euler_phi, lcm


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m):
        if d == m:
            continue
        den = cyclotomic_poly(d)
        # exact division by a monic integer polynomial
        out = [0] * (len(num) - len(den) + 1)
        r = list(num)
        for k in range(len(r) - 1, len(den) - 2, -1):
            c = r[k]
            if c:
                out[k - len(den) + 1] = c
                for i, dc in enumerate(den):
                    r[k - len(den) + 1 + i] -= c * dc
        num = out
    return tuple(num)


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Coordinates of zeta_m^k for k = 0..m-1 (all integers)."""
    phi = euler_phi(m)
    cp = cyclotomic_poly(m)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(m):
        rows.append(tuple(cur))
        # multiply by zeta: shift and reduce the top coefficient
        top = cur[-1]
        nxt = [0] + cur[:-1]
        if top:
            for i in range(phi):
                nxt[i] -= top * cp[i]
        cur = nxt
    return tuple(rows)


class CycNumber:
    __slots__ = ("m", "c", "_hash")

    def __init__(self, m: int, coeffs):
        if m < 1:
            raise ValueError("conductor must be positive")
        if m % 4 == 2:
            # Q(zeta_m) = Q(zeta_{m/2}); keep odd-twice conductors canonical
            half = m // 2
            coeffs = _halve(m, coeffs)
            m = half
        phi = euler_phi(m)
        coeffs = [Fraction(x) for x in coeffs]
        if len(coeffs) != phi:
            raise ValueError(f"expected {phi} coordinates for conductor {m}")
        self.m = m
        self.c = tuple(coeffs)
        self._hash = None

    # ---------------------------------------------------------- builders
    @classmethod
    def rational(cls, x, m: int = 1) -> "CycNumber":
        m = m // 2 if m % 4 == 2 else m
        coeffs = [Fraction(0)] * euler_phi(m)
        coeffs[0] = Fraction(x)
        return cls(m, coeffs)

    @classmethod
    def root(cls, m: int, k: int = 1) -> "CycNumber":
        """zeta_m^k."""
        k %= m
        g = gcd(k, m)
        mm = m // g
        kk = k // g
        if mm % 4 == 2:
            # zeta_{2n}^k with n odd equals -zeta_n^{k'} for a suitable k'
            n = mm // 2
            kk2 = (kk * (n + 1) // 2) % n if kk % 2 else (kk // 2) % n
            base = cls.root(n, kk2) if n > 1 else cls.rational(1)
            return -base if kk % 2 else base
        row = _power_table(mm)[kk]
        return cls(mm, row)

    # ---------------------------------------------------------- basics
    def coerce(self, M: int) -> "CycNumber":
        """The same number expressed in Q(zeta_M); requires m | M."""
        M0 = M // 2 if M % 4 == 2 else M
        if M0 == self.m:
            return self
        if M0 % self.m:
            return self._descend(gcd(self.m, M0)).coerce(M0)
        step = M0 // self.m
        table = _power_table(M0)
        out = [Fraction(0)] * euler_phi(M0)
        for i, x in enumerate(self.c):
            if x:
                row = table[(i * step) % M0]
                for j, r in enumerate(row):
                    if r:
                        out[j] += x * r
        return CycNumber(M0, out)

    def _descend(self, d: int) -> "CycNumber":
        """The same number in the subfield Q(zeta_d), d | m; ValueError if it
        does not lie there."""
        d = d // 2 if d % 4 == 2 else d
        if d == self.m:
            return self
        from .linalg import LinAlgError, rational_solve
        cols = [CycNumber.root(d, i).coerce(self.m).c for i in range(euler_phi(d))]
        M = [[col[r] for col in cols] for r in range(len(self.c))]
        try:
            x = rational_solve(M, list(self.c))
        except LinAlgError:
            raise ValueError(f"number does not lie in Q(zeta_{d})") from None
        return CycNumber(d, x)

    def _common(self, other):
        if not isinstance(other, CycNumber):
            other = CycNumber.rational(other)
        if other.m == self.m:
            return self, other
        M = lcm(self.m, other.m)
        return self.coerce(M), other.coerce(M)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            c = list(self.c)
            c[0] += other
            return CycNumber(self.m, c)
        a, b = self._common(other)
        return CycNumber(a.m, [x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.m, [-x for x in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNumber(self.m, [x * other for x in self.c])
        a, b = self._common(other)
        m = a.m
        phi = len(a.c)
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        prod[i + j] += x * y
        table = _power_table(m)
        out = prod[:phi]
        for k in range(phi, 2 * phi - 1):
            x = prod[k]
            if x:
                for j, r in enumerate(table[k % m]):
                    if r:
                        out[j] += x * r
        return CycNumber(m, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNumber(self.m, [x / other for x in self.c])
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = CycNumber.rational(1, self.m)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def multiplication_matrix(self) -> list[list[Fraction]]:
        """Matrix of y -> self*y in the power basis (columns are images)."""
        phi = len(self.c)
        cols = []
        for k in range(phi):
            basis = [Fraction(0)] * phi
            basis[k] = Fraction(1)
            cols.append((self * CycNumber(self.m, basis)).c)
        return [[cols[j][i] for j in range(phi)] for i in range(phi)]

    def inverse(self) -> "CycNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        from .linalg import rational_solve
        M = self.multiplication_matrix()
        rhs = [Fraction(0)] * len(self.c)
        rhs[0] = Fraction(1)
        return CycNumber(self.m, rational_solve(M, rhs))

    def norm(self) -> Fraction:
        from .linalg import rational_det
        return rational_det(self.multiplication_matrix())

    def galois(self, k: int) -> "CycNumber":
        """Image under zeta -> zeta^k (k coprime to m)."""
        if gcd(k, self.m) != 1:
            raise ValueError("Galois exponent must be a unit")
        table = _power_table(self.m)
        out = [Fraction(0)] * len(self.c)
        for i, x in enumerate(self.c):
            if x:
                for j, r in enumerate(table[(i * k) % self.m]):
                    if r:
                        out[j] += x * r
        return CycNumber(self.m, out)

    def conjugate(self) -> "CycNumber":
        return self.galois(-1 % self.m if self.m > 1 else 1)

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.c[0]

    def is_integral(self) -> bool:
        """Membership in Z[zeta_m] (the power basis is an integral basis)."""
        return all(x.denominator == 1 for x in self.c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.c[0] == other
        if not isinstance(other, CycNumber):
            return NotImplemented
        a, b = self._common(other)
        return a.c == b.c

    def __hash__(self):
        if self._hash is None:
            # equal numbers may carry different conductors, so only the
            # rational case gets a discriminating hash
            self._hash = hash(self.c[0]) if self.is_rational() else hash("cyc")
        return self._hash

    def to_json(self) -> dict:
        return {"m": self.m, "coefficients": [str(x) for x in self.c]}

    @classmethod
    def from_json(cls, d) -> "CycNumber":
        if isinstance(d, (int, str)):
            return cls.rational(Fraction(d))
        return cls(int(d["m"]), [Fraction(x) for x in d["coefficients"]])

    def __repr__(self):
        if self.is_rational():
            return str(self.c[0])
        terms = []
        for i, x in enumerate(self.c):
            if x:
                terms.append(f"{x}" if i == 0 else f"{x}*z{self.m}^{i}")
        return " + ".join(terms)


def _halve(m: int, coeffs) -> list[Fraction]:
    """Rewrite coordinates over Q(zeta_m), m = 2n with n odd, over Q(zeta_n)."""
    n = m // 2
    out = CycNumber.rational(0, n)
    for i, x in enumerate(coeffs):
        x = Fraction(x)
        if x:
            out = out + CycNumber.root(m, i) * x
    return list(out.c)


def sum_roots(m: int, exponents) -> CycNumber:
    """Sum of zeta_m^k over the given exponents, computed in one pass."""
    m0 = m // 2 if m % 4 == 2 else m
    if m0 != m:
        acc = CycNumber.rational(0, m0)
        for k in exponents:
            acc = acc + CycNumber.root(m, k)
        return acc
    table = _power_table(m)
    out = [0] * euler_phi(m)
    for k in exponents:
        for j, r in enumerate(table[k % m]):
            if r:
                out[j] += r
    return CycNumber(m, out)
