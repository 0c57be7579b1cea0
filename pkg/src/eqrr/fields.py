"""Finite fields F_{p^n}.

An element is an int in [0, p^n): the base-p digits are the coefficients of
a polynomial in the generator x, lowest degree first.  Fields built without
an explicit modulus use Conway polynomials, so every default field has x
primitive and the default fields of one characteristic form a compatible
tower: the embedding F_{p^d} -> F_{p^n} sends x_d to x_n^((p^n-1)/(p^d-1)).
That compatibility is what makes Brauer lifts independent of the field an
eigenvalue happens to be computed in.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import _kernels as K
from .intutil import factorize, is_prime

MAX_FIELD_SIZE = 1 << 22


class FieldError(ValueError):
    pass


def _digits(v: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        v, r = divmod(v, p)
        out.append(r)
    return out


def _undigits(ds, p: int) -> int:
    v = 0
    for c in reversed(ds):
        v = v * p + c
    return v


def _mulmod_digits(a, b, mod, p):
    """Product of digit lists a*b reduced by the monic modulus (all mod p)."""
    n = len(mod) - 1
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n):
                prod[k - n + i] = (prod[k - n + i] - c * mod[i]) % p
    return prod[:n]


class Field:
    """The field F_p[x]/(modulus); construct through :func:`GF`."""

    def __init__(self, p: int, n: int, modulus: tuple[int, ...], conway: bool):
        self.p = p
        self.n = n
        self.q = p ** n
        self.modulus = modulus
        self.is_conway = conway
        self._build_tables()

    # ----------------------------------------------------------- tables
    def _build_tables(self) -> None:
        p, n, q = self.p, self.n, self.q
        qm1 = q - 1
        if n == 1:
            g = _primitive_root(p) if not self.is_conway else (-self.modulus[0]) % p
            gen_digits = [g]
        else:
            gen_digits = None
        mod = list(self.modulus)
        if n > 1:
            # try the class of x first; it is primitive for Conway moduli
            x = [0] * n
            x[1 % n] = 1
            gen_digits = x
            if not self._is_primitive_digits(x, mod):
                gen_digits = None
                for v in range(2, q):
                    cand = _digits(v, p, n)
                    if self._is_primitive_digits(cand, mod):
                        gen_digits = cand
                        break
                if gen_digits is None:  # pragma: no cover - impossible for a field
                    raise FieldError("no primitive element found")
        exp = [0] * (2 * qm1)
        log = [0] * q
        cur = [1] + [0] * (n - 1)
        for i in range(qm1):
            v = _undigits(cur, p)
            exp[i] = v
            log[v] = i
            cur = _mulmod_digits(cur, gen_digits, mod + [], p) if n > 1 else [(cur[0] * gen_digits[0]) % p]
        for i in range(qm1, 2 * qm1):
            exp[i] = exp[i - qm1]
        seen = set(exp[:qm1])
        if len(seen) != qm1:
            raise FieldError("generator is not primitive; modulus is not irreducible")
        zech = [0] * max(qm1, 1)
        for d in range(qm1):
            v = exp[d]
            # 1 + g^d: add 1 to the constant digit
            w = v - (v % p) + ((v % p) + 1) % p
            zech[d] = -1 if w == 0 else log[w]
        self.generator = _undigits(gen_digits, p)
        self._exp = exp
        self._log = log
        self._zech = zech
        self._neg = qm1 // 2 if p != 2 else 0
        self.tables = K.Tables(np.array(exp), np.array(log), np.array(zech), q, self._neg)

    def _is_primitive_digits(self, g, mod) -> bool:
        p, q = self.p, self.q
        if not any(g):
            return False

        def power(base, e):
            result = [1] + [0] * (self.n - 1)
            b = list(base)
            while e:
                if e & 1:
                    result = _mulmod_digits(result, b, mod, p)
                b = _mulmod_digits(b, b, mod, p)
                e >>= 1
            return result

        one = [1] + [0] * (self.n - 1)
        if power(g, q - 1) != one:
            raise FieldError(f"modulus {list(mod)} is not irreducible over F_{p}")
        for r, _ in factorize(q - 1):
            if power(g, (q - 1) // r) == one:
                return False
        return True

    # ----------------------------------------------------------- scalar ops
    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        if self.n == 1:
            return (a + b) % self.p
        la = self._log[a]
        d = (self._log[b] - la) % (self.q - 1)
        z = self._zech[d]
        return 0 if z < 0 else self._exp[la + z]

    def neg(self, a: int) -> int:
        if a == 0 or self._neg == 0:
            return a
        if self.n == 1:
            return (-a) % self.p
        return self._exp[(self._log[a] + self._neg) % (self.q - 1)]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def log(self, a: int) -> int:
        """Discrete log relative to the field's fixed primitive element."""
        if a == 0:
            raise ValueError("log of zero")
        return self._log[a]

    def exp(self, e: int) -> int:
        return self._exp[e % (self.q - 1)]

    def order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        from math import gcd
        return (self.q - 1) // gcd(self._log[a], self.q - 1)

    def frobenius(self, a: int, k: int = 1) -> int:
        return self.pow(a, self.p ** k)

    def from_int(self, c: int) -> int:
        """The image of the integer c under Z -> F_p -> F_q."""
        return c % self.p

    def elements(self) -> range:
        return range(self.q)

    def __call__(self, v: int) -> "FieldElem":
        return FieldElem(self, v)

    # ----------------------------------------------------------- structure
    @property
    def conway(self) -> "Field":
        """The default (Conway) field of the same size."""
        return GF(self.p, self.n)

    @lru_cache(maxsize=None)
    def _to_conway_map(self) -> tuple[int, ...]:
        if self.is_conway:
            return tuple(range(self.q))
        C = self.conway
        # roots of our modulus in the Conway field; use the one with minimal log
        from .polys import poly_roots
        roots = poly_roots(C, list(self.modulus))
        beta = min((r for r in roots), key=lambda r: C.log(r))
        powers = [1]
        for _ in range(self.n - 1):
            powers.append(C.mul(powers[-1], beta))
        out = []
        for v in range(self.q):
            acc = 0
            for i, c in enumerate(_digits(v, self.p, self.n)):
                if c:
                    acc = C.add(acc, C.mul(c, powers[i]))
            out.append(acc)
        return tuple(out)

    def to_conway(self, a: int) -> int:
        return self._to_conway_map()[a]

    @lru_cache(maxsize=None)
    def embedding_array(self, target: "Field") -> np.ndarray:
        """Vector v with v[a] the image of a in target (compatible embedding)."""
        if target.p != self.p or target.n % self.n:
            raise FieldError(f"F_{self.q} does not embed in F_{target.q}")
        if not target.is_conway:
            raise FieldError("embeddings target default fields only")
        src = self._to_conway_map()
        C = self.conway
        scale = (target.q - 1) // (self.q - 1)
        out = np.zeros(self.q, dtype=np.int64)
        for a in range(1, self.q):
            out[a] = target.exp(C.log(src[a]) * scale)
        return out

    def embed(self, a: int, target: "Field") -> int:
        return int(self.embedding_array(target)[a])

    def lift_exponent(self, a: int, m: int) -> int:
        """t with lift(a) = zeta_m^t (requires a^m = 1)."""
        if a == 0:
            raise ValueError("cannot lift zero")
        if m % self.p == 0:
            raise ValueError(f"conductor {m} divisible by p = {self.p}")
        C = self.conway
        e = C.log(self.to_conway(a))
        num = e * m
        if num % (self.q - 1):
            raise ValueError(f"order of {a} does not divide {m}")
        return (num // (self.q - 1)) % m

    def lift(self, a: int, m: int):
        from .cyclotomic import CycNumber
        return CycNumber.root(m, self.lift_exponent(a, m))

    # ----------------------------------------------------------- misc
    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.n})"

    def __reduce__(self):
        return (GF, (self.p, self.n, None if self.is_conway else self.modulus))


class FieldElem:
    """A field element with operator overloading, for the public API."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        if not 0 <= value < field.q:
            raise FieldError(f"{value} is not an element of {field}")
        self.field = field
        self.value = int(value)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise FieldError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElem(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElem(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return FieldElem(self.field, self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElem(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return FieldElem(self.field, self.field.div(self.value, o))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field is other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.field.modulus, self.value))

    def coefficients(self) -> list[int]:
        return _digits(self.value, self.field.p, self.field.n)

    def __repr__(self):
        return f"{self.field}({self.value})"


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    rs = [r for r, _ in factorize(p - 1)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in rs):
            return g
    raise FieldError(f"no primitive root mod {p}")  # pragma: no cover


# --------------------------------------------------------------------- Conway

_CONWAY: dict[tuple[int, int], tuple[int, ...]] = {}


def conway_polynomial(p: int, n: int) -> tuple[int, ...]:
    """Conway polynomial C_{p,n}, coefficients lowest degree first (monic)."""
    key = (p, n)
    if key in _CONWAY:
        return _CONWAY[key]
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if n == 1:
        poly = ((-_primitive_root(p)) % p, 1)
        _CONWAY[key] = poly
        return poly
    from . import polys as P
    Fp = GF(p, 1)
    q = p ** n
    subs = [(d, conway_polynomial(p, d)) for d in range(1, n) if n % d == 0]
    qfac = [r for r, _ in factorize(q - 1)]
    for bs in itertools.product(range(p), repeat=n):
        # bs = (b_{n-1}, ..., b_0); coefficient a_i = (-1)^(n-i) b_i
        coeffs = [0] * (n + 1)
        coeffs[n] = 1
        for k, b in enumerate(bs):
            i = n - 1 - k
            coeffs[i] = b % p if (n - i) % 2 == 0 else (-b) % p
        if coeffs[0] == 0:
            continue
        if not P.is_irreducible(Fp, coeffs):
            continue
        x = [0, 1]
        if P.powmod(Fp, x, q - 1, coeffs) != [1]:
            continue  # pragma: no cover - irreducible implies this
        if any(P.powmod(Fp, x, (q - 1) // r, coeffs) == [1] for r in qfac):
            continue
        ok = True
        for d, cd in subs:
            y = P.powmod(Fp, x, (q - 1) // (p ** d - 1), coeffs)
            # evaluate C_d at y modulo coeffs
            acc: list[int] = []
            for c in reversed(cd):
                acc = P.add(Fp, P.mulmod(Fp, acc, y, coeffs), [c])
            if P.trim(acc):
                ok = False
                break
        if ok:
            poly = tuple(coeffs)
            _CONWAY[key] = poly
            return poly
    raise FieldError(f"no Conway polynomial found for ({p}, {n})")  # pragma: no cover


_FIELDS: dict = {}


def GF(p: int, n: int = 1, modulus=None) -> Field:
    """The field with p^n elements; modulus (low-to-high coefficients) optional."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if n < 1:
        raise FieldError("extension degree must be positive")
    if p ** n > MAX_FIELD_SIZE:
        raise FieldError(f"field of size {p}^{n} exceeds the table limit")
    if modulus is not None:
        mod = tuple(int(c) % p for c in modulus)
        if len(mod) != n + 1 or mod[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {n}")
        if mod == conway_polynomial(p, n):
            modulus = None
    key = (p, n, None if modulus is None else tuple(int(c) % p for c in modulus))
    fld = _FIELDS.get(key)
    if fld is not None:
        return fld
    if modulus is None:
        fld = Field(p, n, conway_polynomial(p, n), conway=True)
    else:
        mod = key[2]
        if n > 1:
            from . import polys as P
            if not P.is_irreducible(GF(p, 1), list(mod)):
                raise FieldError(f"modulus {list(mod)} is reducible over F_{p}")
        fld = Field(p, n, mod, conway=False)
    _FIELDS[key] = fld
    return fld


def make_extension_field(p: int, n: int, modulus=None) -> Field:
    return GF(p, n, modulus)


def field_of_size(q: int) -> Field:
    fac = factorize(q)
    if len(fac) != 1:
        raise FieldError(f"{q} is not a prime power")
    p, n = fac[0]
    return GF(p, n)


def root_of_unity_lift(x: FieldElem, m: int):
    return x.field.lift(x.value, m)
