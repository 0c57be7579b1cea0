"""Property-based checks (hypothesis)."""
import random
from fractions import Fraction

import numpy as np
from hypothesis import HealthCheck, given, settings, strategies as st

from helpers import divisor

from eqrr import _kernels as K
from eqrr import polys
from eqrr.bsd import in_pth_powers
from eqrr.characters import irreducible_characters
from eqrr.cyclotomic import CycNumber
from eqrr.engine import degree_identity, euler_char
from eqrr.fields import field_of_size
from eqrr.oracle import build_cover, bundle_from_divisor, euler_brauer
from eqrr.psi import m_psi_w, ra_fraction
from eqrr.ramification import descent_exponent
from eqrr.suite import random_divisor
from eqrr.valuation import v_cyclotomic

SIZES = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27]
COVERS = [(5, [(4, 0)]), (7, [(2, 0)]), (13, [(5, 0)]), (2, [(1, 1)]), (3, [(1, 1)]), (4, [(1, 1)]),
          (3, [(2, 0), (1, 1)]), (5, [(4, 0), (1, 1)]), (7, [(2, 0), (1, 1)])]
_CACHE = {}


def _cover(i):
    if i not in _CACHE:
        _CACHE[i] = build_cover(*COVERS[i])
    return _CACHE[i]


slow = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@given(st.sampled_from(SIZES), st.data())
@settings(max_examples=60, deadline=None)
def test_field_distributive(q, data):
    F = field_of_size(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


@given(st.sampled_from([4, 9, 25]), st.integers(1, 6), st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_backends_agree_on_random_matrices(q, n, seed):
    if not K._HAVE_NUMBA:
        return
    F = field_of_size(q)
    rng = np.random.default_rng(seed)
    A = rng.integers(0, q, (n, n + 1))
    B = rng.integers(0, q, (n + 1, n))
    old = K.backend()
    try:
        K.set_backend("numpy")
        r1 = (K.matmul(A, B, F.tables), K.rref(A, F.tables)[0])
        K.set_backend("numba")
        r2 = (K.matmul(A, B, F.tables), K.rref(A, F.tables)[0])
    finally:
        K.set_backend(old)
    assert (r1[0] == r2[0]).all() and (r1[1] == r2[1]).all()


def _cyc(m, coeffs):
    x = CycNumber.rational(0, m)
    for k, c in enumerate(coeffs):
        x = x + CycNumber.root(m, k) * c
    return x


small = st.lists(st.integers(-6, 6), min_size=1, max_size=6)


@given(st.sampled_from([3, 4, 5, 7, 8, 12]), small, small)
@settings(max_examples=60, deadline=None)
def test_cyclotomic_norm_multiplicative(m, a, b):
    x, y = _cyc(m, a), _cyc(m, b)
    assert (x * y).norm() == x.norm() * y.norm()
    assert x * y == y * x
    if not x.is_zero():
        assert x * x.inverse() == CycNumber.rational(1)


@given(st.sampled_from([(4, 5), (4, 13), (3, 7), (5, 11), (8, 17)]), small, small)
@settings(max_examples=60, deadline=None)
def test_valuation_multiplicative(me, a, b):
    m, ell = me
    x, y = _cyc(m, a), _cyc(m, b)
    if x.is_zero() or y.is_zero():
        return
    assert v_cyclotomic(x * y, ell) == v_cyclotomic(x, ell) + v_cyclotomic(y, ell)
    assert v_cyclotomic(x * ell, ell) == v_cyclotomic(x, ell) + 1


@given(st.integers(-50, 50), st.integers(1, 12))
def test_descent_exponent_is_floor(n, e):
    # -1 + ceil((n+1)/e) is the largest k with e(k+1) <= n + 1 + e - 1
    k = descent_exponent(n, e)
    assert e * (k + 1) >= n + 1 > e * k


@given(st.integers(0, len(COVERS) - 1), st.integers(0, 10 ** 6))
@slow
def test_random_divisors_oracle_equals_engine(i, seed):
    cov = _cover(i)
    D = divisor(cov, random_divisor(cov, random.Random(seed)))
    b = bundle_from_divisor(cov, D)
    lhs, _, _ = euler_brauer(cov, D)
    assert lhs == euler_char(cov.cover, b)
    assert degree_identity(cov.cover, b)["holds"]


@given(st.integers(0, len(COVERS) - 1), st.integers(0, 10 ** 6), st.data())
@slow
def test_ra_additive_in_psi(i, seed, data):
    cov = _cover(i)
    b = bundle_from_divisor(cov, divisor(cov, random_divisor(cov, random.Random(seed))))
    irr = irreducible_characters(cov.cover.group)
    a = data.draw(st.sampled_from(irr))
    c = data.draw(st.sampled_from(irr))
    k = data.draw(st.integers(1, 3))
    assert ra_fraction(cov.cover, b, a + c) == ra_fraction(cov.cover, b, a) + ra_fraction(cov.cover, b, c)
    assert ra_fraction(cov.cover, b, a * k) == k * ra_fraction(cov.cover, b, a)


@given(st.integers(0, len(COVERS) - 1), st.data())
@slow
def test_m_psi_sum(i, data):
    cov = _cover(i)
    for pl in cov.cover.places:
        d = pl.datum
        psi = data.draw(st.sampled_from(irreducible_characters(d.group)))
        assert sum(m_psi_w(psi, d, j) for j in range(d.e)) == d.f_w * psi.degree


@given(st.sampled_from([2, 3, 5, 7]), st.lists(st.integers(0, 6), min_size=1, max_size=4),
       st.lists(st.integers(0, 6), min_size=1, max_size=4))
@settings(max_examples=40, deadline=None)
def test_pth_powers(p, num, den):
    F = field_of_size(p)
    num = [c % p for c in num]
    den = [c % p for c in den]
    if not polys.trim(den) or not polys.trim(num):
        return
    # (num/den)^p has coefficients c_i at t^{p i}
    def frob(f):
        out = [0] * (p * (len(f) - 1) + 1)
        for i, c in enumerate(f):
            out[p * i] = c
        return out
    assert in_pth_powers(frob(num), frob(den), p)
    if polys.deg(polys.trim(num)) % p and polys.deg(polys.trim(den)) == 0:
        assert not in_pth_powers(num, den, p)
