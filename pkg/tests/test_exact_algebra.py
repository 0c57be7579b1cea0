from fractions import Fraction

import numpy as np
import pytest

from eqrr import _kernels as K
from eqrr import linalg as LA
from eqrr import polys
from eqrr.cyclotomic import CycNumber, cyclotomic_poly, sum_roots
from eqrr.fields import FieldError, GF, conway_polynomial, field_of_size
from eqrr.intutil import euler_phi, factorize, mult_order, valuation


# ------------------------------------------------------------ fields

def test_prime_field():
    F = GF(5)
    assert F.q == 5 and F.n == 1
    assert F.add(3, 4) == 2 and F.mul(3, 4) == 2 and F.inv(2) == 3


def test_f4_generator_satisfies_quadratic():
    F = GF(2, 2)
    assert F.modulus == (1, 1, 1)
    g = F.generator
    assert F.mul(g, g) == F.add(g, 1)


def test_f9_from_x2_plus_1():
    # x^2 + 1 has no root in F_3
    assert all((a * a + 1) % 3 for a in range(3))
    F = GF(3, 2, modulus=(1, 0, 1))
    assert F.q == 9
    assert len({F.pow(a, 8) for a in range(1, 9)}) == 1


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        GF(5, 2, modulus=(4, 0, 1))  # x^2 - 1


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 13, 16, 25, 27, 49])
def test_field_axioms_exhaustive(q):
    F = field_of_size(q)
    els = list(F.elements())
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.pow(a, q - 1) == 1
    # Frobenius is additive
    for a in els[: min(q, 10)]:
        for b in els[: min(q, 10)]:
            assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))


def test_conway_generators():
    assert GF(5).conway.modulus == (3, 1) and GF(5).conway.generator == 2
    assert conway_polynomial(7, 2) == (3, 6, 1)


# ------------------------------------------------------------ Brauer lift

def test_lift_examples():
    F = GF(5)
    assert F.generator == 2
    assert F.lift(1, 4) == CycNumber.rational(1)
    assert F.lift(2, 4) == CycNumber.root(4)
    assert F.lift(4, 4) == CycNumber.rational(-1)


def test_lift_is_multiplicative():
    F = GF(7, 2)
    m = 48
    for a in range(1, 49, 5):
        for b in range(1, 49, 7):
            assert F.lift(F.mul(a, b), m) == F.lift(a, m) * F.lift(b, m)


# ------------------------------------------------------------ polynomials

def test_factor_x2_plus_1_over_f5():
    F = GF(5)
    lead, fac = polys.factor_polynomial(F, [1, 0, 1])
    assert lead == 1 and sorted(f for f, _ in fac) == [[2, 1], [3, 1]]
    assert polys.expand(F, lead, fac) == [1, 0, 1]


def test_factor_x_over_f2():
    assert polys.factor_polynomial(GF(2), [0, 1]) == (1, [([0, 1], 1)])


def test_x4_minus_1_splits_over_f5():
    F = GF(5)
    _, fac = polys.factor_polynomial(F, [4, 0, 0, 0, 1])
    assert sorted(f[0] for f, _ in fac) == [1, 2, 3, 4]
    assert all(len(f) == 2 for f, _ in fac)


def test_factor_with_multiplicity_over_f9():
    F = GF(3, 2)
    f = polys.mul(F, polys.mul(F, [1, 1], [1, 1]), [F.generator, 0, 1])
    lead, fac = polys.factor_polynomial(F, f)
    assert polys.expand(F, lead, fac) == polys.trim(f)
    assert all(polys.is_irreducible(F, g) for g, _ in fac)


# ------------------------------------------------------------ linear algebra

def test_rank_and_solve_verified(backend):
    F = GF(5)
    A = np.array([[1, 2, 3], [2, 4, 1], [3, 1, 4]])
    assert LA.ff_rank(F, A) <= 3
    x = LA.ff_solve(F, A, np.array([1, 0, 0]))
    if x is not None:
        assert list(LA.ff_matmul(F, A, x.reshape(-1, 1)).reshape(-1)) == [1, 0, 0]


def test_nullspace_annihilates(backend):
    F = GF(3, 2)
    rng = np.random.default_rng(1)
    A = rng.integers(0, 9, (4, 7))
    N = LA.ff_nullspace(F, A)
    assert N.shape[0] == 7 - LA.ff_rank(F, A) or N.shape[1] == 7 - LA.ff_rank(F, A)
    prod = LA.ff_matmul(F, A, N if N.shape[0] == 7 else N.T)
    assert not prod.any()


def test_inverse(backend):
    F = GF(7)
    A = np.array([[2, 1], [1, 1]])
    Ai = LA.ff_inverse(F, A)
    assert (LA.ff_matmul(F, A, Ai) == np.eye(2, dtype=np.int64)).all()


def test_backends_agree():
    F = GF(5, 2)
    rng = np.random.default_rng(3)
    A = rng.integers(0, 25, (9, 9))
    B = rng.integers(0, 25, (9, 9))
    out = {}
    for b in ("numpy", "numba") if K._HAVE_NUMBA else ("numpy",):
        old = K.backend()
        K.set_backend(b)
        out[b] = (K.matmul(A, B, F.tables), K.rref(A, F.tables)[0])
        K.set_backend(old)
    if len(out) == 2:
        assert (out["numpy"][0] == out["numba"][0]).all()
        assert (out["numpy"][1] == out["numba"][1]).all()


def test_rational_linalg():
    M = [[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]]
    assert LA.rational_det(M) == -2
    assert LA.rational_rank(M) == 2
    assert LA.rational_solve(M, [Fraction(5), Fraction(6)]) == [-4, Fraction(9, 2)]


# ------------------------------------------------------------ cyclotomic numbers

def test_cyclotomic_polynomials():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)


def test_root_arithmetic():
    z3 = CycNumber.root(3)
    assert z3 * z3 * z3 == CycNumber.rational(1)
    assert z3 + z3 * z3 == CycNumber.rational(-1)
    # zeta_6 = -zeta_3^2 lives in Q(zeta_3)
    assert CycNumber.root(6) == -(z3 * z3)


def test_norm_and_galois():
    i = CycNumber.root(4)
    x = i - CycNumber.rational(2)
    assert x.norm() == 5
    assert x.galois(3) == x.conjugate()
    assert (x * x.inverse()) == CycNumber.rational(1)


def test_sum_roots_regular():
    # sum of all m-th roots of unity vanishes for m > 1
    assert sum_roots(5, range(5)).is_zero()
    assert sum_roots(1, [0, 0, 0]) == CycNumber.rational(3)


def test_coerce_between_conductors():
    i = CycNumber.root(4)
    assert i.coerce(12) * i.coerce(12) == CycNumber.rational(-1)
    assert CycNumber.rational(Fraction(1, 2)).coerce(4) == CycNumber.rational(Fraction(1, 2))


# ------------------------------------------------------------ integers

def test_integer_helpers():
    assert factorize(360) == ((2, 3), (3, 2), (5, 1))
    assert euler_phi(12) == 4
    assert mult_order(5, 3) == 2 and mult_order(2, 7) == 3
    assert valuation(250, 5) == 3


def test_env_switch_selects_numpy_backend():
    import os
    import subprocess
    import sys
    env = dict(os.environ, EQRR_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from eqrr import _kernels; print(_kernels.backend())"],
                         env=env, capture_output=True, text=True, check=True).stdout.strip()
    assert out == "numpy"
