from eqrr.oracle import GDivisor
from eqrr.suite import minus_z as _mz

INF = "inf"
ZERO = (0, 1)


def divisor(cover, entries):
    return GDivisor.from_orbits(cover, entries)


def minus_z(cover):
    return divisor(cover, _mz(cover))
