"""Equivariant Riemann-Roch for weakly ramified covers of curves, psi-parts
of equivariant Euler characteristics, and the leading-term assembly built on
them."""

__version__ = "0.1.0"

from .engine import BundleData, CoverData, Place, euler_char  # noqa: E402
from .psi import LambdaSpec, ra  # noqa: E402

__all__ = ["__version__", "BundleData", "CoverData", "Place", "euler_char", "LambdaSpec", "ra"]
