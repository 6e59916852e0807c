"""Pseudo-spectral deep-water waves in holomorphic (conformal) coordinates.

Thin python layer over the C++ core: spectral calculus on periodic traces,
the conformal parametrization builder, traveling-wave solves, and the
Hamiltonian evolution, all on plain numpy arrays.
"""

from ._wavecf import *  # noqa: F401,F403
from ._wavecf import __version__  # noqa: F401
