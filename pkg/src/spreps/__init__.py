"""Exact-arithmetic workbench for finite symplectic groups.

Builds Sp_2n(F_q), its Siegel parabolic and oscillator representations,
classifies symmetric bilinear forms, computes character tables and
N-spectra, runs the eta correspondence between orthogonal-group characters
and low-rank symplectic irreducibles, and tabulates commutator statistics.
"""

__version__ = "0.1.0"

from .exactnum import CycloNum, CycloMatrix, Rational, embed_complex  # noqa: F401
from .gfq import GF, field, gauss_sum  # noqa: F401
