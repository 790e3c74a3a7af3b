"""compatpair: compatible pairs of *-algebras verified at finite truncation."""

from .algebra import (AlgebraElement, Alphabet, Generator, Presentation,
                      adjoint, commutative_polynomials, heisenberg_pair,
                      multiply, quantum_plane, quantum_plane_parity, su11)
from .actions import ActionParams, BlockSymbol, compat_residual
from .scenarios import Report, Scenario, run_scenario
from .symbols import GaussianTermSymbol, PhaseGrid, PhaseSymbol, fourier
from .weyl import LinearOperatorMatrix, opnorm, star, weyl_op, weyl_unitary

__version__ = "0.1.0"
