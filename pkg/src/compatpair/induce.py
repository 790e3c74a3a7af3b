"""Induced representations at finite truncation.

Given matrices rho(b_i) of a *-representation of B on an M-dimensional
space, test vectors phi_j, and the matrices rho(x |> b_i) of an acted
family, the engine constructs the induced operator on the span

    D = span { rho(b_i) phi_j }

by a rank-revealing factorization and least squares:

    T_x [rho(b_i) phi_j] = [rho(x |> b_i) phi_j]   (projected onto D).

Diagnostics mirror the well-definedness argument: any coefficient null
vector c of the generating family (so sum c rho(b_i) phi_j = 0) must be
annihilated by the acted family; the residual max_c || sum c rho(x|>b_i) phi_j ||
quantifies the failure, and out-of-span leakage of the acted columns is
recorded separately.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateDomainError, StructureError

DEFAULT_RANK_TOL = 1e-10


@dataclass(frozen=True)
class FiniteRep:
    """Named representation matrices on a common space plus the claimed
    continuity constant ||rho(b)|| <= C ||b||."""

    ops: Mapping[str, np.ndarray]
    norm_bound: float = 1.0

    def dim(self) -> int:
        return next(iter(self.ops.values())).shape[0]


@dataclass
class DomainBasis:
    basis: np.ndarray          # M x r orthonormal columns
    generators: np.ndarray     # M x K raw columns rho(b_i) phi_j
    null_vectors: np.ndarray   # K x (K - r) coefficient null space
    rank_tol: float
    singular_values: np.ndarray = field(default=None)
    right_vectors: np.ndarray = field(default=None)  # K x r, from the same SVD

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def coefficient_pinv(self) -> np.ndarray:
        """Exact pseudoinverse of Q* V from the stored factorization."""
        return self.right_vectors / self.singular_values[: self.rank]


def build_domain(rep_columns: Sequence[np.ndarray], vectors: Sequence[np.ndarray],
                 rank_tol: float = DEFAULT_RANK_TOL,
                 null_tol: float = 1e-12) -> DomainBasis:
    """Orthonormal basis of span { B_i phi_j } via SVD rank revelation.

    ``rank_tol`` cuts the basis (and conditions the induced least squares);
    ``null_tol`` is the much tighter threshold below which a coefficient
    direction counts as a true cancellation for the well-definedness test.
    """
    cols = []
    for B in rep_columns:
        B = np.asarray(B, dtype=complex)
        for phi in vectors:
            cols.append(B @ np.asarray(phi, dtype=complex))
    V = np.stack(cols, axis=1)
    U, s, Vh = np.linalg.svd(V, full_matrices=True)
    if s.size == 0 or s[0] <= 0:
        raise DegenerateDomainError("representation images span the zero space")
    keep = s > rank_tol * s[0]
    if not keep.any():
        raise DegenerateDomainError("all singular values below the rank tolerance")
    rank = int(keep.sum())
    n_null = int((s <= null_tol * s[0]).sum()) + (V.shape[1] - len(s))
    null = Vh[V.shape[1] - n_null:].conj().T if n_null > 0 else \
        np.zeros((V.shape[1], 0), dtype=complex)
    return DomainBasis(basis=U[:, :rank], generators=V, null_vectors=null,
                       rank_tol=rank_tol, singular_values=s,
                       right_vectors=Vh[:rank].conj().T)


@dataclass
class InducedOperator:
    matrix: np.ndarray          # r x r in the domain basis
    welldef_residual: float
    leakage: float


@dataclass
class InducedRep:
    """Induced operators keyed by element name, with their diagnostics."""

    matrices: dict = field(default_factory=dict)
    welldef: dict = field(default_factory=dict)
    leakage: dict = field(default_factory=dict)
    symmetry: dict = field(default_factory=dict)

    def store(self, name: str, op: InducedOperator):
        self.matrices[name] = op.matrix
        self.welldef[name] = op.welldef_residual
        self.leakage[name] = op.leakage

    def record_symmetry(self, name: str, adjoint_name: str):
        self.symmetry[name] = symmetry_residual(self.matrices[name],
                                                self.matrices[adjoint_name])
        return self.symmetry[name]

    def complete(self) -> bool:
        keys = set(self.matrices)
        return set(self.welldef) == keys and set(self.leakage) == keys


def induce(domain: DomainBasis, acted_columns: Sequence[np.ndarray],
           vectors: Sequence[np.ndarray],
           welldef_rows: np.ndarray | None = None) -> InducedOperator:
    """Induced matrix T with T (Q* V) = Q* V_x in least squares.

    ``acted_columns`` are the matrices rho(x |> b_i), aligned with the
    generator order used for the domain.  ``welldef_rows`` optionally
    restricts the null-image test to interior carrier rows, discounting
    truncation-boundary leakage.
    """
    cols = []
    for B in acted_columns:
        B = np.asarray(B, dtype=complex)
        for phi in vectors:
            cols.append(B @ np.asarray(phi, dtype=complex))
    Vx = np.stack(cols, axis=1)
    if Vx.shape != domain.generators.shape:
        raise StructureError("acted family shape differs from the generating family")
    Q = domain.basis
    W = Q.conj().T @ Vx
    # least squares against Q* V through the domain's own factorization:
    # (Q* V)+ = W_r diag(1/s_r) exactly, no second rank decision
    T = W @ domain.coefficient_pinv()
    if domain.null_vectors.shape[1] > 0:
        imgs = Vx @ domain.null_vectors
        if welldef_rows is not None:
            imgs = imgs[np.asarray(welldef_rows, dtype=bool)]
        wd = float(np.linalg.norm(imgs, 2))
    else:
        wd = 0.0
    leak = float(np.linalg.norm(Vx - Q @ W, 2))
    return InducedOperator(matrix=T, welldef_residual=wd, leakage=leak)


def symmetry_residual(t_x: np.ndarray, t_xadj: np.ndarray) -> float:
    """|| T_x* - T_{x+} || on the domain."""
    return float(np.linalg.norm(np.asarray(t_x).conj().T - np.asarray(t_xadj), 2))


def homomorphism_residual(t_xy: np.ndarray, t_x: np.ndarray, t_y: np.ndarray,
                          mask: np.ndarray | None = None) -> float:
    """|| T_{nf(xy)} - T_x T_y ||, optionally compressed to interior modes."""
    D = np.asarray(t_xy) - np.asarray(t_x) @ np.asarray(t_y)
    if mask is not None:
        D = D[np.ix_(mask, mask)]
    return float(np.linalg.norm(D, 2))
