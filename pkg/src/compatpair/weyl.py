"""Weyl calculus on the line in 2 pi conventions.

Operators on L^2(R):

    (P f)(x) = (1/2 pi i) f'(x),  (Q f)(x) = x f(x),
    W(s, t) = e^{2 pi i (s Q + t P)},  (W(s,t) f)(x) = e^{pi i s t} e^{2 pi i s x} f(x + t).

Quantization of a phase-space symbol,

    Op(a) = iint ahat(s, t) W(s, t) ds dt,

is realized through the position integral kernel

    K(x, y) = int a((x+y)/2, tau) e^{2 pi i (x - y) tau} dtau,

computed by a zero-padded partial transform in the second variable and a
spectral shear in the first (the half-step midpoint refinement done in
frequency space).  The twisted product a # b is fixed operationally by
Op(a # b) = Op(a) Op(b); it is evaluated through the conjugate
(momentum-side) kernel

    Kt(p, p') = int a(m, (p+p')/2) e^{-2 pi i (p - p') m} dm,

composed by quadrature matrix product.  The two kernel representations
discretize independently, so the homomorphism defect is a real, grid-
refinable residual rather than an identity of the code with itself.
Desk-scale brute-force quadratures of the Op integral and of the
quadruple-integral product formula are provided as oracles.

The product formula carries the normalization

    (a # b)(x) = 4 iint a(u) b(v) e^{4 pi i [(x1-u1)(x2-v2)-(x1-v1)(x2-u2)]} du dv,

whose prefactor is pinned by idempotency of the rank-one projector symbol
a00 = 2 exp(-2 pi |z|^2) and by the operator-product identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._ft import centered_ft, centered_ft_matrix, lattice, upsample2
from .errors import LatticeError, StructureError
from .symbols import DEFAULT_DECAY_GUARD, PhaseGrid, PhaseSymbol

DEFAULT_HERMITE_DIM = 32


@dataclass(frozen=True)
class LinearOperatorMatrix:
    """Dense complex matrix tagged with its basis: ("grid", N, L) or ("hermite", M)."""

    entries: np.ndarray
    basis: tuple

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise StructureError("operator matrix must be square")
        kind = self.basis[0]
        if kind == "grid":
            if e.shape[0] != self.basis[1]:
                raise StructureError("grid basis dimension mismatch")
        elif kind == "hermite":
            if e.shape[0] != self.basis[1]:
                raise StructureError("hermite basis dimension mismatch")
        else:
            raise StructureError(f"unknown basis tag {kind!r}")

    def adjoint(self) -> "LinearOperatorMatrix":
        return LinearOperatorMatrix(self.entries.conj().T, self.basis)

    def __matmul__(self, other: "LinearOperatorMatrix") -> "LinearOperatorMatrix":
        if self.basis != other.basis:
            raise StructureError("operator bases differ")
        return LinearOperatorMatrix(self.entries @ other.entries, self.basis)

    def __sub__(self, other: "LinearOperatorMatrix") -> "LinearOperatorMatrix":
        if self.basis != other.basis:
            raise StructureError("operator bases differ")
        return LinearOperatorMatrix(self.entries - other.entries, self.basis)

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries, 2))


# ---------------------------------------------------------------------------
# Hermite basis in the 2 pi normalization (ground state 2^{1/4} e^{-pi x^2})
# ---------------------------------------------------------------------------

def hermite_functions(x: np.ndarray, m: int) -> np.ndarray:
    """Orthonormal Hermite functions h_0..h_{m-1} columnwise, by stable recurrence."""
    x = np.asarray(x, dtype=float)
    H = np.zeros(x.shape + (m,))
    H[..., 0] = 2.0 ** 0.25 * np.exp(-np.pi * x ** 2)
    if m > 1:
        H[..., 1] = 2.0 * np.sqrt(np.pi) * x * H[..., 0]
    for n in range(1, m - 1):
        H[..., n + 1] = (2.0 * np.sqrt(np.pi / (n + 1)) * x * H[..., n]
                         - np.sqrt(n / (n + 1)) * H[..., n - 1])
    return H


def position_matrix(m: int) -> np.ndarray:
    """Q in the Hermite basis: tridiagonal with sqrt(n)/(2 sqrt(pi))."""
    n = np.arange(1, m)
    off = np.sqrt(n) / (2.0 * np.sqrt(np.pi))
    return np.diag(off, 1) + np.diag(off, -1) + 0j


def momentum_matrix(m: int) -> np.ndarray:
    """The momentum operator -i d/dx in the Hermite basis.

    This is 2 pi times the generator P of W(0, t); the rescaling makes the
    Heisenberg relation read [P_mat, Q_mat] = -i I, matching the defining
    relation p x - x p = -i of the algebra the actions represent.
    """
    n = np.arange(1, m)
    off = np.sqrt(np.pi) * np.sqrt(n)
    return 1j * np.diag(off, -1) - 1j * np.diag(off, 1)


# ---------------------------------------------------------------------------
# Grid bookkeeping
# ---------------------------------------------------------------------------

def _pad_length(grid: PhaseGrid) -> int:
    """u-lattice length for the position kernel: 1/dx^2 bins of spacing dx."""
    inv = 1.0 / grid.dx ** 2
    n_pad = int(round(inv))
    if abs(n_pad - inv) > 1e-9 * inv or n_pad < grid.n:
        raise StructureError(
            "Weyl operations need N >= (2L)^2 with 1/dx^2 integral; "
            f"got N={grid.n}, L={grid.half_width}")
    return n_pad


def _mid_log2_factor(grid: PhaseGrid) -> int:
    """log2 of the midpoint ratio 8 L^2 / N; must be 0 or 1.

    Below (2L)^2 points the box is unresolved; above 2 (2L)^2 the momentum
    lattice midpoints undersample the second variable and the kernel map
    is lossy, so both regimes are rejected.
    """
    f = 8.0 * grid.half_width ** 2 / grid.n
    z = int(round(np.log2(f)))
    if abs(2.0 ** z - f) > 1e-9 * f or z not in (0, 1):
        raise StructureError(
            "the momentum path requires (2L)^2 <= N <= 2 (2L)^2 with a power-of-two ratio; "
            f"got N={grid.n}, L={grid.half_width}")
    return z


@lru_cache(maxsize=32)
def _position_gather(n: int, n_pad: int):
    j = np.arange(n)
    return (j[:, None] - j[None, :] + n_pad // 2) % n_pad


# ---------------------------------------------------------------------------
# Position-side kernel (quantization path)
# ---------------------------------------------------------------------------

def kernel_position(a: PhaseSymbol) -> np.ndarray:
    """Integral kernel K(x, y) of Op(a) on the grid, K[j, k] = K(x_j, x_k)."""
    grid = a.grid
    n, dx = grid.n, grid.dx
    n_pad = _pad_length(grid)
    # A(m, u) = int a(m, tau) e^{2 pi i u tau} dtau on the u-lattice of spacing dx
    A = centered_ft(a.samples, dx, axis=1, n_out=n_pad, sign=+1)
    # shear to B(x, u) = A(x - u/2, u) through the first-variable spectrum
    dnu = 1.0 / (n * dx)
    F = centered_ft(A, dx, axis=0, sign=-1)
    nu = lattice(n, dnu)
    u = lattice(n_pad, dx)
    F *= np.exp(-1j * np.pi * np.outer(nu, u))
    B = centered_ft(F, dnu, axis=0, n_out=n, sign=+1)
    K = B[np.arange(n)[:, None], _position_gather(n, n_pad)]
    if n_pad < 2 * n - 1:
        # entries beyond the representable u-range fold back; blank them
        j = np.arange(n)
        K = np.where(np.abs(j[:, None] - j[None, :]) < n_pad // 2, K, 0.0)
    return K


def symbol_from_kernel_position(K: np.ndarray, grid: PhaseGrid) -> PhaseSymbol:
    """Inverse of kernel_position: a(m, tau) = int K(m+u/2, m-u/2) e^{-2 pi i u tau} du."""
    n, dx = grid.n, grid.dx
    n_pad = _pad_length(grid)
    jj, ll = np.indices((n, n_pad))
    kk = jj - (ll - n_pad // 2)
    valid = (kk >= 0) & (kk < n)
    B = np.zeros((n, n_pad), dtype=complex)
    B[valid] = np.asarray(K)[jj[valid], kk[valid]]
    dnu = 1.0 / (n * dx)
    F = centered_ft(B, dx, axis=0, sign=-1)
    nu = lattice(n, dnu)
    u = lattice(n_pad, dx)
    F *= np.exp(+1j * np.pi * np.outer(nu, u))
    A = centered_ft(F, dnu, axis=0, n_out=n, sign=+1)
    sam = centered_ft(A, dx, axis=1, n_out=n_pad, sign=-1)
    lo = (n_pad - n) // 2
    return PhaseSymbol(grid, sam[:, lo:lo + n])


def weyl_op(a: PhaseSymbol, basis: str = "hermite", m: int = DEFAULT_HERMITE_DIM,
            guard: float = DEFAULT_DECAY_GUARD) -> LinearOperatorMatrix:
    """Matrix of Op(a) in the grid or truncated-Hermite basis."""
    a.require_decay(guard)
    grid = a.grid
    K = kernel_position(a)
    if basis == "grid":
        return LinearOperatorMatrix(K * grid.dx, ("grid", grid.n, grid.half_width))
    if basis == "hermite":
        if m > grid.n // 2:
            raise StructureError("hermite dimension must not exceed N/2")
        H = hermite_functions(grid.points(), m)
        mat = grid.dx ** 2 * (H.conj().T @ K @ H)
        return LinearOperatorMatrix(mat, ("hermite", m))
    raise StructureError(f"unknown basis {basis!r}")


def opnorm(a: PhaseSymbol, m: int = DEFAULT_HERMITE_DIM,
           guard: float = DEFAULT_DECAY_GUARD) -> float:
    """Operator norm of Op(a), approximated in the truncated Hermite basis."""
    return weyl_op(a, "hermite", m, guard).norm()


# ---------------------------------------------------------------------------
# Momentum-side kernel (product path)
# ---------------------------------------------------------------------------

def kernel_momentum(a: PhaseSymbol) -> np.ndarray:
    """Kernel of Op(a) in the momentum representation, on the 1/(2L) lattice.

    Kt[j, k] = F1a((p_j - p_k), (p_j + p_k)/2) with p on the centered dp
    lattice, dp = 1/(2L).  The first-variable transform is computed at
    half-step input resolution so the full difference range (-2 Pi, 2 Pi)
    is covered without folding; midpoints are reached by power-of-two
    spectral upsampling of the second variable.
    """
    grid = a.grid
    n, dx = grid.n, grid.dx
    z = _mid_log2_factor(grid)
    # F1a(sigma, y) on the sigma lattice of spacing dp covering (-2Pi, 2Pi)
    up1 = upsample2(a.samples, dx, axis=0)
    F1 = centered_ft(up1, dx / 2.0, axis=0, n_out=2 * n, sign=-1)
    up = F1
    for _ in range(max(z, 0)):
        up = upsample2(up, 2.0 * grid.half_width / up.shape[1], axis=1)
    # columns sample y_m = (m - N) dp/2 at stride max(1, 1/f) in the x2 lattice
    stride = 2 ** max(-z, 0)
    u = 2 ** max(z, 0)
    j = np.arange(n)
    rows = j[:, None] - j[None, :] + n
    cols = (j[:, None] + j[None, :] - n) * stride + u * n // 2
    K = np.zeros((n, n), dtype=complex)
    valid = (cols >= 0) & (cols < up.shape[1])
    K[valid] = up[rows[valid], cols[valid]]
    return K


def symbol_from_kernel_momentum(K: np.ndarray, grid: PhaseGrid) -> PhaseSymbol:
    """Inverse of kernel_momentum via exact conjugation to the position kernel.

    The centered discrete transform intertwines the two grid representations
    exactly (the momentum lattice is the DFT-dual of the position grid), so
    K_pos = F^+_0 F^-_1 K with the dp-weighted centered transforms; the
    position-side inverse then recovers the symbol.
    """
    _mid_log2_factor(grid)  # validate the grid regime
    dp = 1.0 / (2.0 * grid.half_width)
    Kp = centered_ft(np.asarray(K, dtype=complex), dp, axis=0, sign=+1)
    Kp = centered_ft(Kp, dp, axis=1, sign=-1)
    return symbol_from_kernel_position(Kp, grid)


def star(a: PhaseSymbol, b: PhaseSymbol, guard: float = DEFAULT_DECAY_GUARD) -> PhaseSymbol:
    """Twisted product a # b with Op(a # b) = Op(a) Op(b)."""
    a._check_same_grid(b)
    a.require_decay(guard)
    b.require_decay(guard)
    dp = 1.0 / (2.0 * a.grid.half_width)
    Kc = (kernel_momentum(a) @ kernel_momentum(b)) * dp
    return symbol_from_kernel_momentum(Kc, a.grid)


# ---------------------------------------------------------------------------
# Weyl-Heisenberg unitaries on grid vectors
# ---------------------------------------------------------------------------

def weyl_unitary(s: float, t: float, f: np.ndarray, grid: PhaseGrid) -> np.ndarray:
    """(W(s,t) f)(x) = e^{pi i s t} e^{2 pi i s x} f(x + t); lattice (s, t) only.

    s must lie on the 1/(2L) lattice and t on the dx lattice, so the shift
    is an exact periodic reindexing and the group law holds with exact
    phases.  No interpolation is performed by design.
    """
    n, dx = grid.n, grid.dx
    f = np.asarray(f, dtype=complex)
    if f.shape != (n,):
        raise StructureError("vector length must match the grid")
    ds = 1.0 / (2.0 * grid.half_width)
    ks = s / ds
    kt = t / dx
    if abs(ks - round(ks)) > 1e-9 or abs(kt - round(kt)) > 1e-9:
        raise LatticeError(f"(s, t) = ({s}, {t}) is off the admissible lattice")
    shifted = np.roll(f, -int(round(kt)))
    x = grid.points()
    return np.exp(1j * np.pi * s * t) * np.exp(2j * np.pi * s * x) * shifted


# ---------------------------------------------------------------------------
# Desk-scale brute-force oracles
# ---------------------------------------------------------------------------

def op_direct_quadrature(a: PhaseSymbol, guard: float = DEFAULT_DECAY_GUARD) -> LinearOperatorMatrix:
    """Op(a) = sum_{s,t} ahat(s,t) W(s,t) dnu^2 summed literally on a self-dual grid.

    Independent of the kernel path: ahat by dense quadrature matrices, each
    W(s, t) applied as modulation and exact periodic shift.  O(N^3); meant
    for small grids with N = (2L)^2.
    """
    a.require_decay(guard)
    grid = a.grid
    n, dx = grid.n, grid.dx
    if abs(grid.n - (2.0 * grid.half_width) ** 2) > 1e-9:
        raise StructureError("direct quadrature oracle needs the self-dual grid N = (2L)^2")
    E = centered_ft_matrix(n, dx, n, sign=-1)
    ahat = E @ a.samples @ E.T
    dnu = 1.0 / (2.0 * grid.half_width)
    nu = lattice(n, dnu)
    x = grid.points()
    G = np.zeros((n, n), dtype=complex)
    base = np.arange(n)
    mod = np.exp(2j * np.pi * np.outer(x, nu))
    for it, t in enumerate(nu):
        sh = int(round(t / dx))
        col = ahat[:, it] * np.exp(1j * np.pi * nu * t)
        G[base, (base + sh) % n] += dnu * dnu * (mod @ col)
    return LinearOperatorMatrix(G, ("grid", n, grid.half_width))


def op_direct_hermite(a: PhaseSymbol, m: int,
                      guard: float = DEFAULT_DECAY_GUARD) -> LinearOperatorMatrix:
    """Hermite-basis matrix of the direct-quadrature oracle."""
    G = op_direct_quadrature(a, guard).entries
    grid = a.grid
    H = hermite_functions(grid.points(), m)
    return LinearOperatorMatrix(grid.dx * (H.conj().T @ G @ H), ("hermite", m))


def star_direct_quadrature(a: PhaseSymbol, b: PhaseSymbol) -> PhaseSymbol:
    """Literal quadruple-integral quadrature of the product formula (factor 4).

    O(N^5) with the phase factorization below; desk scale only (N <= 32).
    """
    a._check_same_grid(b)
    grid = a.grid
    if grid.n > 32:
        raise StructureError("quadruple-integral oracle is desk scale; use N <= 32")
    x = grid.points()
    dx = grid.dx
    A, B = a.samples, b.samples
    out = np.zeros((grid.n, grid.n), dtype=complex)
    for j, x1 in enumerate(x):
        d1 = x1 - x
        for k, x2 in enumerate(x):
            d2 = x2 - x
            E2 = np.exp(-4j * np.pi * np.outer(d1, d2))   # rows v1, cols u2
            E1 = np.exp(4j * np.pi * np.outer(d1, d2))    # rows u1, cols v2
            out[j, k] = np.sum(E1 * (A @ (E2.T @ B)))
    return PhaseSymbol(grid, 4.0 * out * dx ** 4)


def convention_self_test(m: int = 16) -> float:
    """Kernel path vs direct quadrature on the projector symbol; returns the gap.

    Run on the (64, 4) self-dual grid; a gap beyond 1e-4 signals broken
    transform conventions.
    """
    from .symbols import GaussianTermSymbol
    grid = PhaseGrid(64, 4.0)
    a00 = GaussianTermSymbol.standard().render(grid)
    kern = weyl_op(a00, "hermite", m)
    direct = op_direct_hermite(a00, m)
    return float(np.linalg.norm(kern.entries - direct.entries))
