"""Phase-space symbols on a square centered grid, plus the Gaussian-term oracle class.

A PhaseSymbol holds N x N complex samples of a(x1, x2) at points
(x1, x2) in [-L, L)^2 with spacing dx = 2L/N.  The 2-D Fourier transform

    ahat(s, t) = iint exp(-2 pi i (s x1 + t x2)) a(x1, x2) dx1 dx2

lands on the conjugate grid with spacing 1/(2L) and half-width N/(4L).

GaussianTermSymbol represents sums of terms

    c * exp(-pi <A z, z> + <b, z>),   z = (x1, x2),  Re A > 0,

which are closed under Fourier transform, complex argument shifts, linear
modulations and conjugation; they serve as independent analytic oracles
for the grid paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._ft import centered_ft, lattice
from .errors import DecayGuardError, LatticeError, StructureError

DEFAULT_DECAY_GUARD = 1e-8


@dataclass(frozen=True)
class PhaseGrid:
    """Square centered grid: n samples per axis over [-half_width, half_width)."""

    n: int
    half_width: float

    def __post_init__(self):
        if self.n < 16 or (self.n & (self.n - 1)) != 0:
            raise StructureError("grid size must be a power of two, at least 16")
        if self.half_width <= 0:
            raise StructureError("box half-width must be positive")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.n

    def points(self) -> np.ndarray:
        return lattice(self.n, self.dx)

    def dual(self) -> "PhaseGrid":
        return PhaseGrid(self.n, self.n / (4.0 * self.half_width))

    def mesh(self):
        x = self.points()
        return x[:, None], x[None, :]


class PhaseSymbol:
    """Complex samples on a PhaseGrid.  Values are immutable after construction."""

    __slots__ = ("grid", "samples")

    def __init__(self, grid: PhaseGrid, samples: np.ndarray):
        samples = np.ascontiguousarray(samples, dtype=complex)
        if samples.shape != (grid.n, grid.n):
            raise StructureError(f"samples must be {grid.n} x {grid.n}")
        samples.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "samples", samples)

    def __setattr__(self, *_):
        raise AttributeError("PhaseSymbol is immutable")

    @staticmethod
    def from_function(grid: PhaseGrid, fn: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> "PhaseSymbol":
        x1, x2 = grid.mesh()
        return PhaseSymbol(grid, np.broadcast_to(fn(x1, x2), (grid.n, grid.n)).copy())

    @staticmethod
    def zero(grid: PhaseGrid) -> "PhaseSymbol":
        return PhaseSymbol(grid, np.zeros((grid.n, grid.n)))

    def sup(self) -> float:
        return float(np.max(np.abs(self.samples)))

    def decay_ratio(self) -> float:
        """Max modulus on the outermost two grid rings relative to the global max."""
        s = np.abs(self.samples)
        peak = s.max()
        if peak == 0.0:
            return 0.0
        ring = max(s[:2, :].max(), s[-2:, :].max(), s[:, :2].max(), s[:, -2:].max())
        return float(ring / peak)

    def require_decay(self, guard: float = DEFAULT_DECAY_GUARD):
        r = self.decay_ratio()
        if not np.isfinite(self.samples).all():
            raise DecayGuardError("symbol contains non-finite samples")
        if r > guard:
            raise DecayGuardError(
                f"boundary decay {r:.3e} exceeds guard {guard:.1e}; enlarge the box")

    def _check_same_grid(self, other: "PhaseSymbol"):
        if self.grid != other.grid:
            raise StructureError("symbols live on different grids")

    def __add__(self, other: "PhaseSymbol") -> "PhaseSymbol":
        self._check_same_grid(other)
        return PhaseSymbol(self.grid, self.samples + other.samples)

    def __sub__(self, other: "PhaseSymbol") -> "PhaseSymbol":
        self._check_same_grid(other)
        return PhaseSymbol(self.grid, self.samples - other.samples)

    def scale(self, c: complex) -> "PhaseSymbol":
        return PhaseSymbol(self.grid, c * self.samples)

    def distance(self, other: "PhaseSymbol") -> float:
        self._check_same_grid(other)
        return float(np.max(np.abs(self.samples - other.samples)))


def symbol_adjoint(a: PhaseSymbol) -> PhaseSymbol:
    """Pointwise complex conjugate: a+(x, y) = conj(a(x, y))."""
    return PhaseSymbol(a.grid, np.conj(a.samples))


def fourier(a: PhaseSymbol, guard: float = DEFAULT_DECAY_GUARD) -> PhaseSymbol:
    """2-D transform onto the conjugate grid; aliasing-guarded."""
    a.require_decay(guard)
    s = centered_ft(a.samples, a.grid.dx, axis=0, sign=-1)
    s = centered_ft(s, a.grid.dx, axis=1, sign=-1)
    return PhaseSymbol(a.grid.dual(), s)


def inverse_fourier(a: PhaseSymbol, guard: float = DEFAULT_DECAY_GUARD) -> PhaseSymbol:
    a.require_decay(guard)
    s = centered_ft(a.samples, a.grid.dx, axis=0, sign=+1)
    s = centered_ft(s, a.grid.dx, axis=1, sign=+1)
    return PhaseSymbol(a.grid.dual(), s)


def spectral_derivative(a: PhaseSymbol, axis: int,
                        guard: float = DEFAULT_DECAY_GUARD) -> PhaseSymbol:
    """d/dx_axis via the frequency domain."""
    a.require_decay(guard)
    dx = a.grid.dx
    spec = centered_ft(a.samples, dx, axis=axis, sign=-1)
    nu = lattice(a.grid.n, 1.0 / (a.grid.n * dx))
    shape = [1, 1]
    shape[axis] = a.grid.n
    spec = spec * (2j * np.pi * nu.reshape(shape))
    out = centered_ft(spec, 1.0 / (a.grid.n * dx), axis=axis, sign=+1)
    return PhaseSymbol(a.grid, out)


def _lattice_index(value: float, step: float, what: str) -> int:
    k = value / step
    ki = int(round(k))
    if abs(k - ki) > 1e-9:
        raise LatticeError(f"{what} = {value} is not on the lattice of step {step}")
    return ki


def _shift_imag_free(samples: np.ndarray, grid: PhaseGrid, axis: int, shift: float) -> np.ndarray:
    """Real translate by `shift` along `axis`, spectrally (exact for decayed data)."""
    dx = grid.dx
    spec = centered_ft(samples, dx, axis=axis, sign=-1)
    nu = lattice(grid.n, 1.0 / (grid.n * dx))
    shape = [1, 1]
    shape[axis] = grid.n
    spec = spec * np.exp(-2j * np.pi * nu * shift).reshape(shape)
    return centered_ft(spec, 1.0 / (grid.n * dx), axis=axis, sign=+1)


def translate_first(a: PhaseSymbol, s: float) -> PhaseSymbol:
    """a_{s,0}(x1, x2) = exp(2 pi i s x1) a(x1, x2 - s/2);  s on the 1/(2L) lattice."""
    _lattice_index(s, 1.0 / (2.0 * a.grid.half_width), "s")
    x1 = a.grid.points()[:, None]
    shifted = _shift_imag_free(a.samples, a.grid, axis=1, shift=s / 2.0)
    return PhaseSymbol(a.grid, np.exp(2j * np.pi * s * x1) * shifted)


def translate_second(a: PhaseSymbol, t: float) -> PhaseSymbol:
    """a_{0,t}(x1, x2) = exp(2 pi i t x2) a(x1 + t/2, x2);  t on the dx lattice."""
    _lattice_index(t, a.grid.dx, "t")
    x2 = a.grid.points()[None, :]
    shifted = _shift_imag_free(a.samples, a.grid, axis=0, shift=-t / 2.0)
    return PhaseSymbol(a.grid, np.exp(2j * np.pi * t * x2) * shifted)


def translate_symbol(a: PhaseSymbol, s: float, t: float) -> PhaseSymbol:
    """First-variable translate followed by the second: (a_{s,0})_{0,t}."""
    return translate_second(translate_first(a, s), t)


# ---------------------------------------------------------------------------
# Gaussian-term oracle class
# ---------------------------------------------------------------------------

def _sym2(mat) -> np.ndarray:
    m = np.asarray(mat, dtype=complex).reshape(2, 2)
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class GaussianTerm:
    amplitude: complex
    quad: tuple  # row-major 2x2, symmetric
    lin: tuple   # length 2

    @staticmethod
    def make(amplitude: complex, quad, lin) -> "GaussianTerm":
        m = _sym2(quad)
        w = np.linalg.eigvalsh(0.5 * (m.real + m.real.T))
        if w.min() <= 0:
            raise StructureError("Re(quadratic form) must be positive definite")
        v = np.asarray(lin, dtype=complex).reshape(2)
        return GaussianTerm(complex(amplitude), tuple(map(tuple, m)), tuple(v))

    @property
    def quad_matrix(self) -> np.ndarray:
        return np.array(self.quad, dtype=complex)

    @property
    def lin_vector(self) -> np.ndarray:
        return np.array(self.lin, dtype=complex)


class GaussianTermSymbol:
    """Finite sum of Gaussian exponential terms; closed-form oracle symbol."""

    def __init__(self, terms: Sequence[GaussianTerm]):
        self.terms = tuple(terms)

    @staticmethod
    def single(amplitude: complex, quad, lin=(0.0, 0.0)) -> "GaussianTermSymbol":
        return GaussianTermSymbol((GaussianTerm.make(amplitude, quad, lin),))

    @staticmethod
    def standard(amplitude: complex = 2.0, width: float = 2.0) -> "GaussianTermSymbol":
        """amplitude * exp(-pi * width * |z|^2); width=2 gives the rank-one projector symbol."""
        return GaussianTermSymbol.single(amplitude, width * np.eye(2), (0.0, 0.0))

    def __add__(self, other: "GaussianTermSymbol") -> "GaussianTermSymbol":
        return GaussianTermSymbol(self.terms + other.terms)

    def scale(self, c: complex) -> "GaussianTermSymbol":
        return GaussianTermSymbol(tuple(
            GaussianTerm(c * t.amplitude, t.quad, t.lin) for t in self.terms))

    def __call__(self, z1, z2):
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        out = np.zeros(np.broadcast(z1, z2).shape, dtype=complex)
        for t in self.terms:
            A = t.quad_matrix
            b = t.lin_vector
            expo = (-np.pi * (A[0, 0] * z1 * z1 + 2 * A[0, 1] * z1 * z2 + A[1, 1] * z2 * z2)
                    + b[0] * z1 + b[1] * z2)
            out = out + t.amplitude * np.exp(expo)
        return out

    def render(self, grid: PhaseGrid) -> PhaseSymbol:
        x1, x2 = grid.mesh()
        return PhaseSymbol(grid, self(x1, x2))

    def fourier(self) -> "GaussianTermSymbol":
        """Closed-form transform: term-wise Gaussian integral.

        F(xi) = c det(A)^(-1/2) exp(-pi <A^-1 xi, xi> - i <A^-1 b, xi>
                                    + <A^-1 b, b>/(4 pi)).
        """
        out = []
        for t in self.terms:
            A = t.quad_matrix
            b = t.lin_vector
            Ai = np.linalg.inv(A)
            amp = t.amplitude * np.exp(b @ Ai @ b / (4 * np.pi)) / np.sqrt(np.linalg.det(A))
            out.append(GaussianTerm.make(amp, Ai, -1j * (Ai @ b)))
        return GaussianTermSymbol(out)

    def shifted(self, w1: complex, w2: complex) -> "GaussianTermSymbol":
        """Argument shift z -> z + w with complex w (analytic continuation)."""
        w = np.array([w1, w2], dtype=complex)
        out = []
        for t in self.terms:
            A = t.quad_matrix
            b = t.lin_vector
            amp = t.amplitude * np.exp(-np.pi * (w @ A @ w) + b @ w)
            out.append(GaussianTerm.make(amp, A, b - 2 * np.pi * (A @ w)))
        return GaussianTermSymbol(out)

    def modulated(self, c1: complex, c2: complex) -> "GaussianTermSymbol":
        """Multiply by exp(c1 x1 + c2 x2)."""
        c = np.array([c1, c2], dtype=complex)
        return GaussianTermSymbol(tuple(
            GaussianTerm(t.amplitude, t.quad, tuple(t.lin_vector + c)) for t in self.terms))

    def conjugated(self) -> "GaussianTermSymbol":
        """The symbol adjoint, valid on the real plane."""
        return GaussianTermSymbol(tuple(
            GaussianTerm.make(np.conj(t.amplitude), np.conj(t.quad_matrix),
                              np.conj(t.lin_vector)) for t in self.terms))

    def derivative_samples(self, grid: PhaseGrid, axis: int) -> np.ndarray:
        """Analytic partial derivative evaluated on the grid (not class-closed)."""
        x1, x2 = grid.mesh()
        out = np.zeros((grid.n, grid.n), dtype=complex)
        for t in self.terms:
            A = t.quad_matrix
            b = t.lin_vector
            lin_fac = (-2 * np.pi * (A[axis, 0] * x1 + A[axis, 1] * x2) + b[axis])
            single = GaussianTermSymbol((t,))
            out = out + lin_fac * single(x1, x2)
        return out
