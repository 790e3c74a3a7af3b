"""Polynomial-times-Gaussian vectors on the line, closed under the
quantum-plane operators.

A PolyGauss is a finite sum of terms p(x) exp(-pi a (x - mu)^2) with
complex polynomial p, Re a > 0 and complex center mu.  The class is closed
under

    X = e^{2 pi alpha Q} : multiply by e^{2 pi alpha x}   (recomplete square)
    Y = e^{2 pi beta P}  : analytic shift f(x) -> f(x - i beta)

and under pointwise multiplication, so inner products reduce to Gaussian
moments and every operator identity of the form X Y = e^{2 pi i alpha beta} Y X
can be tested with exact arithmetic up to rounding.  Hermite functions in
the 2 pi normalization are representable exactly, giving closed-form
matrix elements of X and Y in the truncated Hermite basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import StructureError


def _poly_trim(c: np.ndarray) -> tuple:
    c = np.asarray(c, dtype=complex)
    nz = np.nonzero(np.abs(c) > 0)[0]
    if len(nz) == 0:
        return (0j,)
    return tuple(c[: nz[-1] + 1])


def _poly_shift(c: Sequence[complex], w: complex) -> tuple:
    """Coefficients of p(x + w) given those of p(x)."""
    out = np.zeros(len(c), dtype=complex)
    for k, ck in enumerate(c):
        if ck == 0:
            continue
        for j in range(k + 1):
            out[j] += ck * math.comb(k, j) * w ** (k - j)
    return _poly_trim(out)


@dataclass(frozen=True)
class PGTerm:
    coeffs: tuple   # ascending powers
    a: complex
    mu: complex

    def __post_init__(self):
        if complex(self.a).real <= 0:
            raise StructureError("Gaussian decay rate must have positive real part")


class PolyGauss:
    """Finite sum of polynomial * Gaussian terms."""

    def __init__(self, terms: Sequence[PGTerm]):
        self.terms = tuple(terms)

    @staticmethod
    def term(coeffs, a: complex, mu: complex = 0.0) -> "PolyGauss":
        return PolyGauss((PGTerm(_poly_trim(np.asarray(coeffs, dtype=complex)),
                                 complex(a), complex(mu)),))

    @staticmethod
    def gaussian(amplitude: complex = 1.0, a: complex = 1.0, mu: complex = 0.0) -> "PolyGauss":
        return PolyGauss.term([amplitude], a, mu)

    def __add__(self, other: "PolyGauss") -> "PolyGauss":
        return PolyGauss(self.terms + other.terms)

    def scale(self, c: complex) -> "PolyGauss":
        return PolyGauss(tuple(PGTerm(_poly_trim(np.array(t.coeffs) * c), t.a, t.mu)
                               for t in self.terms))

    def __sub__(self, other: "PolyGauss") -> "PolyGauss":
        return self + other.scale(-1.0)

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        out = np.zeros(x.shape, dtype=complex)
        for t in self.terms:
            p = np.zeros(x.shape, dtype=complex)
            for ck in reversed(t.coeffs):
                p = p * x + ck
            out = out + p * np.exp(-np.pi * t.a * (x - t.mu) ** 2)
        return out

    def mul_exp(self, c: complex) -> "PolyGauss":
        """Multiply by e^{c x}: recentered Gaussian, amplitude absorbed."""
        out = []
        for t in self.terms:
            shift = c / (2.0 * np.pi * t.a)
            amp = np.exp(c * t.mu + c * c / (4.0 * np.pi * t.a))
            out.append(PGTerm(_poly_trim(np.array(t.coeffs) * amp), t.a, t.mu + shift))
        return PolyGauss(out)

    def shift_arg(self, w: complex) -> "PolyGauss":
        """f(x) -> f(x - w) for complex w (analytic continuation)."""
        out = []
        for t in self.terms:
            out.append(PGTerm(_poly_shift(t.coeffs, -w), t.a, t.mu + w))
        return PolyGauss(out)

    def conj(self) -> "PolyGauss":
        """Complex conjugate as a function on the real line."""
        return PolyGauss(tuple(PGTerm(tuple(np.conj(t.coeffs)), np.conj(t.a), np.conj(t.mu))
                               for t in self.terms))

    def inner(self, other: "PolyGauss") -> complex:
        """<f, g> = int conj(f) g dx, by exact Gaussian moments."""
        total = 0.0 + 0j
        for s in self.conj().terms:
            for t in other.terms:
                total += _term_integral(s, t)
        return complex(total)

    def norm(self) -> float:
        return float(np.sqrt(max(self.inner(self).real, 0.0)))


def _poly_mul(c1, c2) -> np.ndarray:
    return np.convolve(np.asarray(c1, dtype=complex), np.asarray(c2, dtype=complex))


def _term_integral(s: PGTerm, t: PGTerm) -> complex:
    """int p_s(x) p_t(x) exp(-pi a_s (x-mu_s)^2 - pi a_t (x-mu_t)^2) dx."""
    A = s.a + t.a
    M = (s.a * s.mu + t.a * t.mu) / A
    K = -np.pi * (s.a * s.mu ** 2 + t.a * t.mu ** 2) + np.pi * A * M ** 2
    c = _poly_mul(s.coeffs, t.coeffs)
    deg = len(c) - 1
    # central even moments of exp(-pi A y^2)
    root = 1.0 / np.sqrt(A)
    cm = np.zeros(deg + 1, dtype=complex)
    if deg >= 0:
        cm[0] = root
    for j in range(2, deg + 1, 2):
        cm[j] = cm[j - 2] * (j - 1) / (2.0 * np.pi * A)
    total = 0j
    for k, ck in enumerate(c):
        if ck == 0:
            continue
        acc = 0j
        for j in range(0, k + 1, 2):
            acc += math.comb(k, j) * M ** (k - j) * cm[j]
        total += ck * acc
    return np.exp(K) * total


# ---------------------------------------------------------------------------
# Hermite functions and the quantum-plane operators
# ---------------------------------------------------------------------------

def hermite_polygauss(n: int) -> PolyGauss:
    """h_n as an exact PolyGauss (ground state 2^{1/4} e^{-pi x^2})."""
    c_prev = np.array([2.0 ** 0.25], dtype=complex)
    if n == 0:
        return PolyGauss.term(c_prev, 1.0, 0.0)
    c_cur = np.array([0.0, 2.0 * np.sqrt(np.pi) * 2.0 ** 0.25], dtype=complex)
    for k in range(1, n):
        nxt = np.zeros(len(c_cur) + 1, dtype=complex)
        nxt[1:] = 2.0 * np.sqrt(np.pi / (k + 1)) * c_cur
        nxt[: len(c_prev)] -= np.sqrt(k / (k + 1)) * c_prev
        c_prev, c_cur = c_cur, nxt
    return PolyGauss.term(c_cur, 1.0, 0.0)


def op_exp_q(alpha: float, f: PolyGauss) -> PolyGauss:
    """X = e^{2 pi alpha Q}."""
    return f.mul_exp(2.0 * np.pi * alpha)


def op_exp_p(beta: float, f: PolyGauss) -> PolyGauss:
    """Y = e^{2 pi beta P} acting as (Y f)(x) = f(x - i beta)."""
    return f.shift_arg(1j * beta)


def exp_q_matrix(alpha: float, m: int) -> np.ndarray:
    """Closed-form Hermite matrix elements <h_i | e^{2 pi alpha Q} | h_j>."""
    hs = [hermite_polygauss(i) for i in range(m)]
    out = np.zeros((m, m), dtype=complex)
    for j in range(m):
        xf = op_exp_q(alpha, hs[j])
        for i in range(m):
            out[i, j] = hs[i].inner(xf)
    return out


def exp_p_matrix(beta: float, m: int) -> np.ndarray:
    """Closed-form Hermite matrix elements <h_i | e^{2 pi beta P} | h_j>."""
    hs = [hermite_polygauss(i) for i in range(m)]
    out = np.zeros((m, m), dtype=complex)
    for j in range(m):
        yf = op_exp_p(beta, hs[j])
        for i in range(m):
            out[i, j] = hs[i].inner(yf)
    return out
