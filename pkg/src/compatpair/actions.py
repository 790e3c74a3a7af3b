"""Left actions on symbol algebras and the compatibility residual.

Heisenberg pair on scalar symbols:

    p |> a = ((1/2i) d/dx1 + 2 pi x2) a,
    x |> a = (x1 - (1/4 pi i) d/dx2) a,

so that p |> (x |> a) - x |> (p |> a) = -i a and Op intertwines the action
with x -> Q, p -> -i d/dx.

Quantum plane (q = e^{2 pi i gamma}, alpha beta = gamma):

    x |> a = e^{2 pi alpha x1} a(x1, x2 + i alpha/2),
    y |> a = e^{2 pi beta x2} a(x1 - i beta/2, x2),

with the imaginary shifts applied as real-exponential multipliers on the
partial spectra, guarded against amplification blow-up.

Block actions on 4-tuples ("quad") and 2x2 matrices ("mat2") of symbols
apply sign and swap patterns on top of the scalar quantum-plane action:
the quad action carries signs (+,+,-,-) for x and (+,-,+,-) for y; the
matrix action under alpha beta = gamma + 1/2 flips the sign of the second
row for x and swaps rows for y; the parity-extended algebra acts with
plain x, a second-row sign flip for y, and a row swap for chi
(alpha beta = gamma there).

compat_residual measures || (x |> a)+ # b - a+ # (x+ |> b) ||_sup, the
defining identity of a compatible pair, for an arbitrary normal-formed
algebra element x.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._ft import centered_ft, lattice
from .algebra import AlgebraElement, adjoint
from .errors import AnalyticClassError, StructureError
from .symbols import (DEFAULT_DECAY_GUARD, PhaseGrid, PhaseSymbol,
                      spectral_derivative, symbol_adjoint)
from .weyl import star

DEFAULT_AMPLIFICATION_GUARD = 1e-6


@dataclass(frozen=True)
class ActionParams:
    """Parameters of the quantum-plane action; the product constraint depends
    on the target algebra: alpha*beta = gamma for scalar and quad targets,
    gamma + 1/2 for the matrix target."""

    alpha: float
    beta: float
    gamma: float
    eps1: int = +1
    eps2: int = +1

    def __post_init__(self):
        if self.eps1 not in (-1, 1) or self.eps2 not in (-1, 1):
            raise StructureError("component signs must be +1 or -1")

    @property
    def q(self) -> complex:
        return np.exp(2j * np.pi * self.gamma)

    def check_scalar(self):
        if abs(self.alpha * self.beta - self.gamma) > 1e-12:
            raise StructureError(
                f"alpha*beta = {self.alpha * self.beta} must equal gamma = {self.gamma}")

    def check_matrix(self):
        if abs(self.alpha * self.beta - (self.gamma + 0.5)) > 1e-12:
            raise StructureError(
                f"alpha*beta = {self.alpha * self.beta} must equal gamma + 1/2 = {self.gamma + 0.5}")


@dataclass(frozen=True)
class BlockSymbol:
    """A 4-tuple ('quad') or row-major 2x2 ('mat2') of symbols on one grid."""

    layout: str
    blocks: tuple

    def __post_init__(self):
        if self.layout not in ("quad", "mat2"):
            raise StructureError(f"unknown layout {self.layout!r}")
        if len(self.blocks) != 4:
            raise StructureError("block symbols carry exactly four components")
        g = self.blocks[0].grid
        for b in self.blocks:
            if b.grid != g:
                raise StructureError("blocks must share one grid")

    @property
    def grid(self) -> PhaseGrid:
        return self.blocks[0].grid

    def map(self, fn) -> "BlockSymbol":
        return BlockSymbol(self.layout, tuple(fn(b) for b in self.blocks))

    def sup(self) -> float:
        return max(b.sup() for b in self.blocks)

    def distance(self, other: "BlockSymbol") -> float:
        if self.layout != other.layout:
            raise StructureError("layouts differ")
        return max(a.distance(b) for a, b in zip(self.blocks, other.blocks))

    def scale(self, c: complex) -> "BlockSymbol":
        return self.map(lambda b: b.scale(c))

    def __sub__(self, other: "BlockSymbol") -> "BlockSymbol":
        if self.layout != other.layout:
            raise StructureError("layouts differ")
        return BlockSymbol(self.layout, tuple(a - b for a, b in zip(self.blocks, other.blocks)))


def block_adjoint(A: BlockSymbol) -> BlockSymbol:
    """Componentwise conjugate; the matrix layout also transposes."""
    a1, a2, a3, a4 = (symbol_adjoint(b) for b in A.blocks)
    if A.layout == "mat2":
        return BlockSymbol("mat2", (a1, a3, a2, a4))
    return BlockSymbol("quad", (a1, a2, a3, a4))


def block_star(A: BlockSymbol, B: BlockSymbol, guard: float = DEFAULT_DECAY_GUARD) -> BlockSymbol:
    """Componentwise product for the quad layout, matrix product for mat2."""
    if A.layout != B.layout:
        raise StructureError("layouts differ")
    a = A.blocks
    b = B.blocks
    if A.layout == "quad":
        return BlockSymbol("quad", tuple(star(x, y, guard) for x, y in zip(a, b)))
    c11 = star(a[0], b[0], guard) + star(a[1], b[2], guard)
    c12 = star(a[0], b[1], guard) + star(a[1], b[3], guard)
    c21 = star(a[2], b[0], guard) + star(a[3], b[2], guard)
    c22 = star(a[2], b[1], guard) + star(a[3], b[3], guard)
    return BlockSymbol("mat2", (c11, c12, c21, c22))


# ---------------------------------------------------------------------------
# generator actions
# ---------------------------------------------------------------------------

def act_heisenberg(gen: str, a: PhaseSymbol, guard: float = DEFAULT_DECAY_GUARD) -> PhaseSymbol:
    x1, x2 = a.grid.mesh()
    if gen == "p":
        d1 = spectral_derivative(a, 0, guard)
        return PhaseSymbol(a.grid, d1.samples / 2j + 2.0 * np.pi * x2 * a.samples)
    if gen == "x":
        d2 = spectral_derivative(a, 1, guard)
        return PhaseSymbol(a.grid, x1 * a.samples - d2.samples / (4j * np.pi))
    raise StructureError(f"unknown Heisenberg generator {gen!r}")


def _imaginary_shift(a: PhaseSymbol, axis: int, c: float,
                     amp_guard: float) -> np.ndarray:
    """Samples of a with x_axis -> x_axis + i c, via the spectral multiplier
    exp(-2 pi nu c).  Raises when the amplified spectrum stops decaying."""
    grid = a.grid
    dx = grid.dx
    spec = centered_ft(a.samples, dx, axis=axis, sign=-1)
    nu = lattice(grid.n, 1.0 / (grid.n * dx))
    shape = [1, 1]
    shape[axis] = grid.n
    spec = spec * np.exp(-2.0 * np.pi * nu * c).reshape(shape)
    mags = np.abs(spec)
    edge = max(mags.take([0, 1, -2, -1], axis=axis).max(), 0.0)
    if not np.isfinite(mags).all() or edge > amp_guard * max(mags.max(), 1e-300):
        raise AnalyticClassError(
            f"imaginary shift by {c} amplifies beyond the analytic-class guard")
    return centered_ft(spec, 1.0 / (grid.n * dx), axis=axis, sign=+1)


def act_qplane(gen: str, a: PhaseSymbol, params: ActionParams,
               amp_guard: float = DEFAULT_AMPLIFICATION_GUARD) -> PhaseSymbol:
    x1, x2 = a.grid.mesh()
    if gen == "x":
        shifted = _imaginary_shift(a, 1, params.alpha / 2.0, amp_guard)
        return PhaseSymbol(a.grid, np.exp(2.0 * np.pi * params.alpha * x1) * shifted)
    if gen == "y":
        shifted = _imaginary_shift(a, 0, -params.beta / 2.0, amp_guard)
        return PhaseSymbol(a.grid, np.exp(2.0 * np.pi * params.beta * x2) * shifted)
    raise StructureError(f"unknown quantum-plane generator {gen!r}")


_QUAD_SIGNS = {"x": (1, 1, -1, -1), "y": (1, -1, 1, -1)}


def act_block(gen: str, A: BlockSymbol, variant: str, params: ActionParams,
              amp_guard: float = DEFAULT_AMPLIFICATION_GUARD) -> BlockSymbol:
    """Blockwise sign/swap actions: variants 'b3' (quad), 'b4' and 'x3' (mat2)."""
    b = A.blocks
    if variant == "b3":
        if A.layout != "quad":
            raise StructureError("variant b3 acts on the quad layout")
        params.check_scalar()
        signs = _QUAD_SIGNS.get(gen)
        if signs is None:
            raise StructureError(f"unknown generator {gen!r} for b3")
        acted = [act_qplane(gen, blk, params, amp_guard) for blk in b]
        return BlockSymbol("quad", tuple(w.scale(s) for s, w in zip(signs, acted)))
    if variant == "b4":
        if A.layout != "mat2":
            raise StructureError("variant b4 acts on the mat2 layout")
        params.check_matrix()
        if gen == "x":
            acted = [act_qplane("x", blk, params, amp_guard) for blk in b]
            return BlockSymbol("mat2", (acted[0], acted[1],
                                        acted[2].scale(-1), acted[3].scale(-1)))
        if gen == "y":
            acted = [act_qplane("y", blk, params, amp_guard) for blk in b]
            return BlockSymbol("mat2", (acted[2], acted[3], acted[0], acted[1]))
        raise StructureError(f"unknown generator {gen!r} for b4")
    if variant == "x3":
        if A.layout != "mat2":
            raise StructureError("variant x3 acts on the mat2 layout")
        if gen == "chi":
            return BlockSymbol("mat2", (b[2], b[3], b[0], b[1]))
        params.check_scalar()
        if gen == "x":
            acted = [act_qplane("x", blk, params, amp_guard) for blk in b]
            return BlockSymbol("mat2", tuple(acted))
        if gen == "y":
            acted = [act_qplane("y", blk, params, amp_guard) for blk in b]
            return BlockSymbol("mat2", (acted[0], acted[1],
                                        acted[2].scale(-1), acted[3].scale(-1)))
        raise StructureError(f"unknown generator {gen!r} for x3")
    raise StructureError(f"unknown block variant {variant!r}")


# ---------------------------------------------------------------------------
# pair dispatch and the compatibility residual
# ---------------------------------------------------------------------------

PAIR_TAGS = ("x1b1", "x2b2", "x2b3", "x2b4", "x3b4")


def _act_generator(pair: str, gen: str, target, params, amp_guard):
    if pair == "x1b1":
        return act_heisenberg(gen, target)
    if pair == "x2b2":
        params.check_scalar()
        return act_qplane(gen, target, params, amp_guard)
    if pair == "x2b3":
        return act_block(gen, target, "b3", params, amp_guard)
    if pair == "x2b4":
        return act_block(gen, target, "b4", params, amp_guard)
    if pair == "x3b4":
        return act_block(gen, target, "x3", params, amp_guard)
    raise StructureError(f"unknown pair tag {pair!r}; valid: {PAIR_TAGS}")


def act_element(pair: str, x: AlgebraElement, target, params: ActionParams | None = None,
                amp_guard: float = DEFAULT_AMPLIFICATION_GUARD):
    """Extend the generator action linearly along the words of x."""
    if isinstance(target, BlockSymbol):
        zero = BlockSymbol(target.layout, tuple(PhaseSymbol.zero(target.grid) for _ in range(4)))
    else:
        zero = PhaseSymbol.zero(target.grid)
    out = zero
    for word, coeff in x.terms.items():
        val = target
        for gen in reversed(word):
            val = _act_generator(pair, gen, val, params, amp_guard)
        if isinstance(out, BlockSymbol):
            out = BlockSymbol(out.layout, tuple(o + v.scale(coeff)
                                                for o, v in zip(out.blocks, val.blocks)))
        else:
            out = out + val.scale(coeff)
    return out


def compat_residual(pair: str, x: AlgebraElement, a, b,
                    params: ActionParams | None = None,
                    adjoint_params: ActionParams | None = None,
                    guard: float = DEFAULT_DECAY_GUARD,
                    amp_guard: float = DEFAULT_AMPLIFICATION_GUARD) -> float:
    """Sup-norm of (x |> a)+ # b - a+ # (x+ |> b).

    ``adjoint_params`` overrides the parameters used in the x+ branch;
    passing a corrupted value there is the designated negative control.
    """
    if adjoint_params is None:
        adjoint_params = params
    xa = act_element(pair, x, a, params, amp_guard)
    xb = act_element(pair, adjoint(x), b, adjoint_params, amp_guard)
    if isinstance(a, BlockSymbol):
        lhs = block_star(block_adjoint(xa), b, guard)
        rhs = block_star(block_adjoint(a), xb, guard)
    else:
        lhs = star(symbol_adjoint(xa), b, guard)
        rhs = star(symbol_adjoint(a), xb, guard)
    return lhs.distance(rhs)
