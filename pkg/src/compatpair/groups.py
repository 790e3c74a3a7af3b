"""Convolution *-algebras of smooth compactly supported functions on
concrete Lie groups, at desk scale.

Two groups are provided: the real line (unimodular baseline) and the
affine group {(s, b) : s > 0} with product (s, b)(s', b') = (s s', s b' + b),
left Haar density 1/s^2 and modular function m(s, b) = 1/s, so that
d mu_l = m d mu_r.  The algebra operations are

    (a . b)(g) = int a(h) b(h^{-1} g) d mu_l(h)
    a+(g)      = m(g)^{-1} conj(a(g^{-1}))

with tensor-product trapezoid quadrature and cubic-spline resampling for
the group-inverse arguments.  Lie directions act as right-invariant
derivatives (xi a)(g) = d/dt|_0 a(e^{-t xi} g), realized by central
differences with optional Richardson refinement.

The unitary side supplies the translation representation of the line, the
quasi-regular representation (U(s,b) f)(x) = s^{-1/2} f((x-b)/s) of the
affine group, smeared vectors int a(g) U(g) phi d mu_l(g), and the
derived-representation residual || dU(xi) U_a phi - U_{xi a} phi ||.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline, RectBivariateSpline

from .errors import BoxError, StructureError


@dataclass(frozen=True)
class GroupModel:
    name: str
    dim: int
    lie_basis: tuple
    product: Callable
    inverse: Callable
    exp: Callable                  # exp(xi_vector, t) -> group point(s)
    left_haar_density: Callable
    modular: Callable


def real_line() -> GroupModel:
    return GroupModel(
        name="R",
        dim=1,
        lie_basis=(("d", np.array([1.0])),),
        product=lambda g, h: g + h,
        inverse=lambda g: -g,
        exp=lambda xi, t: np.atleast_1d(t)[..., None] * xi,
        left_haar_density=lambda g: np.ones(np.asarray(g).shape[:-1]),
        modular=lambda g: np.ones(np.asarray(g).shape[:-1]),
    )


def _aff_product(g, h):
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    s = g[..., 0] * h[..., 0]
    b = g[..., 0] * h[..., 1] + g[..., 1]
    return np.stack([s, b], axis=-1)


def _aff_inverse(g):
    g = np.asarray(g, dtype=float)
    return np.stack([1.0 / g[..., 0], -g[..., 1] / g[..., 0]], axis=-1)


def _aff_exp(xi, t):
    u, v = float(xi[0]), float(xi[1])
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = np.exp(u * t)
    if abs(u) < 1e-12:
        b = v * t * (1.0 + u * t / 2.0 + (u * t) ** 2 / 6.0)
    else:
        b = v * (np.exp(u * t) - 1.0) / u
    return np.stack([s, b], axis=-1)


def affine_group() -> GroupModel:
    return GroupModel(
        name="aff",
        dim=2,
        lie_basis=(("scale", np.array([1.0, 0.0])), ("shift", np.array([0.0, 1.0]))),
        product=_aff_product,
        inverse=_aff_inverse,
        exp=_aff_exp,
        left_haar_density=lambda g: 1.0 / np.asarray(g, dtype=float)[..., 0] ** 2,
        modular=lambda g: 1.0 / np.asarray(g, dtype=float)[..., 0],
    )


GROUPS = {"R": real_line, "aff": affine_group}


class GroupFunction:
    """Samples of a smooth compactly supported function on a coordinate box."""

    def __init__(self, group: GroupModel, axes: Sequence[np.ndarray], samples: np.ndarray):
        self.group = group
        self.axes = tuple(np.asarray(ax, dtype=float) for ax in axes)
        self.samples = np.asarray(samples, dtype=complex)
        if len(self.axes) != group.dim:
            raise StructureError("axis count must match the group dimension")
        if self.samples.shape != tuple(len(ax) for ax in self.axes):
            raise StructureError("sample shape must match the axes")
        self._spl_re = None
        self._spl_im = None

    def box(self):
        return tuple((ax[0], ax[-1]) for ax in self.axes)

    def decay_ratio(self) -> float:
        s = np.abs(self.samples)
        peak = s.max()
        if peak == 0:
            return 0.0
        edge = 0.0
        for axis in range(s.ndim):
            edge = max(edge, s.take([0, 1, -2, -1], axis=axis).max())
        return float(edge / peak)

    def require_support(self, guard: float = 1e-8):
        if self.decay_ratio() > guard:
            raise BoxError("support reaches the sampling box boundary")

    def _splines(self):
        if self._spl_re is None:
            if self.group.dim == 1:
                self._spl_re = CubicSpline(self.axes[0], self.samples.real)
                self._spl_im = CubicSpline(self.axes[0], self.samples.imag)
            else:
                self._spl_re = RectBivariateSpline(self.axes[0], self.axes[1],
                                                   self.samples.real, kx=3, ky=3)
                self._spl_im = RectBivariateSpline(self.axes[0], self.axes[1],
                                                   self.samples.imag, kx=3, ky=3)
        return self._spl_re, self._spl_im

    def evaluate(self, pts: np.ndarray) -> np.ndarray:
        """Cubic-spline values at group points (..., dim); zero outside the box."""
        pts = np.asarray(pts, dtype=float)
        flat = pts.reshape(-1, self.group.dim)
        re, im = self._splines()
        inside = np.ones(len(flat), dtype=bool)
        for d in range(self.group.dim):
            inside &= (flat[:, d] >= self.axes[d][0]) & (flat[:, d] <= self.axes[d][-1])
        out = np.zeros(len(flat), dtype=complex)
        if inside.any():
            sel = flat[inside]
            if self.group.dim == 1:
                out[inside] = re(sel[:, 0]) + 1j * im(sel[:, 0])
            else:
                out[inside] = re.ev(sel[:, 0], sel[:, 1]) + 1j * im.ev(sel[:, 0], sel[:, 1])
        return out.reshape(pts.shape[:-1])

    def grid_points(self) -> np.ndarray:
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack(mesh, axis=-1)

    def quad_weights(self) -> np.ndarray:
        """Trapezoid weights times the left Haar density."""
        w = np.array([1.0])
        for ax in self.axes:
            step = ax[1] - ax[0]
            wa = np.full(len(ax), step)
            wa[0] = wa[-1] = step / 2.0
            w = np.multiply.outer(w, wa)
        w = w.reshape(self.samples.shape)
        return w * self.group.left_haar_density(self.grid_points())

    def scale(self, c: complex) -> "GroupFunction":
        return GroupFunction(self.group, self.axes, c * self.samples)

    def sup(self) -> float:
        return float(np.max(np.abs(self.samples)))


def gaussian_bump(group: GroupModel, center: Sequence[float], widths: Sequence[float],
                  n: int = 48, spread: float = 5.5) -> GroupFunction:
    """Sup-normalized Gaussian bump sampled on center +- spread * width."""
    center = np.asarray(center, dtype=float)
    widths = np.asarray(widths, dtype=float)
    axes = [np.linspace(c - spread * w, c + spread * w, n)
            for c, w in zip(center, widths)]
    if group.name == "aff" and axes[0][0] <= 0:
        raise BoxError("affine bump support must stay inside s > 0")
    mesh = np.meshgrid(*axes, indexing="ij")
    expo = sum(((m - c) / w) ** 2 for m, c, w in zip(mesh, center, widths))
    return GroupFunction(group, axes, np.exp(-expo))


def convolve_at(a: GroupFunction, b: GroupFunction, pts: np.ndarray) -> np.ndarray:
    """(a . b) at the given group points by quadrature over a's grid."""
    if a.group is not b.group and a.group.name != b.group.name:
        raise StructureError("group models differ")
    pts = np.asarray(pts, dtype=float).reshape(-1, a.group.dim)
    H = a.grid_points().reshape(-1, a.group.dim)
    w = (a.quad_weights() * a.samples).reshape(-1)
    Hinv = a.group.inverse(H)
    out = np.empty(len(pts), dtype=complex)
    for i, g in enumerate(pts):
        args = a.group.product(Hinv, g[None, :])
        out[i] = np.sum(w * b.evaluate(args))
    return out


def _product_box(a: GroupFunction, b: GroupFunction):
    group = a.group
    if group.dim == 1:
        lo = a.axes[0][0] + b.axes[0][0]
        hi = a.axes[0][-1] + b.axes[0][-1]
        return ((lo, hi),)
    corners_a = [np.array([s, t]) for s in (a.axes[0][0], a.axes[0][-1])
                 for t in (a.axes[1][0], a.axes[1][-1])]
    corners_b = [np.array([s, t]) for s in (b.axes[0][0], b.axes[0][-1])
                 for t in (b.axes[1][0], b.axes[1][-1])]
    prods = np.array([group.product(x, y) for x in corners_a for y in corners_b])
    return tuple((prods[:, d].min(), prods[:, d].max()) for d in range(2))


def convolve(a: GroupFunction, b: GroupFunction, n: int = 48) -> GroupFunction:
    """Full-grid convolution on the product support box."""
    box = _product_box(a, b)
    axes = [np.linspace(lo, hi, n) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack(mesh, axis=-1)
    vals = convolve_at(a, b, pts).reshape(pts.shape[:-1])
    return GroupFunction(a.group, axes, vals)


def conv_adjoint(a: GroupFunction, n: int | None = None,
                 drop_modular: bool = False) -> GroupFunction:
    """a+(g) = m(g)^{-1} conj(a(g^{-1})); drop_modular is the negative control.

    The sampling box is the inverse of a's box, tightened to the actual
    support so repeated inversions do not dilute the resolution.
    """
    group = a.group
    if n is None:
        n = max(len(ax) for ax in a.axes)
    if group.dim == 1:
        boxes = [(-a.axes[0][-1], -a.axes[0][0])]
    else:
        s0, s1 = a.axes[0][0], a.axes[0][-1]
        b0, b1 = a.axes[1][0], a.axes[1][-1]
        corners = np.array([group.inverse(np.array([s, t]))
                            for s in (s0, s1) for t in (b0, b1)])
        boxes = [(corners[:, d].min(), corners[:, d].max()) for d in range(2)]

    def sample(axes):
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack(mesh, axis=-1)
        vals = np.conj(a.evaluate(group.inverse(pts)))
        if not drop_modular:
            vals = vals / group.modular(pts)
        return vals

    axes = [np.linspace(lo, hi, 2 * n) for lo, hi in boxes]
    vals = sample(axes)
    mags = np.abs(vals)
    mask = mags > 1e-13 * max(mags.max(), 1e-300)
    tight = []
    shrank = False
    for d in range(group.dim):
        idx = np.nonzero(mask.any(axis=tuple(k for k in range(group.dim) if k != d)))[0]
        lo = max(idx[0] - 2, 0)
        hi = min(idx[-1] + 2, len(axes[d]) - 1)
        if (hi - lo) < 0.8 * (len(axes[d]) - 1):
            shrank = True
        tight.append(np.linspace(axes[d][lo], axes[d][hi], n))
    if not shrank:
        # the support fills the inverse box; mirrored nodes are kept exactly
        tight = [np.linspace(lo, hi, n) for lo, hi in boxes]
    return GroupFunction(group, tight, sample(tight))


def rightinv_derivative(xi_name: str, a: GroupFunction, step: float = 1e-2,
                        richardson: bool = True) -> GroupFunction:
    """(xi a)(g) = d/dt|_0 a(e^{-t xi} g), central differences on a's grid."""
    xi = dict(a.group.lie_basis).get(xi_name)
    if xi is None:
        raise StructureError(f"unknown Lie direction {xi_name!r}")
    pts = a.grid_points()

    def shifted(t):
        e = a.group.exp(xi, -t)[0]
        return a.evaluate(a.group.product(e, pts))

    def central(h):
        return (shifted(h) - shifted(-h)) / (2.0 * h)

    if richardson:
        vals = (4.0 * central(step / 2.0) - central(step)) / 3.0
    else:
        vals = central(step)
    return GroupFunction(a.group, a.axes, vals)


def lie_compat_residual(xi_name: str, a: GroupFunction, b: GroupFunction,
                        probes: np.ndarray, step: float = 1e-2,
                        adjoint_n: int = 64, drop_modular: bool = False) -> float:
    """sup over probes of |((xi a)+ . b)(g) + (a+ . (xi b))(g)|.

    The involution of a Lie direction is xi+ = -xi, so the compatibility
    identity (x |> a)+ . b = a+ . (x+ |> b) becomes the cancellation above.
    """
    da = rightinv_derivative(xi_name, a, step)
    db = rightinv_derivative(xi_name, b, step)
    lhs = convolve_at(conv_adjoint(da, adjoint_n, drop_modular), b, probes)
    rhs = convolve_at(conv_adjoint(a, adjoint_n, drop_modular), db, probes)
    return float(np.max(np.abs(lhs + rhs)))


# ---------------------------------------------------------------------------
# Unitary side
# ---------------------------------------------------------------------------

class UnitaryModel:
    """Discretized L^2(R) carrier with the group's natural unitary action."""

    def __init__(self, group: GroupModel, x: np.ndarray):
        self.group = group
        self.x = np.asarray(x, dtype=float)
        self.dx = float(self.x[1] - self.x[0])

    def norm(self, f: np.ndarray) -> float:
        return float(np.sqrt(np.sum(np.abs(f) ** 2) * self.dx))

    def apply(self, g, f: np.ndarray) -> np.ndarray:
        g = np.asarray(g, dtype=float).reshape(-1)
        re = CubicSpline(self.x, np.asarray(f).real)
        im = CubicSpline(self.x, np.asarray(f).imag)

        def ev(pts):
            inside = (pts >= self.x[0]) & (pts <= self.x[-1])
            out = np.zeros(len(pts), dtype=complex)
            out[inside] = re(pts[inside]) + 1j * im(pts[inside])
            return out

        if self.group.name == "R":
            return ev(self.x - g[0])
        s, b = g
        return ev((self.x - b) / s) / np.sqrt(s)


def garding_vector(a: GroupFunction, phi: np.ndarray, U: UnitaryModel) -> np.ndarray:
    """U_a phi = int a(g) U(g) phi d mu_l(g) by quadrature over a's grid."""
    H = a.grid_points().reshape(-1, a.group.dim)
    w = (a.quad_weights() * a.samples).reshape(-1)
    out = np.zeros(len(U.x), dtype=complex)
    for coeff, g in zip(w, H):
        if coeff == 0:
            continue
        out += coeff * U.apply(g, phi)
    return out


def du_apply(xi_name: str, psi: np.ndarray, U: UnitaryModel, step: float = 1e-3) -> np.ndarray:
    """dU(xi) psi by a second-order central difference of t -> U(e^{t xi}) psi."""
    xi = dict(U.group.lie_basis).get(xi_name)
    if xi is None:
        raise StructureError(f"unknown Lie direction {xi_name!r}")
    gp = U.group.exp(xi, step)[0]
    gm = U.group.exp(xi, -step)[0]
    return (U.apply(gp, psi) - U.apply(gm, psi)) / (2.0 * step)


def du_identity_residual(xi_name: str, a: GroupFunction, phi: np.ndarray,
                         U: UnitaryModel, fd_step: float = 1e-3,
                         deriv_step: float = 1e-2) -> float:
    """|| dU(xi) U_a phi - U_{xi a} phi || / || phi ||."""
    ua = garding_vector(a, phi, U)
    lhs = du_apply(xi_name, ua, U, fd_step)
    rhs = garding_vector(rightinv_derivative(xi_name, a, deriv_step), phi, U)
    return U.norm(lhs - rhs) / max(U.norm(phi), 1e-300)
