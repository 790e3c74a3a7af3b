import numpy as np
import pytest
from scipy.signal import fftconvolve

from compatpair.errors import BoxError, StructureError
from compatpair.groups import (GroupFunction, UnitaryModel, affine_group,
                               conv_adjoint, convolve, convolve_at,
                               du_identity_residual, garding_vector,
                               gaussian_bump, lie_compat_residual, real_line,
                               rightinv_derivative)

AFF = affine_group()
R = real_line()


class TestGroupModels:
    def test_affine_associativity(self, rng):
        for _ in range(10):
            g, h, k = rng.uniform(0.3, 2.0, (3, 2))
            lhs = AFF.product(AFF.product(g, h), k)
            rhs = AFF.product(g, AFF.product(h, k))
            assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_affine_inverse(self, rng):
        g = np.array([1.7, -0.4])
        assert np.max(np.abs(AFF.product(g, AFF.inverse(g)) - [1.0, 0.0])) < 1e-14

    def test_exponential_is_one_parameter(self):
        xi = np.array([0.7, -0.3])
        g1 = AFF.exp(xi, 0.4)[0]
        g2 = AFF.exp(xi, 0.9)[0]
        g12 = AFF.exp(xi, 1.3)[0]
        assert np.max(np.abs(AFF.product(g1, g2) - g12)) < 1e-12

    def test_left_invariance_of_haar(self):
        bump = gaussian_bump(AFF, (1.4, 0.0), (0.16, 0.2), n=48)
        I0 = np.sum(bump.quad_weights() * bump.samples)
        g0 = np.array([1.3, 0.4])
        axes = [np.linspace(0.4, 3.2, 80), np.linspace(-1.6, 1.0, 80)]
        mesh = np.meshgrid(*axes, indexing="ij")
        P = np.stack(mesh, axis=-1)
        shifted = GroupFunction(AFF, axes, bump.evaluate(AFF.product(g0, P)))
        I1 = np.sum(shifted.quad_weights() * shifted.samples)
        assert abs(I0 - I1) / abs(I0) < 1e-4

    def test_left_equals_modular_times_right(self):
        # d mu_l = m d mu_r pointwise, and mu_r is right invariant
        bump = gaussian_bump(AFF, (1.4, 0.0), (0.16, 0.2), n=48)
        pts = bump.grid_points()
        assert np.max(np.abs(AFF.left_haar_density(pts)
                             - AFF.modular(pts) / pts[..., 0])) < 1e-14
        g0 = np.array([1.25, 0.3])
        axes = [np.linspace(0.4, 3.2, 80), np.linspace(-1.6, 1.0, 80)]
        P = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        shifted = GroupFunction(AFF, axes, bump.evaluate(AFF.product(P, g0)))
        wr = shifted.quad_weights() / AFF.modular(P)
        I_r1 = np.sum(wr * shifted.samples)
        I_r0 = np.sum((bump.quad_weights() / AFF.modular(pts)) * bump.samples)
        assert abs(I_r0 - I_r1) / abs(I_r0) < 1e-4


class TestConvolution:
    def test_line_convolution_vs_fft_oracle(self):
        # lattice-aligned grids make the quadrature an exact discrete
        # convolution, comparable with the fast-transform result
        n, dx = 128, 0.05
        x = (np.arange(n) - n // 2) * dx
        a = GroupFunction(R, [x], np.exp(-((x / 0.5) ** 2)))
        b = GroupFunction(R, [x], np.exp(-(((x - 0.3) / 0.4) ** 2)))
        mine = convolve_at(a, b, x[:, None])
        w = a.quad_weights()
        full = fftconvolve(w * a.samples, b.samples, mode="full")
        oracle = full[n // 2: n // 2 + n]
        assert np.max(np.abs(mine - oracle)) / np.max(np.abs(oracle)) < 1e-8

    def test_convolve_with_zero(self):
        a = gaussian_bump(R, (0.0,), (0.5,), n=64)
        z = GroupFunction(R, a.axes, np.zeros_like(a.samples))
        assert np.max(np.abs(convolve(a, z, n=32).samples)) == 0.0

    def test_affine_associativity_residual(self):
        a = gaussian_bump(AFF, (1.3, 0.0), (0.15, 0.18), n=56)
        b = gaussian_bump(AFF, (1.45, -0.05), (0.16, 0.2), n=56)
        c = gaussian_bump(AFF, (1.2, 0.1), (0.14, 0.17), n=56)
        ab = convolve(a, b, n=56)
        bc = convolve(b, c, n=56)
        probes = np.stack(np.meshgrid(np.linspace(1.3, 2.4, 6),
                                      np.linspace(-0.4, 0.4, 6),
                                      indexing="ij"), -1).reshape(-1, 2)
        lhs = convolve_at(ab, c, probes)
        rhs = convolve_at(a, bc, probes)
        assert np.max(np.abs(lhs - rhs)) < 1e-6

    def test_involution_on_line_is_exact(self):
        a = gaussian_bump(R, (0.2,), (0.4,), n=96)
        pts = a.grid_points()
        adj = conv_adjoint(a)
        expected = np.conj(a.evaluate(-pts))
        assert np.max(np.abs(adj.evaluate(pts) - expected.reshape(adj.evaluate(pts).shape))) < 1e-12
        adj2 = conv_adjoint(adj)
        assert np.max(np.abs(adj2.evaluate(pts) - a.samples)) < 1e-12

    def test_involution_on_affine_refines(self):
        errs = []
        for n in (40, 80):
            a = gaussian_bump(AFF, (1.4, 0.0), (0.16, 0.2), n=n)
            adj2 = conv_adjoint(conv_adjoint(a, 2 * n), 2 * n)
            errs.append(np.max(np.abs(adj2.evaluate(a.grid_points()) - a.samples)))
        assert errs[0] < 1e-2
        assert errs[1] < 0.3 * errs[0]

    def test_star_antihomomorphism(self):
        a = gaussian_bump(AFF, (1.35, 0.05), (0.16, 0.2), n=40)
        b = gaussian_bump(AFF, (1.5, -0.1), (0.18, 0.22), n=40)
        probes = np.stack(np.meshgrid(np.linspace(0.5, 1.4, 5),
                                      np.linspace(-0.5, 0.5, 5),
                                      indexing="ij"), -1).reshape(-1, 2)
        # (a.b)+ = b+.a+ evaluated at probe points
        ab = convolve(a, b, n=48)
        lhs = conv_adjoint(ab, 96).evaluate(probes)
        rhs = convolve_at(conv_adjoint(b, 96), conv_adjoint(a, 96), probes)
        assert np.max(np.abs(lhs - rhs)) < 1e-4

    def test_positivity_witness(self):
        a = gaussian_bump(AFF, (1.4, 0.0), (0.16, 0.2), n=48)
        wit = convolve_at(conv_adjoint(a), a, np.array([[1.0, 0.0]]))[0]
        assert wit.real > -1e-10
        assert abs(wit.imag) < 1e-10

    def test_support_guard(self):
        n = 32
        x = np.linspace(-1, 1, n)
        flat = GroupFunction(R, [x], np.ones(n))
        with pytest.raises(BoxError):
            flat.require_support()


class TestDerivative:
    def test_line_derivative_is_minus_prime(self):
        a = gaussian_bump(R, (0.0,), (0.5,), n=384)
        x = a.axes[0]
        d = rightinv_derivative("d", a, step=5e-3)
        exact = (2 * x / 0.25) * np.exp(-(x / 0.5) ** 2)
        assert np.max(np.abs(d.samples - exact)) < 1e-6

    def test_second_order_stencil_ratio(self):
        a = gaussian_bump(R, (0.0,), (0.5,), n=256)
        x = a.axes[0]
        exact = (2 * x / 0.25) * np.exp(-(x / 0.5) ** 2)
        e = []
        for h in (4e-2, 2e-2):
            d = rightinv_derivative("d", a, step=h, richardson=False)
            e.append(np.max(np.abs(d.samples - exact)))
        assert e[0] / e[1] == pytest.approx(4.0, rel=0.3)

    def test_module_identity(self):
        # xi (a . b) = (xi a) . b
        a = gaussian_bump(R, (0.0,), (0.5,), n=192)
        b = gaussian_bump(R, (0.3,), (0.4,), n=192)
        probes = np.linspace(-1.0, 1.0, 15)[:, None]
        da = rightinv_derivative("d", a, step=1e-2)
        lhs = convolve_at(da, b, probes)
        ab = convolve(a, b, n=256)
        dab = rightinv_derivative("d", ab, step=1e-2)
        rhs = dab.evaluate(probes)
        assert np.max(np.abs(lhs - rhs)) < 1e-5

    def test_unknown_direction(self):
        a = gaussian_bump(R, (0.0,), (0.5,), n=64)
        with pytest.raises(StructureError):
            rightinv_derivative("nope", a)


class TestCompatAndUnitary:
    def setup_method(self):
        self.a = gaussian_bump(AFF, (1.35, 0.05), (0.16, 0.2), n=48)
        self.b = gaussian_bump(AFF, (1.5, -0.1), (0.18, 0.22), n=48)
        self.probes = np.stack(np.meshgrid(np.linspace(1.0, 2.6, 7),
                                           np.linspace(-0.6, 0.6, 7),
                                           indexing="ij"), -1).reshape(-1, 2)

    def test_compat_identity_both_directions(self):
        for xi in ("scale", "shift"):
            assert lie_compat_residual(xi, self.a, self.b, self.probes,
                                       step=2e-2) < 1e-4

    def test_dropped_modular_control(self):
        r = lie_compat_residual("scale", self.a, self.b, self.probes,
                                step=2e-2, drop_modular=True)
        assert r > 1e-2

    def test_unitarity(self):
        x = np.linspace(-8, 8, 2048)
        U = UnitaryModel(AFF, x)
        f = np.exp(-x ** 2 / 2) * (1 + 0.4j * x)
        for g in ([1.4, 0.3], [0.7, -0.5]):
            assert U.norm(U.apply(np.array(g), f)) == pytest.approx(U.norm(f), abs=1e-10)

    def test_homomorphism_of_u(self):
        x = np.linspace(-10, 10, 2048)
        U = UnitaryModel(AFF, x)
        f = np.exp(-x ** 2 / 2).astype(complex)
        g, h = np.array([1.3, 0.2]), np.array([0.8, -0.3])
        lhs = U.apply(AFF.product(g, h), f)
        rhs = U.apply(g, U.apply(h, f))
        keep = np.abs(x) < 5
        assert np.max(np.abs(lhs - rhs)[keep]) < 1e-9

    def test_garding_zero_and_linearity(self):
        x = np.linspace(-8, 8, 256)
        U = UnitaryModel(R, x)
        phi = np.exp(-x ** 2 / 2).astype(complex)
        a = gaussian_bump(R, (0.0,), (0.4,), n=64)
        z = GroupFunction(R, a.axes, np.zeros_like(a.samples))
        assert np.max(np.abs(garding_vector(z, phi, U))) == 0.0
        lhs = garding_vector(GroupFunction(R, a.axes, 2.0 * a.samples), phi, U)
        rhs = 2.0 * garding_vector(a, phi, U)
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_du_identity_line(self):
        x = np.linspace(-8, 8, 512)
        U = UnitaryModel(R, x)
        phi = np.exp(-x ** 2 / 2).astype(complex)
        a = gaussian_bump(R, (0.0,), (0.5,), n=192)
        assert du_identity_residual("d", a, phi, U) < 1e-5

    def test_du_identity_affine(self):
        x = np.linspace(-8, 8, 512)
        U = UnitaryModel(AFF, x)
        phi = np.exp(-x ** 2 / 2).astype(complex)
        for xi in ("scale", "shift"):
            assert du_identity_residual(xi, self.a, phi, U) < 1e-4

    def test_du_zero_function(self):
        x = np.linspace(-8, 8, 256)
        U = UnitaryModel(R, x)
        phi = np.exp(-x ** 2 / 2).astype(complex)
        a = gaussian_bump(R, (0.0,), (0.4,), n=64)
        z = GroupFunction(R, a.axes, np.zeros_like(a.samples))
        assert du_identity_residual("d", z, phi, U) == 0.0


def test_compat_identity_refinement():
    a0 = gaussian_bump(AFF, (1.35, 0.05), (0.16, 0.2), n=48)
    b0 = gaussian_bump(AFF, (1.5, -0.1), (0.18, 0.22), n=48)
    a1 = gaussian_bump(AFF, (1.35, 0.05), (0.16, 0.2), n=96)
    b1 = gaussian_bump(AFF, (1.5, -0.1), (0.18, 0.22), n=96)
    probes = np.stack(np.meshgrid(np.linspace(1.0, 2.6, 7),
                                  np.linspace(-0.6, 0.6, 7),
                                  indexing="ij"), -1).reshape(-1, 2)
    coarse = lie_compat_residual("scale", a0, b0, probes, step=2e-2)
    fine = lie_compat_residual("scale", a1, b1, probes, step=1e-2)
    assert fine < coarse / 4.0
