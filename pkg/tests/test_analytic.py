import numpy as np
import pytest

from compatpair.analytic import (PolyGauss, exp_p_matrix, exp_q_matrix,
                                 hermite_polygauss, op_exp_p, op_exp_q)
from compatpair.errors import StructureError
from compatpair import weyl


def test_hermite_orthonormality():
    hs = [hermite_polygauss(n) for n in range(10)]
    gram = np.array([[hs[i].inner(hs[j]) for j in range(10)] for i in range(10)])
    assert np.max(np.abs(gram - np.eye(10))) < 1e-12


def test_hermite_matches_grid_recurrence():
    x = np.linspace(-4, 4, 301)
    H = weyl.hermite_functions(x, 9)
    for n in (0, 4, 8):
        assert np.max(np.abs(hermite_polygauss(n)(x) - H[:, n])) < 1e-11


def test_inner_product_against_quadrature():
    rng = np.random.default_rng(0)
    f = PolyGauss.term(rng.standard_normal(4) + 1j * rng.standard_normal(4), 1.3, 0.2)
    g = PolyGauss.term(rng.standard_normal(3) + 1j * rng.standard_normal(3), 0.9, -0.3)
    x = np.linspace(-12, 12, 20001)
    quad = np.trapezoid(np.conj(f(x)) * g(x), x)
    assert abs(f.inner(g) - quad) < 1e-8


def test_shift_argument():
    rng = np.random.default_rng(1)
    f = PolyGauss.term(rng.standard_normal(5), 1.1, 0.1)
    w = 0.4 - 0.3j
    xs = np.array([-1.0, 0.3, 2.2])
    assert np.max(np.abs(f.shift_arg(w)(xs) - f(xs - w))) < 1e-12


def test_mul_exp():
    f = PolyGauss.gaussian(1.0, 1.0, 0.0)
    c = 0.8
    xs = np.linspace(-2, 2, 11)
    assert np.max(np.abs(f.mul_exp(c)(xs) - np.exp(c * xs) * f(xs))) < 1e-12


def test_weyl_relation_exact():
    rng = np.random.default_rng(2)
    f = PolyGauss.term(rng.standard_normal(4) + 1j * rng.standard_normal(4), 1.2, 0.15)
    alpha, beta = 0.6, 0.35
    xy = op_exp_q(alpha, op_exp_p(beta, f))
    yx = op_exp_p(beta, op_exp_q(alpha, f))
    phase = np.exp(2j * np.pi * alpha * beta)
    xs = np.linspace(-3, 3, 41)
    resid = np.max(np.abs(xy(xs) - phase * yx(xs))) / np.max(np.abs(xy(xs)))
    assert resid < 1e-12


def test_exp_q_matrix_vs_expm():
    from scipy.linalg import expm
    M = 20
    Xm = exp_q_matrix(0.3, M)
    Xe = expm(2 * np.pi * 0.3 * weyl.position_matrix(M))
    assert np.max(np.abs((Xm - Xe)[:10, :10])) < 1e-10


def test_exp_p_matrix_vs_expm():
    from scipy.linalg import expm
    M = 20
    Ym = exp_p_matrix(0.3, M)
    Ye = expm(0.3 * weyl.momentum_matrix(M))
    assert np.max(np.abs((Ym - Ye)[:10, :10])) < 1e-10


def test_positive_decay_required():
    with pytest.raises(StructureError):
        PolyGauss.term([1.0], -0.5, 0.0)
