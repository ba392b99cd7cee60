import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from fuchsian_rn.special import (MAX_SHIFTS, UnsupportedParameters, h_kernel,
                                 incomplete_gamma_upper, modified_w, whittaker_w)

KAPPAS = [-2, -1, -0.5, 0, 0.5, 1, 2, 1 + 0.3j, -1.5 + 0.2j]
MUS = [0.3, 0.5 + 0.7j, 1.2, 2.5j, 0.1 - 0.4j, 1.5]
YS = [0.05, 0.5, 2.0, 10.0, 40.0]


def reference_w(kappa, mu, y):
    with mpmath.workdps(30):
        return complex(mpmath.whitw(kappa, mu, y))


@pytest.mark.parametrize("kappa,mu", list(itertools.product(KAPPAS, MUS)))
def test_whittaker_against_mpmath(kappa, mu):
    got = whittaker_w(kappa, mu, np.array(YS))
    for y, g in zip(YS, got):
        ref = reference_w(kappa, mu, y)
        assert abs(g - ref) <= 1e-10 * abs(ref) + 1e-300


def test_whittaker_scalar_and_evenness():
    w = whittaker_w(0.5, 0.3 + 0.2j, 1.7)
    assert isinstance(w, complex)
    assert abs(w - whittaker_w(0.5, -0.3 - 0.2j, 1.7)) < 1e-14 * abs(w)


def test_whittaker_laguerre_zero():
    # W_{2,1/2}(y) = -e^{-y/2} y (2 - y) vanishes at y = 2
    assert abs(whittaker_w(2, 0.5, 2.0)) < 1e-14
    y = 0.8
    assert whittaker_w(2, 0.5, y) == pytest.approx(-math.exp(-y / 2) * y * (2 - y), rel=1e-12)


def test_whittaker_kappa_zero_is_bessel_k():
    # W_{0,mu}(2y) = sqrt(2y/pi) K_mu(y)
    for mu, y in [(0.3, 0.4), (1.7, 2.0), (0.25j, 5.0)]:
        ref = complex(mpmath.sqrt(2 * y / mpmath.pi) * mpmath.besselk(mu, y))
        assert whittaker_w(0, mu, 2 * y) == pytest.approx(ref, rel=1e-12)


def test_whittaker_rejects_bad_input():
    with pytest.raises(ValueError):
        whittaker_w(0, 0.5, 0.0)
    with pytest.raises(UnsupportedParameters):
        whittaker_w(MAX_SHIFTS + 3, 0.1, 1.0)


@given(st.floats(-2, 2), st.floats(0.05, 2), st.floats(0.1, 20))
def test_whittaker_recurrence(kappa, mu, y):
    # W_{k+1} + (2k - y) W_k + ((k - 1/2)^2 - mu^2) W_{k-1} = 0
    w0, w1, w2 = (whittaker_w(kappa + d, mu, y) for d in (-1, 0, 1))
    scale = abs(w2) + abs((2 * kappa - y) * w1) + abs(((kappa - 0.5) ** 2 - mu * mu) * w0)
    residual = w2 + (2 * kappa - y) * w1 + ((kappa - 0.5) ** 2 - mu * mu) * w0
    assert abs(residual) <= 1e-11 * scale + 1e-300


def test_modified_w_definition():
    alpha, beta = 2.2, 0.7
    q, k = alpha + beta, alpha - beta
    for y in (0.4, 1.3):
        assert modified_w(y, alpha, beta) == pytest.approx(y ** (-q / 2) * reference_w(k / 2, (q - 1) / 2, 2 * y), rel=1e-12)
        assert modified_w(-y, alpha, beta) == pytest.approx(y ** (-q / 2) * reference_w(-k / 2, (q - 1) / 2, 2 * y), rel=1e-12)
    arr = modified_w(np.array([-1.3, 1.3]), alpha, beta)
    assert arr.shape == (2,)
    with pytest.raises(ValueError):
        modified_w(0.0, alpha, beta)


def reference_h(t, alpha, beta):
    f = lambda x: (1 - 1j * x) ** (-alpha) * (1 + 1j * x) ** (-beta) * mpmath.exp(-1j * t * x)
    with mpmath.workdps(20):
        if t == 0:
            return complex(mpmath.quad(lambda x: f(x) + f(-x), [0, mpmath.inf]))
        return complex(mpmath.quadosc(lambda x: f(x) + f(-x), [0, mpmath.inf], omega=abs(t)))


@pytest.mark.parametrize("t", [0.0, 0.7, -0.7, 2.5, -3.0])
@pytest.mark.parametrize("alpha,beta", [(2.3, 1.4), (1.5, 1.5), (3.0, 0.5 + 0.2j)])
def test_h_kernel_against_fourier_integral(t, alpha, beta):
    assert h_kernel(t, alpha, beta) == pytest.approx(reference_h(t, alpha, beta), rel=1e-9)


@pytest.mark.parametrize("t", [0.7, 2.5, -0.7, -2.5])
def test_h_kernel_whittaker_relation(t):
    a, b = 2.3, 1.4
    q = a + b
    T = abs(t)
    kappa, g = ((a - b) / 2, a) if t > 0 else ((b - a) / 2, b)
    via_w = 2 * math.pi / math.gamma(g) * 2 ** (-q / 2) * T ** (q / 2 - 1) * whittaker_w(kappa, (q - 1) / 2, 2 * T)
    assert h_kernel(t, a, b) == pytest.approx(via_w, rel=1e-12)


def test_h_kernel_vanishes_on_gamma_poles():
    # 1/Gamma(beta) = 0 kills the positive side
    assert h_kernel(1.0, 3.0, 0.0) == 0
    assert h_kernel(-1.0, -1.0, 3.0) == 0
    with pytest.raises(ValueError):
        h_kernel(1.0, 0.5, 0.4)


@pytest.mark.parametrize("a,x", [(0, 1.0), (-1, 2.0), (2 + 1j, 0.5), (0.5, 3.0), (-2.5, 0.3), (4, 10.0)])
def test_incomplete_gamma(a, x):
    assert incomplete_gamma_upper(a, x) == pytest.approx(complex(mpmath.gammainc(a, x)), rel=1e-12)


def test_incomplete_gamma_frozen():
    assert incomplete_gamma_upper(0, 1.0).real == pytest.approx(0.2193839343955203, rel=1e-13)
    with pytest.raises(ValueError):
        incomplete_gamma_upper(1, 0.0)


@pytest.mark.parametrize("y", [0.5, 1.0, 4.0])
def test_elementary_cases(y):
    assert whittaker_w(0, 0.5, y) == pytest.approx(math.exp(-y / 2), rel=1e-11)
    assert whittaker_w(0, -0.5, y) == pytest.approx(math.exp(-y / 2), rel=1e-11)
    assert whittaker_w(1, 0.5, y) == pytest.approx(y * math.exp(-y / 2), rel=1e-11)


@pytest.mark.parametrize("kappa", [-2, -1, 0, 1, 2])
def test_quadrature_self_convergence(kappa):
    ys = np.array([0.1, 0.7, 3.0, 12.0, 50.0])
    for mr, mi in itertools.product([-2, -0.7, 0.4, 2], [-2, 0, 1.3]):
        mu = complex(mr, mi)
        coarse = whittaker_w(kappa, mu, ys)
        fine = whittaker_w(kappa, mu, ys, refine=2)
        assert np.all(np.abs(coarse - fine) <= 1e-10 * np.abs(fine) + 1e-300)


@pytest.mark.parametrize("kappa,mu", [(0, 0.3), (1, 0.5), (-1, 1.2), (2, 0.7j)])
def test_large_argument_asymptotics(kappa, mu):
    y = 200.0
    ratio = whittaker_w(kappa, mu, y) * math.exp(y / 2) * y ** (-kappa)
    assert abs(ratio - 1) < 0.05


def test_h_kernel_small_cases():
    assert h_kernel(0, 2, 2) == pytest.approx(math.pi / 2, rel=1e-14)
    assert h_kernel(1.3, 1.7, 1.7) == pytest.approx(h_kernel(-1.3, 1.7, 1.7), rel=1e-12)
    assert incomplete_gamma_upper(1, 2.5) == pytest.approx(math.exp(-2.5), rel=1e-13)
