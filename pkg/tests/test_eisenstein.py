import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fuchsian_rn.arith import DomainError
from fuchsian_rn.eisenstein import (ConvergenceError, SpectralPoint, auto_terms, automorphy_factor,
                                    check_eigenfunction, check_functional_equation,
                                    check_modular_invariance, direct_G, direct_g, fourier_expansion,
                                    fourier_G, fourier_g, fourier_table, g_hat, g_hat_expansion,
                                    g_hat_level_one, g_tilde, laplacian_fd, taylor_numeric, taylor_T,
                                    weight_two_quasimodular)
from fuchsian_rn.group import MINUS, act, omega, s_gen, standard_generators
from fuchsian_rn.lseries import f_N

ZS = [1j, 0.2 + 1.1j, -0.4 + 0.8j]
# (alpha, beta) with Re q in {5, 6}
WEIGHTS = [(4.0, 2.0), (2.5, 2.5), (2.0, 4.0), (3.5 + 0.3j, 1.5 + 0.3j)]


@pytest.mark.parametrize("N", [1, 2, 3, 5, 6])
@pytest.mark.parametrize("z", ZS)
@pytest.mark.parametrize("alpha,beta", WEIGHTS)
def test_fourier_matches_lattice_sum(N, z, alpha, beta):
    d = direct_g(N, "full", z, alpha, beta, cutoff=400)
    f = fourier_g(N, z, alpha, beta, n_max=40)
    # g vanishes identically at the fixed point of w for odd k/2 (N = 2, z = i, k = 2)
    assert f.value == pytest.approx(d.value, rel=1e-6, abs=1e-9)


def test_fixed_point_zero():
    assert abs(direct_g(2, "full", 1j, 4, 2).value) < 1e-12
    assert abs(fourier_g(2, 1j, 4, 2).value) < 1e-12


def test_level_one_index_sets_coincide():
    z = 0.1 + 1.3j
    L = direct_g(1, "L", z, 3, 3, cutoff=200).value
    R = direct_g(1, "R", z, 3, 3, cutoff=200).value
    assert L == pytest.approx(R, rel=1e-14)
    assert direct_g(1, "full", z, 3, 3, cutoff=200).value == pytest.approx(2 * L, rel=1e-14)


@pytest.mark.parametrize("g", standard_generators(5)[:4], ids=str)
def test_slash_action_on_index_sets(g):
    """Plus elements preserve each index set, minus elements swap L and R."""
    N, z, a, b = 5, 0.3 + 1.1j, 4.0, 2.0
    j = automorphy_factor(g, z)
    fac = abs(j) ** (-(a + b)) * (j / abs(j)) ** (-(a - b))
    moved = fac * direct_g(N, "L", act(g, z), a, b).value
    target = direct_g(N, "R" if g.parity == MINUS else "L", z, a, b).value
    assert moved == pytest.approx(target, rel=1e-8)


@pytest.mark.parametrize("N,y,alpha,beta", [(2, 1.0, 4, 2), (3, 0.9, 3, 3), (5, 1.2, 2.5 + 1j, 2.5 + 1j)])
def test_constant_term_is_the_x_average(N, y, alpha, beta):
    period = math.sqrt(N)
    xs = np.arange(16) / 16 * period
    avg = np.mean([direct_g(N, "full", x + 1j * y, alpha, beta).value for x in xs])
    assert fourier_expansion(N, y, alpha, beta).constant == pytest.approx(avg, rel=1e-8)


@given(st.sampled_from([1, 2, 5, 6]), st.floats(-3, 3), st.floats(0.5, 2))
def test_periodicity(N, x, y):
    sp = SpectralPoint(0.3 + 0.4j, 2)
    z = complex(x, y)
    a = fourier_G(N, z, sp).value
    b = fourier_G(N, z + math.sqrt(N), sp).value
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


@pytest.mark.parametrize("N", [2, 3, 5, 6, 7])
@pytest.mark.parametrize("k", [-2, 0, 2, 4])
def test_completed_series_two_routes(N, k):
    """The definition (completion factor times G) against the closed three-part expansion."""
    for z, s in [(0.3 + 1.1j, 0.35 + 0.2j), (1j, 1.7 - 0.5j), (-0.2 + 0.7j, -0.8 + 0.3j)]:
        a = g_hat(N, k, z, s).value
        b = g_hat_expansion(N, k, z, s).value
        assert a == pytest.approx(b, rel=1e-9)


@pytest.mark.parametrize("k", [0, 2, 4, -2])
def test_level_one_expansion_against_lattice(k):
    z, s = 0.25 + 0.9j, 4.2 + 0.1j
    sp = SpectralPoint(s, k)
    G = 0.5 * z.imag ** s * direct_g(1, "L", z, sp.alpha, sp.beta, cutoff=400).value
    factor = mpmath.pi ** (-s - k / 2) * mpmath.gamma(s + k / 2 + abs(k) / 2)
    assert g_hat_level_one(k, z, s).value == pytest.approx(complex(factor) * G, rel=1e-7)


def test_completed_series_matches_definition_in_convergent_region():
    N, k, z, s = 5, 2, 0.1 + 0.9j, 2.0 + 0.3j
    sp = SpectralPoint(s, k)
    G = direct_G(N, z, sp).value
    factor = (math.pi / math.sqrt(N)) ** (-s - k / 2) * complex(mpmath.gamma(s + k)) * f_N(N, s, k)
    assert g_hat(N, k, z, s).value == pytest.approx(factor * G, rel=1e-7)


@pytest.mark.parametrize("p,k,z,s,tol", [(5, 0, 1j, 0.3, 1e-8), (3, 2, 0.1 + 0.9j, 0.25 + 0.4j, 1e-6),
                                         (2, -4, 1j, 0.6, 1e-6), (5, 4, 1j, 0.3 + 0.2j, 1e-6)])
def test_functional_equation_examples(p, k, z, s, tol):
    r = check_functional_equation(p, k, z, s)
    assert r.value < tol
    assert r.details["tilde_residual"] < tol * 10


@settings(max_examples=30)
@given(st.sampled_from([2, 3, 5, 7, 11]), st.sampled_from([-4, -2, 0, 2, 4]),
       st.floats(-1, 1), st.floats(0.6, 1.5), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_functional_equation_property(p, k, x, y, sr, si):
    s = complex(sr, si)
    dual = 1 - k - s
    # keep away from the poles of the constant terms
    for w in (s, dual):
        if min(abs(w - c) for c in range(-6, 7)) < 0.1 or min(abs(2 * w + k - c) for c in (0, 1, 2)) < 0.1:
            return
    r = check_functional_equation(p, k, complex(x, y), s)
    scale = max(1.0, *(abs(v) for v in r.details["hat"]))
    assert r.value < 1e-8 * scale


def test_invariance_examples():
    r = check_modular_invariance(5, 4, 2j, 2, omega(5), mode="direct")
    assert r.value < 1e-6
    g = s_gen(5, 2)
    assert g.parity == MINUS
    r = check_modular_invariance(5, 4, 2j, 2, g, mode="direct")
    assert r.value < 1e-6


@pytest.mark.parametrize("N", [5, 7, 11])
def test_invariance_under_generators_fourier(N):
    for g in standard_generators(N):
        for z in (0.3 + 0.9j, -0.5 + 1.4j):
            if act(g, z).imag < 0.1:
                continue
            r = check_modular_invariance(N, 2, z, 0.4 + 0.7j, g)
            assert r.value < 1e-8


def test_invariance_level_mismatch():
    with pytest.raises(DomainError):
        check_modular_invariance(5, 2, 1j, 2, omega(7))


def test_automorphy_factor():
    g = s_gen(5, 2)
    (_, _), (C, D) = g.matrix()
    assert automorphy_factor(g, 1j) == pytest.approx(C * 1j + D)


# -- Taylor coefficients at s = 0 ---------------------------------------------

def four_direction_derivative(p, k, z, h=1e-3):
    """First Taylor coefficient of G~ at 0: the mean of G~(h d)/(h d) over d in {1, i, -1, -i}
    has error O(h^4)."""
    dirs = [1, 1j, -1, -1j]
    return sum(g_tilde(p, k, z, h * d).value / (h * d) for d in dirs) / 4


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_constant_taylor_coefficient(p):
    # f_p(0) = p/(p+1) multiplies the value 1/2 of the bracket
    for z in (1j, 0.3 + 0.8j):
        assert taylor_T(p, 0, 0, z) == pytest.approx(p / (2 * (p + 1)), abs=1e-15)
        assert taylor_numeric(p, 0, 0, z, radius=1e-2) == pytest.approx(p / (2 * (p + 1)), abs=1e-10)


def test_constant_taylor_frozen():
    assert [taylor_T(p, 0, 0, 1j).real for p in (2, 3, 5, 7)] == pytest.approx([1 / 3, 3 / 8, 5 / 12, 7 / 16])


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("z", [1j, 0.3 + 0.8j, -0.7 + 1.6j])
def test_first_taylor_coefficient_weight_zero(p, z):
    closed = taylor_T(p, 0, 1, z)
    assert closed == pytest.approx(taylor_numeric(p, 0, 1, z, radius=1e-2), abs=1e-10)
    assert closed == pytest.approx(four_direction_derivative(p, 0, z), abs=1e-9)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("z", [1j, 0.3 + 0.8j, -0.7 + 1.6j])
def test_first_taylor_coefficient_weight_two(p, z):
    closed = taylor_T(p, 2, 1, z)
    assert closed == pytest.approx(taylor_numeric(p, 2, 1, z, radius=1e-2), abs=1e-10)
    assert closed == pytest.approx(four_direction_derivative(p, 2, z), abs=1e-9)


def test_taylor_frozen_values():
    z = 0.3 + 0.8j
    assert taylor_T(5, 2, 1, z) == pytest.approx(-0.07979169156879909 - 0.268036748083891j, rel=1e-12)
    assert taylor_T(5, 0, 1, z) == pytest.approx(0.003965708414819582, rel=1e-9)
    assert taylor_T(5, 0, 1, 1j) == pytest.approx(-0.01941718041335671, rel=1e-12)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_weight_two_taylor_vanishes_at_i(p):
    # i is fixed by w with j(w, i)^2 = -1, so a weight-2 invariant vanishes there
    assert abs(taylor_T(p, 2, 1, 1j)) < 1e-14


@pytest.mark.parametrize("p", [5, 7])
def test_weight_two_taylor_coefficient_is_harmonic(p):
    # Delta_2 T_{p,2,1} = T_{p,2,0}, and T_{p,2,0} = 0
    z = 0.2 + 0.9j
    assert abs(taylor_numeric(p, 2, 0, z, radius=1e-2)) < 1e-12
    f = lambda w: taylor_T(p, 2, 1, w)
    assert abs(laplacian_fd(f, 2, z, 1e-3)) < 1e-5


@pytest.mark.parametrize("p", [5, 7])
def test_weight_two_taylor_has_no_negative_frequencies(p):
    y = 0.9
    period = math.sqrt(p)
    xs = np.arange(32) / 32 * period
    vals = np.array([taylor_T(p, 2, 1, complex(x, y)) for x in xs])
    coeffs = np.fft.fft(vals) / len(xs)
    # index -n sits at len - n
    assert np.max(np.abs(coeffs[17:])) < 1e-12
    assert abs(coeffs[1]) > 1e-3


def test_weight_two_taylor_is_half_the_quasimodular_form():
    z = 0.1 + 1.2j
    assert taylor_T(7, 2, 1, z) == pytest.approx(0.5 * weight_two_quasimodular(7, z), rel=1e-14)


def test_weight_two_taylor_transforms_with_weight_two():
    p = 5
    z = 0.2 + 0.6j
    for g in standard_generators(p):
        j = automorphy_factor(g, z)
        assert taylor_T(p, 2, 1, act(g, z)) == pytest.approx(j ** 2 * taylor_T(p, 2, 1, z), rel=1e-9)


def test_numeric_taylor_path_for_other_indices():
    v = taylor_T(5, 4, 1, 1j)
    assert v == pytest.approx(taylor_numeric(5, 4, 1, 1j, radius=2e-2), rel=1e-8)


def test_taylor_rejects_composite():
    with pytest.raises(DomainError):
        taylor_T(6, 0, 0, 1j)


# -- Laplacian -----------------------------------------------------------------

@pytest.mark.parametrize("N,k,z,s", [(5, 0, 1j, 2), (2, 4, 0.3 + 1.2j, 1.5)])
def test_eigenfunction_examples(N, k, z, s):
    r1 = check_eigenfunction(N, k, z, s, h=1e-3)
    assert r1.value < 1e-4
    r2 = check_eigenfunction(N, k, z, s, h=5e-4)
    assert 3.5 <= r1.value / r2.value <= 4.5


def test_laplacian_on_known_eigenfunctions():
    # y^s is a weight-0 eigenfunction, y^s conj-free power y^{s} z-bar^0 ...
    s = 0.7 + 0.2j
    z = 0.4 + 1.3j
    val = laplacian_fd(lambda w: w.imag ** s, 0, z, 1e-3)
    assert val == pytest.approx(s * (s - 1) * z.imag ** s, rel=1e-6)
    # y^{s} is also a weight-k eigenfunction with eigenvalue s(s + k - 1)
    k = 4
    val = laplacian_fd(lambda w: w.imag ** s, k, z, 1e-3)
    assert val == pytest.approx(s * (s + k - 1) * z.imag ** s, rel=1e-6)


# -- plumbing ------------------------------------------------------------------

def test_fourier_table_rows():
    rows = fourier_table(5, 2, 1j, 2.0, 20)
    assert [n for n, _, _ in rows] == list(range(-20, 21))
    total = sum(c * cmath.exp(2j * math.pi * n * 0 / math.sqrt(5)) for n, c, _ in rows)
    assert total == pytest.approx(fourier_G(5, 1j, SpectralPoint(2.0, 2), 20).value, rel=1e-14)


def test_auto_terms():
    assert auto_terms(5, 1.0) == 64
    assert auto_terms(5, 0.1) == math.ceil(60 * math.sqrt(5) / (2 * math.pi * 0.1))
    assert auto_terms(5, 0.1, 7) == 7
    with pytest.raises(ConvergenceError):
        auto_terms(5, 0.01)


def test_input_errors():
    with pytest.raises(DomainError):
        SpectralPoint(0.5, 3)
    with pytest.raises(ConvergenceError):
        direct_g(5, "full", 1j, 1, 1)
    with pytest.raises(DomainError):
        direct_g(5, "full", -1j, 3, 3)
    with pytest.raises(DomainError):
        direct_g(5, "X", 1j, 3, 3)
    with pytest.raises(DomainError):
        g_hat(12, 0, 1j, 0.3)
    with pytest.raises(DomainError):
        g_hat_expansion(1, 0, 1j, 0.3)


@pytest.mark.parametrize("k", [-2, 0, 2, 4])
def test_level_one_paths_differ_by_four(k):
    # g_1 = 2 g_{1,L} and f_1 = 2 account for the factor
    z, s = 0.2 + 1.1j, 0.3 + 0.2j
    assert g_hat(1, k, z, s).value == pytest.approx(4 * g_hat_level_one(k, z, s).value, rel=1e-12)
