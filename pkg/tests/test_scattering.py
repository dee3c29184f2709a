import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import jv

from calogero_anyon.exchange_algebra import ComplexRational, Expression
from calogero_anyon.scattering import (
    ScatteringState,
    asymptotic_phases,
    bessel_h,
    bessel_h_with_derivative,
    bessel_state,
    build_scattering_symbolic,
    check_eigen,
    check_swap_symmetry,
    irregular_h,
    series_coefficient,
    switchover_discrepancy,
    two_body_factorized,
)
from calogero_anyon.scattering.symbolic import ScatteringState as _SS

I = ComplexRational(0, 1)


def bessel_oracle(g, s):
    """sqrt(2 pi s) J_{g-1/2}(s) via scipy."""
    return np.sqrt(2 * np.pi * s) * jv(g - 0.5, s)


# -- Bessel form ------------------------------------------------------------------


def test_bessel_examples():
    assert bessel_h(0, math.pi) == pytest.approx(-2, abs=1e-14)
    assert bessel_h(1, math.pi / 2) == pytest.approx(2, abs=1e-14)
    assert bessel_h(2, math.pi) == pytest.approx(2, abs=1e-13)


def test_bessel_small_argument():
    s = 1e-3
    assert bessel_h(2, s).real == pytest.approx(2 * s * s / 3, rel=1e-6)
    assert series_coefficient(2) == pytest.approx(2 / 3, rel=1e-14)


def _rayleigh(gmax):
    s = sp.symbols("s")
    hs = [2 * sp.cos(s), 2 * sp.sin(s)]
    for g in range(1, gmax):
        hs.append(sp.expand((2 * g - 1) / s * hs[g] - hs[g - 1]))
    return s, hs


@pytest.mark.parametrize("g", range(7))
def test_bessel_matches_rayleigh(g):
    s, hs = _rayleigh(7)
    f = sp.lambdify(s, hs[g], "mpmath")
    grid = np.linspace(0.1, 20, 400)
    mpmath.mp.dps = 40
    ref = np.array([float(f(mpmath.mpf(v))) for v in grid])
    ours = bessel_h(g, grid).real
    assert np.allclose(ours, ref, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("g", [0.25, 0.5, 0.75, 1.5, 2.7, 3.3])
def test_bessel_matches_scipy(g):
    # the series and the truncated Hankel form both lose a few digits near the |s| = 12 switch
    grid = np.linspace(0.05, 40, 800)
    assert np.allclose(bessel_h(g, grid).real, bessel_oracle(g, grid), rtol=1e-10, atol=2e-11)


@pytest.mark.parametrize("g", [0.25, 1.0, 2.7])
def test_bessel_complex_argument_mpmath(g):
    mpmath.mp.dps = 30
    for s in (0.7 + 0.2j, 3.1 - 0.5j, 14.0 + 0.3j, 25 + 1j):
        ref = complex(mpmath.sqrt(2 * mpmath.pi * s) * mpmath.besselj(g - 0.5, s))
        assert abs(bessel_h(g, s) - ref) <= 1e-11 * max(1.0, abs(ref))


@pytest.mark.parametrize("g", [0, 1, 2, 3, 0.25, 1.5, 2.7])
def test_switchover_agrees(g):
    assert switchover_discrepancy(g) < 1e-10


def test_derivative_matches_finite_difference():
    s = np.linspace(0.2, 5, 11)
    h, dh = bessel_h_with_derivative(1.3, s)
    eps = 1e-6
    fd = (bessel_h(1.3, s + eps) - bessel_h(1.3, s - eps)) / (2 * eps)
    assert np.allclose(dh, fd, rtol=1e-7)
    assert np.allclose(h, bessel_h(1.3, s), rtol=1e-14)


def test_irregular_solution():
    g = 0.75
    s = np.array([0.5, 2.0, 7.0])
    assert np.allclose(irregular_h(g, s).real, bessel_oracle(1 - g, s), rtol=1e-10)


@settings(max_examples=30)
@given(st.floats(0.0, 3.5), st.floats(0.5, 15.0))
def test_bessel_ode(g, s):
    # h'' + (1 - g(g-1)/s^2) h = 0
    eps = 1e-3
    h0 = bessel_h(g, s)
    d2 = (bessel_h(g, s + eps) - 2 * h0 + bessel_h(g, s - eps)) / eps ** 2
    resid = d2 + (1 - g * (g - 1) / s ** 2) * h0
    scale = max(1.0, abs(h0), abs(g * (g - 1) / s ** 2 * h0))
    assert abs(resid) < 1e-5 * scale


# -- symbolic states ---------------------------------------------------------------


def test_free_two_body_state():
    h = build_scattering_symbolic(2, 0).expression
    assert h == Expression.plane_wave(2) + Expression.plane_wave(2, [2, 1])


def test_fermion_two_body_state():
    h = build_scattering_symbolic(2, 1).expression
    expected = (Expression.plane_wave(2) - Expression.plane_wave(2, [2, 1])).scale(-I)
    assert h == expected


def test_three_body_g1_is_slater_sum():
    from calogero_anyon.exchange_algebra import antisymmetrize
    h = build_scattering_symbolic(3, 1).expression
    a = antisymmetrize(Expression.plane_wave(3))
    # the z Vandermonde produced by the derivatives cancels the division exactly
    assert not h.has_denominators()
    ratio = h.evaluate([0.2, -0.4, 0.9], [0.5, -0.3, 1.1]) / a.evaluate([0.2, -0.4, 0.9], [0.5, -0.3, 1.1])
    for x2, z2 in (([1.0, 0.1, -0.6], [0.3, 0.8, -1.0]), ([0.0, 0.5, 1.5], [1.2, 0.1, -0.4])):
        assert h.evaluate(x2, z2) / a.evaluate(x2, z2) == pytest.approx(ratio, rel=1e-12)
    assert abs(abs(ratio) - 1) < 1e-12


@pytest.mark.parametrize("n,g", [(2, 0), (2, 1), (2, 2), (2, 3), (3, 0), (3, 1)])
def test_eigen_and_swap(n, g):
    st_ = build_scattering_symbolic(n, g)
    assert check_eigen(st_).passed
    assert check_swap_symmetry(st_).passed


def test_corrupted_state_fails_eigen():
    st_ = build_scattering_symbolic(2, 2)
    terms = st_.expression.terms
    broken = Expression.from_terms(2, terms[1:])
    report = check_eigen(_SS(2, st_.g, "symbolic", broken))
    assert not report.passed
    assert not report.residual.is_zero()


@pytest.mark.parametrize("g", [0, 1, 2, 3])
def test_two_body_factorized_agreement(g):
    h = build_scattering_symbolic(2, g).expression
    # the plane-wave form cancels like s^(2g) as s -> 0, so samples keep |s| >= 1/2
    rng = np.random.Generator(np.random.PCG64(3))
    checked = 0
    while checked < 10:
        x = rng.uniform(-2, 2, 2)
        z = rng.uniform(-2, 2, 2) + 1j * rng.uniform(-0.3, 0.3, 2)
        if abs((x[0] - x[1]) * (z[0] - z[1])) < 1.0:
            continue
        checked += 1
        ours = h.evaluate(list(x), list(z))
        ref = two_body_factorized(g, x[0], x[1], z[0], z[1])
        assert abs(ours - ref) <= 1e-12 * abs(ref)


@pytest.mark.parametrize("n,g", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)])
def test_coincidence_exponent(n, g):
    h = build_scattering_symbolic(n, g).expression
    # only the pair (1, 2) approaches; every other s_ij stays of order one
    z = [2.0, -1.5, 0.5][:n]
    base = [0.0, 0.0, 3.0][:n]
    ds = np.geomspace(0.03, 0.003, 6)
    vals = []
    for d in ds:
        x = list(base)
        x[1] = x[0] + d
        vals.append(abs(h.evaluate(x, z)))
    slope = np.polyfit(np.log(ds), np.log(vals), 1)[0]
    assert abs(slope - g) <= 0.01 * g


def test_bessel_state_round_trip():
    b = bessel_state(Fraction(3, 2))
    assert ScatteringState.from_dict(b.to_dict()) == b
    val = b.evaluate([0.4, -0.2], [1.0, 0.3])
    assert val == pytest.approx(two_body_factorized(1.5, 0.4, -0.2, 1.0, 0.3))


def test_symbolic_round_trip():
    s = build_scattering_symbolic(3, 1)
    assert ScatteringState.from_dict(s.to_dict()).expression == s.expression


# -- asymptotic phases ---------------------------------------------------------


def _phase_oracle(n, g, perm):
    inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
    return cmath.exp(-1j * math.pi * n * (n - 1) * g / 4) * cmath.exp(1j * math.pi * g * inv)


@pytest.mark.parametrize("n,g", [(2, 0), (2, 1), (3, 1), (3, 2), (3, Fraction(1, 3)), (4, 1)])
def test_asymptotic_phases(n, g):
    table = asymptotic_phases(n, g)
    assert len(table) == math.factorial(n)
    for perm, phase in table:
        assert complex(phase) == pytest.approx(_phase_oracle(n, float(g), perm.images), abs=1e-14)


def test_asymptotic_phase_examples():
    two = dict((p.images, complex(v)) for p, v in asymptotic_phases(2, 1))
    assert two[(1, 2)] == -1j and two[(2, 1)] == 1j
    assert all(complex(v) == 1 for _, v in asymptotic_phases(2, 0))


@pytest.mark.parametrize("n,g", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_leading_coefficients_are_phases(n, g):
    report = check_swap_symmetry(build_scattering_symbolic(n, g))
    zero = (0,) * (n * (n - 1) // 2)
    for perm, phase in asymptotic_phases(n, g):
        dec = report.decompositions[perm.images]
        assert complex(dec[zero]) == pytest.approx(complex(phase), abs=1e-14)


def test_fractional_symbolic_rejected():
    with pytest.raises(ValueError):
        build_scattering_symbolic(2, Fraction(1, 2))
