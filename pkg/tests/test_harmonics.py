"""Spherical harmonics, transform multipliers, and the n=2 Fourier case."""

import math

import numpy as np
import pytest
from scipy.special import sph_harm_y

from starsym import (
    LMAX,
    equator_transform,
    estimate_multiplier,
    fourier_check_n2,
    fourier_field,
    harmonic_field,
    injectivity_probe,
    make_frame,
    multiplier_table,
    equator_rule,
    probe_directions,
    random_directions,
    real_harmonic,
    sphere_rule,
)


def _double_factorial(k):
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def closed_form_multiplier(l):
    # independent oracle: the degree-l multiplier equals 2 pi times the
    # derivative of the Legendre polynomial at 0; odd l = 2k+1 gives
    # (-1)^k (2k+1)!! / (2k)!!, even l gives 0
    if l % 2 == 0:
        return 0.0
    k = (l - 1) // 2
    return 2.0 * math.pi * (-1) ** k * _double_factorial(2 * k + 1) / _double_factorial(2 * k)


def test_real_harmonics_match_scipy():
    # frozen oracle: our convention differs from the complex harmonics
    # by (-1)^m sqrt(2) on the real/imaginary parts
    rng = np.random.default_rng(0)
    pts = rng.standard_normal((200, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    theta = np.arccos(np.clip(pts[:, 2], -1.0, 1.0))
    phi = np.arctan2(pts[:, 1], pts[:, 0])
    for l in range(0, 9):
        for m in range(-l, l + 1):
            mine = real_harmonic(l, m).evaluate(pts)
            z = sph_harm_y(l, abs(m), theta, phi)
            if m == 0:
                ref = z.real
            elif m > 0:
                ref = (-1) ** m * math.sqrt(2.0) * z.real
            else:
                ref = (-1) ** m * math.sqrt(2.0) * z.imag
            assert np.max(np.abs(mine - ref)) < 1e-12, (l, m)


def test_real_harmonics_orthonormal():
    rule = sphere_rule(3, 24)
    pairs = [(0, 0), (1, 1), (2, -1), (3, 2), (4, 0), (5, -3)]
    vals = {p: real_harmonic(*p).evaluate(rule.nodes) for p in pairs}
    for i, p in enumerate(pairs):
        for q in pairs[i:]:
            got = float(rule.weights @ (vals[p] * vals[q]))
            want = 1.0 if p == q else 0.0
            assert got == pytest.approx(want, abs=1e-12)


def test_harmonic_gradients_match_fd():
    from starsym import ScalarField, strip_gradient

    frame = make_frame([0.1, -0.7, 0.7], seed=3)
    eta = equator_rule(3, 16).nodes
    psi = np.linspace(-1.0, 1.0, len(eta))
    for (l, m) in ((1, 0), (3, 2), (6, -4), (9, 9)):
        y = real_harmonic(l, m)
        a = y.meridian_derivative(frame, eta, psi)
        b = strip_gradient(y).meridian_derivative(frame, eta, psi)
        assert np.max(np.abs(a - b)) < 1e-7, (l, m)


def test_harmonic_sup_bounds_hold():
    grid = probe_directions(3, 6000)
    for (l, m) in ((2, 1), (5, -2), (8, 3), (10, 0)):
        y = real_harmonic(l, m)
        assert float(np.max(np.abs(y.evaluate(grid)))) <= y.sup_bound


def test_real_harmonic_rejects_bad_orders():
    with pytest.raises(ValueError):
        real_harmonic(LMAX + 1, 0)
    with pytest.raises(ValueError):
        real_harmonic(2, 3)


def test_odd_multipliers_match_legendre_closed_form():
    for l in (1, 3, 5, 7, 9):
        lam, residual = estimate_multiplier(l, min(l, 2), num_xi=16, seed=4)
        assert lam == pytest.approx(closed_form_multiplier(l), abs=1e-9), l
        assert residual < 1e-9


def test_even_multipliers_vanish():
    for l in (2, 4, 6):
        lam, residual = estimate_multiplier(l, 1, num_xi=16, seed=4)
        assert abs(lam) < 1e-12
        assert residual < 1e-12


def test_multiplier_table_structure_and_determinism():
    t1 = multiplier_table(5, num_xi=12, seed=8)
    t2 = multiplier_table(5, num_xi=12, seed=8)
    assert t1.degrees == (0, 1, 2, 3, 4, 5)
    assert t1.multipliers == t2.multipliers
    assert len(t1.orders) == sum(2 * l + 1 for l in range(6))
    lam = dict(zip(t1.degrees, t1.multipliers))
    assert lam[1] == pytest.approx(2.0 * math.pi, abs=1e-9)
    assert lam[3] == pytest.approx(-3.0 * math.pi, abs=1e-9)
    assert lam[5] == pytest.approx(15.0 * math.pi / 4.0, abs=1e-9)


def test_harmonic_field_combination():
    coeffs = {(1, 0): 0.5, (3, 2): -0.25}
    g = harmonic_field(coeffs)
    grid = probe_directions(3, 500)
    want = (0.5 * real_harmonic(1, 0).evaluate(grid)
            - 0.25 * real_harmonic(3, 2).evaluate(grid))
    assert np.max(np.abs(g.evaluate(grid) - want)) < 1e-13
    assert g.sup_bound > 0
    with pytest.raises(ValueError):
        harmonic_field({})
    with pytest.raises(ValueError):
        harmonic_field({(1, 0): 0.0})


def test_fourier_field_and_closed_form_transform():
    # oracle: A(theta0) = f'(theta0 - pi/2) - f'(theta0 + pi/2), done
    # coefficient-wise; the two-point quadrature must reproduce it
    rng = np.random.default_rng(12)
    rule = equator_rule(2)
    for _ in range(50):
        a0 = float(rng.uniform(-1, 1))
        a = tuple(rng.uniform(-0.5, 0.5, size=4))
        b = tuple(rng.uniform(-0.5, 0.5, size=4))
        theta0 = float(rng.uniform(0, 2 * math.pi))
        f = fourier_field(a0, a, b)
        frame = make_frame([math.cos(theta0), math.sin(theta0)], seed=101)
        got = equator_transform(f, frame, rule)
        want = fourier_check_n2(a0, a, b, theta0)
        assert got == pytest.approx(want, abs=1e-11)


def test_fourier_frequency_multipliers():
    # diagonal action on the circle: lambda_k = 2 k sin(k pi / 2)
    rule = equator_rule(2)
    rng = np.random.default_rng(5)
    for k in (1, 2, 3, 4, 5):
        coeffs = tuple(1.0 if j == k - 1 else 0.0 for j in range(k))
        f = fourier_field(0.0, coeffs, ())
        want_lam = 2.0 * k * math.sin(k * math.pi / 2.0)
        for theta0 in rng.uniform(0, 2 * math.pi, size=6):
            frame = make_frame([math.cos(theta0), math.sin(theta0)], seed=101)
            got = equator_transform(f, frame, rule)
            assert got == pytest.approx(want_lam * math.cos(k * theta0), abs=1e-11)


def test_injectivity_probe_recovers_odd_fields():
    err = injectivity_probe({(1, 0): 0.5, (3, 2): 0.25}, num_xi=12,
                            projection_resolution=48, seed=11)
    assert err < 1e-8


def test_injectivity_probe_rejects_even_content():
    with pytest.raises(ValueError):
        injectivity_probe({(2, 1): 0.5})
