"""Real spherical harmonics, transform multipliers, and kernel probes.

The n=3 harmonics are built as explicit homogeneous polynomials in
(x, y, z): degree-l coefficient tables are assembled from Legendre
derivative coefficients, so values and Euclidean gradients are exact to
roundoff and free of pole singularities.  Normalization is L2:
integral of Y^2 over S^2 equals 1, and Y(l=1, m=0) = sqrt(3/(4 pi)) x3.

The equatorial derivative transform acts diagonally on this basis with
a degree-dependent multiplier that vanishes for even degrees.  The
multipliers reported here are estimated numerically by least squares
against the transform, not hard-coded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .sphere_geom import (
    fibonacci_sphere,
    make_frame,
    probe_directions,
    random_directions,
    sphere_rule,
    equator_rule,
)
from .star_body import ScalarField
from .slice_transforms import equator_transform

LMAX = 10

# Covering radius of the 8192-point Fibonacci probe grid; verified by test.
_PROBE_N = 8192
_PROBE_COVER = 0.045


def _legendre_coeffs(degree):
    # ascending monomial coefficients of the Legendre polynomial
    basis = np.polynomial.legendre.Legendre.basis(degree)
    return basis.convert(kind=np.polynomial.Polynomial).coef


def _solid_harmonic_terms(degree, order):
    """Monomial table (exps, coefs) of the real solid harmonic r^l Y_{l,m}."""
    l, m = int(degree), int(order)
    am = abs(m)
    if not (0 <= am <= l <= LMAX):
        raise ValueError(f"need 0 <= |order| <= degree <= {LMAX}")
    # associated part: m-th derivative of the Legendre polynomial
    der = np.polynomial.polynomial.polyder(_legendre_coeffs(l), am) if am else _legendre_coeffs(l)
    # azimuthal part: Re or Im of (x + i y)^|m|
    trig = {}  # (a, b) -> coefficient of x^a y^b
    if m == 0:
        trig[(0, 0)] = 1.0
    elif m > 0:
        for j in range(0, am + 1, 2):
            trig[(am - j, j)] = math.comb(am, j) * (-1.0) ** (j // 2)
    else:
        for j in range(1, am + 1, 2):
            trig[(am - j, j)] = math.comb(am, j) * (-1.0) ** ((j - 1) // 2)
    norm = math.sqrt((2 * l + 1) / (4.0 * math.pi)
                     * math.factorial(l - am) / math.factorial(l + am))
    if m != 0:
        norm *= math.sqrt(2.0)
    terms = {}
    for k, ck in enumerate(der):
        if ck == 0.0:
            continue
        q2 = l - am - k  # power budget for r^2 factors; parity makes it even
        if q2 < 0 or q2 % 2:
            continue
        q = q2 // 2
        # (x^2 + y^2 + z^2)^q multinomial expansion
        for i in range(q + 1):
            for j in range(q - i + 1):
                kk = q - i - j
                mult = math.factorial(q) // (
                    math.factorial(i) * math.factorial(j) * math.factorial(kk))
                for (a, b), ct in trig.items():
                    key = (a + 2 * i, b + 2 * j, k + 2 * kk)
                    terms[key] = terms.get(key, 0.0) + norm * ck * ct * mult
    keys = sorted(k for k, v in terms.items() if v != 0.0)
    exps = np.array(keys, dtype=np.int64).reshape(-1, 3)
    coefs = np.array([terms[k] for k in keys])
    return exps, coefs


def _power_tables(flat, max_deg):
    tab = np.empty((3, flat.shape[0], max_deg + 1))
    tab[:, :, 0] = 1.0
    for p in range(1, max_deg + 1):
        tab[:, :, p] = tab[:, :, p - 1] * flat.T
    return tab


def _poly_value(exps, coefs, pts):
    pts = np.asarray(pts, dtype=float)
    flat = pts.reshape(-1, 3)
    tab = _power_tables(flat, int(exps.max()) if len(exps) else 0)
    monos = tab[0][:, exps[:, 0]] * tab[1][:, exps[:, 1]] * tab[2][:, exps[:, 2]]
    return (monos @ coefs).reshape(pts.shape[:-1])


def _poly_gradient(exps, coefs, pts):
    pts = np.asarray(pts, dtype=float)
    flat = pts.reshape(-1, 3)
    tab = _power_tables(flat, int(exps.max()) if len(exps) else 0)
    out = np.empty((flat.shape[0], 3))
    for axis in range(3):
        e = exps.copy()
        c = coefs * e[:, axis]
        e[:, axis] = np.maximum(e[:, axis] - 1, 0)
        monos = tab[0][:, e[:, 0]] * tab[1][:, e[:, 1]] * tab[2][:, e[:, 2]]
        out[:, axis] = monos @ c
    return out.reshape(pts.shape)


@lru_cache(maxsize=256)
def real_harmonic(degree, order):
    """Real spherical harmonic Y_{l,m} on S^2 as a ScalarField.

    Parameters
    ----------
    degree : l, 0 <= l <= 10
    order : m, -l <= m <= l; positive orders are cosine-type, negative
        sine-type, in azimuth.

    Returns
    -------
    ScalarField with exact polynomial gradient.  The declared sup bound
    is the probe-grid maximum inflated by the covering correction
    1 / (1 - l * r_cov), using the great-circle derivative bound
    |dY/ds| <= l sup|Y|; the Lipschitz bound is l times the sup bound.
    """
    exps, coefs = _solid_harmonic_terms(degree, order)
    l = int(degree)

    def evaluate(u):
        return _poly_value(exps, coefs, u)

    def gradient(u):
        return _poly_gradient(exps, coefs, u)

    probe_max = float(np.max(np.abs(evaluate(fibonacci_sphere(_PROBE_N)))))
    if l == 0:
        sup = probe_max
    else:
        sup = probe_max / (1.0 - l * _PROBE_COVER)
    return ScalarField(dim=3, evaluate=evaluate, gradient=gradient,
                       lipschitz_bound=l * sup, sup_bound=sup,
                       label=f"Y({l},{int(order)})")


def harmonic_field(coefficients):
    """Linear combination of real harmonics: {(l, m): coefficient}."""
    items = sorted((int(l), int(m), float(c))
                   for (l, m), c in dict(coefficients).items() if c != 0.0)
    if not items:
        raise ValueError("need at least one nonzero coefficient")
    parts = [(real_harmonic(l, m), c) for l, m, c in items]

    def evaluate(u):
        return sum(c * y.evaluate(u) for y, c in parts)

    def gradient(u):
        return sum(c * y.gradient(u) for y, c in parts)

    sup = sum(abs(c) * y.sup_bound for y, c in parts)
    lip = sum(abs(c) * y.lipschitz_bound for y, c in parts)
    label = "+".join(f"{c:g}*{y.label}" for y, c in parts)
    return ScalarField(dim=3, evaluate=evaluate, gradient=gradient,
                       lipschitz_bound=lip, sup_bound=sup, label=label)


@dataclass(frozen=True, eq=False)
class MultiplierTable:
    """Estimated diagonal action of the equatorial transform on harmonics.

    `multipliers[i]` is the least-squares coefficient lambda for
    `degrees[i]` fitted jointly over all orders; `residuals[i]` is the
    worst absolute deviation |T Y - lambda Y| observed in the fit.
    `orders` holds the per-(l, m) fits as (l, m, lambda, residual).
    """

    dim: int
    degrees: tuple
    multipliers: tuple
    residuals: tuple
    orders: tuple
    num_xi: int
    resolution: int
    seed: int


def _transform_samples(field, xis, resolution, frame_seed=101):
    rule = equator_rule(3, resolution)
    out = np.empty(len(xis))
    for i, xi in enumerate(xis):
        frame = make_frame(xi, seed=frame_seed)
        out[i] = equator_transform(field, frame, rule)
    return out


def estimate_multiplier(degree, order, num_xi=50, resolution=None, seed=11):
    """Least-squares multiplier of the transform on one harmonic.

    Returns (lambda, residual): the slope of T Y against Y over random
    poles, and the worst absolute deviation from that diagonal action.
    """
    y = real_harmonic(degree, order)
    if resolution is None:
        resolution = 512
    xis = random_directions(3, num_xi, seed=seed)
    t = _transform_samples(y, xis, resolution)
    vals = y.evaluate(xis)
    denom = float(vals @ vals)
    if denom < 1e-12:
        raise ValueError("degenerate pole sample: harmonic vanishes on all poles")
    lam = float(t @ vals) / denom
    residual = float(np.max(np.abs(t - lam * vals)))
    return lam, residual


def multiplier_table(lmax, num_xi=50, resolution=None, seed=11):
    """Estimate multipliers for all degrees 0..lmax and all orders."""
    lmax = int(lmax)
    if not (0 <= lmax <= LMAX):
        raise ValueError(f"lmax must lie in [0, {LMAX}]")
    if resolution is None:
        resolution = 512
    xis = random_directions(3, num_xi, seed=seed)
    degrees, lams, residuals, orders = [], [], [], []
    for l in range(lmax + 1):
        ts, vs = [], []
        for m in range(-l, l + 1):
            y = real_harmonic(l, m)
            t = _transform_samples(y, xis, resolution)
            v = y.evaluate(xis)
            lam_m = float(t @ v) / float(v @ v)
            orders.append((l, m, lam_m, float(np.max(np.abs(t - lam_m * v)))))
            ts.append(t)
            vs.append(v)
        ts = np.concatenate(ts)
        vs = np.concatenate(vs)
        lam = float(ts @ vs) / float(vs @ vs)
        degrees.append(l)
        lams.append(lam)
        residuals.append(float(np.max(np.abs(ts - lam * vs))))
    return MultiplierTable(dim=3, degrees=tuple(degrees), multipliers=tuple(lams),
                           residuals=tuple(residuals), orders=tuple(orders),
                           num_xi=int(num_xi), resolution=int(resolution),
                           seed=int(seed))


# ---------------------------------------------------------------------------
# n = 2: Fourier fields and the exact two-point transform


def fourier_field(a0, cos_coeffs=(), sin_coeffs=()):
    """Band-limited field on the circle from Fourier coefficients.

    f(theta) = a0 + sum_k cos_coeffs[k-1] cos(k theta)
                  + sum_k sin_coeffs[k-1] sin(k theta).
    """
    a = np.asarray(cos_coeffs, dtype=float)
    b = np.asarray(sin_coeffs, dtype=float)
    kmax = max(len(a), len(b))
    aa = np.zeros(kmax)
    bb = np.zeros(kmax)
    aa[:len(a)] = a
    bb[:len(b)] = b
    ks = np.arange(1, kmax + 1)
    a0 = float(a0)

    def evaluate(u):
        u = np.asarray(u, dtype=float)
        theta = np.arctan2(u[..., 1], u[..., 0])
        kt = theta[..., None] * ks
        return a0 + np.cos(kt) @ aa + np.sin(kt) @ bb

    def angular_derivative(theta):
        kt = np.asarray(theta, dtype=float)[..., None] * ks
        return -np.sin(kt) @ (ks * aa) + np.cos(kt) @ (ks * bb)

    def gradient(u):
        u = np.asarray(u, dtype=float)
        theta = np.arctan2(u[..., 1], u[..., 0])
        fp = angular_derivative(theta)
        perp = np.stack([-u[..., 1], u[..., 0]], axis=-1)
        return fp[..., None] * perp

    sup = abs(a0) + float(np.sum(np.abs(aa)) + np.sum(np.abs(bb)))
    lip = float(ks @ np.abs(aa) + ks @ np.abs(bb))
    return ScalarField(dim=2, evaluate=evaluate, gradient=gradient,
                       lipschitz_bound=lip, sup_bound=sup,
                       label=f"fourier(kmax={kmax})")


def fourier_check_n2(a0, cos_coeffs, sin_coeffs, theta0):
    """Closed form of the n=2 transform: f'(theta0 - pi/2) - f'(theta0 + pi/2).

    Independent of the quadrature path: differentiates the Fourier
    series coefficient-wise and evaluates at the two equator angles.
    """
    a = np.asarray(cos_coeffs, dtype=float)
    b = np.asarray(sin_coeffs, dtype=float)
    kmax = max(len(a), len(b))
    aa = np.zeros(kmax)
    bb = np.zeros(kmax)
    aa[:len(a)] = a
    bb[:len(b)] = b
    ks = np.arange(1, kmax + 1)

    def deriv(theta):
        return float(-np.sin(ks * theta) @ (ks * aa) + np.cos(ks * theta) @ (ks * bb))

    del a0  # constant part never contributes
    return deriv(theta0 - math.pi / 2) - deriv(theta0 + math.pi / 2)


# ---------------------------------------------------------------------------
# kernel structure probe


def injectivity_probe(coefficients, num_xi=50, resolution=None,
                      projection_resolution=64, seed=11, table=None):
    """Round-trip reconstruction error for an odd band-limited field.

    Expands the transform of g over poles into harmonics, divides by the
    estimated degree multipliers, reconstructs, and returns the sup-norm
    error against the original field on a probe grid.  Raises if any
    needed multiplier is within 1e-6 of zero (a near-kernel degree would
    make the inversion meaningless).
    """
    coeffs = {(int(l), int(m)): float(c) for (l, m), c in dict(coefficients).items()}
    if not coeffs:
        raise ValueError("need at least one coefficient")
    lmax = max(l for l, _ in coeffs)
    for (l, m) in coeffs:
        if l % 2 == 0:
            raise ValueError("injectivity probe expects odd-degree content only")
        if not (abs(m) <= l <= LMAX):
            raise ValueError("invalid (degree, order) pair")
    if resolution is None:
        resolution = 512
    g = harmonic_field(coeffs)
    if table is None:
        table = multiplier_table(lmax, num_xi=num_xi, resolution=resolution, seed=seed)
    lam = dict(zip(table.degrees, table.multipliers))
    for l in range(1, lmax + 1, 2):
        if abs(lam.get(l, 0.0)) < 1e-6:
            raise ValueError(f"near-kernel degree {l}: estimated multiplier below 1e-6")
    proj = sphere_rule(3, projection_resolution)
    t_vals = np.empty(proj.size)
    rule = equator_rule(3, resolution)
    for i, xi in enumerate(proj.nodes):
        t_vals[i] = equator_transform(g, make_frame(xi, seed=101), rule)
    recovered = {}
    for l in range(1, lmax + 1, 2):
        for m in range(-l, l + 1):
            y = real_harmonic(l, m)
            coef = float(proj.weights @ (t_vals * y.evaluate(proj.nodes)))
            recovered[(l, m)] = coef / lam[l]
    grid = probe_directions(3, 4000)
    rec_vals = np.zeros(grid.shape[0])
    for (l, m), c in recovered.items():
        if c != 0.0:
            rec_vals += c * real_harmonic(l, m).evaluate(grid)
    return float(np.max(np.abs(g.evaluate(grid) - rec_vals)))
