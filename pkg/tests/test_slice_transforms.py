"""Section curves, the equatorial transform, and their slope agreement."""

import math

import numpy as np
import pytest

from starsym import (
    FdOptions,
    RadialField,
    ScalarField,
    SectionCurve,
    body_ball,
    body_ellipsoid,
    body_shifted_ball,
    conical_section,
    derivative_at_zero,
    equator_rule,
    equator_transform,
    harmonic_field,
    hyperplane_section,
    make_frame,
    richardson_limit,
    section_curve,
    slice_integral,
    to_scalar_field,
    vol_sphere,
)


def _rule(n):
    return equator_rule(n, 48 if n > 2 else None)


def test_richardson_limit_recovers_even_power_series():
    target = 0.7
    pairs = [(h, target + 3.0 * h ** 2 - 2.0 * h ** 4)
             for h in (0.1, 0.05, 0.025, 0.0125)]
    limit, diag = richardson_limit(pairs)
    assert limit == pytest.approx(target, abs=1e-13)
    assert diag[0] == pairs[0][1]
    assert len(diag) == 4


def test_richardson_limit_rejects_non_halving_steps():
    with pytest.raises(ValueError):
        richardson_limit([(0.1, 1.0), (0.06, 1.0)])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_conical_section_of_ball_closed_form(n):
    # sections of a ball along a cone: cos^{n-2}(psi) vol(S^{n-2}) R^{n-1}/(n-1)
    radius = 1.3
    body = body_ball(n, radius)
    frame = make_frame(np.eye(n)[0])
    for z in (-0.5, 0.0, 0.35, 0.8):
        psi = math.asin(z)
        want = (math.cos(psi) ** (n - 2) * vol_sphere(n - 2)
                * radius ** (n - 1) / (n - 1))
        got = conical_section(body, frame, z, _rule(n))
        assert got == pytest.approx(want, rel=1e-13), (n, z)


def test_conical_section_unit_ball_spot_values():
    body = body_ball(3, 1.0)
    frame = make_frame([0.0, 0.0, 1.0])
    rule = _rule(3)
    assert conical_section(body, frame, 0.6, rule) == pytest.approx(0.8 * math.pi, rel=1e-13)
    assert conical_section(body, frame, 0.5, rule) == pytest.approx(
        math.pi * math.sqrt(3.0) / 2.0, rel=1e-13)


def test_hyperplane_section_of_ball_closed_form():
    frame = make_frame([0.3, -0.9, 0.1])
    body = body_ball(3, 1.0)
    rule = _rule(3)
    for z in (-0.7, -0.2, 0.0, 0.3, 0.8):
        got = hyperplane_section(body, frame, z, rule)
        assert got == pytest.approx(math.pi * (1.0 - z * z), rel=1e-10), z


def test_hyperplane_section_chord_n2():
    body = body_ball(2, 1.0)
    frame = make_frame([1.0, 0.0])
    got = hyperplane_section(body, frame, 0.3, equator_rule(2))
    assert got == pytest.approx(2.0 * math.sqrt(0.91), rel=1e-10)


@pytest.mark.parametrize("n", [2, 3])
def test_hyperplane_section_of_shifted_ball_closed_form(n):
    # flat cut of a shifted ball: ball of radius sqrt(R^2 - d^2) with
    # d the distance from the center to the cutting plane
    radius = 1.0
    center = (0.2, 0.1, -0.15)[:n]
    body = body_shifted_ball(n, radius, center)
    xi = np.eye(n)[n - 1]
    frame = make_frame(xi)
    rule = _rule(n)
    for z in (-0.4, 0.1, 0.45):
        d = float(np.dot(center, xi)) - z
        rr = radius ** 2 - d ** 2
        want = math.pi * rr if n == 3 else 2.0 * math.sqrt(rr)
        got = hyperplane_section(body, frame, z, rule)
        assert got == pytest.approx(want, rel=1e-9), (n, z)


def test_hyperplane_section_of_ellipsoid_closed_form():
    a, b, c = 1.4, 1.1, 0.9
    body = body_ellipsoid(3, (a, b, c))
    frame = make_frame([0.0, 0.0, 1.0])
    rule = equator_rule(3, 96)
    for z in (0.0, 0.4, -0.6):
        want = math.pi * a * b * (1.0 - (z / c) ** 2)
        got = hyperplane_section(body, frame, z, rule)
        assert got == pytest.approx(want, rel=1e-9), z


def test_conical_and_hyperplane_coincide_at_zero():
    rule = _rule(3)
    frame = make_frame([0.2, 0.5, -0.8])
    for body in (body_shifted_ball(3, 1.0, (0.15, -0.1, 0.05)),
                 body_ellipsoid(3, (1.3, 0.9, 1.1))):
        cs = conical_section(body, frame, 0.0, rule)
        hs = hyperplane_section(body, frame, 0.0, rule)
        assert abs(cs - hs) <= 1e-14 * abs(cs)


def test_slice_integral_rejects_out_of_range_heights():
    f = to_scalar_field(body_ball(3, 1.0))
    frame = make_frame([0.0, 1.0, 0.0])
    for z in (1.0, -1.0, 1.7):
        with pytest.raises(ValueError):
            slice_integral(f, frame, z, _rule(3))


def test_hyperplane_section_rejects_heights_beyond_equator():
    body = body_ball(3, 1.0)
    frame = make_frame([0.0, 0.0, 1.0])
    for z in (1.0, -1.1):
        with pytest.raises(ValueError):
            hyperplane_section(body, frame, z, _rule(3))


def test_rule_frame_dimension_mismatch_rejected():
    body = body_ball(3, 1.0)
    with pytest.raises(ValueError):
        conical_section(body, make_frame([0.0, 0.0, 1.0]), 0.2, equator_rule(2))


def _pinched_body():
    # rho(u) = exp(-1.5 u_z): along the meridian toward e_z the height
    # rho sin(psi) peaks near sin(psi) = 2/3 and comes back down, so
    # cuts just under the peak height cross the boundary twice
    def ev(u):
        return np.exp(-1.5 * np.asarray(u, dtype=float)[..., 2])

    def grad(u):
        u = np.asarray(u, dtype=float)
        g = np.zeros_like(u)
        g[..., 2] = -1.5 * np.exp(-1.5 * u[..., 2])
        return g

    return RadialField(dim=3, evaluate=ev, gradient=grad, lipschitz_bound=6.8,
                       radius_bound=4.5, radius_floor=0.22, label="pinched")


def test_hyperplane_section_detects_multiple_crossings():
    body = _pinched_body()
    frame = make_frame([0.0, 0.0, 1.0])
    rule = _rule(3)
    with pytest.raises(ValueError, match="multiple boundary crossings"):
        hyperplane_section(body, frame, 0.24, rule)
    # below the fold the cut is honest and the area is positive
    assert hyperplane_section(body, frame, 0.1, rule) > 0.0


def test_section_curve_kinds_and_type_checks():
    body = body_shifted_ball(3, 1.0, (0.1, 0.0, 0.0))
    f = to_scalar_field(body)
    frame = make_frame([1.0, 0.0, 0.0])
    rule = _rule(3)
    zs = np.linspace(-0.5, 0.5, 11)
    for kind, obj in (("slice", f), ("conical", body), ("hyperplane", body)):
        curve = section_curve(kind, obj, frame, zs, rule)
        assert curve.kind == kind
        assert curve.values.shape == zs.shape
        assert np.all(np.isfinite(curve.values))
    with pytest.raises(TypeError):
        section_curve("slice", body, frame, zs, rule)
    with pytest.raises(TypeError):
        section_curve("conical", f, frame, zs, rule)
    with pytest.raises(ValueError):
        section_curve("wedge", body, frame, zs, rule)


def test_section_curve_validation():
    xi = np.array([0.0, 0.0, 1.0])
    zs = np.array([-0.2, 0.0, 0.2])
    vals = np.array([1.0, 2.0, 1.5])
    SectionCurve("conical", xi, zs, vals)
    # slice curves may go negative, section measures may not
    SectionCurve("slice", xi, zs, np.array([-1.0, 0.5, -0.2]))
    with pytest.raises(ValueError):
        SectionCurve("conical", xi, zs[::-1].copy(), vals)
    with pytest.raises(ValueError):
        SectionCurve("conical", xi, zs, vals[:2])
    with pytest.raises(ValueError):
        SectionCurve("conical", xi, zs, np.array([1.0, -2.0, 1.5]))
    with pytest.raises(ValueError):
        SectionCurve("hyperplane", xi, zs, np.array([1.0, np.nan, 1.5]))


def test_fd_options_validation():
    with pytest.raises(ValueError):
        FdOptions(h0=0.6)
    with pytest.raises(ValueError):
        FdOptions(levels=0)


@pytest.mark.parametrize("n,kind", [(2, "conical"), (2, "hyperplane"),
                                    (3, "conical"), (3, "hyperplane"),
                                    (4, "conical")])
def test_curve_slope_matches_transform(n, kind):
    # the curve is differentiated and the transform evaluated with the
    # same rule, so agreement is limited only by the difference ladder
    body = body_shifted_ball(n, 1.0, (0.18, -0.1) + (0.05,) * (n - 2))
    frame = make_frame(np.arange(1, n + 1, dtype=float))
    res = derivative_at_zero(kind, body, frame, _rule(n))
    assert res.agreement_residual <= 1e-8, (n, kind, res.agreement_residual)
    # the monotone flag is a diagnostic, not a guarantee: when the curve
    # is nearly linear in z the ladder corrections sit at roundoff and
    # jitter, so it is only asserted where the ladder carries signal
    assert len(res.fd_steps) == 4
    assert res.fd_steps[0][0] == pytest.approx(1e-2)


def test_slice_curve_slope_matches_transform():
    f = harmonic_field({(3, 1): 0.5, (2, 2): 0.3, (1, -1): 0.2})
    frame = make_frame([0.4, -0.5, 0.8])
    res = derivative_at_zero("slice", f, frame, _rule(3))
    assert res.agreement_residual <= 1e-9
    assert res.fd_value == pytest.approx(res.transform_value, abs=1e-9)


def test_transform_rule_override_exposes_coarse_quadrature():
    # a strongly shifted ball keeps slowly decaying even content on the
    # equator; an 8-node rule cannot integrate it silently
    body = body_shifted_ball(3, 1.0, (0.6, 0.0, 0.0))
    frame = make_frame([0.55, 0.3, 0.78])
    fine = equator_rule(3, 192)
    matched = derivative_at_zero("conical", body, frame, fine)
    coarse = derivative_at_zero("conical", body, frame, fine,
                                transform_rule=equator_rule(3, 8))
    assert matched.agreement_residual <= 1e-9
    assert coarse.agreement_residual >= 1e-7


def test_equator_transform_fd_fallback_matches_analytic():
    g = harmonic_field({(3, 0): 0.4, (5, -2): 0.2})
    bare = ScalarField(dim=3, evaluate=g.evaluate)
    frame = make_frame([0.1, 0.9, -0.4])
    rule = _rule(3)
    a = equator_transform(g, frame, rule)
    b = equator_transform(bare, frame, rule)
    assert abs(a - b) <= 1e-9
