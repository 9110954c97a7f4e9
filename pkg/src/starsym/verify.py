"""Named machine checks for the identities behind the transform.

Every step of the derivation chain gets a check: the latitude-sphere
set identity, the difference-quotient decomposition of section curves,
the z = 0 coincidence of conical and hyperplane sections, agreement of
curve slopes with the transform, the majorant and tail bounds used to
justify the limit, structural properties of A (oddness in xi,
linearity, rotation and scaling equivariance, annihilation of even
fields), the spherical-harmonic multipliers, the exact two-point
formula on the circle, Monte Carlo cross-checks, and a detector round
trip.

The slope checks differentiate curves sampled at a fixed reference
resolution and compare against the transform at the configured
resolution, so running with a deliberately coarse resolution surfaces
real quadrature error instead of letting the two sides alias together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .sphere_geom import (
    check_dim,
    default_resolution,
    embed,
    equator_rule,
    make_frame,
    random_directions,
    random_rotation,
    vol_sphere,
)
from .star_body import (
    ScalarField,
    body_ball,
    body_ellipsoid,
    body_harmonic_perturbed_ball,
    body_shifted_ball,
    linear_field,
    odd_part,
    rotate_body,
    scale_body,
    to_scalar_field,
)
from .slice_transforms import (
    conical_section,
    derivative_at_zero,
    equator_transform,
    hyperplane_section,
    slice_integral,
)
from .harmonics import (
    fourier_check_n2,
    fourier_field,
    harmonic_field,
    multiplier_table,
    real_harmonic,
)
from .symmetry_detector import detect
from . import oracle

_FRAME_SEED = 101


@dataclass(frozen=True)
class VerifyConfig:
    """Knobs shared by all checks.

    resolution None means the per-dimension default; the reference
    resolution anchors the finite-difference side of the slope checks.
    """

    resolution: Optional[int] = None
    seed: int = 7
    num_xi: int = 4
    mc_samples: int = 300_000
    reference_resolution: int = 512

    def __post_init__(self):
        if self.resolution is not None and self.resolution < 2:
            raise ValueError("resolution must be at least 2")
        if self.num_xi < 1:
            raise ValueError("num_xi must be positive")
        if self.mc_samples < 1000:
            raise ValueError("mc_samples must be at least 1000")

    def resolved(self, n):
        return self.resolution or default_resolution(n)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""


@lru_cache(maxsize=None)
def _bodies(n):
    n = check_dim(n)
    if n == 2:
        return (body_ball(2, 1.0),
                body_shifted_ball(2, 1.0, (0.3, 0.2)),
                body_ellipsoid(2, (1.4, 0.8)))
    bodies = [body_ball(n, 1.0),
              body_shifted_ball(n, 1.0, (0.12, -0.07) + (0.05,) * (n - 2)),
              # the large shift keeps slowly decaying even content on the
              # equator, which coarse rules cannot integrate silently
              body_shifted_ball(n, 1.0, (0.6,) + (0.0,) * (n - 1)),
              body_ellipsoid(n, tuple(np.linspace(1.5, 0.7, n)))]
    if n == 3:
        bodies.append(body_harmonic_perturbed_ball(0.08, 3, 1))
    return tuple(bodies)


def _poles(n, cfg, extra=0):
    return random_directions(n, cfg.num_xi, seed=cfg.seed + extra)


def _lin_comb(alpha, f, beta, g):
    def evaluate(u):
        return alpha * f.evaluate(u) + beta * g.evaluate(u)

    gradient = None
    if f.gradient is not None and g.gradient is not None:
        def gradient(u):
            return alpha * f.gradient(u) + beta * g.gradient(u)
    return ScalarField(dim=f.dim, evaluate=evaluate, gradient=gradient,
                       label="combo")


@lru_cache(maxsize=16)
def _table(lmax, num_xi, resolution, seed):
    return multiplier_table(lmax, num_xi=num_xi, resolution=resolution, seed=seed)


# ---------------------------------------------------------------------------
# individual checks; each returns CheckResult


def _check_rule_mass(cfg):
    worst = 0.0
    for n in (2, 3, 4, 5):
        rule = equator_rule(n, cfg.resolved(n))
        worst = max(worst, abs(float(np.sum(rule.weights)) - vol_sphere(n - 2)))
    return CheckResult("rule_mass", worst <= 1e-10, worst, 1e-10,
                       "quadrature weights sum to the equator sphere measure")


def _check_set_identity(cfg):
    worst = 0.0
    for n in (2, 3, 4):
        rule = equator_rule(n, min(cfg.resolved(n), 64))
        frame = make_frame(_poles(n, cfg)[0], seed=_FRAME_SEED)
        for z in (-0.9, -0.3, 0.0, 0.45, 0.95):
            psi = math.asin(z)
            u = embed(frame, rule.nodes, psi)
            worst = max(worst, float(np.max(np.abs(np.linalg.norm(u, axis=-1) - 1.0))))
            worst = max(worst, float(np.max(np.abs(u @ frame.pole - z))))
    return CheckResult("set_identity", worst <= 1e-12, worst, 1e-12,
                       "latitude points lie on the sphere and on the plane <u,xi> = z")


def _check_slope_decomposition(cfg):
    worst = 0.0
    for n in (2, 3):
        rule = equator_rule(n, cfg.resolved(n))
        for body in (_bodies(n)[1], _bodies(n)[-1]):
            f = to_scalar_field(body)
            frame = make_frame(_poles(n, cfg)[0], seed=_FRAME_SEED)
            f0 = f.evaluate(embed(frame, rule.nodes, 0.0))
            for z in (-0.45, 0.08, 0.3):
                psi = math.asin(z)
                fp = f.evaluate(embed(frame, rule.nodes, psi))
                lhs = (slice_integral(f, frame, z, rule)
                       - slice_integral(f, frame, 0.0, rule)) / z
                t1 = float(rule.weights @ (fp - f0)) / z
                t2 = (math.cos(psi) ** (n - 2) - 1.0) / z * float(rule.weights @ fp)
                worst = max(worst, abs(lhs - t1 - t2) / max(1.0, abs(lhs)))
    return CheckResult("slope_decomposition", worst <= 1e-10, worst, 1e-10,
                       "difference quotient splits into variation and tail terms")


def _check_z0_coincidence(cfg):
    worst = 0.0
    for n in (2, 3):
        rule = equator_rule(n, cfg.resolved(n))
        for body in _bodies(n):
            for xi in _poles(n, cfg):
                frame = make_frame(xi, seed=_FRAME_SEED)
                c = conical_section(body, frame, 0.0, rule)
                h = hyperplane_section(body, frame, 0.0, rule)
                worst = max(worst, abs(c - h) / max(1.0, abs(c)))
    return CheckResult("z0_coincidence", worst <= 1e-10, worst, 1e-10,
                       "conical and hyperplane sections agree through the origin")


def _check_slope_agreement(cfg):
    worst = 0.0
    detail = ""
    for n in (2, 3):
        ref = equator_rule(n, cfg.reference_resolution if n >= 3 else None)
        cur = equator_rule(n, cfg.resolved(n))
        for body in _bodies(n):
            for xi in _poles(n, cfg):
                frame = make_frame(xi, seed=_FRAME_SEED)
                d = derivative_at_zero("conical", body, frame, ref,
                                       transform_rule=cur)
                if d.agreement_residual > worst:
                    worst = d.agreement_residual
                    detail = f"conical {body.label} n={n}"
        for body in (_bodies(n)[1], _bodies(n)[2]):
            for xi in _poles(n, cfg)[:2]:
                frame = make_frame(xi, seed=_FRAME_SEED)
                d = derivative_at_zero("hyperplane", body, frame, ref,
                                       transform_rule=cur)
                if d.agreement_residual > worst:
                    worst = d.agreement_residual
                    detail = f"hyperplane {body.label} n={n}"
    fields = [harmonic_field({(3, 1): 0.5, (1, -1): 0.2, (2, 2): 0.4}),
              linear_field(3, (0.0, 0.0, 1.0))]
    ref = equator_rule(3, cfg.reference_resolution)
    cur = equator_rule(3, cfg.resolved(3))
    for f in fields:
        frame = make_frame(_poles(3, cfg)[0], seed=_FRAME_SEED)
        d = derivative_at_zero("slice", f, frame, ref, transform_rule=cur)
        if d.agreement_residual > worst:
            worst = d.agreement_residual
            detail = f"slice {f.label}"
    return CheckResult("slope_agreement", worst <= 1e-6, worst, 1e-6,
                       f"curve slopes at z=0 match the transform ({detail})" if detail
                       else "curve slopes at z=0 match the transform")


def _psi_probe_grid():
    mags = np.geomspace(1e-3, 1.0, 12)
    return np.concatenate([-mags[::-1], mags])


def _majorant_fields(cfg):
    fields = []
    for n in (2, 3):
        for body in _bodies(n):
            fields.append(to_scalar_field(body))
    fields.append(harmonic_field({(3, 1): 0.3, (4, 0): 0.2}))
    fields.append(fourier_field(0.5, (0.3, 0.1), (0.0, 0.2)))
    return fields


def _check_majorant(cfg):
    worst = -math.inf
    psis = _psi_probe_grid()
    for f in _majorant_fields(cfg):
        c = f.lipschitz_bound * math.pi / 2.0
        nodes = equator_rule(f.dim, 16 if f.dim > 2 else None).nodes
        for k in range(4):
            frame = make_frame(random_directions(f.dim, 1, seed=cfg.seed + k)[0],
                               seed=_FRAME_SEED)
            f0 = f.evaluate(frame.embed(nodes, np.zeros(len(nodes))))
            for psi in psis:
                fp = f.evaluate(frame.embed(nodes, np.full(len(nodes), psi)))
                quot = np.abs(fp - f0) / abs(math.sin(psi))
                worst = max(worst, float(np.max(quot)) - c)
    return CheckResult("majorant", worst <= 1e-12, worst, 1e-12,
                       "sinpsi-normalized increments stay below the Lipschitz majorant")


def _check_tail_term(cfg):
    worst = 0.0
    psis = _psi_probe_grid()
    for n in (2, 3, 4):
        rule = equator_rule(n, min(cfg.resolved(n), 64))
        body = _bodies(n)[1]
        f = to_scalar_field(body)
        cbound = vol_sphere(n - 2) * f.sup_bound * (n - 2) * math.pi / 4.0
        frame = make_frame(_poles(n, cfg)[0], seed=_FRAME_SEED)
        for psi in psis:
            fp = f.evaluate(embed(frame, rule.nodes, psi))
            actual = abs((math.cos(psi) ** (n - 2) - 1.0) / math.sin(psi)
                         * float(rule.weights @ fp))
            if cbound == 0.0:
                worst = max(worst, actual)
            else:
                worst = max(worst, actual / (cbound * abs(psi)) - 1.0)
    return CheckResult("tail_term", worst <= 1e-12, worst, 1e-12,
                       "the cos-power tail term obeys its linear-in-psi bound")


def _check_xi_oddness(cfg):
    worst = 0.0
    for n in (2, 3):
        rule = equator_rule(n, cfg.resolved(n))
        f = to_scalar_field(_bodies(n)[1])
        for xi in _poles(n, cfg):
            a = equator_transform(f, make_frame(xi, seed=_FRAME_SEED), rule)
            b = equator_transform(f, make_frame(-xi, seed=_FRAME_SEED), rule)
            worst = max(worst, abs(a + b))
    return CheckResult("xi_oddness", worst <= 1e-8, worst, 1e-8,
                       "A(-xi) = -A(xi)")


def _check_odd_part(cfg):
    worst = 0.0
    for n in (2, 3):
        rule = equator_rule(n, cfg.resolved(n))
        f = to_scalar_field(_bodies(n)[1])
        g = odd_part(f)
        for xi in _poles(n, cfg):
            frame = make_frame(xi, seed=_FRAME_SEED)
            worst = max(worst, abs(equator_transform(f, frame, rule)
                                   - equator_transform(g, frame, rule)))
    return CheckResult("odd_part", worst <= 1e-8, worst, 1e-8,
                       "the transform only sees the odd part of the field")


def _check_linearity(cfg):
    rule = equator_rule(3, cfg.resolved(3))
    f = to_scalar_field(_bodies(3)[1])
    g = harmonic_field({(1, 0): 0.4, (3, -2): 0.3})
    combo = _lin_comb(0.7, f, -1.3, g)
    worst = 0.0
    for xi in _poles(3, cfg):
        frame = make_frame(xi, seed=_FRAME_SEED)
        lhs = equator_transform(combo, frame, rule)
        rhs = (0.7 * equator_transform(f, frame, rule)
               - 1.3 * equator_transform(g, frame, rule))
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    return CheckResult("linearity", worst <= 1e-10, worst, 1e-10,
                       "A is linear in the field")


def _check_rotation(cfg):
    worst = 0.0
    for n in (2, 3):
        rule = equator_rule(n, cfg.resolved(n))
        body = _bodies(n)[1]
        rot = random_rotation(n, seed=cfg.seed)
        rbody = rotate_body(body, rot)
        f = to_scalar_field(body)
        rf = to_scalar_field(rbody)
        for xi in _poles(n, cfg):
            a = equator_transform(f, make_frame(xi, seed=_FRAME_SEED), rule)
            b = equator_transform(rf, make_frame(rot @ xi, seed=_FRAME_SEED), rule)
            worst = max(worst, abs(a - b))
    return CheckResult("rotation", worst <= 1e-8, worst, 1e-8,
                       "A(R K, R xi) = A(K, xi)")


def _check_scaling(cfg):
    worst = 0.0
    lam = 1.7
    for n in (2, 3):
        rule = equator_rule(n, cfg.resolved(n))
        body = _bodies(n)[1]
        f = to_scalar_field(body)
        g = to_scalar_field(scale_body(body, lam))
        for xi in _poles(n, cfg):
            frame = make_frame(xi, seed=_FRAME_SEED)
            a = lam ** (n - 1) * equator_transform(f, frame, rule)
            b = equator_transform(g, frame, rule)
            worst = max(worst, abs(a - b) / max(abs(a), 1e-12))
    return CheckResult("scaling", worst <= 1e-8, worst, 1e-8,
                       "scaling the body by t scales A by t^(n-1)")


def _check_even_annihilation(cfg):
    worst = 0.0
    rule = equator_rule(3, cfg.resolved(3))
    for (l, m) in ((0, 0), (2, 1), (4, -2), (6, 3)):
        y = real_harmonic(l, m)
        for xi in _poles(3, cfg):
            worst = max(worst, abs(equator_transform(y, make_frame(xi, seed=_FRAME_SEED), rule)))
    rule2 = equator_rule(2, cfg.resolved(2))
    # even-frequency terms only, so the field is antipodally even
    even2 = fourier_field(0.3, (0.0, 0.5, 0.0, 0.2), (0.0, 0.1))
    for xi in _poles(2, cfg):
        worst = max(worst, abs(equator_transform(even2,
                                                 make_frame(xi, seed=_FRAME_SEED), rule2)))
    return CheckResult("even_annihilation", worst <= 1e-8, worst, 1e-8,
                       "even fields are sent to zero")


def _check_odd_multipliers(cfg):
    t = _table(7, 16, cfg.resolved(3), cfg.seed)
    worst = max(r for l, r in zip(t.degrees, t.residuals) if l % 2 == 1)
    return CheckResult("odd_multipliers", worst <= 1e-7, worst, 1e-7,
                       "odd harmonics are eigenfunctions up to degree 7")


def _check_lambda1(cfg):
    t = _table(7, 16, cfg.resolved(3), cfg.seed)
    lam = dict(zip(t.degrees, t.multipliers))[1]
    err = abs(lam - 2.0 * math.pi)
    return CheckResult("lambda1", err <= 1e-6, err, 1e-6,
                       f"degree-1 multiplier is 2 pi (estimate {lam:.12g})")


def _check_odd_nondegeneracy(cfg):
    t = _table(7, 16, cfg.resolved(3), cfg.seed)
    smallest = min(abs(m) for l, m in zip(t.degrees, t.multipliers) if l % 2 == 1)
    residual = max(0.0, 1e-3 - smallest)
    return CheckResult("odd_nondegeneracy", residual == 0.0, residual, 0.0,
                       f"no odd multiplier below 1e-3 (min {smallest:.6g})")


def _check_n2_oracle(cfg):
    rng = np.random.default_rng(cfg.seed + 5)
    rule = equator_rule(2, cfg.resolved(2))
    worst = 0.0
    for _ in range(40):
        a0 = float(rng.uniform(-1, 1))
        a = tuple(rng.uniform(-0.5, 0.5, size=5))
        b = tuple(rng.uniform(-0.5, 0.5, size=5))
        theta0 = float(rng.uniform(0, 2 * math.pi))
        xi = np.array([math.cos(theta0), math.sin(theta0)])
        f = fourier_field(a0, a, b)
        got = equator_transform(f, make_frame(xi, seed=_FRAME_SEED), rule)
        want = fourier_check_n2(a0, a, b, theta0)
        worst = max(worst, abs(got - want))
    return CheckResult("n2_oracle", worst <= 1e-10, worst, 1e-10,
                       "two-point transform matches the closed Fourier form")


def _check_mc_agreement(cfg):
    worst = -math.inf
    detail = ""
    queries = [(_bodies(3)[1], (0.0, 0.0, 1.0), 0.25),
               (_bodies(3)[3], (0.6, 0.8, 0.0), -0.4)]
    rule = equator_rule(3, cfg.resolved(3))
    for i, (body, xi, z) in enumerate(queries):
        frame = make_frame(np.asarray(xi), seed=_FRAME_SEED)
        hq = hyperplane_section(body, frame, z, rule)
        hm = oracle.mc_hyperplane_section(body, xi, z, delta=0.02,
                                          samples=cfg.mc_samples, seed=cfg.seed + i)
        allow = max(3.0 * hm.std_error, 0.01 * abs(hq))
        excess = abs(hq - hm.value) - allow
        if excess > worst:
            worst, detail = excess, f"hyperplane {body.label} z={z}"
        cq = conical_section(body, frame, z, rule)
        cm = oracle.mc_cone_section(body, xi, z, delta=0.02,
                                    samples=cfg.mc_samples, seed=cfg.seed + 10 + i)
        allow = max(3.0 * cm.std_error, 0.01 * abs(cq))
        excess = abs(cq - cm.value) - allow
        if excess > worst:
            worst, detail = excess, f"cone {body.label} z={z}"
    return CheckResult("mc_agreement", worst <= 0.0, worst, 0.0,
                       f"quadrature sections sit inside Monte Carlo error bars ({detail})")


def _check_detector(cfg):
    wrong = 0
    b2, b3 = _bodies(2), _bodies(3)
    cases = [(b2[0], "symmetric"), (b2[2], "symmetric"), (b2[1], "asymmetric"),
             (b3[0], "symmetric"), (b3[3], "symmetric"),
             (b3[1], "asymmetric"), (b3[2], "asymmetric"),
             (b3[4], "asymmetric"),
             (body_harmonic_perturbed_ball(0.05, 2, 1), "symmetric")]
    notes = []
    for body, want in cases:
        rep = detect(body, num_dirs=32, seed=cfg.seed,
                     rule_resolution=cfg.resolved(body.dim))
        if rep.verdict != want:
            wrong += 1
            notes.append(f"{body.label}: got {rep.verdict}, wanted {want}")
    return CheckResult("detector", wrong == 0, float(wrong), 0.0,
                       "; ".join(notes) if notes
                       else f"all {len(cases)} verdicts correct")


_CHECKS = {
    "rule_mass": _check_rule_mass,
    "set_identity": _check_set_identity,
    "slope_decomposition": _check_slope_decomposition,
    "z0_coincidence": _check_z0_coincidence,
    "slope_agreement": _check_slope_agreement,
    "majorant": _check_majorant,
    "tail_term": _check_tail_term,
    "xi_oddness": _check_xi_oddness,
    "odd_part": _check_odd_part,
    "linearity": _check_linearity,
    "rotation": _check_rotation,
    "scaling": _check_scaling,
    "even_annihilation": _check_even_annihilation,
    "odd_multipliers": _check_odd_multipliers,
    "lambda1": _check_lambda1,
    "odd_nondegeneracy": _check_odd_nondegeneracy,
    "n2_oracle": _check_n2_oracle,
    "mc_agreement": _check_mc_agreement,
    "detector": _check_detector,
}


def check_names():
    return tuple(_CHECKS)


def run_checks(config=None, only=None):
    """Run the registry and return a list of CheckResult.

    only: optional iterable of check names; unknown names raise
    ValueError.
    """
    cfg = config or VerifyConfig()
    if only is None:
        names = list(_CHECKS)
    else:
        names = [str(x) for x in only]
        unknown = [x for x in names if x not in _CHECKS]
        if unknown:
            raise ValueError(f"unknown check name(s): {', '.join(unknown)}; "
                             f"known: {', '.join(_CHECKS)}")
    return [_CHECKS[name](cfg) for name in names]
