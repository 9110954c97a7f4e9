"""Detecting central asymmetry of star bodies from equatorial transforms.

The transform A(xi) vanishes identically when the section density is
even; sweeping poles and comparing max |A| against a calibrated noise
floor therefore separates "asymmetry detected" from "no asymmetry
visible at this resolution".  A verdict of symmetric is NOT a proof of
symmetry; it only reports that the sweep saw nothing above the floor.
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
    equator_rule,
    fibonacci_sphere,
    make_frame,
    probe_directions,
    random_directions,
)
from .star_body import (
    body_ball,
    body_ellipsoid,
    body_harmonic_perturbed_ball,
    odd_part,
    strip_gradient,
    to_scalar_field,
)
from .slice_transforms import equator_transform

_FRAME_SEED = 101


@dataclass(frozen=True, eq=False)
class AsymmetryReport:
    """Result of a pole sweep of the equatorial transform.

    values[i] = A(xis[i]); verdict is 'asymmetric' iff max_abs exceeds
    the threshold.  note spells out what a symmetric verdict does and
    does not mean.  ground_truth_odd_sup, when present, is the probed
    sup-norm of the odd part of the swept field (diagnostic only).
    """

    body_id: str
    dim: int
    sampler: str
    num_dirs: int
    resolution: int
    seed: int
    threshold: float
    xis: np.ndarray
    values: np.ndarray
    max_abs: float
    l2_mean: float
    verdict: str
    note: str
    ground_truth_odd_sup: Optional[float] = None

    def __post_init__(self):
        if self.verdict not in ("symmetric", "asymmetric"):
            raise ValueError("verdict must be 'symmetric' or 'asymmetric'")
        if self.xis.shape[0] != self.values.shape[0]:
            raise ValueError("xis and values must have matching lengths")


def sample_poles(n, count, sampler="antipodal", seed=0):
    """Pole sets for sweeps: 'fibonacci' (n=3), 'random', 'antipodal'.

    'antipodal' pairs each pole with its negative (Fibonacci-based for
    n=3, seeded-random otherwise), which makes the sweep's sign
    antisymmetry A(-xi) = -A(xi) directly visible.
    """
    n = check_dim(n)
    count = int(count)
    if count < 1:
        raise ValueError("count must be positive")
    if sampler == "fibonacci":
        if n != 3:
            raise ValueError("fibonacci sampler is specific to n=3")
        return fibonacci_sphere(count)
    if sampler == "random":
        return random_directions(n, count, seed=seed)
    if sampler == "antipodal":
        half = max(1, count // 2)
        base = fibonacci_sphere(half) if n == 3 else random_directions(n, half, seed=seed)
        return np.vstack([base, -base])
    raise ValueError(f"unknown sampler {sampler!r}")


@lru_cache(maxsize=64)
def _even_battery(n):
    bodies = [
        body_ball(n, 1.0),
        body_ball(n, 1.7),
        body_ellipsoid(n, tuple(np.linspace(1.4, 0.8, n))),
        body_ellipsoid(n, (2.0,) + (1.0,) * (n - 1)),
        # finite-difference meridian path, same noise class as user bodies
        strip_gradient(body_ellipsoid(n, tuple(np.linspace(1.2, 0.9, n)))),
    ]
    if n == 3:
        bodies.append(body_harmonic_perturbed_ball(0.04, 2, 1))
        bodies.append(body_harmonic_perturbed_ball(0.03, 4, 2))
    return tuple(bodies)


@lru_cache(maxsize=256)
def calibrate(n, rule_resolution=None, fd_step=1e-4, num_dirs=32, seed=2024):
    """Noise floor of the transform on centrally symmetric bodies.

    Sweeps a battery of even bodies (balls, ellipsoids, even harmonic
    bumps, plus one body forced through the finite-difference meridian
    path) and returns 10 times the largest |A| seen.  Cached per
    argument tuple; deterministic.
    """
    n = check_dim(n)
    resolution = rule_resolution or default_resolution(n)
    rule = equator_rule(n, resolution)
    xis = sample_poles(n, num_dirs, sampler="antipodal", seed=seed)
    worst = 0.0
    for body in _even_battery(n):
        f = to_scalar_field(body)
        for xi in xis:
            frame = make_frame(xi, seed=_FRAME_SEED)
            worst = max(worst, abs(equator_transform(f, frame, rule, fd_step=fd_step)))
    # floor at the roundoff scale of the weighted sums; claiming to
    # resolve asymmetry below that would be noise-reading
    return 10.0 * max(worst, 1e-13)


def sweep(f, num_dirs=100, sampler="antipodal", seed=0, rule_resolution=None,
          threshold=None, body_id=None, fd_step=1e-4):
    """Evaluate the transform over a pole sample and classify the field.

    Parameters
    ----------
    f : ScalarField
    num_dirs : number of poles
    sampler : 'antipodal' (default), 'fibonacci', or 'random'
    threshold : override for the calibrated noise floor

    Returns
    -------
    AsymmetryReport
    """
    n = f.dim
    resolution = rule_resolution or default_resolution(n)
    if threshold is None:
        threshold = calibrate(n, rule_resolution=resolution, fd_step=fd_step)
    rule = equator_rule(n, resolution)
    xis = sample_poles(n, num_dirs, sampler=sampler, seed=seed)
    values = np.empty(xis.shape[0])
    for i, xi in enumerate(xis):
        frame = make_frame(xi, seed=_FRAME_SEED)
        values[i] = equator_transform(f, frame, rule, fd_step=fd_step)
    max_abs = float(np.max(np.abs(values)))
    l2_mean = float(math.sqrt(float(np.mean(values ** 2))))
    odd_sup = float(np.max(np.abs(odd_part(f).evaluate(probe_directions(n, 2000)))))
    if max_abs > threshold:
        verdict = "asymmetric"
        top = xis[int(np.argmax(np.abs(values)))]
        note = ("asymmetry detected: max |A| = {:.6g} exceeds threshold {:.6g} "
                "near pole [{}]").format(
                    max_abs, threshold, ", ".join(f"{c:.4f}" for c in top))
    else:
        verdict = "symmetric"
        note = ("no asymmetry detected at this resolution (max |A| = {:.6g}, "
                "threshold {:.6g}); this certifies nothing beyond the sweep, "
                "it is not a proof of symmetry").format(max_abs, threshold)
    return AsymmetryReport(
        body_id=body_id or f.label or "field",
        dim=n, sampler=sampler, num_dirs=int(xis.shape[0]),
        resolution=int(resolution), seed=int(seed), threshold=float(threshold),
        xis=xis, values=values, max_abs=max_abs, l2_mean=l2_mean,
        verdict=verdict, note=note, ground_truth_odd_sup=odd_sup)


def detect(body, num_dirs=100, sampler="antipodal", seed=0, rule_resolution=None,
           threshold=None):
    """Sweep a star body's section density for central asymmetry."""
    return sweep(to_scalar_field(body), num_dirs=num_dirs, sampler=sampler,
                 seed=seed, rule_resolution=rule_resolution, threshold=threshold,
                 body_id=body.label)
