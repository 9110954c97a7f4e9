"""Section functions of star bodies and the equatorial derivative transform.

Three curves in the height variable z share machinery here.  With
psi = arcsin(z) and f = rho^{n-1}/(n-1):

* slice_integral: integral of a field over the latitude sphere
  { x in S^{n-1} : <x, xi> = z }, which is the same point set as the
  intersection of the sphere with the cone of opening cosine z.
* conical_section: (n-1)-measure of the body carved out along that
  cone, equal to the slice integral of f.
* hyperplane_section: (n-1)-volume of the flat cut { <x, xi> = z },
  computed from the polar profile of the cut around its foot point.

The equatorial transform A(xi) integrates the meridian derivative of a
field over the equator of xi.  Each curve's derivative at z = 0 equals
the transform of a matching field (f itself for the first two kinds,
rho^{n-2}/(n-2), or log rho when n = 2, for flat cuts); vanishing of
A(xi) for almost every pole forces the field to be even.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .sphere_geom import EquatorQuadrature, EquatorFrame, embed
from .star_body import (
    RadialField,
    ScalarField,
    hyperplane_profile_field,
    to_scalar_field,
)

_SCAN_POINTS = 64
_BISECT_WIDTH = 1e-12


@dataclass(frozen=True, eq=False)
class SectionCurve:
    """Sampled section curve z -> value for one body/field and pole."""

    kind: str
    xi: np.ndarray
    zs: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        zs = np.asarray(self.zs, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if zs.ndim != 1 or zs.shape != vals.shape:
            raise ValueError("zs and values must be matching 1-d arrays")
        if np.any(np.diff(zs) <= 0):
            raise ValueError("zs must be strictly increasing")
        if not np.all(np.isfinite(vals)):
            raise ValueError("curve values must be finite")
        if self.kind in ("conical", "hyperplane") and np.any(vals < -1e-12):
            raise ValueError("section measures must be nonnegative")
        object.__setattr__(self, "zs", zs)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True, eq=False)
class DerivativeAtZero:
    """Finite-difference slope of a section curve at z = 0 vs the transform.

    fd_steps holds the raw central-difference ladder as (h, estimate)
    pairs; fd_value is its Richardson limit and agreement_residual is
    |fd_value - transform_value|.  ladder_monotone records whether the
    extrapolation corrections shrank monotonically (a coarse stability
    diagnostic for the ladder).
    """

    kind: str
    xi: np.ndarray
    fd_value: float
    transform_value: float
    fd_steps: tuple
    agreement_residual: float
    ladder_monotone: bool


@dataclass(frozen=True)
class FdOptions:
    """Central-difference ladder: steps h0 / 2^k for k < levels."""

    h0: float = 1e-2
    levels: int = 4

    def __post_init__(self):
        if not (0 < self.h0 < 0.5):
            raise ValueError("h0 must lie in (0, 0.5)")
        if self.levels < 1:
            raise ValueError("levels must be at least 1")


def richardson_limit(pairs):
    """Richardson extrapolation of central differences on a halving ladder.

    pairs: sequence of (h, estimate) with each h half the previous one.
    Error orders are even powers of h, so each level multiplies the
    elimination factor by 4.  Returns (limit, diagonal) where diagonal
    holds the successive extrapants.
    """
    hs = [h for h, _ in pairs]
    for a, b in zip(hs, hs[1:]):
        if abs(b - a / 2.0) > 1e-12 * a:
            raise ValueError("ladder steps must halve")
    col = [est for _, est in pairs]
    diag = [col[0]]
    level = 0
    while len(col) > 1:
        level += 1
        factor = 4.0 ** level
        col = [(factor * b - a) / (factor - 1.0) for a, b in zip(col, col[1:])]
        diag.append(col[0])
    return col[0], diag


def _check_rule(frame, rule):
    if rule.sphere_dim != frame.dim - 1:
        raise ValueError("quadrature rule dimension does not match the frame")


def slice_integral(f, frame, z, rule):
    """Integral of a field over the latitude sphere at height z.

    Computes cos^{n-2}(psi) * sum_i w_i f(embed(eta_i, psi)) with
    psi = arcsin(z); the cosine power is the measure ratio between the
    latitude sphere of radius cos(psi) and the unit equator carrying the
    rule.

    Parameters
    ----------
    f : ScalarField
    frame : EquatorFrame
    z : height in (-1, 1)
    rule : EquatorQuadrature on S^{n-2}
    """
    _check_rule(frame, rule)
    z = float(z)
    if not (-1.0 < z < 1.0):
        raise ValueError("height z must lie in (-1, 1)")
    psi = math.asin(z)
    x = embed(frame, rule.nodes, psi)
    vals = f.evaluate(x)
    return math.cos(psi) ** (frame.dim - 2) * float(rule.weights @ vals)


def conical_section(body, frame, z, rule):
    """(n-1)-measure of the body along the cone of opening cosine z.

    The cone with apex 0 whose rays make angle arccos(z) with the pole
    meets the unit sphere in the latitude sphere at psi = arcsin(z), so
    this is the slice integral of the body's section density.
    """
    return slice_integral(to_scalar_field(body), frame, z, rule)


def _bracket_scan(body, frame, nodes, z, psi_lo, psi_hi):
    # g(psi) = rho(eta, psi) sin(psi) - z on a uniform scan grid;
    # returns per-node bracket [lo, hi] of the first sign change and the
    # total number of sign changes seen (for the multi-root probe).
    grid = np.linspace(psi_lo, psi_hi, _SCAN_POINTS)
    vals = np.empty((_SCAN_POINTS, nodes.shape[0]))
    for i, psi in enumerate(grid):
        vals[i] = body.evaluate(embed(frame, nodes, psi)) * math.sin(psi) - z
    signs = np.sign(vals)
    signs[signs == 0.0] = 1.0
    flips = signs[:-1] * signs[1:] < 0
    counts = flips.sum(axis=0)
    first = np.argmax(flips, axis=0)
    return grid, first, counts


def hyperplane_section(body, frame, z, rule):
    """(n-1)-volume of the flat cut { x : <x, xi> = z } through the body.

    For each equator node the meridian latitude psi* solving
    rho(eta, psi) sin(psi) = z locates the cut boundary; the profile
    radius about the foot point z xi is r = rho cos(psi*), and the cut
    volume is sum_i w_i r_i^{n-1} / (n-1).  Requires the cut to be
    star-shaped about the foot point (declared on the body); the root is
    bracketed by a 64-point scan (which doubles as a multi-root probe),
    bisected to width 1e-12 and polished with one secant step.
    """
    _check_rule(frame, rule)
    if not body.sections_star_shaped:
        raise ValueError("body does not declare star-shaped hyperplane sections")
    z = float(z)
    n = frame.dim
    nodes = rule.nodes
    rho_eq = body.evaluate(frame.lift(nodes))
    if abs(z) >= float(rho_eq.min()):
        raise ValueError("height |z| must stay below the equator radius of the body")
    if z == 0.0:
        r = rho_eq
        return float(rule.weights @ (r ** (n - 1))) / (n - 1)

    cap = math.pi / 2 - 1e-9
    floor = max(body.radius_floor, 1e-12)
    psi_max = min(math.asin(min(1.0, abs(z) / floor)) + 0.1, cap)
    lo, hi = (0.0, psi_max) if z > 0 else (-psi_max, 0.0)
    grid, first, counts = _bracket_scan(body, frame, nodes, z, lo, hi)
    if np.any(counts == 0):
        # widen once to the full quarter before giving up
        lo, hi = (0.0, cap) if z > 0 else (-cap, 0.0)
        grid, first, counts = _bracket_scan(body, frame, nodes, z, lo, hi)
        if np.any(counts == 0):
            raise ValueError("root bracketing failed: the cut misses some meridians")
    if np.any(counts > 1):
        raise ValueError("multiple boundary crossings: cut is not star-shaped "
                         "about its foot point")

    a = grid[first]
    b = grid[first + 1]

    def g(psi):
        return body.evaluate(embed(frame, nodes, psi)) * np.sin(psi) - z

    ga = g(a)
    while np.max(b - a) > _BISECT_WIDTH:
        mid = 0.5 * (a + b)
        gm = g(mid)
        take_left = ga * gm <= 0.0
        b = np.where(take_left, mid, b)
        a = np.where(take_left, a, mid)
        ga = np.where(take_left, ga, gm)
    gb = g(b)
    denom = gb - ga
    safe = np.abs(denom) > 1e-300
    psi_star = np.where(safe, b - gb * (b - a) / np.where(safe, denom, 1.0),
                        0.5 * (a + b))
    psi_star = np.clip(psi_star, -cap, cap)
    r = body.evaluate(embed(frame, nodes, psi_star)) * np.cos(psi_star)
    return float(rule.weights @ (r ** (n - 1))) / (n - 1)


def equator_transform(f, frame, rule, fd_step=1e-4):
    """A(xi): integral of the meridian derivative of f over the equator.

    Uses the field's analytic gradient when present, otherwise central
    differences along meridians with one Richardson level.
    """
    _check_rule(frame, rule)
    d = f.meridian_derivative(frame, rule.nodes, np.zeros(rule.size), fd_step=fd_step)
    return float(rule.weights @ d)


_KINDS = ("slice", "conical", "hyperplane")


def _curve_function(kind, obj, frame, rule):
    if kind == "slice":
        if not isinstance(obj, ScalarField):
            raise TypeError("slice curves take a ScalarField")
        return (lambda z: slice_integral(obj, frame, z, rule)), obj
    if not isinstance(obj, RadialField):
        raise TypeError(f"{kind} curves take a RadialField")
    if kind == "conical":
        return (lambda z: conical_section(obj, frame, z, rule)), to_scalar_field(obj)
    if kind == "hyperplane":
        return (lambda z: hyperplane_section(obj, frame, z, rule)),\
            hyperplane_profile_field(obj)
    raise ValueError(f"unknown curve kind {kind!r}; expected one of {_KINDS}")


def section_curve(kind, obj, frame, zs, rule):
    """Sample a section curve on a grid of heights.

    kind is one of 'slice', 'conical', 'hyperplane'; obj is a
    ScalarField for 'slice' and a RadialField otherwise.
    """
    fn, _ = _curve_function(kind, obj, frame, rule)
    zs = np.asarray(zs, dtype=float)
    values = np.array([fn(z) for z in zs])
    label = getattr(obj, "label", "")
    return SectionCurve(kind=kind, xi=frame.pole.copy(), zs=zs, values=values,
                        label=label)


def derivative_at_zero(kind, obj, frame, rule, fd=None, transform_rule=None):
    """Slope of a section curve at z = 0, checked against the transform.

    The finite-difference side differentiates the sampled curve with a
    halving central-difference ladder and Richardson extrapolation; the
    transform side applies the equatorial transform to the curve's
    matching field (the section density for slice/conical curves, the
    flat-cut slope density for hyperplane curves).  `transform_rule`
    overrides the rule used on the transform side only.
    """
    fd = fd or FdOptions()
    fn, match = _curve_function(kind, obj, frame, rule)
    steps = []
    for k in range(fd.levels):
        h = fd.h0 / 2.0 ** k
        steps.append((h, (fn(h) - fn(-h)) / (2.0 * h)))
    fd_value, diag = richardson_limit(steps)
    corrections = [abs(b - a) for a, b in zip(diag, diag[1:])]
    monotone = all(b <= a * 1.5 + 1e-14 for a, b in zip(corrections, corrections[1:]))
    t_value = equator_transform(match, frame, transform_rule or rule)
    return DerivativeAtZero(kind=kind, xi=frame.pole.copy(),
                            fd_value=float(fd_value),
                            transform_value=float(t_value),
                            fd_steps=tuple(steps),
                            agreement_residual=float(abs(fd_value - t_value)),
                            ladder_monotone=bool(monotone))
