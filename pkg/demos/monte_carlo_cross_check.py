"""
Monte Carlo slabs against the quadrature path
=============================================

The section machinery integrates over latitude spheres with an equator
quadrature rule.  As an independent check, thin-slab rejection sampling
estimates the same section volumes sharing no code with that path: a
hyperplane slab counts points of the bounding ball near the cut, a cone
slab counts directions in a latitude band with importance-drawn radii.
Agreement within a few sigma on varied bodies is strong evidence both
sides are right.
"""

import numpy as np

from starsym import (
    body_ball,
    body_ellipsoid,
    body_shifted_ball,
    conical_section,
    equator_rule,
    hyperplane_section,
    make_frame,
    mc_cone_section,
    mc_hyperplane_section,
)

bodies = [
    body_ball(3, 1.0),
    body_shifted_ball(3, 1.0, (0.2, -0.1, 0.1)),
    body_ellipsoid(3, (1.3, 1.0, 0.8)),
]
rng = np.random.default_rng(42)
rule = equator_rule(3, 256)
samples = 800_000

print(f"{samples} samples per estimate, slab half-width 0.015\n")
print(f"{'body':<28} {'kind':<11} {'z':>5} {'quadrature':>12} "
      f"{'monte carlo':>12} {'sigma':>9} {'pull':>6}")
for body in bodies:
    xi = rng.standard_normal(3)
    xi /= np.linalg.norm(xi)
    frame = make_frame(xi, seed=101)
    for z in (-0.3, 0.2):
        quad_h = hyperplane_section(body, frame, z, rule)
        quad_c = conical_section(body, frame, z, rule)
        mc_h = mc_hyperplane_section(body, xi, z, delta=0.015,
                                     samples=samples, seed=7)
        mc_c = mc_cone_section(body, xi, z, delta=0.015,
                               samples=samples, seed=8)
        for kind, quad, mc in (("hyperplane", quad_h, mc_h),
                               ("cone", quad_c, mc_c)):
            pull = (mc.value - quad) / mc.std_error
            print(f"{body.label:<28} {kind:<11} {z:5.2f} {quad:12.6f} "
                  f"{mc.value:12.6f} {mc.std_error:9.2e} {pull:6.2f}")

print("\npull = (estimate - quadrature) / sigma; values of order one mean")
print("the deviation is explained by sampling noise (plus the small")
print("O(delta^2) slab bias, visible as a consistent fraction of a sigma)")
