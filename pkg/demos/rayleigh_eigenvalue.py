"""Rayleigh-quotient eigenvalue estimates and their domain scaling."""

import numpy as np

from pxkirchhoff import (
    build_exponent_field,
    build_interval_mesh,
    constant_exponent,
    rayleigh_quotient_min,
)

for length in (1.0, 2.0):
    mesh = build_interval_mesh(200, 0.0, length)
    p = constant_exponent(2.0, mesh)
    lam, minimizer = rayleigh_quotient_min(p, mesh, seed=0)
    exact = (np.pi / length) ** 2
    print(f"(0, {length:g}), p = 2: lambda = {lam:.6f}  (pi/L)^2 = {exact:.6f}  "
          f"rel err {abs(lam - exact) / exact:.2e}")

# variable exponent: positivity of the infimum hinges on monotonicity of p
# (for non-monotone p the 1-D infimum is zero and descent chases it forever,
# so only monotone fields give a clean local minimum here)
mesh = build_interval_mesh(200, 0.0, 1.0)
for descr, samples in (
    ("increasing p = 2 + x", 2.0 + mesh.element_centroids[:, 0]),
    ("decreasing p = 3 - x", 3.0 - mesh.element_centroids[:, 0]),
):
    p = build_exponent_field(samples, mesh)
    lam, _ = rayleigh_quotient_min(p, mesh, seed=0)
    print(f"{descr}: lambda = {lam:.6f}")
