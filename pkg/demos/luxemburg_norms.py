"""Luxemburg norms, the modular, and the power inequalities tying them."""

import numpy as np

from pxkirchhoff import (
    GridFunction,
    build_exponent_field,
    build_interval_mesh,
    centroid_values,
    check_modular_norm_relations,
    constant_exponent,
    holder_pairing,
    luxemburg_norm,
    modular,
    sobolev_norm,
)

mesh = build_interval_mesh(200, 0.0, 1.0)
x_c = mesh.element_centroids[:, 0]

# constant exponent: the Luxemburg norm is the ordinary L^p norm
p3 = constant_exponent(3.0, mesh)
u = np.full(200, 2.0)
print("constant p = 3:")
print("  luxemburg :", luxemburg_norm(u, p3, mesh))
print("  (int u^3)^(1/3):", modular(u, p3, mesh) ** (1 / 3))

# variable exponent: no closed form, but the unit-ball identity pins the norm
p_var = build_exponent_field(2.0 + x_c, mesh)
w = np.sin(3.0 * np.pi * x_c) + 0.3
nw = luxemburg_norm(w, p_var, mesh)
print("variable p = 2 + x:")
print("  norm:", nw, " modular at u/norm:", modular(w / nw, p_var, mesh))

rep = check_modular_norm_relations(3.0 * w, p_var, mesh)
print("  norm vs modular relations ok:", rep.ok,
      f"(norm={rep.norm:.4f}, modular={rep.modular:.4f})")

v = np.cos(2.0 * np.pi * x_c)
pairing, bound = holder_pairing(w, v, p_var, mesh)
print(f"  Holder: |int uv| = {abs(pairing):.4f} <= {bound:.4f}")

tent = GridFunction(mesh, 2.0 * np.minimum(mesh.vertices[:, 0], 1.0 - mesh.vertices[:, 0]))
print("tent function: sobolev norm", sobolev_norm(tent, p_var),
      " L-norm of centroid values", luxemburg_norm(centroid_values(tent), p_var, mesh))
