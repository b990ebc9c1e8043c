"""Build variable exponent fields and walk the admissibility conditions."""

import numpy as np

from pxkirchhoff import (
    build_exponent_field,
    build_interval_mesh,
    critical_exponent,
    default_theta,
    validate_problem_exponents,
)

mesh = build_interval_mesh(50, 0.0, 1.0)
x = mesh.element_centroids[:, 0]

# p ranges over [2, 2.5], q over [4.6, 5]: the full chain holds
p = build_exponent_field(2.0 + 0.5 * x, mesh)
q = build_exponent_field(4.6 + 0.4 * x, mesh)
print(f"p in [{p.lo:g}, {p.hi:g}],  q in [{q.lo:g}, {q.hi:g}]")

report = validate_problem_exponents(p, q, dimension=3)
print("chain_ok:", report.chain_ok)
print("theta interval:", report.theta_interval)
print("default theta:", default_theta(p, q))

p_star = critical_exponent(p, 3)
print(f"critical exponent range: [{p_star.lo:g}, {p_star.hi:g}]")

# tighten q down to 2p- and the strict inequality breaks
q_bad = build_exponent_field(np.full(50, 4.0), mesh)
bad = validate_problem_exponents(p, q_bad)
print("with q = 4:", "chain_ok:", bad.chain_ok, "failures:", bad.failures)

# spread p wide enough and the admissible theta interval empties out
p_wide = build_exponent_field(2.0 + 1.0 * x, mesh)
wide = validate_problem_exponents(p_wide, q)
print("with p in [2, 3]:", "failures:", wide.failures)
