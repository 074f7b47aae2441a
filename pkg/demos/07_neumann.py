"""
Flux data instead of Dirichlet data
===================================

The same operator with the boundary condition dv/dn = mu has a closed
form on the disc too: v = I0(mu |x|) / I1(mu).  Distance recovery from
flux data is exploratory; no convergence rate is claimed anywhere in the
package, and the command line says so whenever it writes such numbers.
"""

import numpy as np

from panharmonic import (bessel_i0, bessel_i1, log_bessel_i1, solve_neumann,
                         triangulate, unit_disc)

disc = unit_disc()
mu = 2.0
m = triangulate(disc, 0.05)
field = solve_neumann(m, mu)

# Center node is index 0 on disc meshes.
print(f"mu = {mu:g}")
print(f"  FEM v(0)        {field.values[0]:.6f}")
print(f"  1 / I1(mu)      {1.0 / bessel_i1(mu):.6f}")

edge = field.values[m.boundary_node]
print(f"  FEM rim mean    {edge.mean():.6f}")
print(f"  I0(mu)/I1(mu)   {bessel_i0(mu) / bessel_i1(mu):.6f}")

# The Neumann field is not pinned to 1 on the boundary, so -log(v)/mu
# no longer vanishes there; it still flattens toward d as mu grows.
# Closed-form check at the center, far from the boundary:
for big in (10.0, 50.0, 200.0):
    est = log_bessel_i1(big) / big      # -log(v(0))/mu with v(0) = 1/I1(mu)
    print(f"mu = {big:5g}: -log v(0)/mu = {est:.5f}   true distance 1.0   "
          f"gap {abs(est - 1.0):.4f}")
print("suggestive, but treat it as numerical evidence, not a proof")
