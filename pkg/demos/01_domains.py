"""
Stock domains and their geometry
================================

Everything downstream (meshing, solving, the convexity verdict) starts
from a Domain: a simple Polygon or a centered Disc.  This script builds
the three domains used across the demos, checks a couple of distances
against hand values, and round-trips each domain through its JSON file
in demos/domains/.
"""

import pathlib

import numpy as np

from panharmonic import (distance_to_boundary, domain_to_dict,
                         is_convex_polygon, l_shape, load_domain, unit_disc,
                         unit_square)

HERE = pathlib.Path(__file__).parent

square = unit_square()
ell = l_shape()
disc = unit_disc()

print("unit square: area", square.signed_area(), "perimeter", square.perimeter())
print("L-shape:     area", ell.signed_area(), "perimeter", ell.perimeter())
print("unit disc:   radius", disc.radius)

# The L-shape is the square [0,2]^2 with the top-right unit square removed.
# Vertex 3 sits at the reentrant corner (1,1); its interior angle is 3*pi/2.
print("\nL-shape reflex vertices:", ell.reflex_vertices())
print("interior angle at vertex 3:", ell.interior_angle(3), "=", 1.5 * np.pi)

print("\nconvex?  square:", is_convex_polygon(square),
      " L:", is_convex_polygon(ell),
      " disc:", is_convex_polygon(disc))

# Distance to the boundary.  Two hand-checkable points in the L-shape:
# (0.8, 0.8) sees the corner point (1,1) at 0.2*sqrt(2); for (1.2, 0.8)
# the nearest boundary is the horizontal edge y = 1 directly above.
for p, expected in [((0.8, 0.8), 0.2 * np.sqrt(2.0)), ((1.2, 0.8), 0.2)]:
    d = distance_to_boundary(ell, np.array(p))
    print(f"d({p}, boundary) = {d:.12f}   expected {expected:.12f}")

# Domains serialize to small JSON files so the command line can pick them
# up.  The copies in demos/domains/ were written with dump_domain; loading
# them back must reproduce the programmatic constructors exactly.
for name, built in [("square", square), ("lshape", ell), ("disc", disc)]:
    loaded = load_domain(HERE / "domains" / f"{name}.json")
    same = domain_to_dict(loaded) == domain_to_dict(built)
    print(f"{name}.json round-trips exactly: {same}")
