"""Planar domains: polygons and discs, with exact boundary distance.

A domain is either a simple polygon (vertices stored counterclockwise) or a
disc.  Both support containment tests, the exact Euclidean distance to the
boundary curve (the reference every discrete distance estimate in this
package is judged against), and deterministic disc averages of that distance.

Geometric tolerances are expressed relative to the bounding-box diagonal so
that all predicates are scale-free.

The JSON interchange format is::

    {"type": "polygon", "vertices": [[x1, y1], [x2, y2], ...]}
    {"type": "disc", "center": [cx, cy], "radius": r}

Vertex order in a file may be either orientation; loading normalizes to
counterclockwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

# Relative tolerance for "on the boundary" / "coincident vertices" tests,
# multiplied by the bounding-box diagonal.
GEOMETRIC_TOL = 1e-12


class Point2(NamedTuple):
    """A point in the plane; unpacks as an (x1, x2) pair."""

    x1: float
    x2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2], dtype=float)


def _as_point(p) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.shape != (2,):
        raise ValueError("expected a point with two coordinates")
    if not np.all(np.isfinite(a)):
        raise ValueError("point coordinates must be finite")
    return a


def point_segment_distance(p, a, b) -> float:
    """Distance from p to the closed segment [a, b]."""
    p, a, b = _as_point(p), _as_point(a), _as_point(b)
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.hypot(*(p - a)))
    t = float((p - a) @ ab) / denom
    t = min(1.0, max(0.0, t))
    foot = a + t * ab
    return float(np.hypot(*(p - foot)))


def _segments_intersect(a, b, c, d) -> bool:
    # Closed-segment intersection test (shared endpoints count).
    def orient(p, q, r):
        v = float((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))
        return (v > 0.0) - (v < 0.0)

    def on_segment(p, q, r):
        return (min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
                and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]))

    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_segment(a, b, c):
        return True
    if o2 == 0 and on_segment(a, b, d):
        return True
    if o3 == 0 and on_segment(c, d, a):
        return True
    if o4 == 0 and on_segment(c, d, b):
        return True
    return False


@dataclass(frozen=True)
class Polygon:
    """Simple polygon; vertices are normalized to counterclockwise order."""

    vertices: np.ndarray = field(repr=False)

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise ValueError("polygon needs an (n, 2) array with n >= 3")
        if not np.all(np.isfinite(v)):
            raise ValueError("polygon vertices must be finite")
        diag = _bbox_diagonal(v)
        gaps = np.hypot(*(np.roll(v, -1, axis=0) - v).T)
        if np.any(gaps <= GEOMETRIC_TOL * diag):
            raise ValueError("polygon has coincident consecutive vertices")
        area2 = _shoelace_twice(v)
        if abs(area2) <= GEOMETRIC_TOL * diag * diag:
            raise ValueError("polygon is degenerate (zero area)")
        if area2 < 0.0:
            v = v[::-1].copy()
        _check_simple(v)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self) -> int:
        return self.vertices.shape[0]

    def signed_area(self) -> float:
        return 0.5 * _shoelace_twice(self.vertices)

    def perimeter(self) -> float:
        d = np.roll(self.vertices, -1, axis=0) - self.vertices
        return float(np.hypot(d[:, 0], d[:, 1]).sum())

    def edges(self):
        """Yield (start, end) vertex pairs, counterclockwise."""
        v = self.vertices
        for i in range(len(v)):
            yield v[i], v[(i + 1) % len(v)]

    def interior_angle(self, i: int) -> float:
        """Interior angle at vertex i, in (0, 2 pi)."""
        v = self.vertices
        n = len(v)
        e_in = v[i] - v[(i - 1) % n]
        e_out = v[(i + 1) % n] - v[i]
        cross = float(e_in[0] * e_out[1] - e_in[1] * e_out[0])
        turn = math.atan2(cross, float(e_in @ e_out))
        return math.pi - turn

    def reflex_vertices(self) -> list[int]:
        """Indices of vertices whose interior angle exceeds pi."""
        return [i for i in range(len(self))
                if self.interior_angle(i) > math.pi + 1e-12]


def _shoelace_twice(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return float(x @ np.roll(y, -1) - y @ np.roll(x, -1))


def _bbox_diagonal(v: np.ndarray) -> float:
    span = v.max(axis=0) - v.min(axis=0)
    return float(np.hypot(span[0], span[1]))


def _check_simple(v: np.ndarray) -> None:
    # Non-adjacent edges must not touch. O(n^2), acceptable for the polygon
    # sizes this package meshes.
    n = len(v)
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _segments_intersect(a, b, v[j], v[(j + 1) % n]):
                raise ValueError(
                    f"polygon is not simple: edges {i} and {j} intersect")


def _crossing_parity(v: np.ndarray, p: np.ndarray) -> bool:
    # Even-odd ray crossing; points near the boundary are settled by the
    # caller's tolerance band before this runs.
    inside = False
    n = len(v)
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        if (a[1] > p[1]) != (b[1] > p[1]):
            x_cross = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0])
            if p[0] < x_cross:
                inside = not inside
    return inside


@dataclass(frozen=True)
class Disc:
    center: Point2
    radius: float

    def __post_init__(self):
        c = Point2(*(float(x) for x in self.center))
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError("disc radius must be positive and finite")


Domain = Union[Polygon, Disc]


@dataclass(frozen=True)
class ProbeDisc:
    """A small disc over which boundary distance is averaged.

    Its closure must lie inside the probed domain; disc_mean_distance and
    the superharmonicity pipeline verify that before integrating.
    """

    center: Point2
    radius: float

    def __post_init__(self):
        c = Point2(*(float(x) for x in self.center))
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError("probe radius must be positive and finite")


def domain_scale(domain: Domain) -> float:
    """Bounding-box diagonal, the reference length for tolerances."""
    if isinstance(domain, Polygon):
        return _bbox_diagonal(domain.vertices)
    return 2.0 * math.sqrt(2.0) * domain.radius


def _raw_boundary_distance(domain: Domain, p: np.ndarray) -> float:
    # Distance to the boundary curve with no containment check; callers
    # guarantee p is (effectively) inside.
    if isinstance(domain, Polygon):
        return min(point_segment_distance(p, a, b) for a, b in domain.edges())
    s = math.hypot(p[0] - domain.center.x1, p[1] - domain.center.x2)
    return abs(domain.radius - s)


def boundary_distance_batch(domain: Domain, points: np.ndarray) -> np.ndarray:
    """Vectorized |boundary distance| for an (n, 2) array of interior points.

    No containment check is performed; exterior points get their unsigned
    distance to the boundary curve.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("expected an (n, 2) array of points")
    if isinstance(domain, Disc):
        s = np.hypot(pts[:, 0] - domain.center.x1, pts[:, 1] - domain.center.x2)
        return np.abs(domain.radius - s)
    v = domain.vertices
    a = v[None, :, :]                                # (1, E, 2)
    ab = (np.roll(v, -1, axis=0) - v)[None, :, :]     # (1, E, 2)
    ap = pts[:, None, :] - a                          # (n, E, 2)
    denom = np.einsum("nej,nej->ne", ab, ab)
    t = np.einsum("nej,nej->ne", ap, ab) / denom
    np.clip(t, 0.0, 1.0, out=t)
    foot = ap - t[:, :, None] * ab
    d = np.sqrt(np.einsum("nej,nej->ne", foot, foot))
    return d.min(axis=1)


def contains_point(domain: Domain, p) -> bool:
    """True iff p lies in the open domain.

    Points within GEOMETRIC_TOL of the boundary (relative to the
    bounding-box diagonal) are classified as not contained.
    """
    p = _as_point(p)
    band = GEOMETRIC_TOL * domain_scale(domain)
    if isinstance(domain, Disc):
        s = math.hypot(p[0] - domain.center.x1, p[1] - domain.center.x2)
        return s < domain.radius - band
    if _raw_boundary_distance(domain, p) <= band:
        return False
    return _crossing_parity(domain.vertices, p)


def distance_to_boundary(domain: Domain, p) -> float:
    """Minimum Euclidean distance from p to the domain boundary.

    Defined for points of the closed domain; points strictly outside are
    rejected.  The result is >= 0 and vanishes exactly on the boundary.
    """
    p = _as_point(p)
    band = GEOMETRIC_TOL * domain_scale(domain)
    d = _raw_boundary_distance(domain, p)
    if d > band and not contains_point(domain, p):
        raise ValueError("point lies outside the domain")
    if isinstance(domain, Disc):
        s = math.hypot(p[0] - domain.center.x1, p[1] - domain.center.x2)
        return max(domain.radius - s, 0.0)
    return d


def is_convex_polygon(domain: Domain) -> bool:
    """Convexity ground truth; discs are convex unconditionally.

    A polygon is convex when every consecutive-edge cross product is
    >= -GEOMETRIC_TOL * scale^2.
    """
    if isinstance(domain, Disc):
        return True
    v = domain.vertices
    e = np.roll(v, -1, axis=0) - v
    e_next = np.roll(e, -1, axis=0)
    cross = e[:, 0] * e_next[:, 1] - e[:, 1] * e_next[:, 0]
    scale = domain_scale(domain)
    return bool(np.all(cross >= -GEOMETRIC_TOL * scale * scale))


def probe_fits(domain: Domain, probe: ProbeDisc) -> bool:
    """True iff the probe's closed disc lies inside the domain."""
    c = probe.center.as_array()
    band = GEOMETRIC_TOL * domain_scale(domain)
    if not contains_point(domain, c):
        return False
    return _raw_boundary_distance(domain, c) >= probe.radius - band


def disc_mean_distance(domain: Domain, probe: ProbeDisc,
                       radial_order: int = 16, angular_order: int = 64) -> float:
    """Mean of the boundary distance over the probe disc.

    Tensor quadrature: Gauss-Legendre in the radial variable (with the
    polar Jacobian) times a uniform periodic-trapezoid rule in angle.
    Deterministic for fixed orders.
    """
    if radial_order < 4 or angular_order < 8:
        raise ValueError("need radial_order >= 4 and angular_order >= 8")
    if not probe_fits(domain, probe):
        raise ValueError("probe disc is not contained in the domain")
    xi, w = np.polynomial.legendre.leggauss(radial_order)
    rho = probe.radius
    s = 0.5 * rho * (xi + 1.0)        # radial nodes in (0, rho)
    ws = 0.5 * rho * w * s            # GL weight times Jacobian s
    theta = 2.0 * np.pi * np.arange(angular_order) / angular_order
    cx, cy = probe.center
    px = cx + np.outer(s, np.cos(theta))
    py = cy + np.outer(s, np.sin(theta))
    pts = np.column_stack([px.ravel(), py.ravel()])
    d = boundary_distance_batch(domain, pts).reshape(radial_order, angular_order)
    integral = float(ws @ d.sum(axis=1)) * (2.0 * np.pi / angular_order)
    return integral / (np.pi * rho * rho)


def domain_to_dict(domain: Domain) -> dict:
    if isinstance(domain, Polygon):
        return {"type": "polygon", "vertices": domain.vertices.tolist()}
    if isinstance(domain, Disc):
        return {"type": "disc", "center": [domain.center.x1, domain.center.x2],
                "radius": domain.radius}
    raise TypeError(f"not a domain: {type(domain).__name__}")


def domain_from_dict(data: dict) -> Domain:
    if not isinstance(data, dict):
        raise ValueError("domain description must be a JSON object")
    kind = data.get("type")
    if kind == "polygon":
        if "vertices" not in data:
            raise ValueError("polygon domain needs a 'vertices' field")
        return Polygon(data["vertices"])
    if kind == "disc":
        if "center" not in data or "radius" not in data:
            raise ValueError("disc domain needs 'center' and 'radius' fields")
        return Disc(Point2(*data["center"]), data["radius"])
    raise ValueError(f"unknown domain type: {kind!r}")


def load_domain(path) -> Domain:
    with open(path, encoding="utf-8") as f:
        return domain_from_dict(json.load(f))


def dump_domain(domain: Domain, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(domain_to_dict(domain), f, indent=2)
        f.write("\n")


def unit_square() -> Polygon:
    return Polygon([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])


def l_shape() -> Polygon:
    """The [0,2]^2 square with the quadrant [1,2]x[1,2] removed.

    Its single reflex corner at (1, 1) is the canonical nonconvexity used
    throughout the tests.
    """
    return Polygon([(0.0, 0.0), (2.0, 0.0), (2.0, 1.0),
                    (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)])


def unit_disc() -> Disc:
    return Disc(Point2(0.0, 0.0), 1.0)


def regular_polygon(n_sides: int, radius: float = 1.0,
                    center=(0.0, 0.0)) -> Polygon:
    """Regular n-gon inscribed in a circle; a stand-in for smooth domains."""
    if n_sides < 3:
        raise ValueError("need at least 3 sides")
    theta = 2.0 * np.pi * np.arange(n_sides) / n_sides
    cx, cy = float(center[0]), float(center[1])
    return Polygon(np.column_stack([cx + radius * np.cos(theta),
                                    cy + radius * np.sin(theta)]))
