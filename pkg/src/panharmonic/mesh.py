"""Conforming P1 triangulations of polygons and discs.

Polygons are ear-clipped to a coarse triangulation, refined uniformly until
the edge-length target holds, then relaxed by a few guarded Laplacian sweeps
(interior nodes only).  Discs get a structured concentric web whose boundary
nodes sit exactly on the circle at every refinement level.

Everything here is deterministic: no randomization, fixed iteration orders,
and refinement/smoothing that depend only on the input mesh.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .geometry import Disc, Domain, Polygon, domain_scale

TRIANGLE_BUDGET = 2_000_000
SMOOTHING_SWEEPS = 10
# Longest edge of the disc web is the first sector diagonal of each annulus,
# sqrt(1 + (pi/3)^2) ~ 1.448 times the ring spacing.
_DISC_EDGE_FACTOR = 1.4480


class MeshBudgetError(RuntimeError):
    """Raised when a construction step would exceed TRIANGLE_BUDGET."""


@dataclass(frozen=True)
class MeshQuality:
    min_angle: float          # degrees
    max_angle: float          # degrees
    h_min: float
    h_max: float
    nonobtuse_fraction: float


class Mesh:
    """Immutable triangle mesh with boundary structure.

    nodes: (N, 2) float array.  triangles: (M, 3) int array, each row
    counterclockwise.  boundary_node: (N,) bool.  boundary_edges: (B, 2)
    directed so the domain lies on the left; boundary_normals holds the
    matching outward unit normals.
    """

    def __init__(self, nodes, triangles):
        nodes = np.ascontiguousarray(nodes, dtype=float)
        triangles = np.ascontiguousarray(triangles, dtype=np.int64)
        if nodes.ndim != 2 or nodes.shape[1] != 2:
            raise ValueError("nodes must be an (N, 2) array")
        if triangles.ndim != 2 or triangles.shape[1] != 3:
            raise ValueError("triangles must be an (M, 3) array")
        n = nodes.shape[0]
        if triangles.min(initial=0) < 0 or triangles.max(initial=-1) >= n:
            raise ValueError("triangle node index out of range")

        areas = _signed_areas(nodes, triangles)
        if np.any(areas <= 0.0):
            bad = int(np.argmax(areas <= 0.0))
            raise ValueError(f"triangle {bad} is degenerate or flipped")

        directed = np.concatenate([triangles[:, [0, 1]],
                                   triangles[:, [1, 2]],
                                   triangles[:, [2, 0]]])
        und = np.sort(directed, axis=1)
        uniq, inverse, counts = np.unique(und, axis=0, return_inverse=True,
                                          return_counts=True)
        inverse = inverse.reshape(-1)
        if counts.max(initial=1) > 2:
            raise ValueError("nonconforming mesh: an edge is shared by >2 triangles")
        boundary_dir = directed[counts[inverse] == 1]

        used = np.unique(triangles)
        if used.size != n:
            raise ValueError("mesh has orphan nodes")

        boundary_node = np.zeros(n, dtype=bool)
        boundary_node[boundary_dir.ravel()] = True

        e = nodes[boundary_dir[:, 1]] - nodes[boundary_dir[:, 0]]
        lengths = np.hypot(e[:, 0], e[:, 1])
        normals = np.column_stack([e[:, 1], -e[:, 0]]) / lengths[:, None]

        for arr in (nodes, triangles, boundary_node, boundary_dir, normals):
            arr.setflags(write=False)
        self.nodes = nodes
        self.triangles = triangles
        self.boundary_node = boundary_node
        self.boundary_edges = boundary_dir
        self.boundary_normals = normals
        self._edges_unique = uniq
        self._areas = areas

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    def triangle_areas(self) -> np.ndarray:
        return self._areas

    @cached_property
    def edge_lengths(self) -> np.ndarray:
        e = self.nodes[self._edges_unique[:, 1]] - self.nodes[self._edges_unique[:, 0]]
        return np.hypot(e[:, 0], e[:, 1])

    @property
    def h_max(self) -> float:
        return float(self.edge_lengths.max())

    @property
    def h_min(self) -> float:
        return float(self.edge_lengths.min())


def _signed_areas(nodes, triangles) -> np.ndarray:
    p = nodes[triangles]
    u = p[:, 1] - p[:, 0]
    v = p[:, 2] - p[:, 0]
    return 0.5 * (u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0])


def mesh_quality(mesh: Mesh) -> MeshQuality:
    """Per-triangle angle and edge-length extrema."""
    p = mesh.nodes[mesh.triangles]
    sides = np.stack([p[:, 2] - p[:, 1], p[:, 0] - p[:, 2], p[:, 1] - p[:, 0]])
    lens = np.hypot(sides[:, :, 0], sides[:, :, 1])  # (3, M), side k opposite vertex k
    a, b, c = lens[0], lens[1], lens[2]
    angles = np.empty_like(lens)
    for k, opp in enumerate((a, b, c)):
        adj1, adj2 = (b, c, a)[k], (c, a, b)[k]
        cosv = (adj1**2 + adj2**2 - opp**2) / (2.0 * adj1 * adj2)
        angles[k] = np.degrees(np.arccos(np.clip(cosv, -1.0, 1.0)))
    nonobtuse = np.all(angles <= 90.0 + 1e-9, axis=0)
    return MeshQuality(
        min_angle=float(angles.min()),
        max_angle=float(angles.max()),
        h_min=float(lens.min()),
        h_max=float(lens.max()),
        nonobtuse_fraction=float(np.count_nonzero(nonobtuse) / angles.shape[1]),
    )


def _ear_clip(vertices: np.ndarray) -> np.ndarray:
    """Triangulate a simple CCW polygon using only its own vertices."""
    diag = math.hypot(*(vertices.max(axis=0) - vertices.min(axis=0)))
    eps = 1e-12 * diag * diag
    idx = list(range(len(vertices)))
    tris = []

    def cross_at(a, b, c):
        u = vertices[b] - vertices[a]
        v = vertices[c] - vertices[b]
        return float(u[0] * v[1] - u[1] * v[0])

    def blocked(a, b, c, others):
        # Any remaining vertex inside or on the candidate ear blocks it.
        pa, pb, pc = vertices[a], vertices[b], vertices[c]
        for o in others:
            q = vertices[o]
            s1 = (pb[0] - pa[0]) * (q[1] - pa[1]) - (pb[1] - pa[1]) * (q[0] - pa[0])
            s2 = (pc[0] - pb[0]) * (q[1] - pb[1]) - (pc[1] - pb[1]) * (q[0] - pb[0])
            s3 = (pa[0] - pc[0]) * (q[1] - pc[1]) - (pa[1] - pc[1]) * (q[0] - pc[0])
            if s1 >= -eps and s2 >= -eps and s3 >= -eps:
                return True
        return False

    while len(idx) > 3:
        n = len(idx)
        for pos in range(n):
            a, b, c = idx[pos - 1], idx[pos], idx[(pos + 1) % n]
            if cross_at(a, b, c) <= eps:
                continue  # reflex or collinear corner, not an ear
            others = [o for o in idx if o not in (a, b, c)]
            if blocked(a, b, c, others):
                continue
            tris.append((a, b, c))
            del idx[pos]
            break
        else:
            raise ValueError("ear clipping failed: degenerate or collinear polygon")
    tris.append(tuple(idx))
    return np.array(tris, dtype=np.int64)


def _neighbor_means(nodes: np.ndarray, edges: np.ndarray):
    n = nodes.shape[0]
    acc = np.zeros_like(nodes)
    cnt = np.zeros(n)
    np.add.at(acc, edges[:, 0], nodes[edges[:, 1]])
    np.add.at(acc, edges[:, 1], nodes[edges[:, 0]])
    np.add.at(cnt, edges.ravel(), 1.0)
    return acc / cnt[:, None]


def _smooth(mesh: Mesh, h_cap: float, sweeps: int = SMOOTHING_SWEEPS) -> Mesh:
    """Laplacian relaxation of interior nodes, guarded against inversion
    and against stretching any edge beyond h_cap."""
    nodes = mesh.nodes.copy()
    interior = ~mesh.boundary_node
    if not np.any(interior):
        return mesh
    tris = mesh.triangles
    edges = mesh._edges_unique
    for _ in range(sweeps):
        target = _neighbor_means(nodes, edges)
        blend = 1.0
        for _ in range(3):
            cand = nodes.copy()
            cand[interior] += blend * (target[interior] - nodes[interior])
            areas = _signed_areas(cand, tris)
            e = cand[edges[:, 1]] - cand[edges[:, 0]]
            if areas.min() > 0.0 and np.hypot(e[:, 0], e[:, 1]).max() <= h_cap:
                nodes = cand
                break
            blend *= 0.5
        # all blends rejected: keep nodes as they are for this sweep
    return Mesh(nodes, tris)


def _disc_web(disc: Disc, target_h: float) -> Mesh:
    rings = max(2, math.ceil(_DISC_EDGE_FACTOR * disc.radius / target_h))
    if 6 * rings * rings > TRIANGLE_BUDGET:
        raise MeshBudgetError(
            f"disc mesh at target_h={target_h:g} needs {6 * rings * rings} "
            f"triangles, over the budget of {TRIANGLE_BUDGET}")
    cx, cy = disc.center
    chunks = [np.array([[cx, cy]])]
    for k in range(1, rings + 1):
        theta = 2.0 * np.pi * np.arange(6 * k) / (6 * k)
        r = disc.radius * (k / rings)
        chunks.append(np.column_stack([cx + r * np.cos(theta),
                                       cy + r * np.sin(theta)]))
    nodes = np.concatenate(chunks)

    def ring_start(k: int) -> int:
        return 1 + 3 * k * (k - 1) if k >= 1 else 0

    tris = []
    for k in range(1, rings + 1):
        ro, ri = ring_start(k), ring_start(k - 1)
        for s in range(6):
            def outer(j):
                return ro + (s * k + j) % (6 * k)

            def inner(j):
                if k == 1:
                    return 0
                return ri + (s * (k - 1) + j) % (6 * (k - 1))

            for j in range(k):
                tris.append((outer(j), outer(j + 1), inner(j)))
            for j in range(k - 1):
                tris.append((inner(j + 1), inner(j), outer(j + 1)))
    return Mesh(nodes, np.array(tris, dtype=np.int64))


def triangulate(domain: Domain, target_h: float) -> Mesh:
    """Mesh the domain with longest edge at most 1.5 * target_h.

    Polygons: ear clipping, uniform refinement until the bound holds, then
    guarded Laplacian smoothing.  Discs: structured concentric web with all
    boundary nodes exactly on the circle.
    """
    if not (target_h > 0.0 and math.isfinite(target_h)):
        raise ValueError("target_h must be positive and finite")
    if target_h >= 0.5 * domain_scale(domain):
        raise ValueError("target_h must be below half the bounding-box diagonal")
    if isinstance(domain, Disc):
        return _disc_web(domain, target_h)

    mesh = Mesh(domain.vertices, _ear_clip(domain.vertices))
    h_cap = 1.5 * target_h
    while mesh.h_max > h_cap:
        mesh = refine_uniform(mesh, domain)
    return _smooth(mesh, h_cap)


def refine_uniform(mesh: Mesh, domain: Domain) -> Mesh:
    """Split every triangle into 4 by edge midpoints.

    For disc domains, midpoints of boundary edges are projected onto the
    circle so refinement never flattens the boundary.
    """
    if 4 * mesh.n_triangles > TRIANGLE_BUDGET:
        raise MeshBudgetError(
            f"refining {mesh.n_triangles} triangles would exceed the budget "
            f"of {TRIANGLE_BUDGET}")
    tris = mesh.triangles
    m = mesh.n_triangles
    directed = np.concatenate([tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [2, 0]]])
    und = np.sort(directed, axis=1)
    uniq, inverse, counts = np.unique(und, axis=0, return_inverse=True,
                                      return_counts=True)
    inverse = inverse.reshape(-1)
    mids = 0.5 * (mesh.nodes[uniq[:, 0]] + mesh.nodes[uniq[:, 1]])

    if isinstance(domain, Disc):
        on_boundary = counts == 1
        c = np.array([domain.center.x1, domain.center.x2])
        rel = mids[on_boundary] - c
        norm = np.hypot(rel[:, 0], rel[:, 1])
        mids[on_boundary] = c + domain.radius * rel / norm[:, None]

    mid_idx = mesh.n_nodes + np.arange(uniq.shape[0])
    m01 = mid_idx[inverse[:m]]
    m12 = mid_idx[inverse[m:2 * m]]
    m20 = mid_idx[inverse[2 * m:]]
    a, b, cv = tris[:, 0], tris[:, 1], tris[:, 2]
    children = np.concatenate([
        np.column_stack([a, m01, m20]),
        np.column_stack([b, m12, m01]),
        np.column_stack([cv, m20, m12]),
        np.column_stack([m01, m12, m20]),
    ])
    return Mesh(np.concatenate([mesh.nodes, mids]), children)


def save_mesh_text(mesh: Mesh, path) -> None:
    """Plain-text dump: one node per line "x y boundary_flag", then one
    triangle per line "i j k"."""
    with open(path, "w", encoding="utf-8") as f:
        for (x, y), flag in zip(mesh.nodes, mesh.boundary_node):
            f.write(f"{float(x)!r} {float(y)!r} {int(flag)}\n")
        for i, j, k in mesh.triangles:
            f.write(f"{i} {j} {k}\n")
