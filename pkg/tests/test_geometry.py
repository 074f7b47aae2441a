"""Planar domain primitives: distances, containment, convexity, probes.

The distance tests lean on a brute-force oracle: sample the boundary
densely by arclength and take the minimum pointwise distance.  With a
million samples the oracle is good to well below 1e-5, so agreement at
that level certifies the analytic segment projections independently.
"""

import math

import numpy as np
import pytest

from panharmonic.geometry import (Disc, Point2, Polygon, ProbeDisc,
                                  boundary_distance_batch, contains_point,
                                  disc_mean_distance, distance_to_boundary,
                                  domain_from_dict, domain_scale,
                                  domain_to_dict, dump_domain,
                                  is_convex_polygon, l_shape, load_domain,
                                  point_segment_distance, probe_fits,
                                  regular_polygon, unit_disc, unit_square)

SQRT2 = math.sqrt(2.0)


def _boundary_samples(polygon: Polygon, n: int) -> np.ndarray:
    """n points spread along the boundary, density proportional to length."""
    v = polygon.vertices
    e = np.roll(v, -1, axis=0) - v
    lengths = np.hypot(e[:, 0], e[:, 1])
    counts = np.maximum((n * lengths / lengths.sum()).astype(int), 2)
    parts = [a + np.linspace(0.0, 1.0, c)[:, None] * d
             for a, d, c in zip(v, e, counts)]
    return np.vstack(parts)


def _oracle_distance(polygon: Polygon, p, samples) -> float:
    return float(np.hypot(*(samples - np.asarray(p, float)).T).min())


class TestDistance:
    def test_square_hand_values(self, unit_square):
        assert distance_to_boundary(unit_square, (0.5, 0.5)) == pytest.approx(0.5)
        assert distance_to_boundary(unit_square, (0.25, 0.5)) == pytest.approx(0.25)
        assert distance_to_boundary(unit_square, (1.0, 0.3)) == 0.0

    def test_l_shape_hand_values(self, l_shape):
        # Nearest feature of (0.8, 0.8) is the reentrant corner itself.
        assert distance_to_boundary(l_shape, (0.8, 0.8)) == pytest.approx(
            0.2 * SQRT2, rel=1e-14)
        # (1.2, 0.8) sits in the bottom arm; the top edge of that arm wins.
        assert distance_to_boundary(l_shape, (1.2, 0.8)) == pytest.approx(
            0.2, rel=1e-13)

    def test_against_brute_force_oracle(self, l_shape, unit_square):
        for polygon, probes in (
            (l_shape, [(0.8, 0.8), (1.2, 0.8), (0.1, 1.9), (0.5, 0.5)]),
            (unit_square, [(0.5, 0.5), (0.03, 0.9), (0.4, 0.08)]),
        ):
            samples = _boundary_samples(polygon, 1_000_000)
            for p in probes:
                assert distance_to_boundary(polygon, p) == pytest.approx(
                    _oracle_distance(polygon, p, samples), abs=1e-5)

    def test_corner_probes(self, unit_square, l_shape):
        eps = 1e-3
        # Convex corner: d = eps * sin(theta/2) for a probe on the bisector.
        p = (eps / SQRT2, eps / SQRT2)
        assert distance_to_boundary(unit_square, p) == pytest.approx(
            eps * math.sin(math.pi / 4), rel=1e-9)
        # Reflex corner: the corner point itself is nearest, d = eps.
        q = (1.0 - eps / SQRT2, 1.0 - eps / SQRT2)
        assert distance_to_boundary(l_shape, q) == pytest.approx(eps, rel=1e-9)

    def test_lipschitz(self, l_shape):
        rng = np.random.default_rng(42)
        pts = []
        while len(pts) < 40:
            p = rng.uniform(0.0, 2.0, size=2)
            if contains_point(l_shape, p):
                pts.append(p)
        for a, b in zip(pts[:-1], pts[1:]):
            gap = abs(distance_to_boundary(l_shape, a)
                      - distance_to_boundary(l_shape, b))
            assert gap <= np.hypot(*(a - b)) * (1 + 1e-12)

    def test_scaling_covariance(self):
        small = regular_polygon(5, radius=1.0)
        big = regular_polygon(5, radius=3.0)
        for p in ((0.2, 0.1), (0.0, 0.0), (-0.3, 0.4)):
            d1 = distance_to_boundary(small, p)
            d3 = distance_to_boundary(big, tuple(3.0 * np.asarray(p)))
            assert d3 == pytest.approx(3.0 * d1, rel=1e-12)

    def test_disc_distance(self, unit_disc):
        assert distance_to_boundary(unit_disc, (0.0, 0.0)) == 1.0
        assert distance_to_boundary(unit_disc, (0.6, 0.0)) == pytest.approx(0.4)
        with pytest.raises(ValueError):
            distance_to_boundary(unit_disc, (1.5, 0.0))

    def test_exterior_point_rejected(self, unit_square):
        with pytest.raises(ValueError):
            distance_to_boundary(unit_square, (3.0, 3.0))

    def test_batch_matches_scalar(self, l_shape):
        pts = np.array([[0.8, 0.8], [1.2, 0.8], [0.5, 1.5]])
        batch = boundary_distance_batch(l_shape, pts)
        for p, d in zip(pts, batch):
            assert d == pytest.approx(distance_to_boundary(l_shape, p), rel=1e-14)


class TestContainment:
    def test_open_domain(self, unit_square):
        assert contains_point(unit_square, (0.5, 0.5))
        assert not contains_point(unit_square, (0.0, 0.5))  # boundary excluded
        assert not contains_point(unit_square, (-0.1, 0.5))

    def test_l_shape_notch(self, l_shape):
        assert contains_point(l_shape, (0.5, 0.5))
        assert contains_point(l_shape, (1.5, 0.5))
        assert not contains_point(l_shape, (1.5, 1.5))  # inside the notch

    def test_disc(self, unit_disc):
        assert contains_point(unit_disc, (0.9, 0.0))
        assert not contains_point(unit_disc, (1.0, 0.0))


class TestPolygonInvariants:
    def test_orientation_normalized(self):
        cw = Polygon([(0, 0), (0, 1), (1, 1), (1, 0)])
        assert cw.signed_area() == pytest.approx(1.0)

    def test_rejects_degenerate(self):
        with pytest.raises(ValueError):
            Polygon([(0, 0), (1, 0)])
        with pytest.raises(ValueError):
            Polygon([(0, 0), (1, 0), (1, 0), (0, 1)])  # coincident
        with pytest.raises(ValueError):
            Polygon([(0, 0), (1, 1), (1, 0), (0, 1)])  # bowtie
        with pytest.raises(ValueError):
            Polygon([(0, 0), (1, 0), (2, 0)])  # zero area

    def test_angles_and_reflex(self, l_shape, unit_square):
        for i in range(4):
            assert unit_square.interior_angle(i) == pytest.approx(math.pi / 2)
        assert l_shape.reflex_vertices() == [3]
        assert l_shape.interior_angle(3) == pytest.approx(1.5 * math.pi)

    def test_area_and_perimeter(self, l_shape):
        assert l_shape.signed_area() == pytest.approx(3.0)
        assert l_shape.perimeter() == pytest.approx(8.0)

    def test_convexity(self, unit_square, l_shape, unit_disc):
        assert is_convex_polygon(unit_square)
        assert not is_convex_polygon(l_shape)
        assert is_convex_polygon(unit_disc)
        assert is_convex_polygon(regular_polygon(7))
        # A collinear vertex keeps the polygon convex.
        assert is_convex_polygon(
            Polygon([(0, 0), (0.5, 0.0), (1, 0), (1, 1), (0, 1)]))

    def test_domain_scale(self, unit_square, unit_disc):
        assert domain_scale(unit_square) == pytest.approx(SQRT2)
        assert domain_scale(unit_disc) == pytest.approx(2.0 * SQRT2)


class TestProbes:
    def test_probe_fits(self, l_shape):
        assert probe_fits(l_shape, ProbeDisc(Point2(0.5, 0.5), 0.3))
        assert not probe_fits(l_shape, ProbeDisc(Point2(0.5, 0.5), 0.6))
        assert not probe_fits(l_shape, ProbeDisc(Point2(1.5, 1.5), 0.1))

    def test_centered_disc_mean_closed_form(self, unit_disc):
        # Mean of (1 - |x|) over a centered probe of radius rho: 1 - 2 rho/3.
        for rho in (0.2, 0.5, 0.9):
            got = disc_mean_distance(unit_disc, ProbeDisc(Point2(0.0, 0.0), rho))
            assert got == pytest.approx(1.0 - 2.0 * rho / 3.0, rel=1e-12)

    def test_mean_against_monte_carlo(self, unit_square):
        probe = ProbeDisc(Point2(0.3, 0.45), 0.2)
        rng = np.random.default_rng(1905)
        n = 1_000_000
        r = probe.radius * np.sqrt(rng.random(n))
        th = rng.random(n) * 2 * math.pi
        pts = np.column_stack([probe.center.x1 + r * np.cos(th),
                               probe.center.x2 + r * np.sin(th)])
        mc = float(boundary_distance_batch(unit_square, pts).mean())
        got = disc_mean_distance(unit_square, probe)
        assert got == pytest.approx(mc, abs=5e-4)

    def test_quadrature_order_converges(self, l_shape):
        probe = ProbeDisc(Point2(0.8, 0.8), 0.1)
        coarse = disc_mean_distance(l_shape, probe, radial_order=4,
                                    angular_order=8)
        fine = disc_mean_distance(l_shape, probe, radial_order=48,
                                  angular_order=192)
        default = disc_mean_distance(l_shape, probe)
        assert abs(default - fine) < abs(coarse - fine) + 1e-12
        assert default == pytest.approx(fine, abs=2e-5)


class TestSerialization:
    def test_polygon_round_trip(self, tmp_path, l_shape):
        path = tmp_path / "dom.json"
        dump_domain(l_shape, path)
        back = load_domain(path)
        assert isinstance(back, Polygon)
        assert np.array_equal(back.vertices, l_shape.vertices)

    def test_disc_round_trip(self, tmp_path):
        d = Disc(Point2(0.5, -1.0), 2.5)
        path = tmp_path / "disc.json"
        dump_domain(d, path)
        back = load_domain(path)
        assert isinstance(back, Disc)
        assert back.center == d.center and back.radius == d.radius

    def test_dict_shape(self, unit_disc):
        data = domain_to_dict(unit_disc)
        assert data["type"] == "disc"
        assert domain_from_dict(data).radius == 1.0
        with pytest.raises((ValueError, KeyError)):
            domain_from_dict({"type": "torus"})


def test_point_segment_distance():
    assert point_segment_distance((0.5, 1.0), (0, 0), (1, 0)) == pytest.approx(1.0)
    assert point_segment_distance((2.0, 0.0), (0, 0), (1, 0)) == pytest.approx(1.0)
    assert point_segment_distance((0.3, 0.0), (0, 0), (1, 0)) == 0.0


def test_point2_helpers():
    p = Point2(1.5, -2.0)
    assert p.x1 == 1.5 and p.x2 == -2.0
    assert np.array_equal(p.as_array(), np.array([1.5, -2.0]))
