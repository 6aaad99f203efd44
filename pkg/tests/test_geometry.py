import numpy as np
import pytest

from mortonvox.geometry import (Frame, LineSet, TriMesh, bounding_grid,
                                intersect_ray_parallelogram, round_half_up)


def test_round_half_up_ties():
    np.testing.assert_array_equal(round_half_up([1.4, -0.6, 2.5, -0.5, 0.5, -1.5]),
                                  [1, -1, 3, 0, 1, -1])


class TestBoundingGrid:
    def test_single_point_padded(self):
        g = bounding_grid(np.zeros((1, 3)), 1.0)
        np.testing.assert_array_equal(g.min_corner, [0, 0, 0])
        np.testing.assert_array_equal(g.dims, [1, 1, 1])

    def test_segment(self):
        g = bounding_grid(LineSet([[0, 0, 0], [3, 0, 0]], [[0, 1]]), 1.0)
        np.testing.assert_array_equal(g.dims, [3, 1, 1])

    def test_cube(self):
        pts = np.array([[0, 0, 0], [2, 2, 2]], dtype=float)
        g = bounding_grid(pts, (0.5, 0.5, 0.5))
        np.testing.assert_array_equal(g.dims, [4, 4, 4])

    def test_empty(self):
        with pytest.raises(ValueError):
            bounding_grid(np.empty((0, 3)), 1.0)

    def test_bad_sigma(self):
        with pytest.raises(ValueError):
            bounding_grid(np.zeros((1, 3)), (1.0, 0.0, 1.0))


class TestSolver:
    def test_worked_example(self):
        r, s, t = intersect_ray_parallelogram((0, 0, 0), (0, 0, 1), (-.5, -.5, .5),
                                              (1, 0, 0), (0, 1, 0))
        assert (r, s, t) == pytest.approx((0.5, 0.5, 0.5))

    def test_parallel(self):
        assert intersect_ray_parallelogram((0, 0, 0), (1, 0, 0), (0, 0, 1),
                                           (1, 0, 0), (0, 1, 0)) is None

    def test_segment_too_short(self):
        assert intersect_ray_parallelogram((0, 0, 0), (0, 0, 0.4), (-.5, -.5, .5),
                                           (1, 0, 0), (0, 1, 0)) is None

    def test_random_pairs_agree_with_generic_solve(self, rng):
        n = 0
        for _ in range(1000):
            p, d, c, u, v = rng.normal(size=(5, 3))
            A = np.column_stack([d, -u, -v])
            if abs(np.linalg.det(A)) < 1e-3:
                continue
            ref = np.linalg.solve(A, c - p)
            got = intersect_ray_parallelogram(p, d, c, u, v)
            inside = np.all((ref >= 0) & (ref <= 1))
            if got is None:
                assert not inside or np.min(np.abs(np.concatenate([ref, ref - 1]))) < 1e-9
                continue
            n += 1
            np.testing.assert_allclose(got, ref, atol=1e-12, rtol=1e-9)
            r, s, t = got
            np.testing.assert_allclose(p + r * d, c + s * u + t * v, atol=1e-9)
        assert n > 5


class TestTypes:
    def test_frame_identity(self):
        f = Frame()
        assert f.is_identity
        pts = np.random.default_rng(0).normal(size=(4, 3))
        assert f.to_local(pts) is pts

    def test_frame_roundtrip(self, rng):
        f = Frame(origin=(1, 2, 3), u_axis=(1, 1, 0), v_axis=(0, 0, 2))
        assert not f.is_identity
        np.testing.assert_allclose(f.basis @ f.basis.T, np.eye(3), atol=1e-15)
        pts = rng.normal(size=(10, 3))
        np.testing.assert_allclose(f.to_world(f.to_local(pts)), pts, atol=1e-12)

    def test_frame_parallel_axes(self):
        with pytest.raises(ValueError):
            Frame(u_axis=(1, 0, 0), v_axis=(2, 0, 0))

    def test_lineset_validation(self):
        with pytest.raises(ValueError):
            LineSet([[0, 0, 0], [1, 0, 0]], [[0, 2]])
        with pytest.raises(ValueError):
            LineSet([[0, 0, 0], [0, 0, 0]], [[0, 1]])

    def test_trimesh_validated_drops_degenerate(self):
        m = TriMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [2, 0, 0]], [[0, 1, 2], [0, 1, 3]])
        assert len(m.validated().faces) == 1
