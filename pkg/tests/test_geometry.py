import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxentfit import (
    AugmentationWarning,
    ConfigError,
    DimensionError,
    HullLocation,
    NodeSet,
    augment_nodes,
    grid_nodes,
    hull_weights,
    in_hull,
    shift,
)


def nodes_1d(*xs):
    return NodeSet(np.asarray(xs, dtype=float)[:, None])


TRIANGLE = NodeSet(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))


class TestShift:
    def test_zero_shift(self):
        s = shift(nodes_1d(0.0, 1.0), [0.0])
        np.testing.assert_array_equal(s.tilde, [[0.0, 1.0]])

    def test_direct_subtraction_1d(self):
        s = shift(nodes_1d(0.0, 1.0), [0.25])
        np.testing.assert_allclose(s.tilde, [[-0.25, 0.75]])

    def test_direct_subtraction_2d(self):
        s = shift(TRIANGLE, [0.25, 0.25])
        expected = np.array([[-0.25, 0.75, -0.25], [-0.25, -0.25, 0.75]])
        np.testing.assert_allclose(s.tilde, expected)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            shift(TRIANGLE, [0.5])

    @given(
        st.lists(
            st.floats(-1e6, 1e6).filter(lambda v: abs(v) > 1e-12 or v == 0.0),
            min_size=2,
            max_size=6,
        ),
        st.floats(-1e6, 1e6),
    )
    @settings(max_examples=50, deadline=None)
    def test_shift_unshift_roundtrip(self, xs, origin):
        # Exact to one ulp per component: a single subtraction then addition.
        if len(set(xs)) < 2:
            xs = list(xs) + [max(xs) + 1.0]
        ns = nodes_1d(*xs)
        s = shift(ns, [origin])
        back = s.tilde[0] + origin
        np.testing.assert_allclose(back, ns.nodes[:, 0], rtol=0, atol=np.spacing(
            np.abs(ns.nodes[:, 0]) + abs(origin)
        ).max())


class TestNodeSet:
    def test_requires_d_plus_one(self):
        with pytest.raises(DimensionError):
            NodeSet(np.array([[0.0, 0.0], [1.0, 1.0]]))

    def test_rejects_nonfinite(self):
        with pytest.raises(DimensionError):
            NodeSet(np.array([[0.0], [np.nan]]))

    def test_degenerate_flag(self):
        collinear = NodeSet(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]))
        assert collinear.degenerate
        assert not TRIANGLE.degenerate


class TestInHull:
    def test_midpoint_interior(self):
        assert in_hull(nodes_1d(0.0, 1.0), [0.5]) is HullLocation.INTERIOR

    def test_vertex_boundary(self):
        assert in_hull(nodes_1d(0.0, 1.0), [1.0]) is HullLocation.BOUNDARY

    def test_outside_simplex(self):
        assert in_hull(TRIANGLE, [1.0, 1.0]) is HullLocation.OUTSIDE

    def test_tol_must_be_positive(self):
        with pytest.raises(ConfigError):
            in_hull(TRIANGLE, [0.2, 0.2], tol=0.0)

    def test_interior_certificate(self):
        rng = np.random.default_rng(7)
        nodes = NodeSet(rng.uniform(-1, 1, (12, 3)))
        tol = 1e-9
        for _ in range(20):
            w = rng.dirichlet(np.ones(12))
            x = 0.9 * (w @ nodes.nodes) + 0.1 * nodes.nodes.mean(axis=0)
            location, cert = hull_weights(nodes, x, tol)
            assert location is HullLocation.INTERIOR
            assert abs(cert.sum() - 1.0) <= 1e-9
            assert np.abs(nodes.nodes.T @ cert - x).max() <= tol

    def test_degenerate_set_solved_in_affine_span(self):
        collinear = NodeSet(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]))
        assert in_hull(collinear, [0.5, 0.5]) is HullLocation.INTERIOR
        # off the affine span by more than tol
        assert in_hull(collinear, [0.5, 0.6]) is HullLocation.OUTSIDE
        # beyond the segment but on the span
        assert in_hull(collinear, [3.0, 3.0]) is HullLocation.OUTSIDE

    def test_box_fast_path_matches_lp(self):
        grid = grid_nodes([(0.0, 1.0), (0.0, 2.0)], [4, 4])
        general = NodeSet(grid.nodes)  # same hull, no box metadata
        assert general.box is None
        rng = np.random.default_rng(3)
        queries = [
            rng.uniform(0.05, 0.95, 2) * [1.0, 2.0] for _ in range(10)
        ] + [
            [0.0, 1.0],
            [1.0, 2.0],
            [0.5, 0.0],
            [1.2, 1.0],
            [-0.1, 0.5],
            [0.5, 2.4],
        ]
        for q in queries:
            assert in_hull(grid, q) is in_hull(general, q), q


class TestGridNodes:
    def test_sine_grid(self):
        g = grid_nodes([(0.0, 1.0)], [10])
        assert g.n == 10
        np.testing.assert_allclose(g.nodes[:, 0], np.linspace(0, 1, 10))

    def test_two_d_counts(self):
        g = grid_nodes([(0.0, 1.0), (0.0, 1.0)], [8, 8])
        assert g.n == 64

    def test_endpoints_only(self):
        g = grid_nodes([(0.0, 2.0)], [2])
        np.testing.assert_array_equal(g.nodes[:, 0], [0.0, 2.0])

    def test_count_below_two_rejected(self):
        with pytest.raises(ConfigError):
            grid_nodes([(0.0, 1.0), (0.0, 1.0)], [4, 1])

    def test_bad_bounds_rejected(self):
        with pytest.raises(ConfigError):
            grid_nodes([(1.0, 0.0)], [4])

    def test_ordering_is_stable(self):
        a = grid_nodes([(0.0, 1.0), (-1.0, 1.0)], [3, 4])
        b = grid_nodes([(0.0, 1.0), (-1.0, 1.0)], [3, 4])
        np.testing.assert_array_equal(a.nodes, b.nodes)

    def test_interior_and_outside_classification(self):
        g = grid_nodes([(0.0, 1.0), (0.0, 1.0)], [5, 5])
        rng = np.random.default_rng(11)
        for _ in range(20):
            x = rng.uniform(0.01, 0.99, 2)
            assert in_hull(g, x) is HullLocation.INTERIOR
        assert in_hull(g, [0.5, 1.0 + 1e-6]) is HullLocation.OUTSIDE


class TestAugmentNodes:
    def test_zero_k_is_identity(self):
        g = grid_nodes([(0.0, 1.0)], [4])
        assert augment_nodes(g, np.array([[0.3], [0.7]]), 0) is g

    def test_counts_match_lorenz_style(self):
        g = grid_nodes([(0.0, 1.0), (0.0, 1.0), (0.0, 1.0)], [5, 5, 5])
        rng = np.random.default_rng(0)
        data = rng.uniform(0.05, 0.95, (500, 3))
        out = augment_nodes(g, data, 100, seed=0)
        assert out.n == 125 + 100
        assert out.box is not None  # additions inside the box keep the fast path

    def test_duplicate_skipped_with_warning(self):
        g = grid_nodes([(0.0, 1.0)], [2])
        data = np.array([[0.5], [0.5 + 1e-15]])
        with pytest.warns(AugmentationWarning):
            out = augment_nodes(g, data, 2, seed=0)
        np.testing.assert_allclose(np.sort(out.nodes[:, 0]), [0.0, 0.5, 1.0])

    def test_deterministic_under_seed(self):
        g = grid_nodes([(0.0, 1.0), (0.0, 1.0)], [3, 3])
        rng = np.random.default_rng(5)
        data = rng.uniform(0, 1, (40, 2))
        a = augment_nodes(g, data, 10, seed=42)
        b = augment_nodes(g, data, 10, seed=42)
        np.testing.assert_array_equal(a.nodes, b.nodes)

    def test_maximin_prefers_spread(self):
        g = grid_nodes([(0.0, 1.0)], [2])
        data = np.array([[0.49], [0.5], [0.51]])
        out = augment_nodes(g, data, 1, seed=0)
        assert out.nodes[-1, 0] == 0.5  # farthest from both endpoints

    def test_k_exceeding_candidates_rejected(self):
        g = grid_nodes([(0.0, 1.0)], [2])
        with pytest.raises(ConfigError):
            augment_nodes(g, np.array([[0.5]]), 2)

    def test_outside_point_drops_box(self):
        g = grid_nodes([(0.0, 1.0)], [2])
        out = augment_nodes(g, np.array([[1.5]]), 1)
        assert out.box is None
        assert in_hull(out, [1.2]) is HullLocation.INTERIOR
