"""Node sets, shifted coordinates, and convex-hull membership tests.

Basis nodes anchor every downstream computation: a query point is usable
only if it lies inside the convex hull of the node set. Membership is
resolved here, up front, by a small linear feasibility program instead of
letting the dual basis solver diverge on an infeasible query.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import linprog
from scipy.spatial.distance import cdist

from .errors import AugmentationWarning, ConfigError, DimensionError

#: Default absolute tolerance, in node coordinates, for hull membership.
DEFAULT_HULL_TOL = 1e-9

# Weight-space margin separating a strictly positive convex combination
# (interior) from one that is forced to use a zero weight (boundary).
_WEIGHT_MARGIN = 1e-9

# Augmentation candidates closer than this to an existing node are duplicates.
_DUPLICATE_TOL = 1e-12

# 1e-10 is the tightest tolerance the HiGHS backend accepts.
_LP_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}


class HullLocation(Enum):
    """Classification of a point against the convex hull of a node set."""

    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def as_point(x, d: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a finite 1-D float vector, optionally checking length."""
    p = np.atleast_1d(np.asarray(x, dtype=float))
    if p.ndim != 1 or p.size < 1:
        raise DimensionError(f"point must be a 1-D vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise DimensionError("point has non-finite entries")
    if d is not None and p.size != d:
        raise DimensionError(f"point has dimension {p.size}, expected {d}")
    return p


@dataclass(frozen=True, eq=False)
class NodeSet:
    """Ordered basis nodes spanning the approximation domain.

    Parameters
    ----------
    nodes : (n, d) array_like
        Node coordinates, one row per node. At least ``d + 1`` nodes are
        required so the hull can have nonempty interior.
    box : (2, d) array_like, optional
        When the hull is known to be the axis-aligned box
        ``[box[0], box[1]]`` (tensor grids, or grids augmented only with
        in-box points), membership tests use a direct bound check instead
        of the feasibility LP. Leave ``None`` for general node sets.

    Attributes
    ----------
    degenerate : bool
        True when the nodes do not affinely span R^d (hull has empty
        interior). Membership is then resolved within the affine span.
    """

    nodes: np.ndarray
    box: np.ndarray | None = None
    degenerate: bool = False

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 2:
            raise DimensionError(f"nodes must be a 2-D array, got shape {nodes.shape}")
        n, d = nodes.shape
        if d < 1:
            raise DimensionError("node dimension must be at least 1")
        if n < d + 1:
            raise DimensionError(f"need at least d+1 = {d + 1} nodes, got {n}")
        if not np.all(np.isfinite(nodes)):
            raise DimensionError("nodes contain non-finite values")
        nodes = nodes.copy()
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        if self.box is not None:
            box = np.asarray(self.box, dtype=float)
            if box.shape != (2, d):
                raise DimensionError(f"box must have shape (2, {d}), got {box.shape}")
            if np.any(box[0] > box[1]):
                raise DimensionError("box lower bounds exceed upper bounds")
            box = box.copy()
            box.setflags(write=False)
            object.__setattr__(self, "box", box)
        rank = np.linalg.matrix_rank(nodes - nodes.mean(axis=0))
        object.__setattr__(self, "degenerate", bool(rank < d))

    @property
    def n(self) -> int:
        return self.nodes.shape[0]

    @property
    def d(self) -> int:
        return self.nodes.shape[1]


@dataclass(frozen=True, eq=False)
class ShiftedNodes:
    """Node coordinates relative to a query point.

    Column ``i`` of ``tilde`` is ``nodes[i] - origin``; this shifted frame
    is what keeps the exponentials in the basis solver well-scaled.
    """

    tilde: np.ndarray
    origin: np.ndarray

    @property
    def n(self) -> int:
        return self.tilde.shape[1]

    @property
    def d(self) -> int:
        return self.tilde.shape[0]


def shift(nodes: NodeSet, x) -> ShiftedNodes:
    """Express ``nodes`` in the coordinate system with origin at ``x``."""
    x = as_point(x, nodes.d)
    tilde = np.ascontiguousarray((nodes.nodes - x).T)
    return ShiftedNodes(tilde=tilde, origin=x)


def hull_weights(nodes: NodeSet, x, tol: float = DEFAULT_HULL_TOL):
    """Classify ``x`` against ``Conv(nodes)`` and return certifying weights.

    Solves the linear program

        max s   s.t.   sum(w) = 1,   |nodes^T w - x| <= tol per coordinate,
                       w_i >= s

    The optimum ``s*`` is the best achievable minimum weight: ``s* > 0``
    certifies a strictly positive convex combination (interior), ``s* = 0``
    a combination that needs a zero weight (boundary), and ``s* < 0`` means
    ``x`` is outside. Infeasibility means ``x`` is farther than ``tol``
    from the affine span of the nodes, which is also outside.

    Returns
    -------
    location : HullLocation
    weights : (n,) ndarray or None
        Convex weights with ``sum(w) = 1`` and reproduction error at most
        ``tol``; ``None`` when ``x`` is outside.
    """
    x = as_point(x, nodes.d)
    if not tol > 0:
        raise ConfigError(f"hull tolerance must be positive, got {tol}")
    n, d = nodes.n, nodes.d
    pts = nodes.nodes
    # The optimizer saturates the reproduction slack; shrink it slightly so
    # returned certificates satisfy the public <= tol bound despite LP
    # arithmetic rounding.
    slack = tol * (1.0 - 1e-6)
    # Variables: [w_1 .. w_n, s]; maximize s.
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_eq = np.concatenate([np.ones(n), [0.0]])[None, :]
    b_eq = np.ones(1)
    a_ub = np.vstack(
        [
            np.hstack([pts.T, np.zeros((d, 1))]),
            np.hstack([-pts.T, np.zeros((d, 1))]),
            np.hstack([-np.eye(n), np.ones((n, 1))]),
        ]
    )
    b_ub = np.concatenate([x + slack, slack - x, np.zeros(n)])
    bounds = [(None, None)] * n + [(None, 1.0)]
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=bounds,
        method="highs",
        options=_LP_OPTIONS,
    )
    if not res.success:
        return HullLocation.OUTSIDE, None
    s = float(res.x[-1])
    w = res.x[:n]
    if s > _WEIGHT_MARGIN:
        return HullLocation.INTERIOR, w
    if s >= -_WEIGHT_MARGIN:
        return HullLocation.BOUNDARY, w
    return HullLocation.OUTSIDE, None


def in_hull(nodes: NodeSet, x, tol: float = DEFAULT_HULL_TOL) -> HullLocation:
    """Locate ``x`` relative to ``Conv(nodes)`` within absolute tolerance ``tol``."""
    x = as_point(x, nodes.d)
    if not tol > 0:
        raise ConfigError(f"hull tolerance must be positive, got {tol}")
    if nodes.box is not None:
        lo, hi = nodes.box
        if np.any(x < lo - tol) or np.any(x > hi + tol):
            return HullLocation.OUTSIDE
        if np.all(x > lo + tol) and np.all(x < hi - tol):
            return HullLocation.INTERIOR
        return HullLocation.BOUNDARY
    location, _ = hull_weights(nodes, x, tol)
    return location


def grid_nodes(bounds, counts) -> NodeSet:
    """Tensor-product grid of nodes, endpoints included on every axis.

    Parameters
    ----------
    bounds : sequence of (low, high)
        Domain extent per dimension; ``low < high`` required.
    counts : sequence of int
        Nodes per axis; at least 2, so the hull spans every axis.

    Returns
    -------
    NodeSet
        ``prod(counts)`` nodes in row-major order (first axis slowest),
        with the hull recorded as an axis-aligned box.
    """
    bounds = list(bounds)
    counts = list(counts)
    if len(bounds) == 0 or len(bounds) != len(counts):
        raise ConfigError(
            f"bounds and counts must be non-empty and of equal length, "
            f"got {len(bounds)} and {len(counts)}"
        )
    axes = []
    for i, ((lo, hi), cnt) in enumerate(zip(bounds, counts)):
        lo, hi = float(lo), float(hi)
        cnt = int(cnt)
        if not lo < hi:
            raise ConfigError(f"axis {i}: require low < high, got ({lo}, {hi})")
        if cnt < 2:
            raise ConfigError(
                f"axis {i}: need at least 2 nodes, got {cnt} "
                "(hull would be degenerate along that axis)"
            )
        axes.append(np.linspace(lo, hi, cnt))
    mesh = np.meshgrid(*axes, indexing="ij")
    nodes = np.stack([m.ravel() for m in mesh], axis=-1)
    box = np.array([[float(lo) for lo, _ in bounds], [float(hi) for _, hi in bounds]])
    return NodeSet(nodes, box=box)


def augment_nodes(grid: NodeSet, data_points, k: int, seed: int = 0) -> NodeSet:
    """Extend ``grid`` with ``k`` data points chosen by farthest-point subsampling.

    Greedy maximin: each pick maximizes the minimum distance to all nodes
    chosen so far (grid included), spreading the extra nodes over the region
    the data actually visits. ``seed`` fixes the candidate scan order used to
    break exact distance ties; the selection is fully deterministic for a
    given seed. Candidates within 1e-12 of an existing node are skipped and
    replaced by the next-best candidate; if fewer than ``k`` distinct
    candidates exist, the result is shorter and an AugmentationWarning is
    issued.
    """
    pts = np.asarray(data_points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] != grid.d:
        raise DimensionError(
            f"data points must have shape (m, {grid.d}), got {pts.shape}"
        )
    if not np.all(np.isfinite(pts)):
        raise DimensionError("data points contain non-finite values")
    if k < 0 or k > len(pts):
        raise ConfigError(f"k must be in [0, {len(pts)}], got {k}")
    if k == 0:
        return grid

    order = np.random.default_rng(seed).permutation(len(pts))
    cand = pts[order]
    min_dist = cdist(cand, grid.nodes).min(axis=1)

    chosen: list[np.ndarray] = []
    for _ in range(k):
        j = int(np.argmax(min_dist))
        if min_dist[j] <= _DUPLICATE_TOL:
            break
        chosen.append(cand[j])
        dist_new = np.linalg.norm(cand - cand[j], axis=1)
        min_dist = np.minimum(min_dist, dist_new)
        min_dist[j] = -np.inf
    if len(chosen) < k:
        warnings.warn(
            f"requested {k} augmentation nodes but only {len(chosen)} distinct "
            "candidates were available",
            AugmentationWarning,
            stacklevel=2,
        )
    if not chosen:
        return grid

    extra = np.vstack(chosen)
    box = None
    if grid.box is not None and np.all(extra >= grid.box[0]) and np.all(extra <= grid.box[1]):
        box = grid.box
    return NodeSet(np.vstack([grid.nodes, extra]), box=box)
