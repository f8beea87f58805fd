"""
Space Generators
================

Every space family the laboratory needs: graph metrics (tripod, cycles),
seeded sphere and gaussian samples, lp point sets and l2-products.
Generated spaces carry a curvature provenance tag used by the verification
suites to decide whether a theorem's hypothesis holds.
"""

import logging
import math
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse.csgraph import floyd_warshall

from .errors import DimensionMismatch, DisconnectedGraph, InvalidMatrix, SizeOverflow
from .metric_core import (
    FLAT,
    NONNEGATIVE,
    UNKNOWN,
    FiniteMetricSpace,
    GeometricModel,
    check_p,
)
from ..utils.seeding import make_rng

logger = logging.getLogger(__name__)


def graph_metric(n: int, edges: Iterable[Tuple[int, int, float]],
                 labels: Optional[Sequence[str]] = None, source: str = "graph") -> FiniteMetricSpace:
    """Shortest-path metric of an undirected weighted graph (Floyd-Warshall)."""
    if n < 1:
        raise InvalidMatrix("A graph needs at least one vertex")
    adj = np.full((n, n), np.inf)
    np.fill_diagonal(adj, 0.0)
    for i, j, w in edges:
        i, j, w = int(i), int(j), float(w)
        if not (0 <= i < n and 0 <= j < n):
            raise InvalidMatrix(f"Edge ({i},{j}) out of range for {n} vertices")
        if not (w > 0 and math.isfinite(w)):
            raise InvalidMatrix(f"Edge ({i},{j}) needs a positive finite weight, got {w}")
        if i == j:
            continue
        # parallel edges: keep the lightest
        adj[i, j] = adj[j, i] = min(adj[i, j], w)

    dist = floyd_warshall(adj, directed=False)
    if not np.all(np.isfinite(dist)):
        i, j = (int(v) for v in np.argwhere(~np.isfinite(dist))[0])
        raise DisconnectedGraph(f"DisconnectedGraph: no path between {i} and {j}")
    dist = np.minimum(dist, dist.T)
    np.fill_diagonal(dist, 0.0)
    return FiniteMetricSpace(dist=dist, labels=labels, curvature=UNKNOWN, source=source)


def tripod(leg: float = 1.0) -> FiniteMetricSpace:
    """Star K_{1,3}: center 0, leaves 1..3. Fails Sturm's inequality."""
    return graph_metric(4, [(0, 1, leg), (0, 2, leg), (0, 3, leg)],
                        labels=["o", "a", "b", "c"], source="tripod")


def path_graph(n: int) -> FiniteMetricSpace:
    return graph_metric(n, [(i, i + 1, 1.0) for i in range(n - 1)], source=f"path{n}")


def cycle(n: int) -> FiniteMetricSpace:
    if n < 3:
        raise InvalidMatrix("A cycle needs at least 3 vertices")
    return graph_metric(n, [(i, (i + 1) % n, 1.0) for i in range(n)], source=f"cycle{n}")


def lp_point_space(coords, p: float = 2.0, source: Optional[str] = None) -> FiniteMetricSpace:
    """Points of R^m under the lp norm; p = math.inf (or "inf") is the max norm."""
    if isinstance(p, str) and p.lower() in ("inf", "infinity"):
        p = math.inf
    p = check_p(p)
    rows = [list(map(float, c)) for c in coords]
    if not rows:
        raise DimensionMismatch("At least one point is required")
    dims = {len(r) for r in rows}
    if len(dims) != 1:
        raise DimensionMismatch(f"DimensionMismatch: coordinate lengths {sorted(dims)}")
    x = np.array(rows, dtype=float)
    if not np.all(np.isfinite(x)):
        raise InvalidMatrix("Coordinates must be finite")
    if p == 2.0:
        model = GeometricModel(kind="euclidean", coords=x)
        curvature = FLAT
    else:
        model = GeometricModel(kind="lp", coords=x, p=p)
        curvature = UNKNOWN
    label = source or ("euclidean" if p == 2.0 else f"l{p:g}")
    return FiniteMetricSpace(dist=model.pairwise(), model=model, curvature=curvature, source=label)


def gaussian_cloud(n: int, dim: int, seed: int, scale: float = 1.0, p: float = 2.0) -> FiniteMetricSpace:
    """n standard-normal points in R^dim (euclidean unless p is given)."""
    if n < 1 or dim < 1:
        raise InvalidMatrix("gaussian_cloud needs n >= 1 and dim >= 1")
    x = scale * make_rng(seed).standard_normal((n, dim))
    tag = "gaussian" if p == 2.0 else f"gaussian-l{p:g}"
    return lp_point_space(x, p=p, source=f"{tag}(n={n},dim={dim},seed={seed})")


def sphere_point_space(coords, radius: float = 1.0, tol_rel: float = 1e-9,
                       source: str = "sphere-fixture") -> FiniteMetricSpace:
    """Explicit points on the 2-sphere of the given radius, geodesic distances."""
    if not radius > 0:
        raise InvalidMatrix("Sphere radius must be positive")
    x = np.atleast_2d(np.asarray(coords, dtype=float))
    if x.shape[1] != 3:
        raise DimensionMismatch("Sphere points need 3 coordinates")
    norms = np.linalg.norm(x, axis=1)
    if np.any(np.abs(norms - radius) > tol_rel * radius):
        raise InvalidMatrix(f"Points are not on the sphere of radius {radius}")
    model = GeometricModel(kind="sphere", coords=x, radius=float(radius))
    return FiniteMetricSpace(dist=model.pairwise(), model=model, curvature=NONNEGATIVE, source=source)


def sphere_sample(n: int, seed: int, radius: float = 1.0) -> FiniteMetricSpace:
    """n seeded uniform points on the round 2-sphere (normalized gaussian triples)."""
    if n < 1:
        raise InvalidMatrix("sphere_sample needs n >= 1")
    g = make_rng(seed).standard_normal((n, 3))
    x = radius * g / np.linalg.norm(g, axis=1, keepdims=True)
    return sphere_point_space(x, radius=radius, source=f"sphere(n={n},seed={seed},r={radius:g})")


def unit_square() -> FiniteMetricSpace:
    """Corners of the unit square in cyclic order."""
    return lp_point_space([[0, 0], [1, 0], [1, 1], [0, 1]], p=2.0, source="unit-square")


def _product_curvature(a: str, b: str) -> str:
    if a == FLAT and b == FLAT:
        return FLAT
    if a in (FLAT, NONNEGATIVE) and b in (FLAT, NONNEGATIVE):
        return NONNEGATIVE
    return UNKNOWN


def product_space(X: FiniteMetricSpace, Y: FiniteMetricSpace, cap: int = 4096) -> FiniteMetricSpace:
    """
    l2-product X x Y; point (a, b) has index a * |Y| + b.

    A euclidean model (concatenated coordinates) is attached only when both
    factors are euclidean.
    """
    size = X.n * Y.n
    if size > cap:
        raise SizeOverflow(f"SizeOverflow: product has {size} points, cap is {cap}")
    sq = X.sq[:, None, :, None] + Y.sq[None, :, None, :]
    dist = np.sqrt(sq.reshape(size, size))

    model = None
    if X.model is not None and Y.model is not None \
            and X.model.kind == "euclidean" and Y.model.kind == "euclidean":
        xa = np.repeat(X.model.coords, Y.n, axis=0)
        yb = np.tile(Y.model.coords, (X.n, 1))
        model = GeometricModel(kind="euclidean", coords=np.hstack([xa, yb]))
        # keep the matrix and the model bit-identical
        dist = model.pairwise()

    labels = None
    if X.labels is not None and Y.labels is not None:
        labels = [f"({a},{b})" for a in X.labels for b in Y.labels]
    logger.debug(f"Built product of {X.source} and {Y.source}: {size} points")
    return FiniteMetricSpace(dist=dist, labels=labels, model=model,
                             curvature=_product_curvature(X.curvature, Y.curvature),
                             source=f"product[{X.source} x {Y.source}]")


def sub_space(space: FiniteMetricSpace, indices: Sequence[int]) -> FiniteMetricSpace:
    """Restriction to the given point indices (order preserved)."""
    idx = np.asarray(list(indices), dtype=int)
    if idx.size == 0 or idx.min() < 0 or idx.max() >= space.n:
        raise InvalidMatrix("sub_space indices out of range")
    model = None
    if space.model is not None:
        m = space.model
        model = GeometricModel(kind=m.kind, coords=m.coords[idx], p=m.p, radius=m.radius)
    labels = [space.labels[i] for i in idx] if space.labels else None
    return FiniteMetricSpace(dist=space.dist[np.ix_(idx, idx)], labels=labels, model=model,
                             curvature=space.curvature, source=f"{space.source}[{len(idx)}]")
