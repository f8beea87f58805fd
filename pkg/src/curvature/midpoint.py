"""
Midpoint inequalities with a smoothness constant S.

With m the midpoint of the geodesic from y to z:

    lower (Alexandrov-type): d(x,m)^2 >= d(x,y)^2/2 + d(x,z)^2/2 - (S^2/4) d(y,z)^2
    upper (CAT(0)-type):     d(x,m)^2 <= (S^2/2) d(x,y)^2 + d(x,z)^2/2 - d(y,z)^2/4

Both need a geometric model, since m is usually not a sample point.
"""

import logging
import math
from typing import NamedTuple, Optional, Tuple

import numpy as np

from ..core.errors import AntipodalPoints, UnsupportedModel
from ..core.metric_core import FiniteMetricSpace, GeometricModel, lp_norm, midpoint, supports_midpoints

logger = logging.getLogger(__name__)


class MidpointScan(NamedTuple):
    lower_margin: float
    upper_margin: float
    lower_witness: Optional[Tuple[int, int, int]]
    upper_witness: Optional[Tuple[int, int, int]]
    skipped: int


def _require_model(space: FiniteMetricSpace) -> GeometricModel:
    if space.model is None:
        raise UnsupportedModel("UnsupportedModel: midpoint checks need a space with coordinates")
    if not supports_midpoints(space.model):
        raise UnsupportedModel(f"UnsupportedModel: {space.model.kind} p={space.model.p!r} has no unique midpoints")
    return space.model


def _distances_to(model: GeometricModel, m: np.ndarray) -> np.ndarray:
    """Model distance from every model point to the coordinate vector m."""
    x = model.coords
    if model.kind == "sphere":
        cross = np.linalg.norm(np.cross(x, m[None, :]), axis=-1)
        return model.radius * np.arctan2(cross, x @ m)
    p = 2.0 if model.kind == "euclidean" else model.p
    return lp_norm(x - m[None, :], p)


def midpoint_defects(space: FiniteMetricSpace, x: int, y: int, z: int, S: float) -> Tuple[float, float]:
    """(lower_margin, upper_margin); each inequality holds for the triple iff its margin >= -tol."""
    model = _require_model(space)
    m = midpoint(model, y, z)
    dxm2 = model.distance(model.coords[x], m) ** 2
    d2 = space.sq
    lower = dxm2 - 0.5 * d2[x, y] - 0.5 * d2[x, z] + (S * S / 4.0) * d2[y, z]
    upper = (S * S / 2.0) * d2[x, y] + 0.5 * d2[x, z] - 0.25 * d2[y, z] - dxm2
    return float(lower), float(upper)


def midpoint_scan(space: FiniteMetricSpace, S: float) -> MidpointScan:
    """
    Minimum of both margins over all ordered triples (x, y, z).

    Pairs (y, z) without a unique midpoint are skipped and counted.
    """
    model = _require_model(space)
    n = space.n
    d2 = space.sq
    lower_best = upper_best = math.inf
    lower_w = upper_w = None
    skipped = 0
    for y in range(n):
        for z in range(n):
            try:
                m = midpoint(model, y, z)
            except AntipodalPoints:
                skipped += 1
                continue
            dxm2 = _distances_to(model, m) ** 2
            lower = dxm2 - 0.5 * d2[:, y] - 0.5 * d2[:, z] + (S * S / 4.0) * d2[y, z]
            upper = (S * S / 2.0) * d2[:, y] + 0.5 * d2[:, z] - 0.25 * d2[y, z] - dxm2
            i = int(np.argmin(lower))
            if lower[i] < lower_best:
                lower_best, lower_w = float(lower[i]), (i, y, z)
            k = int(np.argmin(upper))
            if upper[k] < upper_best:
                upper_best, upper_w = float(upper[k]), (k, y, z)
    if skipped:
        logger.warning(f"midpoint_scan skipped {skipped} antipodal pairs on {space.source}")
    return MidpointScan(lower_best, upper_best, lower_w, upper_w, skipped)
