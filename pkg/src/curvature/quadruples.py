"""
Four-point and Ptolemy inequalities over ordered quadruples (w, x, y, z).

Repeated indices are allowed. Scans run one w at a time over the full
(x, y, z) cube; ties keep the lexicographically first quadruple.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.errors import DegenerateSpace
from ..core.metric_core import FiniteMetricSpace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadrupleWitness:
    w: int
    x: int
    y: int
    z: int
    margin: Optional[float] = None

    @property
    def indices(self) -> Tuple[int, int, int, int]:
        return (self.w, self.x, self.y, self.z)

    def to_dict(self) -> dict:
        out = {"w": self.w, "x": self.x, "y": self.y, "z": self.z}
        if self.margin is not None:
            out["margin"] = self.margin
        return out


def four_point_margin(space: FiniteMetricSpace, q: QuadrupleWitness, S: float) -> float:
    """S^2 (d_wx^2 + d_yz^2) + d_wz^2 + d_yx^2 - d_wy^2 - d_xz^2."""
    d2 = space.sq
    w, x, y, z = q.indices
    return float(S * S * (d2[w, x] + d2[y, z]) + d2[w, z] + d2[y, x] - d2[w, y] - d2[x, z])


def ptolemy_margin(space: FiniteMetricSpace, q: QuadrupleWitness) -> float:
    """d_wx d_yz + d_wz d_yx - d_wy d_xz."""
    d = space.dist
    w, x, y, z = q.indices
    return float(d[w, x] * d[y, z] + d[w, z] * d[y, x] - d[w, y] * d[x, z])


def four_point_terms(sq: np.ndarray, w: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    For fixed w, arrays over (x, y, z) of
    excess = d_wy^2 + d_xz^2 - d_wz^2 - d_yx^2 and base = d_wx^2 + d_yz^2,
    so that four_point_margin = S^2 * base - excess.
    """
    excess = sq[w][None, :, None] + sq[:, None, :] - sq[w][None, None, :] - sq[:, :, None]
    base = sq[w][:, None, None] + sq[None, :, :]
    return excess, base


def ptolemy_terms(dist: np.ndarray, w: int) -> np.ndarray:
    """Ptolemy margins over (x, y, z) for fixed w."""
    d = dist
    return (d[w][:, None, None] * d[None, :, :]
            + d[w][None, None, :] * d[:, :, None]
            - d[w][None, :, None] * d[:, None, :])


def four_point_minimal_S(space: FiniteMetricSpace) -> Tuple[float, QuadrupleWitness]:
    """
    Smallest S for which every quadruple satisfies the four-point inequality:
    S^2 = max(0, max excess / base over quadruples with base > 0).
    """
    n = space.n
    if n < 2 or not space.diameter > 0:
        raise DegenerateSpace("DegenerateSpace: all points coincide, no quadruple constrains S")
    sq = space.sq
    best, best_q = -math.inf, None
    for w in range(n):
        excess, base = four_point_terms(sq, w)
        ratio = np.full(base.shape, -np.inf)
        ok = base > 0
        ratio[ok] = excess[ok] / base[ok]
        flat = int(np.argmax(ratio))
        if ratio.flat[flat] > best:
            best = float(ratio.flat[flat])
            best_q = (w,) + tuple(int(v) for v in np.unravel_index(flat, ratio.shape))
    s2 = max(best, 0.0)
    witness = QuadrupleWitness(*best_q, margin=best)
    logger.debug(f"four_point_minimal_S on {space.source}: S^2 = {s2:.6g} at {best_q}")
    return math.sqrt(s2), witness


def four_point_scan(space: FiniteMetricSpace, S: float) -> Tuple[float, QuadrupleWitness]:
    """Minimum four-point margin with constant S over all ordered quadruples."""
    if space.n == 0:
        raise DegenerateSpace("DegenerateSpace: empty space")
    best, best_q = math.inf, None
    for w in range(space.n):
        excess, base = four_point_terms(space.sq, w)
        margins = S * S * base - excess
        flat = int(np.argmin(margins))
        if margins.flat[flat] < best:
            best = float(margins.flat[flat])
            best_q = (w,) + tuple(int(v) for v in np.unravel_index(flat, margins.shape))
    return best, QuadrupleWitness(*best_q, margin=best)


def ptolemy_scan(space: FiniteMetricSpace) -> Tuple[float, QuadrupleWitness]:
    """Minimum Ptolemy margin over all ordered quadruples."""
    if space.n == 0:
        raise DegenerateSpace("DegenerateSpace: empty space")
    best, best_q = math.inf, None
    for w in range(space.n):
        margins = ptolemy_terms(space.dist, w)
        flat = int(np.argmin(margins))
        if margins.flat[flat] < best:
            best = float(margins.flat[flat])
            best_q = (w,) + tuple(int(v) for v in np.unravel_index(flat, margins.shape))
    return best, QuadrupleWitness(*best_q, margin=best)
