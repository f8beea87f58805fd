"""
Barycentric Curvature Tests
===========================

Finite forms of the barycenter inequality that characterizes nonnegative
curvature: for points x_i with weights a_i summing to one and any y,

    sum_ij a_i a_j (d(x_i,x_j)^2 - d(x_i,y)^2 - d(x_j,y)^2) <= 0.

A positive defect is a certified obstruction. A scan that finds none only
says "no obstruction found"; y ranges over sample points, never the whole
ambient space.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Tuple

import numpy as np

from ..core.errors import InvalidArgument, InvalidWeights
from ..core.metric_core import FiniteMetricSpace
from ..core.reports import CheckReport
from ..utils.seeding import make_rng

logger = logging.getLogger(__name__)

WEIGHT_TOL = 1e-12
NO_OBSTRUCTION = "no obstruction found"
OBSTRUCTION = "obstruction found"


@dataclass(frozen=True)
class WeightedConfiguration:
    """Points x_i (by index) with weights a_i summing to 1, and a base point y."""

    indices: Tuple[int, ...]
    weights: Tuple[float, ...]
    y: int

    def __post_init__(self):
        indices = tuple(int(i) for i in self.indices)
        weights = tuple(float(a) for a in self.weights)
        if not indices or len(indices) != len(weights):
            raise InvalidWeights(f"InvalidWeights: {len(indices)} indices but {len(weights)} weights")
        if min(weights) < 0:
            raise InvalidWeights(f"InvalidWeights: negative weight {min(weights)!r}")
        if abs(sum(weights) - 1.0) > WEIGHT_TOL:
            raise InvalidWeights(f"InvalidWeights: weights sum to {sum(weights)!r}, not 1")
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "weights", weights)

    def check_space(self, space: FiniteMetricSpace) -> None:
        if max(self.indices + (self.y,)) >= space.n or min(self.indices + (self.y,)) < 0:
            raise InvalidWeights(f"InvalidWeights: configuration indexes outside a {space.n}-point space")

    def to_dict(self) -> dict:
        return {"indices": list(self.indices), "weights": list(self.weights), "y": self.y}


def _defects_all_y(sq: np.ndarray, idx: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Defect for every base point y at once (weights sum to one)."""
    inner = float(a @ sq[np.ix_(idx, idx)] @ a)
    return inner - 2.0 * (a @ sq[idx, :])


def sturm_defect(space: FiniteMetricSpace, config: WeightedConfiguration) -> float:
    """sum_ij a_i a_j (d_ij^2 - d(x_i,y)^2 - d(x_j,y)^2); positive means obstruction."""
    config.check_space(space)
    idx = np.asarray(config.indices)
    a = np.asarray(config.weights)
    return float(_defects_all_y(space.sq, idx, a)[config.y])


def _uniform_subsets(n: int, max_size: int):
    for k in range(1, max_size + 1):
        for subset in combinations(range(n), k):
            yield np.asarray(subset)


def sturm_scan(space: FiniteMetricSpace, trials: int = 500, seed: int = 0, tol: float = 1e-9,
               max_subset: int = 6, exhaustive_cap: int = 5000) -> CheckReport:
    """
    Largest barycentric defect over sampled configurations and every y.

    Uniform weights on all subsets of size <= 3 are swept first when there are
    at most exhaustive_cap of them; then `trials` random subsets (size uniform
    in 1..max_subset) with Dirichlet(1,...,1) weights. Passes iff the largest
    defect is <= tol * diameter^2.
    """
    if trials < 1:
        raise InvalidArgument(f"sturm_scan needs trials >= 1, got {trials}")
    n = space.n
    sq = space.sq
    best = float("-inf")
    best_idx, best_a, best_y = None, None, 0

    def consider(idx: np.ndarray, a: np.ndarray) -> None:
        nonlocal best, best_idx, best_a, best_y
        defects = _defects_all_y(sq, idx, a)
        y = int(np.argmax(defects))
        if defects[y] > best:
            best, best_idx, best_a, best_y = float(defects[y]), idx, a, y

    small = min(3, n)
    swept = sum(comb(n, k) for k in range(1, small + 1)) <= exhaustive_cap
    if swept:
        for idx in _uniform_subsets(n, small):
            consider(idx, np.full(idx.size, 1.0 / idx.size))

    rng = make_rng(seed)
    top = min(max_subset, n)
    for _ in range(trials):
        k = int(rng.integers(1, top + 1))
        idx = np.sort(rng.choice(n, size=k, replace=False))
        e = rng.standard_exponential(k)
        consider(idx, e / e.sum())

    allowed = tol * space.diameter ** 2
    passed = best <= allowed
    verdict = NO_OBSTRUCTION if passed else OBSTRUCTION
    logger.info(f"sturm_scan on {space.source} (n={n}): max defect {best:.3e}, {verdict}")
    return CheckReport(
        check="sturm_scan", passed=passed, margin=-best, tolerance=allowed,
        witness={"indices": best_idx, "weights": best_a, "y": best_y, "defect": best,
                 "trials": trials, "seed": seed, "uniform_sweep": swept, "verdict": verdict},
    )


def hilbert_identity_check(coords, weights, w, tol: float = 1e-9) -> CheckReport:
    """
    |sum_ij a_i a_j (|v_i-v_j|^2 - |v_i-w|^2 - |v_j-w|^2) + 2|sum a_i v_i - w|^2|

    The expression vanishes identically in Euclidean space. Both sides are
    computed independently; passes iff the gap is <= tol * scale, where scale
    is the largest squared distance among the v_i and w.
    """
    V = np.atleast_2d(np.asarray(coords, dtype=float))
    if V.shape[0] == 1 and np.ndim(coords) == 1:
        V = V.T
    a = np.asarray(weights, dtype=float)
    w = np.atleast_1d(np.asarray(w, dtype=float))
    if a.shape != (V.shape[0],) or min(a) < 0 or abs(a.sum() - 1.0) > WEIGHT_TOL:
        raise InvalidWeights(f"InvalidWeights: {a.tolist()} is not a probability vector for {V.shape[0]} points")

    pts = np.vstack([V, w[None, :]])
    sq = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=-1)
    to_w = sq[:-1, -1]
    double_sum = float(np.sum(np.outer(a, a) * (sq[:-1, :-1] - to_w[:, None] - to_w[None, :])))
    bary = a @ V
    closed_form = 2.0 * float(np.sum((bary - w) ** 2))
    gap = abs(double_sum + closed_form)
    scale = max(float(sq.max()), 1.0)
    return CheckReport(
        check="hilbert_identity", passed=gap <= tol * scale, margin=gap, tolerance=tol * scale,
        witness={"double_sum": double_sum, "closed_form": -closed_form, "barycenter": bary},
    )


def independent_copy_check(space: FiniteMetricSpace, config: WeightedConfiguration,
                           tol: float = 1e-9) -> CheckReport:
    """
    E d(Z, Z')^2 <= 2 E d(Z, y)^2 for Z, Z' independent with law sum a_i delta_{x_i}.

    Margin is the minimum over sample points y of 2 E d(Z,y)^2 - E d(Z,Z')^2;
    the configuration's own y is ignored.
    """
    config.check_space(space)
    idx = np.asarray(config.indices)
    a = np.asarray(config.weights)
    copies = float(a @ space.sq[np.ix_(idx, idx)] @ a)
    spread = 2.0 * (a @ space.sq[idx, :])
    gaps = spread - copies
    y = int(np.argmin(gaps))
    allowed = tol * space.diameter ** 2
    margin = float(gaps[y])
    return CheckReport(
        check="independent_copy", passed=margin >= -allowed, margin=margin, tolerance=allowed,
        witness={"indices": idx, "weights": a, "y": y, "copies": copies, "spread": float(spread[y])},
    )
