"""
Enflo Type Ratios
=================

Labelings of the Hamming cube {-1,1}^N by points of a finite space, and the
ratio of squared diagonals to squared edges:

    sum_eps d(x_eps, x_-eps)^2  /  sum_{eps ~ eps'} d(x_eps, x_eps')^2

Both sums are ordered: each antipodal pair and each edge is counted from
both ends. With this convention a square labeled by its own corners has
ratio exactly 1, the Hilbert value.

Cube vertices are encoded as integers v in [0, 2^N): bit i set means
eps_i = +1. The antipode of v is v ^ (2^N - 1), neighbours are v ^ (1 << i).
"""

import logging
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from ..core.errors import CapExceeded, DegenerateLabeling, InvalidArgument, InvalidMatrix
from ..core.metric_core import FiniteMetricSpace
from ..core.reports import RatioReport
from ..utils.seeding import make_rng

logger = logging.getLogger(__name__)

EXHAUSTIVE = "exhaustive"
LOCAL = "local"
CHUNK = 1 << 16


@dataclass(frozen=True)
class HypercubeLabeling:
    """assign[v] is the point index placed at cube vertex v."""

    N: int
    assign: Tuple[int, ...]

    def __post_init__(self):
        if self.N < 1:
            raise InvalidMatrix("Hypercube dimension must be >= 1")
        assign = tuple(int(a) for a in self.assign)
        if len(assign) != 1 << self.N:
            raise InvalidMatrix(f"Labeling must assign all {1 << self.N} vertices, got {len(assign)}")
        if min(assign) < 0:
            raise InvalidMatrix("Point indices must be nonnegative")
        object.__setattr__(self, "assign", assign)

    @staticmethod
    def sign_vector(v: int, N: int) -> Tuple[int, ...]:
        return tuple(1 if (v >> i) & 1 else -1 for i in range(N))

    @staticmethod
    def vertex(eps: Sequence[int]) -> int:
        return sum(1 << i for i, e in enumerate(eps) if e > 0)

    @classmethod
    def from_signs(cls, mapping: Dict[Tuple[int, ...], int]) -> "HypercubeLabeling":
        """Build from {sign vector: point index}."""
        N = len(next(iter(mapping)))
        assign = [0] * (1 << N)
        for eps, x in mapping.items():
            assign[cls.vertex(eps)] = x
        return cls(N=N, assign=tuple(assign))

    def to_dict(self) -> dict:
        return {"N": self.N,
                "assign": {"".join("+" if e > 0 else "-" for e in self.sign_vector(v, self.N)): x
                           for v, x in enumerate(self.assign)}}


def _pairs(N: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    V = 1 << N
    verts = np.arange(V)
    anti = verts ^ (V - 1)
    ev = np.repeat(verts, N)
    ew = ev ^ np.tile(1 << np.arange(N), V)
    return verts, anti, ev, ew


def _sums(sq: np.ndarray, labels: np.ndarray, N: int) -> Tuple[np.ndarray, np.ndarray]:
    """Numerators and denominators for a batch of labelings, shape (batch, 2^N)."""
    verts, anti, ev, ew = _pairs(N)
    num = sq[labels[:, verts], labels[:, anti]].sum(axis=1)
    den = sq[labels[:, ev], labels[:, ew]].sum(axis=1)
    return num, den


def enflo_ratio(space: FiniteMetricSpace, labeling: HypercubeLabeling) -> RatioReport:
    """Ordered diagonal sum over ordered edge sum for one labeling."""
    if max(labeling.assign) >= space.n:
        raise InvalidMatrix(f"Labeling uses point {max(labeling.assign)} but space has {space.n}")
    labels = np.asarray(labeling.assign)[None, :]
    num, den = _sums(np.asarray(space.sq), labels, labeling.N)
    if not den[0] > 0:
        raise DegenerateLabeling("DegenerateLabeling: every cube edge maps to a single point")
    return RatioReport.from_sums("enflo", float(num[0]), float(den[0]), witness=labeling.to_dict())


def _exhaustive(space: FiniteMetricSpace, N: int, cap: int) -> Tuple[HypercubeLabeling, RatioReport]:
    n, V = space.n, 1 << N
    total = n ** V
    if total > cap:
        raise CapExceeded(f"CapExceeded: exhaustive search needs {n}^{V} = {total} labelings, cap is {cap}")
    sq = np.asarray(space.sq)
    powers = n ** np.arange(V - 1, -1, -1, dtype=np.int64)
    best_ratio, best_t = float("-inf"), -1
    for start in range(0, total, CHUNK):
        t = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        labels = (t[:, None] // powers[None, :]) % n
        num, den = _sums(sq, labels, N)
        ratio = np.full(t.size, -np.inf)
        ok = den > 0
        ratio[ok] = num[ok] / den[ok]
        k = int(np.argmax(ratio))
        if ratio[k] > best_ratio:
            best_ratio, best_t = float(ratio[k]), int(t[k])
    if best_t < 0:
        raise DegenerateLabeling("DegenerateLabeling: no labeling separates any cube edge")
    assign = tuple(int(best_t // int(p)) % n for p in powers)
    labeling = HypercubeLabeling(N=N, assign=assign)
    return labeling, enflo_ratio(space, labeling)


def _local(space: FiniteMetricSpace, N: int, seed: int, budget: int) -> Tuple[HypercubeLabeling, RatioReport]:
    """Single-vertex relabeling hill climb with restarts after V*n rejections."""
    n, V = space.n, 1 << N
    sq = np.asarray(space.sq)
    rng = make_rng(seed)

    def score(lab: np.ndarray) -> float:
        num, den = _sums(sq, lab[None, :], N)
        return float(num[0] / den[0]) if den[0] > 0 else float("-inf")

    lab = rng.integers(n, size=V)
    cur = score(lab)
    best, best_lab = cur, lab.copy()
    rejected = restarts = 0
    for _ in range(budget):
        v = int(rng.integers(V))
        old = lab[v]
        lab[v] = (old + 1 + int(rng.integers(n - 1))) % n
        val = score(lab)
        if val > cur:
            cur, rejected = val, 0
            if cur > best:
                best, best_lab = cur, lab.copy()
        else:
            lab[v] = old
            rejected += 1
            if rejected >= V * n:
                lab = rng.integers(n, size=V)
                cur, rejected = score(lab), 0
                restarts += 1
                if cur > best:
                    best, best_lab = cur, lab.copy()
    if best == float("-inf"):
        raise DegenerateLabeling("DegenerateLabeling: local search found no non-degenerate labeling")
    labeling = HypercubeLabeling(N=N, assign=tuple(int(x) for x in best_lab))
    report = enflo_ratio(space, labeling)
    logger.info(f"enflo local search seed={seed}: ratio {report.ratio:.6g} ({restarts} restarts)")
    return labeling, report


def enflo_search(space: FiniteMetricSpace, N: int, mode: str = EXHAUSTIVE, seed: int = 0,
                 budget: int = 2000, cap: int = 10_000_000) -> Tuple[HypercubeLabeling, RatioReport]:
    """
    Maximize the Enflo ratio over labelings of {-1,1}^N.

    exhaustive: true maximum, first maximizer in lexicographic order of
    (x_0, x_1, ...); refuses when n^(2^N) exceeds cap.
    local: seed-deterministic hill climb, never above the true maximum.
    """
    if N < 1:
        raise InvalidArgument(f"enflo_search needs N >= 1, got {N}")
    if space.n < 2:
        raise DegenerateLabeling("DegenerateLabeling: a one-point space has only constant labelings")
    if mode == EXHAUSTIVE:
        labeling, report = _exhaustive(space, N, cap)
    elif mode == LOCAL:
        if budget < 1:
            raise InvalidArgument(f"local enflo_search needs budget >= 1, got {budget}")
        labeling, report = _local(space, N, seed, budget)
        report = report.model_copy(update={"seed": seed, "budget": budget})
    else:
        raise InvalidArgument(f"Unknown enflo_search mode: {mode!r}")
    return labeling, report.model_copy(update={"check": f"enflo_search_{mode}"})
