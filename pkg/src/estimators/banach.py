"""
Normed-space ratios: Rademacher type/cotype, moduli of smoothness and
convexity of power type 2, and Markov cotype of vector configurations.
"""

import logging
import math
from typing import NamedTuple, Tuple

import numpy as np

from ..core.errors import (
    AllZeroVectors,
    DegenerateVectors,
    InvalidArgument,
    InvalidMatrix,
    NonuniformPi,
    SizeMismatch,
    TooManyVectors,
)
from ..core.markov_chain import ReversibleChain, resolvent
from ..core.metric_core import check_p, lp_norm
from ..core.reports import CheckReport, RatioReport
from ..utils.seeding import make_rng

logger = logging.getLogger(__name__)

SMOOTH = "smooth"
CONVEX = "convex"
SIGN_CHUNK = 1 << 14


class RademacherRatios(NamedTuple):
    type_ratio: float
    cotype_ratio: float


def _as_vectors(vectors) -> np.ndarray:
    try:
        V = np.asarray(vectors, dtype=float)
    except (TypeError, ValueError) as e:
        raise InvalidMatrix(f"Vectors are not a numeric (N, m) array: {e}")
    if V.ndim == 1:
        V = V[:, None]
    if V.ndim != 2 or V.shape[0] == 0:
        raise SizeMismatch(f"Expected a non-empty (N, m) array of vectors, got shape {V.shape}")
    return V


def rademacher_ratios(vectors, p: float = 2.0, cap: int = 20) -> RademacherRatios:
    """
    type_ratio = E_eps ||sum eps_i v_i||^2 / sum ||v_i||^2, cotype_ratio is its reciprocal.

    The average runs over all 2^N sign patterns.
    """
    p = check_p(p)
    V = _as_vectors(vectors)
    N = V.shape[0]
    if N > cap:
        raise TooManyVectors(f"TooManyVectors: {N} vectors need 2^{N} sign patterns, cap is {cap}")
    norms_sq = lp_norm(V, p) ** 2
    total = float(norms_sq.sum())
    if not total > 0:
        raise AllZeroVectors("AllZeroVectors: every vector is zero")

    bits = np.arange(N)
    acc = 0.0
    for start in range(0, 1 << N, SIGN_CHUNK):
        codes = np.arange(start, min(start + SIGN_CHUNK, 1 << N))
        signs = np.where((codes[:, None] >> bits[None, :]) & 1, 1.0, -1.0)
        acc += float((lp_norm(signs @ V, p) ** 2).sum())
    average = acc / (1 << N)
    return RademacherRatios(type_ratio=average / total, cotype_ratio=total / average)


def _moduli_margin(v: np.ndarray, w: np.ndarray, p: float, mode: str, constant: float) -> np.ndarray:
    nv = lp_norm(v, p) ** 2
    nw = lp_norm(w, p) ** 2
    mid = lp_norm((v + w) / 2.0, p) ** 2
    diff = lp_norm(v - w, p) ** 2
    if mode == SMOOTH:
        return mid - 0.5 * nv - 0.5 * nw + (constant ** 2 / 4.0) * diff
    if mode == CONVEX:
        return 0.5 * nv + 0.5 * nw - diff / (4.0 * constant ** 2) - mid
    raise InvalidArgument(f"Unknown moduli mode: {mode!r} (expected 'smooth' or 'convex')")


def banach_moduli_check(v, w, p: float, mode: str, constant: float, tol: float = 1e-9) -> CheckReport:
    """
    smooth: ||(v+w)/2||^2 >= ||v||^2/2 + ||w||^2/2 - (S^2/4)||v-w||^2
    convex: ||(v+w)/2||^2 <= ||v||^2/2 + ||w||^2/2 - ||v-w||^2/(4C^2)

    Passes iff margin >= -tol.
    """
    p = check_p(p)
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != w.shape:
        raise SizeMismatch(f"Vectors differ in shape: {v.shape} vs {w.shape}")
    margin = float(_moduli_margin(v, w, p, mode, constant))
    return CheckReport(
        check=f"banach_{mode}", passed=margin >= -tol, margin=margin, tolerance=tol,
        witness={"p": "inf" if math.isinf(p) else p, "constant": constant, "v": v, "w": w},
    )


def moduli_margins(p: float, mode: str, constant: float, pairs: int, dim: int, seed: int
                   ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Seeded standard-normal pairs (v, w) and their margins."""
    if pairs < 1:
        raise InvalidArgument(f"moduli scans need pairs >= 1, got {pairs}")
    rng = make_rng(seed)
    X = rng.standard_normal((pairs, 2, dim))
    v, w = X[:, 0, :], X[:, 1, :]
    return v, w, _moduli_margin(v, w, check_p(p), mode, constant)


def banach_moduli_scan(p: float, mode: str, constant: float, pairs: int = 10_000, dim: int = 8,
                       seed: int = 0, tol: float = 1e-9) -> CheckReport:
    """Worst margin over seeded standard-normal pairs in dimension dim."""
    p = check_p(p)
    v, w, margins = moduli_margins(p, mode, constant, pairs, dim, seed)
    k = int(np.argmin(margins))
    worst = float(margins[k])
    logger.debug(f"banach {mode} p={p}: worst margin {worst:.3e} over {pairs} pairs")
    return CheckReport(
        check=f"banach_{mode}_scan", passed=worst >= -tol, margin=worst, tolerance=tol,
        witness={"p": "inf" if math.isinf(p) else p, "constant": constant, "pairs": pairs,
                 "dim": dim, "seed": seed, "index": k, "v": v[k], "w": w[k]},
    )


def _pairwise_sq(U: np.ndarray, p: float) -> np.ndarray:
    return lp_norm(U[:, None, :] - U[None, :, :], p) ** 2


def markov_cotype_ratio(vectors, p: float, chain: ReversibleChain, alpha: float,
                        pi_tol: float = 1e-12) -> RatioReport:
    """
    alpha sum a_ij ||sum_k (c_ik - c_jk) v_k||^2 over (1-alpha) sum c_ij ||v_i - v_j||^2.

    Only chains with uniform stationary distribution are accepted.
    """
    p = check_p(p)
    V = _as_vectors(vectors)
    N = chain.n
    if V.shape[0] != N:
        raise SizeMismatch(f"SizeMismatch: {V.shape[0]} vectors but chain has {N} states")
    if np.max(np.abs(chain.pi - 1.0 / N)) > pi_tol:
        raise NonuniformPi(f"NonuniformPi: stationary distribution {chain.pi.tolist()} is not uniform")
    C = resolvent(chain, alpha)
    denominator = (1.0 - alpha) * float((C * _pairwise_sq(V, p)).sum())
    if not denominator > 0:
        raise DegenerateVectors("DegenerateVectors: the resolvent never separates distinct vectors")
    U = C @ V
    numerator = alpha * float((chain.A * _pairwise_sq(U, p)).sum())
    return RatioReport.from_sums("markov_cotype", numerator, denominator,
                                 witness={"alpha": alpha, "p": "inf" if math.isinf(p) else p, "N": N})
