"""
Markov Type Ratios
==================

Lower bounds on the squared Markov type constant M_2(X)^2 of a finite
space, from either form of the defining inequality:

- resolvent form: (1-alpha) sum pi_i c_ij d_ij^2 <= K^2 alpha sum pi_i a_ij d_ij^2
- power form:     E(l) <= K^2 l E(1)

plus a seeded local search over chains that maximizes the power-form ratio.
Every ratio here is a lower bound; nothing certifies an upper bound.
"""

import logging
from typing import Iterable, List, Optional, Tuple

import numpy as np

from ..core.errors import DegenerateChain, InvalidArgument
from ..core.markov_chain import (
    ReversibleChain,
    _check_sizes,
    _profile_values,
    chain_from_weights,
    energy,
    resolvent,
    weighted_energy,
)
from ..core.metric_core import FiniteMetricSpace
from ..core.reports import RatioReport
from ..utils.parallel import ordered_map
from ..utils.seeding import make_rng

logger = logging.getLogger(__name__)

WEIGHT_FLOOR = 1e-15
WEIGHT_CEIL = 1e15


def markov_ratio_resolvent(space: FiniteMetricSpace, chain: ReversibleChain, alpha: float) -> RatioReport:
    """(1-alpha) sum pi_i c_ij d_ij^2 over alpha sum pi_i a_ij d_ij^2."""
    _check_sizes(space, chain)
    e1 = weighted_energy(space, chain.pi, chain.A)
    denominator = alpha * e1
    if not e1 > 0:
        raise DegenerateChain("DegenerateChain: E(1) = 0, the chain never moves between distinct points")
    C = resolvent(chain, alpha)
    numerator = (1.0 - alpha) * weighted_energy(space, chain.pi, C)
    return RatioReport.from_sums("markov_resolvent", numerator, denominator,
                                 witness={"alpha": alpha, "n": space.n})


def markov_ratio_power(space: FiniteMetricSpace, chain: ReversibleChain, l: int) -> RatioReport:
    """E(l) / (l E(1))."""
    e1 = energy(space, chain, 1)
    if not e1 > 0:
        raise DegenerateChain("DegenerateChain: E(1) = 0, the chain never moves between distinct points")
    el = e1 if l == 1 else energy(space, chain, l)
    return RatioReport.from_sums("markov_power", el, l * e1, witness={"l": l, "n": space.n})


def _power_objective(sq: np.ndarray, W: np.ndarray, L: int) -> Tuple[float, int]:
    """max_{l<=L} E(l)/(l E(1)) for the chain of W, with the maximizing l; -inf if degenerate."""
    rows = W.sum(axis=1)
    pi = rows / rows.sum()
    A = W / rows[:, None]
    values = _profile_values(sq, pi, A, L)
    if not values[0] > 0:
        return float("-inf"), 0
    ratios = values / (np.arange(1, L + 1) * values[0])
    best = int(np.argmax(ratios))
    return float(ratios[best]), best + 1


def _random_weights(rng: np.random.Generator, n: int) -> np.ndarray:
    w = rng.standard_exponential((n, n))
    return np.triu(w) + np.triu(w, 1).T


def chain_search(space: FiniteMetricSpace, L: int = 16, seed: int = 0, budget: int = 4000
                 ) -> Tuple[ReversibleChain, RatioReport]:
    """
    Multiplicative local search over symmetric weights maximizing
    max_{1<=l<=L} E(l)/(l E(1)).

    Each proposal multiplies one weight (and its mirror) by exp(u), u ~ U[-1, 1],
    and is kept only on strict improvement. After n^2 consecutive rejections the
    search restarts from fresh random weights, keeping the best chain seen.
    """
    if space.n < 2:
        raise InvalidArgument("chain_search needs a space with at least 2 points")
    if budget < 1:
        raise InvalidArgument(f"chain_search needs budget >= 1, got {budget}")
    if L < 1:
        raise InvalidArgument(f"chain_search needs L >= 1, got {L}")

    n = space.n
    sq = np.asarray(space.sq)
    rng = make_rng(seed)
    iu, ju = np.triu_indices(n)
    stagnation = n * n

    W = _random_weights(rng, n)
    cur, cur_l = _power_objective(sq, W, L)
    best, best_l, best_W = cur, cur_l, W.copy()
    rejected = restarts = accepted = 0

    for _ in range(budget):
        k = int(rng.integers(iu.size))
        i, j = int(iu[k]), int(ju[k])
        u = rng.uniform(-1.0, 1.0)
        old = W[i, j]
        new = float(np.clip(old * np.exp(u), WEIGHT_FLOOR, WEIGHT_CEIL))
        W[i, j] = W[j, i] = new
        val, val_l = _power_objective(sq, W, L)
        if val > cur:
            cur, cur_l = val, val_l
            accepted += 1
            rejected = 0
            if cur > best:
                best, best_l, best_W = cur, cur_l, W.copy()
        else:
            W[i, j] = W[j, i] = old
            rejected += 1
            if rejected >= stagnation:
                W = _random_weights(rng, n)
                cur, cur_l = _power_objective(sq, W, L)
                rejected = 0
                restarts += 1
                if cur > best:
                    best, best_l, best_W = cur, cur_l, W.copy()

    if best == float("-inf"):
        raise DegenerateChain("DegenerateChain: every chain has E(1) = 0 (points coincide)")

    chain = chain_from_weights(best_W)
    e1 = energy(space, chain, 1)
    el = energy(space, chain, best_l)
    report = RatioReport.from_sums(
        "chain_search", el, best_l * e1, seed=seed, budget=budget,
        witness={"l": best_l, "L": L, "restarts": restarts, "accepted": accepted,
                 "proposal": "multiply one weight by exp(U[-1,1])", "weights": best_W},
    )
    logger.info(f"chain_search seed={seed}: ratio {report.ratio:.6g} at l={best_l} "
                f"({accepted} accepted, {restarts} restarts)")
    return chain, report


def chain_search_multi(space: FiniteMetricSpace, seeds: Iterable[int], L: int = 16, budget: int = 4000,
                       threads: int = 1) -> List[Tuple[ReversibleChain, RatioReport]]:
    """Independent searches, one per seed, ordered by (ratio desc, seed asc)."""
    seeds = list(seeds)
    results = ordered_map(lambda s: chain_search(space, L=L, seed=s, budget=budget), seeds, threads)
    return sorted(results, key=lambda r: (-r[1].ratio, r[1].seed))


def best_power_ratio(space: FiniteMetricSpace, chain: ReversibleChain, L: int,
                     profile_values: Optional[np.ndarray] = None) -> Tuple[float, int]:
    """max_{l<=L} E(l)/(l E(1)) for a given chain, and the maximizing l."""
    _check_sizes(space, chain)
    values = profile_values if profile_values is not None else _profile_values(space.sq, chain.pi, chain.A, L)
    if not values[0] > 0:
        raise DegenerateChain("DegenerateChain: E(1) = 0, the chain never moves between distinct points")
    ratios = values[:L] / (np.arange(1, L + 1) * values[0])
    best = int(np.argmax(ratios))
    return float(ratios[best]), best + 1
