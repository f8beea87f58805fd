"""
Reversible Markov Chains
========================

Stationary reversible chains (pi, A), their powers and resolvents, and the
displacement energy E(l) = sum_ij pi_i a^(l)_ij d_ij^2 of a chain run on
the points of a finite metric space.

Chains are usually built from symmetric nonnegative weights, which makes
all five constraints (entries in [0,1], pi sums to 1, rows sum to 1,
detailed balance) hold by construction.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import scipy.linalg

from .errors import Asymmetric, InvalidArgument, InvalidMatrix, SingularSystem, SizeMismatch, ZeroRow
from .metric_core import FiniteMetricSpace
from .reports import CheckReport
from ..utils.seeding import make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReversibleChain:
    """Stationary distribution pi and transition matrix A on n states."""

    pi: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        try:
            pi = np.array(self.pi, dtype=float, copy=True)
            A = np.array(self.A, dtype=float, copy=True)
        except (TypeError, ValueError) as e:
            raise InvalidMatrix(f"Chain entries are not numeric: {e}")
        if pi.ndim != 1 or A.ndim != 2 or A.shape != (pi.size, pi.size):
            raise InvalidMatrix(f"Chain shapes do not match: pi {pi.shape}, A {A.shape}")
        if not (np.all(np.isfinite(pi)) and np.all(np.isfinite(A))):
            raise InvalidMatrix("Chain entries must be finite")
        pi.setflags(write=False)
        A.setflags(write=False)
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "A", A)

    @property
    def n(self) -> int:
        return self.pi.size

    def to_dict(self) -> dict:
        return {"n": self.n, "pi": self.pi.tolist(), "A": self.A.tolist()}


@dataclass(frozen=True)
class EnergyProfile:
    """E(1), ..., E(L) for one space/chain pair."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def L(self) -> int:
        return self.values.size

    def __getitem__(self, l: int) -> float:
        """1-based access: profile[l] == E(l)."""
        if not 1 <= l <= self.L:
            raise IndexError(f"E({l}) outside profile 1..{self.L}")
        return float(self.values[l - 1])

    def as_list(self) -> List[float]:
        return [float(v) for v in self.values]


def chain_from_weights(W) -> ReversibleChain:
    """pi_i = row_i / total, a_ij = w_ij / row_i for symmetric nonnegative W."""
    try:
        W = np.array(W, dtype=float)
    except (TypeError, ValueError) as e:
        raise InvalidMatrix(f"Weight matrix is not numeric: {e}")
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise InvalidMatrix(f"Weight matrix must be square, got shape {W.shape}")
    if not np.all(np.isfinite(W)) or np.any(W < 0):
        raise InvalidMatrix("Weights must be finite and nonnegative")
    asym = np.argwhere(W != W.T)
    if asym.size:
        i, j = (int(v) for v in asym[0])
        raise Asymmetric(i, j)
    rows = W.sum(axis=1)
    zero = np.flatnonzero(rows <= 0)
    if zero.size:
        raise ZeroRow(int(zero[0]))
    pi = rows / rows.sum()
    A = W / rows[:, None]
    return ReversibleChain(pi=pi, A=A)


def random_weight_chain(n: int, seed: int, sparsity: float = 0.0) -> ReversibleChain:
    """
    Chain from symmetric exponential weights; with sparsity > 0 a fraction of
    off-diagonal weights is zeroed (diagonal kept so no row vanishes).
    """
    rng = make_rng(seed)
    w = rng.standard_exponential((n, n))
    W = np.triu(w) + np.triu(w, 1).T
    if sparsity > 0:
        mask = np.triu(rng.random((n, n)) < sparsity, 1)
        mask = mask | mask.T
        W[mask] = 0.0
    return chain_from_weights(W)


def validate_chain(chain: ReversibleChain, tol_abs: float = 1e-12) -> CheckReport:
    """
    Check the five chain constraints; the report carries the worst violation.

    margin is -(largest violation), so a valid chain has margin 0.
    """
    pi, A = chain.pi, chain.A
    violations = []

    lo = float(min(pi.min(initial=0.0), 0.0))
    hi = float(max(pi.max(initial=0.0) - 1.0, 0.0))
    k = int(np.argmin(pi)) if -lo >= hi else int(np.argmax(pi))
    violations.append(("pi_range", max(-lo, hi), {"i": k}))

    a_low = -float(min(A.min(initial=0.0), 0.0))
    a_high = float(max(A.max(initial=0.0) - 1.0, 0.0))
    idx = np.unravel_index(int(np.argmin(A) if a_low >= a_high else np.argmax(A)), A.shape)
    violations.append(("a_range", max(a_low, a_high), {"i": int(idx[0]), "j": int(idx[1])}))

    violations.append(("mass", abs(float(pi.sum()) - 1.0), {}))

    row_err = np.abs(A.sum(axis=1) - 1.0)
    r = int(np.argmax(row_err)) if row_err.size else 0
    violations.append(("row_sum", float(row_err.max(initial=0.0)), {"i": r}))

    flux = pi[:, None] * A
    bal = np.abs(flux - flux.T)
    b = np.unravel_index(int(np.argmax(bal)), bal.shape) if bal.size else (0, 0)
    i, j = sorted((int(b[0]), int(b[1])))
    violations.append(("reversibility", float(bal.max(initial=0.0)), {"i": i, "j": j}))

    # first constraint attaining the worst violation
    kind, worst, where = max(violations, key=lambda v: v[1])
    passed = worst <= tol_abs
    witness = {"constraint": kind if worst > 0 else None, **(where if worst > 0 else {})}
    if not passed:
        logger.debug(f"Chain fails {kind} by {worst!r} at {where}")
    return CheckReport(check="chain_constraints", passed=passed, margin=-worst,
                       tolerance=tol_abs, witness=witness)


def is_stationary(chain: ReversibleChain, tol: float = 1e-12) -> bool:
    """sum_i pi_i a_ij == pi_j for every j."""
    return bool(np.all(np.abs(chain.pi @ chain.A - chain.pi) <= tol))


def chain_power(chain: ReversibleChain, l: int) -> np.ndarray:
    """A^l by repeated squaring; A^0 is the identity."""
    if l < 0:
        raise InvalidArgument(f"chain_power needs l >= 0, got {l}")
    result = np.eye(chain.n)
    base = np.array(chain.A)
    while l:
        if l & 1:
            result = result @ base
        l >>= 1
        if l:
            base = base @ base
    return result


def resolvent(chain: ReversibleChain, alpha: float) -> np.ndarray:
    """C = (1 - alpha) (I - alpha A)^{-1}, by a direct dense solve."""
    if not 0.0 < alpha < 1.0:
        raise InvalidArgument(f"alpha must lie in (0, 1), got {alpha}")
    M = np.eye(chain.n) - alpha * chain.A
    try:
        C = (1.0 - alpha) * scipy.linalg.solve(M, np.eye(chain.n))
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise SingularSystem(f"SingularSystem: I - alpha*A is not invertible ({e})")
    if not np.all(np.isfinite(C)):
        raise SingularSystem("SingularSystem: resolvent has non-finite entries")
    return C


def series_horizon(alpha: float, tol: float = 1e-12) -> int:
    """Smallest L with alpha^(L+1) < tol."""
    if not 0.0 < alpha < 1.0:
        raise InvalidArgument(f"alpha must lie in (0, 1), got {alpha}")
    L = max(0, math.ceil(math.log(tol) / math.log(alpha)) - 1)
    while alpha ** (L + 1) >= tol:
        L += 1
    return L


def resolvent_series(chain: ReversibleChain, alpha: float, L: int) -> np.ndarray:
    """Truncated series (1 - alpha) sum_{l=0..L} alpha^l A^l."""
    total = np.zeros((chain.n, chain.n))
    term = np.eye(chain.n)
    for l in range(L + 1):
        total += (alpha ** l) * term
        term = term @ chain.A
    return (1.0 - alpha) * total


def _check_sizes(space: FiniteMetricSpace, chain: ReversibleChain) -> None:
    if space.n != chain.n:
        raise SizeMismatch(f"SizeMismatch: space has {space.n} points, chain has {chain.n} states")


def weighted_energy(space: FiniteMetricSpace, pi: np.ndarray, P: np.ndarray) -> float:
    """sum_ij pi_i P_ij d_ij^2 for any matrix P (powers, resolvent...)."""
    return float(np.sum(pi[:, None] * P * space.sq))


def energy(space: FiniteMetricSpace, chain: ReversibleChain, l: int) -> float:
    """E(l) = sum_ij pi_i a^(l)_ij d_ij^2."""
    _check_sizes(space, chain)
    if l < 1:
        raise InvalidArgument(f"energy needs l >= 1, got {l}")
    return weighted_energy(space, chain.pi, chain_power(chain, l))


def energy_profile(space: FiniteMetricSpace, chain: ReversibleChain, L: int) -> EnergyProfile:
    """E(1..L) with one matrix multiply per step."""
    _check_sizes(space, chain)
    if L < 1:
        raise InvalidArgument(f"energy_profile needs L >= 1, got {L}")
    return EnergyProfile(_profile_values(space.sq, chain.pi, chain.A, L))


def _profile_values(sq: np.ndarray, pi: np.ndarray, A: np.ndarray, L: int) -> np.ndarray:
    weighted = pi[:, None] * sq
    values = np.empty(L)
    P = A
    for l in range(L):
        if l:
            P = P @ A
        values[l] = np.sum(weighted * P)
    return values


def energy_at(space: FiniteMetricSpace, chain: ReversibleChain, ls: List[int],
              profile: Optional[EnergyProfile] = None) -> dict:
    """E(l) for several l, reusing a profile when it covers them."""
    top = max(ls)
    if profile is None or profile.L < top:
        profile = energy_profile(space, chain, top)
    return {l: profile[l] for l in ls}
