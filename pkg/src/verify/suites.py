"""
Verification Suites
===================

Each suite replays one inequality from the theory of nonnegatively curved
spaces on finite data and returns a SuiteReport of per-case CheckReports.

Suites whose inequality needs a curvature hypothesis tag a case
"hypothesis-unverified" when the space does not come from a generator known
to satisfy it. Such cases keep their margins but never decide pass/fail.
"""

import logging
import math
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from ..core.errors import DegenerateChain, InvalidArgument, InvalidP, UnsupportedModel
from ..core.markov_chain import (
    ReversibleChain,
    _check_sizes,
    _profile_values,
    chain_from_weights,
    resolvent,
    series_horizon,
    weighted_energy,
)
from ..core.metric_core import FLAT, NONNEGATIVE, FiniteMetricSpace
from ..core.reports import CheckReport, SuiteReport
from ..curvature.midpoint import midpoint_scan
from ..curvature.quadruples import four_point_scan, four_point_terms, ptolemy_terms
from ..curvature.sturm import sturm_scan
from ..estimators.banach import CONVEX, SMOOTH, banach_moduli_scan, markov_cotype_ratio, moduli_margins
from ..estimators.enflo import enflo_search
from ..utils.seeding import make_rng

logger = logging.getLogger(__name__)

UNVERIFIED = "hypothesis-unverified"
MAIN_CONSTANT = 3.0 + 2.0 * math.sqrt(2.0)  # (1 + sqrt 2)^2
HILBERT_CONSTANT = 1.0


def curvature_tags(space: FiniteMetricSpace, suite: str) -> List[str]:
    """[] when the space is known to be nonnegatively curved, else the unverified tag."""
    if space.curvature in (NONNEGATIVE, FLAT):
        return []
    logger.warning(f"{suite}: {space.source} has no curvature provenance; cases are report-only")
    return [UNVERIFIED]


def _profile(space: FiniteMetricSpace, chain: ReversibleChain, L: int) -> np.ndarray:
    """E(0..L) with E(0) = 0, so values[l] is E(l)."""
    _check_sizes(space, chain)
    return np.concatenate([[0.0], _profile_values(space.sq, chain.pi, chain.A, L)])


def _require_motion(E: np.ndarray) -> float:
    if not E[1] > 0:
        raise DegenerateChain("DegenerateChain: E(1) = 0, the chain never moves between distinct points")
    return float(E[1])


def _describe(space: FiniteMetricSpace, chain: Optional[ReversibleChain] = None, **extra) -> Dict:
    out = space.describe()
    if chain is not None:
        out["chain_states"] = chain.n
    out.update(extra)
    return out


def verify_lemma_half(space: FiniteMetricSpace, chain: ReversibleChain, L: int = 16,
                      tol: float = 1e-9, case: Optional[str] = None) -> SuiteReport:
    """E(2l) <= 2 E(l) for l = 1..L, with slack tol * max(2E(l), l E(1))."""
    E = _profile(space, chain, 2 * L)
    e1 = _require_motion(E)
    tags = curvature_tags(space, "lemma_half")
    cases = []
    for l in range(1, L + 1):
        bound = 2.0 * E[l]
        slack = tol * max(bound, l * e1)
        margin = bound - E[2 * l]
        cases.append(CheckReport(
            check="lemma_half", case=case, l=l, passed=margin >= -slack, margin=float(margin),
            tolerance=slack, numerator=float(E[2 * l]), denominator=float(bound),
            ratio=float(E[2 * l] / bound) if bound > 0 else None, tags=list(tags),
        ))
    worst = max((c.ratio for c in cases if c.ratio is not None), default=None)
    notes = [f"worst E(2l)/(2E(l)) = {worst!r}"] if worst is not None else []
    return SuiteReport.from_cases("lemma_half", cases, corpus=_describe(space, chain, L=L), notes=notes)


def _bound_cases(name: str, E: np.ndarray, L: int, constant: float, tol: float,
                 tags: List[str], case: Optional[str]) -> List[CheckReport]:
    e1 = float(E[1])
    cases = []
    for l in range(1, L + 1):
        bound = constant * l * e1
        margin = bound - E[l]
        cases.append(CheckReport(
            check=name, case=case, l=l, passed=margin >= -tol * bound, margin=float(margin),
            tolerance=tol * bound, numerator=float(E[l]), denominator=float(l * e1),
            ratio=float(E[l] / (l * e1)), tags=list(tags),
        ))
    return cases


def verify_main_bound(space: FiniteMetricSpace, chain: ReversibleChain, L: int = 32,
                      tol: float = 1e-9, case: Optional[str] = None) -> SuiteReport:
    """
    E(l) <= (3 + 2 sqrt 2) l E(1) for l = 1..L.

    Flat spaces also get the Hilbert-space bound E(l) <= l E(1).
    """
    E = _profile(space, chain, L)
    _require_motion(E)
    tags = curvature_tags(space, "main_bound")
    cases = _bound_cases("main_bound", E, L, MAIN_CONSTANT, tol, tags, case)
    if space.curvature == FLAT:
        cases += _bound_cases("hilbert_bound", E, L, HILBERT_CONSTANT, tol, [], case)
    worst = max(c.ratio for c in cases)
    return SuiteReport.from_cases("main_bound", cases, corpus=_describe(space, chain, L=L),
                                  notes=[f"worst E(l)/(l E(1)) = {worst!r}"])


def verify_remark_inequality(space: FiniteMetricSpace, chain: ReversibleChain, alpha: float, l: int,
                             tol: float = 1e-9, case: Optional[str] = None,
                             energies: Optional[np.ndarray] = None, tags: Optional[List[str]] = None
                             ) -> CheckReport:
    """
    2(1+a) a^l (a^l E(l) + a^(l+1) E(l+1))
        >= a^(2l) E(2l) + 2 a^(2l+1) E(2l+1) + a^(2l+2) E(2l+2)

    This is the halving inequality for the chain (A^l + a A^(l+1)) / (1+a),
    so it carries the same curvature hypothesis. The slack is tol times the
    sum of the absolute terms.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidArgument(f"alpha must lie in (0, 1), got {alpha}")
    if l < 1:
        raise InvalidArgument(f"remark inequality needs l >= 1, got {l}")
    E = energies if energies is not None else _profile(space, chain, 2 * l + 2)
    a = alpha
    left = 2.0 * (1.0 + a) * a ** l * (a ** l * E[l] + a ** (l + 1) * E[l + 1])
    right = a ** (2 * l) * E[2 * l] + 2.0 * a ** (2 * l + 1) * E[2 * l + 1] + a ** (2 * l + 2) * E[2 * l + 2]
    slack = tol * (left + right)
    margin = float(left - right)
    return CheckReport(
        check="remark_inequality", case=case, l=l, alpha=alpha, passed=margin >= -slack, margin=margin,
        tolerance=slack, numerator=float(right), denominator=float(left),
        ratio=float(right / left) if left > 0 else None,
        tags=list(tags) if tags is not None else curvature_tags(space, "remark_inequality"),
        witness={"assumes": "nonnegative curvature, as for the halving lemma"},
    )


def remark_suite(space: FiniteMetricSpace, chain: ReversibleChain, alpha_grid: Sequence[float],
                 L: int = 8, tol: float = 1e-9, case: Optional[str] = None) -> SuiteReport:
    E = _profile(space, chain, 2 * L + 2)
    tags = curvature_tags(space, "remark_inequality")
    cases = [verify_remark_inequality(space, chain, a, l, tol=tol, case=case, energies=E, tags=tags)
             for a in alpha_grid for l in range(1, L + 1)]
    return SuiteReport.from_cases("remark_inequality", cases,
                                  corpus=_describe(space, chain, L=L, alpha_grid=list(alpha_grid)),
                                  notes=["curvature hypothesis assumed as for the halving lemma"])


def verify_resolvent_series(space: FiniteMetricSpace, chain: ReversibleChain, alpha: float,
                            L: Optional[int] = None, tol: float = 1e-9,
                            case: Optional[str] = None) -> CheckReport:
    """
    (1-a) sum pi_i c_ij d_ij^2 against (1-a)^2 sum_{l<=L} a^l E(l).

    The gap must stay within the series tail a^(L+1) diam^2 (+ tol). When
    E(1) > 0 the resolvent ratio must also stay below the best power ratio
    plus tail / denominator.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidArgument(f"alpha must lie in (0, 1), got {alpha}")
    if L is None:
        L = series_horizon(alpha)
    E = _profile(space, chain, L)
    C = resolvent(chain, alpha)
    lhs = (1.0 - alpha) * weighted_energy(space, chain.pi, C)
    powers = alpha ** np.arange(L + 1)
    rhs = float((1.0 - alpha) ** 2 * np.sum(powers[1:] * E[1:]))
    tail = alpha ** (L + 1) * space.diameter ** 2
    gap = abs(lhs - rhs)
    bound = tail + tol
    witness = {"resolvent_side": lhs, "series_side": rhs, "tail": tail, "L": L}

    forward_ok = True
    if E[1] > 0:
        denominator = alpha * E[1]
        resolvent_ratio = lhs / denominator
        ls = np.arange(1, L + 1)
        best_power = float(np.max(E[1:] / (ls * E[1])))
        allowed = best_power + tail / denominator + tol
        forward_ok = resolvent_ratio <= allowed
        witness.update(resolvent_ratio=resolvent_ratio, max_power_ratio=best_power,
                       tail_over_denominator=tail / denominator)

    return CheckReport(
        check="resolvent_series", case=case, alpha=alpha, l=L, passed=bool(gap <= bound and forward_ok),
        margin=float(bound - gap), tolerance=tol, numerator=lhs, denominator=rhs, witness=witness,
    )


def resolvent_suite(space: FiniteMetricSpace, chain: ReversibleChain, alpha_grid: Sequence[float],
                    tol: float = 1e-9, case: Optional[str] = None) -> SuiteReport:
    cases = [verify_resolvent_series(space, chain, a, tol=tol, case=case) for a in alpha_grid]
    return SuiteReport.from_cases("resolvent_series", cases,
                                  corpus=_describe(space, chain, alpha_grid=list(alpha_grid)))


def enflo_hypothesis(space: FiniteMetricSpace, S: float) -> bool:
    """Whether the space is known to be 2-uniformly smooth with constant <= S."""
    if space.curvature == FLAT:
        return S >= 1.0
    model = space.model
    if model is not None and model.kind == "lp" and 2.0 <= model.p < math.inf:
        return S >= math.sqrt(model.p - 1.0)
    return False


def verify_enflo_bound(space: FiniteMetricSpace, S: float = 1.0, N: int = 2, cap: int = 10_000_000,
                       tol: float = 1e-9, hypothesis: Optional[bool] = None,
                       case: Optional[str] = None) -> SuiteReport:
    """
    Exhaustive max Enflo ratio <= S^2 (1 + tol) for cube dimensions 1..N.

    hypothesis=None infers whether the bound applies from the space's
    provenance; True asserts it.
    """
    holds = enflo_hypothesis(space, S) if hypothesis is None else hypothesis
    tags = [] if holds else [UNVERIFIED]
    bound = S * S
    cases = []
    for k in range(1, N + 1):
        labeling, report = enflo_search(space, k, mode="exhaustive", cap=cap)
        margin = bound - report.ratio
        cases.append(CheckReport(
            check="enflo_bound", case=case, l=k, passed=margin >= -tol * bound, margin=margin,
            tolerance=tol * bound, numerator=report.numerator, denominator=report.denominator,
            ratio=report.ratio, witness=labeling.to_dict(), tags=list(tags),
        ))
    return SuiteReport.from_cases("enflo_bound", cases, corpus=_describe(space, S=S, N=N))


def verify_ptolemy_implication(space: FiniteMetricSpace, tol: float = 1e-9,
                               case: Optional[str] = None) -> SuiteReport:
    """
    Over every ordered quadruple:
    - Ptolemy holds => four-point inequality with S = sqrt 3;
    - (d_wy - d_xz)^2 <= 2 d_wx^2 + 2 d_yz^2 (any metric);
    - the Ptolemy inequality itself, counted only for flat spaces.
    """
    n = space.n
    scale = max(space.diameter ** 2, 1e-300)
    ptol = tol * scale
    implied_tol = 2.0 * tol * scale
    d, d2 = space.dist, space.sq

    best_pto, best_impl, best_step = math.inf, math.inf, math.inf
    w_pto = w_impl = w_step = None
    checked = 0
    for w in range(n):
        pto = ptolemy_terms(d, w)
        excess, base = four_point_terms(d2, w)
        four = 3.0 * base - excess
        step = (2.0 * d2[w][:, None, None] + 2.0 * d2[None, :, :]
                - (d[w][None, :, None] - d[:, None, :]) ** 2)

        k = int(np.argmin(pto))
        if pto.flat[k] < best_pto:
            best_pto, w_pto = float(pto.flat[k]), (w,) + np.unravel_index(k, pto.shape)
        k = int(np.argmin(step))
        if step.flat[k] < best_step:
            best_step, w_step = float(step.flat[k]), (w,) + np.unravel_index(k, step.shape)
        mask = pto >= -ptol
        checked += int(mask.sum())
        if mask.any():
            masked = np.where(mask, four, np.inf)
            k = int(np.argmin(masked))
            if masked.flat[k] < best_impl:
                best_impl, w_impl = float(masked.flat[k]), (w,) + np.unravel_index(k, masked.shape)

    def q(t):
        return None if t is None else dict(zip("wxyz", (int(v) for v in t)))

    cases = [
        CheckReport(check="ptolemy_implies_four_point", case=case,
                    passed=best_impl >= -implied_tol if checked else True,
                    margin=best_impl if checked else 0.0, tolerance=implied_tol,
                    witness={"quadruple": q(w_impl), "S": math.sqrt(3.0), "ptolemaic_quadruples": checked}),
        CheckReport(check="triangle_step", case=case, passed=best_step >= -ptol, margin=best_step,
                    tolerance=ptol, witness={"quadruple": q(w_step)}),
        CheckReport(check="ptolemy", case=case, passed=best_pto >= -ptol, margin=best_pto, tolerance=ptol,
                    witness={"quadruple": q(w_pto)}, tags=[] if space.curvature == FLAT else [UNVERIFIED]),
    ]
    return SuiteReport.from_cases("ptolemy_implication", cases, corpus=_describe(space))


def verify_energy_subadditivity(space: FiniteMetricSpace, chain: ReversibleChain, L: int = 32,
                                tol: float = 1e-9, case: Optional[str] = None) -> SuiteReport:
    """sqrt E(l+m) <= sqrt E(l) + sqrt E(m); one case per s = l+m, worst split. Holds in every metric space."""
    E = _profile(space, chain, L)
    root = np.sqrt(E)
    slack = tol * max(space.diameter, 1e-300)
    cases = []
    for s in range(2, L + 1):
        ls = np.arange(1, s // 2 + 1)
        margins = root[ls] + root[s - ls] - root[s]
        k = int(np.argmin(margins))
        cases.append(CheckReport(
            check="energy_subadditivity", case=case, l=s, passed=bool(margins[k] >= -slack),
            margin=float(margins[k]), tolerance=slack, witness={"l": int(ls[k]), "m": int(s - ls[k])},
        ))
    return SuiteReport.from_cases("energy_subadditivity", cases, corpus=_describe(space, chain, L=L))


def verify_dyadic_bound(space: FiniteMetricSpace, chain: ReversibleChain, L: int = 32,
                        tol: float = 1e-9, case: Optional[str] = None) -> SuiteReport:
    """E(2^k) <= 2^k E(1) for 2^k <= L, the iterated halving lemma."""
    E = _profile(space, chain, L)
    e1 = _require_motion(E)
    tags = curvature_tags(space, "dyadic_bound")
    cases = []
    t = 1
    while t <= L:
        bound = t * e1
        margin = bound - E[t]
        cases.append(CheckReport(
            check="dyadic_bound", case=case, l=t, passed=bool(margin >= -tol * bound), margin=float(margin),
            tolerance=tol * bound, numerator=float(E[t]), denominator=bound, ratio=float(E[t] / bound),
            tags=list(tags),
        ))
        t *= 2
    return SuiteReport.from_cases("dyadic_bound", cases, corpus=_describe(space, chain, L=L))


def induction_factor(t):
    """(1 + sqrt 2)(sqrt(1 + t) - sqrt t)."""
    t = np.asarray(t, dtype=float)
    return (1.0 + math.sqrt(2.0)) * (np.sqrt(1.0 + t) - np.sqrt(t))


def verify_induction_step(samples: int = 1000, tol: float = 1e-12) -> SuiteReport:
    """The induction factor equals 1 at t = 1 and is nonincreasing on (0, 1]."""
    if samples < 2:
        raise InvalidArgument(f"verify_induction_step needs samples >= 2, got {samples}")
    t = np.linspace(1.0 / samples, 1.0, samples)
    f = induction_factor(t)
    rises = np.diff(f)
    k = int(np.argmax(rises))
    at_one = float(induction_factor(1.0))
    cases = [
        CheckReport(check="induction_factor_at_one", passed=abs(at_one - 1.0) <= tol,
                    margin=-abs(at_one - 1.0), tolerance=tol, witness={"value": at_one}),
        CheckReport(check="induction_factor_decreasing", passed=bool(rises[k] <= tol), margin=float(-rises[k]),
                    tolerance=tol, witness={"t": float(t[k]), "samples": samples}),
    ]
    return SuiteReport.from_cases("induction_step", cases, corpus={"samples": samples})


def uniform_chain(n: int, rng: np.random.Generator) -> ReversibleChain:
    """
    Symmetric doubly stochastic chain: a random mixture of (P + P^T)/2 over
    random permutations, always including the n-cycle so the chain moves.
    """
    W = np.zeros((n, n))
    cycle = np.roll(np.eye(n), 1, axis=1)
    W += rng.uniform(0.5, 1.5) * (cycle + cycle.T)
    for _ in range(int(rng.integers(0, 3))):
        P = np.eye(n)[rng.permutation(n)]
        W += rng.uniform(0.0, 1.0) * (P + P.T)
    return chain_from_weights(W)


def verify_cotype_bound(p: float, trials: int = 50, seed: int = 0, alpha_grid: Sequence[float] = (0.5,),
                        max_vectors: int = 6, max_dim: int = 4, tol: float = 1e-9) -> SuiteReport:
    """
    Markov cotype ratios of random lp configurations (1 < p <= 2) under
    uniform-stationary chains stay below (2 C)^2 with C = 1/sqrt(p-1).
    """
    if not 1.0 < p <= 2.0:
        raise InvalidP(f"InvalidP: the cotype bound needs 1 < p <= 2, got {p}")
    if trials < 1:
        raise InvalidArgument(f"verify_cotype_bound needs trials >= 1, got {trials}")
    bound = 4.0 / (p - 1.0)
    rng = make_rng(seed)
    cases = []
    for t in range(trials):
        N = int(rng.integers(2, max_vectors + 1))
        dim = int(rng.integers(1, max_dim + 1))
        vectors = rng.standard_normal((N, dim))
        chain = uniform_chain(N, rng)
        alpha = float(alpha_grid[int(rng.integers(len(alpha_grid)))])
        report = markov_cotype_ratio(vectors, p, chain, alpha)
        margin = bound - report.ratio
        cases.append(CheckReport(
            check="cotype_bound", case=f"trial-{t}", alpha=alpha, passed=margin >= -tol * bound,
            margin=margin, tolerance=tol * bound, numerator=report.numerator,
            denominator=report.denominator, ratio=report.ratio, witness={"N": N, "dim": dim, "p": p},
        ))
    return SuiteReport.from_cases("cotype_bound", cases, corpus={"p": p, "trials": trials, "seed": seed})


def verify_four_point_from_midpoint(space: FiniteMetricSpace, S: float = 1.0, tol: float = 1e-9,
                                    case: Optional[str] = None) -> SuiteReport:
    """
    If every sampled triple satisfies the upper midpoint inequality with S,
    every quadruple satisfies the four-point inequality with S. The case is
    report-only when the midpoint hypothesis fails on the sample.
    """
    if space.model is None:
        raise UnsupportedModel("UnsupportedModel: midpoint checks need a space with coordinates")
    scale = max(space.diameter ** 2, 1e-300)
    scan = midpoint_scan(space, S)
    holds = scan.upper_margin >= -tol * scale
    best, best_q = four_point_scan(space, S)
    implied_tol = 4.0 * tol * scale
    report = CheckReport(
        check="four_point_from_midpoint", case=case, passed=best >= -implied_tol, margin=best,
        tolerance=implied_tol, tags=[] if holds else [UNVERIFIED],
        witness={"quadruple": dict(zip("wxyz", best_q.indices)), "S": S, "midpoint_margin": scan.upper_margin,
                 "midpoint_witness": scan.upper_witness, "skipped_pairs": scan.skipped},
    )
    return SuiteReport.from_cases("four_point_from_midpoint", [report], corpus=_describe(space, S=S))


def verify_sturm(space: FiniteMetricSpace, trials: int = 500, seed: int = 0, tol: float = 1e-9,
                 expect: Optional[str] = None, case: Optional[str] = None) -> SuiteReport:
    """
    Sturm scan as a suite case.

    expect="none": pass iff no obstruction; expect="obstruction": a negative
    control that passes iff the scan finds one; None infers "none" for spaces
    with curvature provenance and makes the case report-only otherwise.
    """
    report = sturm_scan(space, trials=trials, seed=seed, tol=tol)
    tags: List[str] = []
    if expect is None:
        if space.curvature in (NONNEGATIVE, FLAT):
            expect = "none"
        else:
            tags = [UNVERIFIED]
    if expect == "obstruction":
        report = report.model_copy(update={"passed": not report.passed, "margin": -report.margin,
                                           "witness": {**report.witness, "expected": "obstruction"}})
    elif expect not in (None, "none"):
        raise InvalidArgument(f"Unknown Sturm expectation: {expect!r}")
    report = report.model_copy(update={"case": case, "tags": tags})
    return SuiteReport.from_cases("sturm", [report], corpus=_describe(space, trials=trials, seed=seed))


def verify_banach_moduli(smooth_p: Iterable[float] = (2.0, 3.0, 4.0), convex_p: Iterable[float] = (1.5, 2.0),
                         pairs: int = 10_000, dim: int = 8, seed: int = 0, tol: float = 1e-9,
                         equality_tol: float = 1e-12) -> SuiteReport:
    """
    lp smoothness with S = sqrt(p-1) for p >= 2, convexity with C = 1/sqrt(p-1)
    for 1 < p <= 2, and the parallelogram equality at p = 2.
    """
    cases = []
    for p in smooth_p:
        cases.append(banach_moduli_scan(p, SMOOTH, math.sqrt(p - 1.0), pairs=pairs, dim=dim, seed=seed, tol=tol))
    for p in convex_p:
        cases.append(banach_moduli_scan(p, CONVEX, 1.0 / math.sqrt(p - 1.0), pairs=pairs, dim=dim,
                                        seed=seed, tol=tol))
    _, _, margins = moduli_margins(2.0, SMOOTH, 1.0, pairs, dim, seed)
    worst = float(np.max(np.abs(margins)))
    cases.append(CheckReport(check="parallelogram_equality", passed=worst <= equality_tol, margin=-worst,
                             tolerance=equality_tol, witness={"pairs": pairs, "dim": dim, "seed": seed}))
    return SuiteReport.from_cases("banach_moduli", cases, corpus={"pairs": pairs, "dim": dim, "seed": seed})
