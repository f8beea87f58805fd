"""
Corpus expansion and the suite runner.

A CorpusConfig lists generators, seeds and suites. Expansion is
deterministic: generators in config order, then sizes, dims and seeds.
Every chain seed is derived from the corpus seed and the case position,
so reports do not depend on thread scheduling.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

from ..core.errors import ConfigError, InvalidInput
from ..core.generators import (
    cycle,
    gaussian_cloud,
    lp_point_space,
    path_graph,
    product_space,
    sphere_sample,
    sub_space,
    tripod,
    unit_square,
)
from ..core.markov_chain import ReversibleChain, random_weight_chain
from ..core.metric_core import FiniteMetricSpace, supports_midpoints
from ..core.reports import CorpusReport, SuiteReport
from ..core.serialization import read_json, write_json
from ..utils.parallel import ordered_map
from ..utils.seeding import child_seed, make_rng
from . import suites

logger = logging.getLogger(__name__)

GeneratorKind = Literal["sphere", "gaussian", "sphere_product", "lp_cloud", "tripod", "unit_square",
                        "cycle", "path"]

SPACE_SUITES = ("sturm", "ptolemy", "enflo_bound", "four_point_from_midpoint")
CHAIN_SUITES = ("lemma_half", "main_bound", "remark", "resolvent_series", "energy_subadditivity",
                "dyadic_bound")
GLOBAL_SUITES = ("banach_moduli", "induction_step", "cotype_bound")
KNOWN_SUITES = SPACE_SUITES + CHAIN_SUITES + GLOBAL_SUITES


class GeneratorSpec(BaseModel):
    """One family of spaces."""

    kind: GeneratorKind
    sizes: List[int] = Field(default_factory=lambda: [8])
    dims: List[int] = Field(default_factory=lambda: [3])
    p: float = 2.0
    negative_control: bool = False

    @field_validator("sizes")
    @classmethod
    def _positive_sizes(cls, v: List[int]) -> List[int]:
        if any(n < 1 for n in v):
            raise ValueError("sizes must be positive")
        return v


class EnfloSettings(BaseModel):
    N: int = 2
    S: float = 1.0
    max_points: int = 5


class BanachSettings(BaseModel):
    smooth_p: List[float] = Field(default_factory=lambda: [2.0, 3.0, 4.0])
    convex_p: List[float] = Field(default_factory=lambda: [1.5, 2.0])
    pairs: int = 10_000
    dim: int = 8


class CotypeSettings(BaseModel):
    p: List[float] = Field(default_factory=lambda: [1.5, 2.0])
    trials: int = 20


class CorpusConfig(BaseModel):
    """Validated corpus description (the JSON read by `verify --config`)."""

    suites: List[str]
    generators: List[GeneratorSpec] = Field(default_factory=list)
    seeds: List[int] = Field(default_factory=lambda: [0])
    L: int = 32
    half_horizon: int = 16
    remark_horizon: int = 8
    alpha_grid: List[float] = Field(default_factory=lambda: [0.1, 0.25, 0.5, 0.75, 0.9])
    tol: float = 1e-9
    chains_per_space: int = 3
    sturm_trials: int = 500
    enflo: EnfloSettings = Field(default_factory=EnfloSettings)
    banach: BanachSettings = Field(default_factory=BanachSettings)
    cotype: CotypeSettings = Field(default_factory=CotypeSettings)

    @field_validator("suites")
    @classmethod
    def _known_suites(cls, v: List[str]) -> List[str]:
        if not v:
            raise ValueError("the suite list is empty")
        unknown = [s for s in v if s not in KNOWN_SUITES]
        if unknown:
            raise ValueError(f"unknown suites {unknown}; expected some of {list(KNOWN_SUITES)}")
        return v

    @field_validator("alpha_grid")
    @classmethod
    def _alpha_in_unit_interval(cls, v: List[float]) -> List[float]:
        if any(not 0.0 < a < 1.0 for a in v):
            raise ValueError("alpha_grid values must lie in (0, 1)")
        return v

    @classmethod
    def from_dict(cls, data: Dict) -> "CorpusConfig":
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"ConfigError: {e.errors()[0]['loc']}: {e.errors()[0]['msg']}")

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "CorpusConfig":
        try:
            data = read_json(path)
        except InvalidInput as e:
            raise ConfigError(f"ConfigError: {e}")
        return cls.from_dict(data)


@dataclass(frozen=True)
class CorpusCase:
    """One space of the expanded corpus, with its chains."""

    case_id: str
    space: FiniteMetricSpace
    chains: List[ReversibleChain]
    seed: int = 0
    negative_control: bool = False


def _build_space(family: GeneratorSpec, n: int, dim: int, seed: int) -> FiniteMetricSpace:
    if family.kind == "sphere":
        return sphere_sample(n, seed)
    if family.kind == "gaussian":
        return gaussian_cloud(n, dim, seed)
    if family.kind == "lp_cloud":
        coords = make_rng(seed).standard_normal((n, dim))
        return lp_point_space(coords, p=family.p, source=f"lp{family.p:g}-cloud")
    if family.kind == "sphere_product":
        return product_space(sphere_sample(n, child_seed(seed, 0)), sphere_sample(n, child_seed(seed, 1)))
    if family.kind == "tripod":
        return tripod()
    if family.kind == "unit_square":
        return unit_square()
    if family.kind == "cycle":
        return cycle(n)
    return path_graph(n)


SEEDED = ("sphere", "gaussian", "sphere_product", "lp_cloud")
DIMENSIONED = ("gaussian", "lp_cloud")


def expand_corpus(config: CorpusConfig) -> List[CorpusCase]:
    """Deterministic list of corpus cases in config order."""
    cases: List[CorpusCase] = []
    for g, family in enumerate(config.generators):
        sizes = family.sizes if family.kind not in ("tripod", "unit_square") else [0]
        dims = family.dims if family.kind in DIMENSIONED else [0]
        seeds = config.seeds if family.kind in SEEDED else [0]
        for n in sizes:
            for dim in dims:
                for seed in seeds:
                    space = _build_space(family, n, dim, seed)
                    parts = [family.kind]
                    if n:
                        parts.append(f"n{n}")
                    if dim:
                        parts.append(f"d{dim}")
                    if family.kind in SEEDED:
                        parts.append(f"s{seed}")
                    case_id = "-".join(parts)
                    chains = [random_weight_chain(space.n, child_seed(seed, g, n, dim, k))
                              for k in range(config.chains_per_space)]
                    cases.append(CorpusCase(case_id, space, chains, seed, family.negative_control))
    logger.info(f"Expanded corpus: {len(cases)} spaces")
    return cases


def _space_runner(name: str, config: CorpusConfig) -> Callable[[CorpusCase], List[SuiteReport]]:
    tol = config.tol

    def run(case: CorpusCase) -> List[SuiteReport]:
        space = case.space
        if name == "sturm":
            expect = "obstruction" if case.negative_control else None
            return [suites.verify_sturm(space, trials=config.sturm_trials, seed=case.seed,
                                        tol=tol, expect=expect, case=case.case_id)]
        if name == "ptolemy":
            return [suites.verify_ptolemy_implication(space, tol=tol, case=case.case_id)]
        if name == "enflo_bound":
            if space.n < 2:
                return []
            small = sub_space(space, range(min(space.n, config.enflo.max_points)))
            return [suites.verify_enflo_bound(small, S=config.enflo.S, N=config.enflo.N, tol=tol,
                                              case=case.case_id)]
        if not supports_midpoints(space.model):
            logger.debug(f"four_point_from_midpoint skips {case.case_id}: no midpoint model")
            return []
        return [suites.verify_four_point_from_midpoint(space, S=1.0, tol=tol, case=case.case_id)]

    return run


def _chain_runner(name: str, config: CorpusConfig) -> Callable[[CorpusCase], List[SuiteReport]]:
    tol = config.tol

    def run(case: CorpusCase) -> List[SuiteReport]:
        out = []
        for k, chain in enumerate(case.chains):
            label = f"{case.case_id}/chain{k}"
            if name == "lemma_half":
                out.append(suites.verify_lemma_half(case.space, chain, L=config.half_horizon, tol=tol, case=label))
            elif name == "main_bound":
                out.append(suites.verify_main_bound(case.space, chain, L=config.L, tol=tol, case=label))
            elif name == "remark":
                out.append(suites.remark_suite(case.space, chain, config.alpha_grid, L=config.remark_horizon,
                                               tol=tol, case=label))
            elif name == "resolvent_series":
                out.append(suites.resolvent_suite(case.space, chain, config.alpha_grid, tol=tol, case=label))
            elif name == "energy_subadditivity":
                out.append(suites.verify_energy_subadditivity(case.space, chain, L=config.L, tol=tol, case=label))
            else:
                out.append(suites.verify_dyadic_bound(case.space, chain, L=config.L, tol=tol, case=label))
        return out

    return run


def _global_suite(name: str, config: CorpusConfig) -> SuiteReport:
    seed = config.seeds[0] if config.seeds else 0
    if name == "banach_moduli":
        b = config.banach
        return suites.verify_banach_moduli(b.smooth_p, b.convex_p, pairs=b.pairs, dim=b.dim, seed=seed,
                                           tol=config.tol)
    if name == "induction_step":
        return suites.verify_induction_step()
    reports = [suites.verify_cotype_bound(p, trials=config.cotype.trials, seed=child_seed(seed, i),
                                          alpha_grid=config.alpha_grid, tol=config.tol)
               for i, p in enumerate(config.cotype.p)]
    return _merge("cotype_bound", reports, {"p": config.cotype.p, "trials": config.cotype.trials})


def _merge(name: str, reports: List[SuiteReport], corpus: Dict) -> SuiteReport:
    cases = [c for r in reports for c in r.cases]
    notes = [n for r in reports for n in r.notes]
    return SuiteReport.from_cases(name, cases, corpus=corpus, notes=sorted(set(notes)))


def run_corpus(config: CorpusConfig, threads: int = 1, output: Optional[Union[str, Path]] = None) -> CorpusReport:
    """
    Expand the corpus, run the selected suites in config order and aggregate.

    Cases run through ordered_map, so `threads` never changes the report.
    """
    if not config.suites:
        raise ConfigError("ConfigError: the suite list is empty")
    cases = expand_corpus(config) if any(s not in GLOBAL_SUITES for s in config.suites) else []
    if not cases and any(s not in GLOBAL_SUITES for s in config.suites):
        raise ConfigError("ConfigError: space suites selected but the corpus has no generators")
    descriptor = {"generators": [g.kind for g in config.generators], "seeds": config.seeds,
                  "spaces": [c.case_id for c in cases]}

    results: List[SuiteReport] = []
    for name in config.suites:
        logger.info(f"Running suite {name}")
        if name in GLOBAL_SUITES:
            results.append(_global_suite(name, config))
            continue
        runner = _space_runner(name, config) if name in SPACE_SUITES else _chain_runner(name, config)
        per_case = ordered_map(runner, cases, threads)
        results.append(_merge(name, [r for rs in per_case for r in rs], descriptor))

    report = CorpusReport.from_suites(config.model_dump(), results)
    logger.info(f"Corpus run {'passed' if report.passed else 'FAILED'} ({len(results)} suites)")
    if output is not None:
        write_json(report.to_dict(), output)
    return report
