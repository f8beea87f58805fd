"""CLI entry point for curvtype."""

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

# Add project root to path
project_root = Path(__file__).parent.parent.parent.parent
sys.path.insert(0, str(project_root))

# Imports after path setup (intentional)
from src.core import generators  # noqa: E402
from src.core.config import LabConfig, get_config, set_config  # noqa: E402
from src.core.errors import CurvTypeError, UsageError  # noqa: E402
from src.core.markov_chain import chain_from_weights, random_weight_chain, validate_chain  # noqa: E402
from src.core.metric_core import validate_metric  # noqa: E402
from src.core.reports import CheckReport, to_builtin  # noqa: E402
from src.core.serialization import (  # noqa: E402
    chain_to_dict,
    decoding,
    dumps_json,
    load_chain,
    load_space,
    read_json,
    space_to_dict,
)
from src.curvature.midpoint import midpoint_defects, midpoint_scan  # noqa: E402
from src.curvature.quadruples import (  # noqa: E402
    QuadrupleWitness,
    four_point_margin,
    four_point_minimal_S,
    four_point_scan,
    ptolemy_margin,
    ptolemy_scan,
)
from src.curvature.sturm import WeightedConfiguration, independent_copy_check, sturm_scan  # noqa: E402
from src.estimators.banach import (  # noqa: E402
    banach_moduli_check,
    banach_moduli_scan,
    markov_cotype_ratio,
    rademacher_ratios,
)
from src.estimators.enflo import HypercubeLabeling, enflo_ratio, enflo_search  # noqa: E402
from src.estimators.markov_type import (  # noqa: E402
    chain_search_multi,
    markov_ratio_power,
    markov_ratio_resolvent,
)
from src.interface.cli.convert import to_csv  # noqa: E402
from src.interface.cli.display import ReportDisplay  # noqa: E402
from src.utils.logging import get_default_log_path, setup_logger  # noqa: E402
from src.verify.corpus import CorpusConfig, run_corpus  # noqa: E402

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

DEFAULT_CORPUS = project_root / "config" / "corpus" / "default.json"


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(f"UsageError: {message}")


def _ints(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _floats(text: str) -> List[float]:
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _p_value(text: str) -> float:
    if text.lower() in ("inf", "infinity", "max"):
        return math.inf
    return float(text)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def _alpha(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1), got {value}")
    return value


# Command handlers return (payload, passed); passed=None means "no verdict".

def cmd_gen(args, lab: LabConfig):
    family = args.family
    if family == "sphere":
        space = generators.sphere_sample(args.n, args.seed, radius=args.radius)
    elif family == "gaussian":
        space = generators.gaussian_cloud(args.n, args.dim, args.seed, p=args.p)
    elif family == "tripod":
        space = generators.tripod(args.leg)
    elif family == "cycle":
        space = generators.cycle(args.n)
    elif family == "path":
        space = generators.path_graph(args.n)
    elif family == "square":
        space = generators.unit_square()
    elif family == "graph":
        path = _need(args.input, "--input (graph JSON)")
        data = read_json(path)
        with decoding(path):
            space = generators.graph_metric(int(data["n"]), data["edges"], labels=data.get("labels"))
    elif family == "lp":
        path = _need(args.input, "--input (coordinates JSON)")
        data = read_json(path)
        with decoding(path):
            coords = data["coords"] if isinstance(data, dict) else data
            space = generators.lp_point_space(coords, p=args.p)
    elif family == "matrix":
        path = _need(args.input, "--input (distance matrix JSON)")
        data = read_json(path)
        with decoding(path):
            dist = data["dist"] if isinstance(data, dict) else data
            space = validate_metric(dist, tol_rel=lab.metric_tol, source="matrix")
    else:
        left = load_space(_need(args.left, "--left"), tol_rel=lab.metric_tol)
        right = load_space(_need(args.right, "--right"), tol_rel=lab.metric_tol)
        space = generators.product_space(left, right, cap=lab.product_cap)
    return space_to_dict(space), None


def cmd_chain(args, lab: LabConfig):
    if args.validate:
        chain = load_chain(args.validate)
        report = validate_chain(chain, tol_abs=args.tol if args.tol is not None else lab.chain_tol)
        return report.to_dict(), report.passed
    if args.random:
        return chain_to_dict(random_weight_chain(args.random, args.seed)), None
    path = _need(args.weights, "a weights file, --random N or --validate FILE")
    data = read_json(path)
    with decoding(path):
        weights = data["weights"] if isinstance(data, dict) else data
        chain = chain_from_weights(weights)
    return chain_to_dict(chain), None


def cmd_mtype(args, lab: LabConfig):
    space = load_space(args.space, tol_rel=lab.metric_tol)
    if args.search:
        L = args.L or lab.search_horizon
        budget = args.budget or lab.search_budget
        seeds = [args.seed + k for k in range(args.restarts)]
        results = chain_search_multi(space, seeds, L=L, budget=budget, threads=args.threads)
        chain, report = results[0]
        return {"chain": chain_to_dict(chain), "report": report.to_dict()}, None
    chain = load_chain(_need(args.chain, "--chain (or --search)"))
    if args.alpha is not None:
        return markov_ratio_resolvent(space, chain, args.alpha).to_dict(), None
    if args.l is not None:
        return markov_ratio_power(space, chain, args.l).to_dict(), None
    raise UsageError("UsageError: mtype needs --alpha, --l or --search")


def _labeling(data) -> HypercubeLabeling:
    """A list assign[v], or {"assign": ...} with a list or {"+-+": index} sign strings."""
    assign = data["assign"] if isinstance(data, dict) and "assign" in data else data
    if isinstance(assign, dict):
        return HypercubeLabeling.from_signs(
            {tuple(1 if c == "+" else -1 for c in key): int(x) for key, x in assign.items()})
    N = max(len(assign), 1).bit_length() - 1
    if not assign or 1 << N != len(assign):
        raise UsageError(f"UsageError: a labeling needs 2^N entries, got {len(assign)}")
    return HypercubeLabeling(N=N, assign=tuple(assign))


def cmd_enflo(args, lab: LabConfig):
    space = load_space(args.space, tol_rel=lab.metric_tol)
    if args.labeling:
        data = read_json(args.labeling)
        with decoding(args.labeling):
            labeling = _labeling(data)
        return enflo_ratio(space, labeling).to_dict(), None
    budget = args.budget or lab.enflo_budget
    labeling, report = enflo_search(space, args.N, mode=args.mode, seed=args.seed, budget=budget,
                                    cap=lab.enflo_cap)
    return {"labeling": labeling.to_dict(), "report": report.to_dict()}, None


def _vectors(path: str):
    data = read_json(path)
    with decoding(path):
        return data["vectors"] if isinstance(data, dict) else data


def cmd_cotype(args, lab: LabConfig):
    vectors = _vectors(args.vectors)
    if args.chain:
        if args.alpha is None:
            raise UsageError("UsageError: Markov cotype needs --alpha")
        return markov_cotype_ratio(vectors, args.p, load_chain(args.chain), args.alpha).to_dict(), None
    ratios = rademacher_ratios(vectors, args.p, cap=lab.rademacher_cap)
    return {"check": "rademacher", "type_ratio": ratios.type_ratio, "cotype_ratio": ratios.cotype_ratio,
            "p": "inf" if math.isinf(args.p) else args.p}, None


def cmd_banach(args, lab: LabConfig):
    tol = args.tol if args.tol is not None else lab.check_tol
    constant = args.constant
    if constant is None:
        if args.mode == "smooth" and args.p >= 2:
            constant = math.sqrt(args.p - 1.0)
        elif args.mode == "convex" and 1.0 < args.p <= 2:
            constant = 1.0 / math.sqrt(args.p - 1.0)
        else:
            raise UsageError("UsageError: no default constant for this p and mode; pass --constant")
    if args.v is not None or args.w is not None:
        if args.v is None or args.w is None:
            raise UsageError("UsageError: --v and --w go together")
        report = banach_moduli_check(args.v, args.w, args.p, args.mode, constant, tol=tol)
    else:
        report = banach_moduli_scan(args.p, args.mode, constant, pairs=args.pairs, dim=args.dim,
                                    seed=args.seed, tol=tol)
    return report.to_dict(), report.passed


def cmd_check(args, lab: LabConfig):
    space = load_space(args.space, tol_rel=lab.metric_tol)
    tol = args.tol if args.tol is not None else lab.check_tol
    allowed = tol * space.diameter ** 2
    kind = args.kind
    for flag in ("quad", "triple", "indices"):
        idx = getattr(args, flag)
        if idx and not all(0 <= i < space.n for i in idx):
            raise UsageError(f"UsageError: --{flag} {idx} indexes outside a {space.n}-point space")

    if kind == "sturm":
        report = sturm_scan(space, trials=args.trials, seed=args.seed, tol=tol,
                            max_subset=lab.sturm_subset_size, exhaustive_cap=lab.sturm_subset_cap)
    elif kind == "fourpoint":
        if args.quad:
            q = QuadrupleWitness(*args.quad)
            margin = four_point_margin(space, q, args.S)
            report = CheckReport(check="four_point", passed=margin >= -allowed, margin=margin,
                                 tolerance=allowed, witness={**q.to_dict(), "S": args.S})
        else:
            margin, q = four_point_scan(space, args.S)
            report = CheckReport(check="four_point_scan", passed=margin >= -allowed, margin=margin,
                                 tolerance=allowed, witness={**q.to_dict(), "S": args.S})
    elif kind == "ptolemy":
        if args.quad:
            q = QuadrupleWitness(*args.quad)
            margin = ptolemy_margin(space, q)
            witness = q.to_dict()
        else:
            margin, q = ptolemy_scan(space)
            witness = q.to_dict()
        report = CheckReport(check="ptolemy", passed=margin >= -allowed, margin=margin, tolerance=allowed,
                             witness=witness)
    elif kind == "midpoint":
        if args.triple:
            lower, upper = midpoint_defects(space, *args.triple, args.S)
            witness: Dict[str, Any] = {"triple": args.triple}
        else:
            scan = midpoint_scan(space, args.S)
            lower, upper = scan.lower_margin, scan.upper_margin
            witness = {"lower_witness": scan.lower_witness, "upper_witness": scan.upper_witness,
                       "skipped_pairs": scan.skipped}
        margins = {"lower": lower, "upper": upper}
        chosen = [margins[k] for k in (("lower", "upper") if args.inequality == "both" else (args.inequality,))]
        margin = min(chosen)
        report = CheckReport(check=f"midpoint_{args.inequality}", passed=margin >= -allowed, margin=margin,
                             tolerance=allowed, witness={**witness, "lower_margin": lower,
                                                         "upper_margin": upper, "S": args.S})
    elif kind == "independent":
        indices = _need(args.indices, "--indices")
        weights = args.weights or [1.0 / len(indices)] * len(indices)
        config = WeightedConfiguration(indices=tuple(indices), weights=tuple(weights), y=indices[0])
        report = independent_copy_check(space, config, tol=tol)
    else:
        s_min, four_q = four_point_minimal_S(space)
        pto, pto_q = ptolemy_scan(space)
        payload = {"check": "quadruple_scan", "S_min": s_min, "four_point_witness": four_q.to_dict(),
                   "ptolemy_min_margin": pto, "ptolemy_witness": pto_q.to_dict()}
        return to_builtin(payload), None
    return report.to_dict(), report.passed


def cmd_verify(args, lab: LabConfig):
    config = CorpusConfig.from_file(args.corpus or DEFAULT_CORPUS)
    report = run_corpus(config, threads=args.threads)
    return report.to_dict(), report.passed


def cmd_convert(args, lab: LabConfig):
    return read_json(args.report), None


def _need(value, what: str):
    if value is None:
        raise UsageError(f"UsageError: missing {what}")
    return value


def _emit(payload: Any, fmt: str, output: Optional[str]) -> None:
    text = to_csv(payload) if fmt == "csv" else dumps_json(payload) + "\n"
    if output:
        path = Path(output)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", newline="") as f:
                f.write(text)
        except OSError as e:
            raise UsageError(f"UsageError: cannot write {output}: {e}")
    else:
        sys.stdout.write(text)


def build_parser() -> ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="Write the result here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], default=None,
                        help="Output format: json (default) or csv (flat ratio tables)")
    common.add_argument("--threads", type=_positive, default=None,
                        help="Worker threads (never changes output; falls back to CURVTYPE_THREADS)")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--lab-config", default=None, help="YAML configuration (default: config/config.yaml)")
    common.add_argument("--quiet", action="store_true", help="No summary on stderr")

    parser = ArgumentParser(prog="curvtype",
                            description="Finite-instance laboratory for Markov type, Enflo type and "
                                        "nonnegative curvature inequalities")
    sub = parser.add_subparsers(dest="command", parser_class=ArgumentParser)

    p = sub.add_parser("gen", parents=[common], help="Generate a finite metric space",
                       description="Finite metric space (distance matrix d_ij, optional coordinates) "
                                   "from a generator family")
    p.add_argument("family", choices=["sphere", "gaussian", "tripod", "cycle", "path", "square", "graph",
                                      "lp", "matrix", "product"])
    p.add_argument("--n", type=_positive, default=8)
    p.add_argument("--dim", type=_positive, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--leg", type=float, default=1.0)
    p.add_argument("--p", type=_p_value, default=2.0)
    p.add_argument("--input", help="JSON input for graph, lp and matrix families")
    p.add_argument("--left", help="Left factor space JSON (product)")
    p.add_argument("--right", help="Right factor space JSON (product)")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("chain", parents=[common], help="Build or validate a reversible chain",
                       description="Stationary reversible Markov chain: pi_i = w_i / sum w, a_ij = w_ij/w_i. "
                                   "--validate checks pi_i a_ij = pi_j a_ji and the row/mass constraints")
    p.add_argument("weights", nargs="?", help="Symmetric nonnegative weight matrix JSON")
    p.add_argument("--validate", metavar="CHAIN", help="Validate a chain JSON file")
    p.add_argument("--random", type=_positive, metavar="N", help="Random exponential-weight chain on N states")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(handler=cmd_chain)

    p = sub.add_parser("mtype", parents=[common], help="Markov type 2 ratios and chain search",
                       description="Markov type 2 lower bounds: resolvent form "
                                   "(1-a) sum pi_i c_ij d_ij^2 <= K^2 a sum pi_i a_ij d_ij^2 (--alpha), "
                                   "power form E(l) <= K^2 l E(1) (--l), or a seeded search over chains (--search)")
    p.add_argument("space")
    p.add_argument("--chain")
    p.add_argument("--alpha", type=_alpha)
    p.add_argument("--l", type=_positive)
    p.add_argument("--search", action="store_true")
    p.add_argument("--L", type=_positive, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=_positive, default=None)
    p.add_argument("--restarts", type=_positive, default=1, help="Independent seeds seed..seed+k-1")
    p.set_defaults(handler=cmd_mtype)

    p = sub.add_parser("enflo", parents=[common], help="Enflo type 2 ratios over hypercube labelings",
                       description="Enflo type 2 lower bounds: sum_eps d(x_eps, x_-eps)^2 over "
                                   "sum_{eps~eps'} d(x_eps, x_eps')^2, both sums ordered")
    p.add_argument("space")
    p.add_argument("--N", type=_positive, default=2)
    p.add_argument("--mode", choices=["exhaustive", "local"], default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=_positive, default=None)
    p.add_argument("--labeling", help="JSON list assign[v], v encoding signs by bits")
    p.set_defaults(handler=cmd_enflo)

    p = sub.add_parser("cotype", parents=[common], help="Rademacher type/cotype and Markov cotype ratios",
                       description="Rademacher type/cotype 2: E||sum eps_i v_i||^2 against sum ||v_i||^2; "
                                   "with --chain, Markov cotype 2: a sum a_ij ||sum_k (c_ik - c_jk) v_k||^2 over "
                                   "(1-a) sum c_ij ||v_i - v_j||^2 for uniform pi")
    p.add_argument("--vectors", required=True, help="JSON list of vectors (or scalars)")
    p.add_argument("--p", type=_p_value, default=2.0)
    p.add_argument("--chain")
    p.add_argument("--alpha", type=_alpha)
    p.set_defaults(handler=cmd_cotype)

    p = sub.add_parser("banach", parents=[common], help="Moduli of smoothness/convexity of power type 2",
                       description="2-uniform smoothness ||(v+w)/2||^2 >= (||v||^2+||w||^2)/2 - (S^2/4)||v-w||^2 "
                                   "or convexity ||(v+w)/2||^2 <= (||v||^2+||w||^2)/2 - ||v-w||^2/(4C^2) in lp")
    p.add_argument("--p", type=_p_value, required=True)
    p.add_argument("--mode", choices=["smooth", "convex"], default="smooth")
    p.add_argument("--constant", type=float, default=None, help="S or C (default sqrt(p-1) or 1/sqrt(p-1))")
    p.add_argument("--v", type=_floats)
    p.add_argument("--w", type=_floats)
    p.add_argument("--pairs", type=_positive, default=10_000)
    p.add_argument("--dim", type=_positive, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(handler=cmd_banach)

    p = sub.add_parser("check", parents=[common], help="Curvature inequality checks",
                       description="sturm: barycentric inequality sum a_i a_j (d_ij^2 - d_iy^2 - d_jy^2) <= 0; "
                                   "fourpoint: d_wy^2 + d_xz^2 <= S^2 (d_wx^2 + d_yz^2) + d_wz^2 + d_yx^2; "
                                   "ptolemy: d_wy d_xz <= d_wx d_yz + d_wz d_yx; "
                                   "midpoint: comparison of d(x, m(y,z))^2 with S; "
                                   "independent: E d(Z,Z')^2 <= 2 E d(Z,y)^2; "
                                   "quadruple-scan: minimal four-point S and worst Ptolemy quadruple")
    p.add_argument("kind", choices=["sturm", "fourpoint", "ptolemy", "midpoint", "independent", "quadruple-scan"])
    p.add_argument("space")
    p.add_argument("--trials", type=_positive, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--S", type=float, default=1.0)
    p.add_argument("--quad", type=_ints, help="w,x,y,z")
    p.add_argument("--triple", type=_ints, help="x,y,z")
    p.add_argument("--inequality", choices=["lower", "upper", "both"], default="both")
    p.add_argument("--indices", type=_ints)
    p.add_argument("--weights", type=_floats)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("verify", parents=[common], help="Run verification suites over a corpus",
                       description="Replays the halving lemma E(2l) <= 2E(l), the bound "
                                   "E(l) <= (3+2 sqrt 2) l E(1), the resolvent series identity, Enflo and "
                                   "Ptolemy bounds and the Banach moduli over a seeded corpus")
    p.add_argument("--config", dest="corpus", help="Corpus JSON (default: config/corpus/default.json)")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("convert", parents=[common], help="Convert a JSON report to CSV",
                       description="Flat rows (suite, case, l, alpha, numerator, denominator, ratio, margin, "
                                   "pass) at 17 significant digits")
    p.add_argument("report")
    p.set_defaults(handler=cmd_convert, default_format="csv")

    return parser


def _validate_shapes(args) -> None:
    for name, size in (("quad", 4), ("triple", 3)):
        value = getattr(args, name, None)
        if value is not None and len(value) != size:
            raise UsageError(f"UsageError: --{name} needs {size} indices, got {len(value)}")


def _setup_logging(args, lab: LabConfig) -> None:
    settings = lab.logging
    level = args.log_level or settings.get("level", "WARNING")
    log_file = None
    if settings.get("log_to_file"):
        log_file = get_default_log_path("curvtype", settings.get("log_dir", "logs"))
    setup_logger("src", log_file=log_file, level=level, fmt=settings.get("format"))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand; returns 0 (pass), 1 (check failed) or 2 (usage/input error)."""
    display = ReportDisplay()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        display.show_error(str(e))
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return int(e.code or 0)
    if not getattr(args, "handler", None):
        display.show_error("UsageError: a subcommand is required (see --help)")
        return EXIT_USAGE

    try:
        _validate_shapes(args)
        lab = LabConfig(Path(args.lab_config)) if args.lab_config else get_config()
        set_config(lab)
        _setup_logging(args, lab)
        display.quiet = args.quiet
        if args.threads is None:
            args.threads = lab.threads
        fmt = args.format or getattr(args, "default_format", None) or lab.get("cli", "format", "json")
        payload, passed = args.handler(args, lab)
        _emit(payload, fmt, args.output)
    except CurvTypeError as e:
        display.show_error(str(e).splitlines()[0] if str(e) else type(e).__name__)
        logger.debug("Command failed", exc_info=True)
        return EXIT_USAGE

    if isinstance(payload, dict) and args.command != "convert":
        display.show(payload)
    return EXIT_FAILED if passed is False else EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
