"""
Preferential Attachment Toolkit - command line
Exact distributions, graph growth, asymptotics, equivalence checks and calibration
"""
import argparse
import json
import logging
import re
import sys
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from config.settings import settings
from core.documents import (
    calibrated_from_document, calibrated_to_document, is_calibration_document, model_from_document,
)
from core.errors import DomainError, InputFormatError, PAGraphError
from core.model import (
    ConstantWeight, FixedIncrement, GeneralRule, HybridRule, IncrementSpec, LinearRule, LinearWeight,
    ModelSpec, StochasticIncrement, TabulatedWeight, attachment_probabilities_hybrid,
    attachment_probabilities_L, attachment_probabilities_P, p_to_l,
)
from distributions.exact import exact_vdd, vdd_const, vdd_L, vdd_P
from distributions.joint import edge_from_arc, joint_general, joint_L, joint_P
from distributions.meanfield import alpha_to_s, classify, describe_regime, meanfield_vdd, Exponential
from generator.growth import grow
from generator.histograms import mean_degree_histogram, mean_joint_histogram
from generator.replication import replication_seed, run_replications
from calibration.empirical import load_degree_file
from calibration.fitting import CalibrationOptions, calibrate
from calibration.validation import validate
from export_utils import (
    curves_to_csv, edge_list_text, joint_to_csv, json_line, vdd_to_csv, write_output,
)

logger = logging.getLogger(__name__)

EQUIVALENCE_TOLERANCE = 1e-12


class UsageError(PAGraphError):
    """Bad command-line arguments"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        match = re.search(r"argument (--[\w-]+)", message)
        if match is None:
            match = re.search(r"required: (--[\w-]+)", message)
        raise UsageError(message, flag=match.group(1) if match else None)


# ---------------------------------------------------------------------------
# Flag parsing
# ---------------------------------------------------------------------------

def _parse_pairs(text: str, flag: str) -> List[Tuple[float, float]]:
    pairs = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [part for part in re.split(r"[,\s:]+", line) if part]
        if len(fields) != 2:
            raise InputFormatError(f"expected two columns, got {raw.strip()!r}", line_number, flag=flag)
        try:
            pairs.append((float(fields[0]), float(fields[1])))
        except ValueError:
            raise InputFormatError(f"non-numeric value in {raw.strip()!r}", line_number, flag=flag)
    if not pairs:
        raise InputFormatError("no values given", flag=flag)
    return pairs


def _read_file(path: str, flag: str, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise InputFormatError(f"{what} is not valid UTF-8: {e}", flag=flag) from e
    except OSError as e:
        raise InputFormatError(f"cannot read {what}: {e}", flag=flag) from e


def parse_increment(value: str) -> StochasticIncrement:
    """`x:p,x:p,...` inline, or a file of `x p` lines"""
    path = Path(value)
    if path.is_file():
        pairs = _parse_pairs(_read_file(value, "--increment-dist", "increment file"), "--increment-dist")
    else:
        pairs = _parse_pairs("\n".join(value.split(",")), "--increment-dist")
    mapping = {}
    for x, p in pairs:
        if not x.is_integer():
            raise DomainError(f"increment size {x} is not an integer", flag="--increment-dist")
        if int(x) in mapping:
            raise DomainError(f"increment size {int(x)} given twice", flag="--increment-dist")
        mapping[int(x)] = p
    return StochasticIncrement.from_mapping(mapping)


def parse_weights_file(path: str, tail_s: Optional[float]) -> TabulatedWeight:
    """Head values `k f` on consecutive degrees; the tail k + s starts right after"""
    pairs = _parse_pairs(_read_file(path, "--weights-file", "weights file"), "--weights-file")
    ks = [k for k, _ in pairs]
    if any(not k.is_integer() for k in ks) or any(b != a + 1 for a, b in zip(ks, ks[1:])):
        raise DomainError("weights file degrees must be consecutive integers", flag="--weights-file")
    if tail_s is None:
        raise DomainError("a tabulated weight function needs the tail displacement --s", flag="--s")
    return TabulatedWeight(tuple(f for _, f in pairs), tail_s, int(ks[-1]) + 1)


def _parse_fit_range(value: Optional[str]) -> Optional[Tuple[int, int]]:
    if value is None:
        return None
    match = re.fullmatch(r"\s*(\d+)\s*:\s*(\d+)\s*", value)
    if match is None:
        raise DomainError(f"fit range must look like lo:hi, got {value!r}", flag="--fit-range")
    lo, hi = int(match.group(1)), int(match.group(2))
    if lo > hi:
        raise DomainError(f"fit range {lo}:{hi} is empty", flag="--fit-range")
    return lo, hi


def _fixed_m(args) -> int:
    if args.m is None:
        raise DomainError("--m is required", flag="--m")
    if not float(args.m).is_integer() or args.m < 1:
        raise DomainError(f"--m must be a positive integer here, got {args.m}; use --increment-dist",
                          flag="--m")
    return int(args.m)


def _increment(args) -> IncrementSpec:
    if getattr(args, "increment_dist", None):
        return parse_increment(args.increment_dist)
    return FixedIncrement(_fixed_m(args))


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise DomainError(f"cannot read model file: {e}", flag="--model-file") from e


def build_model(args) -> ModelSpec:
    """ModelSpec from --model-file or from the individual model flags"""
    if getattr(args, "model_file", None):
        data = _load_json(args.model_file)
        if is_calibration_document(data):
            return calibrated_from_document(data)[0]
        return model_from_document(data)
    if args.model is None:
        raise DomainError("--model or --model-file is required", flag="--model")
    increment = _increment(args)
    if args.model == "P":
        if args.a is None:
            raise DomainError("--model P needs --a", flag="--a")
        return ModelSpec(HybridRule(args.a), increment)
    if args.model == "const":
        return ModelSpec(LinearRule(ConstantWeight()), increment)
    if args.model == "L":
        return ModelSpec(LinearRule(LinearWeight(args.s if args.s is not None else 0.0)), increment)
    if args.weights_file:
        return ModelSpec(GeneralRule(parse_weights_file(args.weights_file, args.s)), increment)
    if args.s is None:
        raise DomainError("--model general needs --weights-file or --s", flag="--weights-file")
    return ModelSpec(GeneralRule(LinearWeight(args.s)), increment)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_exact_vdd(args) -> int:
    model = build_model(args)
    dist = exact_vdd(model, args.kmax, args.mean_weight)
    write_output(vdd_to_csv(dist), args.out)
    return 0


def cmd_exact_joint(args) -> int:
    model = build_model(args)
    if not isinstance(model.increment, FixedIncrement):
        raise DomainError("joint distributions are defined for a fixed m only", flag="--increment-dist")
    m = model.increment.m
    if isinstance(model.rule, HybridRule):
        joint = joint_P(m, model.rule.a, args.kmax_joint)
    elif isinstance(model.rule, LinearRule) and isinstance(model.rule.weight, LinearWeight) \
            and args.mean_weight is None:
        joint = joint_L(m, model.rule.weight.s, args.kmax_joint)
    else:
        joint = joint_general(model.weight, m, args.mean_weight, args.kmax_joint)
    if args.kind == "edge":
        joint = edge_from_arc(joint)
    write_output(joint_to_csv(joint), args.out)
    return 0


def cmd_generate(args) -> int:
    model = build_model(args)
    results = run_replications(model, args.n, args.seed, args.replications, args.workers,
                               args.distinct_targets, with_joint=bool(args.joint_out),
                               k_max_joint=args.kmax_joint)
    write_output(vdd_to_csv(mean_degree_histogram([r.degree for r in results])), args.out)
    if args.joint_out:
        joint = mean_joint_histogram([r.arc_joint for r in results])
        if args.kind == "edge":
            joint = edge_from_arc(joint)
        write_output(joint_to_csv(joint), args.joint_out)
    if args.edge_list:
        graph = grow(model, args.n, replication_seed(args.seed, 0), args.distinct_targets)
        write_output(edge_list_text(graph.arcs), args.edge_list)
    return 0


def _asymptotic_pair(args) -> Tuple[float, Optional[float]]:
    """(m, s) of the model; s is None for an exponential degree distribution"""
    if args.alpha is not None:
        if args.m is None:
            raise DomainError("--alpha needs --m", flag="--m")
        return args.m, alpha_to_s(args.alpha, args.m)
    simple = not (args.model_file or args.increment_dist or args.weights_file)
    if simple and args.model in ("L", "P", "const"):
        if args.m is None:
            raise DomainError("--m is required", flag="--m")
        if args.model == "const":
            return args.m, None
        if args.model == "L":
            return args.m, args.s if args.s is not None else 0.0
        if args.a is None:
            raise DomainError("--model P needs --a", flag="--a")
        mapped = p_to_l(args.m, args.a)
        return args.m, None if isinstance(mapped, ConstantWeight) else mapped
    model = build_model(args)
    asymptotic = classify(model)
    if isinstance(asymptotic, Exponential):
        return model.m, None
    return model.m, (asymptotic.alpha - 3.0) * model.m


def cmd_asymptotics(args) -> int:
    m, s = _asymptotic_pair(args)
    if s is None:
        write_output("class = exponential\n", args.out)
        return 0
    lines = [f"s = {s:.17g}"]
    for key, value in describe_regime(m, s).as_dict().items():
        if isinstance(value, float):
            value = f"{value:.17g}"
        lines.append(f"{key} = {value}")
    if args.curve_out:
        if not float(m).is_integer():
            raise DomainError("the exact comparison curve needs an integer m", flag="--m")
        exact = vdd_L(int(m), s, args.kmax)
        ks = exact.degrees()
        rows = zip(ks, exact.q, meanfield_vdd(m, s, ks))
        write_output(curves_to_csv(["k", "Q_exact", "Q_meanfield"], rows), args.curve_out)
    write_output("\n".join(lines) + "\n", args.out)
    return 0


def cmd_equivalence_check(args) -> int:
    m = _fixed_m(args)
    if args.a is None:
        raise DomainError("--a is required", flag="--a")
    a = args.a
    mapped = p_to_l(m, a)
    k_max = settings.kmax if args.kmax is None else args.kmax
    vdd_p = vdd_P(m, a, k_max)
    vdd_twin = vdd_const(m, k_max) if isinstance(mapped, ConstantWeight) else vdd_L(m, mapped, k_max)
    report = {
        "m": m,
        "a": a,
        "s": "const" if isinstance(mapped, ConstantWeight) else mapped,
        "vdd_max_abs_diff": float(np.max(np.abs(vdd_p.q - vdd_twin.q))),
    }

    k_joint = min(settings.kmax_joint, 500) if args.kmax_joint is None else args.kmax_joint
    joint_p = joint_P(m, a, k_joint)
    if isinstance(mapped, ConstantWeight):
        joint_twin = joint_general(ConstantWeight(), m, 1.0, k_joint)
    else:
        joint_twin = joint_L(m, mapped, k_joint)
    report["joint_sup_norm"] = float(np.max(np.abs(joint_p.q - joint_twin.q)))

    if args.n is not None:
        if args.seed is None:
            raise DomainError("randomized checks need --seed", flag="--seed")
        graph = grow(ModelSpec(HybridRule(a), FixedIncrement(m)), args.n, args.seed)
        p_rule = attachment_probabilities_P(graph.degree, m, a)
        if isinstance(mapped, ConstantWeight):
            l_rule = np.full(graph.n, 1.0 / graph.n)
        else:
            l_rule = attachment_probabilities_L(graph.degree, mapped)
        report["attachment_sup_norm"] = float(np.max(np.abs(p_rule - l_rule)))
        report["hybrid_attachment_sup_norm"] = float(
            np.max(np.abs(attachment_probabilities_hybrid(graph.degree, a) - l_rule))
        )

    checked = [v for key, v in report.items() if key.endswith("sup_norm") or key.endswith("diff")]
    passed = all(v < EQUIVALENCE_TOLERANCE for v in checked)
    report["tolerance"] = EQUIVALENCE_TOLERANCE
    report["success"] = passed
    write_output(json_line(report), args.out)
    if not passed:
        logger.error(f"equivalence check failed: {report}")
    return 0 if passed else 1


def cmd_calibrate(args) -> int:
    emp = load_degree_file(args.degree_file, edges=args.edges)
    opts = CalibrationOptions(
        edges=args.edges,
        m=args.m,
        k_head=args.k_head,
        fit_range=_parse_fit_range(args.fit_range),
        increment=parse_increment(args.increment_dist) if args.increment_dist else None,
        k_max=args.kmax,
    )
    model = calibrate(emp, opts)
    document = calibrated_to_document(model.to_model_spec(), model.m, model.alpha, model.mean_weight,
                                      model.diagnostics.as_dict())
    write_output(json.dumps(document, indent=2) + "\n", args.out)
    return 0


def cmd_validate(args) -> int:
    reference = load_degree_file(args.degree_file, edges=args.edges)
    fit_range = _parse_fit_range(args.fit_range)
    k_head = args.k_head
    if getattr(args, "model_file", None):
        data = _load_json(args.model_file)
        if is_calibration_document(data):
            model, doc = calibrated_from_document(data)
            fit_range = fit_range or tuple(doc.fit_diagnostics.fit_range)
            if k_head is None and doc.weights is not None:
                k_head = doc.weights.k_head
        else:
            model = model_from_document(data)
    else:
        model = build_model(args)
    report = validate(model, reference, args.n, args.replications, args.seed, args.workers,
                      args.kmax, fit_range, args.distinct_targets, k_head)
    write_output(json_line(report.as_dict()))
    if args.out:
        write_output(curves_to_csv(["k", "exact", "reference", "simulated"], report.curve_rows()), args.out)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_model_flags(p: argparse.ArgumentParser):
    p.add_argument("--model", choices=["L", "P", "const", "general"])
    p.add_argument("--m", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--increment-dist", dest="increment_dist")
    p.add_argument("--weights-file", dest="weights_file")
    p.add_argument("--model-file", dest="model_file")


def _add_sim_flags(p: argparse.ArgumentParser, seed_required: bool = True):
    p.add_argument("--n", type=int, required=seed_required)
    p.add_argument("--seed", type=int, required=seed_required)
    p.add_argument("--replications", type=int, default=1)
    p.add_argument("--workers", type=int)
    p.add_argument("--distinct-targets", dest="distinct_targets", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pagraph", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("exact-vdd", help="exact vertex degree distribution")
    _add_model_flags(p)
    p.add_argument("--kmax", type=int)
    p.add_argument("--mean-weight", dest="mean_weight", type=float)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_exact_vdd)

    p = sub.add_parser("exact-joint", help="exact arc/edge endpoint degree distribution")
    _add_model_flags(p)
    p.add_argument("--kmax-joint", dest="kmax_joint", type=int)
    p.add_argument("--mean-weight", dest="mean_weight", type=float)
    p.add_argument("--kind", choices=["arc", "edge"], default="arc")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_exact_joint)

    p = sub.add_parser("generate", help="grow graphs and report degree histograms")
    _add_model_flags(p)
    _add_sim_flags(p)
    p.add_argument("--kmax-joint", dest="kmax_joint", type=int)
    p.add_argument("--kind", choices=["arc", "edge"], default="arc")
    p.add_argument("--out")
    p.add_argument("--joint-out", dest="joint_out")
    p.add_argument("--edge-list", dest="edge_list")
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("asymptotics", help="mean-field exponent and classification")
    _add_model_flags(p)
    p.add_argument("--alpha", type=float)
    p.add_argument("--kmax", type=int)
    p.add_argument("--curve-out", dest="curve_out")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_asymptotics)

    p = sub.add_parser("equivalence-check", help="P-graph vs equivalent L-graph identities")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--kmax", type=int)
    p.add_argument("--kmax-joint", dest="kmax_joint", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_equivalence_check)

    p = sub.add_parser("calibrate", help="fit a model to a degree histogram")
    p.add_argument("degree_file")
    p.add_argument("--edges", type=float)
    p.add_argument("--m", type=float)
    p.add_argument("--k-head", dest="k_head", type=int)
    p.add_argument("--fit-range", dest="fit_range")
    p.add_argument("--increment-dist", dest="increment_dist")
    p.add_argument("--kmax", type=int)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_calibrate)

    p = sub.add_parser("validate", help="compare a model with data and simulation")
    p.add_argument("degree_file")
    _add_model_flags(p)
    _add_sim_flags(p)
    p.add_argument("--edges", type=float)
    p.add_argument("--k-head", dest="k_head", type=int)
    p.add_argument("--fit-range", dest="fit_range")
    p.add_argument("--kmax", type=int)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_validate)
    return parser


def _report_error(error: PAGraphError) -> None:
    sys.stderr.write(json_line(error.to_dict()))
    sys.stderr.flush()


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        args = build_parser().parse_args(argv)
        return args.handler(args)
    except (UsageError, DomainError) as e:
        _report_error(e)
        return 2
    except PAGraphError as e:
        logger.debug("computation failed", exc_info=True)
        _report_error(e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
