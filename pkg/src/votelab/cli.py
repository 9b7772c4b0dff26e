"""Command-line front end: scoring, sampling, reductions, experiments.

Exit codes: 0 success, 1 malformed input, 2 search budget exceeded,
3 reduction construction failure, 4 experiment verdict failure.
Machine output is JSON on stdout; ``--pretty`` adds a fixed-width table.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import io as vio
from .errors import BudgetExceededError, ConstructionError
from .experiments import ExperimentConfig, run_experiment, write_report
from .greedy_dodgson import greedy_dodgson, semirandom_dodgson_decision
from .models import ParameterProfile, model_from_spec, sample_profile
from .reductions import (
    efas_via_kemeny,
    mcgarvey_profile,
    x3c_to_dodgson,
)
from .rules_exact import (
    Committee,
    cc_score,
    committee_decision,
    dodgson_score_exact,
    kemeny_best,
    kemeny_decision,
    kemeny_score_of_alternative,
    monroe_score,
    young_score_exact,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BUDGET = 2
EXIT_CONSTRUCTION = 3
EXIT_VERDICT = 4


def _emit(result: dict, pretty: bool) -> None:
    print(json.dumps(result, sort_keys=True))
    if pretty:
        width = max((len(k) for k in result), default=0)
        for key in sorted(result):
            print(f"{key:<{width}}  {result[key]}", file=sys.stderr)


def _default_budget(args) -> int | None:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("VOTELAB_BUDGET")
    return int(env) if env else None


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    return int(np.random.SeedSequence().entropy % (2**63))


def _cmd_score(args) -> int:
    profile = vio.read_profile(args.profile)
    budget = _default_budget(args)
    result: dict = {}

    if args.rule == "dodgson":
        kwargs = {"budget": budget} if budget else {}
        score = dodgson_score_exact(profile, _require_alt(args), **kwargs)
        result["score"] = score
        if args.threshold is not None:
            result["decision"] = "yes" if score <= args.threshold else "no"
    elif args.rule == "young":
        kwargs = {"budget": budget} if budget else {}
        score = young_score_exact(profile, _require_alt(args), **kwargs)
        result["score"] = score
        if args.threshold is not None:
            result["decision"] = "yes" if score >= args.threshold else "no"
    elif args.rule == "kemeny":
        kwargs = {"max_m": budget} if budget else {}
        ranking, score = kemeny_best(profile, **kwargs)
        result["min_score"] = score
        result["ranking"] = list(ranking.order)
        if args.alt is not None:
            result["score"] = kemeny_score_of_alternative(profile, args.alt, **kwargs)
        if args.threshold is not None:
            result["decision"] = "yes" if score <= args.threshold else "no"
    elif args.rule in ("cc", "monroe"):
        score_fn = cc_score if args.rule == "cc" else monroe_score
        if args.committee:
            members = Committee.of(int(x) for x in args.committee.split(","))
            result["score"] = score_fn(profile, members, None, args.aggregator)
        elif args.k is not None and args.threshold is not None:
            kwargs = {"budget": budget} if budget else {}
            yes = committee_decision(
                profile, args.k, args.threshold, args.rule, None, args.aggregator, **kwargs
            )
            result["decision"] = "yes" if yes else "no"
        else:
            raise ValueError("cc/monroe need --committee, or --k with --threshold")
    elif args.rule == "greedy-dodgson":
        alt = _require_alt(args)
        greedy = greedy_dodgson(profile, alt)
        result["score"] = greedy.score
        result["certainty"] = greedy.certainty.value
        if args.threshold is not None:
            result["decision"] = semirandom_dodgson_decision(
                profile, alt, args.threshold
            ).value
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown rule {args.rule}")

    _emit(result, args.pretty)
    return EXIT_OK


def _require_alt(args) -> int:
    if args.alt is None:
        raise ValueError("this rule needs --alt")
    return args.alt


def _cmd_sample(args) -> int:
    spec_text = args.model
    if spec_text.startswith("@"):
        spec_text = Path(spec_text[1:]).read_text()
    spec = json.loads(spec_text)
    weighted = vio.read_weighted_profile(args.params)
    model = model_from_spec(spec, weighted.m)
    pp = ParameterProfile(weighted.entries, model)
    seed = _resolve_seed(args.seed)
    profile = sample_profile(pp, np.random.default_rng(np.random.SeedSequence(seed)))
    vio.write_profile(profile, args.out)
    sidecar = Path(str(args.out) + ".seed.json")
    sidecar.write_text(json.dumps({"seed": seed, "model": spec}, sort_keys=True) + "\n")
    _emit({"out": str(args.out), "seed": seed, "sidecar": str(sidecar)}, args.pretty)
    return EXIT_OK


def _cmd_reduce(args) -> int:
    if args.construction == "x3c-dodgson":
        inst = vio.read_x3c(args.input)
        out = x3c_to_dodgson(inst)
        profile_path = Path(f"{args.out_prefix}.profile")
        vio.write_profile(out.profile, profile_path)
        layout = {
            "m1": out.profile.m,
            "n": out.profile.n,
            "critical": out.critical,
            "threshold": out.threshold,
            "element_alts": list(out.layout.element_alts),
            "companion_alts": list(out.layout.companion_alts),
            "subset_alts": list(out.layout.subset_alts),
        }
        layout_path = Path(f"{args.out_prefix}.layout.json")
        layout_path.write_text(json.dumps(layout, sort_keys=True, indent=2) + "\n")
        _emit({"profile": str(profile_path), "layout": str(layout_path)}, args.pretty)
    elif args.construction == "mcgarvey":
        graph = vio.read_digraph(args.input)
        profile = mcgarvey_profile(graph)
        vio.write_profile(profile, args.out)
        _emit({"out": str(args.out), "n": profile.n}, args.pretty)
    elif args.construction == "efas-check":
        graph = vio.read_digraph(args.input)
        if args.threshold is None:
            raise ValueError("efas-check needs --threshold")
        answer = efas_via_kemeny(
            graph,
            args.threshold,
            lambda p, limit: kemeny_decision(p, limit),
            strict=not args.no_strict,
        )
        _emit({"decision": answer.value}, args.pretty)
    else:  # pragma: no cover
        raise ValueError(f"unknown construction {args.construction}")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    cfg_data = json.loads(Path(args.config).read_text())
    if args.out_dir is not None:
        cfg_data["out_dir"] = args.out_dir
    cfg = ExperimentConfig.from_dict(cfg_data)
    report = run_experiment(cfg)
    out_dir = cfg.out_dir or "."
    paths = write_report(report, out_dir)
    print(f"wall clock: {report.wall_clock_seconds:.3f}s", file=sys.stderr)
    _emit({"all_pass": report.all_pass, **paths}, args.pretty)
    return EXIT_OK if report.all_pass else EXIT_VERDICT


class _Parser(argparse.ArgumentParser):
    """Flag errors are malformed input: exit 1, not argparse's default 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="votelab",
        description="Winner determination under NP-hard rules, at desk scale.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    score = sub.add_parser("score", help="exact and greedy scoring")
    score.add_argument(
        "rule",
        choices=["dodgson", "young", "kemeny", "cc", "monroe", "greedy-dodgson"],
    )
    score.add_argument("--profile", required=True)
    score.add_argument("--alt", type=int)
    score.add_argument("--threshold", type=int)
    score.add_argument("--k", type=int)
    score.add_argument("--committee")
    score.add_argument("--aggregator", choices=["sum", "min"], default="sum")
    score.add_argument("--budget", type=int)
    score.add_argument("--pretty", action="store_true")
    score.set_defaults(func=_cmd_score)

    sample = sub.add_parser("sample", help="draw a profile from a parameter profile")
    sample.add_argument("--model", required=True, help="model spec JSON, or @file")
    sample.add_argument("--params", required=True, help="weighted parameter profile")
    sample.add_argument("--out", required=True)
    sample.add_argument("--seed", type=int)
    sample.add_argument("--pretty", action="store_true")
    sample.set_defaults(func=_cmd_sample)

    reduce_p = sub.add_parser("reduce", help="reduction constructions and checks")
    reduce_p.add_argument(
        "construction", choices=["x3c-dodgson", "mcgarvey", "efas-check"]
    )
    reduce_p.add_argument("--input", required=True)
    reduce_p.add_argument("--out")
    reduce_p.add_argument("--out-prefix")
    reduce_p.add_argument("--threshold", type=int)
    reduce_p.add_argument("--no-strict", action="store_true")
    reduce_p.add_argument("--pretty", action="store_true")
    reduce_p.set_defaults(func=_cmd_reduce)

    experiment = sub.add_parser("experiment", help="run a claim verification")
    experiment.add_argument("--config", required=True)
    experiment.add_argument("--out-dir")
    experiment.add_argument("--pretty", action="store_true")
    experiment.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConstructionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    except NotImplementedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
