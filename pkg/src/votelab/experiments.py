"""Monte-Carlo verification harness for the package's probabilistic claims.

Four runnable checks, selected by ``claim`` in the config:

* ``definitely_rate`` — frequency of certified greedy Dodgson answers
  under near-uniform noise, against the success bound
  ``1 - 2(m-1)exp(-n/(72 m^2))``;
* ``concentration`` — the two per-pair tail events behind that bound,
  each against ``exp(-n/(72 m^2))``;
* ``top_preservation`` — frequency of sampled profiles whose top slice
  reproduces a padded reduction profile, against ``1/2``;
* ``cover_driver`` — one-sidedness and NO-rate of the randomized
  exact-cover driver, against ``1/6``.

Every run derives per-trial generators from the master seed, evaluates
bound formulas from exact inputs, and applies a one-sided three-standard-
error slack. Reports serialize to CSV (one row per trial) plus a JSON
summary; wall-clock time stays on the in-memory report only, so reruns
with one seed are byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from .core import Profile, Ranking
from .greedy_dodgson import Decision, greedy_dodgson, immediately_above_count
from .models import AlphaIC, PartialAltRandomization, all_rankings, model_from_spec
from .reductions import (
    X3CInstance,
    x3c_via_dodgson,
    build_padded_parameter_profile,
    top_slice_matches,
    x3c_bruteforce,
    x3c_to_dodgson,
)
from .rules_exact import dodgson_score_within

__all__ = [
    "ExperimentConfig",
    "TrialReport",
    "TopBreakNoise",
    "run_definitely_rate",
    "run_concentration_tails",
    "run_top_preservation",
    "run_cover_driver",
    "run_experiment",
    "write_report",
    "CLAIM_RUNNERS",
]

SLACK_SIGMAS = 3


@dataclass(frozen=True)
class ExperimentConfig:
    """One verification run: which claim, at what scale, from which seed."""

    claim: str
    trials: int
    seed: int
    m: Optional[int] = None
    n: Optional[int] = None
    model: dict = field(default_factory=dict)
    adversary: str = "shared_bottom"
    instance: Optional[dict] = None
    pad: int = 2
    plot_data: bool = False
    out_dir: Optional[str] = None

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.m is not None and self.m < 3:
            raise ValueError("m must be at least 3")
        if self.n is not None and self.n < 1:
            raise ValueError("n must be at least 1")
        if self.claim not in CLAIM_RUNNERS:
            raise ValueError(f"unknown claim {self.claim!r}")
        if self.adversary not in ("shared_bottom", "random_profile"):
            raise ValueError(f"unknown adversary mode {self.adversary!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        allowed = {f.name for f in fields(cls)}
        unknown = set(data) - allowed
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "trials": self.trials,
            "seed": self.seed,
            "m": self.m,
            "n": self.n,
            "model": self.model,
            "adversary": self.adversary,
            "instance": self.instance,
            "pad": self.pad,
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]


@dataclass
class TrialReport:
    """Per-trial rows plus aggregate frequencies, bounds, and verdicts.

    ``wall_clock_seconds`` is never serialized; the CSV/JSON outputs are
    a pure function of the config (seed included).
    """

    config: ExperimentConfig
    rows: list[dict]
    summary: dict
    wall_clock_seconds: float

    @property
    def all_pass(self) -> bool:
        return all(
            c["pass"] or c["vacuous"]
            for c in self.summary["checks"]
            if not c.get("informational", False)
        )


def _binomial_se(rate: float, trials: int) -> float:
    return math.sqrt(max(rate * (1.0 - rate), 0.0) / trials)


def _check(
    name: str,
    empirical: float,
    threshold: float,
    kind: str,
    *,
    vacuous: bool = False,
    informational: bool = False,
    **extra,
) -> dict:
    if kind == "lower_bound":
        ok = empirical >= threshold
    elif kind == "upper_bound":
        ok = empirical <= threshold
    elif kind == "exact":
        ok = empirical == threshold
    else:
        raise ValueError(kind)
    return {
        "name": name,
        "kind": kind,
        "empirical": empirical,
        "threshold": threshold,
        "pass": bool(ok or vacuous),
        "vacuous": vacuous,
        "informational": informational,
        **extra,
    }


def _trial_rngs(cfg: ExperimentConfig) -> list[np.random.Generator]:
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    return [np.random.default_rng(c) for c in children]


# ---------------------------------------------------------------------------
# Shared near-uniform sampling machinery


def _require_alpha_regime(cfg: ExperimentConfig) -> AlphaIC:
    if cfg.m is None or cfg.n is None:
        raise ValueError("this claim needs explicit m and n")
    model = model_from_spec(cfg.model, cfg.m)
    if not isinstance(model, AlphaIC):
        raise ValueError("this claim runs under the uniform-noise model")
    if model.alpha < 1 - Fraction(1, cfg.m):
        raise ValueError(
            f"alpha={model.alpha} below the regime floor 1-1/m={1 - Fraction(1, cfg.m)}"
        )
    return model


def _shared_parameter_trial_profiles(cfg: ExperimentConfig, model: AlphaIC):
    """Yield (trial, profile, target) with every agent on one worst-case parameter.

    The structurally worst adversary shares a single ranking across all
    agents and queries its bottom alternative. Since every score in play
    depends only on the ballot multiset, drawing per-type counts from the
    exact multinomial is distribution-identical to sampling agents one by
    one.
    """
    m, n = cfg.m, cfg.n
    rankings = all_rankings(m)
    parameter = rankings[0]  # ascending order: bottom alternative is m-1
    target = m - 1
    uniform_share = float(model.alpha) / math.factorial(m)
    probs = np.full(len(rankings), uniform_share)
    probs[rankings.index(parameter)] += 1.0 - float(model.alpha)
    probs /= probs.sum()
    for trial, rng in enumerate(_trial_rngs(cfg)):
        counts = rng.multinomial(n, probs)
        profile = Profile.from_counts(
            (rankings[i], int(counts[i])) for i in range(len(rankings))
        )
        yield trial, profile, target


def _random_parameter_trial_profiles(cfg: ExperimentConfig, model: AlphaIC):
    """Per-agent random parameters; the target is the final agent's bottom."""
    from .models import sample as model_sample

    m, n = cfg.m, cfg.n
    for trial, rng in enumerate(_trial_rngs(cfg)):
        parameters = [
            Ranking(tuple(int(x) for x in rng.permutation(m))) for _ in range(n)
        ]
        ballots = tuple(model_sample(model, p, rng) for p in parameters)
        yield trial, Profile(ballots), parameters[-1].order[-1]


def _trial_profiles(cfg: ExperimentConfig, model: AlphaIC):
    if cfg.adversary == "shared_bottom":
        return _shared_parameter_trial_profiles(cfg, model)
    return _random_parameter_trial_profiles(cfg, model)


def _tail_exponent_bound(m: int, n: int) -> tuple[Fraction, float]:
    exponent = Fraction(n, 72 * m * m)
    return exponent, math.exp(-float(exponent))


# ---------------------------------------------------------------------------
# Claim runners


def run_definitely_rate(cfg: ExperimentConfig) -> TrialReport:
    """Frequency of certified greedy answers vs. the success bound."""
    started = time.perf_counter()
    model = _require_alpha_regime(cfg)
    m, n = cfg.m, cfg.n

    rows = []
    definite = 0
    for trial, profile, target in _trial_profiles(cfg, model):
        result = greedy_dodgson(profile, target)
        definite += result.is_definite
        rows.append(
            {
                "trial": trial,
                "definitely": int(result.is_definite),
                "score_lower_bound": result.score,
            }
        )

    rate = definite / cfg.trials
    exponent, tail = _tail_exponent_bound(m, n)
    bound = 1.0 - 2 * (m - 1) * tail
    se = _binomial_se(rate, cfg.trials)
    checks = [
        _check(
            "definitely_rate_vs_success_bound",
            rate,
            bound - SLACK_SIGMAS * se,
            "lower_bound",
            vacuous=bound <= 0.0,
            bound=bound,
            standard_error=se,
            exponent=str(-exponent),
        ),
        # The coarser failure allowance permits up to 1/m uncertified
        # answers; recorded for comparison, never gating.
        _check(
            "definitely_rate_vs_failure_allowance",
            rate,
            1.0 - 1.0 / m,
            "lower_bound",
            informational=True,
        ),
    ]
    summary = {
        "checks": checks,
        "frequencies": {"definitely_rate": rate, "maybe_rate": 1.0 - rate},
        "bounds": {"success_bound": bound, "tail_exponent": str(-exponent)},
        "plot_series": _cumulative_series(rows, "definitely"),
    }
    return TrialReport(cfg, rows, summary, time.perf_counter() - started)


def run_concentration_tails(cfg: ExperimentConfig) -> TrialReport:
    """Both per-pair tail events vs. the shared exponential bound."""
    started = time.perf_counter()
    model = _require_alpha_regime(cfg)
    m, n = cfg.m, cfg.n
    beta = (Fraction(3, 4) - Fraction(1, 2 * m)) * Fraction(n, m)
    prec_limit = Fraction(n, 2) + beta

    exceed_counts: dict[int, int] = {}
    scarce_counts: dict[int, int] = {}
    rows = []
    any_event = []
    for trial, profile, target in _trial_profiles(cfg, model):
        row = {"trial": trial}
        hit = 0
        for b in range(m):
            if b == target:
                continue
            outranked = sum(
                count for r, count in profile.grouped.items() if r.prefers(b, target)
            )
            adjacent = immediately_above_count(profile, target, b)
            row[f"outranked_by_{b}"] = outranked
            row[f"directly_above_{b}"] = adjacent
            if outranked > prec_limit:
                exceed_counts[b] = exceed_counts.get(b, 0) + 1
                hit = 1
            if adjacent < beta:
                scarce_counts[b] = scarce_counts.get(b, 0) + 1
                hit = 1
        any_event.append({"event": hit})
        rows.append(row)

    exponent, tail_bound = _tail_exponent_bound(m, n)
    worst_exceed = max((v / cfg.trials for v in exceed_counts.values()), default=0.0)
    worst_scarce = max((v / cfg.trials for v in scarce_counts.values()), default=0.0)
    checks = [
        _check(
            "majority_overshoot_tail",
            worst_exceed,
            tail_bound + SLACK_SIGMAS * _binomial_se(worst_exceed, cfg.trials),
            "upper_bound",
            bound=tail_bound,
        ),
        _check(
            "adjacency_shortfall_tail",
            worst_scarce,
            tail_bound + SLACK_SIGMAS * _binomial_se(worst_scarce, cfg.trials),
            "upper_bound",
            bound=tail_bound,
        ),
    ]
    summary = {
        "checks": checks,
        "frequencies": {
            "majority_overshoot_tail": worst_exceed,
            "adjacency_shortfall_tail": worst_scarce,
        },
        "bounds": {
            "tail_bound": tail_bound,
            "tail_exponent": str(-exponent),
            "beta": str(beta),
        },
        "plot_series": _cumulative_series(any_event, "event"),
    }
    return TrialReport(cfg, rows, summary, time.perf_counter() - started)


@dataclass(frozen=True)
class TopBreakNoise:
    """Synthetic sampler: keep the parameter, or visibly break its top.

    Emits the parameter with probability exactly ``1 - 1/K``; otherwise
    moves the parameter's bottom alternative to the front, which changes
    every top slice. Lets the harness exercise profile-level preservation
    bounds at chosen per-agent rates.
    """

    m: int
    K: int

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ValueError("K must be positive")

    def sample(self, parameter: Ranking, rng: np.random.Generator) -> Ranking:
        if rng.random() < 1.0 / self.K:
            order = parameter.order
            return Ranking((order[-1],) + order[:-1])
        return parameter

    def pmf(self, parameter: Ranking, r: Ranking) -> Fraction:
        broken = Ranking((parameter.order[-1],) + parameter.order[:-1])
        if r == parameter:
            return 1 - Fraction(1, self.K)
        if r == broken:
            return Fraction(1, self.K)
        return Fraction(0)


def _resolve_instance(cfg: ExperimentConfig) -> X3CInstance:
    if not cfg.instance:
        raise ValueError("this claim needs an exact-cover instance in the config")
    return X3CInstance.of(int(cfg.instance["q"]), cfg.instance["subsets"])


def _resolve_padded_model(cfg: ExperimentConfig, m_total: int, m1: int, agents: int):
    """Model spec with symbolic sizes: K may be "m1" or "2*m1*n"."""
    spec = dict(cfg.model)
    if spec.get("K") == "m1":
        spec["K"] = m1
    elif spec.get("K") == "2*m1*n":
        spec["K"] = 2 * m1 * agents
    if spec.get("model") == "top_break":
        return TopBreakNoise(m_total, int(spec["K"]))
    return model_from_spec(spec, m_total)


def run_top_preservation(cfg: ExperimentConfig) -> TrialReport:
    """Frequency of exact top-slice preservation vs. the 1/2 bound."""
    from .models import sample_profile

    started = time.perf_counter()
    inst = _resolve_instance(cfg)
    out = x3c_to_dodgson(inst)
    m1 = out.profile.m
    agents = out.profile.n
    m_total = m1 + cfg.pad
    model = _resolve_padded_model(cfg, m_total, m1, agents)
    pp = build_padded_parameter_profile(out, model, m_total)

    rows = []
    preserved = 0
    for trial, rng in enumerate(_trial_rngs(cfg)):
        sampled = sample_profile(pp, rng)
        hit = top_slice_matches(sampled, out.profile)
        preserved += hit
        rows.append({"trial": trial, "top_slice_preserved": int(hit)})

    rate = preserved / cfg.trials
    se = _binomial_se(rate, cfg.trials)
    checks = [
        _check(
            "preservation_rate_vs_half",
            rate,
            0.5 - SLACK_SIGMAS * se,
            "lower_bound",
            bound=0.5,
            standard_error=se,
        )
    ]
    deterministic = isinstance(model, PartialAltRandomization) and model.K >= m1
    if deterministic:
        checks.append(_check("preservation_rate_exact_one", rate, 1.0, "exact"))
    if isinstance(model, TopBreakNoise):
        # Per-agent success compounds exactly to (1 - 1/K)^n.
        compounded = (1 - Fraction(1, model.K)) ** agents
        checks.append(
            _check(
                "preservation_rate_vs_compounded_rate",
                rate,
                float(compounded) - SLACK_SIGMAS * se,
                "lower_bound",
                bound=float(compounded),
                informational=True,
            )
        )
        if model.K == 2 * m1 * agents:
            # Exact-arithmetic bound chain down to one half.
            floor = 1 - Fraction(1, 2 * m1)
            checks.append(
                _check(
                    "compounded_rate_chain_holds",
                    1.0,
                    1.0,
                    "exact",
                    informational=True,
                    chain_holds=bool(compounded >= floor >= Fraction(1, 2)),
                )
            )
    summary = {
        "checks": checks,
        "frequencies": {"preservation_rate": rate},
        "bounds": {"half": 0.5, "reduction_width": m1, "agents": agents},
        "plot_series": _cumulative_series(rows, "top_slice_preserved"),
    }
    return TrialReport(cfg, rows, summary, time.perf_counter() - started)


def run_cover_driver(cfg: ExperimentConfig) -> TrialReport:
    """One-sidedness and NO-rate of the randomized exact-cover driver."""
    started = time.perf_counter()
    inst = _resolve_instance(cfg)
    expected_yes = x3c_bruteforce(inst)
    out = x3c_to_dodgson(inst)
    m1 = out.profile.m
    agents = out.profile.n
    m_total = m1 + cfg.pad
    model = _resolve_padded_model(cfg, m_total, m1, agents)

    def exact_decider(p: Profile, a: int, t: int) -> Decision:
        return Decision.YES if dodgson_score_within(p, a, t) is not None else Decision.NO

    rows = []
    no_flags = []
    no_count = 0
    for trial, rng in enumerate(_trial_rngs(cfg)):
        answer = x3c_via_dodgson(inst, exact_decider, model, rng)
        no_count += answer is Decision.NO
        no_flags.append({"no": int(answer is Decision.NO)})
        rows.append({"trial": trial, "answer": answer.value})

    no_rate = no_count / cfg.trials
    checks = []
    if expected_yes:
        checks.append(
            _check("yes_instance_zero_wrong_no", no_rate, 0.0, "exact")
        )
    else:
        se = _binomial_se(no_rate, cfg.trials)
        checks.append(
            _check(
                "no_rate_vs_one_sixth",
                no_rate,
                1.0 / 6.0 - SLACK_SIGMAS * se,
                "lower_bound",
                bound=1.0 / 6.0,
                standard_error=se,
            )
        )
        if isinstance(model, PartialAltRandomization) and model.K >= m1:
            checks.append(_check("no_rate_exact_one", no_rate, 1.0, "exact"))
    summary = {
        "checks": checks,
        "frequencies": {"no_rate": no_rate, "yes_rate": 1.0 - no_rate},
        "bounds": {
            "expected_answer": "yes" if expected_yes else "no",
            "one_sixth": 1.0 / 6.0,
        },
        "plot_series": _cumulative_series(no_flags, "no"),
    }
    return TrialReport(cfg, rows, summary, time.perf_counter() - started)


def _cumulative_series(rows: list[dict], key: str) -> list[tuple[int, float]]:
    series = []
    hits = 0
    for i, row in enumerate(rows, start=1):
        hits += row[key]
        series.append((i, hits / i))
    return series


CLAIM_RUNNERS = {
    "definitely_rate": run_definitely_rate,
    "concentration": run_concentration_tails,
    "top_preservation": run_top_preservation,
    "cover_driver": run_cover_driver,
}


def run_experiment(cfg: ExperimentConfig) -> TrialReport:
    return CLAIM_RUNNERS[cfg.claim](cfg)


def write_report(report: TrialReport, out_dir) -> dict:
    """Write CSV rows, a JSON summary, and optional plot data.

    Outputs are a pure function of the config: no timestamps, sorted
    keys, repr'd floats.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = report.config
    stem = f"{cfg.claim}_{cfg.config_hash()}"

    csv_path = out / f"{stem}.csv"
    columns = sorted(report.rows[0].keys() - {"trial"})
    header = ["trial"] + columns
    lines = [",".join(header)]
    for row in report.rows:
        lines.append(",".join(str(row[c]) for c in header))
    csv_path.write_text("\n".join(lines) + "\n")

    summary = {
        "claim": cfg.claim,
        "config": cfg.to_dict(),
        "config_hash": cfg.config_hash(),
        "seed": cfg.seed,
        "checks": report.summary["checks"],
        "frequencies": report.summary["frequencies"],
        "bounds": report.summary["bounds"],
        "all_pass": report.all_pass,
    }
    json_path = out / f"{stem}.json"
    json_path.write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")

    paths = {"csv": str(csv_path), "json": str(json_path)}
    if cfg.plot_data and report.summary.get("plot_series"):
        dat_path = out / f"{stem}.dat"
        dat_lines = [f"{x} {y!r}" for x, y in report.summary["plot_series"]]
        dat_path.write_text("\n".join(dat_lines) + "\n")
        paths["dat"] = str(dat_path)
    return paths
