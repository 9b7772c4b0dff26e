"""Single-agent preference models: samplers, exact pmfs, and inspection.

Two built-in families, both parameterized by a full ranking:

* :class:`AlphaIC` mixes a point mass on the parameter with the uniform
  distribution over all rankings (``alpha`` is the uniform share);
* :class:`PartialAltRandomization` keeps the parameter's top-``K`` fixed
  and shuffles the remaining tail uniformly.

Probabilities are exact rationals. Samplers take an injected
``numpy.random.Generator`` so every experiment records and replays its
seed. A parameter profile is a weighted collection of parameters; with
integer weights it samples one independent ballot per unit of weight.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .core import Profile, Ranking, WMG, WeightedProfile, apply_permutation, wmg
from .errors import BudgetExceededError, DimensionError

__all__ = [
    "AlphaIC",
    "PartialAltRandomization",
    "PreferenceModel",
    "ParameterProfile",
    "pmf",
    "sample",
    "permuted_parameter",
    "sample_profile",
    "wmg_of_distribution",
    "three_cycle_max_weight",
    "scale_round_parameter_profile",
    "induced_weighted_profile",
    "all_rankings",
    "model_from_spec",
]

MAX_ENUMERATION_M = 8


def all_rankings(m: int) -> list[Ranking]:
    """All m! rankings in lexicographic order of their tuples."""
    return [Ranking(p) for p in itertools.permutations(range(m))]


def _check_parameter(model: "PreferenceModel", parameter: Ranking) -> None:
    if parameter.m != model.m:
        raise DimensionError(f"parameter m={parameter.m} vs model m={model.m}")


@dataclass(frozen=True)
class AlphaIC:
    """Uniform noise of total mass ``alpha`` around one parameter ranking."""

    m: int
    alpha: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if not 0 <= self.alpha <= 1:
            raise ValueError("alpha must lie in [0, 1]")
        if self.m < 1:
            raise ValueError("m must be positive")

    def pmf(self, parameter: Ranking, r: Ranking) -> Fraction:
        _check_parameter(self, parameter)
        if r.m != self.m:
            raise DimensionError(f"ranking m={r.m} vs model m={self.m}")
        uniform_share = self.alpha / math.factorial(self.m)
        if r == parameter:
            return uniform_share + (1 - self.alpha)
        return uniform_share

    def sample(self, parameter: Ranking, rng: np.random.Generator) -> Ranking:
        # Two branches realize the mixture exactly: a uniform draw with
        # probability alpha, the parameter itself otherwise.
        _check_parameter(self, parameter)
        if rng.random() < float(self.alpha):
            return Ranking(tuple(int(x) for x in rng.permutation(self.m)))
        return parameter

    def distribution_wmg(self, parameter: Ranking) -> WMG:
        # The uniform share is pairwise symmetric, so margins are the
        # parameter's, scaled by the point-mass weight.
        _check_parameter(self, parameter)
        factor = 1 - self.alpha
        base = wmg(Profile((parameter,)))
        return WMG(
            tuple(tuple(Fraction(v) * factor for v in row) for row in base.margins)
        )


@dataclass(frozen=True)
class PartialAltRandomization:
    """Keep each ballot's top-``K`` fixed; shuffle the tail uniformly."""

    m: int
    K: int

    def __post_init__(self) -> None:
        if not 1 <= self.K <= self.m:
            raise ValueError(f"K={self.K} out of range 1..{self.m}")

    def pmf(self, parameter: Ranking, r: Ranking) -> Fraction:
        _check_parameter(self, parameter)
        if r.m != self.m:
            raise DimensionError(f"ranking m={r.m} vs model m={self.m}")
        if r.order[: self.K] != parameter.order[: self.K]:
            return Fraction(0)
        return Fraction(1, math.factorial(self.m - self.K))

    def sample(self, parameter: Ranking, rng: np.random.Generator) -> Ranking:
        _check_parameter(self, parameter)
        head = parameter.order[: self.K]
        tail = parameter.order[self.K :]
        if not tail:
            return parameter
        shuffled = tuple(int(tail[i]) for i in rng.permutation(len(tail)))
        return Ranking(head + shuffled)

    def distribution_wmg(self, parameter: Ranking) -> WMG:
        # Pairs fully inside the shuffled tail are symmetric; every other
        # pair keeps the parameter's orientation with certainty.
        _check_parameter(self, parameter)
        tail = set(parameter.order[self.K :])
        base = wmg(Profile((parameter,)))
        rows = []
        for a in range(self.m):
            row = []
            for b in range(self.m):
                if a in tail and b in tail:
                    row.append(Fraction(0))
                else:
                    row.append(Fraction(base.margin(a, b)) if a != b else Fraction(0))
            rows.append(tuple(row))
        return WMG(tuple(rows))


PreferenceModel = Union[AlphaIC, PartialAltRandomization]


def pmf(model, parameter: Ranking, r: Ranking) -> Fraction:
    """Exact probability that the model emits ``r`` given the parameter."""
    return model.pmf(parameter, r)


def sample(model, parameter: Ranking, rng: np.random.Generator) -> Ranking:
    """One draw from the model's distribution at this parameter."""
    return model.sample(parameter, rng)


def permuted_parameter(sigma: Sequence[int], parameter: Ranking) -> Ranking:
    """Parameter of the relabeled distribution.

    Both built-in models are neutral: relabeling alternatives in the
    distribution equals relabeling them in the parameter.
    """
    return apply_permutation(sigma, parameter)


@dataclass(frozen=True)
class ParameterProfile:
    """Weighted parameters, one distribution per entry.

    Integer weights mean whole agents (one independent draw per unit);
    fractional profiles arise from scaling constructions and must be
    rounded before sampling.
    """

    entries: tuple[tuple[Ranking, Fraction], ...]
    model: object

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("parameter profile needs at least one entry")
        for r, w in self.entries:
            if r.m != self.model.m:
                raise DimensionError("parameters must match the model's m")
            if w <= 0:
                raise ValueError("parameter weights must be positive")

    @property
    def m(self) -> int:
        return self.model.m

    @property
    def total_weight(self) -> Fraction:
        return sum((w for _, w in self.entries), Fraction(0))

    @property
    def is_integral(self) -> bool:
        return all(w.denominator == 1 for _, w in self.entries)


def sample_profile(pp: ParameterProfile, rng: np.random.Generator) -> Profile:
    """One independent ballot per unit of weight, agents in entry order."""
    if not pp.is_integral:
        raise ValueError("sampling needs integer weights; scale and round first")
    ballots = []
    for parameter, weight in pp.entries:
        for _ in range(int(weight)):
            ballots.append(sample(pp.model, parameter, rng))
    return Profile(tuple(ballots))


def wmg_of_distribution(model, parameter: Ranking) -> WMG:
    """Expected margin matrix of one draw, in exact rationals."""
    if hasattr(model, "distribution_wmg"):
        return model.distribution_wmg(parameter)
    # Fallback: enumerate the pmf.
    if model.m > MAX_ENUMERATION_M:
        raise BudgetExceededError(f"enumeration limited to m<={MAX_ENUMERATION_M}")
    rows = [[Fraction(0)] * model.m for _ in range(model.m)]
    for r in all_rankings(model.m):
        prob = pmf(model, parameter, r)
        if prob == 0:
            continue
        pos = r.positions
        for a in range(model.m):
            for b in range(a + 1, model.m):
                sign = 1 if pos[a] < pos[b] else -1
                rows[a][b] += sign * prob
    for a in range(model.m):
        for b in range(a + 1, model.m):
            rows[b][a] = -rows[a][b]
    return WMG(tuple(tuple(row) for row in rows))


def three_cycle_max_weight(model, parameter: Ranking) -> Fraction:
    """Heaviest directed triangle in the distribution's margin matrix.

    The weight of the cycle ``a -> b -> c -> a`` is the signed sum of its
    three edge margins.
    """
    graph = wmg_of_distribution(model, parameter)
    if graph.m < 3:
        raise ValueError("need at least 3 alternatives")
    best = None
    for a, b, c in itertools.permutations(range(graph.m), 3):
        weight = graph.margin(a, b) + graph.margin(b, c) + graph.margin(c, a)
        if best is None or weight > best:
            best = weight
    return best


def scale_round_parameter_profile(pp: ParameterProfile, target_total: int) -> ParameterProfile:
    """Rescale weights to roughly ``target_total`` agents, flooring each.

    Every entry loses strictly less than one unit, so the rounded total
    sits within the number of distinct entries below the target; entries
    flooring to zero are dropped.
    """
    if target_total < pp.total_weight:
        raise ValueError("target total must be at least the current total weight")
    factor = Fraction(target_total) / pp.total_weight
    entries = []
    for r, w in pp.entries:
        scaled = Fraction(math.floor(w * factor))
        if scaled > 0:
            entries.append((r, scaled))
    if not entries:
        raise ValueError("all weights rounded to zero")
    return ParameterProfile(tuple(entries), pp.model)


def induced_weighted_profile(pp: ParameterProfile) -> WeightedProfile:
    """The mixture over ballots that the parameter profile induces.

    Each ranking's weight is the weighted sum of its pmf under every
    entry's distribution. Enumerates the ranking space, so only for
    small ``m``.
    """
    if pp.m > MAX_ENUMERATION_M:
        raise BudgetExceededError(f"enumeration limited to m<={MAX_ENUMERATION_M}")
    weights: dict[Ranking, Fraction] = {}
    for parameter, w in pp.entries:
        for r in all_rankings(pp.m):
            prob = pmf(pp.model, parameter, r)
            if prob > 0:
                weights[r] = weights.get(r, Fraction(0)) + w * prob
    entries = tuple(sorted(weights.items(), key=lambda kv: kv[0].order))
    return WeightedProfile(entries)


def model_from_spec(spec: dict, m: int):
    """Build a model from its JSON description.

    ``{"model": "alpha_ic", "alpha": "2/3"}`` or
    ``{"model": "partial_alt", "K": 4}``; ``m`` comes from context.
    """
    kind = spec.get("model")
    if kind == "alpha_ic":
        return AlphaIC(m, Fraction(spec["alpha"]))
    if kind == "partial_alt":
        return PartialAltRandomization(m, int(spec["K"]))
    raise ValueError(f"unknown model spec {spec!r}")
