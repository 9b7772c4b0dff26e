"""Constructive reductions and the randomized decision drivers built on them.

Covers four pieces of machinery:

* the exact-cover-to-Dodgson profile builder and its randomized driver
  (pad with dummy alternatives, sample, decide);
* a McGarvey-style profile builder realizing any 2-cycle-free digraph as
  a pairwise-margin matrix (at a fixed per-arc multiplier of 2);
* the closed-form profile distance for margin-realizing profiles, and
  the feedback-arc-set driver that answers via a Kemeny threshold query;
* brute-force oracles (exact cover, minimum feedback arcs) used to
  validate everything above.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence, Union

import numpy as np

from .core import (
    Digraph,
    Profile,
    Ranking,
    WeightedProfile,
    app_last,
    backward_arcs,
    wmg,
)
from .errors import BudgetExceededError, ConstructionError
from .greedy_dodgson import Decision
from .models import ParameterProfile, PartialAltRandomization, sample_profile

__all__ = [
    "X3CInstance",
    "DodgsonReductionLayout",
    "DodgsonReductionOutput",
    "x3c_bruteforce",
    "x3c_to_dodgson",
    "x3c_to_young",
    "check_young_reduction_contract",
    "build_padded_parameter_profile",
    "top_slice_matches",
    "x3c_via_dodgson",
    "MCGARVEY_MULTIPLIER",
    "mcgarvey_profile",
    "detect_margin_multiplier",
    "kt_formula",
    "EfasThresholds",
    "exact_efas_thresholds",
    "efas_via_kemeny",
    "efas_bruteforce",
    "enumerate_x3c_instances",
    "enumerate_eulerian_digraphs",
]


# ---------------------------------------------------------------------------
# Exact cover by 3-sets


@dataclass(frozen=True)
class X3CInstance:
    """Ground set ``{0..q-1}`` with distinct 3-element subsets.

    ``q`` divisible by 3, and ``q/3 <= s <= q^3/6`` (fewer subsets cannot
    cover; more cannot be distinct).
    """

    q: int
    subsets: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.q < 3 or self.q % 3 != 0:
            raise ValueError("ground-set size must be a positive multiple of 3")
        seen = set()
        for sub in self.subsets:
            if len(sub) != 3 or len(set(sub)) != 3:
                raise ValueError(f"subset {sub!r} must have exactly 3 distinct elements")
            if not all(0 <= e < self.q for e in sub):
                raise ValueError(f"subset {sub!r} out of range")
            if tuple(sorted(sub)) != sub:
                raise ValueError("subsets must be stored sorted")
            if sub in seen:
                raise ValueError(f"duplicate subset {sub!r}")
            seen.add(sub)
        s = len(self.subsets)
        if not self.q // 3 <= s <= self.q**3 // 6:
            raise ValueError(f"subset count {s} outside q/3..q^3/6")

    @classmethod
    def of(cls, q: int, subsets: Sequence[Sequence[int]]) -> "X3CInstance":
        return cls(q, tuple(tuple(sorted(sub)) for sub in subsets))

    @property
    def s(self) -> int:
        return len(self.subsets)


def x3c_bruteforce(inst: X3CInstance, *, budget: int = 25) -> bool:
    """Does some subcollection partition the ground set? Exhaustive."""
    if inst.s > budget:
        raise BudgetExceededError(f"exact-cover enumeration limited to s<={budget}")
    need = inst.q // 3
    ground = frozenset(range(inst.q))
    for chosen in itertools.combinations(inst.subsets, need):
        union = set()
        for sub in chosen:
            union.update(sub)
        if len(union) == inst.q and frozenset(union) == ground:
            return True
    return False


# ---------------------------------------------------------------------------
# Exact cover -> Dodgson


@dataclass(frozen=True)
class DodgsonReductionLayout:
    """Alternative-index map for a reduction profile.

    ``element_alts[i]`` is the alternative whose one-vote lead over the
    critical alternative encodes element ``i``'s coverage requirement;
    ``companion_alts[i]`` is its buffer partner; ``subset_alts[j]`` sits
    directly above the critical alternative in subset ``j``'s ballot.
    """

    element_alts: tuple[int, ...]
    companion_alts: tuple[int, ...]
    subset_alts: tuple[int, ...]
    critical: int


@dataclass(frozen=True)
class DodgsonReductionOutput:
    profile: Profile
    critical: int
    threshold: int
    layout: DodgsonReductionLayout


def _fill_ascending(head: Sequence[int], m: int) -> Ranking:
    rest = [x for x in range(m) if x not in set(head)]
    return Ranking(tuple(head) + tuple(rest))


def x3c_to_dodgson(inst: X3CInstance) -> DodgsonReductionOutput:
    """Profile whose critical alternative scores at most ``4q/3`` iff a cover exists.

    Three ballot blocks over ``2q + s + 1`` alternatives:

    * one ballot per subset, shaped ``covered elements > subset alt >
      critical > rest`` — lifting the critical alternative four places
      here buys three element votes, the cheapest rate anywhere;
    * balancing ballots ``element > companion > critical > rest`` so
      every element alternative ends up with the same lead;
    * copies of one long ballot ranking all element alternatives above
      the critical one, added until each lead is exactly one vote.

    Unconstrained ballot segments are filled in ascending index so the
    output is deterministic.
    """
    q, s = inst.q, inst.s
    element_alts = tuple(range(q))
    companion_alts = tuple(range(q, 2 * q))
    subset_alts = tuple(range(2 * q, 2 * q + s))
    critical = 2 * q + s
    m1 = 2 * q + s + 1
    layout = DodgsonReductionLayout(element_alts, companion_alts, subset_alts, critical)

    counted: list[tuple[Ranking, int]] = []
    for j, sub in enumerate(inst.subsets):
        head = list(sub) + [subset_alts[j], critical]
        counted.append((_fill_ascending(head, m1), 1))

    membership = [0] * q
    for sub in inst.subsets:
        for e in sub:
            membership[e] += 1
    max_membership = max(membership)
    for i in range(q):
        copies = max_membership - membership[i]
        if copies > 0:
            head = [element_alts[i], companion_alts[i], critical]
            counted.append((_fill_ascending(head, m1), copies))

    # Each element alternative currently leads the critical one by the
    # same margin; top it up to exactly +1 with copies of one long ballot.
    base = Profile.from_counts(counted)
    margins = wmg(base)
    leads = {margins.margin(a, critical) for a in element_alts}
    if len(leads) != 1:
        raise ConstructionError(f"unequal element leads {sorted(leads)}")
    lead = leads.pop()
    booster_copies = 1 - lead
    if booster_copies < 0:
        raise ConstructionError(
            f"element lead {lead} already exceeds 1; cannot remove ballots"
        )
    if booster_copies > 0:
        head = list(element_alts) + list(companion_alts) + [critical]
        counted.append((_fill_ascending(head, m1), booster_copies))

    profile = Profile.from_counts(counted)
    final = wmg(profile)
    for a in element_alts:
        if final.margin(a, critical) != 1:
            raise ConstructionError("element lead not exactly 1 after boosting")
    if profile.n > 2 * (q + 1) * s + 1:
        raise ConstructionError("profile larger than the size bound")
    return DodgsonReductionOutput(profile, critical, 4 * q // 3, layout)


# ---------------------------------------------------------------------------
# Exact cover -> Young (interface only)


def x3c_to_young(inst: X3CInstance):
    """Extension point: a profile whose critical Young score is >= 1 iff a cover exists.

    No construction is wired in; the contract it must satisfy is checked
    by :func:`check_young_reduction_contract`.
    """
    raise NotImplementedError(
        "the exact-cover-to-Young profile construction is an extension point; "
        "supply a builder and validate it with check_young_reduction_contract"
    )


def check_young_reduction_contract(
    inst: X3CInstance,
    profile: Profile,
    critical: int,
    *,
    young_budget: int = 20,
) -> bool:
    """Does a supplied construction satisfy the equivalence contract?"""
    from .rules_exact import young_score_exact

    expected = x3c_bruteforce(inst)
    return (young_score_exact(profile, critical, budget=young_budget) >= 1) == expected


# ---------------------------------------------------------------------------
# Padding and the randomized exact-cover driver


def build_padded_parameter_profile(
    out: DodgsonReductionOutput,
    model,
    m_total: int,
    K: Optional[int] = None,
) -> ParameterProfile:
    """Unit-weight parameters: reduction ballots with dummies appended.

    With a top-``K``-preserving model and ``K`` at least the reduction
    width, sampling reproduces the reduction profile's top slice with
    probability 1 per agent; weaker models preserve it with whatever
    per-agent probability they guarantee.
    """
    m1 = out.profile.m
    if m_total < m1:
        raise ValueError(f"m_total={m_total} below reduction width {m1}")
    if getattr(model, "m", m_total) != m_total:
        raise ValueError("model must live on m_total alternatives")
    if isinstance(model, PartialAltRandomization):
        width = model.K if K is None else K
        if width < m1:
            raise ValueError(f"K={width} below reduction width {m1}")
        if width != model.K:
            raise ValueError("explicit K must match the model's K")
    padded = out.profile if m_total == m1 else app_last(out.profile, m_total - m1)
    entries = tuple((r, Fraction(1)) for r in padded.rankings)
    return ParameterProfile(entries, model)


def top_slice_matches(sampled: Profile, reference: Profile) -> bool:
    """Agent-wise: does every sampled ballot open with its reference ballot?"""
    width = reference.m
    return all(
        s.order[:width] == r.order
        for s, r in zip(sampled.rankings, reference.rankings)
    )


def x3c_via_dodgson(
    inst: X3CInstance,
    dodgson_decider: Callable[[Profile, int, int], Decision],
    model,
    rng: np.random.Generator,
) -> Decision:
    """Randomized exact-cover decision through a Dodgson threshold query.

    Build the reduction profile, pad it with dummies, sample one ballot
    per agent, and answer YES outright if any sampled top slice moved.
    Otherwise ask the decider whether the critical alternative's score is
    within threshold. Decider failures map to YES, which keeps the
    one-sided guarantee: a NO answer is always correct.
    """
    out = x3c_to_dodgson(inst)
    pp = build_padded_parameter_profile(out, model, model.m)
    sampled = sample_profile(pp, rng)
    if not top_slice_matches(sampled, out.profile):
        return Decision.YES
    answer = dodgson_decider(sampled, out.critical, out.threshold)
    if answer is Decision.NO:
        return Decision.NO
    return Decision.YES


# ---------------------------------------------------------------------------
# Margin-realizing profiles and the profile-distance closed form

MCGARVEY_MULTIPLIER = 2


def mcgarvey_profile(g: Digraph) -> Profile:
    """Profile whose margin matrix is the digraph's, times the fixed multiplier.

    Per arc ``u -> v``, two ballots: ``u > v > rest ascending`` and
    ``rest descending > u > v``. All pairs other than ``(u, v)`` cancel
    between the two, leaving margin 2 on the arc. An arcless graph gets
    one ascending/descending ballot pair, which cancels everywhere.
    """
    if g.has_two_cycle():
        raise ConstructionError("margin-realizing profiles need a 2-cycle-free graph")
    ballots: list[tuple[int, ...]] = []
    for u, v in sorted(g.arcs):
        rest = tuple(w for w in range(g.m) if w != u and w != v)
        ballots.append((u, v) + rest)
        ballots.append(rest[::-1] + (u, v))
    if not ballots:
        ascending = tuple(range(g.m))
        ballots = [ascending, ascending[::-1]] if g.m > 1 else [ascending, ascending]
    return Profile.of(ballots)


def detect_margin_multiplier(p: Union[Profile, WeightedProfile], g: Digraph) -> Fraction:
    """The constant lambda with margins(p) = lambda * margins(g), or raise."""
    graph = wmg(p)
    multiplier: Optional[Fraction] = None
    for a in range(g.m):
        for b in range(a + 1, g.m):
            value = Fraction(graph.margin(a, b))
            if (a, b) in g.arcs:
                expected_sign = 1
            elif (b, a) in g.arcs:
                expected_sign = -1
            else:
                if value != 0:
                    raise ConstructionError(f"nonzero margin on non-arc pair ({a},{b})")
                continue
            scaled = value * expected_sign
            if multiplier is None:
                multiplier = scaled
            elif scaled != multiplier:
                raise ConstructionError("margins are not proportional to the graph")
    return multiplier if multiplier is not None else Fraction(0)


def kt_formula(p: Union[Profile, WeightedProfile], g: Digraph, r: Ranking) -> Fraction:
    """Closed-form profile distance for margin-realizing profiles.

    With total ballot weight ``W``, ``lambda`` the margin multiplier and
    ``f`` the number of arcs pointing up the ranking:
    ``W/2 * C(m,2) - lambda*|E|/2 + lambda*f``. Each arcless pair splits
    its weight evenly; each arc shifts one pair by ``lambda/2`` toward
    its orientation, and a backward arc flips that shift's sign.
    """
    if p.m != g.m or r.m != g.m:
        raise ConstructionError("profile, graph, and ranking must share m")
    multiplier = detect_margin_multiplier(p, g)
    total = Fraction(p.n) if isinstance(p, Profile) else p.total_weight
    pairs = math.comb(g.m, 2)
    f = backward_arcs(g, r)
    return total * pairs / 2 - multiplier * g.edge_count / 2 + multiplier * f


# ---------------------------------------------------------------------------
# Feedback arcs


def efas_bruteforce(g: Digraph, t: int, *, max_m: int = 8) -> bool:
    """Can at most ``t`` arc removals make the graph acyclic?

    Minimum removals equal the minimum backward-arc count over all
    vertex orders, so enumerate orders.
    """
    if g.m > max_m:
        raise BudgetExceededError(f"feedback-arc enumeration limited to m<={max_m}")
    if not g.arcs:
        return t >= 0
    best = min(
        backward_arcs(g, Ranking(perm))
        for perm in itertools.permutations(range(g.m))
    )
    return best <= t


@dataclass(frozen=True)
class EfasThresholds:
    """Score-threshold shape for the feedback-arc driver.

    The Kemeny query uses ``base + t * scale + slack``; the sampled
    margin matrix is accepted when its L1 distance from the scaled graph
    stays within ``guard_radius``.
    """

    base: Fraction
    scale: Fraction
    slack: Fraction = Fraction(0)
    guard_radius: Fraction = Fraction(0)


def exact_efas_thresholds(p: Union[Profile, WeightedProfile], g: Digraph) -> EfasThresholds:
    """Zero-slack thresholds matching the closed-form distance exactly."""
    multiplier = detect_margin_multiplier(p, g)
    total = Fraction(p.n) if isinstance(p, Profile) else p.total_weight
    base = total * math.comb(g.m, 2) / 2 - multiplier * g.edge_count / 2
    return EfasThresholds(base=base, scale=multiplier)


def efas_via_kemeny(
    g: Digraph,
    t: int,
    kemeny_decider: Callable[[Profile, Fraction], bool],
    profile_builder: Callable[[Digraph], Profile] = mcgarvey_profile,
    thresholds: Optional[EfasThresholds] = None,
    *,
    strict: bool = True,
) -> Decision:
    """Feedback-arc decision through a Kemeny threshold query.

    Build a margin-realizing profile, bail out YES if its margins strayed
    past the guard radius, otherwise ask whether any ranking's total
    disagreement stays within ``base + t * scale + slack``. With the
    deterministic builder and zero slack the chain is exact: rankings
    within threshold correspond one-to-one to orders with at most ``t``
    backward arcs.
    """
    if strict and not g.is_eulerian():
        raise ValueError("graph is not Eulerian; pass strict=False to override")
    profile = profile_builder(g)
    if thresholds is None:
        thresholds = exact_efas_thresholds(profile, g)
    reference = g.margin_matrix().scaled(thresholds.scale)
    if wmg(profile).l1_distance(reference) > thresholds.guard_radius:
        return Decision.YES
    limit = thresholds.base + t * thresholds.scale + thresholds.slack
    return Decision.NO if not kemeny_decider(profile, limit) else Decision.YES


# ---------------------------------------------------------------------------
# Desk-scale enumerations


def enumerate_x3c_instances(q: int, max_s: int) -> Iterator[X3CInstance]:
    """Every instance on ``q`` elements with up to ``max_s`` subsets."""
    triples = list(itertools.combinations(range(q), 3))
    hi = min(max_s, q**3 // 6, len(triples))
    for s in range(q // 3, hi + 1):
        for chosen in itertools.combinations(triples, s):
            yield X3CInstance(q, tuple(chosen))


def enumerate_eulerian_digraphs(m: int, max_edges: Optional[int] = None) -> Iterator[Digraph]:
    """Every 2-cycle-free Eulerian digraph on exactly ``m`` vertices.

    Each unordered pair independently carries no arc or one arc in either
    direction; balanced-and-connected survivors are yielded.
    """
    pairs = list(itertools.combinations(range(m), 2))
    for choice in itertools.product((0, 1, 2), repeat=len(pairs)):
        arcs = []
        for (u, v), orient in zip(pairs, choice):
            if orient == 1:
                arcs.append((u, v))
            elif orient == 2:
                arcs.append((v, u))
        if max_edges is not None and len(arcs) > max_edges:
            continue
        g = Digraph.of(m, arcs)
        if g.is_eulerian():
            yield g
