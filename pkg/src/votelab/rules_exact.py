"""Exact solvers for Dodgson, Young, Kemeny, Chamberlin-Courant and Monroe.

These are ground-truth engines for NP-hard score computations, built for
desk scale: every solver takes an explicit search budget and raises
:class:`~votelab.errors.BudgetExceededError` instead of silently
degrading. Scores are exact integers.

Dodgson scores are computed over "lift vectors": per ballot, raising the
target alternative by ``k`` adjacent swaps passes exactly the ``k``
alternatives sitting directly above it. The search is a dynamic program
over the vector of still-missing majority votes, with branch-and-bound
pruning on partial swap counts; its optimality over raw swap sequences is
checked against an unrestricted breadth-first oracle at tiny scale rather
than assumed.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .core import Profile, Ranking, condorcet_winner, deficit, wmg
from .errors import BudgetExceededError

__all__ = [
    "DPSF",
    "Committee",
    "linear_dpsf",
    "dodgson_score_exact",
    "dodgson_score_within",
    "dodgson_score_bfs_oracle",
    "young_score_exact",
    "kemeny_best",
    "kemeny_score_of_alternative",
    "kemeny_decision",
    "cc_score",
    "monroe_score",
    "committee_decision",
]

DEFAULT_DODGSON_BUDGET = 5_000_000  # DP expansions
DEFAULT_BFS_STATE_BUDGET = 2_000_000
DEFAULT_YOUNG_MAX_N = 20
DEFAULT_KEMENY_MAX_M = 16
DEFAULT_COMMITTEE_BUDGET = 1_000_000  # committees enumerated by the decision problem


def _require_rule_scale(p: Profile) -> None:
    if p.m < 3:
        raise ValueError("rule computations require at least 3 alternatives")


# ---------------------------------------------------------------------------
# Dodgson


def _lift_options(r: Ranking, a: int, active_index: dict[int, int]) -> list[tuple[int, tuple[int, ...]]]:
    """Useful lift amounts for one ballot.

    Lifting ``a`` by ``k`` passes the ``k`` alternatives directly above
    it. Only lifts whose last passed alternative still owes a vote are
    kept; any other lift is dominated by the next smaller useful one.
    Returns (cost, gained active indices) pairs, cheapest first.
    """
    above = r.order[: r.position(a)][::-1]  # nearest to a first
    options: list[tuple[int, tuple[int, ...]]] = []
    gained: list[int] = []
    for k, passed in enumerate(above, start=1):
        if passed in active_index:
            gained.append(active_index[passed])
            options.append((k, tuple(gained)))
    return options


def dodgson_score_within(
    p: Profile,
    a: int,
    cutoff: Optional[int] = None,
    *,
    budget: int = DEFAULT_DODGSON_BUDGET,
) -> Optional[int]:
    """Exact Dodgson score, or ``None`` if it exceeds ``cutoff``.

    With ``cutoff=None`` this always returns the score. The cutoff prunes
    every branch whose swaps-so-far plus still-missing votes overshoot,
    which makes decision queries on large reduction profiles cheap.
    """
    _require_rule_scale(p)
    if not 0 <= a < p.m:
        raise ValueError(f"alternative {a} out of range")

    active: list[int] = []
    needed: list[int] = []
    for b in range(p.m):
        if b == a:
            continue
        d = deficit(p, a, b)
        if d > 0:
            active.append(b)
            needed.append(d)
    if not active:
        return 0
    active_index = {b: i for i, b in enumerate(active)}
    total_needed = sum(needed)

    # Feasible upper bound: lift a to the very top of every ballot.
    best_known = sum(r.position(a) * count for r, count in p.grouped.items())
    limit = best_known if cutoff is None else min(best_known, cutoff)

    ballots: list[tuple[int, list[tuple[int, tuple[int, ...]]]]] = []
    for r, count in p.grouped.items():
        options = _lift_options(r, a, active_index)
        if options:
            # More lifted copies of one ballot type than missing votes can
            # never help; each lifted ballot must close at least one gap.
            ballots.append((min(count, total_needed), options))

    start = tuple(needed)
    zero = (0,) * len(active)
    frontier: dict[tuple[int, ...], int] = {start: 0}
    expansions = 0
    for copies, options in ballots:
        for _ in range(copies):
            snapshot = list(frontier.items())
            expansions += len(snapshot) * len(options)
            if expansions > budget:
                raise BudgetExceededError(
                    f"dodgson search exceeded budget of {budget} expansions"
                )
            for state, cost in snapshot:
                if state == zero:
                    continue
                for k, gains in options:
                    new_cost = cost + k
                    if new_cost > limit:
                        break  # options are sorted by cost
                    new_state = list(state)
                    for idx in gains:
                        if new_state[idx] > 0:
                            new_state[idx] -= 1
                    remaining = sum(new_state)
                    if new_cost + remaining > limit:
                        continue
                    key = tuple(new_state)
                    old = frontier.get(key)
                    if old is None or new_cost < old:
                        frontier[key] = new_cost
                        if remaining == 0 and new_cost < best_known:
                            best_known = new_cost
                            limit = best_known if cutoff is None else min(best_known, cutoff)

    score = frontier.get(zero)
    if score is None:
        return None  # only reachable when a cutoff pruned everything
    if cutoff is not None and score > cutoff:
        return None
    return score


def dodgson_score_exact(p: Profile, a: int, *, budget: int = DEFAULT_DODGSON_BUDGET) -> int:
    """Minimum adjacent swaps making ``a`` the strict-majority Condorcet winner."""
    score = dodgson_score_within(p, a, None, budget=budget)
    assert score is not None
    return score


def dodgson_score_bfs_oracle(
    p: Profile,
    a: int,
    *,
    max_m: int = 4,
    max_n: int = 3,
    state_budget: int = DEFAULT_BFS_STATE_BUDGET,
) -> int:
    """Shortest swap path to Condorcet-winnerhood, any pair, any ballot.

    Unrestricted breadth-first search over whole-profile states; exists
    purely to certify the lift-vector solver on tiny instances.
    """
    _require_rule_scale(p)
    if p.m > max_m or p.n > max_n:
        raise BudgetExceededError(
            f"bfs oracle limited to m<={max_m}, n<={max_n} (got m={p.m}, n={p.n})"
        )
    start = tuple(r.order for r in p.rankings)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        d = dist[state]
        if condorcet_winner(Profile.of(state)) == a:
            return d
        if len(dist) > state_budget:
            raise BudgetExceededError("bfs oracle exceeded its state budget")
        for voter, order in enumerate(state):
            for i in range(len(order) - 1):
                swapped = list(order)
                swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
                nxt = state[:voter] + (tuple(swapped),) + state[voter + 1 :]
                if nxt not in dist:
                    dist[nxt] = d + 1
                    queue.append(nxt)
    raise AssertionError("swap graph is connected; unreachable")


# ---------------------------------------------------------------------------
# Young


def young_score_exact(p: Profile, a: int, *, budget: int = DEFAULT_YOUNG_MAX_N) -> int:
    """Largest sub-multiset of ballots in which ``a`` is Condorcet winner.

    Returns 0 when no nonempty sub-multiset certifies ``a`` (the empty
    collection has no strict-majority winner). The search runs over
    per-class counts, where two ballots are equivalent when they compare
    ``a`` against every rival identically.
    """
    _require_rule_scale(p)
    if not 0 <= a < p.m:
        raise ValueError(f"alternative {a} out of range")
    if p.n > budget:
        raise BudgetExceededError(f"young search limited to n<={budget} (got n={p.n})")

    rivals = [b for b in range(p.m) if b != a]
    classes: dict[tuple[int, ...], int] = {}
    for r, count in p.grouped.items():
        vec = tuple(1 if r.prefers(a, b) else -1 for b in rivals)
        classes[vec] = classes.get(vec, 0) + count
    items = sorted(classes.items(), key=lambda kv: -kv[1])
    vectors = [vec for vec, _ in items]
    counts = [cnt for _, cnt in items]

    # suffix_support[j][b]: ballots from classes j.. that favour a over rival b
    width = len(rivals)
    suffix_support = [[0] * width for _ in range(len(items) + 1)]
    suffix_total = [0] * (len(items) + 1)
    for j in range(len(items) - 1, -1, -1):
        suffix_total[j] = suffix_total[j + 1] + counts[j]
        for b in range(width):
            suffix_support[j][b] = suffix_support[j + 1][b] + (
                counts[j] if vectors[j][b] > 0 else 0
            )

    best = 0

    def search(j: int, picked: int, margins: list[int]) -> None:
        nonlocal best
        if all(mg >= 1 for mg in margins):
            best = max(best, picked)
        if j == len(items):
            return
        if picked + suffix_total[j] <= best:
            return
        for b in range(width):
            if margins[b] + suffix_support[j][b] < 1:
                return  # rival b can no longer be beaten
        vec = vectors[j]
        for take in range(counts[j], -1, -1):
            for b in range(width):
                margins[b] += take * vec[b]
            search(j + 1, picked + take, margins)
            for b in range(width):
                margins[b] -= take * vec[b]

    search(0, 0, [0] * width)
    return best


# ---------------------------------------------------------------------------
# Kemeny


def _disagreement_matrix(p: Profile) -> list[list[int]]:
    """``wrong[x][y]``: ballots preferring ``y`` over ``x`` (cost of x above y)."""
    graph = wmg(p)
    m = p.m
    return [
        [0 if x == y else (p.n - graph.margin(x, y)) // 2 for y in range(m)]
        for x in range(m)
    ]


def _kemeny_block_table(p: Profile, max_m: int) -> tuple[list[int], list[list[int]]]:
    """Subset DP: best internal disagreement of each alternative block."""
    _require_rule_scale(p)
    m = p.m
    if m > max_m:
        raise BudgetExceededError(f"kemeny subset DP limited to m<={max_m} (got m={m})")
    wrong = _disagreement_matrix(p)
    full = 1 << m
    best = [0] * full
    for subset in range(1, full):
        cheapest = None
        members = [x for x in range(m) if subset >> x & 1]
        for x in members:
            rest = subset & ~(1 << x)
            cost = best[rest] + sum(wrong[x][y] for y in members if y != x)
            if cheapest is None or cost < cheapest:
                cheapest = cost
        best[subset] = cheapest
    return best, wrong


def kemeny_best(p: Profile, *, max_m: int = DEFAULT_KEMENY_MAX_M) -> tuple[Ranking, int]:
    """A profile-closest ranking and its total disagreement.

    Ties broken toward the lexicographically smallest ranking.
    """
    best, wrong = _kemeny_block_table(p, max_m)
    m = p.m
    subset = (1 << m) - 1
    order: list[int] = []
    while subset:
        members = [x for x in range(m) if subset >> x & 1]
        for x in members:  # ascending: first hit is lexicographically smallest
            rest = subset & ~(1 << x)
            if best[rest] + sum(wrong[x][y] for y in members if y != x) == best[subset]:
                order.append(x)
                subset = rest
                break
    return Ranking(tuple(order)), best[(1 << m) - 1]


def kemeny_score_of_alternative(p: Profile, a: int, *, max_m: int = DEFAULT_KEMENY_MAX_M) -> int:
    """Minimum profile disagreement over rankings that put ``a`` on top."""
    if not 0 <= a < p.m:
        raise ValueError(f"alternative {a} out of range")
    best, wrong = _kemeny_block_table(p, max_m)
    full = (1 << p.m) - 1
    rest = full & ~(1 << a)
    return best[rest] + sum(wrong[a][y] for y in range(p.m) if y != a)


def kemeny_decision(p: Profile, t: int, *, max_m: int = DEFAULT_KEMENY_MAX_M) -> bool:
    """Does some alternative have Kemeny score at most ``t``?

    Equivalent to asking whether the best ranking's score is at most
    ``t``, since the minimum over alternatives of the top-constrained
    score is attained by the global optimum's top alternative.
    """
    _, score = kemeny_best(p, max_m=max_m)
    return score <= t


# ---------------------------------------------------------------------------
# Committees


@dataclass(frozen=True)
class DPSF:
    """Strictly decreasing positional scores, independent of ``m``.

    ``score_of_position`` maps 1-based ballot positions to integers. The
    same function must serve every ``m``: appending alternatives extends
    its domain without changing earlier values, which is exactly what
    keeps committee scores stable when ballots are padded at the bottom.
    """

    score_of_position: Callable[[int], int]

    def __call__(self, position: int) -> int:
        return self.score_of_position(position)

    def check_decreasing(self, up_to: int) -> None:
        for i in range(1, up_to):
            if self(i) <= self(i + 1):
                raise ValueError(f"positional scores must strictly decrease (at {i})")


def linear_dpsf() -> DPSF:
    """Default satisfaction: position ``i`` scores ``-i``."""
    return DPSF(lambda i: -i)


@dataclass(frozen=True)
class Committee:
    """A nonempty set of distinct alternatives."""

    members: frozenset[int]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("committee must be nonempty")

    @classmethod
    def of(cls, members: Iterable[int]) -> "Committee":
        return cls(frozenset(members))

    @property
    def k(self) -> int:
        return len(self.members)


def _satisfaction_table(p: Profile, committee: Committee, alpha: DPSF) -> list[list[int]]:
    """Per-voter satisfaction for each member, members in sorted order."""
    members = sorted(committee.members)
    for c in members:
        if not 0 <= c < p.m:
            raise ValueError(f"committee member {c} out of range")
    alpha.check_decreasing(p.m)
    return [[alpha(r.position(c) + 1) for c in members] for r in p.rankings]


def cc_score(
    p: Profile,
    committee: Committee,
    alpha: Optional[DPSF] = None,
    aggregator: str = "sum",
) -> int:
    """Best achievable committee satisfaction with free voter assignment.

    Both aggregators decompose: every voter is served by their
    best-ranked member, so ``sum`` totals those values and ``min`` takes
    the worst of them.
    """
    alpha = alpha or linear_dpsf()
    table = _satisfaction_table(p, committee, alpha)
    per_voter = [max(row) for row in table]
    if aggregator == "sum":
        return sum(per_voter)
    if aggregator == "min":
        return min(per_voter)
    raise ValueError(f"unknown aggregator {aggregator!r}")


def _balanced_bounds(n: int, k: int) -> tuple[int, int]:
    return n // k, -(-n // k)


def _monroe_flow_graph(table: Sequence[Sequence[int]], allowed: Callable[[int, int], bool]):
    """Assignment network with near-equal member loads encoded as demands."""
    import networkx as nx

    n = len(table)
    k = len(table[0])
    low, high = _balanced_bounds(n, k)
    g = nx.DiGraph()
    for i in range(n):
        g.add_node(("voter", i), demand=-1)
    for j in range(k):
        g.add_node(("member", j), demand=low)
    g.add_node("pool", demand=n - k * low)
    for i in range(n):
        for j in range(k):
            if allowed(i, j):
                g.add_edge(("voter", i), ("member", j), capacity=1, weight=-table[i][j])
    for j in range(k):
        g.add_edge(("member", j), "pool", capacity=high - low, weight=0)
    return g


def monroe_score(
    p: Profile,
    committee: Committee,
    alpha: Optional[DPSF] = None,
    aggregator: str = "sum",
) -> int:
    """Best committee satisfaction under near-equal member loads.

    Every member serves between ``floor(n/k)`` and ``ceil(n/k)`` voters.
    The ``sum`` aggregator is an exact capacitated assignment solved as a
    min-cost flow; ``min`` binary-searches the highest satisfaction level
    whose induced bipartite restriction still admits a feasible
    assignment.
    """
    import networkx as nx

    alpha = alpha or linear_dpsf()
    table = _satisfaction_table(p, committee, alpha)

    if aggregator == "sum":
        g = _monroe_flow_graph(table, lambda i, j: True)
        flow = nx.min_cost_flow(g)
        total = 0
        for i, row in enumerate(table):
            sent = flow[("voter", i)]
            for j in range(len(row)):
                total += row[j] * sent.get(("member", j), 0)
        return total

    if aggregator == "min":

        def feasible(level: int) -> bool:
            g = _monroe_flow_graph(table, lambda i, j: table[i][j] >= level)
            try:
                nx.min_cost_flow(g)
                return True
            except nx.NetworkXUnfeasible:
                return False

        levels = sorted({v for row in table for v in row})
        lo, hi = 0, len(levels) - 1  # levels[0] is always feasible
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if feasible(levels[mid]):
                lo = mid
            else:
                hi = mid - 1
        return levels[lo]

    raise ValueError(f"unknown aggregator {aggregator!r}")


def committee_decision(
    p: Profile,
    k: int,
    t: int,
    rule: str = "cc",
    alpha: Optional[DPSF] = None,
    aggregator: str = "sum",
    *,
    budget: int = DEFAULT_COMMITTEE_BUDGET,
) -> bool:
    """Does some ``k``-committee score at least ``t``? Brute force over committees."""
    if not 1 <= k <= p.m:
        raise ValueError(f"k={k} out of range 1..{p.m}")
    if rule not in ("cc", "monroe"):
        raise ValueError(f"unknown rule {rule!r}")
    score_fn = cc_score if rule == "cc" else monroe_score
    count = 0
    for members in itertools.combinations(range(p.m), k):
        count += 1
        if count > budget:
            raise BudgetExceededError(f"committee enumeration exceeded {budget}")
        if score_fn(p, Committee.of(members), alpha, aggregator) >= t:
            return True
    return False
