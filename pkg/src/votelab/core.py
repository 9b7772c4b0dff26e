"""Rankings, profiles, margin matrices, and structural transformations.

Alternatives are dense integer indices ``0..m-1`` throughout; readable
names belong in I/O mapping tables, never in the solvers. Every value in
this module is immutable, hashable, and safe to share across threads.

Conventions used by the whole package:

* a :class:`Ranking` lists alternatives most-preferred first;
* positions are 0-based (``position(x) == 0`` means ``x`` is on top);
* pairwise margins count voters preferring ``a`` over ``b`` minus voters
  preferring ``b`` over ``a``;
* "strict majority" always means strictly more than half of the voters,
  i.e. at least ``n // 2 + 1`` of them.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import DimensionError

__all__ = [
    "Ranking",
    "Profile",
    "WeightedProfile",
    "WMG",
    "Digraph",
    "kt_distance",
    "kt_profile_distance",
    "top_k",
    "apply_permutation",
    "permute_profile",
    "app_last",
    "iter_app_last",
    "wmg",
    "condorcet_winner",
    "deficit",
    "backward_arcs",
]


@dataclass(frozen=True)
class Ranking:
    """A linear order over ``m`` alternatives, most-preferred first.

    ``order`` must be a permutation of ``{0, ..., m-1}``. Structural
    operations accept any ``m >= 1``; voting-rule computations elsewhere
    require ``m >= 3``.
    """

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        m = len(self.order)
        if m < 1:
            raise ValueError("ranking needs at least one alternative")
        if sorted(self.order) != list(range(m)):
            raise ValueError(f"order {self.order!r} is not a permutation of 0..{m - 1}")

    @classmethod
    def of(cls, order: Iterable[int]) -> "Ranking":
        return cls(tuple(order))

    @property
    def m(self) -> int:
        return len(self.order)

    @cached_property
    def positions(self) -> dict[int, int]:
        """Alternative -> 0-based position (0 = most preferred)."""
        return {alt: idx for idx, alt in enumerate(self.order)}

    def position(self, alt: int) -> int:
        return self.positions[alt]

    def prefers(self, a: int, b: int) -> bool:
        """True iff ``a`` is ranked above ``b``."""
        return self.positions[a] < self.positions[b]

    def reversed(self) -> "Ranking":
        return Ranking(self.order[::-1])

    def __repr__(self) -> str:  # compact, e.g. Ranking(2>0>1)
        return "Ranking(%s)" % ">".join(map(str, self.order))


@dataclass(frozen=True)
class Profile:
    """A multiset of ``n >= 1`` rankings over a common alternative set."""

    rankings: tuple[Ranking, ...]

    def __post_init__(self) -> None:
        if not self.rankings:
            raise ValueError("profile needs at least one voter")
        m = self.rankings[0].m
        for r in self.rankings:
            if r.m != m:
                raise DimensionError("all rankings in a profile must share m")

    @classmethod
    def of(cls, orders: Iterable[Iterable[int]]) -> "Profile":
        return cls(tuple(Ranking.of(o) for o in orders))

    @classmethod
    def from_counts(cls, pairs: Iterable[tuple[Ranking, int]]) -> "Profile":
        """Build a profile from (ranking, multiplicity) pairs.

        Pre-seeds the grouped view, which keeps per-profile work
        proportional to the number of distinct rankings even for large n.
        """
        grouped: dict[Ranking, int] = {}
        rankings: list[Ranking] = []
        for r, count in pairs:
            if count < 0:
                raise ValueError("multiplicities must be nonnegative")
            if count == 0:
                continue
            grouped[r] = grouped.get(r, 0) + count
            rankings.extend([r] * count)
        profile = cls(tuple(rankings))
        profile.__dict__["grouped"] = grouped
        return profile

    @property
    def m(self) -> int:
        return self.rankings[0].m

    @property
    def n(self) -> int:
        return len(self.rankings)

    @cached_property
    def grouped(self) -> dict[Ranking, int]:
        """Distinct ranking -> multiplicity. Solvers iterate this view."""
        return dict(Counter(self.rankings))


@dataclass(frozen=True)
class WeightedProfile:
    """Rankings with nonnegative exact-rational weights, total > 0.

    Fractional profiles arise when scaling parameter profiles; exact
    rationals keep every downstream identity free of float tolerances.
    """

    entries: tuple[tuple[Ranking, Fraction], ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("weighted profile needs at least one entry")
        m = self.entries[0][0].m
        total = Fraction(0)
        for r, w in self.entries:
            if r.m != m:
                raise DimensionError("all rankings in a profile must share m")
            if w < 0:
                raise ValueError("weights must be nonnegative")
            total += w
        if total <= 0:
            raise ValueError("total weight must be positive")

    @classmethod
    def of(cls, pairs: Iterable[tuple[Iterable[int], Union[int, str, Fraction]]]) -> "WeightedProfile":
        return cls(tuple((Ranking.of(o), Fraction(w)) for o, w in pairs))

    @property
    def m(self) -> int:
        return self.entries[0][0].m

    @property
    def total_weight(self) -> Fraction:
        return sum((w for _, w in self.entries), Fraction(0))


AnyProfile = Union[Profile, WeightedProfile]


def _weighted_items(p: AnyProfile) -> Iterable[tuple[Ranking, Union[int, Fraction]]]:
    if isinstance(p, Profile):
        return p.grouped.items()
    return p.entries


@dataclass(frozen=True)
class WMG:
    """Dense antisymmetric pairwise-margin matrix.

    ``margins[a][b]`` is the net weight preferring ``a`` over ``b``;
    entries are ints for unweighted profiles and ``Fraction`` otherwise.
    """

    margins: tuple[tuple[Union[int, Fraction], ...], ...]

    def __post_init__(self) -> None:
        m = len(self.margins)
        for row in self.margins:
            if len(row) != m:
                raise ValueError("margin matrix must be square")
        for a in range(m):
            if self.margins[a][a] != 0:
                raise ValueError("margin diagonal must be zero")
            for b in range(a + 1, m):
                if self.margins[a][b] != -self.margins[b][a]:
                    raise ValueError("margin matrix must be antisymmetric")

    @property
    def m(self) -> int:
        return len(self.margins)

    def margin(self, a: int, b: int) -> Union[int, Fraction]:
        return self.margins[a][b]

    def l1_distance(self, other: "WMG") -> Union[int, Fraction]:
        if other.m != self.m:
            raise DimensionError("margin matrices must share m")
        return sum(
            abs(self.margins[a][b] - other.margins[a][b])
            for a in range(self.m)
            for b in range(self.m)
        )

    def scaled(self, factor: Union[int, Fraction]) -> "WMG":
        return WMG(tuple(tuple(v * factor for v in row) for row in self.margins))


@dataclass(frozen=True)
class Digraph:
    """Unweighted directed graph on vertices ``0..m-1``.

    No duplicate arcs, no self-loops; 2-cycles are representable but
    rejected by constructions that require an antisymmetric arc set.
    """

    m: int
    arcs: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("digraph needs at least one vertex")
        for u, v in self.arcs:
            if u == v:
                raise ValueError("self-loops are not allowed")
            if not (0 <= u < self.m and 0 <= v < self.m):
                raise ValueError(f"arc ({u},{v}) out of range for m={self.m}")

    @classmethod
    def of(cls, m: int, arcs: Iterable[tuple[int, int]]) -> "Digraph":
        arc_list = [tuple(a) for a in arcs]
        arc_set = frozenset(arc_list)
        if len(arc_set) != len(arc_list):
            raise ValueError("duplicate arcs are not allowed")
        return cls(m, arc_set)

    @property
    def edge_count(self) -> int:
        return len(self.arcs)

    def has_two_cycle(self) -> bool:
        return any((v, u) in self.arcs for u, v in self.arcs)

    def is_eulerian(self) -> bool:
        """Every vertex balanced and all arcs in one weak component."""
        indeg = [0] * self.m
        outdeg = [0] * self.m
        for u, v in self.arcs:
            outdeg[u] += 1
            indeg[v] += 1
        if indeg != outdeg:
            return False
        active = [v for v in range(self.m) if indeg[v] + outdeg[v] > 0]
        if not active:
            return True
        neighbours: dict[int, set[int]] = {v: set() for v in active}
        for u, v in self.arcs:
            neighbours[u].add(v)
            neighbours[v].add(u)
        seen = {active[0]}
        stack = [active[0]]
        while stack:
            for w in neighbours[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(active)

    def margin_matrix(self) -> WMG:
        """Adjacency as a +/-1 margin matrix; requires no 2-cycles."""
        if self.has_two_cycle():
            raise ValueError("2-cycles have no antisymmetric margin matrix")
        rows = [[0] * self.m for _ in range(self.m)]
        for u, v in self.arcs:
            rows[u][v] = 1
            rows[v][u] = -1
        return WMG(tuple(tuple(row) for row in rows))


def _check_same_m(r1: Ranking, r2: Ranking) -> None:
    if r1.m != r2.m:
        raise DimensionError(f"rankings have mismatched m: {r1.m} vs {r2.m}")


def kt_distance(r1: Ranking, r2: Ranking) -> int:
    """Number of unordered pairs ranked oppositely by the two rankings.

    A metric on rankings of fixed m, bounded by ``m*(m-1)/2``.
    """
    _check_same_m(r1, r2)
    pos2 = r2.positions
    order = r1.order
    count = 0
    for i in range(len(order)):
        pi = pos2[order[i]]
        for j in range(i + 1, len(order)):
            if pos2[order[j]] < pi:
                count += 1
    return count


def kt_profile_distance(p: AnyProfile, r: Ranking) -> Union[int, Fraction]:
    """(Weighted) sum of pairwise-disagreement counts against ``r``."""
    if p.m != r.m:
        raise DimensionError(f"profile m={p.m} vs ranking m={r.m}")
    total = sum(w * kt_distance(other, r) for other, w in _weighted_items(p))
    return total


def top_k(r: Ranking, k: int) -> tuple[int, ...]:
    """The first ``k`` entries of the ranking, in order."""
    if not 1 <= k <= r.m:
        raise ValueError(f"k={k} out of range 1..{r.m}")
    return r.order[:k]


def apply_permutation(sigma: Sequence[int], r: Ranking) -> Ranking:
    """Relabel alternatives: entry ``x`` becomes ``sigma[x]``.

    Group action on rankings: composing relabelings first and applying
    once equals applying them one after another.
    """
    if sorted(sigma) != list(range(r.m)):
        raise ValueError("sigma must be a bijection on 0..m-1")
    return Ranking(tuple(sigma[x] for x in r.order))


def permute_profile(sigma: Sequence[int], p: Profile) -> Profile:
    """Apply one relabeling to every ballot."""
    return Profile(tuple(apply_permutation(sigma, r) for r in p.rankings))


def _canonical_tail(m: int, m_prime: int) -> tuple[int, ...]:
    return tuple(range(m, m + m_prime))


def app_last(
    p: Profile,
    m_prime: int,
    tail_orders: Optional[Sequence[Sequence[int]]] = None,
) -> Profile:
    """Append ``m_prime`` fresh alternatives below every ballot.

    Each output ballot keeps its original order on the first ``m``
    alternatives followed by the given per-voter tail (default: ascending
    index). The ascending default is an arbitrary-but-deterministic
    choice; every member of the appended family shares the properties
    callers rely on.
    """
    if m_prime < 1:
        raise ValueError("m_prime must be positive")
    m = p.m
    new_alts = set(_canonical_tail(m, m_prime))
    if tail_orders is None:
        tails = [_canonical_tail(m, m_prime)] * p.n
    else:
        if len(tail_orders) != p.n:
            raise ValueError("need one tail order per voter")
        tails = []
        for t in tail_orders:
            tt = tuple(t)
            if set(tt) != new_alts or len(tt) != m_prime:
                raise ValueError(f"tail {tt!r} is not a permutation of the new alternatives")
            tails.append(tt)
    return Profile(tuple(Ranking(r.order + t) for r, t in zip(p.rankings, tails)))


def iter_app_last(p: Profile, m_prime: int) -> Iterator[Profile]:
    """Yield every profile obtainable by appending ``m_prime`` alternatives.

    There are ``(m_prime!)**n`` members; intended for tiny enumerations.
    """
    tail_perms = list(itertools.permutations(_canonical_tail(p.m, m_prime)))
    for combo in itertools.product(tail_perms, repeat=p.n):
        yield app_last(p, m_prime, combo)


def wmg(p: AnyProfile) -> WMG:
    """Pairwise net-margin matrix of a (weighted) profile."""
    m = p.m
    zero: Union[int, Fraction] = 0 if isinstance(p, Profile) else Fraction(0)
    rows = [[zero] * m for _ in range(m)]
    for r, w in _weighted_items(p):
        pos = r.positions
        for a in range(m):
            pa = pos[a]
            for b in range(a + 1, m):
                if pa < pos[b]:
                    rows[a][b] += w
                else:
                    rows[a][b] -= w
    for a in range(m):
        for b in range(a + 1, m):
            rows[b][a] = -rows[a][b]
    return WMG(tuple(tuple(row) for row in rows))


def condorcet_winner(p: Profile) -> Optional[int]:
    """The alternative beating every other by strict majority, if any."""
    graph = wmg(p)
    for a in range(p.m):
        if all(graph.margin(a, b) > 0 for b in range(p.m) if b != a):
            return a
    return None


def deficit(p: Profile, a: int, b: int) -> int:
    """Extra ``a``-over-``b`` votes needed before ``a`` majority-beats ``b``.

    ``max(0, n//2 + 1 - votes(a over b))``; zero exactly when ``a``
    already beats ``b`` by strict majority.
    """
    if a == b:
        raise ValueError("deficit needs two distinct alternatives")
    votes = sum(w for r, w in p.grouped.items() if r.prefers(a, b))
    return max(0, p.n // 2 + 1 - votes)


def backward_arcs(g: Digraph, r: Ranking) -> int:
    """Arcs (u -> v) whose head ``v`` is ranked above the tail ``u``."""
    if g.m != r.m:
        raise DimensionError(f"digraph m={g.m} vs ranking m={r.m}")
    pos = r.positions
    return sum(1 for u, v in g.arcs if pos[v] < pos[u])
