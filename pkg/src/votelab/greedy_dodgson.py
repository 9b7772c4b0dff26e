"""Polynomial-time Dodgson scoring with a self-certified answer.

The greedy engine buys each missing majority vote with a single adjacent
swap in a ballot where the rival sits directly above the target. When
every rival offers enough directly-adjacent ballots, that spend is
provably optimal and the result is flagged ``definitely``; otherwise the
spend is still a valid lower bound and the result is flagged ``maybe``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import Profile, deficit

__all__ = [
    "Certainty",
    "Decision",
    "GreedyResult",
    "immediately_above_count",
    "greedy_dodgson",
    "semirandom_dodgson_decision",
]


class Certainty(enum.Enum):
    DEFINITELY = "definitely"
    MAYBE = "maybe"


class Decision(enum.Enum):
    YES = "yes"
    NO = "no"
    FAILURE = "failure"


@dataclass(frozen=True)
class GreedyResult:
    """Score plus a certification flag.

    ``definitely`` guarantees the score equals the true Dodgson score;
    ``maybe`` keeps it as a lower bound.
    """

    score: int
    certainty: Certainty

    @property
    def is_definite(self) -> bool:
        return self.certainty is Certainty.DEFINITELY


def immediately_above_count(p: Profile, a: int, b: int) -> int:
    """Ballots in which ``b`` sits in the position directly above ``a``."""
    if a == b:
        raise ValueError("need two distinct alternatives")
    total = 0
    for r, count in p.grouped.items():
        pos = r.positions
        if pos[b] == pos[a] - 1:
            total += count
    return total


def greedy_dodgson(p: Profile, a: int) -> GreedyResult:
    """Sum of per-rival vote deficits, certified when cheaply payable.

    For each rival ``b`` the target owes ``deficit(p, a, b)`` votes, and
    each vote costs at least one swap, so the sum is always a lower bound
    on the Dodgson score. When every rival with a positive deficit sits
    directly above ``a`` in at least that many ballots, one swap per owed
    vote suffices (the adjacent ballots for distinct rivals are disjoint,
    since only one alternative can sit directly above ``a`` per ballot),
    so the bound is exact and the result says ``definitely``.
    """
    if p.m < 3:
        raise ValueError("rule computations require at least 3 alternatives")
    if not 0 <= a < p.m:
        raise ValueError(f"alternative {a} out of range")
    total = 0
    certified = True
    for b in range(p.m):
        if b == a:
            continue
        owed = deficit(p, a, b)
        total += owed
        if owed > 0 and immediately_above_count(p, a, b) < owed:
            certified = False
    return GreedyResult(total, Certainty.DEFINITELY if certified else Certainty.MAYBE)


def semirandom_dodgson_decision(p: Profile, a: int, t: int) -> Decision:
    """Threshold decision that refuses to guess.

    Returns ``yes``/``no`` only with a certified score (so those answers
    are always correct) and ``failure`` otherwise.
    """
    result = greedy_dodgson(p, a)
    if not result.is_definite:
        return Decision.FAILURE
    return Decision.YES if result.score <= t else Decision.NO
