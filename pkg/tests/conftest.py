"""Shared fixtures and independent brute-force oracles.

Oracles here deliberately avoid the package's solver code paths: the
Kemeny oracle enumerates all rankings, the assignment oracles enumerate
raw assignment functions, and the pairwise-disagreement oracle counts
pairs directly. Expected values in tests are frozen from these.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from votelab import Committee, Profile, Ranking, linear_dpsf


def random_ranking(rng: np.random.Generator, m: int) -> Ranking:
    return Ranking(tuple(int(x) for x in rng.permutation(m)))


def random_profile(rng: np.random.Generator, m: int, n: int) -> Profile:
    return Profile(tuple(random_ranking(rng, m) for _ in range(n)))


def kt_brute(r1: Ranking, r2: Ranking) -> int:
    """Count disagreeing pairs one by one."""
    return sum(
        1
        for a, b in itertools.combinations(range(r1.m), 2)
        if r1.prefers(a, b) != r2.prefers(a, b)
    )


def kemeny_brute(p: Profile) -> tuple[Ranking, int]:
    """Minimum profile disagreement over all m! rankings, first-lex winner."""
    wrong = np.zeros((p.m, p.m), dtype=np.int64)
    for r, count in p.grouped.items():
        for x, y in itertools.combinations(range(p.m), 2):
            if r.prefers(x, y):
                wrong[y][x] += count
            else:
                wrong[x][y] += count
    best_order, best_score = None, None
    for perm in itertools.permutations(range(p.m)):
        score = sum(
            wrong[perm[i]][perm[j]]
            for i in range(p.m)
            for j in range(i + 1, p.m)
        )
        if best_score is None or score < best_score:
            best_order, best_score = perm, int(score)
    return Ranking(best_order), best_score


def kemeny_alt_brute(p: Profile, a: int) -> int:
    best = None
    for perm in itertools.permutations(range(p.m)):
        if perm[0] != a:
            continue
        score = 0
        r = Ranking(perm)
        for other, count in p.grouped.items():
            score += count * kt_brute(other, r)
        if best is None or score < best:
            best = score
    return best


def _aggregate(values, aggregator: str) -> int:
    return sum(values) if aggregator == "sum" else min(values)


def cc_brute(p: Profile, committee: Committee, aggregator: str) -> int:
    """Best aggregate over every raw assignment function."""
    alpha = linear_dpsf()
    members = sorted(committee.members)
    best = None
    for assignment in itertools.product(members, repeat=p.n):
        value = _aggregate(
            [alpha(p.rankings[i].position(assignment[i]) + 1) for i in range(p.n)],
            aggregator,
        )
        if best is None or value > best:
            best = value
    return best


def monroe_brute(p: Profile, committee: Committee, aggregator: str) -> int:
    """Best aggregate over capacity-feasible assignment functions."""
    alpha = linear_dpsf()
    members = sorted(committee.members)
    k = len(members)
    low, high = p.n // k, math.ceil(p.n / k)
    best = None
    for assignment in itertools.product(members, repeat=p.n):
        loads = {c: 0 for c in members}
        for c in assignment:
            loads[c] += 1
        if any(not low <= loads[c] <= high for c in members):
            continue
        value = _aggregate(
            [alpha(p.rankings[i].position(assignment[i]) + 1) for i in range(p.n)],
            aggregator,
        )
        if best is None or value > best:
            best = value
    return best


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260810)
