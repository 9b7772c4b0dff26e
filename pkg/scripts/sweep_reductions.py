#!/usr/bin/env python3
"""Exhaustive exact-cover reduction sweep: equivalence, margins, sizes.

Enumerates every instance with q in {3, 6} and up to --max-s subsets,
builds the Dodgson reduction profile for each, and checks that a cover
exists iff the critical alternative's score is within 4q/3. Also reports
the margin top-up block sizes (the construction aborts if one would have
to be negative; none ever is on this range).

Usage: python scripts/sweep_reductions.py [--max-s 6]
"""

import argparse
import sys
import time

import votelab as vl


def booster_copies(inst: vl.X3CInstance, profile_size: int) -> int:
    """Long-ballot copies = n minus the swing and balancing blocks."""
    membership = [0] * inst.q
    for sub in inst.subsets:
        for e in sub:
            membership[e] += 1
    balancing = sum(max(membership) - c for c in membership)
    return profile_size - inst.s - balancing


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-s", type=int, default=6)
    args = parser.parse_args()

    started = time.perf_counter()
    total = mismatches = covers = 0
    max_booster = 0
    max_n = 0
    for q in (3, 6):
        for inst in vl.enumerate_x3c_instances(q, args.max_s):
            out = vl.x3c_to_dodgson(inst)
            max_booster = max(max_booster, booster_copies(inst, out.profile.n))
            max_n = max(max_n, out.profile.n)
            covered = vl.x3c_bruteforce(inst)
            within = (
                vl.dodgson_score_within(out.profile, out.critical, out.threshold)
                is not None
            )
            covers += covered
            mismatches += covered != within
            total += 1
    elapsed = time.perf_counter() - started
    print(
        f"instances: {total}  covers: {covers}  mismatches: {mismatches}  "
        f"max ballots: {max_n}  max top-up copies: {max_booster}  {elapsed:.1f}s"
    )
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
