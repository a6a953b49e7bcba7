"""Run every law on the seeded standard ensemble and summarize per law.

Usage: python3 scripts/run_law_suite.py [--seed 0] [--jsonl verdicts.jsonl]
"""

import argparse
import collections
import time

from ultraspec.perturbation import law_check, mutation_self_test, standard_ensemble
from ultraspec.serialize import dumps


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jsonl", default=None)
    args = parser.parse_args()

    start = time.perf_counter()
    verdicts = [law_check(law, inst) for law, inst in standard_ensemble(args.seed)]
    tally = collections.defaultdict(collections.Counter)
    for v in verdicts:
        tally[v.law_id]["pass" if v.passed else ("ladder" if v.ladder_limited else "fail")] += 1
    print(f"{'law':6} {'pass':>5} {'fail':>5} {'ladder':>7}")
    for law in sorted(tally):
        c = tally[law]
        print(f"{law:6} {c['pass']:5d} {c['fail']:5d} {c['ladder']:7d}")
    print(f"mutation self-test flips: {mutation_self_test()}")
    print(f"{len(verdicts)} verdicts in {time.perf_counter() - start:.1f}s")
    if args.jsonl:
        with open(args.jsonl, "w") as fh:
            for v in verdicts:
                fh.write(dumps(v.to_json()) + "\n")


if __name__ == "__main__":
    main()
