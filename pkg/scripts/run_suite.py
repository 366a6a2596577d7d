"""Run the acceptance criteria and optionally write a JSON report."""

import argparse
import json
import sys

from vstar.acceptance import CRITERIA, run_criterion
from vstar.config import SuiteConfig


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    ap.add_argument("--out", help="write results (with timings) to this JSON file")
    args = ap.parse_args()

    cfg = SuiteConfig(seed=args.seed)
    numbers = args.only or [n for n, _, _ in CRITERIA]
    results = []
    for n in numbers:
        c = run_criterion(n, cfg)
        print(c.line(), flush=True)
        results.append(c)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump([c.to_dict(timings=True) for c in results], fh, ensure_ascii=False, indent=2)
    return 0 if all(c.passed for c in results) else 1


if __name__ == "__main__":
    sys.exit(main())
