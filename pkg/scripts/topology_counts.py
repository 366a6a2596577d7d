"""Model counts per theory and domain size, with the brute-force topology oracle."""

import argparse

from vstar.acceptance import brute_force_topologies
from vstar.theories import catalog, enumerate_models


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-atoms", type=int, default=3)
    ap.add_argument("theories", nargs="*", default=["top", "nei", "nei_literal", "stone", "metrble", "sub"])
    args = ap.parse_args()

    cat = catalog()
    sizes = range(1, args.max_atoms + 1)
    print(f"{'theory':<12}" + "".join(f"{n:>8}" for n in sizes))
    print(f"{'(oracle)':<12}" + "".join(f"{brute_force_topologies(n):>8}" for n in sizes))
    for name in args.theories:
        t = cat.theory(name)
        row = []
        for n in sizes:
            row.append(str(len(enumerate_models(t, n))) if n <= t.max_atoms else "-")
        print(f"{name:<12}" + "".join(f"{c:>8}" for c in row))


if __name__ == "__main__":
    main()
