"""Send Boolean algebras through Stone spaces and back, printing eta for each."""

import argparse

from vstar.interp import apply, eta_map, get_interp
from vstar.structured import is_isomorphism
from vstar.theories import boolean_algebra_sample


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("sizes", type=int, nargs="*", default=[2, 4, 8])
    args = ap.parse_args()

    t, s = get_interp("bool_to_stone"), get_interp("stone_to_bool")
    for size in args.sizes:
        for k, a in enumerate(boolean_algebra_sample(size)):
            space = apply(t, a)
            back = apply(s, space)
            eta = eta_map(t.eta, a)
            print(f"size {size} #{k}: {len(space.domain)} points, "
                  f"{len(space.structure)} open sets; same domain back: {back.domain is a.domain}")
            print(f"  eta isomorphism: {is_isomorphism(eta, a, back)}")


if __name__ == "__main__":
    main()
