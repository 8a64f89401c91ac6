"""Check the pentagon and hexagon cells pointwise on many seeded span grids."""

import argparse

from nfold.diagrams import GluingDiagram
from nfold.spans import SHAPES, check_pseudo_axioms, random_instance


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--core-size", type=int, default=3)
    args = ap.parse_args()
    for shape, (extents, tag) in sorted(SHAPES.items()):
        failed = []
        checks = 0
        for seed in range(args.seeds):
            rep = check_pseudo_axioms(random_instance(GluingDiagram(extents), seed, core_size=args.core_size))
            checks += sum(rep.checked.values())
            if not rep.ok:
                failed.append(seed)
        print(f"{shape:>9} {tag:>9}: {args.seeds - len(failed)}/{args.seeds} instances pass, {checks} equations checked, failed seeds {failed}")


if __name__ == "__main__":
    main()
