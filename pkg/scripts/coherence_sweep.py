"""Coherence report for every grid up to a cell budget, one line per grid."""

import argparse
import time
from itertools import product

from nfold.diagrams import GluingDiagram
from nfold.rewrite import coherence_report


def grids(max_cells: int, max_dims: int):
    for k in range(1, max_dims + 1):
        for ext in product(range(2, max_cells + 1), repeat=k):
            n = 1
            for e in ext:
                n *= e
            if n <= max_cells and list(ext) == sorted(ext):
                yield ext


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-cells", type=int, default=9)
    ap.add_argument("--max-dims", type=int, default=3)
    args = ap.parse_args()
    print(f"{'grid':>8} {'trees':>6} {'edges':>6} {'pairs':>6} {'H1':>3} {'ok':>5} {'secs':>6}")
    for ext in grids(args.max_cells, args.max_dims):
        t0 = time.perf_counter()
        rep, _ = coherence_report(GluingDiagram(ext))
        name = "x".join(map(str, ext))
        print(f"{name:>8} {rep.n_trees:>6} {rep.n_edges:>6} {len(rep.certificates):>6} {rep.h1.rank:>3} {str(rep.ok):>5} {time.perf_counter() - t0:>6.2f}")


if __name__ == "__main__":
    main()
