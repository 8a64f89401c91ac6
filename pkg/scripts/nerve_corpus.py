"""Inner multihorn filling and mutation detection over the double category corpus."""

import argparse
import time

from nfold.nerve import check_unique_inner_horns, composite_candidates, delete_simplex, nerve
from nfold.strict import check_strict_axioms, corpus


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cap", default="2,2", help="bidegree cap p,q")
    ap.add_argument("--mutations", type=int, default=3, help="composites to delete per category")
    args = ap.parse_args()
    cap = tuple(int(v) for v in args.cap.split(","))
    for C in corpus():
        t0 = time.perf_counter()
        N = nerve(C, cap)
        horns = check_unique_inner_horns(N)
        cands = composite_candidates(N)[: args.mutations]
        caught = sum(not check_unique_inner_horns(delete_simplex(N, pq, x), pq).ok for pq, x in cands)
        print(
            f"{C.name:>24} strict={check_strict_axioms(C).ok} simplices={sum(N.count().values()):>6} "
            f"horns_ok={horns.ok} mutations caught {caught}/{len(cands)} ({time.perf_counter() - t0:.2f}s)"
        )


if __name__ == "__main__":
    main()
