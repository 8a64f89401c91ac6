"""Table of Z(closed genus-g surface, G) for the builtin groups.

Each value is computed by counting flat fields and compared with the sum over
irreducible character degrees, whose degrees are recovered from the class count,
the abelianization order and the sum of squares.
"""

import argparse
from fractions import Fraction

from nfold.cobordism import dw_invariant, surface
from nfold.groups import builtin_groups


def degrees(G) -> list[int]:
    elems = range(G.order)
    classes = len(G.conjugacy_classes())
    commutators = {G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b))) for a in elems for b in elems}
    derived = G._closure(sorted(commutators))
    linear = G.order // len(derived)
    # remaining degrees: classes - linear values >= 2 dividing |G| whose squares sum to |G| - linear
    rest, need = classes - linear, G.order - linear

    def search(k, lo, left):
        if k == 0:
            return [] if left == 0 else None
        for d in range(lo, int(left**0.5) + 1):
            if G.order % d == 0:
                tail = search(k - 1, d, left - d * d)
                if tail is not None:
                    return [d] + tail
        return None

    return [1] * linear + (search(rest, 2, need) or [])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-genus", type=int, default=3)
    ap.add_argument("--max-order", type=int, default=8)
    args = ap.parse_args()
    gs = range(args.max_genus + 1)
    print(f"{'group':>10} " + " ".join(f"{'g=' + str(g):>10}" for g in gs) + "  agrees")
    for G in builtin_groups(args.max_order):
        ds = degrees(G)
        zs = [dw_invariant(surface(g), G) for g in gs]
        ref = [sum((Fraction(G.order, d) ** (2 * g - 2) for d in ds), Fraction(0)) for g in gs]
        print(f"{G.name:>10} " + " ".join(f"{str(z):>10}" for z in zs) + f"  {zs == ref}")


if __name__ == "__main__":
    main()
