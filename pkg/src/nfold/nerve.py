"""Truncated bisimplicial nerves and the unique inner horn-filling test.

A (p, q)-multisimplex of the nerve of a double category is a p x q grid
of composable squares together with its edges and vertices::

    objs[a][b]   0 <= a <= p, 0 <= b <= q
    h[a][b]      direction-1 arrow objs[a][b] -> objs[a+1][b]
    v[a][b]      direction-2 arrow objs[a][b] -> objs[a][b+1]
    sq[a][b]     square with s1 = v[a][b], t1 = v[a+1][b], s2 = h[a][b], t2 = h[a][b+1]

Faces compose (inner) or drop (outer) a column or row; degeneracies
insert identities.  ``MultiSimplicialSet`` stores every face and
degeneracy as an explicit table so that mutated copies can be tested.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

from .errors import CapacityError, ValidationError
from .strict import FiniteDoubleCategory

Bidegree = tuple[int, int]
OpKey = tuple  # (direction, index, bidegree of the source simplex)


@dataclass
class MultiSimplicialSet:
    cap: Bidegree
    simplices: dict[Bidegree, list]
    faces: dict[OpKey, dict] = field(default_factory=dict)
    degeneracies: dict[OpKey, dict] = field(default_factory=dict)

    def bidegrees(self) -> list[Bidegree]:
        return sorted(self.simplices)

    def count(self) -> dict[str, int]:
        return {f"{p},{q}": len(s) for (p, q), s in sorted(self.simplices.items())}

    def face(self, direction: int, k: int, pq: Bidegree, x):
        return self.faces[(direction, k, pq)][x]

    def degenerate(self) -> set:
        out = set()
        for table in self.degeneracies.values():
            out.update(table.values())
        return out


def _lower(pq: Bidegree, direction: int) -> Bidegree:
    p, q = pq
    return (p - 1, q) if direction == 1 else (p, q - 1)


def _raise(pq: Bidegree, direction: int) -> Bidegree:
    p, q = pq
    return (p + 1, q) if direction == 1 else (p, q + 1)


# -- grid simplices ---------------------------------------------------------------------------

# A grid is (objs, h, v, sq), each a tuple of columns indexed [a][b].


def _tup(rows) -> tuple:
    return tuple(tuple(r) for r in rows)


def _grids(C: FiniteDoubleCategory, p: int, q: int, limit: int) -> list[tuple]:
    """Every composable p x q grid in ``C``."""
    out: list[tuple] = []

    def emit(objs, h, v, sq) -> None:
        out.append((_tup(objs), _tup(h), _tup(v), _tup(sq)))
        if len(out) > limit:
            raise CapacityError(f"more than {limit} simplices in bidegree ({p},{q})")

    if p == 0 and q == 0:
        for o in C.objects:
            emit([[o]], [], [[]], [])
        return out
    if q == 0:
        for chain in _chains(C.arrows1, p):
            objs = [[C.arrows1[chain[0]][0]]] + [[C.arrows1[a][1]] for a in chain]
            emit(objs, [[a] for a in chain], [[] for _ in range(p + 1)], [[] for _ in range(p)])
        return out
    if p == 0:
        for chain in _chains(C.arrows2, q):
            objs = [[C.arrows2[chain[0]][0]] + [C.arrows2[a][1] for a in chain]]
            emit(objs, [], [list(chain)], [])
        return out
    by_s1s2: dict = {}
    by_s1: dict = {}
    by_s2: dict = {}
    for x, (s1, t1, s2, t2) in C.squares.items():
        by_s1s2.setdefault((s1, s2), []).append(x)
        by_s1.setdefault(s1, []).append(x)
        by_s2.setdefault(s2, []).append(x)
    cells = [(a, b) for b in range(q) for a in range(p)]
    grid: dict = {}

    def search(i: int) -> None:
        if i == len(cells):
            sq = [[grid[(a, b)] for b in range(q)] for a in range(p)]
            v = [[C.s1(sq[a][b]) if a < p else C.t1(sq[p - 1][b]) for b in range(q)] for a in range(p + 1)]
            h = [[C.s2(sq[a][b]) if b < q else C.t2(sq[a][q - 1]) for b in range(q + 1)] for a in range(p)]
            objs = [[C.arrows1[h[a][b]][0] if a < p else C.arrows1[h[p - 1][b]][1] for b in range(q + 1)] for a in range(p + 1)]
            emit(objs, h, v, sq)
            return
        a, b = cells[i]
        left = C.t1(grid[(a - 1, b)]) if a > 0 else None
        below = C.t2(grid[(a, b - 1)]) if b > 0 else None
        if left is not None and below is not None:
            cands = by_s1s2.get((left, below), ())
        elif left is not None:
            cands = by_s1.get(left, ())
        elif below is not None:
            cands = by_s2.get(below, ())
        else:
            cands = C.squares
        for x in cands:
            grid[(a, b)] = x
            search(i + 1)
        grid.pop((a, b), None)

    search(0)
    return out


def _chains(arrows: dict, n: int) -> Iterator[tuple]:
    by_src: dict = {}
    for a, (s, _) in arrows.items():
        by_src.setdefault(s, []).append(a)

    def extend(chain: tuple) -> Iterator[tuple]:
        if len(chain) == n:
            yield chain
            return
        for b in by_src.get(arrows[chain[-1]][1], ()):
            yield from extend(chain + (b,))

    for a in arrows:
        yield from extend((a,))


def _swap(rows, n: int, m: int) -> tuple:
    """Transpose an n x m table given as n columns of length m."""
    return tuple(tuple(rows[a][b] for a in range(n)) for b in range(m))


def _transpose_grid(g: tuple, p: int, q: int) -> tuple:
    """A (p, q) grid read as a (q, p) grid of the transposed double category."""
    objs, h, v, sq = g
    return (_swap(objs, p + 1, q + 1), _swap(v, p + 1, q), _swap(h, p, q + 1), _swap(sq, p, q))


def _grid_face(C: FiniteDoubleCategory, g: tuple, k: int, p: int, q: int) -> tuple:
    """Direction-1 face d_k of a (p, q) grid."""
    objs, h, v, sq = (list(map(list, part)) for part in g)
    if k == 0:
        objs, h, v, sq = objs[1:], h[1:], v[1:], sq[1:]
    elif k == p:
        objs, h, v, sq = objs[:-1], h[:-1], v[:-1], sq[:-1]
    else:
        h = h[: k - 1] + [[C.comp1[(h[k - 1][b], h[k][b])] for b in range(q + 1)]] + h[k + 1 :]
        sq = sq[: k - 1] + [[C.sq_comp1[(sq[k - 1][b], sq[k][b])] for b in range(q)]] + sq[k + 1 :]
        objs = objs[:k] + objs[k + 1 :]
        v = v[:k] + v[k + 1 :]
    if p - 1 == 0:
        h, sq = [], []
    return (_tup(objs), _tup(h), _tup(v), _tup(sq))


def _grid_degeneracy(C: FiniteDoubleCategory, g: tuple, k: int, p: int, q: int) -> tuple:
    """Direction-1 degeneracy s_k of a (p, q) grid: repeat column k."""
    objs, h, v, sq = (list(map(list, part)) for part in g)
    new_h = [C.id1[objs[k][b]] for b in range(q + 1)]
    new_sq = [C.sq_id1[v[k][b]] for b in range(q)]
    return (
        _tup(objs[:k] + [objs[k]] + objs[k:]),
        _tup(h[:k] + [new_h] + h[k:]),
        _tup(v[:k] + [v[k]] + v[k:]),
        _tup(sq[:k] + [new_sq] + sq[k:]),
    )


def nerve(C: FiniteDoubleCategory, cap: Bidegree = (3, 3), limit: int = 200_000) -> MultiSimplicialSet:
    P, Q = cap
    simplices = {(p, q): _grids(C, p, q, limit) for p in range(P + 1) for q in range(Q + 1)}
    T = C.transpose()
    N = MultiSimplicialSet(cap, simplices)
    for (p, q), xs in simplices.items():
        for k in range(p + 1):
            if p > 0:
                N.faces[(1, k, (p, q))] = {x: _grid_face(C, x, k, p, q) for x in xs}
            if p < P:
                N.degeneracies[(1, k, (p, q))] = {x: _grid_degeneracy(C, x, k, p, q) for x in xs}
        for k in range(q + 1):
            if q > 0:
                N.faces[(2, k, (p, q))] = {
                    x: _transpose_grid(_grid_face(T, _transpose_grid(x, p, q), k, q, p), q - 1, p) for x in xs
                }
            if q < Q:
                N.degeneracies[(2, k, (p, q))] = {
                    x: _transpose_grid(_grid_degeneracy(T, _transpose_grid(x, p, q), k, q, p), q + 1, p) for x in xs
                }
    members = {pq: set(xs) for pq, xs in simplices.items()}
    for (d, k, pq), table in list(N.faces.items()):
        target = _lower(pq, d)
        if not all(y in members[target] for y in table.values()):
            raise AssertionError(f"face d{d}_{k} on {pq} leaves the nerve")
    return N


# -- simplicial identities ------------------------------------------------------------------------


@dataclass
class IdentityReport:
    ok: bool
    checked: int
    failures: list[str]

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "failures": self.failures[:10]}


def check_simplicial_identities(N: MultiSimplicialSet) -> IdentityReport:
    """Face/degeneracy identities in each direction, and commutation across directions."""
    checked = 0
    failures: list[str] = []

    def d(direction, k, pq, x):
        return N.faces[(direction, k, pq)][x]

    def s(direction, k, pq, x):
        return N.degeneracies[(direction, k, pq)][x]

    for pq, xs in N.simplices.items():
        try:
            checked += _check_bidegree(N, pq, xs, d, s, failures)
        except KeyError:
            # A deleted simplex leaves some face or degeneracy undefined.
            failures.append(f"face or degeneracy undefined at {pq}")
    return IdentityReport(not failures, checked, failures[:20])


def _check_bidegree(N: MultiSimplicialSet, pq: Bidegree, xs: list, d, s, failures: list[str]) -> int:
    checked = 0
    for e in (1, 2):
        n = pq[e - 1]
        low = _lower(pq, e)
        up = _raise(pq, e)
        for x in xs:
            # d_i d_j = d_{j-1} d_i for i < j
            if n >= 2:
                for i in range(n + 1):
                    for j in range(i + 1, n + 1):
                        checked += 1
                        if d(e, i, low, d(e, j, pq, x)) != d(e, j - 1, low, d(e, i, pq, x)):
                            failures.append(f"d{i}d{j} != d{j - 1}d{i} in direction {e} at {pq}")
            # d_i s_j: s_{j-1} d_i (i<j), id (i=j,j+1), s_j d_{i-1} (i>j+1)
            if (e, 0, pq) in N.degeneracies:
                for j in range(n + 1):
                    y = s(e, j, pq, x)
                    for i in range(n + 2):
                        checked += 1
                        got = d(e, i, up, y)
                        if i in (j, j + 1):
                            want = x
                        elif i < j:
                            want = s(e, j - 1, low, d(e, i, pq, x))
                        else:
                            want = s(e, j, low, d(e, i - 1, pq, x))
                        if got != want:
                            failures.append(f"d{i}s{j} identity fails in direction {e} at {pq}")
                    for i in range(j + 1):
                        if (e, 0, up) in N.degeneracies:
                            checked += 1
                            if s(e, i, up, y) != s(e, j + 1, up, s(e, i, pq, x)):
                                failures.append(f"s{i}s{j} identity fails in direction {e} at {pq}")
    # cross-direction commutation of faces
    p, q = pq
    if p > 0 and q > 0:
        for x in xs:
            for i in range(p + 1):
                for j in range(q + 1):
                    checked += 1
                    a = d(2, j, (p - 1, q), d(1, i, pq, x))
                    b = d(1, i, (p, q - 1), d(2, j, pq, x))
                    if a != b:
                        failures.append(f"d1_{i} and d2_{j} do not commute at {pq}")
    return checked


# -- horns -------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiHorn:
    """Shape of a multihorn in bidegree ``(p, q)``.

    ``horns[e]`` is ``None`` for a full simplex in direction ``e + 1`` or
    the missing inner index ``j`` of an inner horn.
    """

    bidegree: Bidegree
    horns: tuple

    def __post_init__(self) -> None:
        for n, j in zip(self.bidegree, self.horns):
            if j is not None and not 0 < j < n:
                raise ValidationError(f"horn index {j} is not inner in degree {n}")
        if all(j is None for j in self.horns):
            raise ValidationError("a multihorn needs at least one horn direction")

    def components(self) -> list[tuple[int, int]]:
        """(direction, face index) of the faces the horn contains."""
        out = []
        for e, j in enumerate(self.horns, start=1):
            if j is not None:
                out.extend((e, k) for k in range(self.bidegree[e - 1] + 1) if k != j)
        return out

    def label(self) -> str:
        parts = []
        for n, j in zip(self.bidegree, self.horns):
            parts.append(f"D{n}" if j is None else f"L{n}_{j}")
        return "(" + ",".join(parts) + ")"


def inner_horn_shapes(cap: Bidegree) -> list[MultiHorn]:
    shapes = []
    for p, q in product(range(cap[0] + 1), range(cap[1] + 1)):
        opts1 = [None] + list(range(1, p))
        opts2 = [None] + list(range(1, q))
        for j1, j2 in product(opts1, opts2):
            if j1 is None and j2 is None:
                continue
            shapes.append(MultiHorn((p, q), (j1, j2)))
    return shapes


@dataclass
class HornResult:
    shape: str
    horns: int
    filled_uniquely: int
    unfilled: int
    multiply_filled: int
    witness: str | None = None

    @property
    def ok(self) -> bool:
        return self.unfilled == 0 and self.multiply_filled == 0


@dataclass
class HornReport:
    ok: bool
    results: list[HornResult]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "shapes": [
                {
                    "shape": r.shape,
                    "horns": r.horns,
                    "unique": r.filled_uniquely,
                    "unfilled": r.unfilled,
                    "multiple": r.multiply_filled,
                    "witness": r.witness,
                }
                for r in self.results
            ],
        }


def _compatible(N: MultiSimplicialSet, pq: Bidegree, c1: tuple[int, int], y1, c2: tuple[int, int], y2) -> bool:
    """Do the chosen faces agree on their common face?"""
    (e1, a), (e2, b) = c1, c2
    if e1 == e2:
        if a > b:
            (a, y1), (b, y2) = (b, y2), (a, y1)
        low = _lower(pq, e1)
        # d_a y_b == d_{b-1} y_a  for a < b
        return N.faces[(e1, a, low)][y2] == N.faces[(e1, b - 1, low)][y1]
    if e1 == 2:
        (e1, a, y1), (e2, b, y2) = (e2, b, y2), (e1, a, y1)
    # y1 = d1_a x, y2 = d2_b x, common face d2_b y1 == d1_a y2
    return N.faces[(2, b, _lower(pq, 1))][y1] == N.faces[(1, a, _lower(pq, 2))][y2]


def _requirement(pq: Bidegree, new: tuple[int, int], old: tuple[int, int]) -> tuple[tuple[int, int], tuple]:
    """Which face of the new component an earlier choice pins down.

    Returns ``(face op on the new simplex, face op on the old simplex)``;
    compatibility means both ops give the same simplex.
    """
    (e, k), (f, a) = new, old
    if e == f:
        if a < k:
            return (e, a), (e, k - 1, _lower(pq, e))
        return (e, a - 1), (e, k, _lower(pq, e))
    if e == 1:
        return (2, a), (1, k, _lower(pq, 2))
    return (1, a), (2, k, _lower(pq, 1))


def horn_data(N: MultiSimplicialSet, shape: MultiHorn) -> Iterator[tuple]:
    """Every compatible family of faces over the horn, in component order."""
    pq = shape.bidegree
    comps = shape.components()
    chosen: list = []
    index: dict = {}

    def lookup(low: Bidegree, op: tuple[int, int], value) -> list:
        key = (low, op)
        if key not in index:
            table: dict = {}
            faces = N.faces[(op[0], op[1], low)]
            for y in N.simplices[low]:
                table.setdefault(faces[y], []).append(y)
            index[key] = table
        return index[key].get(value, [])

    def search(i: int) -> Iterator[tuple]:
        if i == len(comps):
            yield tuple(chosen)
            return
        e, k = comps[i]
        low = _lower(pq, e)
        if i == 0:
            cands = N.simplices[low]
        else:
            op, old_op = _requirement(pq, (e, k), comps[0])
            cands = lookup(low, op, N.faces[old_op].get(chosen[0]))
        for y in cands:
            if all(_compatible(N, pq, comps[m], chosen[m], (e, k), y) for m in range(1, i)):
                chosen.append(y)
                yield from search(i + 1)
                chosen.pop()

    yield from search(0)


def check_unique_inner_horns(N: MultiSimplicialSet, cap: Bidegree | None = None) -> HornReport:
    cap = cap or N.cap
    results = []
    for shape in inner_horn_shapes(cap):
        pq = shape.bidegree
        comps = shape.components()
        fillers: dict[tuple, int] = {}
        for x in N.simplices[pq]:
            key = tuple(N.faces[(e, k, pq)][x] for e, k in comps)
            fillers[key] = fillers.get(key, 0) + 1
        horns = unique = unfilled = multiple = 0
        witness = None
        for datum in horn_data(N, shape):
            horns += 1
            n = fillers.get(datum, 0)
            if n == 1:
                unique += 1
            elif n == 0:
                unfilled += 1
                witness = witness or f"no filler for {shape.label()} datum {datum!r}"[:400]
            else:
                multiple += 1
                witness = witness or f"{n} fillers for {shape.label()} datum {datum!r}"[:400]
        results.append(HornResult(shape.label(), horns, unique, unfilled, multiple, witness))
    return HornReport(all(r.ok for r in results), results)


# -- mutation -------------------------------------------------------------------------------------------


def delete_simplex(N: MultiSimplicialSet, pq: Bidegree, x) -> MultiSimplicialSet:
    """Copy of ``N`` without ``x`` and without every simplex that has ``x`` as an iterated face."""
    doomed: dict[Bidegree, set] = {b: set() for b in N.simplices}
    doomed[pq].add(x)
    for b in sorted(N.simplices, key=lambda t: t[0] + t[1]):
        if b == pq:
            continue
        for e in (1, 2):
            low = _lower(b, e)
            if low not in doomed or not doomed[low]:
                continue
            for k in range(b[e - 1] + 1):
                table = N.faces.get((e, k, b), {})
                doomed[b].update(y for y, f in table.items() if f in doomed[low])
    simplices = {b: [y for y in xs if y not in doomed[b]] for b, xs in N.simplices.items()}
    faces = {key: {y: f for y, f in t.items() if y not in doomed[key[2]]} for key, t in N.faces.items()}
    # Degeneracies landing on a deleted simplex become undefined.
    degs = {
        key: {y: s for y, s in t.items() if y not in doomed[key[2]] and s not in doomed.get(_raise(key[2], key[0]), ())}
        for key, t in N.degeneracies.items()
    }
    return MultiSimplicialSet(N.cap, simplices, faces, degs)


def composite_candidates(N: MultiSimplicialSet) -> list[tuple[Bidegree, object]]:
    """Simplices in bidegrees carrying an inner horn, nondegenerate ones first."""
    degen = N.degenerate()
    out = []
    for (p, q), xs in sorted(N.simplices.items()):
        if p >= 2 or q >= 2:
            out.extend(((p, q), x) for x in xs)
    out.sort(key=lambda item: (item[1] in degen, item[0]))
    return out


def mutation_detected(N: MultiSimplicialSet, pq: Bidegree, x) -> bool:
    return not check_unique_inner_horns(delete_simplex(N, pq, x)).ok
