"""Finite strict double categories given by explicit tables.

Direction 1 arrows are drawn horizontally and direction 2 arrows vertically.
A square ``x`` has ``s1(x), t1(x)`` in direction 2 (its left and right
edges) and ``s2(x), t2(x)`` in direction 1 (its bottom and top edges).
Composition ``x o_i y`` glues the target of ``x`` to the source of ``y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Hashable, Iterable

from .errors import ValidationError


@dataclass
class FiniteDoubleCategory:
    name: str
    objects: list
    arrows1: dict  # arrow -> (source object, target object)
    arrows2: dict
    squares: dict  # square -> (s1, t1, s2, t2)
    id1: dict  # object -> arrow1
    id2: dict  # object -> arrow2
    sq_id1: dict  # arrow2 -> square with s1 = t1 = that arrow
    sq_id2: dict  # arrow1 -> square with s2 = t2 = that arrow
    comp1: dict  # (arrow1, arrow1) -> arrow1
    comp2: dict  # (arrow2, arrow2) -> arrow2
    sq_comp1: dict  # (square, square) -> square
    sq_comp2: dict

    @property
    def size(self) -> int:
        return len(self.objects) + len(self.arrows1) + len(self.arrows2) + len(self.squares)

    # boundary helpers
    def s1(self, x):
        return self.squares[x][0]

    def t1(self, x):
        return self.squares[x][1]

    def s2(self, x):
        return self.squares[x][2]

    def t2(self, x):
        return self.squares[x][3]

    def transpose(self) -> "FiniteDoubleCategory":
        """Swap the two directions."""
        sq = {x: (s2, t2, s1, t1) for x, (s1, t1, s2, t2) in self.squares.items()}
        return FiniteDoubleCategory(
            self.name + "^T", list(self.objects), dict(self.arrows2), dict(self.arrows1), sq,
            dict(self.id2), dict(self.id1), dict(self.sq_id2), dict(self.sq_id1),
            dict(self.comp2), dict(self.comp1), dict(self.sq_comp2), dict(self.sq_comp1),
        )

    def to_json(self) -> dict:
        names: dict = {}

        def n(x) -> str:
            s = x if isinstance(x, str) else str(x)
            names.setdefault(s, x)
            if names[s] != x:
                raise ValidationError(f"two elements print as {s!r}")
            return s

        return {
            "name": self.name,
            "objects": [n(o) for o in self.objects],
            "arrows1": {n(a): [n(s), n(t)] for a, (s, t) in self.arrows1.items()},
            "arrows2": {n(a): [n(s), n(t)] for a, (s, t) in self.arrows2.items()},
            "squares": {n(x): [n(b) for b in bd] for x, bd in self.squares.items()},
            "id1": {n(o): n(a) for o, a in self.id1.items()},
            "id2": {n(o): n(a) for o, a in self.id2.items()},
            "sq_id1": {n(a): n(x) for a, x in self.sq_id1.items()},
            "sq_id2": {n(a): n(x) for a, x in self.sq_id2.items()},
            "comp1": [[n(a), n(b), n(c)] for (a, b), c in self.comp1.items()],
            "comp2": [[n(a), n(b), n(c)] for (a, b), c in self.comp2.items()],
            "sq_comp1": [[n(a), n(b), n(c)] for (a, b), c in self.sq_comp1.items()],
            "sq_comp2": [[n(a), n(b), n(c)] for (a, b), c in self.sq_comp2.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteDoubleCategory":
        try:
            def table(rows):
                out = {}
                for a, b, c in rows:
                    if (a, b) in out:
                        raise ValidationError(f"composition of {a!r} and {b!r} is listed twice")
                    out[(a, b)] = c
                return out

            return cls(
                data.get("name", "unnamed"),
                list(data["objects"]),
                {a: tuple(st) for a, st in data["arrows1"].items()},
                {a: tuple(st) for a, st in data["arrows2"].items()},
                {x: tuple(bd) for x, bd in data["squares"].items()},
                dict(data["id1"]), dict(data["id2"]), dict(data["sq_id1"]), dict(data["sq_id2"]),
                table(data["comp1"]), table(data["comp2"]), table(data["sq_comp1"]), table(data["sq_comp2"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"malformed double category JSON: {exc}") from exc


@dataclass
class AxiomViolation:
    law: str
    witnesses: tuple

    def to_json(self) -> dict:
        return {"law": self.law, "witnesses": [str(w) for w in self.witnesses]}


@dataclass
class StrictReport:
    ok: bool
    checked: dict[str, int]
    violations: list[AxiomViolation] = field(default_factory=list)

    def laws_failed(self) -> set[str]:
        return {v.law for v in self.violations}

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked": dict(sorted(self.checked.items())),
            "violations": [v.to_json() for v in self.violations[:20]],
        }


def check_strict_axioms(C: FiniteDoubleCategory, max_violations: int = 1000) -> StrictReport:
    """Exhaustively check every identity of a strict double category."""
    checked: dict[str, int] = {}
    bad: list[AxiomViolation] = []

    def law(name: str, ok: bool, *w) -> None:
        checked[name] = checked.get(name, 0) + 1
        if not ok and len(bad) < max_violations:
            bad.append(AxiomViolation(name, w))

    objs = set(C.objects)
    A1, A2, S = C.arrows1, C.arrows2, C.squares

    # typing of boundaries
    for a, (s, t) in list(A1.items()) + list(A2.items()):
        law("boundaries are objects", s in objs and t in objs, a)
    for x, (s1, t1, s2, t2) in S.items():
        typed = s1 in A2 and t1 in A2 and s2 in A1 and t2 in A1
        law("square boundaries are arrows", typed, x)
        if not typed:
            continue
        law("s_i s_j = s_j s_i", A1[s2][0] == A2[s1][0], x)
        law("t_i s_j = s_j t_i", A1[s2][1] == A2[t1][0] and A1[t2][0] == A2[s1][1], x)
        law("t_i t_j = t_j t_i", A1[t2][1] == A2[t1][1], x)
    if bad:
        return StrictReport(False, checked, bad)

    # identities
    for o in objs:
        law("s_i id_i = t_i id_i = id", o in C.id1 and A1.get(C.id1[o]) == (o, o), o)
        law("s_i id_i = t_i id_i = id", o in C.id2 and A2.get(C.id2[o]) == (o, o), o)
        ok = C.id1.get(o) in C.sq_id2 and C.id2.get(o) in C.sq_id1
        law("id_i id_j = id_j id_i", ok and C.sq_id2[C.id1[o]] == C.sq_id1[C.id2[o]], o)
    for v in A2:
        x = C.sq_id1.get(v)
        ok = x in S and S[x][0] == v and S[x][1] == v
        law("s_i id_i = t_i id_i = id", ok, v)
        if ok:
            law("s_i id_j = id_j s_i", S[x][2] == C.id1[A2[v][0]] and S[x][3] == C.id1[A2[v][1]], v)
    for h in A1:
        x = C.sq_id2.get(h)
        ok = x in S and S[x][2] == h and S[x][3] == h
        law("s_i id_i = t_i id_i = id", ok, h)
        if ok:
            law("s_i id_j = id_j s_i", S[x][0] == C.id2[A1[h][0]] and S[x][1] == C.id2[A1[h][1]], h)
    if bad:
        return StrictReport(False, checked, bad)

    # compositions are total on composable pairs, and only there
    def comp_pairs(cells: dict, src, tgt):
        by_src: dict = {}
        for y in cells:
            by_src.setdefault(src(y), []).append(y)
        return [(x, y) for x in cells for y in by_src.get(tgt(x), ())]

    arrow_tables = (
        ("1", A1, C.comp1, C.id1),
        ("2", A2, C.comp2, C.id2),
    )
    for d, A, comp, ids in arrow_tables:
        pairs = comp_pairs(A, lambda y: A[y][0], lambda x: A[x][1])
        law("composition is total on composable pairs", len(pairs) == len(comp) and all(p in comp for p in pairs), d)
        for x, y in pairs:
            z = comp.get((x, y))
            if z not in A:
                law("composition is total on composable pairs", False, x, y)
                continue
            law("s_i(x o_i y) = s_i(x), t_i(x o_i y) = t_i(y)", A[z] == (A[x][0], A[y][1]), x, y)
        for x in A:
            s, t = A[x]
            law("id_i s_i(x) o_i x = x = x o_i id_i t_i(x)", comp.get((ids[s], x)) == x and comp.get((x, ids[t])) == x, x)
        for (x, y), xy in comp.items():
            for z in A:
                if A[z][0] == A[y][1]:
                    yz = comp.get((y, z))
                    law(f"associativity o_{d}", comp.get((xy, z)) == comp.get((x, yz)), x, y, z)
    if bad:
        return StrictReport(False, checked, bad)

    sq1 = comp_pairs(S, C.s1, C.t1)
    sq2 = comp_pairs(S, C.s2, C.t2)
    for d, pairs, comp in (("1", sq1, C.sq_comp1), ("2", sq2, C.sq_comp2)):
        law("composition is total on composable pairs", len(pairs) == len(comp) and all(p in comp for p in pairs), "squares", d)
        for x, y in pairs:
            z = comp.get((x, y))
            if z not in S:
                law("composition is total on composable pairs", False, x, y)
                continue
            if d == "1":
                law("s_i(x o_i y) = s_i(x), t_i(x o_i y) = t_i(y)", (C.s1(z), C.t1(z)) == (C.s1(x), C.t1(y)), x, y)
                law("s_j(x o_i y) = s_j(x) o_i s_j(y)", C.s2(z) == C.comp1.get((C.s2(x), C.s2(y))) and C.t2(z) == C.comp1.get((C.t2(x), C.t2(y))), x, y)
            else:
                law("s_i(x o_i y) = s_i(x), t_i(x o_i y) = t_i(y)", (C.s2(z), C.t2(z)) == (C.s2(x), C.t2(y)), x, y)
                law("s_j(x o_i y) = s_j(x) o_i s_j(y)", C.s1(z) == C.comp2.get((C.s1(x), C.s1(y))) and C.t1(z) == C.comp2.get((C.t1(x), C.t1(y))), x, y)
    if bad:
        return StrictReport(False, checked, bad)

    for x in S:
        law("id_i s_i(x) o_i x = x = x o_i id_i t_i(x)",
            C.sq_comp1.get((C.sq_id1[C.s1(x)], x)) == x and C.sq_comp1.get((x, C.sq_id1[C.t1(x)])) == x, x, "1")
        law("id_i s_i(x) o_i x = x = x o_i id_i t_i(x)",
            C.sq_comp2.get((C.sq_id2[C.s2(x)], x)) == x and C.sq_comp2.get((x, C.sq_id2[C.t2(x)])) == x, x, "2")
    for (u, v), uv in C.comp2.items():
        law("id_i(x o_j y) = id_i(x) o_j id_i(y)", C.sq_comp2.get((C.sq_id1[u], C.sq_id1[v])) == C.sq_id1[uv], u, v)
    for (u, v), uv in C.comp1.items():
        law("id_i(x o_j y) = id_i(x) o_j id_i(y)", C.sq_comp1.get((C.sq_id2[u], C.sq_id2[v])) == C.sq_id2[uv], u, v)

    for d, comp, tgt, src in (("1", C.sq_comp1, C.t1, C.s1), ("2", C.sq_comp2, C.t2, C.s2)):
        by_src: dict = {}
        for z in S:
            by_src.setdefault(src(z), []).append(z)
        for (x, y), xy in comp.items():
            for z in by_src.get(tgt(y), ()):
                law(f"associativity o_{d} (squares)", comp.get((xy, z)) == comp.get((x, comp[(y, z)])), x, y, z)

    # interchange: (x o_1 y) o_2 (x' o_1 y') = (x o_2 x') o_1 (y o_2 y')
    for (x, y), xy in C.sq_comp1.items():
        for (x2, y2), xy2 in C.sq_comp1.items():
            if C.t2(x) != C.s2(x2) or C.t2(y) != C.s2(y2):
                continue
            lhs = C.sq_comp2.get((xy, xy2))
            xx, yy = C.sq_comp2.get((x, x2)), C.sq_comp2.get((y, y2))
            rhs = C.sq_comp1.get((xx, yy))
            law("interchange law", lhs is not None and lhs == rhs, x, y, x2, y2)
    return StrictReport(not bad, checked, bad)


# -- corpus -------------------------------------------------------------------------------


def _from_squares(name: str, objects, arrows1: dict, arrows2: dict, squares: dict, id1, id2, comp1, comp2, sq_id1, sq_id2, sq_comp1, sq_comp2):
    return FiniteDoubleCategory(name, list(objects), arrows1, arrows2, squares, id1, id2, sq_id1, sq_id2, comp1, comp2, sq_comp1, sq_comp2)


def poset_squares(name: str, elements: Iterable[Hashable], leq: Iterable[tuple]) -> FiniteDoubleCategory:
    """Commutative squares in a finite poset; ``leq`` lists the relations (reflexive closure added)."""
    els = list(elements)
    rel = set(leq) | {(a, a) for a in els}
    changed = True
    while changed:  # transitive closure
        changed = False
        for (a, b), (c, d) in product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    ar = {f"{a}<{b}": (a, b) for a, b in sorted(rel)}
    name_of = {v: k for k, v in ar.items()}
    sq = {}
    for (bl, br), (tl, tr) in product(sorted(rel), repeat=2):
        if (bl, tl) in rel and (br, tr) in rel:
            sq[f"[{bl}{br}/{tl}{tr}]"] = (name_of[(bl, tl)], name_of[(br, tr)], name_of[(bl, br)], name_of[(tl, tr)])
    key = {bd: x for x, bd in sq.items()}
    comp = {(x, y): name_of[(ar[x][0], ar[y][1])] for x in ar for y in ar if ar[x][1] == ar[y][0]}
    ids = {o: name_of[(o, o)] for o in els}
    sq_id1 = {v: key[(v, v, ids[ar[v][0]], ids[ar[v][1]])] for v in ar}
    sq_id2 = {h: key[(ids[ar[h][0]], ids[ar[h][1]], h, h)] for h in ar}
    c1 = {}
    c2 = {}
    for x, (s1, t1, s2, t2) in sq.items():
        for y, (u1, v1, u2, v2) in sq.items():
            if t1 == u1:
                c1[(x, y)] = key[(s1, v1, comp[(s2, u2)], comp[(t2, v2)])]
            if t2 == u2:
                c2[(x, y)] = key[(comp[(s1, u1)], comp[(t1, v1)], s2, v2)]
    return _from_squares(name, els, dict(ar), dict(ar), sq, ids, dict(ids), comp, dict(comp), sq_id1, sq_id2, c1, c2)


def horizontal(name: str, objects, arrows: dict, comp: dict, ids: dict) -> FiniteDoubleCategory:
    """A category placed in direction 1; direction 2 and squares are trivial."""
    v = {f"1_{o}": (o, o) for o in objects}
    id2 = {o: f"1_{o}" for o in objects}
    sq = {f"[{h}]": (id2[s], id2[t], h, h) for h, (s, t) in arrows.items()}
    sq_id2 = {h: f"[{h}]" for h in arrows}
    sq_id1 = {id2[o]: f"[{ids[o]}]" for o in objects}
    comp2 = {(id2[o], id2[o]): id2[o] for o in objects}
    sq_comp1 = {(f"[{a}]", f"[{b}]"): f"[{c}]" for (a, b), c in comp.items()}
    sq_comp2 = {(f"[{h}]", f"[{h}]"): f"[{h}]" for h in arrows}
    return _from_squares(name, objects, dict(arrows), v, sq, dict(ids), id2, dict(comp), comp2, sq_id1, sq_id2, sq_comp1, sq_comp2)


def group_category(n: int) -> tuple[list, dict, dict, dict]:
    """The cyclic group Z_n as a one-object category."""
    arrows = {f"g{k}": ("*", "*") for k in range(n)}
    comp = {(f"g{a}", f"g{b}"): f"g{(a + b) % n}" for a in range(n) for b in range(n)}
    return ["*"], arrows, comp, {"*": "g0"}


def walking_arrow() -> tuple[list, dict, dict, dict]:
    arrows = {"1a": ("a", "a"), "1b": ("b", "b"), "f": ("a", "b")}
    comp = {("1a", "1a"): "1a", ("1b", "1b"): "1b", ("1a", "f"): "f", ("f", "1b"): "f"}
    return ["a", "b"], arrows, comp, {"a": "1a", "b": "1b"}


def group_squares(n: int) -> FiniteDoubleCategory:
    """Sq(Z_n): one object, both arrow sets Z_n, a square wherever bottom+right = left+top."""
    G = range(n)
    ar = {f"g{k}": ("*", "*") for k in G}
    comp = {(f"g{a}", f"g{b}"): f"g{(a + b) % n}" for a in G for b in G}
    sq = {}
    for l, r, b in product(G, repeat=3):
        t = (b + r - l) % n
        sq[f"[{l}{r}{b}{t}]"] = (f"g{l}", f"g{r}", f"g{b}", f"g{t}")
    key = {bd: x for x, bd in sq.items()}
    c1, c2 = {}, {}
    for x, (s1, t1, s2, t2) in sq.items():
        for y, (u1, v1, u2, v2) in sq.items():
            if t1 == u1:
                c1[(x, y)] = key[(s1, v1, comp[(s2, u2)], comp[(t2, v2)])]
            if t2 == u2:
                c2[(x, y)] = key[(comp[(s1, u1)], comp[(t1, v1)], s2, v2)]
    ids = {"*": "g0"}
    sq_id1 = {f"g{k}": key[(f"g{k}", f"g{k}", "g0", "g0")] for k in G}
    sq_id2 = {f"g{k}": key[("g0", "g0", f"g{k}", f"g{k}")] for k in G}
    return _from_squares(f"Sq(Z{n})", ["*"], dict(ar), dict(ar), sq, ids, dict(ids), comp, dict(comp), sq_id1, sq_id2, c1, c2)


def monoid_squares(n: int) -> FiniteDoubleCategory:
    """One object and trivial arrows; the squares form Z_n under both compositions."""
    sq = {f"m{k}": ("e", "e", "e", "e") for k in range(n)}
    add = {(f"m{a}", f"m{b}"): f"m{(a + b) % n}" for a in range(n) for b in range(n)}
    return _from_squares(
        f"Omega2(Z{n})", ["*"], {"e": ("*", "*")}, {"e": ("*", "*")}, sq, {"*": "e"}, {"*": "e"},
        {("e", "e"): "e"}, {("e", "e"): "e"}, {"e": "m0"}, {"e": "m0"}, add, dict(add),
    )


def terminal() -> FiniteDoubleCategory:
    C = monoid_squares(1)
    C.name = "terminal"
    return C


def product_category(C: FiniteDoubleCategory, D: FiniteDoubleCategory) -> FiniteDoubleCategory:
    def pair_map(f: dict, g: dict) -> dict:
        return {(a, b): (f[a], g[b]) for a in f for b in g}

    def pair_bd(f: dict, g: dict) -> dict:
        return {(a, b): tuple(zip(f[a], g[b])) for a in f for b in g}

    def pair_comp(f: dict, g: dict) -> dict:
        return {((a, b), (c, d)): (f[(a, c)], g[(b, d)]) for (a, c) in f for (b, d) in g}

    return FiniteDoubleCategory(
        f"{C.name}x{D.name}",
        [(a, b) for a in C.objects for b in D.objects],
        pair_bd(C.arrows1, D.arrows1), pair_bd(C.arrows2, D.arrows2), pair_bd(C.squares, D.squares),
        pair_map(C.id1, D.id1), pair_map(C.id2, D.id2), pair_map(C.sq_id1, D.sq_id1), pair_map(C.sq_id2, D.sq_id2),
        pair_comp(C.comp1, D.comp1), pair_comp(C.comp2, D.comp2), pair_comp(C.sq_comp1, D.sq_comp1), pair_comp(C.sq_comp2, D.sq_comp2),
    )


def corpus() -> list[FiniteDoubleCategory]:
    """Small strict double categories, each with at most 50 elements."""
    chain2 = poset_squares("squares(chain2)", "ab", [("a", "b")])
    chain3 = poset_squares("squares(chain3)", "abc", [("a", "b"), ("b", "c")])
    vee = poset_squares("squares(V)", "abc", [("a", "b"), ("a", "c")])
    return [
        terminal(),
        chain2,
        chain3,
        vee,
        horizontal("H(Z2)", *group_category(2)),
        horizontal("H(Z3)", *group_category(3)),
        horizontal("H(arrow)", *walking_arrow()),
        horizontal("H(Z2)", *group_category(2)).transpose(),
        group_squares(2),
        monoid_squares(2),
        monoid_squares(3),
        product_category(chain2, horizontal("H(Z2)", *group_category(2))),
    ]


def corrupt_interchange(C: FiniteDoubleCategory) -> FiniteDoubleCategory:
    """Copy of ``C`` with one direction-2 square composite redirected to a same-boundary square.

    Needs two distinct squares with the same boundary (as in the monoid examples).
    """
    out = FiniteDoubleCategory.from_json(C.to_json()) if all(isinstance(o, str) for o in C.objects) else C
    by_bd: dict = {}
    for x, bd in out.squares.items():
        by_bd.setdefault(bd, []).append(x)
    for (x, y), z in sorted(out.sq_comp2.items()):
        others = [w for w in by_bd[out.squares[z]] if w != z]
        if others and (x, y) != (out.sq_id2[out.s2(x)], y) and x != out.sq_id2[out.s2(x)] and y != out.sq_id2[out.s2(y)]:
            out.sq_comp2[(x, y)] = sorted(others)[0]
            return out
    raise ValidationError(f"{C.name} has no square with a same-boundary alternative")
