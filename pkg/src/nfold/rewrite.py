"""The directed coherence graph of composition trees and its 2-complex.

Vertices are the composition trees of one grid, edges are forward moves.
2-cells are the naturality squares of independent moves, pentagons,
first hexagons (in both orientations of the two directions) and second
hexagons.  Every cell has a unique source (its *peak*) and sink (its
*join*) and two directed boundary arcs between them.

Equivalence of directed paths is witnessed constructively: a witness is a
list of substitutions, each replacing one arc of a cell by the other arc
inside a directed path.  ``reduce_to_canonical`` builds such witnesses by
well-founded induction along the descending chain, following the
structure of the enhanced diamond argument.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .diagrams import (
    DEFAULT_MAX_TREES,
    GluingDiagram,
    Move,
    MovePath,
    Node,
    Tree,
    apply_move,
    applicable_moves,
    box_shape,
    count_trees_of_shape,
    enumerate_trees,
    forward_moves_at,
    make_grid,
    normal_form,
    subtree,
    transport,
    tree_to_json,
)
from .errors import MoveError, TerminationViolation, ValidationError
from .homology import Echelon, integer_rank

DISJOINT = "DisjointCommute"
PENTAGON = "Pentagon"
HEXAGON1 = "Hexagon1"
HEXAGON2 = "Hexagon2"
COMPOSITE = "InductiveComposite"
CELL_TAGS = (DISJOINT, PENTAGON, HEXAGON1, HEXAGON2)


@dataclass(frozen=True)
class Edge:
    index: int
    src: int
    dst: int
    move: Move


@dataclass
class RewriteGraph:
    vertices: list[Tree]
    edges: list[Edge]
    grid: GluingDiagram | None = None
    index: dict[Tree, int] = field(init=False)
    out: list[list[int]] = field(init=False)
    inc: list[list[int]] = field(init=False)
    by_move: dict[tuple[int, Move], int] = field(init=False)

    def __post_init__(self) -> None:
        self.index = {t: i for i, t in enumerate(self.vertices)}
        self.out = [[] for _ in self.vertices]
        self.inc = [[] for _ in self.vertices]
        self.by_move = {}
        for e in self.edges:
            self.out[e.src].append(e.index)
            self.inc[e.dst].append(e.index)
            self.by_move[(e.src, e.move)] = e.index

    @classmethod
    def from_pairs(cls, n_vertices: int, pairs: Iterable[tuple[int, int]]) -> "RewriteGraph":
        """Abstract graph on ``range(n)``; moves are placeholders."""
        verts: list[Tree] = [_Token(i) for i in range(n_vertices)]  # type: ignore[list-item]
        edges = [Edge(k, s, d, Move("", "alpha", (1,))) for k, (s, d) in enumerate(pairs)]
        g = cls.__new__(cls)
        g.vertices, g.edges, g.grid = verts, edges, None
        g.index = {t: i for i, t in enumerate(verts)}
        g.out = [[] for _ in verts]
        g.inc = [[] for _ in verts]
        g.by_move = {}
        for e in edges:
            g.out[e.src].append(e.index)
            g.inc[e.dst].append(e.index)
        return g

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge(self, src: int, move: Move) -> int:
        return self.by_move[(src, move)]

    def terminals(self) -> list[int]:
        return [v for v in range(self.n_vertices) if not self.out[v]]

    def components(self) -> int:
        parent = list(range(self.n_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            a, b = find(e.src), find(e.dst)
            if a != b:
                parent[max(a, b)] = min(a, b)
        return len({find(v) for v in range(self.n_vertices)})


@dataclass(frozen=True)
class _Token:
    i: int


def build_rewrite_graph(grid: GluingDiagram, max_trees: int = DEFAULT_MAX_TREES) -> RewriteGraph:
    trees = enumerate_trees(grid, max_trees=max_trees)
    index = {t: i for i, t in enumerate(trees)}
    edges: list[Edge] = []
    for i, t in enumerate(trees):
        for m in applicable_moves(t):
            edges.append(Edge(len(edges), i, index[apply_move(t, m)], m))
    return RewriteGraph(trees, edges, grid)


# -- termination ---------------------------------------------------------------------


@dataclass
class TerminationReport:
    acyclic: bool
    longest_path: int | None
    cycle: list[int] | None = None

    @property
    def ok(self) -> bool:
        return self.acyclic

    def to_json(self) -> dict:
        return {"acyclic": self.acyclic, "longest_path": self.longest_path, "cycle": self.cycle}


def check_termination(graph: RewriteGraph) -> TerminationReport:
    """Topological sort; longest directed path length in edges, or a cycle."""
    n = graph.n_vertices
    indeg = [len(graph.inc[v]) for v in range(n)]
    queue = deque(v for v in range(n) if indeg[v] == 0)
    order: list[int] = []
    while queue:
        v = queue.popleft()
        order.append(v)
        for e in graph.out[v]:
            d = graph.edges[e].dst
            indeg[d] -= 1
            if indeg[d] == 0:
                queue.append(d)
    if len(order) < n:
        return TerminationReport(False, None, _find_cycle(graph, {v for v in range(n) if indeg[v] > 0}))
    depth = [0] * n
    for v in reversed(order):
        for e in graph.out[v]:
            depth[v] = max(depth[v], depth[graph.edges[e].dst] + 1)
    return TerminationReport(True, max(depth, default=0))


def _find_cycle(graph: RewriteGraph, live: set[int]) -> list[int]:
    # Every live vertex has a live successor, so walking forward must repeat.
    v = min(live)
    seen: dict[int, int] = {}
    walk: list[int] = []
    while v not in seen:
        seen[v] = len(walk)
        walk.append(v)
        v = next(graph.edges[e].dst for e in graph.out[v] if graph.edges[e].dst in live)
    return walk[seen[v] :] + [v]


# -- normal forms ------------------------------------------------------------------------


def normalize(tree: Tree, max_steps: int | None = None) -> tuple[Tree, MovePath]:
    """Apply the first applicable forward move until none is left."""
    if max_steps is None:
        max_steps = 10 * count_trees_of_shape(box_shape(tree.box))
    steps = []
    t = tree
    while True:
        moves = applicable_moves(t)
        if not moves:
            return t, MovePath(tree, tuple(steps))
        if len(steps) >= max_steps:
            raise TerminationViolation(f"normalization of {tree!r} exceeded {max_steps} steps", len(steps))
        steps.append((moves[0], False))
        t = apply_move(t, moves[0])


@dataclass
class NormalFormReport:
    ok: bool
    connected: bool
    terminals: list[Tree]
    expected: Tree
    mismatches: list[Tree] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "connected": self.connected,
            "terminals": [tree_to_json(t) for t in self.terminals],
            "expected": tree_to_json(self.expected),
            "mismatches": [tree_to_json(t) for t in self.mismatches[:5]],
        }


def check_unique_normal_form(graph: RewriteGraph) -> NormalFormReport:
    if graph.grid is None:
        raise ValidationError("normal-form check needs a grid-backed graph")
    expected = normal_form(graph.grid)
    terminals = [graph.vertices[v] for v in graph.terminals()]
    connected = graph.components() == 1
    mismatches = [t for t in graph.vertices if normalize(t)[0] != expected]
    ok = connected and terminals == [expected] and not mismatches
    return NormalFormReport(ok, connected, terminals, expected, mismatches)


# -- the 2-complex -------------------------------------------------------------------------


@dataclass(frozen=True)
class Cell2:
    index: int
    tag: str
    peak: int
    join: int
    arc_a: tuple[int, ...]
    arc_b: tuple[int, ...]

    def boundary(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for e in self.arc_a:
            out[e] = out.get(e, 0) + 1
        for e in self.arc_b:
            out[e] = out.get(e, 0) - 1
        return {e: c for e, c in out.items() if c}

    def arc_from(self, first: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(arc starting with edge ``first``, the other arc)."""
        if self.arc_a[0] == first:
            return self.arc_a, self.arc_b
        if self.arc_b[0] == first:
            return self.arc_b, self.arc_a
        raise KeyError(first)

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "peak": self.peak,
            "join": self.join,
            "arc_a": list(self.arc_a),
            "arc_b": list(self.arc_b),
        }


@dataclass
class CoherenceComplex:
    graph: RewriteGraph
    cells: list[Cell2]
    at_peak: dict[int, list[int]] = field(init=False)

    def __post_init__(self) -> None:
        self.at_peak = {}
        for c in self.cells:
            self.at_peak.setdefault(c.peak, []).append(c.index)

    def tag_counts(self) -> dict[str, int]:
        counts = {tag: 0 for tag in CELL_TAGS}
        for c in self.cells:
            counts[c.tag] += 1
        return counts

    def to_json(self) -> dict:
        g = self.graph
        return {
            "grid": list(g.grid.extents) if g.grid else None,
            "vertices": [tree_to_json(t) for t in g.vertices],
            "edges": [{"src": e.src, "dst": e.dst, "move": e.move.to_json()} for e in g.edges],
            "cells": [c.to_json() for c in self.cells],
        }


# Arc recipes: (relative position, kind) pairs applied from the peak.
_PENTAGON = ((("", "alpha"), ("", "alpha")), (("L", "alpha"), ("", "alpha"), ("R", "alpha")))
_HEX1_INNER_ALPHA = (
    (("L", "alpha"), ("R", "alpha"), ("", "beta"), ("R", "beta")),
    (("", "beta"), ("L", "beta"), ("", "alpha")),
)
_HEX1_OUTER_ALPHA = (
    (("", "alpha"), ("R", "beta"), ("", "beta")),
    (("L", "beta"), ("", "beta"), ("L", "alpha"), ("R", "alpha")),
)
_HEX2 = (
    (("", "beta"), ("L", "beta"), ("R", "beta"), ("", "beta")),
    (("L", "beta"), ("R", "beta"), ("", "beta"), ("L", "beta"), ("R", "beta")),
)


def _dir(t: Tree) -> int | None:
    return t.dir if isinstance(t, Node) else None


def _pattern(sub: Tree) -> list[tuple[str, tuple]]:
    """Which axiom shapes have their peak at the root of ``sub``."""
    found = []
    if not isinstance(sub, Node):
        return found
    i, L, R = sub.dir, sub.left, sub.right
    if isinstance(L, Node) and L.dir == i and _dir(L.left) == i:
        found.append((PENTAGON, _PENTAGON))
    if isinstance(L, Node) and isinstance(R, Node) and L.dir == R.dir:
        k = L.dir
        if k > i and _dir(L.left) == k and _dir(R.left) == k:
            found.append((HEX1, _HEX1_INNER_ALPHA))
        inner = {_dir(L.left), _dir(L.right), _dir(R.left), _dir(R.right)}
        if len(inner) == 1:
            (c,) = inner
            if c is not None and i < k < c:
                found.append((HEXAGON2, _HEX2))
    if isinstance(L, Node) and L.dir == i and isinstance(L.left, Node) and isinstance(R, Node):
        j = R.dir
        if j > i and _dir(L.left) == j and _dir(L.right) == j:
            found.append((HEXAGON1, _HEX1_OUTER_ALPHA))
    return found


HEX1 = HEXAGON1


def _run_arc(graph: RewriteGraph, v: int, pos: str, recipe) -> tuple[tuple[int, ...], int] | None:
    edges = []
    t = graph.vertices[v]
    for rel, kind in recipe:
        p = pos + rel
        try:
            sub = subtree(t, p)
        except MoveError:
            return None
        moves = [m for m in forward_moves_at(sub, p) if m.kind == kind]
        if not moves:
            return None
        e = graph.by_move.get((v, moves[0]))
        if e is None:
            return None
        edges.append(e)
        v = graph.edges[e].dst
        t = graph.vertices[v]
    return tuple(edges), v


def build_coherence_complex(graph: RewriteGraph) -> CoherenceComplex:
    cells: list[Cell2] = []
    seen: set = set()

    def add(tag: str, peak: int, a: tuple[int, ...], b: tuple[int, ...], join: int) -> None:
        key = (peak, frozenset((a, b)))
        if key in seen:
            return
        seen.add(key)
        cells.append(Cell2(len(cells), tag, peak, join, a, b))

    for v, t in enumerate(graph.vertices):
        out = graph.out[v]
        # naturality squares of independent moves
        for x in range(len(out)):
            for y in range(x + 1, len(out)):
                e1, e2 = graph.edges[out[x]], graph.edges[out[y]]
                if e1.move.footprint() & e2.move.footprint():
                    continue
                t1, t2 = graph.vertices[e1.dst], graph.vertices[e2.dst]
                m2 = transport(e2.move, t, t1)
                m1 = transport(e1.move, t, t2)
                f2 = graph.by_move[(e1.dst, m2)]
                f1 = graph.by_move[(e2.dst, m1)]
                j1, j2 = graph.edges[f2].dst, graph.edges[f1].dst
                if j1 != j2:
                    raise AssertionError(f"independent moves {e1.move} and {e2.move} do not commute")
                add(DISJOINT, v, (e1.index, f2), (e2.index, f1), j1)
        # axiom shapes anchored at every node
        stack = [("", t)]
        while stack:
            pos, sub = stack.pop()
            if not isinstance(sub, Node):
                continue
            for tag, (ra, rb) in _pattern(sub):
                a = _run_arc(graph, v, pos, ra)
                b = _run_arc(graph, v, pos, rb)
                if a is None or b is None or a[1] != b[1]:
                    continue
                add(tag, v, a[0], b[0], a[1])
            stack.append((pos + "R", sub.right))
            stack.append((pos + "L", sub.left))
    cells.sort(key=lambda c: (c.peak, CELL_TAGS.index(c.tag), c.arc_a, c.arc_b))
    cells = [Cell2(i, c.tag, c.peak, c.join, c.arc_a, c.arc_b) for i, c in enumerate(cells)]
    return CoherenceComplex(graph, cells)


# -- homology ----------------------------------------------------------------------------------


@dataclass
class H1Report:
    rank: int
    torsion_free: bool
    n_vertices: int
    n_edges: int
    n_cells: int
    components: int
    rank_d2: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def coherence_h1_report(cx: CoherenceComplex) -> H1Report:
    g = cx.graph
    comps = g.components()
    rank_d1 = g.n_vertices - comps
    rank_d2, unimodular = integer_rank(c.boundary() for c in cx.cells)
    rank = g.n_edges - rank_d1 - rank_d2
    return H1Report(rank, unimodular, g.n_vertices, g.n_edges, len(cx.cells), comps, rank_d2)


def coherence_h1(grid: GluingDiagram | Sequence[int], max_trees: int = DEFAULT_MAX_TREES) -> int:
    if not isinstance(grid, GluingDiagram):
        grid = make_grid(grid)
    cx = build_coherence_complex(build_rewrite_graph(grid, max_trees))
    return coherence_h1_report(cx).rank


# -- path equivalence witnesses -------------------------------------------------------------------


@dataclass(frozen=True)
class Substitution:
    """Replace the arc of ``cell`` starting at ``offset`` by its other arc."""

    offset: int
    cell: int
    a_to_b: bool


class NotCertified(Exception):
    def __init__(self, vertex: int, first: int, second: int):
        super().__init__(f"no cell chain joins edges {first} and {second} at vertex {vertex}")
        self.vertex, self.first, self.second = vertex, first, second


def apply_substitutions(cx: CoherenceComplex, path: Sequence[int], subs: Iterable[Substitution]) -> tuple[int, ...]:
    """Replay a witness; raises ValueError if any step does not match."""
    p = list(path)
    for s in subs:
        c = cx.cells[s.cell]
        src, dst = (c.arc_a, c.arc_b) if s.a_to_b else (c.arc_b, c.arc_a)
        if tuple(p[s.offset : s.offset + len(src)]) != src:
            raise ValueError(f"substitution {s} does not match path at offset {s.offset}")
        p[s.offset : s.offset + len(src)] = dst
    return tuple(p)


class Reducer:
    """Builds witnesses that directed paths to the normal form are equivalent."""

    def __init__(self, cx: CoherenceComplex, max_substitutions: int = 10**6):
        self.cx = cx
        g = cx.graph
        self.g = g
        self.max_substitutions = max_substitutions
        self.nf_edge: list[int | None] = [
            min(g.out[v], key=lambda e: g.edges[e].move) if g.out[v] else None for v in range(g.n_vertices)
        ]
        self._canon: dict[int, tuple[int, ...]] = {}
        self._memo: dict[tuple[int, ...], tuple[Substitution, ...]] = {}
        self._chains: dict[tuple[int, int, int], list[tuple[int, int, int]]] = {}

    def canonical(self, v: int) -> tuple[int, ...]:
        """The deterministic normalization path from ``v`` as edge indices."""
        if v in self._canon:
            return self._canon[v]
        path = []
        w = v
        while self.nf_edge[w] is not None:
            e = self.nf_edge[w]
            path.append(e)
            w = self.g.edges[e].dst
        self._canon[v] = tuple(path)
        return self._canon[v]

    def _chain(self, v: int, start: int, goal: int) -> list[tuple[int, int, int]]:
        """Cells at peak ``v`` linking first edges: [(cell, from_edge, to_edge), ...]."""
        key = (v, start, goal)
        if key in self._chains:
            return self._chains[key]
        adj: dict[int, list[tuple[int, int]]] = {}
        for ci in self.cx.at_peak.get(v, ()):
            c = self.cx.cells[ci]
            a, b = c.arc_a[0], c.arc_b[0]
            adj.setdefault(a, []).append((b, ci))
            adj.setdefault(b, []).append((a, ci))
        prev: dict[int, tuple[int, int]] = {start: (start, -1)}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            if x == goal:
                break
            for y, ci in sorted(adj.get(x, ())):
                if y not in prev:
                    prev[y] = (x, ci)
                    queue.append(y)
        if goal not in prev:
            raise NotCertified(v, start, goal)
        chain = []
        y = goal
        while y != start:
            x, ci = prev[y]
            chain.append((ci, x, y))
            y = x
        chain.reverse()
        self._chains[key] = chain
        return chain

    def reduce(self, path: Sequence[int]) -> tuple[Substitution, ...]:
        """Substitutions turning a directed path to the normal form into the canonical one."""
        path = tuple(path)
        if path in self._memo:
            return self._memo[path]
        if not path:
            return ()
        g = self.g
        v = g.edges[path[0]].src
        if path == self.canonical(v):
            self._memo[path] = ()
            return ()
        n = self.nf_edge[v]
        steps: list[Substitution] = []
        if path[0] == n:
            steps.extend(_lift(self.reduce(path[1:]), 1))
        else:
            current = path
            for ci, frm, to in self._chain(v, path[0], n):
                c = self.cx.cells[ci]
                arc_from, arc_to = c.arc_from(frm)
                target = arc_from + self.canonical(c.join)
                steps.extend(_lift(self.reduce(current[1:]), 1))
                steps.extend(_lift(_reverse(self.cx, target[1:], self.reduce(target[1:])), 1))
                steps.append(Substitution(0, ci, c.arc_a[0] == frm))
                current = arc_to + self.canonical(c.join)
                if len(steps) > self.max_substitutions:
                    raise OverflowError("witness exceeds the substitution budget")
            steps.extend(_lift(self.reduce(current[1:]), 1))
        result = tuple(steps)
        self._memo[path] = result
        return result

    def witness(self, p: Sequence[int], q: Sequence[int]) -> tuple[Substitution, ...]:
        """Witness turning directed path ``p`` into ``q`` (same ends).

        Both paths are extended by the canonical tail from their common end,
        then reduced to the canonical path from their common start.
        """
        p, q = tuple(p), tuple(q)
        g = self.g
        end = g.edges[p[-1]].dst if p else None
        tail = self.canonical(end) if end is not None else ()
        pp, qq = p + tail, q + tail
        return self.reduce(pp) + _reverse(self.cx, qq, self.reduce(qq))


def _lift(subs: Iterable[Substitution], k: int) -> list[Substitution]:
    return [Substitution(s.offset + k, s.cell, s.a_to_b) for s in subs]


def _reverse(cx: CoherenceComplex, start: Sequence[int], subs: Sequence[Substitution]) -> tuple[Substitution, ...]:
    """Inverse witness: from the end of ``subs`` (applied to ``start``) back to ``start``."""
    return tuple(Substitution(s.offset, s.cell, not s.a_to_b) for s in reversed(subs))


# -- critical pairs ------------------------------------------------------------------------------


@dataclass
class DiamondCertificate:
    peak: int
    moves: tuple[Move, Move]
    completion_a: tuple[int, ...]
    completion_b: tuple[int, ...]
    join: int
    classification: str
    witness: tuple[Substitution, ...]
    witness_kind: str  # "cell", "cells" or "chain"
    certified: bool

    def to_json(self) -> dict:
        return {
            "peak": self.peak,
            "moves": [m.label() for m in self.moves],
            "join": self.join,
            "completion_lengths": [len(self.completion_a), len(self.completion_b)],
            "classification": self.classification,
            "witness_kind": self.witness_kind,
            "witness_size": len(self.witness),
            "certified": self.certified,
        }


def _shortest_join(graph: RewriteGraph, a: int, b: int) -> tuple[tuple[int, ...], tuple[int, ...], int]:
    def bfs(s: int) -> dict[int, tuple[int, ...]]:
        paths = {s: ()}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for e in graph.out[x]:
                y = graph.edges[e].dst
                if y not in paths:
                    paths[y] = paths[x] + (e,)
                    queue.append(y)
        return paths

    pa, pb = bfs(a), bfs(b)
    common = set(pa) & set(pb)
    if not common:
        raise NotCertified(a, -1, -1)
    w = min(common, key=lambda x: (len(pa[x]) + len(pb[x]), x))
    return pa[w], pb[w], w


def critical_pairs(cx: CoherenceComplex, reducer: Reducer | None = None) -> list[DiamondCertificate]:
    g = cx.graph
    reducer = reducer or Reducer(cx)
    certs: list[DiamondCertificate] = []
    for v in range(g.n_vertices):
        out = sorted(g.out[v], key=lambda e: g.edges[e].move)
        if len(out) < 2:
            continue
        local = {}
        for ci in cx.at_peak.get(v, ()):
            c = cx.cells[ci]
            local.setdefault(frozenset((c.arc_a[0], c.arc_b[0])), ci)
        for x in range(len(out)):
            for y in range(x + 1, len(out)):
                e, f = out[x], out[y]
                moves = (g.edges[e].move, g.edges[f].move)
                ci = local.get(frozenset((e, f)))
                if ci is not None:
                    c = cx.cells[ci]
                    pa, pb = c.arc_from(e)
                    certs.append(
                        DiamondCertificate(
                            v, moves, pa, pb, c.join, c.tag,
                            (Substitution(0, ci, c.arc_a[0] == e),), "cell", True,
                        )
                    )
                    continue
                ta, tb, w = _shortest_join(g, g.edges[e].dst, g.edges[f].dst)
                pa, pb = (e,) + ta, (f,) + tb
                try:
                    wit = reducer.witness(pa, pb)
                    tail = reducer.canonical(w)
                    ok = apply_substitutions(cx, pa + tail, wit) == pb + tail
                    kind = "cells"
                except (NotCertified, OverflowError):
                    wit, ok, kind = (), _chain_witness(cx, pa, pb), "chain"
                certs.append(DiamondCertificate(v, moves, pa, pb, w, COMPOSITE, wit, kind, ok))
    return certs


def _chain_witness(cx: CoherenceComplex, pa: Sequence[int], pb: Sequence[int]) -> bool:
    """Abelian fallback: is the loop pa - pb an integral sum of cell boundaries?"""
    ech = Echelon(track=True)
    for c in cx.cells:
        ech.add(c.boundary(), c.index)
    loop: dict[int, int] = {}
    for e in pa:
        loop[e] = loop.get(e, 0) + 1
    for e in pb:
        loop[e] = loop.get(e, 0) - 1
    sol = ech.solve({e: c for e, c in loop.items() if c})
    return sol is not None and all(Fraction(c).denominator == 1 for c in sol.values())


# -- simple connectivity ----------------------------------------------------------------------------


@dataclass
class SimpleConnectivityReport:
    simply_connected: bool | None
    edges_checked: int
    substitutions: int
    failure: str | None = None

    def to_json(self) -> dict:
        return dict(self.__dict__)


def check_simply_connected(cx: CoherenceComplex, reducer: Reducer | None = None, verify: bool = True) -> SimpleConnectivityReport:
    """Every edge loop ``e . N(dst) . N(src)^-1`` bounds a van Kampen tiling.

    The canonical normalization paths form a spanning tree rooted at the
    normal form, so these loops generate the fundamental group of the
    1-skeleton; killing all of them shows the 2-complex is simply connected.
    """
    g = cx.graph
    if g.components() != 1:
        return SimpleConnectivityReport(None, 0, 0, "graph is disconnected")
    reducer = reducer or Reducer(cx)
    total = 0
    for e in g.edges:
        path = (e.index,) + reducer.canonical(e.dst)
        try:
            wit = reducer.reduce(path)
        except (NotCertified, OverflowError) as exc:
            return SimpleConnectivityReport(None, e.index, total, str(exc))
        if verify and apply_substitutions(cx, path, wit) != reducer.canonical(e.src):
            return SimpleConnectivityReport(False, e.index, total, f"witness for edge {e.index} does not replay")
        total += len(wit)
    return SimpleConnectivityReport(True, g.n_edges, total)


# -- user-facing path operations ------------------------------------------------------------------


def connect_trees(t1: Tree, t2: Tree, cancel: bool = False) -> MovePath:
    """Undirected path t1 -> NF <- t2 from the two normalization paths.

    With ``cancel`` adjacent back-and-forth steps are dropped, so the result
    may skip the normal form.
    """
    if t1.box != t2.box or sorted(t1.leaves()) != sorted(t2.leaves()):
        raise ValidationError("trees live on different grids")
    if t1 == t2:
        return MovePath(t1)
    n1, p1 = normalize(t1)
    n2, p2 = normalize(t2)
    if n1 != n2:
        raise TerminationViolation(f"trees normalize to different terminals {n1!r} and {n2!r}", 0)
    path = p1.then(p2.inverted())
    return _cancel(path) if cancel else path


def _cancel(path: MovePath) -> MovePath:
    """Drop adjacent ``m m^-1`` pairs."""
    trees = [path.start]
    out: list[tuple[Move, bool]] = []
    for m, inv in path.steps:
        nxt = apply_move(trees[-1], m, inv)
        if out and out[-1][0] == m and out[-1][1] != inv and len(trees) >= 2 and trees[-2] == nxt:
            out.pop()
            trees.pop()
        else:
            out.append((m, inv))
            trees.append(nxt)
    return MovePath(path.start, tuple(out))


@dataclass
class EquivalenceVerdict:
    equivalent: bool | None
    witness: list[dict]
    method: str

    def to_json(self) -> dict:
        return {"equivalent": self.equivalent, "witness": self.witness, "method": self.method}


def _grid_of(tree: Tree) -> GluingDiagram:
    if any(lo != 0 for lo, _ in tree.box):
        raise ValidationError("paths must live on a full grid anchored at the origin")
    return make_grid(box_shape(tree.box))


def _edges_of(cx: CoherenceComplex, path: MovePath) -> list[tuple[int, bool]]:
    g = cx.graph
    out = []
    t = path.start
    for m, inv in path.steps:
        nxt = apply_move(t, m, inv)
        src = g.index[nxt] if inv else g.index[t]
        out.append((g.edge(src, m), inv))
        t = nxt
    return out


def paths_equivalent(p1: MovePath, p2: MovePath, bound: int = 10_000, complex: CoherenceComplex | None = None) -> EquivalenceVerdict:
    """Decide equivalence by cell substitutions and trivial-cycle cancellation.

    ``bound`` caps the number of cell substitutions in the witness.
    """
    if p1.start != p2.start or p1.end != p2.end:
        raise ValidationError("paths do not share their endpoints")
    if p1.steps == p2.steps:
        return EquivalenceVerdict(True, [], "identical")
    cx = complex or build_coherence_complex(build_rewrite_graph(_grid_of(p1.start)))
    e1, e2 = _edges_of(cx, p1), _edges_of(cx, p2)
    if all(not inv for _, inv in e1) and all(not inv for _, inv in e2):
        a = tuple(e for e, _ in e1)
        b = tuple(e for e, _ in e2)
        single = _single_substitution(cx, a, b)
        if single is not None:
            c = cx.cells[single.cell]
            return EquivalenceVerdict(True, [{"cell": c.index, "tag": c.tag, "offset": single.offset}], "single-cell")
        reducer = Reducer(cx, max_substitutions=bound)
        try:
            wit = reducer.witness(a, b)
        except (NotCertified, OverflowError):
            return EquivalenceVerdict(None, [], "undecided")
        if len(wit) > bound:
            return EquivalenceVerdict(None, [], "undecided")
        return EquivalenceVerdict(True, [_sub_json(cx, s) for s in wit], "directed-reduction")
    # Undirected: every edge e: v -> w is equivalent to N(v) N(w)^-1, so any
    # path from x to y reduces to N(x) N(y)^-1 after cancelling trivial cycles.
    reducer = Reducer(cx, max_substitutions=bound)
    witness: list[dict] = []
    for edges in (e1, e2):
        for e, _ in edges:
            edge = cx.graph.edges[e]
            try:
                subs = reducer.reduce((e,) + reducer.canonical(edge.dst))
            except (NotCertified, OverflowError):
                return EquivalenceVerdict(None, [], "undecided")
            witness.extend(_sub_json(cx, s) for s in subs)
            if len(witness) > bound:
                return EquivalenceVerdict(None, [], "undecided")
    return EquivalenceVerdict(True, witness, "edge-reduction")


def _sub_json(cx: CoherenceComplex, s: Substitution) -> dict:
    return {"cell": s.cell, "tag": cx.cells[s.cell].tag, "offset": s.offset}


def _single_substitution(cx: CoherenceComplex, a: tuple[int, ...], b: tuple[int, ...]) -> Substitution | None:
    k = 0
    while k < min(len(a), len(b)) and a[k] == b[k]:
        k += 1
    s = 0
    while s < min(len(a), len(b)) - k and a[len(a) - 1 - s] == b[len(b) - 1 - s]:
        s += 1
    mid_a, mid_b = a[k : len(a) - s], b[k : len(b) - s]
    if not mid_a or not mid_b:
        return None
    peak = cx.graph.edges[mid_a[0]].src
    for ci in cx.at_peak.get(peak, ()):
        c = cx.cells[ci]
        if (c.arc_a, c.arc_b) == (mid_a, mid_b):
            return Substitution(k, ci, True)
        if (c.arc_b, c.arc_a) == (mid_a, mid_b):
            return Substitution(k, ci, False)
    return None


def path_from_edges(graph: RewriteGraph, edges: Sequence[int]) -> MovePath:
    if not edges:
        raise ValidationError("empty edge list has no start vertex")
    start = graph.vertices[graph.edges[edges[0]].src]
    return MovePath(start, tuple((graph.edges[e].move, False) for e in edges))


# -- full report -----------------------------------------------------------------------------------


@dataclass
class CoherenceReport:
    grid: GluingDiagram
    n_trees: int
    n_edges: int
    termination: TerminationReport
    normal_form: NormalFormReport | None
    h1: H1Report
    cell_counts: dict[str, int]
    certificates: list[DiamondCertificate]
    simple_connectivity: SimpleConnectivityReport | None

    @property
    def ok(self) -> bool:
        return (
            self.termination.ok
            and self.normal_form is not None
            and self.normal_form.ok
            and self.h1.rank == 0
            and all(c.certified for c in self.certificates)
        )

    def to_json(self) -> dict:
        classes: dict[str, int] = {}
        kinds: dict[str, int] = {}
        for c in self.certificates:
            classes[c.classification] = classes.get(c.classification, 0) + 1
            kinds[c.witness_kind] = kinds.get(c.witness_kind, 0) + 1
        return {
            "ok": self.ok,
            "grid": list(self.grid.extents),
            "trees": self.n_trees,
            "edges": self.n_edges,
            "termination": self.termination.to_json(),
            "normal_form": self.normal_form.to_json() if self.normal_form else None,
            "h1": self.h1.to_json(),
            "cells": self.cell_counts,
            "critical_pairs": {
                "total": len(self.certificates),
                "certified": sum(c.certified for c in self.certificates),
                "by_class": dict(sorted(classes.items())),
                "by_witness": dict(sorted(kinds.items())),
                "uncertified": [c.to_json() for c in self.certificates if not c.certified][:10],
            },
            "simple_connectivity": self.simple_connectivity.to_json() if self.simple_connectivity else None,
        }


def coherence_report(grid: GluingDiagram, max_trees: int = DEFAULT_MAX_TREES, simple_connectivity: bool = True) -> tuple[CoherenceReport, CoherenceComplex]:
    graph = build_rewrite_graph(grid, max_trees)
    term = check_termination(graph)
    nf = check_unique_normal_form(graph) if term.acyclic else None
    cx = build_coherence_complex(graph)
    h1 = coherence_h1_report(cx)
    reducer = Reducer(cx)
    certs = critical_pairs(cx, reducer) if term.acyclic else []
    sc = check_simply_connected(cx, reducer) if (simple_connectivity and term.acyclic) else None
    report = CoherenceReport(grid, graph.n_vertices, graph.n_edges, term, nf, h1, cx.tag_counts(), certs, sc)
    return report, cx
