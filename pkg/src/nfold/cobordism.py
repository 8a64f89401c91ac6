"""Combinatorial cobordisms with corners and the untwisted Dijkgraaf-Witten theory.

A cobordism is presented by a graph (vertices, oriented edges) plus
relator loops, i.e. a presentation of its fundamental groupoid.  Each
labeled boundary ``"<dir><sign>"`` is a sub-presentation listed in a
fixed order; the order is the labeling used to glue.

Holonomy along a walk ``t1 t2 ... tn`` is ``g(tn) ... g(t1)``.  A token
is an edge id (lowercase) or its inverse, written in uppercase or with a
``^-1`` suffix.  A gauge transformation ``h: V -> G`` acts by
``g_e -> h(head) g_e h(tail)^-1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .errors import CapacityError, ComposabilityError, ValidationError
from .groups import GroupTable

DEFAULT_FIELD_CAP = 10**8
_ID = re.compile(r"[a-z][a-z0-9_]*")
_KEY = re.compile(r"([1-9][0-9]*)([+-])")

Token = tuple[str, bool]  # (edge id, inverted?)
Field = tuple[int, ...]  # element index per edge, in presentation edge order


def parse_token(tok: str) -> Token:
    if tok.endswith("^-1"):
        base, inv = tok[:-3], True
    elif tok.isupper() or (tok[:1].isupper()):
        base, inv = tok.lower(), True
    else:
        base, inv = tok, False
    if not _ID.fullmatch(base):
        raise ValidationError(f"bad relator token {tok!r}")
    return base, inv


def format_token(t: Token) -> str:
    return t[0].upper() if t[1] else t[0]


@dataclass(frozen=True)
class Edge:
    id: str
    src: int
    dst: int


@dataclass
class Boundary:
    vertices: list[int]
    edges: list[str]
    relators: list[list[Token]] = field(default_factory=list)


@dataclass
class CobPresentation:
    dim: int
    n_vertices: int
    edges: list[Edge]
    relators: list[list[Token]]
    boundaries: dict[str, Boundary] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self) -> None:
        self._index = {e.id: i for i, e in enumerate(self.edges)}
        self.validate()

    # -- structure ----------------------------------------------------------------------

    def edge(self, eid: str) -> Edge:
        return self.edges[self._index[eid]]

    def edge_index(self, eid: str) -> int:
        return self._index[eid]

    def _walk_ok(self, word: Sequence[Token], edges: set[str] | None = None) -> bool:
        if not word:
            return False
        ends = []
        for eid, inv in word:
            if eid not in self._index or (edges is not None and eid not in edges):
                return False
            e = self.edge(eid)
            ends.append((e.dst, e.src) if inv else (e.src, e.dst))
        return all(ends[i][1] == ends[(i + 1) % len(ends)][0] for i in range(len(ends)))

    def validate(self) -> None:
        if self.dim < 1:
            raise ValidationError("dimension must be at least 1")
        if self.n_vertices < 0:
            raise ValidationError("vertex count must be non-negative")
        if len(self._index) != len(self.edges):
            raise ValidationError("edge ids must be unique")
        for e in self.edges:
            if not _ID.fullmatch(e.id):
                raise ValidationError(f"edge id {e.id!r} must be lowercase alphanumeric")
            if not (0 <= e.src < self.n_vertices and 0 <= e.dst < self.n_vertices):
                raise ValidationError(f"edge {e.id!r} has an endpoint outside the vertex set")
        for r in self.relators:
            if not self._walk_ok(r):
                raise ValidationError(f"relator {[format_token(t) for t in r]} is not a closed loop")
        for key, b in self.boundaries.items():
            m = _KEY.fullmatch(key)
            if not m or int(m.group(1)) > self.dim:
                raise ValidationError(f"bad boundary label {key!r}")
            if len(set(b.vertices)) != len(b.vertices) or len(set(b.edges)) != len(b.edges):
                raise ValidationError(f"boundary {key} lists a vertex or edge twice")
            vs = set(b.vertices)
            if not all(0 <= v < self.n_vertices for v in vs):
                raise ValidationError(f"boundary {key} names a missing vertex")
            for eid in b.edges:
                if eid not in self._index:
                    raise ValidationError(f"boundary {key} names a missing edge {eid!r}")
                e = self.edge(eid)
                if e.src not in vs or e.dst not in vs:
                    raise ValidationError(f"boundary {key} is not a sub-complex at edge {eid!r}")
            for r in b.relators:
                if not self._walk_ok(r, set(b.edges)):
                    raise ValidationError(f"boundary {key} relator is not a closed loop in the boundary")
        for key in self.boundaries:
            d, sign = key[:-1], key[-1]
            other = d + ("-" if sign == "+" else "+")
            if other in self.boundaries and key < other:
                if set(self.boundaries[key].vertices) & set(self.boundaries[other].vertices):
                    raise ValidationError(f"boundaries {key} and {other} intersect")

    def boundary_presentation(self, key: str) -> CobPresentation:
        """The boundary as a presentation in its own right, with positional names."""
        b = self.boundaries[key]
        vpos = {v: i for i, v in enumerate(b.vertices)}
        names = {eid: f"s{i}" for i, eid in enumerate(b.edges)}
        edges = [Edge(names[eid], vpos[self.edge(eid).src], vpos[self.edge(eid).dst]) for eid in b.edges]
        rels = [[(names[eid], inv) for eid, inv in r] for r in b.relators]
        return CobPresentation(max(self.dim - 1, 1), len(b.vertices), edges, rels, {}, f"{self.name}[{key}]")

    def restrict(self, fld: Field, key: str) -> Field:
        return tuple(fld[self._index[eid]] for eid in self.boundaries[key].edges)

    # -- JSON ---------------------------------------------------------------------------------

    def to_json(self) -> dict:
        def rel(r):
            return [format_token(t) for t in r]

        return {
            "name": self.name,
            "dim": self.dim,
            "vertices": self.n_vertices,
            "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in self.edges],
            "relators": [rel(r) for r in self.relators],
            "boundaries": {
                k: {"vertices": b.vertices, "edges": b.edges, "relators": [rel(r) for r in b.relators]}
                for k, b in sorted(self.boundaries.items())
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> CobPresentation:
        try:
            edges = [Edge(str(e["id"]), int(e["src"]), int(e["dst"])) for e in data["edges"]]
            rels = [[parse_token(t) for t in r] for r in data.get("relators", [])]
            bds = {
                str(k): Boundary(
                    [int(v) for v in b.get("vertices", [])],
                    [str(x) for x in b.get("edges", [])],
                    [[parse_token(t) for t in r] for r in b.get("relators", [])],
                )
                for k, b in data.get("boundaries", {}).items()
            }
            return cls(int(data.get("dim", 2)), int(data["vertices"]), edges, rels, bds, str(data.get("name", "")))
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValidationError(f"malformed cobordism JSON: {exc!r}") from None


# -- flat fields ------------------------------------------------------------------------------------


def holonomy(M: CobPresentation, G: GroupTable, fld: Sequence[int | None], word: Sequence[Token]) -> int:
    acc = G.identity
    for eid, inv in word:
        g = fld[M.edge_index(eid)]
        acc = G.mul(G.inv(g) if inv else g, acc)
    return acc


def is_flat(M: CobPresentation, G: GroupTable, fld: Sequence[int]) -> bool:
    return all(holonomy(M, G, fld, r) == G.identity for r in M.relators)


def flat_fields(M: CobPresentation, G: GroupTable, cap: int = DEFAULT_FIELD_CAP) -> list[Field]:
    """All flat fields, sorted; backtracking with forced values from relators."""
    n = len(M.edges)
    if G.order**n > cap:
        raise CapacityError(f"{G.order}^{n} candidate fields exceed the cap {cap}")
    rels = [[(M.edge_index(eid), inv) for eid, inv in r] for r in M.relators]
    touching: list[list[int]] = [[] for _ in range(n)]
    for ri, r in enumerate(rels):
        for e, _ in r:
            if ri not in touching[e]:
                touching[e].append(ri)
    fld: list[int | None] = [None] * n
    out: list[Field] = []

    def value(r) -> int:
        acc = G.identity
        for e, inv in r:
            g = fld[e]
            acc = G.mul(G.inv(g) if inv else g, acc)
        return acc

    def propagate(start: list[int], trail: list[int]) -> bool:
        queue = list(start)
        while queue:
            ri = queue.pop()
            r = rels[ri]
            free = [k for k, (e, _) in enumerate(r) if fld[e] is None]
            if not free:
                if value(r) != G.identity:
                    return False
                continue
            free_edges = {r[k][0] for k in free}
            if len(free) != 1 or len(free_edges) != 1:
                continue
            k = free[0]
            # word = R . y . L with y the unknown token; y = R^-1 L^-1
            left = G.identity
            for e, inv in r[:k]:
                left = G.mul(G.inv(fld[e]) if inv else fld[e], left)
            right = G.identity
            for e, inv in r[k + 1 :]:
                right = G.mul(G.inv(fld[e]) if inv else fld[e], right)
            y = G.mul(G.inv(right), G.inv(left))
            e, inv = r[k]
            fld[e] = G.inv(y) if inv else y
            trail.append(e)
            queue.extend(touching[e])
        return True

    def search(i: int) -> None:
        while i < n and fld[i] is not None:
            i += 1
        if i == n:
            out.append(tuple(fld))  # type: ignore[arg-type]
            return
        for g in range(G.order):
            fld[i] = g
            trail = [i]
            if propagate(touching[i], trail):
                search(i + 1)
            for e in trail:
                fld[e] = None

    trail0: list[int] = []
    if propagate(list(range(len(rels))), trail0):
        search(0)
    out.sort()
    return out


def act(M: CobPresentation, G: GroupTable, fld: Field, vertex: int, h: int) -> Field:
    """Gauge transformation equal to ``h`` at ``vertex`` and the identity elsewhere."""
    hinv = G.inv(h)
    out = list(fld)
    for i, e in enumerate(M.edges):
        g = out[i]
        if e.dst == vertex:
            g = G.mul(h, g)
        if e.src == vertex:
            g = G.mul(g, hinv)
        out[i] = g
    return tuple(out)


def act_full(M: CobPresentation, G: GroupTable, fld: Field, h: Sequence[int]) -> Field:
    return tuple(G.mul(G.mul(h[e.dst], fld[i]), G.inv(h[e.src])) for i, e in enumerate(M.edges))


@dataclass
class GaugeClasses:
    fields: list[Field]
    rep: dict[Field, Field]  # field -> canonical (least) field of its orbit

    @property
    def classes(self) -> list[Field]:
        return sorted(set(self.rep.values()))

    def __len__(self) -> int:
        return len(self.classes)


def gauge_classes(M: CobPresentation, G: GroupTable, fields: list[Field] | None = None) -> GaugeClasses:
    fields = flat_fields(M, G) if fields is None else fields
    parent = {f: f for f in fields}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    gens = G.generators()
    for f in fields:
        for v in range(M.n_vertices):
            for g in gens:
                a, b = find(f), find(act(M, G, f, v, g))
                if a != b:
                    parent[max(a, b)] = min(a, b)
    # Roots are the least element because unions keep the smaller root.
    return GaugeClasses(fields, {f: find(f) for f in fields})


def burnside_count(M: CobPresentation, G: GroupTable, fields: list[Field], limit: int = 2_000_000) -> int | None:
    """Orbit count as the average number of fixed flat fields; None if too large."""
    total_work = G.order ** M.n_vertices * max(len(fields), 1)
    if total_work > limit:
        return None
    fixed = 0
    for h in product(range(G.order), repeat=M.n_vertices):
        fixed += sum(1 for f in fields if act_full(M, G, f, h) == f)
    n = G.order**M.n_vertices
    if fixed % n:
        raise AssertionError("Burnside sum is not divisible by the group order")
    return fixed // n


def dw_invariant(M: CobPresentation, G: GroupTable) -> Fraction:
    """Groupoid cardinality |flat fields| / |G|^|V|."""
    return Fraction(len(flat_fields(M, G)), G.order**M.n_vertices)


# -- gluing ------------------------------------------------------------------------------------------


@dataclass
class Embedding:
    vertices: list[int]  # old vertex -> new vertex
    edges: dict[str, str]  # old edge id -> new edge id


def _boundary_shape(M: CobPresentation, key: str) -> tuple:
    b = M.boundaries[key]
    vpos = {v: i for i, v in enumerate(b.vertices)}
    epos = {eid: i for i, eid in enumerate(b.edges)}
    edges = tuple((vpos[M.edge(e).src], vpos[M.edge(e).dst]) for e in b.edges)
    rels = tuple(tuple((epos[e], inv) for e, inv in r) for r in b.relators)
    return len(b.vertices), edges, rels


def seam_diff(M: CobPresentation, N: CobPresentation, d: int) -> list[str]:
    plus, minus = f"{d}+", f"{d}-"
    diff = []
    if plus not in M.boundaries:
        diff.append(f"left operand has no {plus} boundary")
    if minus not in N.boundaries:
        diff.append(f"right operand has no {minus} boundary")
    if diff:
        return diff
    a, b = _boundary_shape(M, plus), _boundary_shape(N, minus)
    if a[0] != b[0]:
        diff.append(f"seam vertex counts differ: {a[0]} vs {b[0]}")
    if a[1] != b[1]:
        diff.append(f"seam edges differ: {list(a[1])} vs {list(b[1])}")
    if a[2] != b[2]:
        diff.append("seam relators differ")
    return diff


def _rename(eid: str, tag: str) -> str:
    return eid + tag


def compose_cobordisms(M: CobPresentation, N: CobPresentation, d: int) -> tuple[CobPresentation, Embedding, Embedding]:
    """Glue the ``d+`` boundary of ``M`` to the ``d-`` boundary of ``N``."""
    if M.dim != N.dim:
        raise ComposabilityError(f"dimensions differ: {M.dim} vs {N.dim}")
    diff = seam_diff(M, N, d)
    if diff:
        raise ComposabilityError("seam mismatch: " + "; ".join(diff))
    seam_m, seam_n = M.boundaries[f"{d}+"], N.boundaries[f"{d}-"]
    vmap_m = list(range(M.n_vertices))
    glued = dict(zip(seam_n.vertices, seam_m.vertices))
    vmap_n: list[int] = []
    nxt = M.n_vertices
    for v in range(N.n_vertices):
        if v in glued:
            vmap_n.append(glued[v])
        else:
            vmap_n.append(nxt)
            nxt += 1
    emap_m = {e.id: _rename(e.id, "l") for e in M.edges}
    seam_edges = dict(zip(seam_n.edges, seam_m.edges))
    emap_n = {e.id: emap_m[seam_edges[e.id]] if e.id in seam_edges else _rename(e.id, "r") for e in N.edges}
    edges = [Edge(emap_m[e.id], vmap_m[e.src], vmap_m[e.dst]) for e in M.edges]
    edges += [Edge(emap_n[e.id], vmap_n[e.src], vmap_n[e.dst]) for e in N.edges if e.id not in seam_edges]
    rels = [[(emap_m[e], inv) for e, inv in r] for r in M.relators]
    rels += [[(emap_n[e], inv) for e, inv in r] for r in N.relators]
    em, en = Embedding(vmap_m, emap_m), Embedding(vmap_n, emap_n)
    boundaries: dict[str, Boundary] = {}
    for key in sorted(set(M.boundaries) | set(N.boundaries)):
        if key == f"{d}+":
            if key in N.boundaries:
                boundaries[key] = _push(N.boundaries[key], en)
        elif key == f"{d}-":
            if key in M.boundaries:
                boundaries[key] = _push(M.boundaries[key], em)
        else:
            parts = [_push(P.boundaries[key], emb) for P, emb in ((M, em), (N, en)) if key in P.boundaries]
            boundaries[key] = _union(parts)
    K = CobPresentation(M.dim, nxt, edges, rels, boundaries, f"({M.name} o{d} {N.name})")
    return K, em, en


def _push(b: Boundary, emb: Embedding) -> Boundary:
    return Boundary(
        [emb.vertices[v] for v in b.vertices],
        [emb.edges[e] for e in b.edges],
        [[(emb.edges[e], inv) for e, inv in r] for r in b.relators],
    )


def _union(parts: list[Boundary]) -> Boundary:
    vs: list[int] = []
    es: list[str] = []
    rs: list[list[Token]] = []
    for b in parts:
        vs += [v for v in b.vertices if v not in vs]
        es += [e for e in b.edges if e not in es]
        rs += [r for r in b.relators if r not in rs]
    return Boundary(vs, es, rs)


def disjoint_union(M: CobPresentation, N: CobPresentation) -> tuple[CobPresentation, Embedding, Embedding]:
    if M.dim != N.dim:
        raise ComposabilityError("disjoint union needs equal dimensions")
    em = Embedding(list(range(M.n_vertices)), {e.id: _rename(e.id, "a") for e in M.edges})
    en = Embedding([M.n_vertices + v for v in range(N.n_vertices)], {e.id: _rename(e.id, "b") for e in N.edges})
    edges = [Edge(em.edges[e.id], em.vertices[e.src], em.vertices[e.dst]) for e in M.edges]
    edges += [Edge(en.edges[e.id], en.vertices[e.src], en.vertices[e.dst]) for e in N.edges]
    rels = [[(em.edges[e], inv) for e, inv in r] for r in M.relators]
    rels += [[(en.edges[e], inv) for e, inv in r] for r in N.relators]
    boundaries = {}
    for key in sorted(set(M.boundaries) | set(N.boundaries)):
        parts = [_push(P.boundaries[key], emb) for P, emb in ((M, em), (N, en)) if key in P.boundaries]
        boundaries[key] = _union(parts)
    K = CobPresentation(M.dim, M.n_vertices + N.n_vertices, edges, rels, boundaries, f"({M.name} + {N.name})")
    return K, em, en


def pull_field(K: CobPresentation, M: CobPresentation, emb: Embedding, fld: Field) -> Field:
    """Restrict a field on ``K`` along an embedding ``M -> K``."""
    return tuple(fld[K.edge_index(emb.edges[e.id])] for e in M.edges)


# -- the span of gauge classes -------------------------------------------------------------------------


@dataclass
class GaugeClassSpan:
    classes: list[Field]
    boundary_classes: dict[str, list[Field]]
    restrictions: dict[str, dict[Field, Field]]
    well_defined: bool

    def to_json(self) -> dict:
        return {
            "classes": len(self.classes),
            "boundaries": {k: len(v) for k, v in sorted(self.boundary_classes.items())},
            "restriction_images": {k: len(set(m.values())) for k, m in sorted(self.restrictions.items())},
            "well_defined": self.well_defined,
        }


def phi_span(M: CobPresentation, G: GroupTable) -> GaugeClassSpan:
    gc = gauge_classes(M, G)
    ok = True
    bclasses: dict[str, list[Field]] = {}
    restr: dict[str, dict[Field, Field]] = {}
    for key in sorted(M.boundaries):
        B = M.boundary_presentation(key)
        bgc = gauge_classes(B, G)
        bclasses[key] = bgc.classes
        table: dict[Field, Field] = {}
        for f in gc.fields:
            image = bgc.rep[M.restrict(f, key)]
            c = gc.rep[f]
            if table.setdefault(c, image) != image:
                ok = False
        restr[key] = table
    return GaugeClassSpan(gc.classes, bclasses, restr, ok)


@dataclass
class CoherenceReport:
    ok: bool
    composite_classes: int
    matching_pairs: int
    well_defined: bool
    injective: bool
    surjective: bool
    witness: str | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "ok": self.ok,
            "composite_classes": self.composite_classes,
            "matching_pairs": self.matching_pairs,
            "well_defined": self.well_defined,
            "injective": self.injective,
            "surjective": self.surjective,
            "witness": self.witness,
        }
        out.update(self.extra)
        return out


def check_functor_coherence(M: CobPresentation, N: CobPresentation, d: int, G: GroupTable) -> CoherenceReport:
    """classes(M o N) -> pairs of classes of M and N agreeing on the seam class."""
    K, em, en = compose_cobordisms(M, N, d)
    gk = gauge_classes(K, G)
    gm, gn = gauge_classes(M, G), gauge_classes(N, G)
    seam = M.boundary_presentation(f"{d}+")
    gs = gauge_classes(seam, G)
    seam_m = {c: gs.rep[M.restrict(c, f"{d}+")] for c in gm.classes}
    seam_n = {c: gs.rep[N.restrict(c, f"{d}-")] for c in gn.classes}
    targets = {(a, b) for a in gm.classes for b in gn.classes if seam_m[a] == seam_n[b]}
    image: dict[Field, tuple] = {}
    well_defined = True
    witness = None
    for f in gk.fields:
        pair = (gm.rep[pull_field(K, M, em, f)], gn.rep[pull_field(K, N, en, f)])
        c = gk.rep[f]
        if image.setdefault(c, pair) != pair:
            well_defined = False
            witness = witness or f"class {c} restricts to two different pairs"
    values = list(image.values())
    injective = len(set(values)) == len(values)
    surjective = set(values) == targets
    if not injective and witness is None:
        seen: dict = {}
        for c, p in image.items():
            if p in seen:
                witness = f"classes {seen[p]} and {c} both map to {p}"
                break
            seen[p] = c
    if not surjective and witness is None:
        missing = sorted(targets - set(values))
        witness = f"pair {missing[0]} has no composite class" if missing else "image leaves the matching pairs"
    ok = well_defined and injective and surjective
    return CoherenceReport(ok, len(gk), len(targets), well_defined, injective, surjective, witness)


def _iso(K1: CobPresentation, K2: CobPresentation, pairs: Iterable[tuple[Embedding, Embedding, CobPresentation]]) -> tuple[list[int], dict[str, str]] | None:
    """Identification K1 -> K2 induced by embeddings of common pieces, if it is an isomorphism."""
    vmap: dict[int, int] = {}
    emap: dict[str, str] = {}
    for e1, e2, P in pairs:
        for v in range(P.n_vertices):
            if vmap.setdefault(e1.vertices[v], e2.vertices[v]) != e2.vertices[v]:
                return None
        for e in P.edges:
            if emap.setdefault(e1.edges[e.id], e2.edges[e.id]) != e2.edges[e.id]:
                return None
    if sorted(vmap) != list(range(K1.n_vertices)) or sorted(vmap.values()) != list(range(K2.n_vertices)):
        return None
    if sorted(emap) != sorted(e.id for e in K1.edges) or sorted(emap.values()) != sorted(e.id for e in K2.edges):
        return None
    for e in K1.edges:
        f = K2.edge(emap[e.id])
        if (vmap[e.src], vmap[e.dst]) != (f.src, f.dst):
            return None
    return [vmap[v] for v in range(K1.n_vertices)], emap


def _transport_classes(K1, K2, iso, G, pieces1, pieces2) -> tuple[bool, str | None]:
    """Does the identification carry classes to classes compatibly with restriction to every piece?"""
    _, emap = iso
    g1, g2 = gauge_classes(K1, G), gauge_classes(K2, G)
    images = {}
    for c in g1.classes:
        f2 = [0] * len(K2.edges)
        for i, e in enumerate(K1.edges):
            f2[K2.edge_index(emap[e.id])] = c[i]
        f2 = tuple(f2)
        if f2 not in g2.rep:
            return False, f"class {c} does not transport to a flat field"
        images[c] = g2.rep[f2]
        for (P, e1), (_, e2) in zip(pieces1, pieces2):
            gp = gauge_classes(P, G)
            if gp.rep[pull_field(K1, P, e1, c)] != gp.rep[pull_field(K2, P, e2, f2)]:
                return False, f"class {c} restricts differently to {P.name}"
    if len(set(images.values())) != len(g2.classes) or len(images) != len(g2.classes):
        return False, "identification is not a bijection of classes"
    return True, None


def check_associativity_square(M: CobPresentation, N: CobPresentation, P: CobPresentation, d: int, G: GroupTable) -> CoherenceReport:
    """(M o N) o P versus M o (N o P): classes correspond and restrict to the same triples."""
    MN, a1, a2 = compose_cobordisms(M, N, d)
    L, b1, b2 = compose_cobordisms(MN, P, d)
    NP, c1, c2 = compose_cobordisms(N, P, d)
    R, d1, d2 = compose_cobordisms(M, NP, d)
    left = {"M": _chain(a1, b1), "N": _chain(a2, b1), "P": b2}
    right = {"M": d1, "N": _chain(c1, d2), "P": _chain(c2, d2)}
    pieces = {"M": M, "N": N, "P": P}
    iso = _iso(L, R, [(left[k], right[k], pieces[k]) for k in pieces])
    if iso is None:
        return CoherenceReport(False, 0, 0, False, False, False, "bracketings are not identified")
    ok, witness = _transport_classes(L, R, iso, G, [(pieces[k], left[k]) for k in pieces], [(pieces[k], right[k]) for k in pieces])
    n = len(gauge_classes(L, G))
    return CoherenceReport(ok, n, n, ok, ok, ok, witness)


def check_interchange_square(M, M2, N, N2, d: int, G: GroupTable) -> CoherenceReport:
    """(M + M2) o (N + N2) versus (M o N) + (M2 o N2)."""
    U1, u1, u2 = disjoint_union(M, M2)
    U2, w1, w2 = disjoint_union(N, N2)
    L, l1, l2 = compose_cobordisms(U1, U2, d)
    A, a1, a2 = compose_cobordisms(M, N, d)
    B, b1, b2 = compose_cobordisms(M2, N2, d)
    R, r1, r2 = disjoint_union(A, B)
    pieces = {"M": M, "M2": M2, "N": N, "N2": N2}
    left = {"M": _chain(u1, l1), "M2": _chain(u2, l1), "N": _chain(w1, l2), "N2": _chain(w2, l2)}
    right = {"M": _chain(a1, r1), "N": _chain(a2, r1), "M2": _chain(b1, r2), "N2": _chain(b2, r2)}
    iso = _iso(L, R, [(left[k], right[k], pieces[k]) for k in pieces])
    if iso is None:
        return CoherenceReport(False, 0, 0, False, False, False, "the two gluings are not identified")
    ok, witness = _transport_classes(L, R, iso, G, [(pieces[k], left[k]) for k in pieces], [(pieces[k], right[k]) for k in pieces])
    n = len(gauge_classes(L, G))
    return CoherenceReport(ok, n, n, ok, ok, ok, witness)


def _chain(first: Embedding, second: Embedding) -> Embedding:
    return Embedding([second.vertices[v] for v in first.vertices], {e: second.edges[x] for e, x in first.edges.items()})


# -- fixtures -------------------------------------------------------------------------------------------


def _pres(name, dim, nv, edges, rels, bds=None) -> CobPresentation:
    return CobPresentation(
        dim, nv, [Edge(i, s, t) for i, s, t in edges], [[parse_token(t) for t in r] for r in rels],
        {k: Boundary(v, e) for k, (v, e) in (bds or {}).items()}, name,
    )


def surface(genus: int) -> CobPresentation:
    """Closed orientable surface: one vertex, 2g loops, relator prod [a_i, b_i]."""
    if genus == 0:
        return sphere()
    edges = []
    word = []
    for i in range(genus):
        a, b = f"a{i}", f"b{i}"
        edges += [(a, 0, 0), (b, 0, 0)]
        word += [a, b, a.upper(), b.upper()]
    return _pres(f"surface{genus}", 2, 1, edges, [word])


def sphere() -> CobPresentation:
    return _pres("sphere", 2, 1, [("a", 0, 0)], [["a"]])


def torus() -> CobPresentation:
    return _pres("torus", 2, 1, [("a", 0, 0), ("b", 0, 0)], [["a", "b", "A", "B"]])


def torus_subdivided() -> CobPresentation:
    """Torus with the a-loop split by a second vertex."""
    return _pres(
        "torus2", 2, 2, [("a", 0, 1), ("c", 1, 0), ("b", 0, 0)], [["a", "c", "b", "C", "A", "B"]]
    )


def cylinder() -> CobPresentation:
    return _pres(
        "cylinder", 2, 2, [("a", 0, 0), ("b", 1, 1), ("c", 0, 1)], [["a", "c", "B", "C"]],
        {"1-": ([0], ["a"]), "1+": ([1], ["b"])},
    )


def interval() -> CobPresentation:
    return _pres("interval", 1, 2, [("c", 0, 1)], [], {"1-": ([0], []), "1+": ([1], [])})


def disk() -> CobPresentation:
    """Disk with its boundary circle as the 1+ face."""
    return _pres("disk", 2, 1, [("a", 0, 0)], [["a"]], {"1+": ([0], ["a"])})
