"""Finite higher spans and cospans, composed by pullback and pushout.

A k-span over directions ``dirs`` assigns a finite set to every face of
the k-cube.  Faces are tuples over ``{0, 1, None}``, one entry per
direction; ``None`` means the face spans that direction, so the all-None
face is the core.  ``maps[(f, a, s)]`` is the map between face ``f`` and
the face obtained by fixing axis ``a`` of ``f`` to side ``s``.  For spans
it points from ``f`` down to the smaller face; for cospans it points up
into ``f``.

Composite cores are nested pairs mirroring the composition tree, so the
associator and interchanger are honest re-bracketings, never identities.
"""

from __future__ import annotations

import random
from functools import lru_cache
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Iterable, Iterator, Sequence

from .diagrams import GluingDiagram, Leaf, MovePath, Node, Tree, make_grid
from .errors import ComposabilityError, ValidationError

Face = tuple
MapKey = tuple  # (face, axis, side)


def cube_faces(k: int) -> list[Face]:
    return list(product((0, 1, None), repeat=k))


def face_map_keys(k: int) -> list[MapKey]:
    return [(f, a, s) for f in cube_faces(k) for a in range(k) if f[a] is None for s in (0, 1)]


def _fix(f: Face, a: int, s: int) -> Face:
    return f[:a] + (s,) + f[a + 1 :]


# -- element keys --------------------------------------------------------------------------


def _leaves(e: Any) -> Iterator[Any]:
    if isinstance(e, tuple):
        for x in e:
            yield from _leaves(x)
    else:
        yield e


@lru_cache(maxsize=1 << 17)
def bracket_key(e: Any) -> Any:
    """Key that forgets the bracketing of a nested pair."""
    if isinstance(e, tuple):
        return tuple(sorted(_leaves(e), key=lambda x: (type(x).__name__, repr(x))))
    return e


def _keyer(elements: Iterable) -> Callable[[Any], Any]:
    # Fall back to strict equality when forgetting brackets would merge elements.
    elements = list(elements)
    keys = {bracket_key(e) for e in elements}
    return bracket_key if len(keys) == len(elements) else (lambda e: e)


# -- spans -----------------------------------------------------------------------------------


@dataclass(eq=False)
class FiniteSpan:
    dirs: tuple[int, ...]
    sets: dict[Face, frozenset]
    maps: dict[MapKey, dict]

    cospan = False

    @property
    def arity(self) -> int:
        return len(self.dirs)

    @property
    def core(self) -> frozenset:
        return self.sets[(None,) * self.arity]

    def axis(self, d: int) -> int:
        try:
            return self.dirs.index(d)
        except ValueError:
            raise ComposabilityError(f"direction {d} is not among {self.dirs}") from None

    def map(self, f: Face, a: int, s: int) -> dict:
        return self.maps[(f, a, s)]

    def validate(self) -> None:
        """Raise ValidationError unless every map is total and every square commutes."""
        k = self.arity
        if len(set(self.dirs)) != k or list(self.dirs) != sorted(self.dirs):
            raise ValidationError(f"directions must be strictly increasing, got {self.dirs}")
        for f in cube_faces(k):
            if f not in self.sets:
                raise ValidationError(f"missing set for face {f}")
        for f, a, s in face_map_keys(k):
            m = self.maps.get((f, a, s))
            if m is None:
                raise ValidationError(f"missing map at face {f}, axis {a}, side {s}")
            dom, cod = (self.sets[_fix(f, a, s)], self.sets[f]) if self.cospan else (self.sets[f], self.sets[_fix(f, a, s)])
            if set(m) != set(dom):
                raise ValidationError(f"map at {f}, axis {a}, side {s} is not total")
            bad = [x for x in m.values() if x not in cod]
            if bad:
                raise ValidationError(f"map at {f}, axis {a}, side {s} leaves its codomain: {bad[0]!r}")
        for f in cube_faces(k):
            free = [a for a in range(k) if f[a] is None]
            for a, b in ((a, b) for a in free for b in free if a < b):
                for s, t in product((0, 1), repeat=2):
                    fa, fb = _fix(f, a, s), _fix(f, b, t)
                    if self.cospan:
                        low = _fix(fa, b, t)
                        for x in self.sets[low]:
                            one = self.maps[(f, a, s)][self.maps[(fa, b, t)][x]]
                            two = self.maps[(f, b, t)][self.maps[(fb, a, s)][x]]
                            if one != two:
                                raise ValidationError(f"square at {f} on axes {a},{b} does not commute at {x!r}")
                    else:
                        for x in self.sets[f]:
                            one = self.maps[(fa, b, t)][self.maps[(f, a, s)][x]]
                            two = self.maps[(fb, a, s)][self.maps[(f, b, t)][x]]
                            if one != two:
                                raise ValidationError(f"square at {f} on axes {a},{b} does not commute at {x!r}")

    def restrict(self, d: int, side: int):
        """The (k-1)-dimensional face at ``x_d = side``."""
        faces = self.__dict__.setdefault("_faces", {})
        if (d, side) not in faces:
            faces[(d, side)] = self._restrict(d, side)
        return faces[(d, side)]

    def _restrict(self, d: int, side: int):
        a = self.axis(d)
        dirs = self.dirs[:a] + self.dirs[a + 1 :]

        def lift(g: Face) -> Face:
            return g[:a] + (side,) + g[a:]

        sets = {g: self.sets[lift(g)] for g in cube_faces(len(dirs))}
        maps = {(g, b, s): self.maps[(lift(g), b if b < a else b + 1, s)] for g, b, s in face_map_keys(len(dirs))}
        return type(self)(dirs, sets, maps)

    def source(self, d: int):
        return self.restrict(d, 0)

    def target(self, d: int):
        return self.restrict(d, 1)

    def signature(self) -> tuple:
        """Hashable description of the span up to re-bracketing of elements."""
        sig = self.__dict__.get("_signature")
        if sig is None:
            sig = self.__dict__["_signature"] = self._signature()
        return sig

    def _signature(self) -> tuple:
        keys = {f: _keyer(s) for f, s in self.sets.items()}
        sets = frozenset((f, frozenset(map(keys[f], s))) for f, s in self.sets.items())
        maps = []
        for (f, a, s), m in self.maps.items():
            g = _fix(f, a, s)
            kd, kc = (keys[g], keys[f]) if self.cospan else (keys[f], keys[g])
            maps.append(((f, a, s), frozenset((kd(x), kc(y)) for x, y in m.items())))
        return (type(self).__name__, self.dirs, sets, frozenset(maps))

    def __repr__(self) -> str:
        kind = "FiniteCospan" if self.cospan else "FiniteSpan"
        return f"{kind}(dirs={self.dirs}, core={len(self.core)})"


class FiniteCospan(FiniteSpan):
    cospan = True


Morphism = Any  # FiniteSpan | FiniteCospan | FormalUnit


@dataclass(frozen=True, eq=False)
class FormalUnit:
    """Strict identity ``id_U(base)`` adjoined in the directions ``unit_dirs``."""

    base: Any
    unit_dirs: frozenset

    def __post_init__(self) -> None:
        if isinstance(self.base, FormalUnit):
            object.__setattr__(self, "unit_dirs", frozenset(self.unit_dirs) | self.base.unit_dirs)
            object.__setattr__(self, "base", self.base.base)
        object.__setattr__(self, "unit_dirs", frozenset(self.unit_dirs))
        if not self.unit_dirs:
            raise ValidationError("a formal unit needs at least one unit direction")
        if self.unit_dirs & set(self.base.dirs):
            raise ValidationError("unit directions must be missing from the base")

    @property
    def dirs(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.base.dirs) | self.unit_dirs))

    @property
    def cospan(self) -> bool:
        return self.base.cospan

    def restrict(self, d: int, side: int) -> Morphism:
        if d in self.unit_dirs:
            return unit(self.base, self.unit_dirs - {d})
        return FormalUnit(self.base.restrict(d, side), self.unit_dirs)

    def source(self, d: int) -> Morphism:
        return self.restrict(d, 0)

    def target(self, d: int) -> Morphism:
        return self.restrict(d, 1)

    def signature(self) -> tuple:
        return ("FormalUnit", tuple(sorted(self.unit_dirs)), self.base.signature())

    def __repr__(self) -> str:
        return f"id{sorted(self.unit_dirs)}({self.base!r})"


def unit(base: Morphism, dirs: Iterable[int]) -> Morphism:
    """``id_dirs(base)``; no directions means ``base`` itself."""
    dirs = frozenset(dirs)
    return FormalUnit(base, dirs) if dirs else base


def same_morphism(x: Morphism, y: Morphism) -> bool:
    return x.signature() == y.signature()


# -- composition -------------------------------------------------------------------------------


def compose_spans(x: Morphism, y: Morphism, d: int) -> Morphism:
    """Compose ``x`` then ``y`` in direction ``d`` (x's target glued to y's source)."""
    return _compose(x, y, d, cospan=False)


def compose_cospans(x: Morphism, y: Morphism, d: int) -> Morphism:
    return _compose(x, y, d, cospan=True)


def _compose(x: Morphism, y: Morphism, d: int, cospan: bool) -> Morphism:
    if x.dirs != y.dirs:
        raise ComposabilityError(f"directions differ: {x.dirs} vs {y.dirs}")
    if d not in x.dirs:
        raise ComposabilityError(f"direction {d} is not among {x.dirs}")
    for m in (x, y):
        if m.cospan != cospan:
            raise ComposabilityError(f"expected {'cospans' if cospan else 'spans'}, got {m!r}")
    if not same_morphism(x.target(d), y.source(d)):
        raise ComposabilityError(f"target of {x!r} and source of {y!r} differ in direction {d}")
    xu, yu = isinstance(x, FormalUnit), isinstance(y, FormalUnit)
    if xu and d in x.unit_dirs:
        return y
    if yu and d in y.unit_dirs:
        return x
    if xu and yu:
        if x.unit_dirs != y.unit_dirs:
            raise ComposabilityError("formal units with different unit directions do not compose")
        return FormalUnit(_compose(x.base, y.base, d, cospan), x.unit_dirs)
    if xu or yu:
        raise ComposabilityError("a formal unit composes with a concrete morphism only in its unit directions")
    return _pushout_compose(x, y, d) if cospan else _pullback_compose(x, y, d)


def _pullback_compose(x: FiniteSpan, y: FiniteSpan, d: int) -> FiniteSpan:
    a = x.axis(d)
    k = x.arity
    sets: dict[Face, frozenset] = {}
    for f in cube_faces(k):
        if f[a] == 0:
            sets[f] = x.sets[f]
        elif f[a] == 1:
            sets[f] = y.sets[f]
        else:
            mx = x.maps[(f, a, 1)]
            my = y.maps[(f, a, 0)]
            kx = _keyer(x.sets[_fix(f, a, 1)])
            ky = _keyer(y.sets[_fix(f, a, 0)])
            fibres: dict[Any, list] = {}
            for b in sorted(y.sets[f], key=repr):
                fibres.setdefault(ky(my[b]), []).append(b)
            sets[f] = frozenset((p, q) for p in x.sets[f] for q in fibres.get(kx(mx[p]), ()))
    maps: dict[MapKey, dict] = {}
    for f, b, s in face_map_keys(k):
        if f[a] == 0:
            maps[(f, b, s)] = x.maps[(f, b, s)]
        elif f[a] == 1:
            maps[(f, b, s)] = y.maps[(f, b, s)]
        elif b == a:
            m = x.maps[(f, a, 0)] if s == 0 else y.maps[(f, a, 1)]
            maps[(f, b, s)] = {e: m[e[s]] for e in sets[f]}
        else:
            mx, my = x.maps[(f, b, s)], y.maps[(f, b, s)]
            maps[(f, b, s)] = {(p, q): (mx[p], my[q]) for p, q in sets[f]}
    return FiniteSpan(x.dirs, sets, maps)


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def classes(self) -> dict:
        out: dict = {}
        for x in list(self.parent):
            out.setdefault(self.find(x), []).append(x)
        return {r: frozenset(v) for r, v in out.items()}


def _pushout_compose(x: FiniteCospan, y: FiniteCospan, d: int) -> FiniteCospan:
    a = x.axis(d)
    k = x.arity
    sets: dict[Face, frozenset] = {}
    cls_of: dict[Face, dict] = {}
    for f in cube_faces(k):
        if f[a] == 0:
            sets[f] = x.sets[f]
        elif f[a] == 1:
            sets[f] = y.sets[f]
        else:
            uf = _UnionFind()
            for p in x.sets[f]:
                uf.find((0, p))
            for q in y.sets[f]:
                uf.find((1, q))
            shared_x = x.sets[_fix(f, a, 1)]
            shared_y = {_keyer(y.sets[_fix(f, a, 0)])(s): s for s in y.sets[_fix(f, a, 0)]}
            kx = _keyer(shared_x)
            for s in shared_x:
                uf.union((0, x.maps[(f, a, 1)][s]), (1, y.maps[(f, a, 0)][shared_y[kx(s)]]))
            classes = uf.classes()
            lookup = {m: c for c in classes.values() for m in c}
            sets[f] = frozenset(classes.values())
            cls_of[f] = lookup
    maps: dict[MapKey, dict] = {}
    for f, b, s in face_map_keys(k):
        g = _fix(f, b, s)
        if f[a] == 0:
            maps[(f, b, s)] = x.maps[(f, b, s)]
        elif f[a] == 1:
            maps[(f, b, s)] = y.maps[(f, b, s)]
        elif b == a:
            side_map = x.maps[(f, a, 0)] if s == 0 else y.maps[(f, a, 1)]
            maps[(f, b, s)] = {e: cls_of[f][(s, side_map[e])] for e in sets[g]}
        else:
            out = {}
            for c in sets[g]:
                tag, e = next(iter(c))
                m = (x if tag == 0 else y).maps[(f, b, s)]
                out[c] = cls_of[f][(tag, m[e])]
            maps[(f, b, s)] = out
    return FiniteCospan(x.dirs, sets, maps)


# -- one-dimensional constructors ------------------------------------------------------------------


def simple_span(source: Iterable, core: Iterable, target: Iterable, left: dict, right: dict, d: int = 1) -> FiniteSpan:
    """``source <- core -> target`` in direction ``d``."""
    sets = {(0,): frozenset(source), (None,): frozenset(core), (1,): frozenset(target)}
    maps = {((None,), 0, 0): dict(left), ((None,), 0, 1): dict(right)}
    s = FiniteSpan((d,), sets, maps)
    s.validate()
    return s


def simple_cospan(source: Iterable, core: Iterable, target: Iterable, left: dict, right: dict, d: int = 1) -> FiniteCospan:
    """``source -> core <- target`` in direction ``d``."""
    sets = {(0,): frozenset(source), (None,): frozenset(core), (1,): frozenset(target)}
    maps = {((None,), 0, 0): dict(left), ((None,), 0, 1): dict(right)}
    s = FiniteCospan((d,), sets, maps)
    s.validate()
    return s


# -- tensor ------------------------------------------------------------------------------------------


class TensorUnit:
    """The formal monoidal unit: ``x (x) 1 = x = 1 (x) x``."""

    dirs = None

    def __repr__(self) -> str:
        return "TensorUnit()"


def tensor(x: Any, y: Any) -> Any:
    if isinstance(x, TensorUnit):
        return y
    if isinstance(y, TensorUnit):
        return x
    if isinstance(x, FormalUnit) or isinstance(y, FormalUnit):
        if not (isinstance(x, FormalUnit) and isinstance(y, FormalUnit)) or x.unit_dirs != y.unit_dirs:
            raise ComposabilityError("tensor of a formal unit needs a formal unit in the same directions")
        return FormalUnit(tensor(x.base, y.base), x.unit_dirs)
    if x.dirs != y.dirs or x.cospan != y.cospan:
        raise ComposabilityError(f"tensor needs equal arity and kind: {x!r} vs {y!r}")
    sets = {f: frozenset(product(x.sets[f], y.sets[f])) for f in x.sets}
    maps = {}
    for key in x.maps:
        f, a, s = key
        dom = _fix(f, a, s) if x.cospan else f
        mx, my = x.maps[key], y.maps[key]
        maps[key] = {(p, q): (mx[p], my[q]) for p, q in sets[dom]}
    return type(x)(x.dirs, sets, maps)


def braiding(x: FiniteSpan, y: FiniteSpan) -> dict[Face, dict]:
    """Facewise swap ``x (x) y -> y (x) x``."""
    xy = tensor(x, y)
    return {f: {(p, q): (q, p) for p, q in s} for f, s in xy.sets.items()}


@dataclass
class BraidingReport:
    ok: bool
    squares_to_identity: bool
    is_span_map: bool
    core_size: int


def check_braiding(x: FiniteSpan, y: FiniteSpan) -> BraidingReport:
    xy, yx = tensor(x, y), tensor(y, x)
    b1, b2 = braiding(x, y), braiding(y, x)
    involutive = all(b2[f][b1[f][e]] == e for f, s in xy.sets.items() for e in s)
    natural = all(set(b1[f].values()) == set(yx.sets[f]) for f in xy.sets)
    for (f, a, s), m in xy.maps.items():
        g = _fix(f, a, s)
        dom, cod = (g, f) if xy.cospan else (f, g)
        natural = natural and all(yx.maps[(f, a, s)][b1[dom][e]] == b1[cod][m[e]] for e in xy.sets[dom])
    return BraidingReport(involutive and natural, involutive, natural, len(xy.core))


def check_tensor_interchange(x: FiniteSpan, x2: FiniteSpan, y: FiniteSpan, y2: FiniteSpan, d: int) -> bool:
    """``(x (x) y) o_d (x2 (x) y2)`` and ``(x o_d x2) (x) (y o_d y2)`` agree by the shuffle."""
    lhs = compose_spans(tensor(x, y), tensor(x2, y2), d)
    rhs = tensor(compose_spans(x, x2, d), compose_spans(y, y2, d))
    image = {((a, b), (a2, b2)): ((a, a2), (b, b2)) for (a, b), (a2, b2) in lhs.core}
    return set(image.values()) == set(rhs.core) and len(image) == len(lhs.core)


# -- grid instances ---------------------------------------------------------------------------------------


@dataclass
class SpanGridInstance:
    grid: GluingDiagram
    cells: dict[tuple[int, ...], FiniteSpan]
    seed: int | None = None
    kind: str = "random"
    _cache: dict = field(default_factory=dict, repr=False)

    def validate(self) -> None:
        for c in self.grid.cells():
            if c not in self.cells:
                raise ValidationError(f"cell {c} has no span")
            self.cells[c].validate()
        for c in self.grid.cells():
            for a, d in enumerate(self.grid.directions):
                nxt = c[:a] + (c[a] + 1,) + c[a + 1 :]
                if nxt in self.cells and not same_morphism(self.cells[c].target(d), self.cells[nxt].source(d)):
                    raise ValidationError(f"cells {c} and {nxt} disagree on their shared face")


def _global_coord(cell: Sequence[int], f: Face) -> tuple[int, ...]:
    return tuple(2 * c + (1 if s is None else 2 * s) for c, s in zip(cell, f))


def _face_name(g: Sequence[int]) -> str:
    return "f" + "_".join(map(str, g))


def _global_complex(grid: GluingDiagram, size: Callable[[tuple[int, ...]], int], rng: random.Random | None, identity: bool):
    """Sets and codim-1 maps on the subdivided grid; odd coordinates are interiors."""
    coords = sorted(product(*(range(2 * p + 1) for p in grid.extents)), key=lambda g: (sum(c % 2 for c in g), g))
    sets: dict[tuple, list] = {}
    maps: dict[tuple, dict] = {}  # (g, axis, side) -> map g -> neighbour
    for g in coords:
        odd = [a for a, c in enumerate(g) if c % 2]
        n = size(g)
        name = _face_name(g)
        elems = [f"{name}.{t}" for t in range(n)]
        sets[g] = elems
        nbrs = [(a, s, g[:a] + (g[a] - 1 + 2 * s,) + g[a + 1 :]) for a in odd for s in (0, 1)]
        for a, s, _ in nbrs:
            maps[(g, a, s)] = {}
        for t, e in enumerate(elems):
            if identity or t == 0 or rng is None:
                fam = {(a, s): sets[h][t if identity else 0] for a, s, h in nbrs}
            else:
                fam = _random_family(g, nbrs, sets, maps, rng)
            for (a, s), v in fam.items():
                maps[(g, a, s)][e] = v
    return sets, maps


def _random_family(g, nbrs, sets, maps, rng: random.Random) -> dict:
    """A random compatible choice of one element on every codim-1 face."""
    order = list(nbrs)
    chosen: dict = {}

    def ok(a, s, h, v) -> bool:
        for (b, t), w in chosen.items():
            if b == a:
                continue
            hb = g[:b] + (g[b] - 1 + 2 * t,) + g[b + 1 :]
            if maps[(h, b, t)][v] != maps[(hb, a, s)][w]:
                return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        a, s, h = order[i]
        cands = list(sets[h])
        rng.shuffle(cands)
        for v in cands:
            if ok(a, s, h, v):
                chosen[(a, s)] = v
                if search(i + 1):
                    return True
                del chosen[(a, s)]
        return False

    if not search(0):  # pragma: no cover - element 0 always gives a solution
        raise AssertionError("no compatible family")
    return dict(chosen)


def _instance_from_complex(grid: GluingDiagram, sets, maps, seed, kind) -> SpanGridInstance:
    k = grid.dim
    cells = {}
    for c in grid.cells():
        cs = {f: frozenset(sets[_global_coord(c, f)]) for f in cube_faces(k)}
        cm = {(f, a, s): dict(maps[(_global_coord(c, f), a, s)]) for f, a, s in face_map_keys(k)}
        cells[c] = FiniteSpan(grid.directions, cs, cm)
    inst = SpanGridInstance(grid, cells, seed, kind)
    inst.validate()
    return inst


def random_instance(grid: GluingDiagram, seed: int, core_size: int = 3, face_size: int | None = None) -> SpanGridInstance:
    """Seeded random span instance; every set has between 1 and its cap elements."""
    rng = random.Random(seed)
    face_size = core_size if face_size is None else face_size
    top = grid.dim

    def size(g) -> int:
        dim = sum(c % 2 for c in g)
        return rng.randint(1, core_size if dim == top else face_size)

    sets, maps = _global_complex(grid, size, rng, identity=False)
    return _instance_from_complex(grid, sets, maps, seed, "random")


def singleton_faces_instance(grid: GluingDiagram, core_size: int = 2) -> SpanGridInstance:
    """Cores of ``core_size`` elements, every lower face a singleton."""
    top = grid.dim
    sets, maps = _global_complex(grid, lambda g: core_size if sum(c % 2 for c in g) == top else 1, None, identity=False)
    return _instance_from_complex(grid, sets, maps, None, "singleton-faces")


def identity_instance(grid: GluingDiagram, size: int = 2) -> SpanGridInstance:
    """Every face has ``size`` elements and every map preserves the index."""
    sets, maps = _global_complex(grid, lambda g: size, None, identity=True)
    return _instance_from_complex(grid, sets, maps, None, "identity")


# -- evaluation ---------------------------------------------------------------------------------------------


def evaluate_tree(inst: SpanGridInstance, tree: Tree) -> FiniteSpan:
    hit = inst._cache.get(tree)
    if hit is not None:
        return hit
    if isinstance(tree, Leaf):
        out = inst.cells[tree.cell]
    else:
        assert isinstance(tree, Node)
        out = compose_spans(evaluate_tree(inst, tree.left), evaluate_tree(inst, tree.right), tree.dir)
    inst._cache[tree] = out
    return out


def _rebracket(e: Any, pos: str, kind: str, inverse: bool) -> Any:
    if pos:
        i = 0 if pos[0] == "L" else 1
        parts = list(e)
        parts[i] = _rebracket(parts[i], pos[1:], kind, inverse)
        return tuple(parts)
    if kind == "alpha":
        if not inverse:
            (x, y), z = e
            return (x, (y, z))
        x, (y, z) = e
        return ((x, y), z)
    (x, y), (x2, y2) = e
    return ((x, x2), (y, y2))


def associator(e: Any, inverse: bool = False) -> Any:
    """``((a, b), c) -> (a, (b, c))`` on one element."""
    return _rebracket(e, "", "alpha", inverse)


def interchanger(e: Any) -> Any:
    """``((a, b), (c, d)) -> ((a, c), (b, d))``; it is its own inverse on elements."""
    return _rebracket(e, "", "beta", False)


class PathEvaluationError(AssertionError):
    pass


def evaluate_path(inst: SpanGridInstance, path: MovePath) -> dict:
    """Composite re-bracketing bijection from the core of the start tree to the end tree."""
    trees = path.trees()
    cores = [evaluate_tree(inst, t).core for t in trees]
    current = {e: e for e in cores[0]}
    for n, (move, inverse) in enumerate(path.steps):
        nxt = {}
        for src, e in current.items():
            image = _rebracket(e, move.position, move.kind, inverse)
            if image not in cores[n + 1]:
                raise PathEvaluationError(f"{move.label()} sends {e!r} outside the next core")
            nxt[src] = image
        if len(set(nxt.values())) != len(nxt) or len(nxt) != len(cores[n + 1]):
            raise PathEvaluationError(f"{move.label()} is not a bijection of cores")
        current = nxt
    return current


# -- axiom checks -------------------------------------------------------------------------------------


@dataclass
class AxiomReport:
    ok: bool
    grid: tuple[int, ...]
    seed: int | None
    kind: str
    checked: dict[str, int]
    failures: list[dict]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "grid": list(self.grid),
            "seed": self.seed,
            "instance": self.kind,
            "checked": dict(sorted(self.checked.items())),
            "failures": self.failures[:10],
        }


def _arc_path(cx, arc: Sequence[int]) -> MovePath:
    g = cx.graph
    start = g.vertices[g.edges[arc[0]].src]
    return MovePath(start, tuple((g.edges[e].move, False) for e in arc))


def check_pseudo_axioms(inst: SpanGridInstance, tags: Iterable[str] | None = None, complex=None) -> AxiomReport:
    """Pointwise check of every coherence cell, the interchanger inverse law,
    the source/target/identity equations and the unit coherences."""
    from .rewrite import build_coherence_complex, build_rewrite_graph

    cx = complex or build_coherence_complex(build_rewrite_graph(inst.grid))
    wanted = set(tags) if tags is not None else None
    checked: dict[str, int] = {}
    failures: list[dict] = []

    def note(name: str, ok: bool, **detail) -> None:
        checked[name] = checked.get(name, 0) + 1
        if not ok:
            failures.append(dict(check=name, **detail))

    for c in cx.cells:
        if wanted is not None and c.tag not in wanted:
            continue
        fa = evaluate_path(inst, _arc_path(cx, c.arc_a))
        fb = evaluate_path(inst, _arc_path(cx, c.arc_b))
        bad = next((e for e in fa if fa[e] != fb[e]), None)
        note(c.tag, bad is None, cell=c.index, element=repr(bad) if bad is not None else None)
    g = cx.graph
    for e in g.edges:
        if e.move.kind != "beta":
            continue
        there_back = MovePath(g.vertices[e.src], ((e.move, False), (e.move, True)))
        f = evaluate_path(inst, there_back)
        note("beta-inverse", all(k == v for k, v in f.items()), edge=e.index)
    for name, ok, detail in structure_identities(inst):
        note(name, ok, **detail)
    return AxiomReport(not failures, inst.grid.extents, inst.seed, inst.kind, checked, failures)


def structure_identities(inst: SpanGridInstance) -> list[tuple[str, bool, dict]]:
    """Source/target/identity equations and unit coherences on adjacent cells."""
    out: list[tuple[str, bool, dict]] = []
    dirs = inst.grid.directions
    for c in inst.grid.cells():
        x = inst.cells[c]
        for i in dirs:
            out.append(("unit-left", same_morphism(compose_spans(unit(x.source(i), {i}), x, i), x), {"cell": c}))
            out.append(("unit-right", same_morphism(compose_spans(x, unit(x.target(i), {i}), i), x), {"cell": c}))
            u = unit(x.source(i), {i})
            out.append(("unit-faces", same_morphism(u.source(i), x.source(i)) and same_morphism(u.target(i), x.source(i)), {"cell": c}))
            for j in dirs:
                if j == i:
                    continue
                out.append(("face-commute", all(
                    same_morphism(x.restrict(i, s).restrict(j, t), x.restrict(j, t).restrict(i, s))
                    for s in (0, 1) for t in (0, 1)
                ), {"cell": c}))
                base = x.source(j)
                lhs = unit(base, {j}).source(i)
                rhs = unit(base.source(i), {j})
                out.append(("unit-face-commute", same_morphism(lhs, rhs), {"cell": c}))
                out.append(("unit-unit", same_morphism(unit(unit(base.source(i), {j}), {i}), unit(unit(base.source(i), {i}), {j})), {"cell": c}))
        for a, i in enumerate(dirs):
            nc = c[:a] + (c[a] + 1,) + c[a + 1 :]
            if nc not in inst.cells:
                continue
            y = inst.cells[nc]
            xy = compose_spans(x, y, i)
            out.append(("source-of-composite", same_morphism(xy.source(i), x.source(i)), {"cells": [c, nc]}))
            out.append(("target-of-composite", same_morphism(xy.target(i), y.target(i)), {"cells": [c, nc]}))
            for j in dirs:
                if j == i:
                    continue
                for side in (0, 1):
                    face = compose_spans(x.restrict(j, side), y.restrict(j, side), i)
                    out.append(("face-of-composite", same_morphism(xy.restrict(j, side), face), {"cells": [c, nc], "dir": j}))
                # id_j(x o_i y) = id_j(x) o_i id_j(y) on the j-sources
                sx, sy = x.source(j), y.source(j)
                u = compose_spans(unit(sx, {j}), unit(sy, {j}), i)
                out.append(("unit-of-composite", same_morphism(u, unit(compose_spans(sx, sy, i), {j})), {"cells": [c, nc]}))
                # beta = id on  (x o_i y) o_j (id_j t_j x o_i id_j t_j y)
                tail = compose_spans(unit(x.target(j), {j}), unit(y.target(j), {j}), i)
                lhs = compose_spans(xy, tail, j)
                rhs = compose_spans(compose_spans(x, unit(x.target(j), {j}), j), compose_spans(y, unit(y.target(j), {j}), j), i)
                out.append(("beta-unit", lhs is not None and same_morphism(lhs, rhs), {"cells": [c, nc]}))
            # alpha = id on the three unit-padded triples
            ids, idt = unit(x.source(i), {i}), unit(y.target(i), {i})
            mid = unit(x.target(i), {i})
            triples = [(ids, x, y), (x, mid, y), (x, y, idt)]
            for t in triples:
                left = compose_spans(compose_spans(t[0], t[1], i), t[2], i)
                right = compose_spans(t[0], compose_spans(t[1], t[2], i), i)
                out.append(("alpha-unit", left is right or (same_morphism(left, right) and left.core == right.core), {"cells": [c, nc]}))
    return out


# -- JSON ---------------------------------------------------------------------------------------------------


def _face_json(f: Face) -> list:
    return [None if s is None else s for s in f]


def span_to_json(x: FiniteSpan) -> dict:
    for s in x.sets.values():
        for e in s:
            if not isinstance(e, str):
                raise ValidationError("only spans with string elements serialize")
    return {
        "kind": "cospan" if x.cospan else "span",
        "dirs": list(x.dirs),
        "faces": [{"face": _face_json(f), "elements": sorted(x.sets[f])} for f in cube_faces(x.arity)],
        "maps": [
            {"face": _face_json(f), "axis": a, "side": s, "pairs": sorted([k, v] for k, v in x.maps[(f, a, s)].items())}
            for f, a, s in face_map_keys(x.arity)
        ],
    }


def span_from_json(data: dict) -> FiniteSpan:
    try:
        cls = FiniteCospan if data.get("kind") == "cospan" else FiniteSpan
        dirs = tuple(int(d) for d in data["dirs"])
        sets = {tuple(item["face"]): frozenset(item["elements"]) for item in data["faces"]}
        maps = {(tuple(m["face"]), int(m["axis"]), int(m["side"])): {k: v for k, v in m["pairs"]} for m in data["maps"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed span JSON: {exc}") from exc
    span = cls(dirs, sets, maps)
    span.validate()
    return span


def instance_to_json(inst: SpanGridInstance) -> dict:
    return {
        "grid": list(inst.grid.extents),
        "seed": inst.seed,
        "kind": inst.kind,
        "cells": [{"cell": list(c), "span": span_to_json(inst.cells[c])} for c in inst.grid.cells()],
    }


def instance_from_json(data: dict) -> SpanGridInstance:
    try:
        grid = make_grid(data["grid"])
        cells = {tuple(item["cell"]): span_from_json(item["span"]) for item in data["cells"]}
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed instance JSON: {exc}") from exc
    inst = SpanGridInstance(grid, cells, data.get("seed"), data.get("kind", "random"))
    inst.validate()
    return inst


SHAPES = {"pentagon": ((4,), "Pentagon"), "hexagon1": ((2, 3), "Hexagon1"), "hexagon2": ((2, 2, 2), "Hexagon2")}
