"""Regular gluing diagrams, guillotine composition trees and their rewrite moves.

A gluing diagram is a grid of unit blocks inside a k-cube.  A composition
tree records in which order (and in which direction) adjacent boxes are
glued.  Two local rewrites act on trees:

* ``alpha`` in direction i::

      Node(i, Node(i, x, y), z)  ->  Node(i, x, Node(i, y, z))

* ``beta`` with inner direction j and outer direction i, forward iff i < j::

      Node(i, Node(j, x, y), Node(j, x', y'))  ->  Node(j, Node(i, x, x'), Node(i, y, y'))

Directions are 1-based.  Boxes are tuples of half-open ``(lo, hi)`` pairs,
one per direction.  Positions are strings over ``"L"``/``"R"``, ``""`` is
the root.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .errors import CapacityError, MoveError, ValidationError

Box = tuple[tuple[int, int], ...]
Cell = tuple[int, ...]

DEFAULT_MAX_TREES = 10**6


@dataclass(frozen=True)
class GluingDiagram:
    extents: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.extents:
            raise ValidationError("a gluing diagram needs at least one direction")
        for p in self.extents:
            if not isinstance(p, int) or isinstance(p, bool) or p < 1:
                raise ValidationError(f"extents must be positive integers, got {self.extents!r}")

    @property
    def dim(self) -> int:
        return len(self.extents)

    @property
    def directions(self) -> tuple[int, ...]:
        return tuple(range(1, self.dim + 1))

    @property
    def n_cells(self) -> int:
        n = 1
        for p in self.extents:
            n *= p
        return n

    @property
    def box(self) -> Box:
        return tuple((0, p) for p in self.extents)

    def cells(self) -> list[Cell]:
        return list(product(*(range(p) for p in self.extents)))

    def label(self) -> str:
        return "x".join(str(p) for p in self.extents)


def make_grid(extents: Sequence[int]) -> GluingDiagram:
    if isinstance(extents, (str, bytes)) or not isinstance(extents, Sequence):
        raise ValidationError(f"extents must be a list of integers, got {extents!r}")
    return GluingDiagram(tuple(extents))


def parse_grid(text: str) -> GluingDiagram:
    """``"2x3"`` -> grid with extents (2, 3)."""
    try:
        extents = [int(part) for part in text.lower().split("x")]
    except ValueError as exc:
        raise ValidationError(f"cannot parse grid {text!r}") from exc
    return make_grid(extents)


def cell_box(cell: Cell) -> Box:
    return tuple((c, c + 1) for c in cell)


def box_shape(box: Box) -> tuple[int, ...]:
    return tuple(hi - lo for lo, hi in box)


def box_contains(outer: Box, inner: Box) -> bool:
    return all(olo <= ilo and ihi <= ohi for (olo, ohi), (ilo, ihi) in zip(outer, inner))


# -- trees -----------------------------------------------------------------


class Tree:
    __slots__ = ()
    box: Box

    def leaves(self) -> Iterator[Cell]:
        raise NotImplementedError

    @property
    def size(self) -> int:
        raise NotImplementedError


class Leaf(Tree):
    __slots__ = ("cell", "box", "_hash")

    def __init__(self, cell: Sequence[int]):
        cell = tuple(cell)
        object.__setattr__(self, "cell", cell)
        object.__setattr__(self, "box", cell_box(cell))
        object.__setattr__(self, "_hash", hash(("leaf", cell)))

    def __setattr__(self, name, value):
        raise AttributeError("trees are immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, Leaf) and self.cell == other.cell

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "c" + "".join(str(c) for c in self.cell) if all(c < 10 for c in self.cell) else f"Leaf{self.cell}"

    def leaves(self) -> Iterator[Cell]:
        yield self.cell

    @property
    def size(self) -> int:
        return 1


class Node(Tree):
    __slots__ = ("dir", "left", "right", "box", "_hash", "_size")

    def __init__(self, dir: int, left: Tree, right: Tree):
        if left.box and right.box and len(left.box) != len(right.box):
            raise ValidationError("children of a node live in different dimensions")
        box = tuple((min(a[0], b[0]), max(a[1], b[1])) for a, b in zip(left.box, right.box))
        object.__setattr__(self, "dir", dir)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "_hash", hash((dir, left._hash, right._hash)))
        object.__setattr__(self, "_size", left.size + right.size)

    def __setattr__(self, name, value):
        raise AttributeError("trees are immutable")

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, Node)
            and self._hash == other._hash
            and self.dir == other.dir
            and self.left == other.left
            and self.right == other.right
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"({self.left!r} .{self.dir} {self.right!r})"

    def leaves(self) -> Iterator[Cell]:
        yield from self.left.leaves()
        yield from self.right.leaves()

    @property
    def size(self) -> int:
        return self._size


def subtree(tree: Tree, pos: str) -> Tree:
    for step in pos:
        if not isinstance(tree, Node):
            raise MoveError(f"position {pos!r} runs past a leaf")
        tree = tree.left if step == "L" else tree.right
    return tree


def replace_at(tree: Tree, pos: str, new: Tree) -> Tree:
    if not pos:
        return new
    if not isinstance(tree, Node):
        raise MoveError(f"position {pos!r} runs past a leaf")
    if pos[0] == "L":
        return Node(tree.dir, replace_at(tree.left, pos[1:], new), tree.right)
    return Node(tree.dir, tree.left, replace_at(tree.right, pos[1:], new))


def positions(tree: Tree, prefix: str = "") -> Iterator[str]:
    """Node positions in preorder (which is also lexicographic order)."""
    if isinstance(tree, Node):
        yield prefix
        yield from positions(tree.left, prefix + "L")
        yield from positions(tree.right, prefix + "R")


def position_of_box(tree: Tree, box: Box) -> str | None:
    pos = ""
    while True:
        if tree.box == box:
            return pos
        if not isinstance(tree, Node) or not box_contains(tree.box, box):
            return None
        if box_contains(tree.left.box, box):
            tree, pos = tree.left, pos + "L"
        elif box_contains(tree.right.box, box):
            tree, pos = tree.right, pos + "R"
        else:
            return None


# -- enumeration -------------------------------------------------------------


@lru_cache(maxsize=None)
def count_trees_of_shape(shape: tuple[int, ...]) -> int:
    """Number of guillotine trees on a box of the given shape."""
    if all(s == 1 for s in shape):
        return 1
    total = 0
    for d, s in enumerate(shape):
        for cut in range(1, s):
            lower = shape[:d] + (cut,) + shape[d + 1 :]
            upper = shape[:d] + (s - cut,) + shape[d + 1 :]
            total += count_trees_of_shape(lower) * count_trees_of_shape(upper)
    return total


def split_box(box: Box, d: int, cut: int) -> tuple[Box, Box]:
    """Split along 0-based axis ``d`` at absolute coordinate ``cut``."""
    lo, hi = box[d]
    return box[:d] + ((lo, cut),) + box[d + 1 :], box[:d] + ((cut, hi),) + box[d + 1 :]


def enumerate_trees(grid: GluingDiagram, max_trees: int = DEFAULT_MAX_TREES) -> list[Tree]:
    """All guillotine trees on ``grid``.

    Order: root direction ascending, then cut coordinate ascending, then the
    left subtree's order, then the right subtree's order.
    """
    total = count_trees_of_shape(grid.extents)
    if total > max_trees:
        raise CapacityError(f"grid {grid.label()} has {total} trees, cap is {max_trees}")
    memo: dict[Box, list[Tree]] = {}

    def trees(box: Box) -> list[Tree]:
        if box in memo:
            return memo[box]
        if all(hi - lo == 1 for lo, hi in box):
            out: list[Tree] = [Leaf(tuple(lo for lo, _ in box))]
        else:
            out = []
            for d, (lo, hi) in enumerate(box):
                for cut in range(lo + 1, hi):
                    lower, upper = split_box(box, d, cut)
                    for left in trees(lower):
                        for right in trees(upper):
                            out.append(Node(d + 1, left, right))
        memo[box] = out
        return out

    return list(trees(grid.box))


def normal_form(grid_or_box: GluingDiagram | Box) -> Tree:
    """Largest direction outermost, right-nested inside every direction."""
    box = grid_or_box.box if isinstance(grid_or_box, GluingDiagram) else grid_or_box
    for d in reversed(range(len(box))):
        lo, hi = box[d]
        if hi - lo > 1:
            first, rest = split_box(box, d, lo + 1)
            return Node(d + 1, normal_form(first), normal_form(rest))
    return Leaf(tuple(lo for lo, _ in box))


# -- validation --------------------------------------------------------------


@dataclass
class ValidationReport:
    ok: bool
    problems: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "problems": list(self.problems)}


def _union_is_box(a: Box, b: Box, d: int) -> bool:
    for e, ((alo, ahi), (blo, bhi)) in enumerate(zip(a, b)):
        if e == d:
            if ahi != blo:
                return False
        elif (alo, ahi) != (blo, bhi):
            return False
    return True


def validate_tree(tree: Tree, grid: GluingDiagram) -> ValidationReport:
    problems: list[str] = []
    k = grid.dim

    def walk(t: Tree, pos: str) -> None:
        if isinstance(t, Leaf):
            if len(t.cell) != k:
                problems.append(f"leaf at {pos or 'root'} has {len(t.cell)} coordinates, grid has {k}")
            elif not all(0 <= c < p for c, p in zip(t.cell, grid.extents)):
                problems.append(f"leaf {t.cell} at {pos or 'root'} lies outside the grid")
            return
        assert isinstance(t, Node)
        if not 1 <= t.dir <= k:
            problems.append(f"node at {pos or 'root'} has direction {t.dir} outside 1..{k}")
        elif not _union_is_box(t.left.box, t.right.box, t.dir - 1):
            problems.append(
                f"node at {pos or 'root'} merges {t.left.box} and {t.right.box}, "
                f"which are not adjacent along direction {t.dir} with the left one lower"
            )
        walk(t.left, pos + "L")
        walk(t.right, pos + "R")

    walk(tree, "")
    seen: dict[Cell, int] = {}
    for cell in tree.leaves():
        seen[cell] = seen.get(cell, 0) + 1
    for cell, n in sorted(seen.items()):
        if n > 1:
            problems.append(f"cell {cell} appears {n} times")
    missing = [c for c in grid.cells() if c not in seen]
    if missing:
        problems.append(f"cells {missing[:5]}{'...' if len(missing) > 5 else ''} are not covered")
    return ValidationReport(ok=not problems, problems=problems)


# -- moves --------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Move:
    """A forward rewrite at ``position``.

    ``dirs`` is ``(i,)`` for alpha and ``(inner, outer)`` for beta, where a
    canonical (forward) beta always has ``outer < inner``.
    """

    position: str
    kind: str
    dirs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind == "alpha":
            if len(self.dirs) != 1:
                raise ValidationError("alpha takes exactly one direction")
        elif self.kind == "beta":
            if len(self.dirs) != 2 or not self.dirs[1] < self.dirs[0]:
                raise ValidationError("a canonical beta needs dirs (inner, outer) with outer < inner")
        else:
            raise ValidationError(f"unknown move kind {self.kind!r}")
        if any(ch not in "LR" for ch in self.position):
            raise ValidationError(f"bad position {self.position!r}")

    def footprint(self) -> frozenset[str]:
        p = self.position
        if self.kind == "alpha":
            return frozenset((p, p + "L"))
        return frozenset((p, p + "L", p + "R"))

    def label(self) -> str:
        where = self.position or "root"
        if self.kind == "alpha":
            return f"alpha{self.dirs[0]}@{where}"
        return f"beta{self.dirs[0]}{self.dirs[1]}@{where}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "position": self.position, "dirs": list(self.dirs)}

    @classmethod
    def from_json(cls, data: dict) -> "Move":
        return cls(position=data["position"], kind=data["kind"], dirs=tuple(data["dirs"]))


def _rewrite(sub: Tree, move: Move, inverse: bool) -> Tree:
    """Rewrite the subtree where ``move`` is anchored."""
    if move.kind == "alpha":
        (i,) = move.dirs
        if not inverse:
            if isinstance(sub, Node) and sub.dir == i and isinstance(sub.left, Node) and sub.left.dir == i:
                x, y, z = sub.left.left, sub.left.right, sub.right
                return Node(i, x, Node(i, y, z))
        else:
            if isinstance(sub, Node) and sub.dir == i and isinstance(sub.right, Node) and sub.right.dir == i:
                x, y, z = sub.left, sub.right.left, sub.right.right
                return Node(i, Node(i, x, y), z)
        raise MoveError(f"{move.label()} ({'inverse' if inverse else 'forward'}) does not match {sub!r}")
    inner, outer = move.dirs
    src, dst = (outer, inner) if not inverse else (inner, outer)
    # Node(src, Node(dst, x, y), Node(dst, x2, y2)) -> Node(dst, Node(src, x, x2), Node(src, y, y2))
    if (
        isinstance(sub, Node)
        and sub.dir == src
        and isinstance(sub.left, Node)
        and isinstance(sub.right, Node)
        and sub.left.dir == dst
        and sub.right.dir == dst
    ):
        x, y = sub.left.left, sub.left.right
        x2, y2 = sub.right.left, sub.right.right
        if x.box[dst - 1] == x2.box[dst - 1]:
            return Node(dst, Node(src, x, x2), Node(src, y, y2))
    raise MoveError(f"{move.label()} ({'inverse' if inverse else 'forward'}) does not match {sub!r}")


def apply_move(tree: Tree, move: Move, inverse: bool = False) -> Tree:
    sub = subtree(tree, move.position)
    return replace_at(tree, move.position, _rewrite(sub, move, inverse))


def forward_moves_at(sub: Tree, pos: str) -> list[Move]:
    """Forward moves anchored at the root of ``sub`` (which sits at ``pos``)."""
    out: list[Move] = []
    if not isinstance(sub, Node):
        return out
    i = sub.dir
    if isinstance(sub.left, Node) and sub.left.dir == i:
        out.append(Move(pos, "alpha", (i,)))
    left, right = sub.left, sub.right
    if (
        isinstance(left, Node)
        and isinstance(right, Node)
        and left.dir == right.dir
        and left.dir > i
        and left.left.box[left.dir - 1] == right.left.box[left.dir - 1]
    ):
        out.append(Move(pos, "beta", (left.dir, i)))
    return out


def applicable_moves(tree: Tree) -> list[Move]:
    """Every forward move on ``tree``, ordered by position then kind."""
    out: list[Move] = []

    def walk(t: Tree, pos: str) -> None:
        if isinstance(t, Node):
            out.extend(forward_moves_at(t, pos))
            walk(t.left, pos + "L")
            walk(t.right, pos + "R")

    walk(tree, "")
    out.sort()
    return out


def is_normal_form(tree: Tree) -> bool:
    return not applicable_moves(tree)


def transport(move: Move, before: Tree, after: Tree) -> Move:
    """Re-anchor ``move`` (valid on ``before``) on ``after`` by the box it acts on.

    Only meaningful when the rewrite that turned ``before`` into ``after``
    did not touch the footprint of ``move``.
    """
    box = subtree(before, move.position).box
    pos = position_of_box(after, box)
    if pos is None:
        raise MoveError(f"{move.label()} has no anchor after the rewrite")
    return Move(pos, move.kind, move.dirs)


# -- paths ------------------------------------------------------------------------


Step = tuple[Move, bool]  # (move, inverse?)


@dataclass(frozen=True)
class MovePath:
    start: Tree
    steps: tuple[Step, ...] = ()

    def trees(self) -> list[Tree]:
        out = [self.start]
        t = self.start
        for move, inverse in self.steps:
            t = apply_move(t, move, inverse)
            out.append(t)
        return out

    @property
    def end(self) -> Tree:
        return self.trees()[-1]

    def __len__(self) -> int:
        return len(self.steps)

    def inverted(self) -> "MovePath":
        return MovePath(self.end, tuple((m, not inv) for m, inv in reversed(self.steps)))

    def then(self, other: "MovePath") -> "MovePath":
        if self.end != other.start:
            raise MoveError("paths do not meet")
        return MovePath(self.start, self.steps + other.steps)

    def is_directed(self) -> bool:
        return all(not inv for _, inv in self.steps)

    def labels(self) -> list[str]:
        return [m.label() + ("^-1" if inv else "") for m, inv in self.steps]

    def to_json(self) -> dict:
        return {
            "start": tree_to_json(self.start),
            "steps": [dict(m.to_json(), inverse=inv) for m, inv in self.steps],
        }


# -- JSON ---------------------------------------------------------------------------


def grid_to_json(grid: GluingDiagram) -> dict:
    return {"extents": list(grid.extents)}


def grid_from_json(data: dict) -> GluingDiagram:
    if not isinstance(data, dict) or "extents" not in data:
        raise ValidationError("grid JSON needs an 'extents' list")
    return make_grid(data["extents"])


def tree_to_json(tree: Tree) -> dict:
    if isinstance(tree, Leaf):
        return {"cell": list(tree.cell)}
    assert isinstance(tree, Node)
    return {"dir": tree.dir, "left": tree_to_json(tree.left), "right": tree_to_json(tree.right)}


def tree_from_json(data: dict) -> Tree:
    if not isinstance(data, dict):
        raise ValidationError(f"tree JSON must be an object, got {data!r}")
    if "cell" in data:
        return Leaf(tuple(int(c) for c in data["cell"]))
    try:
        return Node(int(data["dir"]), tree_from_json(data["left"]), tree_from_json(data["right"]))
    except KeyError as exc:
        raise ValidationError(f"tree node is missing {exc.args[0]!r}") from exc
