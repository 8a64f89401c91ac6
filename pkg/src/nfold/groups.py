"""Finite groups as verified Cayley tables."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Callable, Hashable, Sequence

from .errors import ValidationError


@dataclass(frozen=True)
class GroupTable:
    name: str
    elements: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise ValidationError(f"{name!r} is not an element of {self.name}") from None

    def conjugacy_classes(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        out = []
        for a in range(self.order):
            if a in seen:
                continue
            cls = frozenset(self.mul(self.mul(g, a), self.inv(g)) for g in range(self.order))
            seen |= cls
            out.append(cls)
        return out

    def generators(self) -> list[int]:
        """A small generating set, greedily chosen in element order."""
        gens: list[int] = []
        span = {self.identity}
        for a in range(self.order):
            if a not in span:
                gens.append(a)
                span = self._closure(gens)
        return gens

    def _closure(self, gens: Sequence[int]) -> set[int]:
        span = {self.identity}
        frontier = [self.identity]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in span:
                    span.add(y)
                    frontier.append(y)
        return span

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "elements": list(self.elements),
            "table": [[self.elements[c] for c in row] for row in self.table],
        }


def from_table(name: str, elements: Sequence[str], table: Sequence[Sequence[str]]) -> GroupTable:
    """Verify a Cayley table given by element names and build the group."""
    elements = tuple(str(e) for e in elements)
    n = len(elements)
    if n == 0:
        raise ValidationError("a group needs at least one element")
    if len(set(elements)) != n:
        raise ValidationError("element names must be distinct")
    pos = {e: i for i, e in enumerate(elements)}
    if len(table) != n or any(len(row) != n for row in table):
        raise ValidationError(f"table must be {n} x {n}")
    try:
        T = tuple(tuple(pos[str(c)] for c in row) for row in table)
    except KeyError as exc:
        raise ValidationError(f"table entry {exc.args[0]!r} is not an element") from None
    ids = [e for e in range(n) if all(T[e][x] == x and T[x][e] == x for x in range(n))]
    if not ids:
        raise ValidationError("table has no identity element")
    e = ids[0]
    inverse = []
    for a in range(n):
        inv = [b for b in range(n) if T[a][b] == e and T[b][a] == e]
        if not inv:
            raise ValidationError(f"element {elements[a]!r} has no inverse")
        inverse.append(inv[0])
    for a, b, c in product(range(n), repeat=3):
        if T[T[a][b]][c] != T[a][T[b][c]]:
            raise ValidationError(
                f"associativity fails on ({elements[a]}, {elements[b]}, {elements[c]})"
            )
    return GroupTable(name, elements, T, e, tuple(inverse))


def from_function(name: str, items: Sequence[Hashable], mul: Callable, label: Callable[[Hashable], str] = str) -> GroupTable:
    items = list(items)
    names = [label(x) for x in items]
    pos = {x: i for i, x in enumerate(items)}
    table = [[names[pos[mul(a, b)]] for b in items] for a in items]
    return from_table(name, names, table)


def _cyclic(n: int) -> GroupTable:
    return from_function(f"Z{n}", range(n), lambda a, b: (a + b) % n)


def _perm_group(name: str, gens: list[tuple[int, ...]]) -> GroupTable:
    n = len(gens[0])
    ident = tuple(range(n))
    compose = lambda p, q: tuple(p[q[i]] for i in range(n))  # noqa: E731
    span = {ident}
    frontier = [ident]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = compose(x, g)
            if y not in span:
                span.add(y)
                frontier.append(y)
    items = sorted(span)
    return from_function(name, items, compose, lambda p: "".join(map(str, p)))


def _quaternion() -> GroupTable:
    # (sign, unit) with unit in 1, i, j, k
    unit_mul = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }

    def mul(a, b):
        s, u = unit_mul[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    items = [(s, u) for u in "1ijk" for s in (1, -1)]
    return from_function("Q8", items, mul, lambda x: ("" if x[0] == 1 else "-") + x[1])


def _product(name: str, factors: list[GroupTable]) -> GroupTable:
    items = list(product(*(range(G.order) for G in factors)))

    def mul(a, b):
        return tuple(G.mul(x, y) for G, x, y in zip(factors, a, b))

    def label(a) -> str:
        return "(" + ",".join(G.elements[x] for G, x in zip(factors, a)) + ")"

    return from_function(name, items, mul, label)


BUILTIN_NAMES = (
    "Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "S3", "Z7",
    "Z8", "Z2xZ4", "Z2xZ2xZ2", "D4", "Q8",
)


def builtin_group(name: str) -> GroupTable:
    name = name.strip()
    if name == "S3":
        return _perm_group("S3", [(1, 0, 2), (1, 2, 0)])
    if name == "D4":
        return _perm_group("D4", [(1, 2, 3, 0), (3, 2, 1, 0)])
    if name == "Q8":
        return _quaternion()
    parts = name.split("x")
    if all(re.fullmatch(r"Z[1-9][0-9]*", p) for p in parts):
        factors = [_cyclic(int(p[1:])) for p in parts]
        return factors[0] if len(factors) == 1 else _product(name, factors)
    raise ValidationError(f"unknown builtin group {name!r}")


def builtin_groups(max_order: int = 8) -> list[GroupTable]:
    groups = [builtin_group(n) for n in BUILTIN_NAMES]
    return [G for G in groups if G.order <= max_order]


def load_group(spec) -> GroupTable:
    """A builtin name (``Z<n>``, products like ``Z2xZ4``, ``S3``, ``D4``, ``Q8``) or a table dict."""
    if isinstance(spec, GroupTable):
        return spec
    if isinstance(spec, str):
        return builtin_group(spec)
    if isinstance(spec, dict):
        try:
            return from_table(spec.get("name", "G"), spec["elements"], spec["table"])
        except KeyError as exc:
            raise ValidationError(f"group JSON is missing {exc.args[0]!r}") from None
    raise ValidationError(f"cannot load a group from {spec!r}")
