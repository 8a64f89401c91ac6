"""Exact linear algebra on sparse integer boundary columns.

Columns are dicts ``row -> nonzero int``.  Rank computation is
fraction-free: when a pivot does not divide the entry being cleared, both
vectors are scaled by cofactors instead of dividing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable

Vector = dict


def _axpy(v: Vector, a, p: Vector) -> None:
    """v += a * p, dropping zeros."""
    for r, x in p.items():
        y = v.get(r, 0) + a * x
        if y:
            v[r] = y
        else:
            v.pop(r, None)


def _content(v: Vector) -> int:
    g = 0
    for x in v.values():
        g = gcd(g, x)
        if g == 1:
            break
    return g


@dataclass
class Echelon:
    """Incremental column echelon form keyed by leading (largest) row.

    With ``track=True`` every pivot ``p`` remembers rational coefficients
    ``combo`` such that ``p == sum(combo[j] * column_j)``.
    """

    track: bool = False
    pivots: dict[int, Vector] = field(default_factory=dict)
    combos: dict[int, dict[int, Fraction]] = field(default_factory=dict)
    unimodular: bool = True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, column: Vector, index: int | None = None) -> bool:
        """Insert a column; return True if it raised the rank."""
        v = dict(column)
        combo: dict[int, Fraction] = {index: Fraction(1)} if self.track else {}
        while v:
            lead = max(v)
            p = self.pivots.get(lead)
            if p is None:
                break
            a, b = v[lead], p[lead]
            if a % b == 0:
                q = a // b
                _axpy(v, -q, p)
                if self.track:
                    _axpy(combo, -q, self.combos[lead])
            else:
                self.unimodular = False
                g = gcd(a, b)
                mv, mp = b // g, a // g
                for r in v:
                    v[r] *= mv
                _axpy(v, -mp, p)
                if self.track:
                    for j in combo:
                        combo[j] *= mv
                    _axpy(combo, -mp, self.combos[lead])
        if not v:
            return False
        g = _content(v)
        if g > 1:
            v = {r: x // g for r, x in v.items()}
            combo = {j: c / g for j, c in combo.items()}
        lead = max(v)
        if abs(v[lead]) != 1:
            self.unimodular = False
        self.pivots[lead] = v
        if self.track:
            self.combos[lead] = combo
        return True

    def solve(self, target: Vector) -> dict[int, Fraction] | None:
        """Coefficients ``c`` with ``target == sum c[j] * column_j``, or None."""
        if not self.track:
            raise RuntimeError("echelon was built without combination tracking")
        v: Vector = {r: Fraction(x) for r, x in target.items() if x}
        explained: dict[int, Fraction] = {}
        while v:
            lead = max(v)
            p = self.pivots.get(lead)
            if p is None:
                return None
            q = v[lead] / p[lead]
            _axpy(v, -q, p)
            _axpy(explained, q, self.combos[lead])
        return explained


def integer_rank(columns: Iterable[Vector]) -> tuple[int, bool]:
    """Rank of the column set and whether elimination stayed unimodular.

    Unimodular elimination (every pivot +-1, no scaling) leaves an echelon
    basis with unit leading entries, so the column lattice is saturated and
    the cokernel is torsion-free.
    """
    ech = Echelon()
    for col in columns:
        ech.add(col)
    return ech.rank, ech.unimodular


def apply_columns(columns: list[Vector], combo: dict) -> Vector:
    out: Vector = {}
    for j, c in combo.items():
        _axpy(out, c, columns[j])
    return out
