"""
catalog/spaces.py

Finite topological spaces and finite preorders (finite quasi-uniform spaces
represented by their least entourage), with the conversions between them.

Points are indices 0..n-1 with string labels; subsets are int bitmasks.
The specialization convention comes from config.SPECIALIZATION:

    "up"    x R y  iff  y lies in every open set containing x
            R[A] is the smallest open superset, opens are the R-fixed sets
    "down"  R[A] is the closure of A, closed sets are the R-fixed sets
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

import networkx as nx
import numpy as np

from config import MAX_ENUM_POINTS, SPECIALIZATION
from engine.fincat import InputError, bits, full_mask, mask_of


def default_labels(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def _compress(mask: int, keep: int) -> int:
    """Re-index the bits of mask that lie in keep onto 0..popcount(keep)-1."""
    out = 0
    for k, i in enumerate(bits(keep)):
        if mask >> i & 1:
            out |= 1 << k
    return out


# ---------------------------------------------------------------------------
# Preorders
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinPreorder:
    carrier: tuple[str, ...]
    rows: tuple[int, ...]           # rows[x] = R[x] = {y : x R y}
    name: str = field(default="", compare=False)

    @property
    def size(self) -> int:
        return len(self.carrier)

    @property
    def key(self) -> tuple:
        return (self.carrier, self.rows)

    @classmethod
    def generated_by(cls, carrier: Sequence[str], pairs: Iterable[tuple[int, int]],
                     name: str = "") -> "FinPreorder":
        """Reflexive transitive closure of the given pairs."""
        n = len(carrier)
        g = nx.DiGraph()
        g.add_nodes_from(range(n))
        g.add_edges_from(pairs)
        closure = nx.transitive_closure(g, reflexive=True)
        rows = tuple(mask_of(closure.successors(x)) for x in range(n))
        return cls(tuple(carrier), rows, name)

    @classmethod
    def discrete(cls, n: int, name: str = "") -> "FinPreorder":
        return cls(default_labels(n), tuple(1 << x for x in range(n)), name)

    @classmethod
    def total(cls, n: int, name: str = "") -> "FinPreorder":
        return cls(default_labels(n), tuple(full_mask(n) for _ in range(n)), name)

    def holds(self, x: int, y: int) -> bool:
        return bool(self.rows[x] >> y & 1)

    def check(self) -> None:
        n = self.size
        if len(self.rows) != n or len(set(self.carrier)) != n:
            raise InputError(f"preorder {self.name or self.carrier}: rows and carrier disagree")
        for x in range(n):
            if self.rows[x] < 0 or self.rows[x] >> n:
                raise InputError(f"preorder {self.name}: row {x} points outside the carrier")
            if not self.holds(x, x):
                raise InputError(f"preorder {self.name}: not reflexive at {self.carrier[x]}")
            if self.image(self.rows[x]) != self.rows[x]:
                raise InputError(f"preorder {self.name}: not transitive at {self.carrier[x]}")

    def image(self, mask: int) -> int:
        """R[A]."""
        out = 0
        for x in bits(mask):
            out |= self.rows[x]
        return out

    def image_table(self) -> np.ndarray:
        return np.array([self.image(m) for m in range(1 << self.size)], dtype=np.int64)

    def inverse(self) -> "FinPreorder":
        n = self.size
        rows = tuple(mask_of(y for y in range(n) if self.holds(y, x)) for x in range(n))
        return FinPreorder(self.carrier, rows, f"{self.name}^-1" if self.name else "")

    def symmetric_part(self) -> "FinPreorder":
        """R ∩ R⁻¹."""
        inv = self.inverse()
        rows = tuple(a & b for a, b in zip(self.rows, inv.rows))
        return FinPreorder(self.carrier, rows, f"sym({self.name})" if self.name else "")

    @property
    def is_symmetric(self) -> bool:
        return self.rows == self.inverse().rows

    def preserved_by(self, table: Sequence[int], target: "FinPreorder") -> bool:
        """(x, y) in R implies (f x, f y) in R'."""
        return all(
            target.rows[table[x]] >> table[y] & 1
            for x in range(self.size) for y in bits(self.rows[x])
        )

    def matrix(self) -> np.ndarray:
        n = self.size
        return np.array([[self.holds(x, y) for y in range(n)] for x in range(n)], dtype=bool)

    def digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.size))
        g.add_edges_from((x, y) for x in range(self.size) for y in bits(self.rows[x]))
        return g

    def alexandrov(self, convention: str = SPECIALIZATION, name: str = "") -> "FinTopSpace":
        """The topology whose specialization preorder is this one."""
        fixed = [m for m in range(1 << self.size) if self.image(m) == m]
        full = full_mask(self.size)
        opens = fixed if convention == "up" else [full ^ m for m in fixed]
        return FinTopSpace(self.carrier, frozenset(opens), name)


# ---------------------------------------------------------------------------
# Spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinTopSpace:
    carrier: tuple[str, ...]
    opens: frozenset[int]
    name: str = field(default="", compare=False)

    @property
    def size(self) -> int:
        return len(self.carrier)

    @property
    def key(self) -> tuple:
        return (self.carrier, tuple(sorted(self.opens)))

    @classmethod
    def discrete(cls, n: int, name: str = "") -> "FinTopSpace":
        return cls(default_labels(n), frozenset(range(1 << n)), name)

    @classmethod
    def indiscrete(cls, n: int, name: str = "") -> "FinTopSpace":
        return cls(default_labels(n), frozenset({0, full_mask(n)}), name)

    @classmethod
    def sierpinski(cls, name: str = "S") -> "FinTopSpace":
        return cls(default_labels(2), frozenset({0, 0b10, 0b11}), name)

    def check(self) -> None:
        n, full = self.size, full_mask(self.size)
        if len(set(self.carrier)) != n:
            raise InputError(f"space {self.name}: repeated carrier label")
        if 0 not in self.opens or full not in self.opens:
            raise InputError(f"space {self.name}: opens must contain the empty and the full set")
        for o in self.opens:
            if o < 0 or o >> n:
                raise InputError(f"space {self.name}: open {o} does not fit the carrier")
        for a in self.opens:
            for b in self.opens:
                if a | b not in self.opens or a & b not in self.opens:
                    raise InputError(f"space {self.name}: opens not closed under union and intersection")

    @cached_property
    def closed(self) -> frozenset[int]:
        full = full_mask(self.size)
        return frozenset(full ^ o for o in self.opens)

    def closure(self, mask: int) -> int:
        """Smallest closed superset."""
        out = full_mask(self.size)
        for c in self.closed:
            if mask & ~c == 0:
                out &= c
        return out

    def smallest_open(self, mask: int) -> int:
        out = full_mask(self.size)
        for o in self.opens:
            if mask & ~o == 0:
                out &= o
        return out

    def closure_table(self) -> np.ndarray:
        return np.array([self.closure(m) for m in range(1 << self.size)], dtype=np.int64)

    def specialization(self, convention: str = SPECIALIZATION) -> FinPreorder:
        point = self.smallest_open if convention == "up" else self.closure
        rows = tuple(point(1 << x) for x in range(self.size))
        return FinPreorder(self.carrier, rows, f"R({self.name})" if self.name else "")

    def indistinguishable_classes(self) -> list[list[int]]:
        """Classes of points with equal closures, each sorted, ordered by least point."""
        g = self.specialization("up").digraph()
        classes = [sorted(c) for c in nx.strongly_connected_components(g)]
        return sorted(classes, key=lambda c: c[0])

    @property
    def is_t0(self) -> bool:
        return all(len(c) == 1 for c in self.indistinguishable_classes())

    def quotient(self) -> tuple["FinTopSpace", tuple[int, ...]]:
        """The T0 quotient and the quotient map as a table."""
        classes = self.indistinguishable_classes()
        table = [0] * self.size
        for k, cls in enumerate(classes):
            for x in cls:
                table[x] = k
        opens = set()
        for o in self.opens:
            opens.add(mask_of(table[x] for x in bits(o)))
        labels = tuple("|".join(self.carrier[x] for x in cls) for cls in classes)
        name = self.name if len(classes) == self.size else (f"{self.name}/~" if self.name else "")
        return FinTopSpace(labels, frozenset(opens), name), tuple(table)

    def subspace(self, keep: int, name: str = "") -> "FinTopSpace":
        labels = tuple(self.carrier[x] for x in bits(keep))
        opens = frozenset(_compress(o & keep, keep) for o in self.opens)
        return FinTopSpace(labels, opens, name or (f"{self.name}[{','.join(labels)}]" if self.name else ""))

    def initial_opens(self, table: Sequence[int], target: "FinTopSpace") -> frozenset[int]:
        """Opens of the coarsest topology making `table` continuous into target."""
        return frozenset(
            mask_of(x for x in range(self.size) if o >> table[x] & 1) for o in target.opens
        )

    def is_continuous(self, table: Sequence[int], target: "FinTopSpace") -> bool:
        return self.initial_opens(table, target) <= self.opens


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def _require_small(n: int) -> None:
    if n < 0 or n > MAX_ENUM_POINTS:
        raise InputError(f"enumeration of spaces is limited to {MAX_ENUM_POINTS} points, asked for {n}")


def enumerate_topologies(n: int) -> Iterator[FinTopSpace]:
    """Every topology on an n-point carrier, by direct scan of opens families."""
    _require_small(n)
    full = full_mask(n)
    middle = list(range(1, full))
    labels = default_labels(n)
    for k, choice in enumerate(product((False, True), repeat=len(middle))):
        opens = {0, full} | {m for m, keep in zip(middle, choice) if keep}
        if all(a | b in opens and a & b in opens for a in opens for b in opens):
            yield FinTopSpace(labels, frozenset(opens), f"T{n}.{k}")


def enumerate_preorders(n: int) -> Iterator[FinPreorder]:
    """Every preorder on an n-point carrier."""
    _require_small(n)
    off = [(x, y) for x in range(n) for y in range(n) if x != y]
    labels = default_labels(n)
    for k, choice in enumerate(product((False, True), repeat=len(off))):
        rows = [1 << x for x in range(n)]
        for (x, y), keep in zip(off, choice):
            if keep:
                rows[x] |= 1 << y
        p = FinPreorder(labels, tuple(rows), f"R{n}.{k}")
        if all(p.image(p.rows[x]) == p.rows[x] for x in range(n)):
            yield p
