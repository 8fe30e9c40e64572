"""Cochains, cocycles, and the circle-valued vertex map they induce.

All arithmetic is exact: values are ``fractions.Fraction`` and divisibility
by the period alpha is decided by exact division, never by a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .complexes import SimplicialComplex
from .errors import (
    DisconnectedWithSingleBase,
    MissingEdgeValue,
    MissingVertexValue,
)

Rational = Fraction


@dataclass(frozen=True)
class Cochain0:
    """One exact rational per vertex."""

    values: tuple[Fraction, ...]

    @classmethod
    def from_mapping(cls, m: Mapping[int, Fraction], vertex_count: int) -> "Cochain0":
        try:
            return cls(tuple(Fraction(m[v]) for v in range(vertex_count)))
        except KeyError as exc:
            raise MissingVertexValue(f"no value for vertex {exc.args[0]}") from exc

    def __call__(self, v: int) -> Fraction:
        return self.values[v]

    def negate(self) -> "Cochain0":
        return Cochain0(tuple(-x for x in self.values))

    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)


@dataclass(frozen=True)
class Cochain1:
    """Skew-symmetric edge values, stored on the increasing orientation."""

    items: tuple[tuple[tuple[int, int], Fraction], ...]

    @classmethod
    def from_mapping(cls, m: Mapping[tuple[int, int], Fraction]) -> "Cochain1":
        canon: dict[tuple[int, int], Fraction] = {}
        for (x, y), val in m.items():
            if x < y:
                canon[(x, y)] = Fraction(val)
            else:
                canon[(y, x)] = -Fraction(val)
        return cls(tuple(sorted(canon.items())))

    @property
    def _table(self) -> dict[tuple[int, int], Fraction]:
        return dict(self.items)

    def value(self, x: int, y: int) -> Fraction:
        """Value on the oriented edge (x, y); negated on the reverse."""
        table = self._table
        if x < y:
            key, sign = (x, y), 1
        else:
            key, sign = (y, x), -1
        if key not in table:
            raise MissingEdgeValue(f"no value on edge {key}")
        return sign * table[key]

    def __add__(self, other: "Cochain1") -> "Cochain1":
        a, b = self._table, other._table
        return Cochain1.from_mapping({e: a.get(e, Fraction(0)) + b.get(e, Fraction(0)) for e in set(a) | set(b)})

    def __sub__(self, other: "Cochain1") -> "Cochain1":
        a, b = self._table, other._table
        return Cochain1.from_mapping({e: a.get(e, Fraction(0)) - b.get(e, Fraction(0)) for e in set(a) | set(b)})


@dataclass(frozen=True)
class AlmostIntegralCocycle:
    """A 1-cocycle whose sums over integral cycles are multiples of alpha."""

    cocycle: Cochain1
    alpha: Fraction

    def __post_init__(self):
        assert self.alpha > 0


@dataclass(frozen=True)
class CircleMap:
    """Vertex angles on the circle of circumference alpha, in [0, alpha)."""

    angles: tuple[Fraction, ...]
    alpha: Fraction

    def __post_init__(self):
        assert self.alpha > 0
        assert all(0 <= a < self.alpha for a in self.angles)

    def angle(self, v: int) -> Fraction:
        return self.angles[v]


@dataclass(frozen=True)
class CocycleReport:
    """Triangles where the cocycle condition fails; empty means valid."""

    violations: tuple[tuple[int, int, int], ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def coboundary(f: Cochain0, sc: SimplicialComplex) -> Cochain1:
    """The 1-cocycle (x, y) -> f(y) - f(x) on the edges of ``sc``."""
    if len(f.values) < sc.vertex_count:
        raise MissingVertexValue("cochain does not cover every vertex")
    return Cochain1.from_mapping({(x, y): f(y) - f(x) for x, y in sc.edges()})


def validate_cocycle(c: Cochain1, sc: SimplicialComplex) -> CocycleReport:
    """List every 2-simplex where the values fail to add up."""
    bad = []
    for sid in sc.simplices_of_dim(2):
        x, y, z = sc.simplices[sid]
        if c.value(x, y) + c.value(y, z) != c.value(x, z):
            bad.append((x, y, z))
    # touching every edge forces MissingEdgeValue on incomplete cochains
    for x, y in sc.edges():
        c.value(x, y)
    return CocycleReport(tuple(bad))


def check_generic(c: Cochain1, sc: SimplicialComplex) -> tuple[bool, Optional[tuple[int, int, int]]]:
    """Is the local map at every vertex injective on its star?

    Returns (True, None) or (False, (x, y, z)) with value(x, y) == value(x, z);
    y == x encodes a collision with the zero value at the center.
    """
    neighbors: dict[int, list[int]] = {v: [] for v in range(sc.vertex_count)}
    for x, y in sc.edges():
        neighbors[x].append(y)
        neighbors[y].append(x)
    for x in range(sc.vertex_count):
        seen: dict[Fraction, int] = {Fraction(0): x}
        for y in sorted(neighbors[x]):
            val = c.value(x, y)
            if val in seen:
                return False, (x, seen[val], y)
            seen[val] = y
    return True, None


def _spanning_forest(sc: SimplicialComplex) -> tuple[list[int], dict[int, tuple[int, Fraction]], list[tuple[int, int]]]:
    """Roots, BFS tree (vertex -> (parent, edge value placeholder)), non-tree edges."""
    adj: dict[int, list[int]] = {v: [] for v in range(sc.vertex_count)}
    for x, y in sc.edges():
        adj[x].append(y)
        adj[y].append(x)
    visited = [False] * sc.vertex_count
    roots: list[int] = []
    parent: dict[int, tuple[int, Fraction]] = {}
    tree_edges: set[tuple[int, int]] = set()
    for r in range(sc.vertex_count):
        if visited[r]:
            continue
        roots.append(r)
        visited[r] = True
        queue = [r]
        while queue:
            x = queue.pop(0)
            for y in sorted(adj[x]):
                if not visited[y]:
                    visited[y] = True
                    parent[y] = (x, Fraction(0))
                    tree_edges.add((min(x, y), max(x, y)))
                    queue.append(y)
    nontree = [e for e in sc.edges() if e not in tree_edges]
    return roots, parent, nontree


def _integrate_over_forest(c: Cochain1, sc: SimplicialComplex) -> tuple[list[int], tuple[Fraction, ...]]:
    """Potential with value 0 at the least vertex of each component."""
    roots, parent, _ = _spanning_forest(sc)
    h = [Fraction(0)] * sc.vertex_count
    # parent map was built by BFS, so parents are always assigned before children
    order = sorted(parent, key=lambda v: _depth(parent, v))
    for y in order:
        x, _ = parent[y]
        h[y] = h[x] + c.value(x, y)
    return roots, tuple(h)


def _depth(parent: dict[int, tuple[int, Fraction]], v: int) -> int:
    d = 0
    while v in parent:
        v = parent[v][0]
        d += 1
    return d


def check_almost_integral(c: Cochain1, sc: SimplicialComplex, alpha: Fraction) -> bool:
    """Every fundamental cycle of a spanning forest sums to a multiple of alpha."""
    assert alpha > 0
    _, h = _integrate_over_forest(c, sc)
    for x, y in sc.edges():
        hole = c.value(x, y) - (h[y] - h[x])
        if (hole / alpha).denominator != 1:
            return False
    return True


def cohomologous(a: Cochain1, b: Cochain1, sc: SimplicialComplex) -> Optional[Cochain0]:
    """A 0-cochain f with a - b equal to the coboundary of f, if one exists.

    Integrates a - b over a spanning forest and verifies every edge; the
    result is normalized to 0 on the least vertex of each component.
    """
    d = a - b
    if not sc.edges():
        return Cochain0(tuple(Fraction(0) for _ in range(sc.vertex_count)))
    _, h = _integrate_over_forest(d, sc)
    for x, y in sc.edges():
        if h[y] - h[x] != d.value(x, y):
            return None
    return Cochain0(h)


def vertex_angles(c: AlmostIntegralCocycle, sc: SimplicialComplex, base: int) -> CircleMap:
    """Angles from path sums of the cocycle modulo alpha, zero at ``base``.

    Well defined because path differences are cycles and cycle sums lie in
    alpha * Z.  The complex must be connected for a single base point.
    """
    if not 0 <= base < sc.vertex_count:
        raise MissingVertexValue(f"no vertex {base}")
    roots, h = _integrate_over_forest(c.cocycle, sc)
    if len(roots) > 1:
        raise DisconnectedWithSingleBase(f"{len(roots)} components, one base point")
    shift = h[base]
    angles = tuple((x - shift) % c.alpha for x in h)
    return CircleMap(angles, c.alpha)


def angles_from_values(values: Iterable[Fraction], alpha: Fraction) -> CircleMap:
    return CircleMap(tuple(Fraction(v) % alpha for v in values), alpha)
