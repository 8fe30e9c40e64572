"""Finite simplicial complexes, cell orders, and incidence matrices.

A simplex is a strictly increasing tuple of vertex ids; the complex stores
the full face closure sorted by (dimension, lexicographic), which is the
canonical "topological" order: every face precedes its cofaces.

Cell orders come with two verified properties:

* face compatible: a cell never precedes one of its faces,
* stage compatible: filtration stages are nondecreasing along the order.

Orders are repaired into stage compatibility with the left-shift loop: find
the first offender, swap it leftwards past its predecessor until it no longer
offends, repeat.  The swap can never break face compatibility when the
filtration is monotone under the face relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import (
    EmptyInput,
    InvalidVertexId,
    NonMonotoneFiltration,
    OrderViolatesConditionA,
)

Simplex = tuple[int, ...]


@dataclass(frozen=True)
class SimplicialComplex:
    """Face-closed set of simplices over vertices ``0..vertex_count-1``."""

    vertex_count: int
    simplices: tuple[Simplex, ...]
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._index.update({s: i for i, s in enumerate(self.simplices)})

    def __len__(self) -> int:
        return len(self.simplices)

    def index(self, simplex: Simplex) -> int:
        return self._index[simplex]

    def contains(self, simplex: Simplex) -> bool:
        return simplex in self._index

    def dim(self, sid: int) -> int:
        return len(self.simplices[sid]) - 1

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def edges(self) -> list[Simplex]:
        return [s for s in self.simplices if len(s) == 2]

    def simplices_of_dim(self, d: int) -> list[int]:
        return [i for i, s in enumerate(self.simplices) if len(s) == d + 1]

    def facets(self, sid: int) -> Iterator[int]:
        """Ids of the codimension-1 faces of ``sid``."""
        s = self.simplices[sid]
        if len(s) == 1:
            return
        for drop in range(len(s)):
            yield self._index[s[:drop] + s[drop + 1 :]]

    def codim1_pairs(self) -> Iterator[tuple[int, int]]:
        """All (face id, coface id) pairs one dimension apart."""
        for j in range(len(self.simplices)):
            for i in self.facets(j):
                yield i, j


def _face_closure(simplices: Iterable[Simplex]) -> set[Simplex]:
    closed: set[Simplex] = set()
    for s in simplices:
        for k in range(1, len(s) + 1):
            closed.update(combinations(s, k))
    return closed


def build_complex(vertex_count: int, maximal_simplices: Iterable[Sequence[int]]) -> SimplicialComplex:
    """Face closure of the given simplices, plus every vertex as a 0-simplex."""
    canon: list[Simplex] = []
    for raw in maximal_simplices:
        if len(raw) == 0:
            raise EmptyInput("simplices must be nonempty vertex tuples")
        s = tuple(sorted(set(raw)))
        if len(s) != len(raw):
            raise InvalidVertexId(f"repeated vertex in simplex {tuple(raw)}")
        if s[0] < 0 or s[-1] >= vertex_count:
            raise InvalidVertexId(f"vertex out of range in simplex {s}")
        canon.append(s)
    closed = _face_closure(canon)
    closed.update((v,) for v in range(vertex_count))
    ordered = sorted(closed, key=lambda s: (len(s), s))
    return SimplicialComplex(vertex_count, tuple(ordered))


def star(sc: SimplicialComplex, v: int) -> set[int]:
    """Ids of every simplex containing ``v`` together with all their faces."""
    if not 0 <= v < sc.vertex_count:
        raise InvalidVertexId(f"no vertex {v}")
    out: set[int] = set()
    for i, s in enumerate(sc.simplices):
        if v in s:
            out.add(i)
            for k in range(1, len(s)):
                for face in combinations(s, k):
                    out.add(sc.index(face))
    return out


@dataclass(frozen=True)
class CellOrder:
    """A permutation of cell indices: ``permutation[p]`` is the cell at position p.

    The flags record properties that were actually checked, never assumed.
    """

    permutation: tuple[int, ...]
    face_compatible: bool = False
    stage_compatible: bool = False

    def __len__(self) -> int:
        return len(self.permutation)

    def positions(self) -> dict[int, int]:
        return {c: p for p, c in enumerate(self.permutation)}


def check_face_compatible(face_pairs: Iterable[tuple[int, int]], permutation: Sequence[int]) -> bool:
    pos = {c: p for p, c in enumerate(permutation)}
    return all(pos[i] < pos[j] for i, j in face_pairs)


def check_stage_compatible(permutation: Sequence[int], stages: Sequence[int]) -> bool:
    along = [stages[c] for c in permutation]
    return all(a <= b for a, b in zip(along, along[1:]))


def topological_order(sc: SimplicialComplex) -> CellOrder:
    """Identity order over the stored (dimension, lex) simplex list."""
    perm = tuple(range(len(sc.simplices)))
    ok = check_face_compatible(sc.codim1_pairs(), perm)
    return CellOrder(perm, face_compatible=ok)


def make_filtration_compatible(
    order: CellOrder,
    stages: Sequence[int],
    face_pairs: Iterable[tuple[int, int]],
) -> CellOrder:
    """Left-shift repair of ``order`` until stages are nondecreasing.

    ``stages`` is indexed by cell id.  ``face_pairs`` is the codimension-1
    face relation used to reject non-monotone filtrations up front and to
    re-verify face compatibility of the result.
    """
    pairs = list(face_pairs)
    for i, j in pairs:
        if stages[i] > stages[j]:
            raise NonMonotoneFiltration(f"face {i} at stage {stages[i]} after coface {j} at {stages[j]}")
    cells = list(order.permutation)
    p = 1
    while p < len(cells):
        if stages[cells[p]] < stages[cells[p - 1]]:
            q = p
            while q > 0 and stages[cells[q]] < stages[cells[q - 1]]:
                cells[q - 1], cells[q] = cells[q], cells[q - 1]
                q -= 1
        p += 1
    perm = tuple(cells)
    return CellOrder(
        perm,
        face_compatible=check_face_compatible(pairs, perm),
        stage_compatible=check_stage_compatible(perm, stages),
    )


@dataclass(frozen=True)
class IncidenceMatrix:
    """Square GF(2) matrix over an ordered cell list.

    ``columns[j]`` holds the row indices of the codimension-1 faces of cell j.
    ``dims`` and ``labels`` describe the cells in row/column order.
    """

    dims: tuple[int, ...]
    labels: tuple[str, ...]
    columns: tuple[frozenset[int], ...]

    def __post_init__(self):
        assert len(self.dims) == len(self.labels) == len(self.columns)

    @property
    def size(self) -> int:
        return len(self.columns)

    def is_upper_triangular(self) -> bool:
        return all(max(col, default=-1) < j for j, col in enumerate(self.columns))

    def entry(self, i: int, j: int) -> int:
        return 1 if i in self.columns[j] else 0

    def boundary_squares_to_zero(self) -> bool:
        """Check that applying the boundary twice gives zero on every cell."""
        for col in self.columns:
            acc: set[int] = set()
            for i in col:
                acc ^= set(self.columns[i])
            if acc:
                return False
        return True


def incidence_matrix(sc: SimplicialComplex, order: CellOrder) -> IncidenceMatrix:
    """Codimension-1 incidence matrix of ``sc`` under ``order``."""
    if not check_face_compatible(sc.codim1_pairs(), order.permutation):
        raise OrderViolatesConditionA("order places a cell before one of its faces")
    pos = order.positions()
    dims = tuple(sc.dim(c) for c in order.permutation)
    labels = tuple(str(sc.simplices[c]) for c in order.permutation)
    cols = []
    for c in order.permutation:
        cols.append(frozenset(pos[f] for f in sc.facets(c)))
    return IncidenceMatrix(dims, labels, tuple(cols))
