"""Cell complexes cut out of a simplicial complex by a linear vertex map.

For a simplex s, [s] is the convex hull of its vertex values.  Slicing at a
value t turns every simplex whose open interval contains t into a cell of one
dimension lower (its level slice); a vertex sitting exactly at t contributes
a 0-cell indexed before everything else, incident exactly to the sliced
2-simplices having it as a vertex.

Halfspace and band complexes keep, in addition, the simplices whose interval
meets the open side ranges; their incidences split into blocks:

* slice-to-slice, read off the base incidence matrix,
* slice-to-simplex, set when the slice comes from that very simplex, or when
  a vertex 0-cell meets an edge through it on the kept side,
* simplex-to-simplex, again read off the base matrix.

Every view carries per-cell filtration values: 0 on level cells, and the
distance from the cut to the far end of the simplex on kept simplices, so a
halfspace view is an ordinary sublevel filtration of the shifted map.

The constructions only need vertex values to be distinct along every edge
(equivalently within every simplex); they do not need global injectivity,
which matters when they run on an unrolled cyclic cover.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Sequence

from .cochains import Cochain0
from .complexes import (
    CellOrder,
    IncidenceMatrix,
    SimplicialComplex,
    check_face_compatible,
    check_stage_compatible,
    make_filtration_compatible,
)
from .errors import BadInterval, NonGenericMap, NotASubcomplex


@dataclass(frozen=True)
class ValueInterval:
    """Convex hull [lo, hi] of the vertex values of a simplex."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        assert self.lo <= self.hi

    def contains_interior(self, t: Fraction) -> bool:
        return self.lo < t < self.hi

    def meets_above(self, t: Fraction) -> bool:
        return self.hi > t

    def meets_below(self, t: Fraction) -> bool:
        return self.lo < t

    def meets_between(self, t1: Fraction, t2: Fraction) -> bool:
        return self.hi > t1 and self.lo < t2


Role = Literal["level", "vertex", "simplex"]


@dataclass(frozen=True)
class ViewCell:
    origin: int  # simplex id in the base complex
    dim: int  # derived dimension
    role: Role
    value: Fraction  # filtration value of the cell in the view


@dataclass(frozen=True)
class CellComplexView:
    """Ordered derived cells with their GF(2) incidence matrix.

    ``cells`` are already in final order; ``order`` records the permutation
    applied to the raw construction order, with verified flags.
    """

    cells: tuple[ViewCell, ...]
    matrix: IncidenceMatrix
    order: CellOrder

    def __post_init__(self):
        assert self.matrix.size == len(self.cells)
        assert self.matrix.is_upper_triangular()

    @property
    def dims(self) -> tuple[int, ...]:
        return self.matrix.dims

    def values(self) -> tuple[Fraction, ...]:
        return tuple(c.value for c in self.cells)

    def stage_indices(self) -> tuple[int, ...]:
        """Dense 0-based stage per cell, by increasing filtration value."""
        distinct = sorted(set(c.value for c in self.cells))
        lookup = {v: i for i, v in enumerate(distinct)}
        return tuple(lookup[c.value] for c in self.cells)

    def stage_values(self) -> tuple[Fraction, ...]:
        return tuple(sorted(set(c.value for c in self.cells)))


def value_interval(sc: SimplicialComplex, f: Cochain0, sid: int) -> ValueInterval:
    vals = [f(v) for v in sc.simplices[sid]]
    return ValueInterval(min(vals), max(vals))


def _check_edge_generic(sc: SimplicialComplex, f: Cochain0) -> None:
    for x, y in sc.edges():
        if f(x) == f(y):
            raise NonGenericMap(f"vertices {x} and {y} share value {f(x)}")


def _assemble(
    raw_cells: list[ViewCell],
    raw_columns: list[set[int]],
    repair_stages: bool,
) -> CellComplexView:
    """Order raw cells (optionally stage-repaired), reindex, verify, wrap."""
    n = len(raw_cells)
    dims = [c.dim for c in raw_cells]
    face_pairs = [(i, j) for j, col in enumerate(raw_columns) for i in col]
    values = sorted(set(c.value for c in raw_cells))
    stage_of = {v: i for i, v in enumerate(values)}
    stages = [stage_of[c.value] for c in raw_cells]
    if repair_stages:
        order = make_filtration_compatible(
            CellOrder(tuple(range(n)), face_compatible=True), stages, face_pairs
        )
    else:
        perm = tuple(range(n))
        order = CellOrder(
            perm,
            face_compatible=check_face_compatible(face_pairs, perm),
            stage_compatible=check_stage_compatible(perm, stages),
        )
    pos = order.positions()
    cells = tuple(raw_cells[c] for c in order.permutation)
    matrix = IncidenceMatrix(
        tuple(dims[c] for c in order.permutation),
        tuple(f"{raw_cells[c].role}:{raw_cells[c].origin}" for c in order.permutation),
        tuple(frozenset(pos[i] for i in raw_columns[c]) for c in order.permutation),
    )
    return CellComplexView(cells, matrix, order)


def _level_raw(
    sc: SimplicialComplex, f: Cochain0, t: Fraction
) -> tuple[list[ViewCell], list[set[int]]]:
    """Raw cells and columns of the slice at t, vertex 0-cells first."""
    at_level = sorted(v for v in range(sc.vertex_count) if f(v) == t)
    crossing = [
        sid
        for sid in range(len(sc.simplices))
        if value_interval(sc, f, sid).contains_interior(t)
    ]
    cells: list[ViewCell] = []
    index: dict[tuple[str, int], int] = {}
    for v in at_level:
        index[("vertex", v)] = len(cells)
        cells.append(ViewCell(sc.index((v,)), 0, "vertex", Fraction(0)))
    for sid in crossing:
        index[("level", sid)] = len(cells)
        cells.append(ViewCell(sid, sc.dim(sid) - 1, "level", Fraction(0)))
    columns: list[set[int]] = [set() for _ in cells]
    crossing_set = set(crossing)
    for sid in crossing:
        j = index[("level", sid)]
        for face in sc.facets(sid):
            if face in crossing_set:
                columns[j].add(index[("level", face)])
        if sc.dim(sid) == 2:
            for v in sc.simplices[sid]:
                if f(v) == t:
                    columns[j].add(index[("vertex", v)])
    return cells, columns


def level_cell_complex(sc: SimplicialComplex, f: Cochain0, t: Fraction) -> CellComplexView:
    """The slice of the complex at value t."""
    _check_edge_generic(sc, f)
    cells, columns = _level_raw(sc, f, Fraction(t))
    return _assemble(cells, columns, repair_stages=False)


def _halfspace_raw(
    sc: SimplicialComplex, f: Cochain0, t: Fraction, side: Literal["up", "down"]
) -> tuple[list[ViewCell], list[set[int]]]:
    cells, columns = _level_raw(sc, f, t)
    index = {(c.role, c.origin if c.role == "level" else sc.simplices[c.origin][0]): i for i, c in enumerate(cells)}
    kept = []
    for sid in range(len(sc.simplices)):
        iv = value_interval(sc, f, sid)
        if (side == "up" and iv.meets_above(t)) or (side == "down" and iv.meets_below(t)):
            kept.append(sid)
    kept_set = set(kept)
    simplex_index: dict[int, int] = {}
    for sid in kept:
        iv = value_interval(sc, f, sid)
        g = (iv.hi - t) if side == "up" else (t - iv.lo)
        simplex_index[sid] = len(cells)
        cells.append(ViewCell(sid, sc.dim(sid), "simplex", g))
        col: set[int] = set()
        # faces among kept simplices
        for face in sc.facets(sid):
            if face in kept_set:
                col.add(simplex_index[face])
        # the simplex's own slice, when it crosses the cut
        if ("level", sid) in index:
            col.add(index[("level", sid)])
        # vertex 0-cells at the cut meet the edges through them on this side
        if sc.dim(sid) == 1:
            for v in sc.simplices[sid]:
                if ("vertex", v) in index:
                    col.add(index[("vertex", v)])
        columns.append(col)
    return cells, columns


def halfspace_cell_complex(
    sc: SimplicialComplex, f: Cochain0, t: Fraction, side: Literal["up", "down"]
) -> CellComplexView:
    """The part of the complex on one side of the cut, filtered away from it.

    Cell values are 0 on the slice and the distance from the cut to the far
    end of each kept simplex, so the view is the sublevel filtration of
    f - t (side "up") or t - f (side "down").
    """
    assert side in ("up", "down")
    _check_edge_generic(sc, f)
    cells, columns = _halfspace_raw(sc, f, Fraction(t), side)
    return _assemble(cells, columns, repair_stages=True)


def band_cell_complex(
    sc: SimplicialComplex, f: Cochain0, t1: Fraction, t2: Fraction
) -> CellComplexView:
    """The part of the complex between two cuts: both slices, then the inside."""
    t1, t2 = Fraction(t1), Fraction(t2)
    if t1 >= t2:
        raise BadInterval(f"need t1 < t2, got {t1} >= {t2}")
    _check_edge_generic(sc, f)
    lo_cells, lo_columns = _level_raw(sc, f, t1)
    hi_cells, hi_columns = _level_raw(sc, f, t2)
    shift = len(lo_cells)
    cells = lo_cells + hi_cells
    columns = [set(c) for c in lo_columns] + [{i + shift for i in c} for c in hi_columns]

    def slot(block_cells: list[ViewCell], base: int) -> dict[tuple[str, int], int]:
        out = {}
        for i, c in enumerate(block_cells):
            key = ("level", c.origin) if c.role == "level" else ("vertex", sc.simplices[c.origin][0])
            out[key] = base + i
        return out

    lo_index = slot(lo_cells, 0)
    hi_index = slot(hi_cells, shift)
    kept = [
        sid
        for sid in range(len(sc.simplices))
        if value_interval(sc, f, sid).meets_between(t1, t2)
    ]
    kept_set = set(kept)
    simplex_index: dict[int, int] = {}
    for sid in kept:
        simplex_index[sid] = len(cells)
        cells.append(ViewCell(sid, sc.dim(sid), "simplex", Fraction(0)))
        col: set[int] = set()
        for face in sc.facets(sid):
            if face in kept_set:
                col.add(simplex_index[face])
        for idx in (lo_index, hi_index):
            if ("level", sid) in idx:
                col.add(idx[("level", sid)])
        if sc.dim(sid) == 1:
            for v in sc.simplices[sid]:
                for idx in (lo_index, hi_index):
                    if ("vertex", v) in idx:
                        col.add(idx[("vertex", v)])
        columns.append(col)
    return _assemble(cells, columns, repair_stages=False)


def sublevel_subcomplex_filtration(sc: SimplicialComplex, f: Cochain0) -> tuple[int, ...]:
    """Stage of each simplex: the index of its largest vertex value.

    Stages index the sorted distinct vertex values, 0-based; the map must be
    injective on vertices.
    """
    if not f.is_injective():
        raise NonGenericMap("vertex values are not pairwise distinct")
    values = sorted(f.values)
    stage_of = {v: i for i, v in enumerate(values)}
    return tuple(stage_of[max(f(v) for v in s)] for s in sc.simplices)


def full_complex_view(sc: SimplicialComplex, values: Optional[Sequence[Fraction]] = None) -> CellComplexView:
    """The whole complex as a view, one simplex cell per simplex."""
    vals = list(values) if values is not None else [Fraction(0)] * len(sc.simplices)
    cells = [ViewCell(sid, sc.dim(sid), "simplex", Fraction(vals[sid])) for sid in range(len(sc.simplices))]
    columns = [set(sc.facets(sid)) for sid in range(len(sc.simplices))]
    return _assemble(cells, columns, repair_stages=False)


def filtered_complex_view(sc: SimplicialComplex, stages: Sequence[int]) -> CellComplexView:
    """The whole complex ordered compatibly with the given simplex stages."""
    cells = [ViewCell(sid, sc.dim(sid), "simplex", Fraction(stages[sid])) for sid in range(len(sc.simplices))]
    columns = [set(sc.facets(sid)) for sid in range(len(sc.simplices))]
    return _assemble(cells, columns, repair_stages=True)


def prefix_view(view: CellComplexView, n: int) -> CellComplexView:
    """The subcomplex spanned by the first n cells of a view."""
    if not 0 <= n <= len(view.cells):
        raise NotASubcomplex(f"prefix length {n} out of range")
    for j in range(n):
        if any(i >= n for i in view.matrix.columns[j]):
            raise NotASubcomplex("prefix is not closed under taking faces")
    matrix = IncidenceMatrix(
        view.matrix.dims[:n], view.matrix.labels[:n], view.matrix.columns[:n]
    )
    order = CellOrder(tuple(range(n)), face_compatible=True, stage_compatible=view.order.stage_compatible)
    return CellComplexView(view.cells[:n], matrix, order)
