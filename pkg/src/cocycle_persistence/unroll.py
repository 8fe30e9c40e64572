"""Cutting a circle-valued complex at an angle and unrolling finitely many turns.

Cutting at a regular angle theta splits the simplices into four groups:

* crossing: the closure of the simplex meets the theta level,
* below / above: faces shared between the closed crossing part and the rest,
  lying entirely under, resp. over, the level on the short arc,
* offlevel: everything else.

Stacking copies produces a genuine simplicial complex with real vertex
values: window n holds one copy of the crossing block straddling the seam at
theta + n * alpha, its upper boundary, the offlevel block, and the lower
boundary of the next seam.  The seed is a single lower-boundary copy under
seam 0.  Lifted values are the unique representatives compatible with that
geometry: below-boundary vertices sit under their seam, crossing-block
vertices sit within half a turn of it, everything else lifts into the open
window above it.  Each copy adds exactly alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cochains import CircleMap, Cochain0
from .complexes import (
    CellOrder,
    IncidenceMatrix,
    SimplicialComplex,
    build_complex,
    incidence_matrix,
)
from .errors import NonGenericMap, SpanTooWide, VertexOnLevel

BELOW = "below"
CROSSING = "crossing"
ABOVE = "above"
OFFLEVEL = "offlevel"


@dataclass(frozen=True)
class ThetaDecomposition:
    """Partition of the simplex ids of a complex by a regular cut angle."""

    theta: Fraction
    crossing: frozenset[int]
    offlevel: frozenset[int]
    below: frozenset[int]
    above: frozenset[int]

    def group_of(self, sid: int) -> str:
        if sid in self.crossing:
            return CROSSING
        if sid in self.below:
            return BELOW
        if sid in self.above:
            return ABOVE
        return OFFLEVEL


def _coherent_offsets(cm: CircleMap, simplex: tuple[int, ...], theta: Fraction) -> list[Fraction]:
    """Vertex offsets from theta, lifted coherently around the anchor vertex.

    Offsets are taken in (0, alpha) relative to theta for the anchor, then the
    other vertices pick the representative nearest the anchor.  Raises when
    the simplex cannot fit in an open half circle.
    """
    alpha = cm.alpha
    half = alpha / 2
    anchor = (cm.angle(simplex[0]) - theta) % alpha
    offsets = [anchor]
    for v in simplex[1:]:
        d = (cm.angle(v) - cm.angle(simplex[0])) % alpha
        if d == half:
            raise SpanTooWide(f"simplex {simplex} spans half the circle")
        offsets.append(anchor + (d if d < half else d - alpha))
    if max(offsets) - min(offsets) >= half:
        raise SpanTooWide(f"simplex {simplex} spans at least half the circle")
    if len(set(offsets)) != len(offsets):
        raise NonGenericMap(f"simplex {simplex} has vertices at equal angles")
    return offsets


def _simplex_crosses(cm: CircleMap, simplex: tuple[int, ...], theta: Fraction) -> bool:
    offsets = _coherent_offsets(cm, simplex, theta)
    lo, hi = min(offsets), max(offsets)
    # representatives of theta relative to the anchored window are multiples of alpha
    k = lo // cm.alpha
    for cand in (k * cm.alpha, (k + 1) * cm.alpha):
        if lo < cand < hi:
            return True
    return False


def theta_decompose(sc: SimplicialComplex, cm: CircleMap, theta: Fraction) -> ThetaDecomposition:
    """Split the simplices of ``sc`` by the cut at ``theta``."""
    alpha = cm.alpha
    theta = Fraction(theta) % alpha
    for v in range(sc.vertex_count):
        if cm.angle(v) == theta:
            raise VertexOnLevel(f"vertex {v} sits at angle {theta}")
    crossing = {sid for sid, s in enumerate(sc.simplices) if _simplex_crosses(cm, s, theta)}
    level_complex: set[int] = set()
    for sid in crossing:
        level_complex.add(sid)
        s = sc.simplices[sid]
        level_complex.update(
            sc.index(face)
            for k in range(1, len(s))
            for face in _subtuples(s, k)
        )
    off_seed = set(range(len(sc.simplices))) - level_complex
    off_complex: set[int] = set()
    for sid in off_seed:
        off_complex.add(sid)
        s = sc.simplices[sid]
        off_complex.update(
            sc.index(face)
            for k in range(1, len(s))
            for face in _subtuples(s, k)
        )
    boundary = level_complex & off_complex
    below, above = set(), set()
    half = alpha / 2
    for sid in sorted(boundary):
        sides = set()
        for v in sc.simplices[sid]:
            d = (cm.angle(v) - theta) % alpha
            if d == half:
                raise SpanTooWide(f"vertex {v} sits opposite the cut")
            sides.add(d < half)
        if len(sides) != 1:
            raise SpanTooWide(f"boundary simplex {sc.simplices[sid]} straddles the cut")
        (above if sides.pop() else below).add(sid)
    return ThetaDecomposition(
        theta=theta,
        crossing=frozenset(level_complex - boundary),
        offlevel=frozenset(set(range(len(sc.simplices))) - level_complex),
        below=frozenset(below),
        above=frozenset(above),
    )


def _subtuples(s: tuple[int, ...], k: int):
    from itertools import combinations

    return combinations(s, k)


@dataclass(frozen=True)
class CopyCell:
    group: str
    window: int
    origin: int  # simplex id in the base complex


@dataclass(frozen=True)
class UnrolledComplex:
    """Finitely many windows of the infinite cyclic cover, realized honestly.

    ``complex`` and ``values`` are an ordinary simplicial complex with a real
    (rational) vertex map; ``copies`` lists the cells window block by window
    block, ``order`` is that juxtaposition as a cell order on ``complex``,
    and ``matrix`` the incidence matrix under it.  ``seam(n)`` is the lifted
    level value realizing the cut in window n, valid for 0 <= n < n_windows.
    """

    base: SimplicialComplex
    decomposition: ThetaDecomposition
    alpha: Fraction
    base_lift: Fraction
    n_windows: int
    complex: SimplicialComplex
    values: Cochain0
    copies: tuple[CopyCell, ...]
    order: CellOrder
    matrix: IncidenceMatrix
    vertex_info: tuple[tuple[str, int, int], ...]  # per realized vertex: (group, window, base vertex)

    def seam(self, n: int) -> Fraction:
        return self.base_lift + n * self.alpha

    def copy_of(self, realized_sid: int) -> CopyCell:
        return self.copies[self._copy_lookup[realized_sid]]

    @property
    def _copy_lookup(self) -> dict[int, int]:
        return {self.order.permutation[p]: p for p in range(len(self.copies))}


def max_copies_needed(sc: SimplicialComplex) -> int:
    """Window budget that captures every finite persistence number."""
    return max(1, len(sc.simplices))


def unroll(
    decomp: ThetaDecomposition,
    sc: SimplicialComplex,
    cm: CircleMap,
    n_windows: int,
    base_lift: Optional[Fraction] = None,
) -> UnrolledComplex:
    """Assemble the first ``n_windows`` windows above ``base_lift``.

    The seed block is the lower boundary of seam 0; window n then contributes
    the crossing block of seam n, the upper boundary, the lower boundary of
    seam n + 1, and the offlevel block.
    """
    assert n_windows >= 1
    alpha = cm.alpha
    t = Fraction(base_lift) if base_lift is not None else decomp.theta
    half = alpha / 2

    group_of_vertex = {
        v: decomp.group_of(sc.index((v,))) for v in range(sc.vertex_count)
    }

    def vertex_window(group_v: str, block_group: str, n: int) -> int:
        if group_v == BELOW and block_group == OFFLEVEL:
            return n + 1
        return n

    def lifted(group_v: str, v: int, window: int) -> Fraction:
        d = (cm.angle(v) - decomp.theta) % alpha
        if group_v == BELOW:
            d -= alpha
        elif group_v == CROSSING and d > half:
            d -= alpha
        return t + window * alpha + d

    # within a window, faces precede cofaces: crossing cells rest on both
    # boundary blocks, offlevel cells on the upper and the next lower one
    blocks: list[tuple[str, int]] = [(BELOW, 0)]
    for n in range(n_windows):
        blocks.extend([(ABOVE, n), (CROSSING, n), (BELOW, n + 1), (OFFLEVEL, n)])
    members = {
        BELOW: sorted(decomp.below),
        CROSSING: sorted(decomp.crossing),
        ABOVE: sorted(decomp.above),
        OFFLEVEL: sorted(decomp.offlevel),
    }

    vertex_ids: dict[tuple[str, int, int], int] = {}
    vertex_info: list[tuple[str, int, int]] = []
    values: list[Fraction] = []

    def realize_vertex(group_v: str, window: int, v: int) -> int:
        key = (group_v, window, v)
        if key not in vertex_ids:
            vertex_ids[key] = len(vertex_info)
            vertex_info.append(key)
            values.append(lifted(group_v, v, window))
        return vertex_ids[key]

    copies: list[CopyCell] = []
    realized_tuples: list[tuple[int, ...]] = []
    for group, n in blocks:
        for sid in members[group]:
            verts = []
            for v in sc.simplices[sid]:
                gv = group_of_vertex[v]
                w = vertex_window(gv, group, n)
                verts.append(realize_vertex(gv, w, v))
            copies.append(CopyCell(group, n, sid))
            realized_tuples.append(tuple(sorted(verts)))

    realized = build_complex(len(vertex_info), realized_tuples)
    perm = tuple(realized.index(tup) for tup in realized_tuples)
    # the copies must realize every simplex exactly once, or the blocks are wrong
    assert len(set(perm)) == len(perm) == len(realized.simplices)
    order = CellOrder(perm, face_compatible=True)
    matrix = incidence_matrix(realized, order)  # re-verifies face compatibility
    return UnrolledComplex(
        base=sc,
        decomposition=decomp,
        alpha=alpha,
        base_lift=t,
        n_windows=n_windows,
        complex=realized,
        values=Cochain0(tuple(values)),
        copies=tuple(copies),
        order=order,
        matrix=matrix,
        vertex_info=tuple(vertex_info),
    )
