"""GF(2) column reduction and the pair / triple bookkeeping built on it.

Columns are sets of row indices; adding a column is a symmetric difference.
``low`` of a column is its largest row index.  Reduction scans columns left
to right and, while the current low collides with an earlier column's low,
adds that earlier column.  The result is deterministic because the earlier
column with a given low is unique once processed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .complexes import IncidenceMatrix
from .errors import BlocksOverlap, NotUpperTriangular, OrderNotFiltrationCompatible

INF = math.inf


@dataclass(frozen=True)
class ReducedMatrix:
    """Columns after reduction, the low map, and the column-operation log."""

    columns: tuple[frozenset[int], ...]
    low: dict  # column -> row, only for nonzero columns
    ops: tuple[tuple[int, int], ...]  # (source column added, target column)

    @property
    def size(self) -> int:
        return len(self.columns)

    def low_inverse(self) -> dict:
        return {r: c for c, r in self.low.items()}


@dataclass(frozen=True)
class PairTable:
    """Low pairs (birth cell, death cell, degree) plus unpaired cells."""

    pairs: tuple[tuple[int, int, int], ...]
    unpaired: tuple[tuple[int, int], ...]  # (cell, degree)


@dataclass(frozen=True)
class TripleTable:
    """Shared-row triples (k, k_minus, k_plus, degree) of a relative reduction."""

    triples: tuple[tuple[int, int, int, int], ...]


def reduce_matrix(m: IncidenceMatrix) -> ReducedMatrix:
    if not m.is_upper_triangular():
        raise NotUpperTriangular("matrix has an entry on or below the diagonal")
    cols = [set(c) for c in m.columns]
    pivot: dict[int, int] = {}
    low: dict[int, int] = {}
    ops: list[tuple[int, int]] = []
    for j in range(len(cols)):
        col = cols[j]
        while col:
            r = max(col)
            k = pivot.get(r)
            if k is None:
                pivot[r] = j
                low[j] = r
                break
            col ^= cols[k]
            ops.append((k, j))
    return ReducedMatrix(tuple(frozenset(c) for c in cols), low, tuple(ops))


def betti_numbers(r: ReducedMatrix, dims: Sequence[int]) -> dict[int, int]:
    """dim H_d = zero columns of degree d minus nonzero columns of degree d+1."""
    zero = [0] * (max(dims, default=-1) + 2)
    nonzero = [0] * (max(dims, default=-1) + 2)
    for j, col in enumerate(r.columns):
        if col:
            nonzero[dims[j]] += 1
        else:
            zero[dims[j]] += 1
    return {d: zero[d] - (nonzero[d + 1] if d + 1 < len(nonzero) else 0) for d in range(len(zero) - 1)}


def extract_pairs(r: ReducedMatrix, dims: Sequence[int]) -> PairTable:
    pairs = []
    killed = set()
    for j, row in sorted(r.low.items()):
        pairs.append((row, j, dims[row]))
        killed.add(row)
    unpaired = [
        (j, dims[j])
        for j, col in enumerate(r.columns)
        if not col and j not in killed
    ]
    return PairTable(tuple(pairs), tuple(unpaired))


def persistence_pairs(r: ReducedMatrix, stages: Sequence[int], dims: Sequence[int]) -> dict:
    """The multiplicity table (degree, birth stage, death stage) -> count.

    Deaths of classes that outlive the filtration are recorded in the
    infinity column.  Requires stages nondecreasing along the cell order.
    """
    if any(a > b for a, b in zip(stages, stages[1:])):
        raise OrderNotFiltrationCompatible("stages decrease along the order")
    table = extract_pairs(r, dims)
    mu: dict[tuple, int] = {}
    for birth, death, d in table.pairs:
        key = (d, stages[birth], stages[death])
        mu[key] = mu.get(key, 0) + 1
    for cell, d in table.unpaired:
        key = (d, stages[cell], INF)
        mu[key] = mu.get(key, 0) + 1
    return mu


def relative_reduce(
    minus: IncidenceMatrix,
    plus: IncidenceMatrix,
    n_shared: int,
) -> tuple[ReducedMatrix, ReducedMatrix, TripleTable]:
    """Reduce two matrices that agree on a leading shared block.

    Left-to-right reduction touches only earlier columns, so the shared block
    reduces identically in both matrices; triples are rows of the shared
    block that are the low of one column on each side.
    """
    if (
        minus.dims[:n_shared] != plus.dims[:n_shared]
        or minus.columns[:n_shared] != plus.columns[:n_shared]
    ):
        raise BlocksOverlap("leading blocks of the two matrices disagree")
    rm = reduce_matrix(minus)
    rp = reduce_matrix(plus)
    inv_m = rm.low_inverse()
    inv_p = rp.low_inverse()
    triples = []
    for k in range(n_shared):
        km = inv_m.get(k)
        kp = inv_p.get(k)
        if km is not None and kp is not None and km >= n_shared and kp >= n_shared:
            triples.append((k, km, kp, minus.dims[k]))
    return rm, rp, TripleTable(tuple(triples))


def simultaneous_numbers(
    t: TripleTable,
    stages_minus: Sequence[int],
    stages_plus: Sequence[int],
    dims: Sequence[int],
) -> dict:
    """(degree, stage in the minus side, stage in the plus side) -> count."""
    omega: dict[tuple, int] = {}
    for k, km, kp, _ in t.triples:
        key = (dims[k], stages_minus[km], stages_plus[kp])
        omega[key] = omega.get(key, 0) + 1
    return omega
