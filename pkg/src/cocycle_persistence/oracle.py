"""Independent brute-force verification.

Everything here goes through dense GF(2) Gaussian elimination on numpy
arrays, a deliberately different code path from the sparse column reduction,
so the two can serve as witnesses for each other.

The module also hosts the exact-sequence dimension solver and the procedure
that recovers sublevel persistence (for the map and its negative) from a
level persistence table, used as a whole-pipeline consistency check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .cells import CellComplexView
from .errors import BoundaryNotSquareZero, Contradiction, NotASubcomplex, UnderDetermined
from .persistence import LevelPersistence, SGrid


def gf2_eliminate(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Row-echelon form over GF(2); returns the form and pivot column list."""
    m = a.copy() % 2
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.nonzero(m[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        for q in range(rows):
            if q != r and m[q, c]:
                m[q] ^= m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def gf2_rank(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return len(gf2_eliminate(a)[1])


def gf2_nullspace(a: np.ndarray) -> np.ndarray:
    """Basis of the right nullspace, one solution per column."""
    rows, cols = a.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.uint8)
    m, pivots = gf2_eliminate(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.uint8)
    for idx, fc in enumerate(free):
        basis[fc, idx] = 1
        for r, pc in enumerate(pivots):
            if m[r, fc]:
                basis[pc, idx] = 1
    return basis


def _hstack(parts: list[np.ndarray], rows: int) -> np.ndarray:
    cols = sum(p.shape[1] for p in parts)
    out = np.zeros((rows, cols), dtype=np.uint8)
    at = 0
    for p in parts:
        w = p.shape[1]
        if w and rows:
            out[:, at : at + w] = p
        at += w
    return out


def _cells_of_degree(view: CellComplexView, r: int) -> list[int]:
    return [p for p, d in enumerate(view.dims) if d == r]


def boundary_block(view: CellComplexView, r: int) -> np.ndarray:
    """Dense boundary of the r-cells, rows indexed by the (r-1)-cells."""
    rows = _cells_of_degree(view, r - 1)
    cols = _cells_of_degree(view, r)
    pos = {p: idx for idx, p in enumerate(rows)}
    out = np.zeros((len(rows), len(cols)), dtype=np.uint8)
    for j, p in enumerate(cols):
        for i in view.matrix.columns[p]:
            out[pos[i], j] = 1
    return out


def homology_rank(view: CellComplexView, r: int) -> int:
    """dim H_r by rank-nullity, with the boundary-squares-to-zero precheck."""
    if not view.matrix.boundary_squares_to_zero():
        raise BoundaryNotSquareZero("incidence matrix does not square to zero")
    n_r = len(_cells_of_degree(view, r))
    if n_r == 0:
        return 0
    rank_r = gf2_rank(boundary_block(view, r)) if r > 0 else 0
    rank_up = gf2_rank(boundary_block(view, r + 1))
    return n_r - rank_r - rank_up


def _check_prefix(small: CellComplexView, big: CellComplexView) -> None:
    n = len(small.cells)
    if big.cells[:n] != small.cells or big.matrix.columns[:n] != small.matrix.columns:
        raise NotASubcomplex("small view is not a leading prefix of the big view")


def persistent_betti_bruteforce(
    small: CellComplexView,
    big: CellComplexView,
    r: int,
    embed: Optional[Sequence[int]] = None,
) -> int:
    """Rank of the inclusion-induced map on H_r, by direct elimination.

    ``embed`` maps cell positions of the small view into the big view; by
    default the small view must be a leading prefix of the big one.
    """
    if embed is None:
        _check_prefix(small, big)
        embed = list(range(len(small.cells)))
    small_r = _cells_of_degree(small, r)
    big_r = _cells_of_degree(big, r)
    big_pos = {p: idx for idx, p in enumerate(big_r)}
    lift = [big_pos[embed[p]] for p in small_r]
    cycles_small = gf2_nullspace(boundary_block(small, r)) if r > 0 else np.eye(len(small_r), dtype=np.uint8)
    z = np.zeros((len(big_r), cycles_small.shape[1]), dtype=np.uint8)
    for row, target in enumerate(lift):
        z[target] = cycles_small[row]
    b = boundary_block(big, r + 1)
    return gf2_rank(_hstack([z, b], len(big_r))) - gf2_rank(b)


def inclusion_kernel_dim(
    small: CellComplexView,
    big: CellComplexView,
    r: int,
    embed: Optional[Sequence[int]] = None,
) -> int:
    """dim ker(H_r(small) -> H_r(big))."""
    return homology_rank(small, r) - persistent_betti_bruteforce(small, big, r, embed)


def _bounding_subspace(
    part: CellComplexView,
    ambient: CellComplexView,
    r: int,
    embed: Sequence[int],
) -> np.ndarray:
    """Chains on the part that bound in the ambient view, in part coordinates.

    Returns a matrix whose column space is { z in C_r(part) : z is an
    ambient boundary }, the kernel classes of H_r(part) -> H_r(ambient)
    pooled with the part's own boundaries.
    """
    part_r = _cells_of_degree(part, r)
    amb_r = _cells_of_degree(ambient, r)
    amb_pos = {p: idx for idx, p in enumerate(amb_r)}
    inside = [amb_pos[embed[p]] for p in part_r]
    inside_set = set(inside)
    outside = [idx for idx in range(len(amb_r)) if idx not in inside_set]
    d = boundary_block(ambient, r + 1)
    combos = gf2_nullspace(d[outside, :]) if outside else np.eye(d.shape[1], dtype=np.uint8)
    images = (d @ combos) % 2
    return images[inside, :].astype(np.uint8)


def simultaneous_kernel_dim(
    level: CellComplexView,
    band_down: CellComplexView,
    band_up: CellComplexView,
    r: int,
    embed_down: Sequence[int],
    embed_up: Sequence[int],
) -> int:
    """dim of the classes of the level that bound in both bands.

    Independent route to the simultaneous persistence counts: intersects the
    two bounding subspaces inside the level's cycle space and quotients by
    the level's own boundaries.
    """
    w_down = _bounding_subspace(level, band_down, r, embed_down)
    w_up = _bounding_subspace(level, band_up, r, embed_up)
    n = len(_cells_of_degree(level, r))
    inter = gf2_rank(w_down) + gf2_rank(w_up) - gf2_rank(_hstack([w_down, w_up], n))
    return inter - gf2_rank(boundary_block(level, r + 1))


@dataclass
class ExactSequenceDims:
    """Dimension data of a finite exact sequence A_n -> B_n -> C_n -> A_{n-1}.

    Entries are nonnegative integers or None for unknown; index 0 is the tail
    of the sequence (the end mapping onto zero).
    """

    dim_a: list
    dim_b: list
    dim_c: list
    ker_alpha: list
    ker_beta: list
    ker_delta: list

    @classmethod
    def blank(cls, n: int) -> "ExactSequenceDims":
        return cls(*[[None] * (n + 1) for _ in range(6)])

    @property
    def top(self) -> int:
        return len(self.dim_a) - 1

    def collections(self):
        return {
            "dim_a": self.dim_a,
            "dim_b": self.dim_b,
            "dim_c": self.dim_c,
            "ker_alpha": self.ker_alpha,
            "ker_beta": self.ker_beta,
            "ker_delta": self.ker_delta,
        }


def solve_exact_sequence(d: ExactSequenceDims) -> ExactSequenceDims:
    """Fill the unknown collections from the known ones.

    Exactness gives, per degree n (with ker alpha_{-1} = 0 below the tail and
    ker alpha_N = 0 at the top):

        dim A_n = ker alpha_n + ker beta_n
        dim B_n = ker beta_n  + ker delta_n
        dim C_n = ker delta_n + ker alpha_{n-1}

    Constraint propagation over these equalities covers every solvable input
    pattern; leftovers raise UnderDetermined and inconsistencies raise
    Contradiction.
    """
    n_top = d.top
    vals = {}
    for name, col in d.collections().items():
        if len(col) != n_top + 1:
            raise UnderDetermined("collections have mismatched lengths")
        for n, v in enumerate(col):
            if v is not None and v < 0:
                raise Contradiction(f"negative dimension {name}[{n}]")
            vals[(name, n)] = v
    vals[("ker_alpha", -1)] = 0
    if vals.get(("ker_alpha", n_top)) not in (None, 0):
        raise Contradiction("the top connecting kernel must vanish")
    vals[("ker_alpha", n_top)] = 0
    equations = []
    for n in range(n_top + 1):
        equations.append((("dim_a", n), ("ker_alpha", n), ("ker_beta", n)))
        equations.append((("dim_b", n), ("ker_beta", n), ("ker_delta", n)))
        equations.append((("dim_c", n), ("ker_delta", n), ("ker_alpha", n - 1)))
    changed = True
    while changed:
        changed = False
        for total, x, y in equations:
            t, a, b = vals[total], vals[x], vals[y]
            known = [v is not None for v in (t, a, b)]
            if all(known):
                if t != a + b:
                    raise Contradiction(f"{total} = {t} but parts sum to {a + b}")
                continue
            if known.count(True) != 2:
                continue
            if t is None:
                vals[total] = a + b
            elif a is None:
                if t - b < 0:
                    raise Contradiction(f"{x} would be negative")
                vals[x] = t - b
            else:
                if t - a < 0:
                    raise Contradiction(f"{y} would be negative")
                vals[y] = t - a
            changed = True
    out = ExactSequenceDims.blank(n_top)
    for name, col in out.collections().items():
        for n in range(n_top + 1):
            v = vals[(name, n)]
            if v is None:
                raise UnderDetermined(f"cannot determine {name}[{n}]")
            col[n] = v
    return out


def _solve_from(known: dict, n_top: int) -> ExactSequenceDims:
    d = ExactSequenceDims.blank(n_top)
    for name, values in known.items():
        getattr(d, name)[:] = list(values)
    return solve_exact_sequence(d)


@dataclass
class RecoveredSublevel:
    """Sublevel persistence grids rebuilt from level persistence numbers.

    ``kappa[(r, m)]`` is dim H_r of the sublevel set below grid value m, and
    ``kappa_pairs[(r, m, j)]`` the kernel into the sublevel set below grid
    value j; the ``neg_*`` grids are the same data for the negated map,
    indexed by the original grid (``neg_kappa[(r, m)]`` sits above value m).
    """

    grid: SGrid
    kappa: dict
    kappa_pairs: dict
    neg_kappa: dict
    neg_kappa_pairs: dict
    band_dims: dict  # (i, j) -> tuple of dims per degree


def recover_sublevel_from_level(lp: LevelPersistence, grid: SGrid) -> RecoveredSublevel:
    """Rebuild both sublevel persistence grids from a level table.

    Chains the connecting-sum solver through: the two-cut union sequence to
    get every band's homology, the pair sequences at coinciding cuts to get
    the relative dimensions, the general pair sequences to get inclusion
    kernels, and finally the full-range bands, which are the sublevel and
    superlevel sets.
    """
    size = grid.size
    if size == 0:
        return RecoveredSublevel(grid, {}, {}, {}, {}, {})
    top_level_degree = 0
    for row in lp.rows.values():
        for r, n in row.l.items():
            if n:
                top_level_degree = max(top_level_degree, r)
    n_top = top_level_degree + 2

    def l_vec(i: int) -> list[int]:
        return [lp.l(r, i) for r in range(n_top + 1)]

    band: dict = {}
    for i in range(1, size + 1):
        band[(i, i)] = l_vec(i)
    for i in range(1, size):
        band[(i, i + 1)] = l_vec(i) if grid.is_critical_index(i) else l_vec(i + 1)
    for width in range(2, size):
        for i in range(1, size - width + 1):
            j = i + width
            m = j - 1
            dim_b = [band[(i, m)][r] + band[(m, j)][r] for r in range(n_top + 1)]
            ker_a = [lp.e(r, m, m - i, 1) for r in range(n_top + 1)]
            solved = _solve_from(
                {"dim_a": l_vec(m), "dim_b": dim_b, "ker_alpha": ker_a}, n_top
            )
            band[(i, j)] = solved.dim_c

    rel_bottom: dict = {}
    rel_top: dict = {}
    for i in range(1, size + 1):
        for j in range(i, size + 1):
            solved = _solve_from(
                {
                    "dim_a": l_vec(i),
                    "dim_b": band[(i, j)],
                    "ker_alpha": [lp.l_plus(r, i, j - i) for r in range(n_top + 1)],
                },
                n_top,
            )
            rel_bottom[(i, j)] = solved.dim_c
            solved = _solve_from(
                {
                    "dim_a": l_vec(j),
                    "dim_b": band[(i, j)],
                    "ker_alpha": [lp.l_minus(r, j, j - i) for r in range(n_top + 1)],
                },
                n_top,
            )
            rel_top[(i, j)] = solved.dim_c

    kappa: dict = {}
    kappa_pairs: dict = {}
    neg_kappa: dict = {}
    neg_kappa_pairs: dict = {}
    for m in range(1, size + 1):
        for r in range(n_top + 1):
            kappa[(r, m)] = band[(1, m)][r]
            neg_kappa[(r, m)] = band[(m, size)][r]
    for m in range(1, size + 1):
        for j in range(m, size + 1):
            solved = _solve_from(
                {
                    "dim_a": band[(1, m)],
                    "dim_b": band[(1, j)],
                    "dim_c": rel_bottom[(m, j)],
                },
                n_top,
            )
            for r in range(n_top + 1):
                kappa_pairs[(r, m, j)] = solved.ker_alpha[r]
            # the superlevel above j includes into the superlevel above m
            solved = _solve_from(
                {
                    "dim_a": band[(j, size)],
                    "dim_b": band[(m, size)],
                    "dim_c": rel_top[(m, j)],
                },
                n_top,
            )
            for r in range(n_top + 1):
                neg_kappa_pairs[(r, j, m)] = solved.ker_alpha[r]
    return RecoveredSublevel(grid, kappa, kappa_pairs, neg_kappa, neg_kappa_pairs, band)
