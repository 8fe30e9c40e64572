"""User-facing persistence pipelines and their grid bookkeeping.

Index conventions, used consistently everywhere:

* Sublevel (standard) persistence works over 0-based stages: stage c is the
  c-th smallest vertex value.  Tables mu/beta/kappa are keyed by stages, with
  ``math.inf`` as the death index of classes that never die.
* Level persistence works over the interleaved grid s_1 < ... < s_{2k+1}
  (1-based): even positions are the vertex values, odd positions regular
  values between them (midpoints, with one extra value on each end).  Row
  tables are keyed by grid steps: a class of the level at s_i that dies
  upward at s_{i+k} is recorded at step k.
* Circle-valued persistence runs the level machinery on an unrolled cover,
  querying the seam in the middle of 2 * budget stacked windows.  Deaths at
  or beyond budget * alpha from the seam are reported as infinite; by the
  copy-count bound, the default budget (the simplex count) captures every
  finite number.

Deaths sit at even grid positions, so for rows at even i nothing can die
within one grid step; those zero identities are asserted on every table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .cells import (
    halfspace_cell_complex,
    filtered_complex_view,
    level_cell_complex,
    sublevel_subcomplex_filtration,
)
from .cochains import AlmostIntegralCocycle, CircleMap, Cochain0, check_almost_integral, check_generic, validate_cocycle, vertex_angles
from .complexes import SimplicialComplex
from .errors import InvalidCocycle, NonGenericMap, NotAlmostIntegral, SpanTooWide
from .reduction import (
    INF,
    betti_numbers,
    persistence_pairs,
    reduce_matrix,
    relative_reduce,
)
from .unroll import UnrolledComplex, max_copies_needed, theta_decompose, unroll


@dataclass(frozen=True)
class SGrid:
    """Vertex values interleaved with regular values, accessed 1-based."""

    critical: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    @classmethod
    def from_critical(cls, critical: Sequence[Fraction], pin: Optional[Fraction] = None) -> "SGrid":
        crit = tuple(sorted(set(Fraction(c) for c in critical)))
        if not crit:
            return cls((), ())
        s: list[Fraction] = [crit[0] - 1]
        for a, b in zip(crit, crit[1:]):
            s.append(a)
            s.append((a + b) / 2)
        s.append(crit[-1])
        s.append(crit[-1] + 1)
        if pin is not None:
            pin = Fraction(pin)
            if pin not in s:
                if pin < crit[0]:
                    s[0] = pin
                elif pin > crit[-1]:
                    s[-1] = pin
                else:
                    for idx in range(2, len(s) - 1, 2):
                        if s[idx - 1] < pin < s[idx + 1]:
                            s[idx] = pin
                            break
        return cls(crit, tuple(s))

    @property
    def size(self) -> int:
        return len(self.values)

    def s(self, i: int) -> Fraction:
        """The i-th grid value, 1-based."""
        return self.values[i - 1]

    def index_of(self, value: Fraction) -> int:
        """1-based position of an exact grid value."""
        return self.values.index(value) + 1

    def is_critical_index(self, i: int) -> bool:
        return i % 2 == 0

    def indices(self) -> range:
        return range(1, self.size + 1)


@dataclass(frozen=True)
class StandardPersistence:
    """Sublevel persistence grids over 0-based critical stages."""

    critical_values: tuple[Fraction, ...]
    mu: dict
    beta: dict
    kappa: dict
    kappa_pairs: dict
    betti: dict

    @property
    def n_stages(self) -> int:
        return len(self.critical_values)

    def validate(self) -> None:
        k = self.n_stages
        for r in sorted({key[0] for key in self.beta}):
            for i in range(k):
                assert self.beta[(r, i, i)] == self.kappa[(r, i)]
                for j in range(i, k):
                    assert self.kappa_pairs[(r, i, j)] == self.kappa[(r, i)] - self.beta[(r, i, j)]


def standard_persistence(sc: SimplicialComplex, f: Cochain0) -> StandardPersistence:
    """Sublevel persistence of a generic vertex map."""
    if not f.is_injective():
        raise NonGenericMap("vertex values are not pairwise distinct")
    if len(sc.simplices) == 0:
        return StandardPersistence((), {}, {}, {}, {}, {})
    stages = sublevel_subcomplex_filtration(sc, f)
    view = filtered_complex_view(sc, stages)
    reduced = reduce_matrix(view.matrix)
    mu = persistence_pairs(reduced, view.stage_indices(), view.dims)
    betti = {r: b for r, b in betti_numbers(reduced, view.dims).items() if b}
    critical = tuple(sorted(f.values))
    k = len(critical)
    degrees = sorted({key[0] for key in mu}) or [0]
    beta: dict = {}
    kappa: dict = {}
    kappa_pairs: dict = {}
    for r in degrees:
        for i in range(k):
            for j in range(i, k):
                beta[(r, i, j)] = sum(
                    n for (rr, bi, dj), n in mu.items() if rr == r and bi <= i and dj > j
                )
        for i in range(k):
            kappa[(r, i)] = beta[(r, i, i)]
            for j in range(i, k):
                kappa_pairs[(r, i, j)] = kappa[(r, i)] - beta[(r, i, j)]
    result = StandardPersistence(critical, mu, beta, kappa, kappa_pairs, betti)
    result.validate()
    return result


def mu_from_beta(beta: dict, r: int, i: int, j: int) -> int:
    """Alternating 4-term difference recovering multiplicities, i < j."""

    def b(ii: int, jj: int) -> int:
        if ii < 0:
            return 0
        return beta.get((r, ii, jj), 0)

    return b(i, j - 1) - b(i, j) - b(i - 1, j - 1) + b(i - 1, j)


@dataclass
class LevelRow:
    """All level persistence numbers of one grid row.

    ``nu_up[(r, k)]`` counts classes of the level dying k grid steps upward,
    ``omega[(r, j, k)]`` those dying j steps downward and k steps upward
    simultaneously; the ``*_inf`` and ``*_only`` tables hold the classes that
    survive one or both directions forever.
    """

    index: int
    value: Fraction
    l: dict = field(default_factory=dict)
    nu_up: dict = field(default_factory=dict)
    nu_down: dict = field(default_factory=dict)
    nu_up_inf: dict = field(default_factory=dict)
    nu_down_inf: dict = field(default_factory=dict)
    omega: dict = field(default_factory=dict)
    omega_down_only: dict = field(default_factory=dict)
    omega_up_only: dict = field(default_factory=dict)
    omega_immortal: dict = field(default_factory=dict)

    def degrees(self) -> list[int]:
        return sorted(self.l)

    def l_plus(self, r: int, j: int) -> int:
        return sum(n for (rr, k), n in self.nu_up.items() if rr == r and k <= j)

    def l_minus(self, r: int, j: int) -> int:
        return sum(n for (rr, k), n in self.nu_down.items() if rr == r and k <= j)

    def e(self, r: int, j: int, k: int) -> int:
        return sum(n for (rr, jj, kk), n in self.omega.items() if rr == r and jj <= j and kk <= k)

    def validate(self) -> None:
        assert all(n >= 0 for n in self.l.values())
        for r in self.degrees():
            up_total = sum(n for (rr, _), n in self.nu_up.items() if rr == r) + self.nu_up_inf.get(r, 0)
            down_total = sum(n for (rr, _), n in self.nu_down.items() if rr == r) + self.nu_down_inf.get(r, 0)
            assert up_total == down_total == self.l.get(r, 0)
            # marginals of the simultaneous table against the one-sided tables
            for (rr, j), n in list(self.nu_down.items()):
                if rr != r:
                    continue
                m = sum(v for (r2, jj, _), v in self.omega.items() if r2 == r and jj == j)
                assert m + self.omega_down_only.get((r, j), 0) == n
            for (rr, k), n in list(self.nu_up.items()):
                if rr != r:
                    continue
                m = sum(v for (r2, _, kk), v in self.omega.items() if r2 == r and kk == k)
                assert m + self.omega_up_only.get((r, k), 0) == n
            assert (
                sum(v for (r2, _), v in self.omega_up_only.items() if r2 == r)
                + self.omega_immortal.get(r, 0)
                == self.nu_down_inf.get(r, 0)
            )
            assert (
                sum(v for (r2, _), v in self.omega_down_only.items() if r2 == r)
                + self.omega_immortal.get(r, 0)
                == self.nu_up_inf.get(r, 0)
            )
        # nothing dies within zero steps
        assert all(k >= 1 for (_, k) in self.nu_up)
        assert all(k >= 1 for (_, k) in self.nu_down)
        assert all(j >= 1 and k >= 1 for (_, j, k) in self.omega)
        if self.index % 2 == 0:
            # from a vertex-value row the nearest possible death is two steps away
            assert all(k >= 2 for (_, k) in self.nu_up)
            assert all(k >= 2 for (_, k) in self.nu_down)


@dataclass
class LevelPersistence:
    """Level persistence rows over an interleaved grid."""

    grid: SGrid
    rows: dict

    def row(self, i: int) -> LevelRow:
        return self.rows[i]

    def l(self, r: int, i: int) -> int:
        return self.rows[i].l.get(r, 0) if i in self.rows else 0

    def e(self, r: int, i: int, j: int, k: int) -> int:
        return self.rows[i].e(r, j, k)

    def l_plus(self, r: int, i: int, j: int) -> int:
        return self.rows[i].l_plus(r, j)

    def l_minus(self, r: int, i: int, j: int) -> int:
        return self.rows[i].l_minus(r, j)

    def validate(self) -> None:
        for row in self.rows.values():
            row.validate()


def _class_fates(view_matrix, reduced, n_level: int, cells) -> dict:
    """Death value (or INF) in one halfspace for every class of the level.

    A level cell generates a class when its reduced column is zero and it is
    not the low of another level column; the class dies at the value of the
    kept cell whose low it is, if any.
    """
    inv = reduced.low_inverse()
    fates: dict[int, object] = {}
    for k in range(n_level):
        if reduced.columns[k]:
            continue
        partner = inv.get(k)
        if partner is not None and partner < n_level:
            continue  # killed inside the level block, not a class of the level
        fates[k] = INF if partner is None else cells[partner].value
    return fates


def _steps_up(grid: SGrid, i: int, value: Fraction) -> int:
    return grid.index_of(grid.s(i) + value) - i


def _steps_down(grid: SGrid, i: int, value: Fraction) -> int:
    return i - grid.index_of(grid.s(i) - value)


def _level_row_at(
    sc: SimplicialComplex,
    f: Cochain0,
    grid: SGrid,
    i: int,
    death_cap: Optional[Fraction] = None,
) -> LevelRow:
    t = grid.s(i)
    level = level_cell_complex(sc, f, t)
    down = halfspace_cell_complex(sc, f, t, "down")
    up = halfspace_cell_complex(sc, f, t, "up")
    n_level = len(level.cells)
    assert down.cells[:n_level] == up.cells[:n_level] == level.cells
    rm, rp, triples = relative_reduce(down.matrix, up.matrix, n_level)
    row = LevelRow(index=i, value=t)
    row.l = {r: b for r, b in betti_numbers(reduce_matrix(level.matrix), level.dims).items() if b}

    def capped(v):
        if v is INF:
            return INF
        if death_cap is not None and v >= death_cap:
            return INF
        return v

    down_fates = {k: capped(v) for k, v in _class_fates(down.matrix, rm, n_level, down.cells).items()}
    up_fates = {k: capped(v) for k, v in _class_fates(up.matrix, rp, n_level, up.cells).items()}
    assert set(down_fates) == set(up_fates)
    finite_pairs = 0
    for k in sorted(down_fates):
        r = level.dims[k]
        dv, uv = down_fates[k], up_fates[k]
        if dv is INF:
            row.nu_down_inf[r] = row.nu_down_inf.get(r, 0) + 1
        else:
            j = _steps_down(grid, i, dv)
            row.nu_down[(r, j)] = row.nu_down.get((r, j), 0) + 1
        if uv is INF:
            row.nu_up_inf[r] = row.nu_up_inf.get(r, 0) + 1
        else:
            kk = _steps_up(grid, i, uv)
            row.nu_up[(r, kk)] = row.nu_up.get((r, kk), 0) + 1
        if dv is INF and uv is INF:
            row.omega_immortal[r] = row.omega_immortal.get(r, 0) + 1
        elif dv is INF:
            key = (r, _steps_up(grid, i, uv))
            row.omega_up_only[key] = row.omega_up_only.get(key, 0) + 1
        elif uv is INF:
            key = (r, _steps_down(grid, i, dv))
            row.omega_down_only[key] = row.omega_down_only.get(key, 0) + 1
        else:
            key = (r, _steps_down(grid, i, dv), _steps_up(grid, i, uv))
            row.omega[key] = row.omega.get(key, 0) + 1
            finite_pairs += 1
    if death_cap is None:
        # with no cap the simultaneous pairs are exactly the shared-low triples
        assert finite_pairs == len(triples.triples)
    row.validate()
    return row


def level_persistence(
    sc: SimplicialComplex,
    f: Cochain0,
    at: Optional[Fraction] = None,
    require_injective: bool = True,
    death_cap: Optional[Fraction] = None,
) -> LevelPersistence:
    """Level persistence table of a generic vertex map.

    With ``at`` the table holds the single row at that exact value (pinned
    into the grid); otherwise every grid row is computed.
    """
    if require_injective and not f.is_injective():
        raise NonGenericMap("vertex values are not pairwise distinct")
    if sc.vertex_count == 0:
        return LevelPersistence(SGrid((), ()), {})
    grid = SGrid.from_critical(sorted(set(f.values)), pin=at)
    if at is not None:
        indices: Iterable[int] = [grid.index_of(Fraction(at))]
    else:
        indices = grid.indices()
    rows = {i: _level_row_at(sc, f, grid, i, death_cap) for i in indices}
    lp = LevelPersistence(grid, rows)
    lp.validate()
    return lp


@dataclass
class CirclePersistenceResult:
    """Level persistence of a circle-valued map at one angle.

    ``levels`` holds the single computed row on the unrolled cover; steps are
    grid steps of the unrolled grid and deaths at or past ``budget * alpha``
    from the seam are infinite.
    """

    theta: Fraction
    alpha: Fraction
    budget: int
    levels: LevelPersistence
    grid_index: int
    unrolled: UnrolledComplex

    @property
    def row(self) -> LevelRow:
        return self.levels.row(self.grid_index)

    def tau_up(self, k: int) -> Fraction:
        return self.levels.grid.s(self.grid_index + k) - self.levels.grid.s(self.grid_index)

    def tau_down(self, j: int) -> Fraction:
        return self.levels.grid.s(self.grid_index) - self.levels.grid.s(self.grid_index - j)


def circle_level_persistence(
    sc: SimplicialComplex,
    cm: CircleMap,
    theta: Fraction,
    budget: Optional[int] = None,
    window_shift: int = 0,
) -> CirclePersistenceResult:
    """Level persistence of a circle-valued map at the angle ``theta``.

    Unrolls 2 * budget windows of the cyclic cover and queries the middle
    seam, so deaths up to budget * alpha are exact in both directions.
    """
    theta = Fraction(theta) % cm.alpha
    b = budget if budget is not None else max_copies_needed(sc)
    assert b >= 1
    decomp = theta_decompose(sc, cm, theta)
    un = unroll(decomp, sc, cm, 2 * b, base_lift=theta + window_shift * cm.alpha)
    t0 = un.seam(b)
    lp = level_persistence(
        un.complex,
        un.values,
        at=t0,
        require_injective=False,
        death_cap=b * cm.alpha,
    )
    return CirclePersistenceResult(
        theta=theta,
        alpha=cm.alpha,
        budget=b,
        levels=lp,
        grid_index=lp.grid.index_of(t0),
        unrolled=un,
    )


def cocycle_persistence(
    sc: SimplicialComplex,
    c: AlmostIntegralCocycle,
    theta: Fraction,
    base: int = 0,
    budget: Optional[int] = None,
) -> CirclePersistenceResult:
    """Persistence of an almost integral cocycle: angles first, then levels."""
    report = validate_cocycle(c.cocycle, sc)
    if not report.ok:
        raise InvalidCocycle(f"cocycle condition fails on {report.violations[0]}")
    ok, witness = check_generic(c.cocycle, sc)
    if not ok:
        raise NonGenericMap(f"local values collide at {witness}")
    if not check_almost_integral(c.cocycle, sc, c.alpha):
        raise NotAlmostIntegral(f"some cycle sum is not a multiple of {c.alpha}")
    half = c.alpha / 2
    for x, y in sc.edges():
        if abs(c.cocycle.value(x, y)) >= half:
            raise SpanTooWide(f"edge ({x}, {y}) winds at least half the circle")
    cm = vertex_angles(c, sc, base)
    return circle_level_persistence(sc, cm, theta, budget=budget)
