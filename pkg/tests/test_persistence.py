import random
from fractions import Fraction as F

import pytest

import cocycle_persistence as cp
from cocycle_persistence import oracle
from cocycle_persistence.cells import band_cell_complex, level_cell_complex
from cocycle_persistence.errors import NonGenericMap, NotAlmostIntegral, SpanTooWide
from cocycle_persistence.persistence import INF, SGrid

from helpers import (
    circle_complex,
    circle_cocycle,
    edge_complex,
    random_complex,
    random_generic_cochain,
    random_tree,
)


def test_sgrid_interleaves():
    g = SGrid.from_critical([F(0), F(1)])
    assert g.values == (F(-1), F(0), F(1, 2), F(1), F(2))
    assert g.is_critical_index(2) and g.is_critical_index(4)
    assert not g.is_critical_index(3)


def test_sgrid_pin_replaces_gap_value():
    g = SGrid.from_critical([F(0), F(1)], pin=F(1, 3))
    assert g.values == (F(-1), F(0), F(1, 3), F(1), F(2))
    g = SGrid.from_critical([F(0), F(1)], pin=F(7))
    assert g.values[-1] == F(7)
    g = SGrid.from_critical([F(0), F(1)], pin=F(1))
    assert g.values == (F(-1), F(0), F(1, 2), F(1), F(2))


def test_standard_persistence_edge():
    sp = cp.standard_persistence(edge_complex(), cp.Cochain0((F(0), F(1))))
    assert sp.mu == {(0, 1, 1): 1, (0, 0, INF): 1}
    assert sp.kappa == {(0, 0): 1, (0, 1): 1}
    assert sp.betti == {0: 1}


def test_standard_persistence_circle():
    sc = circle_complex()
    sp = cp.standard_persistence(sc, cp.Cochain0((F(0), F(1), F(2))))
    assert sp.mu[(0, 0, INF)] == 1
    assert sp.mu[(1, 2, INF)] == 1  # the loop closes with the last edge
    assert sp.betti == {0: 1, 1: 1}


def test_standard_persistence_single_vertex():
    sp = cp.standard_persistence(cp.build_complex(1, [(0,)]), cp.Cochain0((F(5),)))
    assert sp.kappa == {(0, 0): 1}
    assert sp.mu == {(0, 0, INF): 1}


def test_standard_persistence_rejects_collisions():
    with pytest.raises(NonGenericMap):
        cp.standard_persistence(edge_complex(), cp.Cochain0((F(1), F(1))))


def test_mu_beta_roundtrip_random():
    rng = random.Random(41)
    for _ in range(20):
        sc = random_complex(rng)
        f = random_generic_cochain(rng, sc)
        sp = cp.standard_persistence(sc, f)
        k = sp.n_stages
        degrees = sorted({key[0] for key in sp.mu})
        for r in degrees:
            for i in range(k):
                for j in range(i + 1, k):
                    assert cp.mu_from_beta(sp.beta, r, i, j) == sp.mu.get((r, i, j), 0)
                last = sp.beta.get((r, i, k - 1), 0) - (sp.beta.get((r, i - 1, k - 1), 0) if i else 0)
                assert last == sp.mu.get((r, i, INF), 0)


def test_level_persistence_edge_row():
    sc = edge_complex()
    lp = cp.level_persistence(sc, cp.Cochain0((F(0), F(1))))
    row = lp.rows[3]  # the regular value between the two vertex values
    assert row.l == {0: 1}
    # the point class survives every band in both directions
    assert row.nu_up == {} and row.nu_down == {}
    assert row.nu_up_inf == {0: 1} and row.nu_down_inf == {0: 1}
    assert row.omega_immortal == {0: 1}


def test_level_persistence_circle_rows():
    sc = circle_complex()
    lp = cp.level_persistence(sc, cp.Cochain0((F(0), F(1), F(2))))
    low = lp.rows[3]  # between 0 and 1: two points on the two rising edges
    assert low.l == {0: 2}
    assert low.nu_down == {(0, 1): 1}  # their sum bounds once the bottom joins
    assert low.nu_up == {(0, 3): 1}  # and upward only past the top vertex
    assert low.omega == {(0, 1, 3): 1}
    assert low.omega_immortal == {0: 1}
    mid = lp.rows[4]  # exactly at the middle vertex
    assert mid.l == {0: 2}
    assert mid.nu_down == {(0, 2): 1} and mid.nu_up == {(0, 2): 1}
    assert lp.rows[1].l == {} and lp.rows[7].l == {}


def test_level_persistence_zero_identities():
    rng = random.Random(42)
    for _ in range(12):
        sc = random_complex(rng, max_vertices=5, max_size=18)
        f = random_generic_cochain(rng, sc)
        lp = cp.level_persistence(sc, f)
        for i, row in lp.rows.items():
            for r in row.degrees():
                assert row.l_plus(r, 0) == 0 and row.l_minus(r, 0) == 0
                assert row.e(r, 0, 0) == 0 and row.e(r, 0, 1) == 0 and row.e(r, 1, 0) == 0
                if i % 2 == 0:
                    assert row.l_plus(r, 1) == 0 and row.l_minus(r, 1) == 0
                    assert row.e(r, 1, 1) == 0


def test_level_prefix_sums_match_nu():
    rng = random.Random(43)
    for _ in range(8):
        sc = random_complex(rng, max_vertices=5, max_size=18)
        f = random_generic_cochain(rng, sc)
        lp = cp.level_persistence(sc, f)
        for i, row in lp.rows.items():
            for r in row.degrees():
                for j in range(0, lp.grid.size - i + 1):
                    assert row.l_plus(r, j) == sum(
                        row.nu_up.get((r, kk), 0) for kk in range(j + 1)
                    )
                acc = 0
                for j in range(0, i):
                    acc += row.nu_down.get((r, j), 0)
                    assert row.l_minus(r, j) == acc


def test_level_kernels_match_elimination_oracle():
    rng = random.Random(44)
    for _ in range(6):
        sc = random_complex(rng, max_vertices=5, max_size=16)
        f = random_generic_cochain(rng, sc)
        lp = cp.level_persistence(sc, f)
        grid = lp.grid
        for i, row in lp.rows.items():
            t = grid.s(i)
            level = level_cell_complex(sc, f, t)
            n_level = len(level.cells)
            for r in range(sc.dimension + 1):
                assert row.l.get(r, 0) == oracle.homology_rank(level, r)
                for j in (1, grid.size - i):
                    if j < 1 or i + j > grid.size:
                        continue
                    band = band_cell_complex(sc, f, t, grid.s(i + j))
                    want = oracle.inclusion_kernel_dim(level, band, r, list(range(n_level)))
                    assert row.l_plus(r, j) == want
                for j in (1, i - 1):
                    if j < 1 or i - j < 1:
                        continue
                    low_val = grid.s(i - j)
                    band = band_cell_complex(sc, f, low_val, t)
                    offset = len(level_cell_complex(sc, f, low_val).cells)
                    embed = [offset + p for p in range(n_level)]
                    want = oracle.inclusion_kernel_dim(level, band, r, embed)
                    assert row.l_minus(r, j) == want


def test_simultaneous_counts_match_elimination_oracle():
    rng = random.Random(45)
    checked = 0
    cases = [(circle_complex(), cp.Cochain0((F(0), F(1), F(2))))]
    for _ in range(8):
        sc = random_complex(rng, max_vertices=5, max_size=16)
        cases.append((sc, random_generic_cochain(rng, sc)))
    for sc, f in cases:
        lp = cp.level_persistence(sc, f)
        grid = lp.grid
        for i, row in lp.rows.items():
            t = grid.s(i)
            level = level_cell_complex(sc, f, t)
            n_level = len(level.cells)
            for (r, j, k) in list(row.omega):
                bdown = band_cell_complex(sc, f, grid.s(i - j), t)
                offset = len(level_cell_complex(sc, f, grid.s(i - j)).cells)
                bup = band_cell_complex(sc, f, t, grid.s(i + k))
                want = oracle.simultaneous_kernel_dim(
                    level, bdown, bup, r,
                    [offset + p for p in range(n_level)],
                    list(range(n_level)),
                )
                assert row.e(r, j, k) == want
                checked += 1
    assert checked > 0


def test_level_single_row_matches_full_table():
    sc = circle_complex()
    f = cp.Cochain0((F(0), F(1), F(2)))
    full = cp.level_persistence(sc, f)
    single = cp.level_persistence(sc, f, at=F(1, 2))
    i = single.grid.index_of(F(1, 2))
    assert single.rows[i].l == full.rows[i].l
    assert single.rows[i].omega == full.rows[i].omega


def test_circle_fixture_row():
    sc = circle_complex()
    res = cp.cocycle_persistence(sc, circle_cocycle(), F(1, 2), base=0)
    row = res.row
    assert row.l == {0: 1}
    assert row.nu_up == {} and row.nu_down == {}
    assert row.nu_up_inf == {0: 1} and row.nu_down_inf == {0: 1}
    assert row.omega_immortal == {0: 1}
    assert res.budget == 6


def test_circle_two_disjoint_circles():
    sc = cp.build_complex(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    angles = cp.angles_from_values((F(0), F(1), F(2), F(0), F(1), F(2)), F(3))
    res = cp.circle_level_persistence(sc, angles, F(1, 2))
    row = res.row
    assert row.l == {0: 2}
    assert row.omega_immortal == {0: 2}
    assert row.nu_up == {} and row.nu_down == {}


def test_circle_level_missing_the_image():
    sc = cp.build_complex(2, [(0, 1)])
    angles = cp.angles_from_values((F(1, 4), F(1, 2)), F(3))
    res = cp.circle_level_persistence(sc, angles, F(2))
    assert res.row.l == {}


def test_circle_window_shift_invariance():
    sc = circle_complex()
    cm = cp.vertex_angles(circle_cocycle(), sc, 0)
    a = cp.circle_level_persistence(sc, cm, F(1, 2))
    b = cp.circle_level_persistence(sc, cm, F(1, 2), window_shift=1)
    for field in ("l", "nu_up", "nu_down", "nu_up_inf", "nu_down_inf", "omega", "omega_immortal"):
        assert getattr(a.row, field) == getattr(b.row, field)


def test_circle_base_point_invariance():
    sc = circle_complex()
    coc = circle_cocycle()
    base0 = cp.vertex_angles(coc, sc, 0)
    theta = F(1, 2)
    a = cp.circle_level_persistence(sc, base0, theta)
    for base in (1, 2):
        cm = cp.vertex_angles(coc, sc, base)
        shift = (cm.angle(0) - base0.angle(0)) % coc.alpha
        b = cp.circle_level_persistence(sc, cm, (theta + shift) % coc.alpha)
        for field in ("l", "nu_up", "nu_down", "nu_up_inf", "nu_down_inf", "omega", "omega_immortal"):
            assert getattr(a.row, field) == getattr(b.row, field)


def test_cocycle_persistence_rejects_bad_inputs():
    sc = circle_complex()
    not_integral = cp.AlmostIntegralCocycle(circle_cocycle().cocycle, F(2))
    with pytest.raises(NotAlmostIntegral):
        cp.cocycle_persistence(sc, not_integral, F(1, 2))
    wide = cp.Cochain1.from_mapping({(0, 1): F(1), (1, 2): F(1), (0, 2): F(-2)})
    with pytest.raises(SpanTooWide):
        cp.cocycle_persistence(sc, cp.AlmostIntegralCocycle(wide, F(4)), F(1, 2))


def test_coboundary_cocycle_matches_level_persistence():
    """With a large period, the cover splits into translates of the complex,
    so the circle row at an angle equals the level row at the matching value."""
    rng = random.Random(46)
    for _ in range(6):
        sc = random_tree(rng)
        f = cp.Cochain0(tuple(F(v) for v in rng.sample(range(0, 12), sc.vertex_count)))
        alpha = F(100)
        coc = cp.AlmostIntegralCocycle(cp.coboundary(f, sc), alpha)
        lo, hi = min(f.values), max(f.values)
        t = lo + F(1, 3)
        base = 0
        angles = cp.vertex_angles(coc, sc, base)
        theta = (t - f(base)) % alpha
        try:
            res = cp.cocycle_persistence(sc, coc, theta, base=base)
        except SpanTooWide:
            continue
        level = cp.level_persistence(sc, f, at=t)
        i = level.grid.index_of(t)
        row_f = level.rows[i]
        row_c = res.row
        assert row_c.l == row_f.l
        # compare deaths through their rational offsets
        def taus(row, grid_i, grid, up=True):
            table = row.nu_up if up else row.nu_down
            out = {}
            for (r, k), n in table.items():
                tau = (grid.s(grid_i + k) - grid.s(grid_i)) if up else (grid.s(grid_i) - grid.s(grid_i - k))
                out[(r, tau)] = n
            return out

        assert taus(row_c, res.grid_index, res.levels.grid) == taus(row_f, i, level.grid)
        assert taus(row_c, res.grid_index, res.levels.grid, up=False) == taus(row_f, i, level.grid, up=False)
        assert row_c.nu_up_inf == row_f.nu_up_inf
        assert row_c.nu_down_inf == row_f.nu_down_inf


def test_budget_doubling_keeps_finite_entries():
    sc = circle_complex()
    cm = cp.vertex_angles(circle_cocycle(), sc, 0)
    small = cp.circle_level_persistence(sc, cm, F(1, 2), budget=6)
    big = cp.circle_level_persistence(sc, cm, F(1, 2), budget=12)

    def taus(res, up=True):
        row, grid, i = res.row, res.levels.grid, res.grid_index
        table = row.nu_up if up else row.nu_down
        return {
            (r, (grid.s(i + k) - grid.s(i)) if up else (grid.s(i) - grid.s(i - k))): n
            for (r, k), n in table.items()
        }

    assert taus(small) == taus(big)
    assert taus(small, up=False) == taus(big, up=False)
    assert small.row.nu_up_inf == big.row.nu_up_inf
