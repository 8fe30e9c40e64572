import random

import pytest

import cocycle_persistence as cp
from cocycle_persistence.complexes import check_face_compatible, check_stage_compatible
from cocycle_persistence.errors import (
    EmptyInput,
    InvalidVertexId,
    NonMonotoneFiltration,
    OrderViolatesConditionA,
)

from helpers import circle_complex, filled_triangle, random_complex, random_monotone_stages


def test_build_filled_triangle_has_seven_simplices():
    sc = filled_triangle()
    assert len(sc.simplices) == 7
    assert sc.simplices == ((0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2))


def test_build_single_vertex():
    sc = cp.build_complex(1, [(0,)])
    assert sc.simplices == ((0,),)


def test_build_circle_has_no_triangle():
    sc = circle_complex()
    assert len(sc.simplices) == 6
    assert all(len(s) <= 2 for s in sc.simplices)


def test_build_rejects_bad_vertices():
    with pytest.raises(InvalidVertexId):
        cp.build_complex(2, [(0, 5)])
    with pytest.raises(EmptyInput):
        cp.build_complex(2, [()])


def test_build_adds_isolated_vertices():
    sc = cp.build_complex(3, [(0, 1)])
    assert (2,) in sc.simplices


def test_face_closure_idempotent():
    rng = random.Random(7)
    for _ in range(20):
        sc = random_complex(rng)
        again = cp.build_complex(sc.vertex_count, sc.simplices)
        assert again.simplices == sc.simplices


def test_star_on_circle():
    sc = circle_complex()
    got = cp.star(sc, 0)
    names = {sc.simplices[i] for i in got}
    assert names == {(0,), (1,), (2,), (0, 1), (0, 2)}


def test_star_single_vertex():
    sc = cp.build_complex(1, [(0,)])
    assert cp.star(sc, 0) == {0}


def test_star_filled_triangle_is_everything():
    sc = filled_triangle()
    assert cp.star(sc, 0) == set(range(7))


def test_star_bad_vertex():
    with pytest.raises(InvalidVertexId):
        cp.star(circle_complex(), 9)


def test_topological_order_dimension_sorted():
    sc = filled_triangle()
    order = cp.topological_order(sc)
    assert order.face_compatible
    dims = [sc.dim(c) for c in order.permutation]
    assert dims == sorted(dims)


def test_topological_order_empty():
    sc = cp.build_complex(0, [])
    assert cp.topological_order(sc).permutation == ()


def test_incidence_matrix_edge():
    sc = cp.build_complex(2, [(0, 1)])
    m = cp.incidence_matrix(sc, cp.topological_order(sc))
    assert m.columns == (frozenset(), frozenset(), frozenset({0, 1}))


def test_incidence_matrix_single_vertex():
    sc = cp.build_complex(1, [(0,)])
    m = cp.incidence_matrix(sc, cp.topological_order(sc))
    assert m.size == 1 and m.columns == (frozenset(),)


def test_incidence_matrix_triangle_column():
    sc = filled_triangle()
    m = cp.incidence_matrix(sc, cp.topological_order(sc))
    assert m.size == 7
    assert m.columns[6] == frozenset({3, 4, 5})
    assert m.is_upper_triangular()


def test_incidence_matrix_rejects_bad_order():
    sc = cp.build_complex(2, [(0, 1)])
    bad = cp.CellOrder((2, 0, 1))
    with pytest.raises(OrderViolatesConditionA):
        cp.incidence_matrix(sc, bad)


def test_simplex_columns_have_dim_plus_one_faces():
    rng = random.Random(3)
    for _ in range(10):
        sc = random_complex(rng)
        m = cp.incidence_matrix(sc, cp.topological_order(sc))
        for j, col in enumerate(m.columns):
            d = m.dims[j]
            assert len(col) == (d + 1 if d > 0 else 0)


def test_repair_single_swap():
    order = cp.CellOrder((0, 1, 2), face_compatible=True)
    # two vertices and an edge; the later vertex carries the earlier stage
    repaired = cp.make_filtration_compatible(order, [1, 0, 1], [(0, 2), (1, 2)])
    assert repaired.permutation == (1, 0, 2)
    assert repaired.face_compatible and repaired.stage_compatible


def test_repair_keeps_compatible_order():
    order = cp.CellOrder((0, 1, 2), face_compatible=True)
    repaired = cp.make_filtration_compatible(order, [0, 0, 1], [(0, 2), (1, 2)])
    assert repaired.permutation == (0, 1, 2)


def test_repair_rejects_nonmonotone():
    order = cp.CellOrder((0, 1, 2), face_compatible=True)
    with pytest.raises(NonMonotoneFiltration):
        cp.make_filtration_compatible(order, [0, 0, -1], [(0, 2), (1, 2)])


def test_repair_on_circle_with_two_stages():
    sc = circle_complex()
    # stage 0: edge (0,1) and its vertices; stage 1: the rest
    stages = [0 if sc.simplices[i] in {(0,), (1,), (0, 1)} else 1 for i in range(6)]
    order = cp.make_filtration_compatible(
        cp.topological_order(sc), stages, sc.codim1_pairs()
    )
    along = [stages[c] for c in order.permutation]
    assert along == sorted(along)
    assert check_face_compatible(sc.codim1_pairs(), order.permutation)


def test_repair_random_pairs_full_scan():
    rng = random.Random(11)
    for _ in range(30):
        sc = random_complex(rng)
        stages = random_monotone_stages(rng, sc)
        order = cp.make_filtration_compatible(
            cp.topological_order(sc), stages, sc.codim1_pairs()
        )
        assert check_face_compatible(sc.codim1_pairs(), order.permutation)
        assert check_stage_compatible(order.permutation, stages)
