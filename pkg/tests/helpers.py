"""Shared fixtures and random generators for the test suite."""

from fractions import Fraction as F

import cocycle_persistence as cp


def edge_complex():
    return cp.build_complex(2, [(0, 1)])


def circle_complex():
    return cp.build_complex(3, [(0, 1), (1, 2), (0, 2)])


def filled_triangle():
    return cp.build_complex(3, [(0, 1, 2)])


def path_complex(n):
    return cp.build_complex(n + 1, [(i, i + 1) for i in range(n)])


def circle_cocycle(alpha=3):
    c = cp.Cochain1.from_mapping({(0, 1): F(1), (1, 2): F(1), (2, 0): F(1)})
    return cp.AlmostIntegralCocycle(c, F(alpha))


def random_complex(rng, max_vertices=7, max_maximal=6, max_size=25, max_dim=3):
    """A face-closed complex with at most ``max_size`` simplices."""
    while True:
        nv = rng.randint(1, max_vertices)
        maximal = []
        for _ in range(rng.randint(1, max_maximal)):
            size = rng.randint(1, min(max_dim + 1, nv))
            maximal.append(tuple(rng.sample(range(nv), size)))
        sc = cp.build_complex(nv, maximal)
        if len(sc.simplices) <= max_size:
            return sc


def random_generic_cochain(rng, sc, spread=60):
    values = rng.sample(range(-spread, spread), sc.vertex_count)
    denom = rng.choice([1, 1, 2, 3])
    return cp.Cochain0(tuple(F(v, denom) for v in values))


def random_monotone_stages(rng, sc, max_stage=4):
    vertex_stage = {v: rng.randint(0, max_stage) for v in range(sc.vertex_count)}
    return tuple(max(vertex_stage[v] for v in s) for s in sc.simplices)


def random_tree(rng, max_vertices=6):
    nv = rng.randint(2, max_vertices)
    edges = [(rng.randint(0, v - 1), v) for v in range(1, nv)]
    return cp.build_complex(nv, edges)
