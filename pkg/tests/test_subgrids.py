import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectralign.graph import CubicSubgrid, GraphError, cycle_graph, path_graph
from spectralign.subgrids import (canonical_shape, free_polyominoes, hamiltonian_cycle,
                                  is_hamiltonian, random_core_subgrid, random_subgrid,
                                  subgrid_catalog)


def test_free_polyomino_counts():
    # known counts of free polyominoes
    assert [len(free_polyominoes(s)) for s in range(1, 9)] == [1, 1, 2, 5, 12, 35, 108, 369]


def test_canonical_shape_symmetry():
    ell = [(0, 0), (1, 0), (2, 0), (2, 1)]
    turned = [(-y, x) for x, y in ell]
    flipped = [(x, -y) for x, y in ell]
    assert canonical_shape(ell) == canonical_shape(turned) == canonical_shape(flipped)


def test_catalog_is_cubic_and_connected():
    cat = subgrid_catalog(3, 8)
    assert len({g.points for g in cat}) == len(cat)
    for grid in cat:
        assert grid.graph.is_connected
        assert grid.graph.max_degree <= 3
        assert 3 <= grid.n <= 8
    # the plus shape has a degree-4 centre and is excluded
    plus = canonical_shape([(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)])
    assert plus not in {g.points for g in cat}


def _brute_hamiltonian(g):
    n = g.n
    if n < 3:
        return False
    for rest in itertools.permutations(range(1, n)):
        order = (0,) + rest
        if all(g.has_edge(order[i], order[(i + 1) % n]) for i in range(n)):
            return True
    return False


def test_hamiltonian_matches_brute_on_catalog():
    for grid in subgrid_catalog(3, 7):
        assert is_hamiltonian(grid.graph) == _brute_hamiltonian(grid.graph)


def test_hamiltonian_examples():
    assert hamiltonian_cycle(cycle_graph(5)) == (0, 1, 2, 3, 4)
    assert hamiltonian_cycle(path_graph(5)) is None
    block = CubicSubgrid(((0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)))
    order = hamiltonian_cycle(block.graph)
    assert sorted(order) == list(range(6))
    assert all(block.graph.has_edge(order[i], order[(i + 1) % 6]) for i in range(6))


@settings(max_examples=30)
@given(st.integers(1, 30), st.integers(0, 2**31))
def test_random_subgrid_shape(n, seed):
    grid = random_subgrid(n, np.random.default_rng(seed))
    assert grid.n == n and grid.graph.is_connected and grid.graph.max_degree <= 3


@settings(max_examples=30)
@given(st.integers(4, 30), st.integers(0, 2**31))
def test_core_subgrid_has_min_degree_two(n, seed):
    grid = random_core_subgrid(n, np.random.default_rng(seed))
    g = grid.graph
    assert 4 <= g.n <= n and g.is_connected and g.max_degree <= 3
    assert all(g.degree(a) >= 2 for a in range(g.n))


def test_random_subgrid_rejects_empty():
    with pytest.raises(GraphError):
        random_subgrid(0)
