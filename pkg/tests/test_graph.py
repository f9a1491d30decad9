import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, strategies as st

from spectralign.graph import (CubicSubgrid, Graph, GraphError, RootedTree, VertexMapping,
                               apply_permutation, bfs_distances, cut_edges, cut_weight,
                               cycle_graph, distance_matrix, generate, laplacian, path_graph,
                               pull_back, quadratic_form, quadratic_form_exact, random_tree,
                               star_graph, subtree_under_edge, tree_centroid, tree_distance)

from conftest import connected_graphs, trees


def test_laplacian_of_path():
    assert laplacian(path_graph(3)).tolist() == [[1, -1, 0], [-1, 2, -1], [0, -1, 1]]


def test_laplacian_weighted_edge():
    g = Graph.from_edges(2, [(0, 1, 2)])
    assert laplacian(g).tolist() == [[2, -2], [-2, 2]]


def test_laplacian_empty():
    assert np.array_equal(laplacian(Graph(3)), np.zeros((3, 3)))


@pytest.mark.parametrize("g, x, want", [
    (path_graph(3), (0, 1, 2), 2.0),
    (cycle_graph(3), (1, 0, -1), 6.0),
    (cycle_graph(5), (4, 4, 4, 4, 4), 0.0),
])
def test_quadratic_form_examples(g, x, want):
    assert quadratic_form(g, x) == want
    assert quadratic_form_exact(g, x) == Fraction(want)


def test_cut_edges_examples():
    assert cut_edges(path_graph(3), {0}) == {(0, 1)}
    assert cut_edges(path_graph(3), {0, 1, 2}) == frozenset()
    assert len(cut_edges(cycle_graph(4), {0, 1})) == 2


def test_subtree_under_edge_examples():
    p3 = RootedTree(path_graph(3), 0)
    assert subtree_under_edge(p3, (1, 2)) == {2}
    assert subtree_under_edge(p3, (0, 1)) == {1, 2}
    star = RootedTree(star_graph(4), 0)
    assert subtree_under_edge(star, (0, 3)) == {3}


def test_tree_distance_examples():
    assert tree_distance(path_graph(4), 0, 3) == 3
    assert tree_distance(star_graph(4), 1, 3) == 2
    assert tree_distance(path_graph(4), 2, 2) == 0


def test_apply_permutation_examples():
    p3 = path_graph(3)
    assert apply_permutation(p3, VertexMapping.identity(3)) == p3
    assert apply_permutation(p3, VertexMapping([2, 1, 0])) == p3
    c4 = cycle_graph(4)
    assert apply_permutation(c4, VertexMapping([1, 2, 3, 0])) == c4


def test_generate_examples():
    assert generate("cycle", 5) == cycle_graph(5)
    assert generate("subgrid", points=[(0, 0), (1, 0), (0, 1), (1, 1)]).edge_set == \
        Graph.from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).edge_set
    with pytest.raises(GraphError):
        generate("subgrid", points=[(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)])
    with pytest.raises(GraphError):
        generate("random_tree", 5, max_degree=1)
    with pytest.raises(GraphError):
        generate("nope", 3)


def test_generate_is_seeded():
    a = generate("random_tree", 20, max_degree=3, seed=9)
    b = generate("random_tree", 20, max_degree=3, seed=9)
    assert a == b and a.is_tree and a.max_degree <= 3


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 1), (1, 0)], [(0, 5)], [(0, 1, 0)], [(0, 1, -1)]])
def test_graph_rejects_bad_edges(edges):
    with pytest.raises(GraphError):
        Graph.from_edges(3, edges)


def test_subgrid_rejects_duplicates():
    with pytest.raises(GraphError):
        CubicSubgrid(((0, 0), (0, 0)))


def test_subgrid_keeps_coordinates():
    grid = CubicSubgrid(((0, 0), (1, 0), (2, 0)))
    assert grid.graph == path_graph(3)
    assert grid.grid_adjacent(0, 1) and not grid.grid_adjacent(0, 2)


def test_distance_matrix_disconnected():
    with pytest.raises(GraphError):
        distance_matrix(Graph(2))


def test_vertex_mapping_roundtrip():
    pi = VertexMapping([2, 0, 1])
    assert pi.inverted().compose(pi) == VertexMapping.identity(3)
    assert pi.image({0, 1}) == {2, 0}
    assert pi.preimage({2}) == {0}
    with pytest.raises(GraphError):
        VertexMapping([0, 0, 1])


def test_partial_mapping_rejected_by_apply():
    with pytest.raises(GraphError):
        apply_permutation(path_graph(3), VertexMapping([0, -1, 2]))


def test_tree_centroid_of_path():
    assert tree_centroid(path_graph(5)) == 2


def test_random_tree_respects_degree(rng):
    for _ in range(50):
        t = random_tree(int(rng.integers(1, 30)), 3, rng)
        assert t.is_tree and (t.n < 2 or t.max_degree <= 3)


# ---- properties


@given(connected_graphs(), st.data())
def test_quadratic_form_matches_laplacian(g, data):
    x = np.array(data.draw(st.lists(st.floats(-10, 10), min_size=g.n, max_size=g.n)))
    q = quadratic_form(g, x)
    assert q >= 0
    assert abs(q - x @ laplacian(g) @ x) <= 1e-12 * max(1.0, abs(q)) + 1e-12


@given(connected_graphs(), st.data())
def test_indicator_form_counts_cut(g, data):
    S = data.draw(st.sets(st.integers(0, g.n - 1)))
    x = [Fraction(1) if a in S else Fraction(0) for a in range(g.n)]
    assert quadratic_form_exact(g, x) == cut_weight(g, S) == len(cut_edges(g, S))


@given(trees(), st.data())
def test_subtree_under_edge_cuts_exactly_that_edge(t, data):
    root = data.draw(st.integers(0, t.n - 1))
    rt = RootedTree(t, root)
    for u, v, _ in t.edges:
        side = subtree_under_edge(rt, (u, v))
        assert root not in side
        assert cut_edges(t, side) == {(u, v)}


@given(connected_graphs(), st.data())
def test_permutation_relabels_quadratic_form(g, data):
    perm = data.draw(st.permutations(list(range(g.n))))
    pi = VertexMapping(perm)
    x = data.draw(st.lists(st.integers(-5, 5), min_size=g.n, max_size=g.n))
    # R(pi(G), x) = R(G, x o pi)
    x_pi = [x[pi(a)] for a in range(g.n)]
    assert quadratic_form_exact(apply_permutation(g, pi), x) == quadratic_form_exact(g, x_pi)
    assert pull_back(apply_permutation(g, pi), pi) == g


@given(trees())
def test_tree_distance_matches_bfs(t):
    rt = RootedTree(t, 0)
    for a in range(t.n):
        d = bfs_distances(t, a)
        assert all(tree_distance(rt, a, b) == d[b] for b in range(t.n))
