"""Graphs, rooted trees, vertex mappings and the cubic-subgrid carrier.

Vertex ids are dense integers ``0..n-1``. Edges are stored once, as
``(u, v, w)`` with ``u < v``, sorted. Every object in this module is
immutable after construction; transformations return new objects.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised for malformed graphs or invalid graph parameters."""


Edge = tuple[int, int]


def canon(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with positive edge weights."""

    n: int
    edges: tuple[tuple[int, int, float], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"negative vertex count {self.n}")
        seen = set()
        out = []
        for e in self.edges:
            if len(e) == 2:
                u, v = e
                w = 1
            else:
                u, v, w = e
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not w > 0:
                raise GraphError(f"non-positive weight {w} on ({u}, {v})")
            key = canon(u, v)
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            out.append((key[0], key[1], w))
        out.sort(key=lambda t: (t[0], t[1]))
        object.__setattr__(self, "edges", tuple(out))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence]) -> "Graph":
        return cls(n, tuple(tuple(e) for e in edges))

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset((u, v) for u, v, _ in self.edges)

    @cached_property
    def weights(self) -> dict[Edge, float]:
        return {(u, v): w for u, v, w in self.edges}

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def has_edge(self, u: int, v: int) -> bool:
        return canon(u, v) in self.edge_set

    def weight(self, u: int, v: int) -> float:
        return self.weights[canon(u, v)]

    @property
    def is_unweighted(self) -> bool:
        return all(w == 1 for _, _, w in self.edges)

    def with_edges(self, edges: Iterable[Sequence]) -> "Graph":
        return Graph.from_edges(self.n, edges)

    def without_edges(self, drop: Iterable[Edge]) -> "Graph":
        drop = {canon(*e[:2]) for e in drop}
        return Graph(self.n, tuple(e for e in self.edges if (e[0], e[1]) not in drop))

    def add_edges(self, extra: Iterable[Sequence]) -> "Graph":
        return Graph(self.n, self.edges + tuple(tuple(e) for e in extra))

    def scaled(self, c: float) -> "Graph":
        return Graph(self.n, tuple((u, v, w * c) for u, v, w in self.edges))

    @cached_property
    def components(self) -> tuple[frozenset[int], ...]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            stack = [s]
            while stack:
                a = stack.pop()
                for b in self.adjacency[a]:
                    if not seen[b]:
                        seen[b] = True
                        comp.append(b)
                        stack.append(b)
            comps.append(frozenset(comp))
        return tuple(comps)

    @property
    def is_connected(self) -> bool:
        return len(self.components) <= 1

    @property
    def is_tree(self) -> bool:
        return self.n >= 1 and self.m == self.n - 1 and self.is_connected

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)


def laplacian(g: Graph) -> np.ndarray:
    """Dense weighted Laplacian ``L(i,j) = -w_ij``, ``L(i,i) = sum_j w_ij``."""
    L = np.zeros((g.n, g.n))
    for u, v, w in g.edges:
        w = float(w)
        L[u, v] -= w
        L[v, u] -= w
        L[u, u] += w
        L[v, v] += w
    return L


def quadratic_form(g: Graph, x) -> float:
    """``R(g, x) = sum over edges of w (x_u - x_v)^2``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (g.n,):
        raise GraphError(f"vector of length {x.shape} for graph on {g.n} vertices")
    if not g.edges:
        return 0.0
    e = np.array([(u, v) for u, v, _ in g.edges])
    w = np.array([float(w) for _, _, w in g.edges])
    d = x[e[:, 0]] - x[e[:, 1]]
    return float(np.dot(w, d * d))


def quadratic_form_exact(g: Graph, x: Sequence) -> Fraction:
    """Exact rational quadratic form; weights and entries are converted to Fraction."""
    if len(x) != g.n:
        raise GraphError(f"vector of length {len(x)} for graph on {g.n} vertices")
    total = Fraction(0)
    for u, v, w in g.edges:
        d = Fraction(x[u]) - Fraction(x[v])
        total += Fraction(w) * d * d
    return total


def cut_edges(g: Graph, S: Iterable[int]) -> frozenset[Edge]:
    """Edges with exactly one endpoint in ``S``."""
    S = set(S)
    return frozenset((u, v) for u, v, _ in g.edges if (u in S) != (v in S))


def cut_weight(g: Graph, S: Iterable[int]) -> float:
    S = set(S)
    return sum(w for u, v, w in g.edges if (u in S) != (v in S))


def bfs_distances(g: Graph, source: int) -> list[int]:
    """Hop distances from ``source``; ``-1`` for unreachable vertices."""
    dist = [-1] * g.n
    dist[source] = 0
    q = deque([source])
    while q:
        a = q.popleft()
        for b in g.adjacency[a]:
            if dist[b] < 0:
                dist[b] = dist[a] + 1
                q.append(b)
    return dist


def distance_matrix(g: Graph) -> np.ndarray:
    """All-pairs hop distances (int array). Raises on disconnected input."""
    D = np.array([bfs_distances(g, s) for s in range(g.n)], dtype=int).reshape(g.n, g.n)
    if (D < 0).any():
        raise GraphError("graph is disconnected")
    return D


def tree_distance(t: "Graph | RootedTree", u: int, v: int) -> int:
    """Number of edges on the unique ``u``-``v`` path of a tree."""
    g = t.graph if isinstance(t, RootedTree) else t
    if not g.is_tree:
        raise GraphError("tree_distance needs a connected tree")
    return bfs_distances(g, u)[v]


# ---------------------------------------------------------------- rooted trees


@dataclass(frozen=True)
class RootedTree:
    graph: Graph
    root: int = 0
    parent: tuple[int, ...] = field(init=False)
    children: tuple[tuple[int, ...], ...] = field(init=False)
    depth: tuple[int, ...] = field(init=False)
    preorder: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        g = self.graph
        if not g.is_tree:
            raise GraphError("RootedTree needs a connected acyclic graph")
        if not 0 <= self.root < g.n:
            raise GraphError(f"root {self.root} out of range")
        parent = [-1] * g.n
        depth = [0] * g.n
        children: list[list[int]] = [[] for _ in range(g.n)]
        order = []
        stack = [self.root]
        seen = {self.root}
        while stack:
            a = stack.pop()
            order.append(a)
            for b in sorted(g.adjacency[a], reverse=True):
                if b not in seen:
                    seen.add(b)
                    parent[b] = a
                    depth[b] = depth[a] + 1
                    stack.append(b)
        for b in range(g.n):
            if parent[b] >= 0:
                children[parent[b]].append(b)
        object.__setattr__(self, "parent", tuple(parent))
        object.__setattr__(self, "children", tuple(tuple(sorted(c)) for c in children))
        object.__setattr__(self, "depth", tuple(depth))
        object.__setattr__(self, "preorder", tuple(order))

    @property
    def n(self) -> int:
        return self.graph.n

    @cached_property
    def subtree_masks(self) -> tuple[int, ...]:
        """Bitmask of the vertex set of the subtree rooted at each vertex."""
        masks = [1 << a for a in range(self.n)]
        for a in reversed(self.preorder):
            p = self.parent[a]
            if p >= 0:
                masks[p] |= masks[a]
        return tuple(masks)

    def subtree(self, u: int) -> frozenset[int]:
        return frozenset(mask_to_set(self.subtree_masks[u]))

    def child_endpoint(self, e: Sequence[int]) -> int:
        u, v = e[0], e[1]
        if not self.graph.has_edge(u, v):
            raise GraphError(f"({u}, {v}) is not a tree edge")
        return v if self.parent[v] == u else u

    def postorder(self) -> tuple[int, ...]:
        """Children before parents (reverse preorder)."""
        return tuple(reversed(self.preorder))

    def height(self) -> tuple[int, ...]:
        h = [0] * self.n
        for a in reversed(self.preorder):
            p = self.parent[a]
            if p >= 0:
                h[p] = max(h[p], h[a] + 1)
        return tuple(h)


def subtree_under_edge(t: RootedTree, e: Sequence[int]) -> frozenset[int]:
    """Side of ``t - e`` that does not contain the root."""
    return t.subtree(t.child_endpoint(e))


def tree_centroid(g: Graph) -> int:
    """Lowest-id vertex minimising the largest component left after its removal."""
    t = RootedTree(g, 0)
    sizes = [bin(m).count("1") for m in t.subtree_masks]
    best, best_val = 0, g.n + 1
    for a in range(g.n):
        worst = g.n - sizes[a]
        for c in t.children[a]:
            worst = max(worst, sizes[c])
        if worst < best_val:
            best, best_val = a, worst
    return best


def mask_to_set(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def set_to_mask(s: Iterable[int]) -> int:
    m = 0
    for a in s:
        m |= 1 << a
    return m


# ------------------------------------------------------------- vertex mappings


class VertexMapping:
    """Partial or full bijection between two vertex sets of equal size.

    ``forward[a]`` is the image of ``a`` (or ``-1``); ``inverse`` is kept in sync.
    """

    __slots__ = ("forward", "inverse")

    def __init__(self, forward: Sequence[int], n: int | None = None):
        n = len(forward) if n is None else n
        fwd = [int(b) for b in forward]
        if len(fwd) != n:
            raise GraphError("mapping length mismatch")
        inv = [-1] * n
        for a, b in enumerate(fwd):
            if b < 0:
                continue
            if b >= n or inv[b] >= 0:
                raise GraphError(f"mapping is not injective at image {b}")
            inv[b] = a
        self.forward = tuple(fwd)
        self.inverse = tuple(inv)

    @classmethod
    def identity(cls, n: int) -> "VertexMapping":
        return cls(range(n))

    @property
    def n(self) -> int:
        return len(self.forward)

    @property
    def is_complete(self) -> bool:
        return all(b >= 0 for b in self.forward)

    def __call__(self, a: int) -> int:
        return self.forward[a]

    def inverted(self) -> "VertexMapping":
        if not self.is_complete:
            raise GraphError("cannot invert a partial mapping")
        return VertexMapping(self.inverse)

    def compose(self, other: "VertexMapping") -> "VertexMapping":
        """``self after other``: ``a -> self(other(a))``."""
        return VertexMapping([self.forward[b] for b in other.forward])

    def image(self, S: Iterable[int]) -> frozenset[int]:
        return frozenset(self.forward[a] for a in S)

    def preimage(self, S: Iterable[int]) -> frozenset[int]:
        return frozenset(self.inverse[b] for b in S)

    def __eq__(self, other):
        return isinstance(other, VertexMapping) and self.forward == other.forward

    def __hash__(self):
        return hash(self.forward)

    def __repr__(self):
        return f"VertexMapping({list(self.forward)})"


def apply_permutation(g: Graph, pi: VertexMapping | Sequence[int]) -> Graph:
    """Relabel ``g``: edge ``(u, v, w)`` becomes ``(pi(u), pi(v), w)``."""
    if not isinstance(pi, VertexMapping):
        pi = VertexMapping(pi)
    if pi.n != g.n or not pi.is_complete:
        raise GraphError("apply_permutation needs a full bijection on [0, n)")
    f = pi.forward
    return Graph(g.n, tuple((f[u], f[v], w) for u, v, w in g.edges))


def pull_back(h: Graph, pi: VertexMapping) -> Graph:
    """Relabel ``h`` into the domain of ``pi`` (``h``-vertex ``y`` becomes ``pi^-1(y)``)."""
    return apply_permutation(h, pi.inverted())


# --------------------------------------------------------------- cubic subgrid


@dataclass(frozen=True)
class CubicSubgrid:
    """Induced subgraph of the integer grid on ``points``, max degree 3.

    Vertex ``i`` sits at ``points[i]``; coordinates are kept because the
    degree-3 witness construction needs grid geometry.
    """

    points: tuple[tuple[int, int], ...]
    graph: Graph = field(init=False)

    def __post_init__(self):
        pts = tuple((int(x), int(y)) for x, y in self.points)
        if len(set(pts)) != len(pts):
            raise GraphError("duplicate subgrid coordinates")
        index = {p: i for i, p in enumerate(pts)}
        edges = []
        for i, (x, y) in enumerate(pts):
            for q in ((x + 1, y), (x, y + 1)):
                j = index.get(q)
                if j is not None:
                    edges.append((i, j, 1))
        g = Graph.from_edges(len(pts), edges)
        bad = [i for i in range(g.n) if g.degree(i) > 3]
        if bad:
            raise GraphError(f"subgrid vertex {pts[bad[0]]} has degree 4")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "graph", g)

    @property
    def n(self) -> int:
        return len(self.points)

    def grid_adjacent(self, u: int, v: int) -> bool:
        (a, b), (c, d) = self.points[u], self.points[v]
        return abs(a - c) + abs(b - d) == 1


# ------------------------------------------------------------------ generators


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(n: int, center: int = 0) -> Graph:
    return Graph.from_edges(n, [(center, i) for i in range(n) if i != center])


def random_tree(n: int, max_degree: int | None = None, rng=None) -> Graph:
    """Sequential random-parent attachment; parents at the degree cap are skipped."""
    rng = np.random.default_rng(rng)
    if n <= 0:
        raise GraphError("random_tree needs n >= 1")
    if max_degree is not None and (max_degree < 1 or (max_degree < 2 and n > 2)):
        raise GraphError(f"max_degree={max_degree} infeasible for n={n}")
    deg = [0] * n
    edges = []
    for i in range(1, n):
        open_ = [p for p in range(i) if max_degree is None or deg[p] < max_degree]
        p = open_[int(rng.integers(len(open_)))]
        edges.append((p, i))
        deg[p] += 1
        deg[i] += 1
    return Graph.from_edges(n, edges)


def random_permutation(n: int, rng=None) -> VertexMapping:
    rng = np.random.default_rng(rng)
    return VertexMapping([int(a) for a in rng.permutation(n)])


def generate(kind: str, n: int | None = None, *, max_degree: int | None = None,
             points=None, seed=None) -> Graph:
    """Build a named graph family; deterministic for a fixed ``seed``."""
    if kind == "path":
        return path_graph(n)
    if kind == "cycle":
        return cycle_graph(n)
    if kind == "star":
        return star_graph(n)
    if kind == "random_tree":
        return random_tree(n, max_degree, np.random.default_rng(seed))
    if kind == "subgrid":
        if points is None:
            raise GraphError("subgrid needs a point list")
        return CubicSubgrid(tuple(map(tuple, points))).graph
    raise GraphError(f"unknown graph kind {kind!r}")
