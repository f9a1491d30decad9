"""Unique-path embeddings of one tree into another on the same vertex set.

Each edge of the demand tree ``G`` is routed along the unique path in the
host tree ``H``. Dilation is the longest route, congestion the largest
number of routes through one host edge. Their product bounds the support
``sigma(G, H)`` from above, and the stretch/cut profile sandwiches it:
``max(k, ell) <= sigma(G, H) <= k * ell``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Edge, Graph, GraphError, RootedTree, canon, cut_edges, subtree_under_edge


@dataclass(frozen=True)
class TreeEmbedding:
    demand: Graph
    host: Graph
    routes: dict[Edge, tuple[Edge, ...]]
    congestion_per_edge: dict[Edge, int]

    @property
    def dilation(self) -> int:
        return max((len(r) for r in self.routes.values()), default=0)

    @property
    def congestion(self) -> int:
        return max(self.congestion_per_edge.values(), default=0)


@dataclass(frozen=True)
class StretchCutProfile:
    k: int
    ell: int


def _require_trees(g: Graph, h: Graph):
    if g.n != h.n:
        raise GraphError(f"size mismatch: {g.n} vs {h.n} vertices")
    if not (g.is_tree and h.is_tree):
        raise GraphError("embedding needs two trees")


def tree_path(t: RootedTree, u: int, v: int) -> tuple[Edge, ...]:
    """Edges of the unique ``u``-``v`` path, by walking both ends up to the LCA."""
    left, right = [], []
    a, b = u, v
    while t.depth[a] > t.depth[b]:
        left.append(canon(a, t.parent[a]))
        a = t.parent[a]
    while t.depth[b] > t.depth[a]:
        right.append(canon(b, t.parent[b]))
        b = t.parent[b]
    while a != b:
        left.append(canon(a, t.parent[a]))
        right.append(canon(b, t.parent[b]))
        a, b = t.parent[a], t.parent[b]
    return tuple(left + right[::-1])


def embed(g: Graph, h: Graph) -> TreeEmbedding:
    _require_trees(g, h)
    th = RootedTree(h, 0)
    routes = {}
    cong = {(u, v): 0 for u, v, _ in h.edges}
    for u, v, _ in g.edges:
        path = tree_path(th, u, v)
        routes[(u, v)] = path
        for e in path:
            cong[e] += 1
    return TreeEmbedding(g, h, routes, cong)


def dilation(emb: TreeEmbedding) -> int:
    return emb.dilation


def congestion(emb: TreeEmbedding) -> int:
    return emb.congestion


def support_upper_bound(emb: TreeEmbedding) -> float:
    return float(emb.congestion * emb.dilation)


def stretch_cut_profile(g: Graph, h: Graph, root: int = 0) -> StretchCutProfile:
    """``ell``: largest ``d_H`` over ``G`` edges; ``k``: largest ``|delta_G|`` of an ``H`` edge side."""
    _require_trees(g, h)
    th = RootedTree(h, root)
    ell = 0
    for u, v, _ in g.edges:
        ell = max(ell, len(tree_path(th, u, v)))
    k = 0
    for u, v, _ in h.edges:
        side = subtree_under_edge(th, (u, v))
        k = max(k, len(cut_edges(g, side)))
    return StretchCutProfile(k=k, ell=ell)
