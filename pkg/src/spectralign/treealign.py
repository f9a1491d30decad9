"""Dynamic programming alignment of bounded-degree trees.

Given trees ``G`` and ``H`` on ``n`` vertices, ``align_trees`` looks for a
bijection ``pi: V(G) -> V(H)`` such that

* every ``G`` edge is stretched to ``H`` distance at most ``ell``,
* every ``H`` edge is stretched to ``G`` distance at most ``ell`` (via ``pi^-1``),
* the image of every single-edge side of ``G`` is cut by at most ``k`` ``H`` edges,
* the preimage of every single-edge side of ``H`` is cut by at most ``k`` ``G`` edges.

The table is indexed by tuples ``(u, T, v, u_1..u_x, S_1..S_x)``: the
subtree of ``G`` under ``u`` goes onto the ``H`` vertex set ``T`` with ``u``
on ``v``; ``T`` has ``x <= k`` boundary edges ``e_1..e_x`` (in a fixed
edge order), ``u_j`` is sent to the ``T`` endpoint of ``e_j`` and ``S_j`` onto
the side of ``e_j`` away from the ``H`` root. An entry is positive when some
mapping realizes the tuple and keeps stretches and cuts bounded inside the
subtree and inside ``T``; positive entries store such a mapping.

Entries are produced bottom-up. For a vertex ``u`` with children
``a_1..a_t``, every combination of positive child entries plus an image
``v`` for ``u`` is merged: children's certificates are copied on their
subtrees, ``u`` goes to ``v``, and the outside is filled so each ``S_j``
lands on its target side. Only entries that pass the full checker are kept.
Vertex sets are int bitmasks throughout.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .graph import (
    Graph,
    GraphError,
    RootedTree,
    VertexMapping,
    distance_matrix,
    mask_to_set,
    pull_back,
    set_to_mask,
    tree_centroid,
)


@dataclass(frozen=True)
class GammaTuple:
    u: int
    T: frozenset
    v: int
    boundary_vertices: tuple[int, ...]
    boundary_sets: tuple[frozenset, ...]

    @property
    def x(self) -> int:
        return len(self.boundary_vertices)


class ZTable(dict):
    """Positive table entries: ``GammaTuple -> VertexMapping`` certificate.

    Entries absent from the table are zero.
    """

    def z(self, alpha: GammaTuple) -> int:
        return int(alpha in self)


def popcount(m: int) -> int:
    return bin(m).count("1")


def _bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


class _Entry:
    __slots__ = ("u", "T", "v", "boundary", "fwd", "inv", "_pre")

    def __init__(self, u, T, v, boundary, fwd):
        self.u = u
        self.T = T
        self.v = v
        self.boundary = boundary
        self.fwd = fwd
        inv = [0] * len(fwd)
        for a, b in enumerate(fwd):
            inv[b] = a
        self.inv = inv
        self._pre = {}

    def preimage(self, mask: int) -> int:
        """Preimage of ``mask & T`` under the stored certificate."""
        mask &= self.T
        got = self._pre.get(mask)
        if got is None:
            got = 0
            inv = self.inv
            for y in _bits(mask):
                got |= 1 << inv[y]
            self._pre[mask] = got
        return got

    @property
    def key(self):
        return (self.u, self.T, self.v, self.boundary)


class TreePair:
    """Rooted trees ``G`` (at ``r_g``) and ``H`` (at ``r_h``) with parameters ``k``, ``ell``.

    Holds the precomputed distances, subtree masks, edge order and the
    candidate boundary sets shared by the checker and the table builder.
    """

    def __init__(self, G: RootedTree, H: RootedTree, k: int, ell: int):
        if G.n != H.n:
            raise GraphError(f"size mismatch: {G.n} vs {H.n} vertices")
        if k < 1 or ell < 1:
            raise GraphError("k and ell must be at least 1")
        self.G, self.H, self.k, self.ell = G, H, k, ell
        self.n = n = G.n
        self.full = (1 << n) - 1
        self.rg, self.rh = G.root, H.root
        self.dG = distance_matrix(G.graph).tolist()
        self.dH = distance_matrix(H.graph).tolist()
        self.subG = G.subtree_masks
        self.subH = H.subtree_masks
        self.g_edges = [(u, v) for u, v, _ in G.graph.edges]
        self.h_edges = [(u, v) for u, v, _ in H.graph.edges]
        # the fixed edge order on H is the sorted canonical order
        self.h_index = {e: i for i, e in enumerate(self.h_edges)}
        self.h_child = [v if H.parent[v] == u else u for u, v in self.h_edges]
        self.h_side = [self.subH[c] for c in self.h_child]
        self.h_incident = [[] for _ in range(n)]
        for i, (a, b) in enumerate(self.h_edges):
            self.h_incident[a].append(i)
            self.h_incident[b].append(i)
        self._cutG: dict[int, int] = {}
        self._cutH: dict[int, int] = {}
        self.s_candidates = self._parity_sets(G, self.g_edges, k)
        self.s_by_size: dict[int, list[int]] = {}
        for S in self.s_candidates:
            self.s_by_size.setdefault(popcount(S), []).append(S)
        self.t_candidates = self._parity_sets(H, self.h_edges, k)

    # ---- set primitives

    @staticmethod
    def _parity_sets(t: RootedTree, edges, k) -> list[int]:
        """Root-free vertex sets whose boundary is exactly ``D``, for ``1 <= |D| <= k``.

        For a tree the boundary determines the set: a vertex is inside iff its
        root path crosses ``D`` an odd number of times.
        """
        child = [v if t.parent[v] == u else u for u, v in edges]
        sub = t.subtree_masks
        out = []
        for x in range(1, k + 1):
            for D in itertools.combinations(range(len(edges)), x):
                m = 0
                for i in D:
                    m ^= sub[child[i]]
                out.append(m)
        return out

    def cut_g(self, mask: int) -> int:
        got = self._cutG.get(mask)
        if got is None:
            got = sum(((mask >> u) ^ (mask >> v)) & 1 for u, v in self.g_edges)
            self._cutG[mask] = got
        return got

    def cut_h(self, mask: int) -> int:
        got = self._cutH.get(mask)
        if got is None:
            got = sum(((mask >> u) ^ (mask >> v)) & 1 for u, v in self.h_edges)
            self._cutH[mask] = got
        return got

    def h_boundary(self, T: int) -> list[int]:
        """Indices (in the fixed order) of ``H`` edges crossing ``T``."""
        return [i for i, (u, v) in enumerate(self.h_edges) if ((T >> u) ^ (T >> v)) & 1]

    @staticmethod
    def image(fwd, mask: int) -> int:
        out = 0
        for a in _bits(mask):
            out |= 1 << fwd[a]
        return out

    # ---- certificate check

    def check(self, u, T, v, boundary, fwd, inv) -> bool:
        """All five realization conditions for the tuple against mapping ``fwd``."""
        if fwd[self.rg] != self.rh or fwd[u] != v:
            return False
        sub = self.subG[u]
        if self.image(fwd, sub) != T:
            return False
        D = self.h_boundary(T)
        if [b[0] for b in boundary] != D:
            return False
        for e, uj, S in boundary:
            a, b = self.h_edges[e]
            vj = a if (T >> a) & 1 else b
            if fwd[uj] != vj or self.image(fwd, S) != self.h_side[e]:
                return False
        ell, k = self.ell, self.k
        dH, dG = self.dH, self.dG
        parG, parH = self.G.parent, self.H.parent
        for c in _bits(sub & ~(1 << u)):
            p = parG[c]
            if dH[fwd[c]][fwd[p]] > ell:
                return False
            if self.cut_h(self.image(fwd, self.subG[c])) > k:
                return False
        for y in _bits(T):
            p = parH[y]
            if p < 0 or not (T >> p) & 1:
                continue
            if dG[inv[y]][inv[p]] > ell:
                return False
            if self.cut_g(self.image(inv, self.subH[y])) > k:
                return False
        return True

    def check_full(self, fwd) -> bool:
        """The four global conditions on a complete mapping."""
        inv = [0] * self.n
        for a, b in enumerate(fwd):
            inv[b] = a
        for u, v in self.g_edges:
            if self.dH[fwd[u]][fwd[v]] > self.ell:
                return False
        for u, v in self.h_edges:
            if self.dG[inv[u]][inv[v]] > self.ell:
                return False
        for u, v in self.g_edges:
            c = v if self.G.parent[v] == u else u
            if self.cut_h(self.image(fwd, self.subG[c])) > self.k:
                return False
        for u, v in self.h_edges:
            c = v if self.H.parent[v] == u else u
            if self.cut_g(self.image(inv, self.subH[c])) > self.k:
                return False
        return True

    # ---- merging

    def extend(self, inside: dict, sub: int, T: int, boundary):
        """Complete ``inside`` (defined on ``sub``, onto ``T``) to a bijection.

        Outside vertices are grouped by which boundary sets contain them (and
        whether they are the root); each group is matched in increasing id
        order to the ``H`` group with the same signature. Returns ``None`` when
        group sizes differ.
        """
        n = self.n
        g_cells: dict[tuple, list[int]] = {}
        h_cells: dict[tuple, list[int]] = {}
        Ss = [S for _, _, S in boundary]
        sides = [self.h_side[e] for e, _, _ in boundary]
        for a in range(n):
            if (sub >> a) & 1:
                continue
            sig = (a == self.rg,) + tuple((S >> a) & 1 for S in Ss)
            g_cells.setdefault(sig, []).append(a)
        for y in range(n):
            if (T >> y) & 1:
                continue
            sig = (y == self.rh,) + tuple((S >> y) & 1 for S in sides)
            h_cells.setdefault(sig, []).append(y)
        if len(g_cells) != len(h_cells):
            return None
        fwd = [-1] * n
        for a, b in inside.items():
            fwd[a] = b
        for sig, gs in g_cells.items():
            hs = h_cells.get(sig)
            if hs is None or len(hs) != len(gs):
                return None
            for a, b in zip(gs, hs):
                fwd[a] = b
        return fwd

    def _finish(self, u, T, v, boundary, inside, table) -> bool:
        key = (u, T, v, boundary)
        if key in table:
            return True
        fwd = self.extend(inside, self.subG[u], T, boundary)
        if fwd is None:
            return False
        entry = _Entry(u, T, v, boundary, tuple(fwd))
        if not self.check(u, T, v, boundary, entry.fwd, entry.inv):
            return False
        table[key] = entry
        return True

    def _new_edge_choices(self, e: int, required: int, sub: int) -> list[int]:
        side = self.h_side[e]
        return [S for S in self.s_by_size.get(popcount(side), ()) if S & sub == required]

    def leaf_entries(self, u: int, table: dict):
        sub = self.subG[u]
        for v in range(self.n):
            if v == self.rh:
                continue
            D = sorted(self.h_incident[v])
            if not 1 <= len(D) <= self.k:
                continue
            T = 1 << v
            choices = []
            for e in D:
                req = sub if (self.h_side[e] >> v) & 1 else 0
                choices.append(self._new_edge_choices(e, req, sub))
            for combo in itertools.product(*choices):
                boundary = tuple((e, u, S) for e, S in zip(D, combo))
                self._finish(u, T, v, boundary, {u: v}, table)

    def _child_combos(self, b: int, u: int, child_lists):
        """Pairwise-consistent choices of one entry per child, given ``u -> b``."""
        subG = self.subG
        chosen: list[_Entry] = []

        def compatible(x: _Entry, y: _Entry) -> bool:
            if x.T & y.T:
                return False
            cy = subG[y.u]
            for e, _, S in x.boundary:
                if S & cy != y.preimage(self.h_side[e]):
                    return False
            cx = subG[x.u]
            for e, _, S in y.boundary:
                if S & cx != x.preimage(self.h_side[e]):
                    return False
            return True

        def rec(i):
            if i == len(child_lists):
                yield tuple(chosen)
                return
            for cand in child_lists[i]:
                if all(compatible(c, cand) for c in chosen):
                    chosen.append(cand)
                    yield from rec(i + 1)
                    chosen.pop()

        yield from rec(0)

    def _filtered_children(self, b: int, u: int, table) -> list[list[_Entry]]:
        lists = []
        for c in self.G.children[u]:
            keep = []
            for ent in table[c].values():
                if (ent.T >> b) & 1 or self.dH[b][ent.v] > self.ell:
                    continue
                if any(((S >> u) & 1) != ((self.h_side[e] >> b) & 1) for e, _, S in ent.boundary):
                    continue
                keep.append(ent)
            lists.append(keep)
        return lists

    def internal_entries(self, u: int, tables: dict):
        table = tables[u]
        sub = self.subG[u]
        for b in range(self.n):
            if b == self.rh:
                continue
            lists = self._filtered_children(b, u, tables)
            if any(not lst for lst in lists):
                continue
            for combo in self._child_combos(b, u, lists):
                T = 1 << b
                for ent in combo:
                    T |= ent.T
                D = self.h_boundary(T)
                if not 1 <= len(D) <= self.k:
                    continue
                inherited = {}
                for ent in combo:
                    for e, uj, S in ent.boundary:
                        inherited[e] = (uj, S)
                inside = {u: b}
                for ent in combo:
                    for a in _bits(self.subG[ent.u]):
                        inside[a] = ent.fwd[a]
                fixed, free = [], []
                for e in D:
                    if e in inherited:
                        fixed.append(e)
                    else:
                        free.append(e)
                choices = []
                for e in free:
                    side = self.h_side[e]
                    req = (1 << u) if (side >> b) & 1 else 0
                    for ent in combo:
                        req |= ent.preimage(side)
                    choices.append(self._new_edge_choices(e, req, sub))
                for picks in itertools.product(*choices):
                    pick = dict(zip(free, picks))
                    boundary = tuple(
                        (e, *inherited[e]) if e in inherited else (e, u, pick[e]) for e in D
                    )
                    self._finish(u, T, b, boundary, inside, table)

    def z_tables(self) -> dict[int, dict]:
        """Positive entries per non-root ``G`` vertex, children before parents."""
        tables: dict[int, dict] = {}
        for u in self.G.postorder():
            if u == self.rg:
                continue
            tables[u] = {}
            if self.G.children[u]:
                self.internal_entries(u, tables)
            else:
                self.leaf_entries(u, tables[u])
        return tables

    def root_mapping(self, tables) -> tuple | None:
        """Combine entries of the root's children into a full mapping with ``r_g -> r_h``."""
        rg, rh = self.rg, self.rh
        if self.n == 1:
            return (0,)
        lists = self._filtered_children(rh, rg, tables)
        if any(not lst for lst in lists):
            return None
        for combo in self._child_combos(rh, rg, lists):
            T = 1 << rh
            for ent in combo:
                T |= ent.T
            if T != self.full:
                continue
            fwd = [-1] * self.n
            fwd[rg] = rh
            for ent in combo:
                for a in _bits(self.subG[ent.u]):
                    fwd[a] = ent.fwd[a]
            if self.check_full(fwd):
                return tuple(fwd)
        return None

    # ---- conversions

    def to_gamma(self, ent: _Entry) -> GammaTuple:
        return GammaTuple(
            u=ent.u,
            T=frozenset(mask_to_set(ent.T)),
            v=ent.v,
            boundary_vertices=tuple(uj for _, uj, _ in ent.boundary),
            boundary_sets=tuple(frozenset(mask_to_set(S)) for _, _, S in ent.boundary),
        )

    def from_gamma(self, alpha: GammaTuple):
        T = set_to_mask(alpha.T)
        D = self.h_boundary(T)
        if len(D) != alpha.x:
            return None
        boundary = tuple(
            (e, uj, set_to_mask(S)) for e, uj, S in zip(D, alpha.boundary_vertices, alpha.boundary_sets)
        )
        return alpha.u, T, alpha.v, boundary


# ------------------------------------------------------------------ public API


def _rooted(t, root=None) -> RootedTree:
    if isinstance(t, RootedTree):
        return t
    return RootedTree(t, tree_centroid(t) if root is None else root)


def in_gamma(alpha: GammaTuple, G: RootedTree, H: RootedTree, k: int) -> bool:
    """Membership test for the tuple family (root exclusions and cut bounds)."""
    n = G.n
    rg, rh = G.root, H.root
    if not (0 <= alpha.u < n and 0 <= alpha.v < n):
        return False
    if alpha.u == rg or alpha.v == rh or rh in alpha.T:
        return False
    if any(uj == rg for uj in alpha.boundary_vertices):
        return False
    if any(rg in S for S in alpha.boundary_sets):
        return False
    tp = TreePair(G, H, k, 1)
    x = tp.cut_h(set_to_mask(alpha.T))
    if x != alpha.x or not 1 <= x <= k:
        return False
    return all(1 <= tp.cut_g(set_to_mask(S)) <= k for S in alpha.boundary_sets)


def count_gamma(G: RootedTree, H: RootedTree, k: int) -> int:
    """Exact number of tuples in the family, by the product formula.

    ``T`` and each ``S_j`` are determined by their boundary edge sets, so
    there are ``C(n-1, x)`` choices of ``T`` with ``x`` boundary edges and
    ``sum_{t<=k} C(n-1, t)`` choices of each ``S_j``; ``u``, ``v`` and the
    ``u_j`` range over the ``n - 1`` non-root vertices.
    """
    n = G.n
    m = n - 1
    n_sets = sum(math.comb(m, t) for t in range(1, k + 1))
    return sum(math.comb(m, x) * m * m * m**x * n_sets**x for x in range(1, k + 1))


def enumerate_gamma(G: RootedTree, H: RootedTree, k: int) -> Iterator[GammaTuple]:
    """Every tuple of the family, lazily (sizes grow like ``n^(O(k^2))``)."""
    tp = TreePair(G, H, k, 1)
    nonroot_g = [a for a in range(G.n) if a != G.root]
    nonroot_h = [a for a in range(H.n) if a != H.root]
    s_sets = [frozenset(mask_to_set(S)) for S in tp.s_candidates]
    for T in tp.t_candidates:
        x = len(tp.h_boundary(T))
        Tset = frozenset(mask_to_set(T))
        for u in nonroot_g:
            for v in nonroot_h:
                for us in itertools.product(nonroot_g, repeat=x):
                    for Ss in itertools.product(s_sets, repeat=x):
                        yield GammaTuple(u, Tset, v, tuple(us), tuple(Ss))


def check_z_alpha_pi(alpha: GammaTuple, pi: VertexMapping, G: RootedTree, H: RootedTree,
                     k: int, ell: int) -> bool:
    """Whether ``pi`` certifies the tuple ``alpha`` (all five conditions)."""
    if not isinstance(pi, VertexMapping):
        pi = VertexMapping(pi)
    if not pi.is_complete:
        raise GraphError("check_z_alpha_pi needs a full bijection")
    tp = TreePair(G, H, k, ell)
    raw = tp.from_gamma(alpha)
    if raw is None:
        return False
    return tp.check(*raw, pi.forward, pi.inverse)


def merge_mappings(alpha: GammaTuple, children: Sequence[GammaTuple], certs: Sequence[VertexMapping],
                   G: RootedTree, H: RootedTree, k: int, ell: int) -> VertexMapping | None:
    """Glue child certificates under ``alpha`` and extend outside the subtree.

    Returns the merged mapping when it certifies ``alpha``; ``None`` when the
    child images overlap, the outside cannot be matched, or the check fails.
    """
    want = sorted(G.children[alpha.u])
    if sorted(c.u for c in children) != want or len(certs) != len(children):
        raise GraphError("child tuples must cover exactly the children of alpha.u")
    tp = TreePair(G, H, k, ell)
    raw = tp.from_gamma(alpha)
    if raw is None:
        return None
    u, T, v, boundary = raw
    inside = {u: v}
    used = 1 << v
    for child, cert in zip(children, certs):
        cert = cert if isinstance(cert, VertexMapping) else VertexMapping(cert)
        img = set_to_mask(child.T)
        if img & used:
            return None
        used |= img
        for a in _bits(tp.subG[child.u]):
            inside[a] = cert.forward[a]
    if used != T:
        return None
    for e, _, S in boundary:
        if popcount(S) != popcount(tp.h_side[e]):
            return None
    fwd = tp.extend(inside, tp.subG[u], T, boundary)
    if fwd is None:
        return None
    pi = VertexMapping(fwd)
    return pi if tp.check(u, T, v, boundary, pi.forward, pi.inverse) else None


def compute_z_table(G: RootedTree, H: RootedTree, k: int, ell: int, d: int | None = None) -> ZTable:
    """All positive entries with one certificate each."""
    if d is not None and max(G.graph.max_degree, H.graph.max_degree) > d:
        raise GraphError(f"maximum degree exceeds d={d}")
    tp = TreePair(G, H, k, ell)
    table = ZTable()
    for entries in tp.z_tables().values():
        for ent in entries.values():
            table[tp.to_gamma(ent)] = VertexMapping(ent.fwd)
    return table


def _align_with_root(G: RootedTree, H: Graph, rh: int, k: int, ell: int):
    tp = TreePair(G, RootedTree(H, rh), k, ell)
    return tp.root_mapping(tp.z_tables())


def check_mapping(G: Graph, H: Graph, pi: VertexMapping, k: int, ell: int) -> bool:
    """The four stretch and cut conditions for a complete mapping ``V(G) -> V(H)``."""
    tp = TreePair(RootedTree(G, 0), RootedTree(H, 0), k, ell)
    return tp.check_full(list(pi.forward))


def align_trees(G: Graph, H: Graph, k: int, ell: int, *, root: int | None = None,
                jobs: int = 1) -> VertexMapping | None:
    """A mapping ``V(G) -> V(H)`` meeting all stretch and cut bounds, or ``None``.

    ``G`` is rooted at ``root`` (default: its centroid); every ``H`` vertex
    is tried as the image of that root, in increasing id order.
    """
    if G.n != H.n:
        raise GraphError(f"size mismatch: {G.n} vs {H.n} vertices")
    if not (G.is_tree and H.is_tree):
        raise GraphError("align_trees needs two trees")
    tg = _rooted(G, root)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_align_with_root, [tg] * H.n, [H] * H.n, range(H.n),
                                  [k] * H.n, [ell] * H.n))
        found = next((r for r in results if r is not None), None)
    else:
        found = None
        for rh in range(H.n):
            found = _align_with_root(tg, H, rh, k, ell)
            if found is not None:
                break
    if found is None:
        return None
    pi = VertexMapping(found)
    if not check_mapping(G, H, pi, k, ell):
        raise AssertionError("dynamic program produced a mapping that fails verification")
    return pi


@dataclass(frozen=True)
class SRGICertificate:
    mapping: VertexMapping
    k: int
    ell: int
    kappa_certified: float


def srgi_certify(G: Graph, H: Graph, kappa_budget: float, tol: float = 1e-6) -> SRGICertificate | None:
    """Smallest ``k * ell`` grid point with an alignment, plus its spectral condition number."""
    from .spectral import condition

    top = max(1, math.ceil(kappa_budget))
    grid = sorted(itertools.product(range(1, top + 1), repeat=2), key=lambda p: (p[0] * p[1], p))
    for k, ell in grid:
        pi = align_trees(G, H, k, ell)
        if pi is None:
            continue
        kappa = condition(G, pull_back(H, pi)).kappa
        if kappa > (k * ell) ** 2 + tol:
            raise AssertionError(f"kappa {kappa} exceeds (k*ell)^2 = {(k * ell) ** 2}")
        return SRGICertificate(pi, k, ell, kappa)
    return None

