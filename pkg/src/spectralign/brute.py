"""Exhaustive ground truth for dominance, condition numbers and tree alignment.

All searches visit permutations in lexicographic order (as arrays), so the
first mapping found, or the first minimiser, is the lexicographically
smallest one and results do not depend on the number of workers.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .graph import Graph, GraphError, VertexMapping, apply_permutation, distance_matrix, laplacian
from .spectral import DEFAULT_TOL, KERNEL_RTOL, resistance_matrix, support

DEFAULT_LIMIT = 9
FEASIBLE_LIMIT = 12


class SizeLimitError(GraphError):
    pass


def _check(g: Graph, h: Graph, limit: int, connected: bool = True):
    if g.n != h.n:
        raise GraphError(f"size mismatch: {g.n} vs {h.n} vertices")
    if g.n > limit:
        raise SizeLimitError(f"n={g.n} exceeds the exhaustive-search limit {limit}")
    if connected and not (g.is_connected and h.is_connected):
        raise GraphError("exhaustive search needs connected graphs")


def _range_basis(L: np.ndarray) -> np.ndarray:
    """``W`` with ``W^T L W = I`` on the range of ``L`` (shape ``n x rank``)."""
    vals, vecs = np.linalg.eigh(L)
    keep = vals > KERNEL_RTOL * max(vals.max(initial=0.0), 1e-300)
    return vecs[:, keep] / np.sqrt(vals[keep])


# ------------------------------------------------------------------------ SGD


def _sgd_search(g: Graph, h: Graph, tol: float, prune: bool, first: int | None):
    n = g.n
    slack = (1 + tol) * (1 + 1e-9)
    deg_g = [sum(g.weight(a, b) for b in g.adjacency[a]) for a in range(n)]
    deg_h = [sum(h.weight(a, b) for b in h.adjacency[a]) for a in range(n)]
    Rg = resistance_matrix(g)
    Rh = resistance_matrix(h)
    W = _range_basis(laplacian(g))
    Lh = laplacian(h)
    pi = [-1] * n
    used = [False] * n

    def full_ok() -> bool:
        # sigma(pi(H), G) via the whitened pencil of G
        perm = np.empty(n, dtype=int)
        perm[pi] = np.arange(n)
        Lp = Lh[np.ix_(perm, perm)]
        return float(np.linalg.eigvalsh(W.T @ Lp @ W)[-1]) <= 1 + tol

    def rec(i):
        if i == n:
            return full_ok()
        cands = [first] if (i == 0 and first is not None) else range(n)
        for b in cands:
            if used[b]:
                continue
            if prune:
                # singleton cuts, then effective resistances, are necessary conditions
                if deg_h[i] > slack * deg_g[b]:
                    continue
                if any(Rg[b, pi[j]] > slack * Rh[i, j] for j in range(i)):
                    continue
            pi[i] = b
            used[b] = True
            if rec(i + 1):
                return True
            used[b] = False
            pi[i] = -1
        return False

    return tuple(pi) if rec(0) else None


def brute_sgd(g: Graph, h: Graph, tol: float = DEFAULT_TOL, *, limit: int = DEFAULT_LIMIT,
              prune: bool = True, jobs: int = 1) -> VertexMapping | None:
    """First ``pi`` (lexicographic) with ``pi(h)`` preceding ``g``, or ``None``.

    ``pi`` maps vertices of ``h`` to vertices of ``g``. Pruning uses degree and
    effective-resistance necessary conditions; ``prune=False`` checks every
    permutation spectrally.
    """
    _check(g, h, limit)
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            parts = list(ex.map(_sgd_search, [g] * g.n, [h] * g.n, [tol] * g.n,
                                [prune] * g.n, range(g.n)))
        found = next((p for p in parts if p is not None), None)
    else:
        found = _sgd_search(g, h, tol, prune, None)
    if found is None:
        return None
    pi = VertexMapping(found)
    if support(apply_permutation(h, pi), g, tol).sigma > 1 + tol:
        raise AssertionError("brute_sgd result failed post hoc verification")
    return pi


# ----------------------------------------------------------------------- SRGI


def _srgi_chunk(g: Graph, h: Graph, first: int | None, batch: int = 4096):
    n = g.n
    W = _range_basis(laplacian(g))
    Lh = laplacian(h)
    best = (float("inf"), None)
    if first is None:
        perms = itertools.permutations(range(n))
    else:
        rest = [a for a in range(n) if a != first]
        perms = ((first,) + p for p in itertools.permutations(rest))
    while True:
        chunk = list(itertools.islice(perms, batch))
        if not chunk:
            break
        P = np.array(chunk)
        inv = np.argsort(P, axis=1)
        Lp = Lh[inv[:, :, None], inv[:, None, :]]
        mu = np.linalg.eigvalsh(W.T @ Lp @ W)
        with np.errstate(divide="ignore"):
            kappa = np.where(mu[:, 0] > 0, mu[:, -1] / mu[:, 0], np.inf)
        i = int(np.argmin(kappa))
        if kappa[i] < best[0] * (1 - 1e-12):
            best = (float(kappa[i]), chunk[i])
    return best


def brute_srgi(g: Graph, h: Graph, *, limit: int = DEFAULT_LIMIT,
               jobs: int = 1) -> tuple[VertexMapping, float]:
    """Permutation of ``h`` minimising ``kappa(g, pi(h))``, with the minimum."""
    _check(g, h, limit)
    if g.n == 1:
        return VertexMapping([0]), 1.0
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            parts = list(ex.map(_srgi_chunk, [g] * g.n, [h] * g.n, range(g.n)))
    else:
        parts = [_srgi_chunk(g, h, None)]
    best = parts[0]
    for p in parts[1:]:
        if p[0] < best[0] * (1 - 1e-12):
            best = p
    return VertexMapping(best[1]), best[0]


# ---------------------------------------------------------- tree feasibility


def brute_mapping_feasible(g: Graph, h: Graph, k: int, ell: int, *,
                           limit: int = FEASIBLE_LIMIT) -> VertexMapping | None:
    """Exhaustive search for ``pi: V(g) -> V(h)`` meeting the stretch and cut bounds.

    Stretch bounds are checked on every partial assignment; a cut bound is
    checked as soon as one side of the edge is fully placed. Integer
    arithmetic only.
    """
    _check(g, h, limit)
    if not (g.is_tree and h.is_tree):
        raise GraphError("brute_mapping_feasible needs two trees")
    n = g.n
    dG = distance_matrix(g).tolist()
    dH = distance_matrix(h).tolist()
    g_edges = [(u, v) for u, v, _ in g.edges]
    h_edges = [(u, v) for u, v, _ in h.edges]

    def sides(t: Graph, edges):
        out = []
        for u, v in edges:
            t2 = t.without_edges([(u, v)])
            comp = next(c for c in t2.components if u in c)
            out.append(sum(1 << a for a in comp))
        return out

    g_sides = sides(g, g_edges)
    h_sides = sides(h, h_edges)
    full = (1 << n) - 1

    def cut(mask, edges):
        return sum(((mask >> a) ^ (mask >> b)) & 1 for a, b in edges)

    # G edges whose image cut becomes known once vertices 0..i are placed
    g_due: list[list[int]] = [[] for _ in range(n)]
    for idx, S in enumerate(g_sides):
        done_s = (S.bit_length() - 1)
        done_c = ((full ^ S).bit_length() - 1)
        g_due[min(done_s, done_c)].append(idx)
    g_back: list[list[int]] = [[] for _ in range(n)]
    for a, b in g_edges:
        g_back[max(a, b)].append(min(a, b))
    h_adj = h.adjacency

    pi = [-1] * n
    inv = [-1] * n

    def rec(i, used_mask, h_checked):
        if i == n:
            return True
        for y in range(n):
            if (used_mask >> y) & 1:
                continue
            if any(dH[y][pi[a]] > ell for a in g_back[i]):
                continue
            if any(inv[z] >= 0 and dG[i][inv[z]] > ell for z in h_adj[y]):
                continue
            pi[i], inv[y] = y, i
            used = used_mask | (1 << y)
            ok = True
            placed = (1 << (i + 1)) - 1
            for idx in g_due[i]:
                S = g_sides[idx]
                part = S if S & ~placed == 0 else full ^ S
                img = 0
                for a in range(i + 1):
                    if (part >> a) & 1:
                        img |= 1 << pi[a]
                if cut(img, h_edges) > k:
                    ok = False
                    break
            newly = h_checked
            if ok:
                for idx, Y in enumerate(h_sides):
                    if (h_checked >> idx) & 1:
                        continue
                    if Y & ~used == 0 or (full ^ Y) & ~used == 0:
                        part = Y if Y & ~used == 0 else full ^ Y
                        pre = 0
                        for z in range(n):
                            if (part >> z) & 1:
                                pre |= 1 << inv[z]
                        if cut(pre, g_edges) > k:
                            ok = False
                            break
                        newly |= 1 << idx
            if ok and rec(i + 1, used, newly):
                return True
            pi[i], inv[y] = -1, -1
        return False

    return VertexMapping(pi) if rec(0, 0, 0) else None
