"""Small cubic subgrids: an exhaustive shape catalog, random growth, Hamiltonicity."""

from __future__ import annotations

import numpy as np

from .graph import CubicSubgrid, Graph, GraphError

Point = tuple[int, int]

_SYMMETRIES = (
    lambda x, y: (x, y), lambda x, y: (-x, y), lambda x, y: (x, -y), lambda x, y: (-x, -y),
    lambda x, y: (y, x), lambda x, y: (-y, x), lambda x, y: (y, -x), lambda x, y: (-y, -x),
)


def _normalize(cells) -> tuple[Point, ...]:
    mx = min(x for x, _ in cells)
    my = min(y for _, y in cells)
    return tuple(sorted((x - mx, y - my) for x, y in cells))


def canonical_shape(cells) -> tuple[Point, ...]:
    """Representative of ``cells`` up to translation, rotation and reflection."""
    return min(_normalize([f(x, y) for x, y in cells]) for f in _SYMMETRIES)


def _neighbors(p: Point):
    x, y = p
    return ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))


def _max_degree(cells) -> int:
    s = set(cells)
    return max(sum(q in s for q in _neighbors(p)) for p in s)


def free_polyominoes(size: int) -> list[tuple[Point, ...]]:
    """All connected cell sets of ``size`` cells, one per congruence class."""
    if size < 1:
        return []
    level = {((0, 0),)}
    for _ in range(size - 1):
        nxt = set()
        for shape in level:
            s = set(shape)
            for p in shape:
                for q in _neighbors(p):
                    if q not in s:
                        nxt.add(canonical_shape(s | {q}))
        level = nxt
    return sorted(level)


def subgrid_catalog(min_n: int = 3, max_n: int = 8) -> list[CubicSubgrid]:
    """Every connected cubic subgrid with ``min_n..max_n`` vertices, up to symmetry."""
    out = []
    for size in range(min_n, max_n + 1):
        for shape in free_polyominoes(size):
            if _max_degree(shape) <= 3:
                out.append(CubicSubgrid(shape))
    return out


def random_subgrid(n: int, rng=None, *, attempts: int = 1000) -> CubicSubgrid:
    """Grow a connected cubic subgrid cell by cell from the origin.

    Each step adds a uniformly chosen empty neighbor cell whose addition keeps
    every degree at most 3.
    """
    if n < 1:
        raise GraphError("random_subgrid needs n >= 1")
    rng = np.random.default_rng(rng)
    for _ in range(attempts):
        cells = [(0, 0)]
        s = {(0, 0)}
        while len(cells) < n:
            frontier = sorted({q for p in cells for q in _neighbors(p) if q not in s})
            ok = [q for q in frontier if _max_degree(s | {q}) <= 3]
            if not ok:
                break
            q = ok[int(rng.integers(len(ok)))]
            cells.append(q)
            s.add(q)
        if len(cells) == n:
            return CubicSubgrid(_normalize(cells))
    raise GraphError(f"could not grow a cubic subgrid on {n} vertices")


def hamiltonian_cycle(g: Graph) -> tuple[int, ...] | None:
    """Vertex order of a Hamiltonian cycle of ``g`` by backtracking, or ``None``.

    The cycle starts at vertex 0 and is returned in lexicographically first
    order among those found by the search.
    """
    n = g.n
    if n < 3 or not g.is_connected or any(g.degree(a) < 2 for a in range(n)):
        return None
    adj = g.adjacency
    path = [0]
    on = [False] * n
    on[0] = True

    def rec() -> bool:
        last = path[-1]
        if len(path) == n:
            return g.has_edge(last, 0)
        for b in adj[last]:
            if on[b]:
                continue
            path.append(b)
            on[b] = True
            if rec():
                return True
            path.pop()
            on[b] = False
        return False

    return tuple(path) if rec() else None


def is_hamiltonian(g: Graph) -> bool:
    return hamiltonian_cycle(g) is not None


def _two_core(cells: set) -> set:
    s = set(cells)
    while True:
        drop = [p for p in s if sum(q in s for q in _neighbors(p)) <= 1]
        if not drop:
            return s
        s.difference_update(drop)


def _largest_component(cells: set) -> set:
    left = set(cells)
    best: set = set()
    for p in sorted(cells):
        if p not in left:
            continue
        comp, stack = {p}, [p]
        left.discard(p)
        while stack:
            for q in _neighbors(stack.pop()):
                if q in left:
                    left.discard(q)
                    comp.add(q)
                    stack.append(q)
        if len(comp) > len(best):
            best = comp
    return best


def random_core_subgrid(n: int, rng=None, *, attempts: int = 100) -> CubicSubgrid:
    """Compact random subgrid with minimum degree 2 (at most ``n`` vertices).

    Growth favours cells with many filled neighbors; pendant cells are then
    peeled off and the largest remaining component kept. Such shapes reach
    the cycle-structured cases of the witness analysis far more often than
    tree-like ones.
    """
    rng = np.random.default_rng(rng)
    for _ in range(attempts):
        cells = [(0, 0)]
        s = {(0, 0)}
        while len(cells) < n:
            frontier = sorted({q for p in cells for q in _neighbors(p) if q not in s})
            ok = [q for q in frontier if _max_degree(s | {q}) <= 3]
            if not ok:
                break
            wt = np.array([8.0 ** sum(r in s for r in _neighbors(q)) for q in ok])
            q = ok[int(rng.choice(len(ok), p=wt / wt.sum()))]
            cells.append(q)
            s.add(q)
        core = _largest_component(_two_core(s))
        if len(core) >= 4:
            return CubicSubgrid(_normalize(core))
    raise GraphError(f"could not grow a cyclic subgrid from {n} cells")
