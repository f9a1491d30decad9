"""Hamiltonian cycle to spectral dominance: the reduction and its explicit witnesses.

A cubic subgrid ``G`` on ``n`` vertices is paired with the cycle ``C_n``. Some
placement of the cycle is dominated by ``G`` exactly when ``G`` is
Hamiltonian. For a placement ``H`` that is not a subgraph of ``G`` the
functions here build a rational vector ``x`` with ``R(H, x) > R(G, x)``:
shared edges are removed, pendant ``G`` edges with no ``H`` edge at their tip
are pruned, and a local construction is chosen by a fixed case analysis on the
remaining black (``G'``) and blue (``H'``) edges. Local witnesses are lifted
back through the prunes and the removed shared edges, which changes neither
side's difference.

All witness arithmetic uses ``fractions.Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graph import (CubicSubgrid, Graph, GraphError, VertexMapping, apply_permutation,
                    bfs_distances, canon, cut_edges, cycle_graph, quadratic_form_exact)
from .spectral import support

# case tags, also used in witness JSON
DEGREE_ONE = "degree_one"
W2_DEGREE3 = "w2_degree3"
W2_DEGREE2 = "w2_degree2"
ISOLATED_CUT = "isolated_cut"
LONG_CYCLE = "long_cycle"
LONG_CYCLE_CUT = "long_cycle_cut"
FOUR_CYCLE_CUT = "four_cycle_cut"
SPECTRAL = "spectral"


class PatternError(GraphError):
    """Arguments do not match the vertex pattern a construction needs."""


class ResolveInvariantError(RuntimeError):
    """The case analysis reached a state it should never reach; carries a state dump."""

    def __init__(self, message: str, state: dict):
        super().__init__(f"{message}; state={state}")
        self.state = state


@dataclass(frozen=True)
class ReductionInstance:
    grid: CubicSubgrid
    h: Graph

    @property
    def g(self) -> Graph:
        return self.grid.graph

    @property
    def n(self) -> int:
        return self.grid.n


@dataclass(frozen=True)
class StrippedPair:
    """Black graph ``g_prime`` and blue graph ``h_prime`` after strip and prune.

    ``lift_log`` lists the pruned black edges as ``(v, w)`` with ``v`` the
    pendant end, in deletion order.
    """

    g_prime: Graph
    h_prime: Graph
    lift_log: tuple[tuple[int, int], ...] = ()

    @property
    def n(self) -> int:
        return self.g_prime.n


@dataclass(frozen=True)
class Witness:
    """``x`` with ``lhs = R(H, x) > rhs = R(G, x)``.

    ``local`` keeps ``(lhs, rhs)`` of the construction on the stripped pair
    when the witness was lifted; ``cycle`` is the placement it refutes.
    """

    x: tuple[Fraction, ...]
    lhs: Fraction
    rhs: Fraction
    case: str
    local: tuple[Fraction, Fraction] | None = None
    cycle: Graph | None = field(default=None, compare=False)

    @property
    def gap(self) -> Fraction:
        return self.lhs - self.rhs


@dataclass(frozen=True)
class HamiltonianCycle:
    order: tuple[int, ...]
    graph: Graph
    improvements: int = 0


def _exact(g: Graph, h: Graph, x, case: str) -> Witness:
    x = tuple(Fraction(a) for a in x)
    return Witness(x, quadratic_form_exact(h, x), quadratic_form_exact(g, x), case)


def _strict(w: Witness, what: str) -> Witness:
    if not w.lhs > w.rhs:
        raise ResolveInvariantError(f"{what} is not strict", {"lhs": str(w.lhs), "rhs": str(w.rhs),
                                                              "x": [str(a) for a in w.x]})
    return w


# ------------------------------------------------------------------ reduction


def reduce_hamiltonian(grid: CubicSubgrid) -> ReductionInstance:
    if grid.n < 3:
        raise GraphError("the reduction needs at least 3 vertices")
    return ReductionInstance(grid, cycle_graph(grid.n))


def strip_shared_edges(g: Graph, h: Graph) -> tuple[Graph, Graph]:
    if g.n != h.n:
        raise GraphError(f"size mismatch: {g.n} vs {h.n} vertices")
    shared = g.edge_set & h.edge_set
    return g.without_edges(shared), h.without_edges(shared)


def prune_degree_one(g_prime: Graph, h_prime: Graph) -> StrippedPair:
    """Repeatedly drop the black edge at the lowest pendant vertex with no blue edge."""
    g = g_prime
    log = []
    while True:
        v = next((a for a in range(g.n) if g.degree(a) == 1 and h_prime.degree(a) == 0), None)
        if v is None:
            return StrippedPair(g, h_prime, tuple(log))
        w = g.adjacency[v][0]
        log.append((v, w))
        g = g.without_edges([canon(v, w)])


def lift_witness(w: Witness, lift_log) -> Witness:
    """Undo prunes in reverse, copying the neighbor's value onto each pendant vertex."""
    x = list(w.x)
    for v, u in reversed(tuple(lift_log)):
        x[v] = x[u]
    return Witness(tuple(x), w.lhs, w.rhs, w.case, w.local, w.cycle)


def restore_shared(w: Witness, g: Graph, h: Graph) -> Witness:
    """Re-evaluate a stripped-pair witness on the full pair; the gap is unchanged."""
    full = _exact(g, h, w.x, w.case)
    return Witness(full.x, full.lhs, full.rhs, w.case, (w.lhs, w.rhs), h)


def verify_witness(w: Witness, g: Graph, h: Graph) -> bool:
    """Exact recheck: stored sides match and ``R(h, x) > R(g, x)``."""
    if len(w.x) != g.n or g.n != h.n:
        return False
    lhs = quadratic_form_exact(h, w.x)
    rhs = quadratic_form_exact(g, w.x)
    return lhs == w.lhs and rhs == w.rhs and lhs > rhs


# -------------------------------------------------------- local constructions


def _black(sp, a, b) -> bool:
    return sp.g_prime.has_edge(a, b)


def _blue(sp, a, b) -> bool:
    return sp.h_prime.has_edge(a, b)


def _fill(n: int, default) -> list[Fraction]:
    return [Fraction(default)] * n


def witness_degree1(sp: StrippedPair, v: int) -> Witness:
    """Pendant black vertex ``v`` that still has a blue edge."""
    g, h = sp.g_prime, sp.h_prime
    if g.degree(v) != 1 or h.degree(v) < 1:
        raise PatternError(f"vertex {v} needs black degree 1 and blue degree >= 1")
    w = g.adjacency[v][0]
    x = _fill(sp.n, 1)
    x[v], x[w] = Fraction(0), Fraction(1, 2)
    return _strict(_exact(g, h, x, DEGREE_ONE), "degree-one witness")


def witness_w2_degree3(sp: StrippedPair, u, v, w1, w2, w3) -> Witness:
    g, h = sp.g_prime, sp.h_prime
    if len({u, v, w1, w2, w3}) != 5:
        raise PatternError("the five pattern vertices must be distinct")
    if not (_black(sp, u, w1) and _black(sp, w1, w2) and _black(sp, w2, w3)):
        raise PatternError("u-w1, w1-w2, w2-w3 must be black edges")
    if _black(sp, v, w1) or _black(sp, v, w2):
        raise PatternError("v-w1 and v-w2 must not be black edges")
    if not _blue(sp, u, v) or _blue(sp, u, w2):
        raise PatternError("u-v must be blue and u-w2 must not be")
    x = _fill(sp.n, 1)
    x[u], x[v], x[w1], x[w2] = Fraction(0), Fraction(2), Fraction(1, 3), Fraction(2, 3)
    return _strict(_exact(g, h, x, W2_DEGREE3), "five-vertex witness")


def witness_w2_degree2(sp: StrippedPair, u, v, w1, w2) -> Witness:
    g, h = sp.g_prime, sp.h_prime
    if len({u, v, w1, w2}) != 4:
        raise PatternError("the four pattern vertices must be distinct")
    if set(g.adjacency[w1]) != {u, w2}:
        raise PatternError("w1 must have exactly the black neighbors u and w2")
    if not _blue(sp, u, v) or _black(sp, u, v):
        raise PatternError("u-v must be a blue edge only")
    x = _fill(sp.n, 1)
    x[u], x[v], x[w1] = Fraction(0), Fraction(2), Fraction(1, 2)
    return _strict(_exact(g, h, x, W2_DEGREE2), "four-vertex witness")


def select_degree3_pattern(sp: StrippedPair, u: int, grid: CubicSubgrid | None = None):
    """Pick ``(v, w1, w2[, w3])`` around a black degree-3 vertex ``u``.

    ``v`` is the lowest blue neighbor that is not a grid neighbor of ``u``;
    ``w1`` the lowest black neighbor of ``u`` at black distance at least 3
    from ``v``. Without coordinates every blue neighbor is tried in order.
    """
    g = sp.g_prime
    if g.degree(u) != 3:
        raise PatternError(f"vertex {u} has black degree {g.degree(u)}, not 3")
    for v in sp.h_prime.adjacency[u]:
        if grid is not None and grid.grid_adjacent(u, v):
            continue
        dist = bfs_distances(g, v)
        for w1 in g.adjacency[u]:
            if 0 <= dist[w1] < 3:
                continue
            others = [a for a in g.adjacency[w1] if a != u]
            if g.degree(w1) == 2:
                return (v, w1, others[0])
            for w2 in others:
                if _blue(sp, u, w2):
                    continue
                w3 = next((a for a in g.adjacency[w2] if a != w1), None)
                if w3 is not None:
                    return (v, w1, w2, w3)
    raise ResolveInvariantError("no degree-3 pattern around vertex", {
        "u": u, "black": [list(e[:2]) for e in g.edges], "blue": [list(e[:2]) for e in sp.h_prime.edges]})


def witness_degree3_vertex(sp: StrippedPair, u: int, grid: CubicSubgrid | None = None) -> Witness:
    pat = select_degree3_pattern(sp, u, grid)
    if len(pat) == 3:
        v, w1, w2 = pat
        return witness_w2_degree2(sp, u, v, w1, w2)
    v, w1, w2, w3 = pat
    return witness_w2_degree3(sp, u, v, w1, w2, w3)


def witness_cut(sp: StrippedPair, S, case: str = ISOLATED_CUT) -> Witness:
    """Indicator of ``S``: no black edge leaves ``S`` but a blue one does."""
    S = frozenset(S)
    if cut_edges(sp.g_prime, S):
        raise PatternError("a black edge leaves S")
    if not cut_edges(sp.h_prime, S):
        raise PatternError("no blue edge leaves S")
    x = [Fraction(1) if a in S else Fraction(0) for a in range(sp.n)]
    return _strict(_exact(sp.g_prime, sp.h_prime, x, case), "cut witness")


def witness_long_cycle(sp: StrippedPair, cycle, blue_edge) -> Witness:
    """Black cycle of length >= 5 with a blue chord ``(a, b)``.

    Values rise linearly from 0 at ``a`` to 1 at ``b`` along both arcs and are
    0 off the cycle.
    """
    g, h = sp.g_prime, sp.h_prime
    cyc = list(cycle)
    L = len(cyc)
    a, b = blue_edge
    if L < 5 or len(set(cyc)) != L:
        raise PatternError("need a simple cycle of length at least 5")
    if any(g.degree(c) != 2 or not g.has_edge(cyc[i], cyc[(i + 1) % L]) for i, c in enumerate(cyc)):
        raise PatternError("cycle vertices must have black degree 2 along the cycle")
    if a not in cyc or b not in cyc or not _blue(sp, a, b):
        raise PatternError("blue edge must join two cycle vertices")
    i = cyc.index(a)
    rot = cyc[i:] + cyc[:i]
    j = rot.index(b)
    arc1 = rot[1:j]                    # a -> b one way
    arc2 = rot[j + 1:][::-1]           # a -> b the other way
    x = [Fraction(0)] * sp.n
    x[b] = Fraction(1)
    for arc in (arc1, arc2):
        for t, c in enumerate(arc, start=1):
            x[c] = Fraction(t, len(arc) + 1)
    return _strict(_exact(g, h, x, LONG_CYCLE), "long-cycle witness")


def _is_n_cycle(h: Graph) -> bool:
    return h.n >= 3 and h.is_connected and all(h.degree(a) == 2 for a in range(h.n))


def improve_cycle(g: Graph, h: Graph, four_cycle) -> Graph:
    """Swap the two diagonals of a black 4-cycle for two of its sides.

    ``four_cycle`` lists ``v1..v4`` in cycle order; ``(v1, v3)`` and
    ``(v2, v4)`` must be edges of ``h``. Returns the single ``n``-cycle among
    the two reconnections; it shares two more edges with ``g``.
    """
    v1, v2, v3, v4 = four_cycle
    d1, d2 = canon(v1, v3), canon(v2, v4)
    if not (h.has_edge(*d1) and h.has_edge(*d2)):
        raise PatternError("both diagonals must be edges of h")
    base = h.without_edges([d1, d2])
    before = len(g.edge_set & h.edge_set)
    for pair in (((v1, v2), (v3, v4)), ((v1, v4), (v2, v3))):
        cand = base.add_edges([(p, q, 1) for p, q in pair])
        if _is_n_cycle(cand):
            if len(g.edge_set & cand.edge_set) != before + 2:
                raise ResolveInvariantError("swap did not add two shared edges", {"cycle": list(four_cycle)})
            return cand
    raise ResolveInvariantError("neither diagonal swap gives a single cycle", {"cycle": list(four_cycle)})


# ------------------------------------------------------------------- driver


def cycle_order(h: Graph) -> tuple[int, ...]:
    """Traversal of an ``n``-cycle from 0 toward its lower neighbor."""
    if not _is_n_cycle(h):
        raise GraphError("not a single n-cycle")
    order = [0]
    prev, cur = None, 0
    while len(order) < h.n:
        nxt = min(b for b in h.adjacency[cur] if b != prev)
        order.append(nxt)
        prev, cur = cur, nxt
    return tuple(order)


def _black_cycles(g: Graph) -> list[list[int]]:
    """Vertex orders of the cycles of a graph whose non-isolated vertices have degree 2."""
    out = []
    for comp in g.components:
        if len(comp) == 1:
            continue
        start = min(comp)
        order = [start]
        prev, cur = None, start
        while True:
            nxt = min(b for b in g.adjacency[cur] if b != prev)
            if nxt == start:
                break
            order.append(nxt)
            prev, cur = cur, nxt
        out.append(order)
    return sorted(out, key=min)


def _state(g, h, sp) -> dict:
    return {"g": [list(e[:2]) for e in g.edges], "h": [list(e[:2]) for e in h.edges],
            "black": [list(e[:2]) for e in sp.g_prime.edges],
            "blue": [list(e[:2]) for e in sp.h_prime.edges], "log": [list(p) for p in sp.lift_log]}


def local_witness(sp: StrippedPair, grid: CubicSubgrid | None = None):
    """One step of the case analysis on a stripped pair.

    Returns a ``Witness`` for the pair, ``("swap", four_cycle)`` when only the
    diagonal configuration remains, or ``None`` when both graphs are empty.
    """
    g, h = sp.g_prime, sp.h_prime
    n = sp.n
    v = next((a for a in range(n) if g.degree(a) == 1), None)
    if v is not None:
        return witness_degree1(sp, v)
    u = next((a for a in range(n) if g.degree(a) == 3), None)
    if u is not None:
        return witness_degree3_vertex(sp, u, grid)
    v = next((a for a in range(n) if g.degree(a) == 0 and h.degree(a) > 0), None)
    if v is not None:
        return witness_cut(sp, {v}, ISOLATED_CUT)
    if g.m == 0 and h.m == 0:
        return None
    if any(g.degree(a) not in (0, 2) for a in range(n)):
        raise ResolveInvariantError("black graph is not a union of cycles", _state(g, h, sp))
    cycles = _black_cycles(g)
    for cyc in cycles:
        if len(cyc) >= 5:
            cs = set(cyc)
            chords = sorted(e[:2] for e in h.edges if e[0] in cs and e[1] in cs)
            if chords:
                return witness_long_cycle(sp, cyc, chords[0])
            return witness_cut(sp, cs, LONG_CYCLE_CUT)
    for cyc in cycles:
        if cut_edges(h, cyc):
            return witness_cut(sp, cyc, FOUR_CYCLE_CUT)
    return ("swap", tuple(cycles[0]))


def resolve(grid: CubicSubgrid, h: Graph, *, against_input: bool = False,
            max_rounds: int | None = None) -> Witness | HamiltonianCycle:
    """Refute the cycle placement ``h`` or find a Hamiltonian cycle of the grid.

    Each round strips shared edges, prunes pendant black edges and runs the
    case analysis. A diagonal 4-cycle configuration replaces ``h`` by a cycle
    sharing two more edges with the grid and starts a new round. The returned
    witness refutes the cycle it was built for (``Witness.cycle``); with
    ``against_input`` a witness for the original ``h`` is returned instead,
    falling back to a rationalised eigenvector when the local vector does not
    separate it.
    """
    g = grid.graph
    if g.n != h.n:
        raise GraphError(f"size mismatch: {g.n} vs {h.n} vertices")
    if not _is_n_cycle(h):
        raise GraphError("h must be a single n-cycle")
    cap = g.n if max_rounds is None else max_rounds
    cur = h
    for rounds in range(cap + 1):
        gp, hp = strip_shared_edges(g, cur)
        sp = prune_degree_one(gp, hp)
        step = local_witness(sp, grid)
        if step is None:
            return HamiltonianCycle(cycle_order(cur), cur, rounds)
        if isinstance(step, Witness):
            w = restore_shared(lift_witness(step, sp.lift_log), g, cur)
            if not verify_witness(w, g, cur):
                raise ResolveInvariantError("lifted witness failed", _state(g, cur, sp))
            if against_input and cur != h:
                w = _retarget(w, g, h)
            return w
        cur = improve_cycle(g, cur, step[1])
    raise ResolveInvariantError("too many cycle improvements", {"rounds": cap})


def _retarget(w: Witness, g: Graph, h: Graph) -> Witness:
    again = _exact(g, h, w.x, w.case)
    if again.lhs > again.rhs:
        return Witness(again.x, again.lhs, again.rhs, w.case, w.local, h)
    return spectral_witness(g, h)


def spectral_witness(g: Graph, h: Graph) -> Witness:
    """Rationalised top eigenvector of the pencil ``(L_h, L_g)``, checked exactly."""
    res = support(h, g)
    vec = res.witness_direction
    for denom in (10 ** 4, 10 ** 8, None):
        if denom is None:
            x = [Fraction(float(a)) for a in vec]
        else:
            x = [Fraction(float(a)).limit_denominator(denom) for a in vec]
        w = _exact(g, h, x, SPECTRAL)
        if w.lhs > w.rhs:
            return Witness(w.x, w.lhs, w.rhs, SPECTRAL, None, h)
    raise ResolveInvariantError("no separating eigenvector", {"sigma": res.sigma})


def placement(n: int, pi: VertexMapping | None) -> Graph:
    """The cycle ``C_n`` with vertex ``i`` relabelled ``pi(i)``."""
    c = cycle_graph(n)
    return c if pi is None else apply_permutation(c, pi)


def random_placement(n: int, rng=None) -> Graph:
    rng = np.random.default_rng(rng)
    return placement(n, VertexMapping([int(a) for a in rng.permutation(n)]))


def climbed_placement(g: Graph, rng=None, steps: int = 200) -> Graph:
    """Random cycle placement improved by segment reversals that never lose shared edges."""
    rng = np.random.default_rng(rng)
    n = g.n
    order = [int(a) for a in rng.permutation(n)]

    def shared(o):
        return sum(g.has_edge(o[i], o[(i + 1) % n]) for i in range(n))

    best = shared(order)
    for _ in range(steps):
        i, j = sorted(int(a) for a in rng.choice(n, 2, replace=False))
        cand = order[:i] + order[i:j + 1][::-1] + order[j + 1:]
        s = shared(cand)
        if s >= best:
            order, best = cand, s
    return Graph.from_edges(n, [(order[i], order[(i + 1) % n]) for i in range(n)])
