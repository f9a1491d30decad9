"""Batch experiments that check the library's bounds and equivalences at desk scale.

Each suite returns a JSON-ready report with its resolved parameters, counts,
the worst observed slack and a ``passed`` flag. Randomness comes only from
``numpy.random.default_rng(seed)``, so a report is a pure function of its
parameters.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from fractions import Fraction

import numpy as np

from .brute import brute_mapping_feasible, brute_sgd
from .embeddings import congestion, dilation, embed, stretch_cut_profile
from .graph import (Graph, RootedTree, apply_permutation, path_graph,
                    quadratic_form_exact, random_permutation, random_tree, tree_distance)
from .hardness import (DEGREE_ONE, LONG_CYCLE, W2_DEGREE2, W2_DEGREE3, HamiltonianCycle,
                       Witness, climbed_placement, lift_witness, prune_degree_one,
                       reduce_hamiltonian, resolve, strip_shared_edges, verify_witness)
from .spectral import effective_resistance, resistance_matrix, support
from .subgrids import hamiltonian_cycle, random_core_subgrid, random_subgrid, subgrid_catalog
from .treealign import align_trees, count_gamma, srgi_certify

SANDWICH_TOL = 1e-6
RESISTANCE_TOL = 1e-9
KAPPA_TOL = 1e-6

# case-specific bounds checked on the stripped-pair values of each witness
LOCAL_BOUNDS = {
    DEGREE_ONE: "rhs <= 3/4 and lhs >= 1",
    W2_DEGREE3: "gap >= 1/9",
    W2_DEGREE2: "gap >= 1/2",
    LONG_CYCLE: "rhs <= 5/6 and lhs >= 1",
}


def local_bound_holds(w: Witness) -> bool:
    lhs, rhs = w.local if w.local is not None else (w.lhs, w.rhs)
    if w.case == DEGREE_ONE:
        return rhs <= Fraction(3, 4) and lhs >= 1
    if w.case == W2_DEGREE3:
        return lhs - rhs >= Fraction(1, 9)
    if w.case == W2_DEGREE2:
        return lhs - rhs >= Fraction(1, 2)
    if w.case == LONG_CYCLE:
        return rhs <= Fraction(5, 6) and lhs >= 1
    return lhs > rhs


def _tree_pair(rng, n_max: int, max_degree: int, n_min: int = 2):
    n = int(rng.integers(n_min, n_max + 1))
    g = random_tree(n, max_degree, rng)
    h = apply_permutation(random_tree(n, max_degree, rng), random_permutation(n, rng))
    return g, h


def sweep_cuts_edges_trees(n: int = 15, trials: int = 500, seed: int = 0, max_degree: int = 4,
                           tol: float = SANDWICH_TOL) -> dict:
    """``max(k, ell) <= sigma(G, H) <= k * ell`` on random tree pairs."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    lower = upper = 0
    worst = math.inf
    for _ in range(trials):
        g, h = _tree_pair(rng, n, max_degree)
        sigma = support(g, h).sigma
        p = stretch_cut_profile(g, h)
        lo, hi = max(p.k, p.ell), p.k * p.ell
        lower += sigma < lo - tol
        upper += sigma > hi + tol
        worst = min(worst, sigma - lo + tol, hi + tol - sigma)
    return {"suite": "cuts-edges-trees", "n": n, "trials": trials, "seed": seed,
            "max_degree": max_degree, "tol": tol, "lower_violations": lower,
            "upper_violations": upper, "min_slack": worst,
            "seconds": time.perf_counter() - t0, "passed": lower == 0 and upper == 0}


def sweep_dila_cong(n: int = 15, trials: int = 500, seed: int = 0, max_degree: int = 4,
                    tol: float = SANDWICH_TOL) -> dict:
    """``sigma(G, H) <= congestion * dilation`` for unique-path embeddings."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    bad = 0
    worst = math.inf
    for _ in range(trials):
        g, h = _tree_pair(rng, n, max_degree)
        emb = embed(g, h)
        bound = congestion(emb) * dilation(emb)
        sigma = support(g, h).sigma
        bad += sigma > bound + tol
        worst = min(worst, bound + tol - sigma)
    return {"suite": "dila-cong", "n": n, "trials": trials, "seed": seed, "max_degree": max_degree,
            "tol": tol, "violations": bad, "min_slack": worst,
            "seconds": time.perf_counter() - t0, "passed": bad == 0}


def sweep_resistance(n: int = 50, trials: int = 200, seed: int = 0,
                     tol: float = RESISTANCE_TOL, pairwise_solves: int = 20) -> dict:
    """Effective resistance equals tree distance for every vertex pair.

    All pairs are checked through the resistance matrix; ``pairwise_solves``
    pairs per tree also go through the single-pair solver.
    """
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    worst = 0.0
    bad = 0
    for _ in range(trials):
        size = int(rng.integers(2, n + 1))
        t = random_tree(size, None, rng)
        R = resistance_matrix(t)
        rt = RootedTree(t, 0)
        D = np.array([[tree_distance(rt, a, b) for b in range(size)] for a in range(size)])
        err = float(np.abs(R - D).max())
        for _ in range(pairwise_solves):
            a, b = (int(v) for v in rng.integers(size, size=2))
            err = max(err, abs(effective_resistance(t, a, b) - D[a, b]))
        worst = max(worst, err)
        bad += err > tol
    return {"suite": "resistance", "n": n, "trials": trials, "seed": seed, "tol": tol,
            "violations": bad, "max_error": worst, "seconds": time.perf_counter() - t0,
            "passed": bad == 0}


def sweep_reduction(n: int = 8, trials: int = 100, seed: int = 0, jobs: int = 1) -> dict:
    """Hamiltonicity agrees with exhaustive dominance search on the reduced instance.

    Covers every connected cubic subgrid with 3..n vertices up to symmetry,
    plus ``trials`` randomly grown subgrids of 3..n vertices.
    """
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    grids = [("catalog", g) for g in subgrid_catalog(3, n)]
    for _ in range(trials):
        grids.append(("random", random_subgrid(int(rng.integers(3, n + 1)), rng)))
    disagree = []
    yes = 0
    for src, grid in grids:
        inst = reduce_hamiltonian(grid)
        ham = hamiltonian_cycle(inst.g) is not None
        dom = brute_sgd(inst.g, inst.h, jobs=jobs) is not None
        yes += ham
        if ham != dom:
            disagree.append({"source": src, "coords": [list(p) for p in grid.points],
                             "hamiltonian": ham, "dominated": dom})
    return {"suite": "reduction", "n": n, "trials": trials, "seed": seed, "instances": len(grids),
            "catalog": sum(s == "catalog" for s, _ in grids), "hamiltonian": yes,
            "disagreements": disagree, "seconds": time.perf_counter() - t0,
            "passed": not disagree}


def unlabeled_trees(n: int, max_degree: int | None = None) -> list[Graph]:
    """One representative per isomorphism class of trees on ``n`` vertices."""
    import networkx as nx

    if n == 1:
        return [Graph(1)]
    out = []
    for t in nx.nonisomorphic_trees(n):
        if max_degree is not None and max(d for _, d in t.degree()) > max_degree:
            continue
        out.append(Graph.from_edges(n, sorted(tuple(sorted(e)) for e in t.edges())))
    return sorted(out, key=lambda g: g.edges)


def sweep_dp_oracle(n: int = 9, seed: int = 0, max_degree: int = 3, params=((1, 1), (1, 2), (2, 1), (2, 2)),
                    jobs: int = 1) -> dict:
    """Dynamic-program feasibility equals exhaustive feasibility on all tree pairs.

    Every ordered pair of unlabeled trees with ``1..n`` vertices and the
    degree cap is tested; ``seed`` only relabels the second tree, which must
    not change the answer.
    """
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    disagree = []
    runs = feasible = 0
    for size in range(1, n + 1):
        trees = unlabeled_trees(size, max_degree)
        for g in trees:
            for h0 in trees:
                h = apply_permutation(h0, random_permutation(size, rng))
                for k, ell in params:
                    a = align_trees(g, h, k, ell, jobs=jobs) is not None
                    b = brute_mapping_feasible(g, h, k, ell) is not None
                    runs += 1
                    feasible += b
                    if a != b:
                        disagree.append({"g": [list(e[:2]) for e in g.edges],
                                         "h": [list(e[:2]) for e in h.edges],
                                         "k": k, "ell": ell, "dp": a, "brute": b})
    return {"suite": "dp-oracle", "n": n, "seed": seed, "max_degree": max_degree,
            "params": [list(p) for p in params], "runs": runs, "feasible": feasible,
            "disagreements": disagree, "seconds": time.perf_counter() - t0,
            "passed": not disagree}


def sweep_srgi(n: int = 9, trials: int = 30, seed: int = 0, max_degree: int = 3,
               tol: float = KAPPA_TOL) -> dict:
    """Certified mappings have ``kappa(G, pi(H)) <= (k * ell)^2``."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    bad = 0
    rows = []
    for _ in range(trials):
        g, h = _tree_pair(rng, n, max_degree, n_min=3)
        budget = max(stretch_cut_profile(g, h).k, stretch_cut_profile(g, h).ell)
        try:
            cert = srgi_certify(g, h, budget)
        except AssertionError:
            bad += 1
            continue
        if cert is None:
            bad += 1
            continue
        ok = cert.kappa_certified <= (cert.k * cert.ell) ** 2 + tol
        bad += not ok
        rows.append([g.n, cert.k, cert.ell, cert.kappa_certified])
    return {"suite": "srgi", "n": n, "trials": trials, "seed": seed, "tol": tol,
            "violations": bad, "certificates": rows, "seconds": time.perf_counter() - t0,
            "passed": bad == 0}


def sweep_gamma_size(sizes=(6, 8, 10, 12), ks=(1, 2), exponent_cap: float = 4.0) -> dict:
    """Fit ``log|Gamma| = c + a * k^2 * log n`` by least squares.

    A single ``(c, a)`` is fitted jointly over all ``(n, k)``; per-``k``
    slopes of ``log|Gamma|`` against ``log n`` are reported alongside.
    """
    rows = []
    for k in ks:
        for n in sizes:
            t = RootedTree(path_graph(n), 0)
            rows.append((n, k, count_gamma(t, t, k)))
    X = np.array([[1.0, k * k * math.log(n)] for n, k, _ in rows])
    y = np.array([math.log(c) for _, _, c in rows])
    (c, a), *_ = np.linalg.lstsq(X, y, rcond=None)
    per_k = {}
    for k in ks:
        sel = [(math.log(n), math.log(cnt)) for n, kk, cnt in rows if kk == k]
        xs, ys = np.array(sel).T
        per_k[str(k)] = float(np.polyfit(xs, ys, 1)[0])
    return {"suite": "gamma-size", "sizes": list(sizes), "ks": list(ks),
            "counts": [[n, k, str(cnt)] for n, k, cnt in rows], "c": float(c), "a": float(a),
            "slope_per_k": per_k, "exponent_cap": exponent_cap, "passed": bool(a <= exponent_cap)}


def _rational_vector(rng, n: int) -> list[Fraction]:
    return [Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 8))) for _ in range(n)]


def sweep_strip_prune(trials: int = 100, seed: int = 0, n: int = 30, vectors: int = 5) -> dict:
    """Exact checks of the strip difference identity, the degree bound and prune lifting."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    identity_bad = degree_bad = lift_bad = 0
    lifted = 0
    for _ in range(trials):
        grid = random_subgrid(int(rng.integers(3, n + 1)), rng)
        g = grid.graph
        h = climbed_placement(g, rng, int(rng.integers(0, 100)))
        gp, hp = strip_shared_edges(g, h)
        for _ in range(vectors):
            x = _rational_vector(rng, g.n)
            d0 = quadratic_form_exact(g, x) - quadratic_form_exact(h, x)
            d1 = quadratic_form_exact(gp, x) - quadratic_form_exact(hp, x)
            identity_bad += d0 != d1
        sp = prune_degree_one(gp, hp)
        degree_bad += any(sp.g_prime.degree(a) > sp.h_prime.degree(a) + 1 for a in range(g.n))
        # any vector works for the replay identity: lifted values leave both sides unchanged
        y = _rational_vector(rng, g.n)
        w = Witness(tuple(y), quadratic_form_exact(sp.h_prime, y), quadratic_form_exact(sp.g_prime, y), "replay")
        x = lift_witness(w, sp.lift_log).x
        lifted += bool(sp.lift_log)
        if (quadratic_form_exact(hp, x) != w.lhs or quadratic_form_exact(gp, x) != w.rhs):
            lift_bad += 1
    return {"suite": "strip-prune", "trials": trials, "seed": seed, "n": n,
            "identity_violations": identity_bad, "degree_violations": degree_bad,
            "lift_violations": lift_bad, "instances_with_prunes": lifted,
            "seconds": time.perf_counter() - t0,
            "passed": identity_bad == degree_bad == lift_bad == 0}


def sweep_witness(trials: int = 200, seed: int = 0, n: int = 30, against_input: bool = False) -> dict:
    """Witnesses from ``resolve`` on non-Hamiltonian subgrids, checked exactly.

    Instances alternate between tree-like and cyclic random subgrids and
    between uniform and shared-edge-climbed placements, so that the
    cycle-structured cases are reached too. With ``against_input`` every
    witness must refute the placement that was passed in.
    """
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    cases: Counter = Counter()
    bad = local_bad = improved = 0
    done = 0
    while done < trials:
        size = int(rng.integers(4, n + 1))
        grid = random_core_subgrid(size, rng) if done % 2 else random_subgrid(size, rng)
        if hamiltonian_cycle(grid.graph) is not None:
            continue
        steps = 0 if done % 4 < 2 else int(rng.integers(50, 400))
        h = climbed_placement(grid.graph, rng, steps)
        w = resolve(grid, h, against_input=against_input)
        if isinstance(w, HamiltonianCycle):
            bad += 1
            done += 1
            continue
        done += 1
        cases[w.case] += 1
        improved += w.cycle != h
        bad += not verify_witness(w, grid.graph, h if against_input else w.cycle)
        local_bad += not local_bound_holds(w)
    return {"suite": "witness", "trials": trials, "seed": seed, "n": n, "against_input": against_input,
            "cases": dict(sorted(cases.items())), "improved_placements": improved,
            "violations": bad, "local_bound_violations": local_bad,
            "seconds": time.perf_counter() - t0, "passed": bad == 0 and local_bad == 0}


SUITES = {
    "cuts-edges-trees": sweep_cuts_edges_trees,
    "dila-cong": sweep_dila_cong,
    "resistance": sweep_resistance,
    "reduction": sweep_reduction,
    "dp-oracle": sweep_dp_oracle,
    "srgi": sweep_srgi,
    "gamma-size": sweep_gamma_size,
    "strip-prune": sweep_strip_prune,
    "witness": sweep_witness,
}
