"""Routing one tree through another: dilation, congestion and the support sandwich.

Run: python3 demos/02_tree_embeddings.py
"""

import numpy as np

from spectralign.embeddings import embed, stretch_cut_profile, support_upper_bound
from spectralign.graph import (Graph, apply_permutation, distance_matrix, path_graph,
                               random_permutation, random_tree)
from spectralign.spectral import resistance_matrix, support

star = Graph.from_edges(4, [(1, 0), (1, 2), (1, 3)])
path = path_graph(4)
emb = embed(star, path)
for e, route in emb.routes.items():
    print(f"star edge {e} -> path route {route}")
print("dilation", emb.dilation, "congestion", emb.congestion,
      "bound", support_upper_bound(emb), "sigma", round(support(star, path).sigma, 6))

# Random pairs: the stretch/cut profile sandwiches the support number.
rng = np.random.default_rng(0)
print("\n  n   k  ell   sigma    k*ell")
for _ in range(8):
    n = int(rng.integers(5, 14))
    g = random_tree(n, 4, rng)
    h = apply_permutation(random_tree(n, 4, rng), random_permutation(n, rng))
    prof = stretch_cut_profile(g, h)
    s = support(g, h).sigma
    print(f"{n:3d} {prof.k:3d} {prof.ell:4d} {s:8.3f} {prof.k * prof.ell:6d}")

# On a tree, resistance distance is plain hop distance.
t = random_tree(20, None, rng)
print("\nmax |R_eff - d_tree| on a 20-vertex tree:",
      float(np.abs(resistance_matrix(t) - distance_matrix(t)).max()))
