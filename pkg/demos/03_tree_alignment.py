"""Aligning two bounded-degree trees with bounded stretch and cut.

Run: python3 demos/03_tree_alignment.py
"""

import numpy as np

from spectralign.brute import brute_mapping_feasible
from spectralign.graph import RootedTree, path_graph, pull_back, random_tree, tree_centroid
from spectralign.spectral import condition
from spectralign.treealign import align_trees, compute_z_table, count_gamma, srgi_certify

rng = np.random.default_rng(4)
g = random_tree(9, 3, rng)
h = random_tree(9, 3, rng)
print("G edges", [e[:2] for e in g.edges])
print("H edges", [e[:2] for e in h.edges])

for k, ell in [(1, 1), (1, 2), (2, 2), (2, 3)]:
    pi = align_trees(g, h, k, ell)
    ref = brute_mapping_feasible(g, h, k, ell)
    line = f"k={k} ell={ell}: dp {'yes' if pi else 'no '}  exhaustive {'yes' if ref else 'no '}"
    if pi is not None:
        line += f"  kappa={condition(g, pull_back(h, pi)).kappa:.3f} <= {(k * ell) ** 2}"
    print(line)

cert = srgi_certify(g, h, kappa_budget=9)
if cert:
    print(f"\ncheapest certificate: k={cert.k} ell={cert.ell} kappa={cert.kappa_certified:.3f}")

# Size of the table's index family against the number of positive entries.
G = RootedTree(g, tree_centroid(g))
H = RootedTree(h, 0)
table = compute_z_table(G, H, 2, 2)
print(f"index family {count_gamma(G, H, 2)} tuples, {len(table)} positive entries")
for n in (6, 8, 10, 12):
    t = RootedTree(path_graph(n), 0)
    print(f"paths n={n:2d}: |family| k=1 {count_gamma(t, t, 1):>8d}   k=2 {count_gamma(t, t, 2):>12d}")
