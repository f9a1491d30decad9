"""Support numbers and dominance between small graphs.

Run: python3 demos/01_dominance_and_support.py
"""

import numpy as np

from spectralign.brute import brute_sgd, brute_srgi
from spectralign.graph import apply_permutation, cycle_graph, path_graph, quadratic_form
from spectralign.spectral import condition, precedes, rayleigh_ratio, support

p3, c3 = path_graph(3), cycle_graph(3)

# The triangle needs three copies of the path to dominate it.
res = support(c3, p3)
print(f"sigma(C3, P3) = {res.sigma:.6f}")
x = res.witness_direction
print("worst direction", np.round(x, 4), "ratio", round(rayleigh_ratio(c3, p3, x), 6))

# Going the other way the path sits under the triangle.
print("P3 precedes C3:", precedes(p3, c3))
print("C3 precedes P3:", precedes(c3, p3))
print(f"kappa(P3, C3) = {condition(p3, c3).kappa:.6f}")

# Quadratic forms on a cut indicator count crossing edges.
ind = np.array([1.0, 0.0, 0.0])
print("R(C3, 1_{0}) =", quadratic_form(c3, ind), " R(P3, 1_{0}) =", quadratic_form(p3, ind))

# Exhaustive search over relabelings.
c6 = cycle_graph(6).add_edges([(0, 3, 1)])
p6 = path_graph(6)
pi = brute_sgd(c6, p6)
print("some relabeled P6 sits under C6 + chord:", pi is not None, pi.forward if pi else None)
print("check:", precedes(apply_permutation(p6, pi), c6))
pi, kappa = brute_srgi(c6, p6)
print(f"best condition number over relabelings: {kappa:.4f} via {pi.forward}")
