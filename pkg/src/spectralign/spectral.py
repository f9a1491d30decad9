"""Support numbers, condition numbers and pseudo-inverse quadratic forms.

The support ``sigma(G, H)`` is the largest generalized Rayleigh quotient
``R(G, x) / R(H, x)`` over ``x`` orthogonal to the all-ones vector. It is
computed densely: ``L_H`` is eigendecomposed, its range is whitened, and the
top eigenpair of ``L_H^{+1/2} L_G L_H^{+1/2}`` gives both the value and a
witness direction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphError, laplacian, quadratic_form

DEFAULT_TOL = 1e-7
KERNEL_RTOL = 1e-9


class AmbiguousKernelError(GraphError):
    """``H`` is disconnected but no ``G`` edge crosses its components."""


@dataclass(frozen=True)
class SupportResult:
    sigma: float
    witness_direction: np.ndarray

    @property
    def is_infinite(self) -> bool:
        return bool(np.isinf(self.sigma))


@dataclass(frozen=True)
class ConditionResult:
    kappa: float
    sigma_gh: float
    sigma_hg: float


def _check_sizes(g: Graph, h: Graph):
    if g.n != h.n:
        raise GraphError(f"size mismatch: {g.n} vs {h.n} vertices")


def _pinv_sqrt(L: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(L)
    top = vals.max(initial=0.0)
    keep = vals > KERNEL_RTOL * max(top, 1e-300)
    vecs = vecs[:, keep]
    return (vecs / np.sqrt(vals[keep])) @ vecs.T


def support(g: Graph, h: Graph, tol: float = DEFAULT_TOL) -> SupportResult:
    """Smallest ``gamma`` with ``R(g, x) <= gamma R(h, x)`` for all ``x``.

    When ``h`` is disconnected and some ``g`` edge joins two of its
    components, the support is infinite and the witness is the indicator of
    such a component.
    """
    _check_sizes(g, h)
    n = g.n
    if n <= 1:
        return SupportResult(0.0, np.zeros(n))
    comps = h.components
    if len(comps) > 1:
        label = [0] * n
        for i, c in enumerate(comps):
            for a in c:
                label[a] = i
        for u, v, _ in g.edges:
            if label[u] != label[v]:
                x = np.array([1.0 if label[a] == label[u] else 0.0 for a in range(n)])
                return SupportResult(float("inf"), x)
        raise AmbiguousKernelError(
            "ambiguous kernel: H is disconnected and G does not cross its components")
    W = _pinv_sqrt(laplacian(h))
    M = W @ laplacian(g) @ W
    M = (M + M.T) / 2
    vals, vecs = np.linalg.eigh(M)
    sigma = max(float(vals[-1]), 0.0)
    x = W @ vecs[:, -1]
    x = x - x.mean()
    nrm = np.linalg.norm(x)
    if nrm > 0:
        x = x / nrm
    return SupportResult(sigma, x)


def precedes(g: Graph, h: Graph, tol: float = DEFAULT_TOL) -> bool:
    """``R(g, x) <= R(h, x)`` for all ``x``, up to ``tol`` on the support."""
    return support(g, h, tol).sigma <= 1 + tol


def condition(g: Graph, h: Graph, tol: float = DEFAULT_TOL) -> ConditionResult:
    """Relative condition number ``sigma(g, h) * sigma(h, g)``."""
    for name, x in (("G", g), ("H", h)):
        if not x.is_connected:
            raise GraphError(f"condition needs connected graphs ({name} is not)")
    s_gh = support(g, h, tol).sigma
    s_hg = support(h, g, tol).sigma
    return ConditionResult(s_gh * s_hg, s_gh, s_hg)


def rayleigh_ratio(g: Graph, h: Graph, x) -> float:
    den = quadratic_form(h, x)
    num = quadratic_form(g, x)
    if den == 0:
        return float("inf") if num > 0 else float("nan")
    return num / den


def laplacian_pinv_quadform(g: Graph, x) -> float:
    """``x^T L_g^+ x`` for connected ``g``.

    ``x`` is projected onto the complement of the all-ones vector first; a
    warning reports the removed component when it is not negligible.
    """
    if not g.is_connected:
        raise GraphError("laplacian_pinv_quadform needs a connected graph")
    x = np.asarray(x, dtype=float)
    if x.shape != (g.n,):
        raise GraphError(f"vector of length {x.shape} for graph on {g.n} vertices")
    mean = x.mean() if g.n else 0.0
    if abs(mean) * np.sqrt(g.n) > 1e-12 * max(1.0, np.linalg.norm(x)):
        warnings.warn(f"projected out a kernel component of norm {abs(mean) * np.sqrt(g.n):.3g}")
    x = x - mean
    if g.n <= 1:
        return 0.0
    # L + J/n is invertible for connected g and agrees with L^+ on 1-perp
    A = laplacian(g) + np.full((g.n, g.n), 1.0 / g.n)
    y = np.linalg.solve(A, x)
    return float(x @ y)


def effective_resistance(g: Graph, u: int, v: int) -> float:
    if u == v:
        if not g.is_connected:
            raise GraphError("effective_resistance needs a connected graph")
        return 0.0
    x = np.zeros(g.n)
    x[u], x[v] = 1.0, -1.0
    return laplacian_pinv_quadform(g, x)


def resistance_matrix(g: Graph) -> np.ndarray:
    """All-pairs effective resistances from one pseudo-inverse."""
    if not g.is_connected:
        raise GraphError("resistance_matrix needs a connected graph")
    n = g.n
    J = np.full((n, n), 1.0 / n)
    P = np.linalg.inv(laplacian(g) + J) - J
    d = np.diag(P)
    return d[:, None] + d[None, :] - 2 * P
