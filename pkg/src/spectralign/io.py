"""JSON encoding for graphs, subgrids, mappings and witnesses.

Graphs are ``{"n": n, "edges": [[u, v, w], ...]}`` with optional ``"root"``
and ``"coords"`` (the latter marks a cubic subgrid). Rationals are written as
``[numerator, denominator]`` string pairs.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

from .graph import CubicSubgrid, Graph, GraphError, VertexMapping
from .hardness import Witness


class InputError(GraphError):
    pass


def _num(w):
    w = float(w)
    return int(w) if w.is_integer() else w


def graph_to_json(g: Graph, *, root: int | None = None, coords=None) -> dict:
    out = {"n": g.n, "edges": [[u, v, _num(w)] for u, v, w in g.edges]}
    if root is not None:
        out["root"] = root
    if coords is not None:
        out["coords"] = [list(p) for p in coords]
    return out


def subgrid_to_json(grid: CubicSubgrid) -> dict:
    return graph_to_json(grid.graph, coords=grid.points)


def graph_from_json(doc: dict) -> Graph:
    try:
        if "coords" in doc:
            return subgrid_from_json(doc).graph
        return Graph.from_edges(int(doc["n"]), [tuple(e) for e in doc.get("edges", [])])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, GraphError):
            raise
        raise InputError(f"malformed graph JSON: {exc}") from exc


def subgrid_from_json(doc: dict) -> CubicSubgrid:
    pts = doc.get("coords", doc.get("points"))
    if pts is None:
        raise InputError("subgrid JSON needs a 'coords' list")
    grid = CubicSubgrid(tuple(tuple(p) for p in pts))
    if "n" in doc and int(doc["n"]) != grid.n:
        raise InputError(f"'n'={doc['n']} but {grid.n} coordinates given")
    return grid


def mapping_to_json(pi: VertexMapping) -> list[int]:
    return list(pi.forward)


def mapping_from_json(doc) -> VertexMapping:
    seq = doc["forward"] if isinstance(doc, dict) else doc
    try:
        return VertexMapping([int(a) for a in seq])
    except (TypeError, ValueError) as exc:
        if isinstance(exc, GraphError):
            raise
        raise InputError(f"malformed mapping JSON: {exc}") from exc


def fraction_to_json(q: Fraction) -> list[str]:
    q = Fraction(q)
    return [str(q.numerator), str(q.denominator)]


def fraction_from_json(pair) -> Fraction:
    try:
        p, q = pair
        return Fraction(int(p), int(q))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed rational {pair!r}") from exc


def witness_to_json(w: Witness) -> dict:
    out = {"x": [fraction_to_json(a) for a in w.x], "lhs": fraction_to_json(w.lhs),
           "rhs": fraction_to_json(w.rhs), "case": w.case}
    if w.local is not None:
        out["local"] = [fraction_to_json(a) for a in w.local]
    if w.cycle is not None:
        out["cycle"] = graph_to_json(w.cycle)
    return out


def witness_from_json(doc: dict) -> Witness:
    try:
        x = tuple(fraction_from_json(a) for a in doc["x"])
        local = tuple(fraction_from_json(a) for a in doc["local"]) if "local" in doc else None
        cycle = graph_from_json(doc["cycle"]) if "cycle" in doc else None
        return Witness(x, fraction_from_json(doc["lhs"]), fraction_from_json(doc["rhs"]),
                       str(doc.get("case", "")), local, cycle)
    except KeyError as exc:
        raise InputError(f"witness JSON missing {exc}") from exc


def load_json(path: str):
    """Read JSON from ``path``; ``-`` means standard input."""
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def dumps(doc, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(doc, sort_keys=True, indent=2)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
