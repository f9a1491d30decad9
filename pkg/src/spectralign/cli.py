"""Command-line front end: one JSON document per call.

Exit codes: 0 success, 1 when a decision or search answers "no"/"none",
2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .brute import brute_mapping_feasible, brute_sgd, brute_srgi
from .embeddings import embed, stretch_cut_profile, support_upper_bound
from .graph import GraphError, apply_permutation, cycle_graph, generate, pull_back
from .hardness import HamiltonianCycle, PatternError, reduce_hamiltonian, resolve, verify_witness
from .io import (InputError, dumps, graph_from_json, graph_to_json, load_json, mapping_from_json,
                 mapping_to_json, subgrid_from_json, subgrid_to_json, witness_from_json,
                 witness_to_json)
from .spectral import DEFAULT_TOL, condition, effective_resistance, precedes, resistance_matrix, support
from .subgrids import random_core_subgrid, random_subgrid
from .sweeps import SUITES
from .treealign import align_trees, srgi_certify

OK, NO, ERROR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _float(x: float):
    """JSON-safe float (infinities become strings)."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _strip_timing(doc):
    if isinstance(doc, dict):
        return {k: _strip_timing(v) for k, v in doc.items() if k != "seconds"}
    if isinstance(doc, list):
        return [_strip_timing(v) for v in doc]
    return doc


def _pair(args):
    g = graph_from_json(load_json(args.g))
    h = graph_from_json(load_json(args.h))
    return g, h


def _params(args, **extra) -> dict:
    out = {"command": args.command, "seed": args.seed, "tol": args.tol}
    out.update(extra)
    return out


# ------------------------------------------------------------------ commands


def cmd_gen(args):
    kind = args.kind
    if kind in ("random_subgrid", "core_subgrid"):
        make = random_subgrid if kind == "random_subgrid" else random_core_subgrid
        grid = make(args.n, np.random.default_rng(args.seed))
        doc = subgrid_to_json(grid)
    elif kind == "subgrid":
        pts = json.loads(args.points) if args.points else None
        grid = subgrid_from_json({"coords": pts or []})
        doc = subgrid_to_json(grid)
    else:
        g = generate(kind, args.n, max_degree=args.max_degree, seed=args.seed)
        doc = graph_to_json(g)
    doc["params"] = _params(args, kind=kind, n=doc["n"], max_degree=args.max_degree)
    return OK, doc


def cmd_support(args):
    g, h = _pair(args)
    res = support(g, h, args.tol)
    return OK, {"sigma": _float(res.sigma), "witness": [float(a) for a in res.witness_direction],
                "params": _params(args, n=g.n)}


def cmd_condition(args):
    g, h = _pair(args)
    res = condition(g, h, args.tol)
    return OK, {"kappa": _float(res.kappa), "sigma_gh": _float(res.sigma_gh),
                "sigma_hg": _float(res.sigma_hg), "params": _params(args, n=g.n)}


def cmd_precedes(args):
    g, h = _pair(args)
    ans = precedes(g, h, args.tol)
    return (OK if ans else NO), {"precedes": ans, "sigma": _float(support(g, h, args.tol).sigma),
                                 "params": _params(args, n=g.n)}


def cmd_resistance(args):
    g = graph_from_json(load_json(args.g))
    if args.u is not None or args.v is not None:
        if args.u is None or args.v is None:
            raise InputError("--u and --v go together")
        return OK, {"resistance": effective_resistance(g, args.u, args.v),
                    "params": _params(args, n=g.n, u=args.u, v=args.v)}
    return OK, {"resistance": resistance_matrix(g).tolist(), "params": _params(args, n=g.n)}


def cmd_embed_stats(args):
    g, h = _pair(args)
    emb = embed(g, h)
    prof = stretch_cut_profile(g, h)
    return OK, {"dilation": emb.dilation, "congestion": emb.congestion,
                "sigma_upper": support_upper_bound(emb), "k": prof.k, "ell": prof.ell,
                "sigma": _float(support(g, h, args.tol).sigma), "params": _params(args, n=g.n)}


def cmd_brute_sgd(args):
    g, h = _pair(args)
    pi = brute_sgd(g, h, args.tol, prune=not args.no_prune, jobs=args.jobs)
    doc = {"mapping": None if pi is None else mapping_to_json(pi),
           "params": _params(args, n=g.n, prune=not args.no_prune)}
    return (NO if pi is None else OK), doc


def cmd_brute_srgi(args):
    g, h = _pair(args)
    pi, kappa = brute_srgi(g, h, jobs=args.jobs)
    return OK, {"mapping": mapping_to_json(pi), "kappa": _float(kappa), "params": _params(args, n=g.n)}


def cmd_brute_feasible(args):
    g, h = _pair(args)
    pi = brute_mapping_feasible(g, h, args.k, args.ell)
    doc = {"mapping": None if pi is None else mapping_to_json(pi),
           "params": _params(args, n=g.n, k=args.k, ell=args.ell)}
    return (NO if pi is None else OK), doc


def cmd_align_trees(args):
    g, h = _pair(args)
    pi = align_trees(g, h, args.k, args.ell, root=args.root, jobs=args.jobs)
    doc = {"mapping": None if pi is None else mapping_to_json(pi), "k": args.k, "ell": args.ell,
           "kappa_spectral": None if pi is None else _float(condition(g, pull_back(h, pi), args.tol).kappa),
           "params": _params(args, n=g.n, k=args.k, ell=args.ell, root=args.root)}
    return (NO if pi is None else OK), doc


def cmd_srgi_certify(args):
    g, h = _pair(args)
    cert = srgi_certify(g, h, args.kappa)
    params = _params(args, n=g.n, kappa=args.kappa)
    if cert is None:
        return NO, {"certificate": None, "params": params}
    return OK, {"certificate": {"mapping": mapping_to_json(cert.mapping), "k": cert.k, "ell": cert.ell,
                                "kappa": _float(cert.kappa_certified),
                                "kappa_bound": (cert.k * cert.ell) ** 2}, "params": params}


def cmd_reduce_ham(args):
    grid = subgrid_from_json(load_json(args.grid))
    inst = reduce_hamiltonian(grid)
    return OK, {"g": subgrid_to_json(inst.grid), "h": graph_to_json(inst.h),
                "params": _params(args, n=inst.n)}


def cmd_resolve(args):
    doc = load_json(args.instance)
    if "g" not in doc:
        raise InputError("instance JSON needs a 'g' subgrid")
    grid = subgrid_from_json(doc["g"])
    if args.perm is not None:
        perm = load_json(args.perm) if not args.perm.lstrip().startswith("[") else json.loads(args.perm)
        h = apply_permutation(cycle_graph(grid.n), mapping_from_json(perm))
    elif "h" in doc:
        h = graph_from_json(doc["h"])
    else:
        raise InputError("give a cycle placement with --perm or an 'h' in the instance")
    res = resolve(grid, h, against_input=args.against_input)
    params = _params(args, n=grid.n, against_input=args.against_input)
    if isinstance(res, HamiltonianCycle):
        return OK, {"result": "hamiltonian_cycle", "order": list(res.order),
                    "improvements": res.improvements, "params": params}
    return OK, {"result": "witness", "witness": witness_to_json(res), "params": params}


def cmd_witness_verify(args):
    w = witness_from_json(load_json(args.witness))
    # placement priority: --h, then the witness's own cycle, then the instance's h
    h = graph_from_json(load_json(args.h)) if args.h is not None else w.cycle
    if args.instance is not None:
        doc = load_json(args.instance)
        g = subgrid_from_json(doc["g"]).graph
        if h is None and "h" in doc:
            h = graph_from_json(doc["h"])
    elif args.g is not None:
        g = graph_from_json(load_json(args.g))
    else:
        raise InputError("witness-verify needs --g or --instance")
    if h is None:
        raise InputError("no cycle placement: pass --h or a witness with a 'cycle'")
    ok = verify_witness(w, g, h)
    return (OK if ok else NO), {"valid": ok, "case": w.case, "params": _params(args, n=g.n)}


def cmd_sweep(args):
    fn = SUITES[args.suite]
    kwargs = {"seed": args.seed}
    if args.n is not None:
        kwargs["n"] = args.n
    if args.trials is not None:
        kwargs["trials"] = args.trials
    if args.jobs > 1 and args.suite in ("reduction", "dp-oracle"):
        kwargs["jobs"] = args.jobs
    if args.against_input:
        if args.suite != "witness":
            raise InputError("--against-input only applies to the witness suite")
        kwargs["against_input"] = True
    if args.suite == "gamma-size":
        kwargs = {}
    elif args.suite == "dp-oracle":
        kwargs.pop("trials", None)
    report = fn(**kwargs)
    if not args.timing:
        report = _strip_timing(report)
    report["params"] = _params(args, suite=args.suite, n=args.n, trials=args.trials)
    return (OK if report["passed"] else NO), report


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--pretty", action="store_true")
    common.add_argument("--jobs", type=int, default=1)

    p = _Parser(prog="spectralign", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    def pair(sp):
        sp.add_argument("--g", required=True, help="graph JSON path or -")
        sp.add_argument("--h", required=True, help="graph JSON path or -")

    sp = add("gen", cmd_gen, "generate a graph")
    sp.add_argument("--kind", required=True, choices=["path", "cycle", "star", "random_tree", "subgrid",
                                                      "random_subgrid", "core_subgrid"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--max-degree", type=int)
    sp.add_argument("--points", help="JSON list of [x, y] for --kind subgrid")

    for name, fn, help_ in (("support", cmd_support, "support number sigma(G, H)"),
                            ("condition", cmd_condition, "relative condition number"),
                            ("precedes", cmd_precedes, "whether G precedes H"),
                            ("embed-stats", cmd_embed_stats, "tree embedding statistics"),
                            ("brute-sgd", cmd_brute_sgd, "exhaustive dominance search"),
                            ("brute-srgi", cmd_brute_srgi, "exhaustive condition-number minimum")):
        sp = add(name, fn, help_)
        pair(sp)
        if name == "brute-sgd":
            sp.add_argument("--no-prune", action="store_true", help="check every permutation spectrally")

    sp = add("resistance", cmd_resistance, "effective resistances")
    sp.add_argument("--g", required=True)
    sp.add_argument("--u", type=int)
    sp.add_argument("--v", type=int)

    for name, fn, help_ in (("brute-feasible", cmd_brute_feasible, "exhaustive stretch/cut search"),
                            ("align-trees", cmd_align_trees, "dynamic-program tree alignment")):
        sp = add(name, fn, help_)
        pair(sp)
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--ell", type=int, required=True)
        if name == "align-trees":
            sp.add_argument("--root", type=int)

    sp = add("srgi-certify", cmd_srgi_certify, "certified low-condition tree mapping")
    pair(sp)
    sp.add_argument("--kappa", type=float, required=True)

    sp = add("reduce-ham", cmd_reduce_ham, "pair a subgrid with the n-cycle")
    sp.add_argument("--grid", required=True)

    sp = add("resolve", cmd_resolve, "witness against a cycle placement, or a Hamiltonian cycle")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--perm", help="cycle placement as a JSON list or file")
    sp.add_argument("--against-input", action="store_true")

    sp = add("witness-verify", cmd_witness_verify, "exact recheck of a witness")
    sp.add_argument("--witness", required=True)
    sp.add_argument("--instance")
    sp.add_argument("--g")
    sp.add_argument("--h")

    sp = add("sweep", cmd_sweep, "run a batch experiment")
    sp.add_argument("--suite", required=True, choices=sorted(SUITES))
    sp.add_argument("--n", type=int)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--timing", action="store_true", help="keep wall-clock fields")
    sp.add_argument("--against-input", action="store_true",
                    help="witness suite: refute the given placement, not an improved one")
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    pretty = "--pretty" in (argv if argv is not None else sys.argv[1:])
    try:
        args = build_parser().parse_args(argv)
        if args.jobs < 1:
            raise InputError("--jobs must be at least 1")
        if not args.tol > 0:
            raise InputError("--tol must be positive")
        code, doc = args.func(args)
    except (GraphError, PatternError, ValueError, KeyError, TypeError) as exc:
        doc = {"error": str(exc), "type": type(exc).__name__}
        code = ERROR
    out.write(dumps(doc, pretty) + "\n")
    return code


def main() -> None:
    sys.exit(run())
