"""Command-line front end.

Every subcommand prints JSON (compact, fixed key order) unless
``--format table`` asks for a plain-text view.  Exit status: 0 on success,
2 when an input violates a precondition, 3 when a resource bound is hit.
"""
from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations_with_replacement

from .cherries import classify_smooth, matching_families
from .cohomology import build_blowup_plan, poincare_multiscale
from .errors import PreconditionError, ResourceLimitError
from .graphs import (DEFAULT_MAX_N, LevelGraph, Signature, enumerate_strata, graph_from_json,
                     graph_to_json)
from .lattice import ghost_group_order, prong_orbit_count, twist_data
from .strata import census, intersection_profile


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _table(obj, prefix="") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{prefix}{k}:")
                lines.extend(_table(v, prefix + "  "))
            else:
                lines.append(f"{prefix}{k}: {_dump(v)}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{prefix}[{i}]")
                lines.extend(_table(v, prefix + "  "))
            else:
                lines.append(f"{prefix}{_dump(v)}")
    else:
        lines.append(f"{prefix}{_dump(obj)}")
    return lines


def _flat(v) -> bool:
    items = v.values() if isinstance(v, dict) else v
    return all(not isinstance(x, (dict, list)) for x in items)


def _emit(args, obj) -> None:
    if args.format == "table":
        print("\n".join(_table(obj)))
    else:
        print(_dump(obj))


def _strata_for(args) -> list[LevelGraph]:
    return enumerate_strata(args.mu, codim=args.codim, max_n=args.max_n)


def cmd_strata(args):
    if args.codim is not None or args.list:
        graphs = _strata_for(args)
        _emit(args, {"codim": args.codim, "count": len(graphs),
                     "strata": [graph_to_json(g) for g in graphs]})
    else:
        _emit(args, census(args.mu, max_n=args.max_n).to_json())


def cmd_smooth(args):
    _emit(args, classify_smooth(args.mu, max_n=args.max_n).to_json())


def scan_box(n: int, lo: int, hi: int, max_n: int | None = None):
    """Smoothness over all signatures with entries in ``[lo, hi]``.

    Signatures are scanned as sorted representatives (the verdict does not
    depend on the order of the legs).
    """
    scanned, smooth = 0, []
    for combo in combinations_with_replacement(range(hi, lo - 1, -1), n):
        if sum(combo) != -2:
            continue
        scanned += 1
        v = classify_smooth(combo, max_n=max_n)
        if v.smooth:
            smooth.append({"mu": list(combo), "families": matching_families(combo)})
    return scanned, smooth


def cmd_smooth_scan(args):
    if args.min > args.max:
        raise PreconditionError("--min must not exceed --max")
    if args.n < 3:
        raise PreconditionError("--n must be at least 3")
    scanned, smooth = scan_box(args.n, args.min, args.max, max_n=args.max_n)
    _emit(args, {"n": args.n, "min": args.min, "max": args.max, "scanned": scanned,
                 "smooth": smooth})


def cmd_ghost(args):
    rows, nontrivial = [], 0
    for g in _strata_for(args):
        if g.num_levels == 0:
            order, snf = 1, []
        else:
            res = ghost_group_order(twist_data(g))
            order, snf = res.ghost_order, list(res.snf_diagonal)
        nontrivial += order != 1
        if args.all or order != 1:
            rows.append({"graph": graph_to_json(g), "ghost_order": order, "snf": snf})
    _emit(args, {"mu": list(args.mu.orders), "nontrivial": nontrivial, "strata": rows})


def cmd_prongs(args):
    rows = []
    for g in _strata_for(args):
        orbits = 1 if g.num_levels == 0 else prong_orbit_count(twist_data(g))
        rows.append({"graph": graph_to_json(g), "orbits": orbits})
    _emit(args, {"mu": list(args.mu.orders), "strata": rows})


def _read_json(stream):
    try:
        return json.load(stream)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"input is not valid JSON: {exc}") from None


def cmd_profile(args):
    data = _read_json(sys.stdin)
    if isinstance(data, dict):
        data = data.get("divisors", [])
    if not isinstance(data, list) or not data:
        raise PreconditionError("expected a nonempty JSON list of divisor graphs")
    divisors = [graph_from_json(d) for d in data]
    res = intersection_profile(divisors, divisors[0].mu, max_n=args.max_n)
    if res is None:
        _emit(args, {"profile": None, "horizontal": [], "realizations": []})
        return
    profile, graphs = res
    out = profile.to_json()
    _emit(args, {"profile": out["vertical"], "horizontal": out["horizontal"],
                 "realizations": [graph_to_json(g) for g in graphs]})


def cmd_poincare(args):
    tie = args.tie_break
    if tie == "shuffle":
        tie = f"shuffle:{args.seed}"
    p = poincare_multiscale(args.mu, experimental=args.experimental, tie_break=tie,
                            max_n=args.max_n)
    out = p.to_json()
    if args.plan:
        out["plan"] = build_blowup_plan(args.mu, args.experimental, tie,
                                        max_n=args.max_n).to_json()
    _emit(args, out)


def to_dot(g: LevelGraph) -> str:
    """DOT rendering: one rank per level, enhancements as edge labels."""
    lines = [f"// graph-json: {_dump(graph_to_json(g))}", "digraph stratum {",
             "  node [shape=circle];"]
    for v, legs in enumerate(g.legs):
        label = ",".join(map(str, legs))
        lines.append(f'  v{v} [label="{label}"];')
    for lev in range(0, -g.num_levels - 1, -1):
        members = " ".join(f"v{v};" for v in g.vertices_at(lev))
        lines.append(f'  subgraph level{-lev} {{ rank = same; {members} }}')
    for a, b, k in g.edges:
        if k:
            lines.append(f'  v{a} -> v{b} [label="{k}"];')
        else:
            lines.append(f'  v{a} -> v{b} [label="0", dir=none];')
    lines.append("}")
    return "\n".join(lines)


def parse_dot_graph(text: str) -> LevelGraph:
    """Recover the graph from the JSON comment written by ``to_dot``."""
    for line in text.splitlines():
        if line.startswith("// graph-json: "):
            return graph_from_json(json.loads(line[len("// graph-json: "):]))
    raise PreconditionError("no graph-json comment found")


def cmd_dot(args):
    if args.graph is not None:
        if args.graph == "-":
            data = _read_json(sys.stdin)
        else:
            try:
                with open(args.graph) as fh:
                    data = _read_json(fh)
            except OSError as exc:
                raise PreconditionError(f"cannot read {args.graph}: {exc}") from None
        g = graph_from_json(data)
    else:
        if args.mu is None:
            raise PreconditionError("dot needs --mu (with --index) or --graph")
        graphs = _strata_for(args)
        if not 0 <= args.index < len(graphs):
            raise PreconditionError(f"--index must be in 0..{len(graphs) - 1}")
        g = graphs[args.index]
    print(to_dot(g))


def _mu(text: str) -> Signature:
    return Signature.parse(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multiscale",
        description="Boundary strata, ghost groups, smoothness and Betti numbers "
                    "of genus-0 multiscale differential spaces.")
    parser.add_argument("--format", choices=("json", "table"), default="json")
    parser.add_argument("--max-n", type=int, default=DEFAULT_MAX_N,
                        help="enumeration bound on the number of marked points (default %(default)s)")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized tie-breaks")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_mu(p, required=True):
        p.add_argument("--mu", type=str, required=required,
                       help="comma-separated orders summing to -2, e.g. 0,0,0,0,-2")
        p.add_argument("--codim", type=int, default=None)
        return p

    p = with_mu(sub.add_parser("strata", help="stratum census or listing"))
    p.add_argument("--list", action="store_true", help="list every stratum")
    p.set_defaults(func=cmd_strata)

    p = sub.add_parser("smooth", help="smoothness verdict with witness and family")
    p.add_argument("--mu", type=str, required=True)
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("smooth-scan", help="smoothness over a box of signatures")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--min", type=int, default=-6)
    p.add_argument("--max", type=int, default=6)
    p.set_defaults(func=cmd_smooth_scan)

    p = with_mu(sub.add_parser("ghost", help="ghost-group orders per stratum"))
    p.add_argument("--all", action="store_true", help="report trivial ghost groups too")
    p.set_defaults(func=cmd_ghost)

    p = with_mu(sub.add_parser("prongs", help="prong-matching orbit counts per stratum"))
    p.set_defaults(func=cmd_prongs)

    p = sub.add_parser("profile", help="resolve divisor graphs (JSON list on stdin)")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("poincare", help="Poincaré polynomial via the blowup tower")
    p.add_argument("--mu", type=str, required=True)
    p.add_argument("--experimental", action="store_true",
                   help="allow the exceptional n=5/6 smooth families")
    p.add_argument("--tie-break", default="canonical",
                   help="canonical, reverse, edges-desc or shuffle (uses --seed)")
    p.add_argument("--plan", action="store_true", help="include the blowup plan")
    p.set_defaults(func=cmd_poincare)

    p = with_mu(sub.add_parser("dot", help="render a stratum as DOT"), required=False)
    p.add_argument("--index", type=int, default=0, help="position in the stratum list")
    p.add_argument("--graph", default=None, help="graph JSON file, or - for stdin")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "mu", None) is not None:
            args.mu = _mu(args.mu)
        args.func(args)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
