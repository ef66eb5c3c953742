"""Command-line entry point.

Exit codes: 0 a verdict was computed (whatever it says), 1 usage error,
2 an exact search refused its input as too large, 3 an internal invariant
failed.
"""

from __future__ import annotations

import argparse
import difflib
import json
import os
import re
import sys
from dataclasses import asdict
from fractions import Fraction

import numpy as np

from . import __version__
from ._json import FORMAT_VERSIONS, encode, human
from .admit import decide_admission
from .bounds import (chain_verify, refined_threshold, star_palette, thresholds, verify_claim3,
                     verify_claim4, verify_lemma3, f1_range, g1_range)
from .digraph import (LoopVerdict, build_digraph, max_transitive_tournament, random_digraph,
                      star_admission, verify_lemma4)
from .exceptions import BudgetExceeded, GraphError, InvariantViolation, PaletteError
from .hypergraph import ThreeGraph, rodl_construct, star, star_apex, subset_density_profile
from .palette import (Palette, density, minimality_reduce, random_palette, removable_color,
                      verify_claim1)
from .search import exhaustive_best, local_search

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3
THREADS_ENV = "PALETTE_TURAN_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    known_options: set = set()

    def error(self, message):
        hint = ""
        m = re.search(r"unrecognized arguments: (\S+)", message)
        if m:
            close = difflib.get_close_matches(m.group(1), sorted(_Parser.known_options), n=1)
            if close:
                hint = f" (did you mean {close[0]}?)"
        raise UsageError(f"{self.prog}: {message}{hint}")

    def add_argument(self, *args, **kwargs):
        _Parser.known_options.update(a for a in args if a.startswith("-"))
        return super().add_argument(*args, **kwargs)


def _common() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    common.add_argument("--threads", type=int, default=int(os.environ.get(THREADS_ENV, "1")),
                        help=f"worker processes (default ${THREADS_ENV} or 1)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="palette-turan", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def leaf(parent, name, **kw):
        return parent.add_parser(name, parents=[common], **kw)

    pal = sub.add_parser("palette").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = leaf(pal, "info")
    p.add_argument("file")
    p = leaf(pal, "reduce")
    p.add_argument("file")
    p.add_argument("-o", "--output")

    gr = sub.add_parser("graph").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = leaf(gr, "star")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("-o", "--output")
    p = leaf(gr, "info")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int)

    p = leaf(sub, "admit")
    p.add_argument("--palette", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--method", choices=["auto", "general", "digraph"], default="auto")
    p.add_argument("--max-vertices", type=int, default=8)

    p = leaf(sub, "digraph")
    p.add_argument("--palette", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--export", help="write the digraph as JSON")
    p.add_argument("--dot", help="write the digraph in DOT")

    ver = sub.add_parser("verify").add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("lemma3", "lemma4", "claim1", "claims34"):
        p = leaf(ver, name)
        p.add_argument("--random", type=int, required=True)
        p.add_argument("--seed", type=int, required=True)
        if name == "lemma4":
            p.add_argument("--vertices", type=int, default=14)
        elif name == "claims34":
            p.add_argument("--k", type=int, required=True)
        else:
            p.add_argument("--colors", type=int, default=6)

    bd = sub.add_parser("bounds").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = leaf(bd, "chain")
    p.add_argument("--palette", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--no-reduce", action="store_true")
    p = leaf(bd, "star-palette")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("-o", "--output")
    leaf(bd, "thresholds")
    p = leaf(bd, "refined")
    p.add_argument("--from", dest="k_low", type=int, default=31)
    p.add_argument("--to", dest="k_high", type=int, default=48)

    p = leaf(sub, "search")
    p.add_argument("--graph", required=True)
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("-o", "--output", help="write the witness palette here")

    p = leaf(sub, "construct")
    p.add_argument("--palette", required=True)
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output")
    return parser


# -- command implementations; each returns a JSON-able dict ---------------------

def _load_palette(path) -> Palette:
    return Palette.load(path)


def cmd_palette(args) -> dict:
    p = _load_palette(args.file)
    if args.action == "info":
        return {"colors": p.colors, "triples": p.size, "density": density(p),
                "removableColor": removable_color(p)}
    r = minimality_reduce(p)
    if args.output:
        r.dump(args.output)
    return {"colors": r.colors, "triples": r.size, "density": density(r), "palette": r.to_json()}


def cmd_graph(args) -> dict:
    if args.action == "star":
        g = star(args.k)
        if args.output:
            g.dump(args.output)
        return g.to_json()
    g = ThreeGraph.load(args.file)
    doc = {"vertices": g.vertices, "edges": len(g.edges), "star": star_apex(g)}
    if args.samples:
        if args.seed is None:
            raise UsageError("--samples needs an explicit --seed")
        doc["profile"] = [asdict(s) for s in subset_density_profile(g, args.samples, args.seed)]
    return doc


def cmd_admit(args) -> dict:
    p = _load_palette(args.palette)
    g = ThreeGraph.load(args.graph)
    shape = star_apex(g)
    use_digraph = args.method == "digraph" or (args.method == "auto" and shape and g.vertices > args.max_vertices)
    if use_digraph:
        if shape is None:
            raise UsageError("the digraph method only applies to stars")
        if g != star(shape[1]):
            raise UsageError("the digraph method expects the star labeled with apex 0")
        return star_admission(p, shape[1]).to_json()
    return decide_admission(g, p, max_vertices=args.max_vertices).to_json()


def cmd_digraph(args) -> dict:
    p = _load_palette(args.palette)
    d = build_digraph(p)
    if isinstance(d, LoopVerdict):
        return {"loop": True, "roles": list(d.roles), "triple": list(d.triple)}
    if args.export:
        with open(args.export, "w") as fh:
            json.dump(d.to_json(), fh)
            fh.write("\n")
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(d.to_dot())
    size, w = max_transitive_tournament(d, cutoff=args.k, max_vertices=max(128, d.vertices))
    return {"loop": False, "n": d.colors, "arcs": len(d.arcs), "maxTT": size,
            "exact": args.k is None or size < args.k, "witness": list(w.vertices)}


def cmd_verify(args) -> dict:
    rng = np.random.default_rng(args.seed)
    failures = []
    for trial in range(args.random):
        if args.action == "lemma3":
            ok = verify_lemma3(random_palette(int(rng.integers(1, args.colors + 1)), rng)).passed
        elif args.action == "claim1":
            p = minimality_reduce(random_palette(int(rng.integers(1, args.colors + 1)), rng))
            ok = verify_claim1(p).passed
        elif args.action == "lemma4":
            d = random_digraph(int(rng.integers(1, args.vertices + 1)), rng)
            size, _ = max_transitive_tournament(d)
            ok = verify_lemma4(d, size + 1).passed
        else:
            k, span = args.k, 4000 * (args.k - 1)
            x3 = f1_range(k) + Fraction(int(rng.integers(0, span)), 1000)
            x4 = g1_range(k) + Fraction(int(rng.integers(0, span)), 1000)
            ok = verify_claim3(k, x3).holds and verify_claim4(k, x4).holds
        if not ok:
            failures.append(trial)
    return {"check": args.action, "checked": args.random, "failures": len(failures),
            "failedTrials": failures}


def cmd_bounds(args) -> dict:
    if args.action == "thresholds":
        k_star, k_g = thresholds()
        return {"kStar": k_star, "kG": k_g}
    if args.action == "star-palette":
        p = star_palette(args.k)
        if args.output:
            p.dump(args.output)
        return {"k": args.k, "colors": p.colors, "triples": p.size, "density": density(p)}
    if args.action == "refined":
        res = refined_threshold(args.k_low, args.k_high, workers=args.threads)
        return {"from": res.k_low, "to": res.k_high, "least": res.least, "trace": [
            {"k": v.k, "verdict": v.verdict, "floor": v.floor, "tangentRange": v.tangent_range,
             "target": v.target, "bestValue": v.best_value, "excess": v.excess,
             "witness": list(v.witness) if v.witness else None, "evaluations": v.evaluations}
            for v in res.verdicts]}
    p = _load_palette(args.palette)
    if not args.no_reduce:
        p = minimality_reduce(p)
    rep = chain_verify(p, args.k)
    return {"k": rep.k, "colors": p.colors, "density": rep.density, "target": rep.target,
            "finalBound": rep.final_bound, "passed": rep.passed, "complete": rep.complete,
            "equality": rep.equality,
            "steps": [{"name": s.name, "status": s.status, "note": s.note, **s.values}
                      for s in rep.steps]}


def cmd_search(args) -> dict:
    g = ThreeGraph.load(args.graph)
    if args.exhaustive:
        res = exhaustive_best(g, args.colors)
    else:
        if args.seed is None:
            raise UsageError("heuristic search needs an explicit --seed")
        res = local_search(g, args.colors, args.iters, args.seed, args.restarts, workers=args.threads)
    if args.output and res.witness is not None:
        res.witness.dump(args.output)
    doc = res.to_json()
    if res.density is None:
        doc["note"] = "no palette on these colors escapes admission"
    return doc


def cmd_construct(args) -> dict:
    p = _load_palette(args.palette)
    c = rodl_construct(p, args.vertices, args.seed)
    if args.output:
        c.graph.dump(args.output)
    return {"vertices": c.graph.vertices, "edges": len(c.graph.edges), "seed": args.seed,
            "graph": c.graph.to_json()}


COMMANDS = {"palette": cmd_palette, "graph": cmd_graph, "admit": cmd_admit,
            "digraph": cmd_digraph, "verify": cmd_verify, "bounds": cmd_bounds,
            "search": cmd_search, "construct": cmd_construct}


def _render(doc, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for key, value in doc.items():
        if isinstance(value, Fraction):
            lines.append(f"{pad}{key}: {human(value)}")
        elif isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines += _render(value, indent + 1)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines += _render(item, indent + 1)
                lines.append("")
        elif isinstance(value, (list, tuple)):
            lines.append(f"{pad}{key}: " + ", ".join(
                human(v) if isinstance(v, Fraction) else str(v) for v in value))
        else:
            lines.append(f"{pad}{key}: {value}")
    return lines


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.version:
            print(json.dumps({"version": __version__, "formats": FORMAT_VERSIONS}))
            return EXIT_OK
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        doc = COMMANDS[args.command](args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (PaletteError, GraphError, FileNotFoundError, ValueError) as exc:
        print(f"palette-turan: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"palette-turan: refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as exc:
        print(f"palette-turan: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    if getattr(args, "json", False):
        print(json.dumps(encode(doc), sort_keys=True))
    else:
        print("\n".join(_render(doc)))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
