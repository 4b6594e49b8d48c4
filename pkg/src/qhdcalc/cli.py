"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 parse/validation error,
3 internal anomaly (unmatched pattern, non-stabilizing h^1, census anomaly).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from fractions import Fraction

from . import blowup, cohomology, criterion, cyclic, graph

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_ANOMALY = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


class CliError(Exception):
    def __init__(self, msg, code=EXIT_INVALID):
        super().__init__(msg)
        self.code = code


def _read_graph(path: str) -> graph.WeightedGraph:
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    try:
        return graph.parse_graph(text)
    except graph.GraphParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=False))


def _cmd_validate(args):
    # lenient parse so that invariant violations land in the report
    try:
        text = (
            sys.stdin.read()
            if args.graphfile == "-"
            else open(args.graphfile).read()
        )
        g = graph.parse_graph(text, check=False)
    except OSError as exc:
        raise CliError(f"cannot read {args.graphfile}: {exc}") from None
    except graph.GraphParseError as exc:
        raise CliError(f"{args.graphfile}: {exc}") from None
    rep = graph.validate(g)
    _emit({"ok": rep.ok, "violations": list(rep.violations)})
    return EXIT_OK if rep.ok else EXIT_INVALID


def _cmd_matrix(args):
    m = graph.intersection_matrix(_read_graph(args.graphfile))
    _emit(
        {
            "ordering": list(m.ordering),
            "entries": [list(r) for r in m.entries],
            "det": graph.determinant(m),
        }
    )
    return EXIT_OK


def _cmd_negdef(args):
    m = graph.intersection_matrix(_read_graph(args.graphfile))
    _emit({"negative_definite": graph.is_negative_definite(m)})
    return EXIT_OK


def _attach_cross_ratio(g, value):
    if g.cross_ratio is None and any(
        g.valency(v) == 4 for v in g.vertices
    ):
        return g.replace(cross_ratio=graph.CrossRatio.rational(value))
    return g


def _cmd_blowup(args):
    g = _read_graph(args.graphfile)
    try:
        for tok in args.ops:
            op = blowup.BlowUpOp.parse(tok)
            g = (
                blowup.apply_b1(g)
                if op.kind == "B1"
                else blowup.apply_b2(g, op.edge)
            )
            g = _attach_cross_ratio(g, args.cross_ratio)
    except (ValueError, blowup.BlowupError) as exc:
        raise CliError(str(exc)) from None
    sys.stdout.write(graph.format_graph(g))
    return EXIT_OK


def _cmd_blowdown(args):
    g = _read_graph(args.graphfile)
    try:
        g = blowup.blow_down(g, args.vertex)
    except blowup.BlowupError as exc:
        raise CliError(str(exc)) from None
    sys.stdout.write(graph.format_graph(g))
    return EXIT_OK


def _cmd_augment(args):
    g = _read_graph(args.graphfile)
    try:
        g = _attach_cross_ratio(
            blowup.augment(g, args.type), args.cross_ratio
        )
    except blowup.BlowupError as exc:
        raise CliError(str(exc)) from None
    sys.stdout.write(graph.format_graph(g))
    return EXIT_OK


def _cmd_minimalize(args):
    g = _read_graph(args.graphfile)
    try:
        g = blowup.minimalize(g, args.type)
    except blowup.BlowupError as exc:
        raise CliError(str(exc)) from None
    sys.stdout.write(graph.format_graph(g))
    return EXIT_OK


def _cmd_enumerate(args):
    for cls in blowup.enumerate_classes(args.type, args.max_ops, args.cross_ratio):
        g = cls.graph
        m = graph.intersection_matrix(g)
        _emit(
            {
                "key": cls.key,
                "weights": sorted(g.weights.values(), reverse=True),
                "node_count": len(graph.nodes(g)),
                "det": graph.determinant(m),
                "negdef": graph.is_negative_definite(m),
                "witness": cls.witness.to_text(),
            }
        )
    return EXIT_OK


def _cmd_classify(args):
    from . import shapes

    g = _read_graph(args.graphfile)
    shape = shapes.classify_shape(g)
    out = {"shape": shape.tag}
    if shape.node_valency is not None:
        out["node_valency"] = shape.node_valency
    try:
        match = shapes.match_lemma(g)
    except shapes.MatchError:
        match = None
    if match:
        out["lemma"] = match.lemma
        out["bindings"] = {
            k: (list(map(list, v)) if k == "triples" else v)
            for k, v in match.bindings.items()
        }
        out["epsilon"] = shapes.epsilon_of(match)
    else:
        out["lemma"] = None
    _emit(out)
    return EXIT_OK


def _cmd_cyclic(args):
    if args.action == "chain":
        try:
            e = cyclic.hj_expand(args.p * args.p, args.p * args.q - 1)
        except ValueError as exc:
            raise CliError(str(exc)) from None
        sys.stdout.write(graph.format_graph(cyclic.chain_graph(e)))
        return EXIT_OK
    g = _read_graph(args.graphfile)
    try:
        w = cyclic.recognize_qhd_linear(g)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    _emit({"witness": [w.p, w.q] if w else None})
    return EXIT_OK


def _cmd_h1(args):
    g = _read_graph(args.graphfile)
    try:
        if args.cycle:
            s_list = [int(t) for t in args.cycle.split(",")]
            vs = g.vertices
            if len(s_list) != len(vs):
                raise CliError(
                    f"cycle needs {len(vs)} entries, got {len(s_list)}"
                )
            s = dict(zip(vs, s_list))
            if args.dump_matrix:
                m = cohomology.cech_matrix(g, s)
                with open(args.dump_matrix, "w") as fh:
                    fh.write(m.dump_triplets())
            val = cohomology.h1_of_cycle(g, s)
            _emit({"h1": val, "cycle": s_list})
        else:
            val, trace = cohomology.h1_log(
                g, args.max_multiplier, return_trace=True
            )
            if args.dump_matrix:
                s0 = cohomology.ample_cycle(g)
                mult = trace[-1][0]
                m = cohomology.cech_matrix(
                    g, {v: mult * s0[v] for v in s0}
                )
                with open(args.dump_matrix, "w") as fh:
                    fh.write(m.dump_triplets())
            _emit({"h1": val, "trace": [list(t) for t in trace]})
    except cohomology.StabilizationError as exc:
        raise CliError(str(exc), EXIT_ANOMALY) from None
    except cohomology.CohomologyError as exc:
        raise CliError(str(exc)) from None
    return EXIT_OK


def _verdict_json(v: criterion.QhdVerdict) -> dict:
    out = asdict(v)
    return {k: out[k] for k in (
        "mode", "stage", "epsilon", "m", "sum_d3", "h1_bound",
        "dim_bound", "verdict",
    )}


def _cmd_qhd(args):
    try:
        h = blowup.ConstructionHistory.parse(args.history)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    modes = (
        [criterion.MODE_BOOKKEEPING, criterion.MODE_COHOMOLOGY]
        if args.mode == "both"
        else [args.mode]
    )
    out = []
    try:
        for mode in modes:
            out.append(
                _verdict_json(
                    criterion.dimension_bound(
                        h, mode, args.cross_ratio, args.max_multiplier
                    )
                )
            )
    except criterion.PatternMissError as exc:
        code = EXIT_INVALID if exc.out_of_scope else EXIT_ANOMALY
        raise CliError(str(exc), code) from None
    except criterion.AnnotationError as exc:
        raise CliError(str(exc), EXIT_ANOMALY) from None
    except cohomology.StabilizationError as exc:
        raise CliError(str(exc), EXIT_ANOMALY) from None
    except (blowup.BlowupError, ValueError) as exc:
        raise CliError(str(exc)) from None
    _emit(out[0] if len(out) == 1 else out)
    return EXIT_OK


def _cmd_census(args):
    cfg = criterion.RunConfig(
        max_ops=args.max_ops,
        max_multiplier=args.max_multiplier,
        cross_ratio_default=args.cross_ratio,
        seeds=tuple(args.type) if args.type else blowup.SEED_TYPES,
        cohomology=(args.mode == "both"),
    )
    rep = criterion.run_census(cfg)
    text = rep.to_jsonl()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_ANOMALY if rep.anomalies else EXIT_OK


def _cmd_export_dot(args):
    sys.stdout.write(graph.to_dot(_read_graph(args.graphfile)))
    return EXIT_OK


def build_parser() -> _Parser:
    p = _Parser(prog="qhdcalc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, **kw)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", _cmd_validate, help="check the graph invariants")
    sp.add_argument("graphfile")
    sp = add("matrix", _cmd_matrix, help="intersection matrix and determinant")
    sp.add_argument("graphfile")
    sp = add("negdef", _cmd_negdef, help="negative definiteness test")
    sp.add_argument("graphfile")
    sp = add("blowup", _cmd_blowup, help="apply blow-up ops to a graph")
    sp.add_argument("graphfile")
    sp.add_argument("ops", nargs="+", metavar="OP", help="B1 or B2@i-j")
    sp.add_argument("--cross-ratio", type=_fraction, default=Fraction(-1))
    sp = add("blowdown", _cmd_blowdown, help="contract a (-1)-vertex")
    sp.add_argument("graphfile")
    sp.add_argument("vertex", type=int)
    sp = add("augment", _cmd_augment, help="attach the type's pendant chain")
    sp.add_argument("graphfile")
    sp.add_argument("--type", required=True, choices=blowup.SEED_TYPES)
    sp.add_argument("--cross-ratio", type=_fraction, default=Fraction(-1))
    sp = add("minimalize", _cmd_minimalize, help="remove the pendant chain")
    sp.add_argument("graphfile")
    sp.add_argument("--type", required=True, choices=blowup.SEED_TYPES)
    sp = add("enumerate", _cmd_enumerate, help="list minimal graph classes")
    sp.add_argument("--type", required=True, choices=blowup.SEED_TYPES)
    sp.add_argument("--max-ops", type=int, default=6)
    sp.add_argument("--cross-ratio", type=_fraction, default=Fraction(-1))
    sp = add("classify", _cmd_classify, help="shape and base-pattern match")
    sp.add_argument("graphfile")
    spc = add("cyclic", _cmd_cyclic, help="linear chain recognition")
    cyc = spc.add_subparsers(dest="action", required=True)
    sp = cyc.add_parser("recognize")
    sp.add_argument("graphfile")
    sp.set_defaults(fn=_cmd_cyclic, action="recognize")
    sp = cyc.add_parser("chain")
    sp.add_argument("p", type=int)
    sp.add_argument("q", type=int)
    sp.set_defaults(fn=_cmd_cyclic, action="chain")
    sp = add("h1", _cmd_h1, help="stabilized h^1 of the plumbing curve")
    sp.add_argument("graphfile")
    sp.add_argument("--cycle", help="comma-separated multiplicities")
    sp.add_argument("--max-multiplier", type=int, default=8)
    sp.add_argument("--dump-matrix", metavar="FILE")
    sp = add("qhd", _cmd_qhd, help="smoothing-dimension verdict for a history")
    sp.add_argument("history", help="e.g. 'seed=A ops=B1,B2@3-4 mod=yes'")
    sp.add_argument(
        "--mode",
        choices=[criterion.MODE_BOOKKEEPING, criterion.MODE_COHOMOLOGY, "both"],
        default=criterion.MODE_BOOKKEEPING,
    )
    sp.add_argument("--cross-ratio", type=_fraction, default=Fraction(-1))
    sp.add_argument("--max-multiplier", type=int, default=8)
    sp = add("census", _cmd_census, help="sweep all classes and evaluate")
    sp.add_argument("--type", action="append", choices=blowup.SEED_TYPES)
    sp.add_argument("--max-ops", type=int, default=6)
    sp.add_argument(
        "--mode", choices=["bookkeeping", "both"], default="bookkeeping"
    )
    sp.add_argument("--cross-ratio", type=_fraction, default=Fraction(-1))
    sp.add_argument("--max-multiplier", type=int, default=8)
    sp.add_argument("--out", metavar="FILE")
    sp = add("export-dot", _cmd_export_dot, help="DOT rendering of a graph")
    sp.add_argument("graphfile")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.fn(args)
    except CliError as exc:
        print(f"qhdcalc: error: {exc}", file=sys.stderr)
        code = exc.code
    except ValueError as exc:
        print(f"qhdcalc: error: {exc}", file=sys.stderr)
        code = EXIT_INVALID
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
