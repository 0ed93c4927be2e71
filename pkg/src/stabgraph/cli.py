"""Command-line entry point ``stab``.

Exit codes: 0 success, 2 invalid input, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .circulant_lab import EXAMPLES, all_conditions, classify_type, construct_example
from .errors import InvalidInput, SearchBudgetExceeded
from .graph import CirculantSpec, Graph, circulant, format_graph, parse_graph
from .products import ProductKind, product
from .skeleton import boolean_square, cartesian_skeleton
from .stability import Outcome, Verdict, find_tf_morphism, stability_status
from .survey import DEDUP_MODES, SurveyOptions, dumps, survey

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def load_graph(arg: str) -> tuple[Graph, CirculantSpec | None]:
    """``c:<n>:<s,...>``, a path to a graph text file, or ``-`` for stdin."""
    if arg.startswith("c:"):
        spec = CirculantSpec.parse(arg)
        return circulant(spec), spec
    if arg == "-":
        return parse_graph(sys.stdin.read()), None
    try:
        text = Path(arg).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read graph {arg!r}: {exc.strerror}") from None
    return parse_graph(text), None


def _need_spec(arg: str) -> CirculantSpec:
    if not arg.startswith("c:"):
        raise InvalidInput("expected a circulant spec c:<n>:<s1,s2,...>")
    return CirculantSpec.parse(arg)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_classify(args) -> int:
    g, spec = load_graph(args.graph)
    st = stability_status(g, args.budget)
    out = st.to_json()
    out["witness"] = None
    if st.verdict is Verdict.NONTRIVIALLY_UNSTABLE:
        found = find_tf_morphism(g, True, None, args.budget)
        if found.outcome is Outcome.INCONCLUSIVE:
            raise SearchBudgetExceeded(args.budget or 0, "TF-morphism search")
        out["witness"] = None if found.witness is None else found.witness.to_json()
    if spec is not None and spec.n % 2 == 0:
        out["type"] = classify_type(spec, args.budget, status=st).to_json()
    _emit(out)
    return EXIT_OK


def cmd_conditions(args) -> int:
    spec = _need_spec(args.spec)
    rep = all_conditions(spec, args.budget)
    _emit(rep.to_json())
    if any(v.outcome is Outcome.INCONCLUSIVE for v in rep.outcomes.values()):
        print("search budget exhausted on at least one condition", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_survey(args) -> int:
    opts = SurveyOptions(
        max_order=args.max_order,
        out=args.out,
        jobs=args.jobs,
        dedup=args.dedup,
        budget=args.budget,
        min_order=args.min_order,
    )
    summary = None
    for rec in survey(opts):
        if args.out is None:
            print(dumps(rec))
        summary = rec
    if args.out is not None and summary is not None:
        print(dumps(summary), file=sys.stderr)
    return EXIT_OK


def cmd_product(args) -> int:
    g, _ = load_graph(args.left)
    h, _ = load_graph(args.right)
    sys.stdout.write(format_graph(product(g, h, ProductKind.parse(args.kind)).graph))
    return EXIT_OK


def cmd_skeleton(args) -> int:
    g, _ = load_graph(args.graph)
    sys.stdout.write("# boolean square\n" + format_graph(boolean_square(g)))
    sys.stdout.write("# cartesian skeleton\n" + format_graph(cartesian_skeleton(g)))
    return EXIT_OK


def cmd_construct(args) -> int:
    c = construct_example(args.name, n=args.n, two_m=args.two_m, cycle=args.cycle, kind=args.kind, k=args.k)
    out = c.to_json()
    if args.graph:
        out["graph"] = format_graph(c.graph.graph)
    _emit(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stab", description="Graph stability workbench")
    parser.add_argument("--budget", type=int, default=None, help="search node cap (default: STAB_BUDGET or 10^7)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="stability verdict of a graph or circulant spec")
    p.add_argument("graph", help="c:<n>:<s,...>, graph text file, or - for stdin")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("conditions", help="every circulant instability condition as JSON")
    p.add_argument("spec", help="c:<n>:<s,...>")
    p.set_defaults(func=cmd_conditions)

    p = sub.add_parser("survey", help="classify every circulant up to a given order")
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--min-order", type=int, default=2)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dedup", choices=DEDUP_MODES, default="none")
    p.add_argument("--out", type=Path, default=None, help="JSON Lines output (resumed if present)")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("product", help="product of two graphs in graph text format")
    p.add_argument("--kind", default="direct", help="direct, cartesian, strong, semistrong or lex")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("skeleton", help="Boolean square and Cartesian skeleton")
    p.add_argument("graph")
    p.set_defaults(func=cmd_skeleton)

    p = sub.add_parser("construct", help="build one of the product examples")
    p.add_argument("name", choices=EXAMPLES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--two-m", type=int, default=None)
    p.add_argument("--cycle", type=int, default=None)
    p.add_argument("--kind", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--graph", action="store_true", help="include the graph text")
    p.set_defaults(func=cmd_construct)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SearchBudgetExceeded as exc:
        print(f"stab: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvalidInput as exc:
        print(f"stab: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
