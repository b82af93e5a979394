"""``autocat`` command line: check, eval, parse, normalize, render, harness."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .diagram import Diagram
from .errors import AutocatError
from .functors import free_to_mat, map_diagram, value
from .harness import SUITES, run_suite
from .models import FreeSignature, MatTensor, Signature, TriState
from .pregroup import (Order, all_reductions, find_reduction, format_type, parse_type,
                       reduction_to_diagram, sentence_meaning, sentence_types)
from .render import render
from .rewrite import count_nodes, equal, normalize
from .textio import (Interpretation, LexiconEntry, format_diagram, format_matrix,
                     load_diagram, load_interpretation, load_lexicon, load_signature)

EXIT_OK, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 64
VERDICT_EXIT = {TriState.EQUAL: EXIT_OK, TriState.NOT_EQUAL: EXIT_NO,
                TriState.UNKNOWN: EXIT_UNKNOWN}


class UsageError(AutocatError):
    """Bad command-line input; reported with exit status 64."""


@dataclass
class Workspace:
    signature: Signature | None = None
    interpretation: Interpretation | None = None
    lexicon: dict[str, LexiconEntry] | None = None
    diagrams: dict[str, Diagram] = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> Workspace:
        ws = cls()
        if args.sig:
            ws.signature = load_signature(args.sig)
        if args.model:
            ws.interpretation = load_interpretation(args.model)
        if args.lexicon:
            ws.lexicon = load_lexicon(args.lexicon)
        return ws

    def load(self, path: str) -> Diagram:
        d = load_diagram(path, self.signature)
        limit = max_nodes()
        size = sum(count_nodes(d))
        if size > limit:
            raise UsageError(f"{path}: {size} nodes exceeds AUTOCAT_MAX_NODES={limit}")
        self.diagrams[path] = d
        return d

    def dims(self) -> dict[str, int]:
        dims = {}
        if self.signature is not None:
            dims.update({k: v for k, v in self.signature.objects.items() if v is not None})
        if self.interpretation is not None:
            dims.update(self.interpretation.dims)
        return dims

    def mats(self) -> dict:
        return dict(self.interpretation.mats) if self.interpretation else {}

    def to_matrices(self, d: Diagram) -> Diagram:
        """Map free boxes and object names into MatTensor; numeric diagrams pass through."""
        if not _is_free(d):
            return d
        return map_diagram(free_to_mat(self.dims(), self.mats()), d)


def max_nodes() -> int:
    raw = os.environ.get("AUTOCAT_MAX_NODES", "100000")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"AUTOCAT_MAX_NODES must be an integer, got {raw!r}") from None


def _is_free(d: Diagram) -> bool:
    boxes = d.boxes()
    if boxes:
        return isinstance(boxes[0].model, FreeSignature)
    bases = [o.base for o in d.dom + d.cod] + [n.base for _, _, n in d.nodes()
                                               if not hasattr(n, "value")]
    return any(not isinstance(b, int) for b in bases)


def _trace(args: argparse.Namespace):
    if not args.trace:
        return None
    return lambda line: print(line, file=sys.stderr)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_check(args: argparse.Namespace) -> int:
    ws = Workspace.from_args(args)
    a, b = ws.load(args.a), ws.load(args.b)
    verdict = equal(a, b, trace=_trace(args))
    if verdict is TriState.UNKNOWN and ws.interpretation is not None:
        # an interpretation can only refute, never confirm
        if value(ws.to_matrices(a), MatTensor()) != value(ws.to_matrices(b), MatTensor()):
            verdict = TriState.NOT_EQUAL
    print(verdict)
    return VERDICT_EXIT[verdict]


def cmd_eval(args: argparse.Namespace) -> int:
    ws = Workspace.from_args(args)
    d = ws.load(args.diagram)
    print(format_matrix(value(ws.to_matrices(d), MatTensor())), end="")
    return EXIT_OK


def cmd_normalize(args: argparse.Namespace) -> int:
    ws = Workspace.from_args(args)
    d = ws.load(args.diagram)
    print(format_diagram(normalize(d, _trace(args))), end="")
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    ws = Workspace.from_args(args)
    d = ws.load(args.diagram)
    text = render(d, args.format or "svg")
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_parse(args: argparse.Namespace) -> int:
    ws = Workspace.from_args(args)
    if ws.lexicon is None:
        raise UsageError("parse needs --lexicon")
    words = args.sentence.split()
    basics = ws.signature.objects if ws.signature is not None else None
    order = Order(ws.signature.order) if ws.signature is not None else Order()
    target = parse_type(args.target, basics)
    types = sentence_types(words, ws.lexicon, basics)
    for w, t in zip(words, types):
        print(f"{w} : {format_type(t)}")
    reductions = all_reductions(types, target, order) if args.all else \
        [r for r in [find_reduction(types, target, order)] if r is not None]
    if not reductions:
        print(f"no reduction to {format_type(target)}")
        return EXIT_NO
    for k, r in enumerate(reductions, 1):
        if args.all:
            print(f"reduction {k}")
        print(r)
    if args.diagram:
        print(format_diagram(reduction_to_diagram(reductions[0], types, order)), end="")
    if args.meaning:
        meaning = sentence_meaning(words, ws.lexicon, ws.dims(), ws.mats(), target, order)
        print(format_matrix(meaning), end="")
    return EXIT_OK


def cmd_harness(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else 1
    suites = SUITES if args.suite == "all" else (args.suite,)
    ok = True
    for name in suites:
        rep = run_suite(name, seed)
        print("\n".join(rep.lines()))
        ok = ok and rep.ok
    return EXIT_OK if ok else EXIT_NO


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--sig", default=default, help="signature file")
    parser.add_argument("--model", default=default, help="interpretation file")
    parser.add_argument("--lexicon", default=default, help="lexicon file")
    parser.add_argument("--trace", action="store_true",
                        default=argparse.SUPPRESS if suppress else False,
                        help="print rewrite steps to stderr")
    parser.add_argument("--seed", type=int, default=default, help="harness seed")
    parser.add_argument("--format", default=default, help="output format (svg or tikz)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="autocat", description=__doc__)
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        _global_flags(p, suppress=True)
        p.set_defaults(func=func)
        return p

    p = add("check", cmd_check, "decide equality of two diagrams (exit 0/1/2)")
    p.add_argument("a")
    p.add_argument("b")
    p = add("eval", cmd_eval, "evaluate a diagram to a matrix")
    p.add_argument("diagram")
    p = add("normalize", cmd_normalize, "print the normal form of a diagram")
    p.add_argument("diagram")
    p = add("render", cmd_render, "draw a diagram as SVG or TikZ")
    p.add_argument("diagram")
    p.add_argument("-o", "--output", help="write to a file instead of stdout")
    p = add("parse", cmd_parse, "find pregroup reductions of a sentence")
    p.add_argument("sentence")
    p.add_argument("--target", default="s", help="target type (default s)")
    p.add_argument("--all", action="store_true", help="list every planar reduction")
    p.add_argument("--meaning", action="store_true", help="evaluate the sentence meaning")
    p.add_argument("--diagram", action="store_true", help="print the reduction diagram")
    p = add("harness", cmd_harness, "run seeded property suites")
    p.add_argument("--suite", default="all", choices=SUITES + ("all",))
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.command == "render" and (args.format or "svg") not in ("svg", "tikz"):
        print(f"autocat: error: unknown render format {args.format!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except AutocatError as exc:
        print(f"autocat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
