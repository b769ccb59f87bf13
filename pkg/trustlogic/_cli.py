"""Command line workbench for trustlogic."""

import logging
import sys
from argparse import SUPPRESS, ArgumentParser, Namespace, _SubParsersAction
from typing import Any, Callable, Dict, List, NoReturn, Optional, Sequence, Tuple

import trustlogic._options as opt
from trustlogic import __version__
from trustlogic.engine.proofs import Verdict
from trustlogic.logic.syntax import ParseError, parse_formula
from trustlogic.publish.output import publish_html, render_text, reports_to_json
from trustlogic.publish.queries import (
    COUNTERMODEL,
    PROVE,
    RISK,
    TERM,
    TRUST_DERIVE,
    TRUST_VERIFY,
    CorpusResult,
    Query,
    QueryReport,
    run_corpus,
    run_query,
)
from trustlogic.publish.workspace import Workspace, load_workspace
from trustlogic.trust.networks import TrustEdge
from trustlogic.trust.threshold import parse_threshold

PROG = "trustlogic"
DESCRIPTION = "Prove, refute and derive trust in workspace files."
EPILOG = "Run program with no arguments for subcommand help."

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_UNDECIDED = 2
EXIT_USAGE = 3

EXIT_CODES = {
    Verdict.PROVED: EXIT_OK,
    Verdict.DERIVED: EXIT_OK,
    Verdict.NOT_PROVABLE: EXIT_NEGATIVE,
    Verdict.REFUTED: EXIT_NEGATIVE,
    Verdict.UNDETERMINED: EXIT_UNDECIDED,
    Verdict.BUDGET_EXCEEDED: EXIT_UNDECIDED,
}


class UsageError(Exception):
    """Bad arguments or unreadable input."""


class _Parser(ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


parser = _Parser(prog=PROG, usage=None, description=DESCRIPTION, epilog=EPILOG)
subparsers = parser.add_subparsers(dest="subcommand")

parser.add_argument("-v", "--version", action="version", version=__version__)
parser.add_argument(
    "--log-level",
    default=None,
    help="logging level written to stderr (default: log_level option)",
)


CliArg = Tuple[List[str], Dict[str, Any]]


def argument(*name_or_flags: str, **kwargs: Any) -> CliArg:
    """Convenience function to properly format arguments to pass to the
    subcommand decorator.
    """
    return (list(name_or_flags), kwargs)


def subcommand(
    *subparser_args: CliArg,
    parent: _SubParsersAction = subparsers,
    name: Optional[str] = None,
) -> Callable[..., Any]:
    """Decorator to define a new subcommand in a sanity-preserving way.
    The function will be stored in the ``func`` variable when the parser
    parses arguments so that it can be called directly like so::
        args = cli.parse_args()
        args.func(args)
    The subcommand is called `name`, or the function name with dashes.
    """

    def decorator(func: Callable[..., Any]) -> Callable[..., Any]:
        parser_ = parent.add_parser(
            name or func.__name__.replace("_", "-"),
            description=func.__doc__,
            add_help=False,
            usage=SUPPRESS,
        )
        for args, kwargs in subparser_args:
            parser_.add_argument(*args, **kwargs)
        parser_.set_defaults(func=func)
        return func

    return decorator


_workspace = argument("file", help="workspace file")
_formula = argument("formula", help="formula to query")
_from = argument(
    "--from", dest="using", default=None, help="comma-separated assumption names"
)
_budget = argument("--budget", type=float, default=None, help="search node budget")
_worlds = argument("--worlds", type=int, default=None, help="largest countermodel frame")
_json = argument("--json", action="store_true", help="print the JSON report")


def _load(path: str) -> Workspace:
    try:
        return load_workspace(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from e


def _names(using: Optional[str]) -> Optional[Tuple[str, ...]]:
    if using is None:
        return None
    return tuple(n for n in using.split(",") if n)


def _edge(ws: Workspace, words: Sequence[str]) -> TrustEdge:
    order, truster, trustee, predicate = words
    if not order.isdigit():
        raise UsageError(f"trust order must be a natural number, got {order!r}")
    return TrustEdge(
        int(order), ws.universe.check(truster), ws.universe.check(trustee), predicate
    )


def _emit(args: Namespace, reports: Sequence[QueryReport]) -> None:
    if args.json or opt.options.output_format == "json":
        print(reports_to_json(reports))
    else:
        print(render_text(reports), end="")


def _answer(args: Namespace, ws: Optional[Workspace], query: Query) -> int:
    report = run_query(ws, query)
    _emit(args, [report])
    return EXIT_CODES[report.verdict]


def _formula_query(args: Namespace, kind: str) -> int:
    ws = _load(args.file)
    query = Query(
        kind,
        parse_formula(args.formula, ws.universe),
        _names(args.using),
        budget=args.budget,
        worlds=getattr(args, "worlds", None),
    )
    return _answer(args, ws, query)


@subcommand(_workspace, _formula, _from, _budget, _worlds, _json)
def prove(args: Namespace) -> int:
    """prove a formula from the workspace assumptions"""
    return _formula_query(args, PROVE)


@subcommand(_workspace, _formula, _from, _budget, _json)
def term(args: Namespace) -> int:
    """prove a formula and print its proof term and normal form"""
    return _formula_query(args, TERM)


@subcommand(_workspace, _formula, _from, _budget, _worlds, _json)
def countermodel(args: Namespace) -> int:
    """search for a Kripke frame refuting a formula"""
    return _formula_query(args, COUNTERMODEL)


@subcommand(
    _workspace,
    argument("--edge", nargs=4, metavar=("N", "A", "B", "P"), default=None),
    argument("--verify", action="store_true", help="re-prove every derived edge"),
    _budget,
    _json,
)
def trust_derive(args: Namespace) -> int:
    """saturate the asserted trust of a workspace"""
    ws = _load(args.file)
    edge = _edge(ws, args.edge) if args.edge else None
    return _answer(
        args, ws, Query(TRUST_DERIVE, edge=edge, budget=args.budget, verify=args.verify)
    )


@subcommand(
    _workspace,
    argument("edge", nargs=4, metavar="WORD", help="trust edge: order truster trustee predicate"),
    _budget,
    _json,
)
def trust_verify(args: Namespace) -> int:
    """re-prove a derived trust edge with the sequent prover"""
    ws = _load(args.file)
    return _answer(args, ws, Query(TRUST_VERIFY, edge=_edge(ws, args.edge), budget=args.budget))


@subcommand(
    argument("threshold", help="k-of-n threshold such as 2of3"),
    argument("probabilities", nargs="+", type=float, help="per-source failure probability"),
    _json,
)
def risk(args: Namespace) -> int:
    """failure probability of a k-of-n threshold scheme"""
    query = Query(
        RISK, threshold=parse_threshold(args.threshold), probabilities=tuple(args.probabilities)
    )
    return _answer(args, None, query)


@subcommand(
    argument("action", choices=["run"]),
    argument("paths", nargs="*", help="workspace files (default: the shipped corpus)"),
    argument("--html", default=None, metavar="FILE", help="also write an HTML report"),
    _budget,
    _json,
)
def corpus(args: Namespace) -> int:
    """check the golden expectations of workspace files"""
    results: List[CorpusResult] = run_corpus(args.paths or None, args.budget)
    if args.json or opt.options.output_format == "json":
        print(reports_to_json(corpus=results))
    else:
        print(render_text(corpus=results), end="")
    if args.html:
        publish_html(corpus=results, filepath=args.html, title="trustlogic corpus")
    return EXIT_OK if all(r.passed for r in results) else EXIT_NEGATIVE


@subcommand()
def print_default_options(*args: Any) -> int:
    """print default options"""
    print(opt.LogicOptions()._to_yaml_str())
    return EXIT_OK


def print_subcommand_help() -> None:
    """Print help for subcommands."""
    subparser_actions = [
        action for action in parser._actions if isinstance(action, _SubParsersAction)
    ]
    print("subcommands:")
    for subparsers_action in subparser_actions:
        left_pad_size = max(len(x) for x in subparsers_action.choices.keys()) + 2
        left_pad_size = max(left_pad_size, 22)
        for choice, subparser in subparsers_action.choices.items():
            print(f"  {choice:<{left_pad_size}}{subparser.format_help().strip()}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parser.parse_args(argv)
    level = (args.log_level or opt.options.log_level).upper()
    if not isinstance(logging.getLevelName(level), int):
        print(f"{PROG}: error: unknown log level {level!r}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )
    if args.subcommand is None:
        parser.print_help()
        print()
        print_subcommand_help()
        return EXIT_OK
    try:
        code: int = args.func(args)
    except (ParseError, UsageError, KeyError, ValueError) as e:
        message = e.args[0] if type(e) is KeyError and e.args else e
        print(f"{PROG}: error: {message}", file=sys.stderr)
        return EXIT_USAGE
    return code
