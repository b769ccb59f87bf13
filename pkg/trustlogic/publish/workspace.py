"""Line-oriented workspace files: agents, axioms, assumptions, trust graphs and expectations.

Example::

    # dedicated domain
    agent a CA b
    edge CA -> a
    edge b -> CA
    trust 1 a CA P
    trust 0 CA b P
    assume k : [B a]t
    expect derived 0 a b P
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from trustlogic._options import resolve_config_option
from trustlogic.engine.axioms import (
    AxiomError,
    CompiledAxiomSystem,
    UnfoldingAxiom,
    check_decomposable,
    compile_system,
    parse_axiom,
    standard_modalities,
    standard_system,
)
from trustlogic.engine.proofs import Verdict
from trustlogic.logic.contexts import AgentUniverse, FlatContext, UnknownAgentError
from trustlogic.logic.formulas import Formula
from trustlogic.logic.syntax import ParseError, parse_formula
from trustlogic.trust.networks import (
    ACYCLIC,
    SHORTEST,
    ForwardingNetwork,
    NetworkError,
    TrustEdge,
    TrustGraphSpec,
)
from trustlogic.trust.threshold import parse_threshold

logger = logging.getLogger(__name__)

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_VERDICTS = {v.value: v for v in Verdict}
_SWITCH = {"on": True, "off": False}


class WorkspaceError(ParseError):
    """Malformed workspace line.

    Attributes:
        line (int): 1-based line number.
        filename (str): Source file, or '<string>'.

    """

    def __init__(
        self,
        message: str,
        line: int,
        filename: str = "<string>",
        text: str = "",
        position: int = 0,
    ):
        super().__init__(message, text, position)
        self.line = line
        self.filename = filename

    def __str__(self) -> str:
        return f"{self.filename}:{self.line}: {super().__str__()}"


@dataclass(frozen=True)
class Expectation:
    """A golden answer recorded in a workspace file.

    Attributes:
        kind (str): prove, term, countermodel, derived, not-derived, verify or risk.
        line (int): Line the expectation was read from.
        verdict (Verdict): Expected verdict, where the kind has one.
        formula (Formula): Goal of prove, term and countermodel expectations.
        using (tuple): Assumption names to prove from; None for all.
        edge (TrustEdge): Edge of derived, not-derived and verify expectations.
        threshold (tuple): (k, n) of a risk expectation.
        probabilities (tuple): Per-source failure probabilities of a risk expectation.
        value (float): Expected risk.

    """

    kind: str
    line: int
    verdict: Optional[Verdict] = None
    formula: Optional[Formula] = None
    using: Optional[Tuple[str, ...]] = None
    edge: Optional[TrustEdge] = None
    threshold: Optional[Tuple[int, int]] = None
    probabilities: Tuple[float, ...] = ()
    value: Optional[float] = None
    text: str = ""


@dataclass
class Workspace:
    """Everything a query runs against.

    Attributes:
        universe (AgentUniverse): Declared agents and their preorder.
        system (CompiledAxiomSystem): Standard system unless `axiom` lines were given.
        assumptions (dict): Named assumptions in declaration order.
        trust_spec (TrustGraphSpec): Graph, mode, seeds and asserted trust, if any.
        expectations (list): Golden answers.
        source (str): File the workspace was read from.

    """

    universe: AgentUniverse
    system: CompiledAxiomSystem
    assumptions: Dict[str, Formula] = field(default_factory=dict)
    trust_spec: Optional[TrustGraphSpec] = None
    expectations: List[Expectation] = field(default_factory=list)
    custom_axioms: bool = False
    source: str = "<string>"
    _network: Optional[ForwardingNetwork] = field(default=None, repr=False)

    @property
    def network(self) -> Optional[ForwardingNetwork]:
        if self.trust_spec is None:
            return None
        if self._network is None:
            self._network = self.trust_spec.network()
        return self._network

    def context(self, names: Optional[Sequence[str]] = None) -> FlatContext:
        """Assumptions called `names`, or all of them.

        Raises:
            KeyError: An unknown assumption name.

        """
        if names is None:
            return FlatContext(tuple(self.assumptions.values()))
        missing = [n for n in names if n not in self.assumptions]
        if missing:
            raise KeyError(f"Unknown assumption: {missing[0]}")
        return FlatContext(tuple(self.assumptions[n] for n in names))

    def names_of(self, formulas: Sequence[Formula]) -> List[str]:
        """Assumption names for formulas, in declaration order."""
        wanted = set(formulas)
        return [name for name, f in self.assumptions.items() if f in wanted]


class _SpecReader:
    """Two passes over the lines: declarations first, then everything mentioning formulas."""

    def __init__(self, text: str, filename: str):
        self.filename = filename
        self.lines: List[Tuple[int, str, List[str]]] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                self.lines.append((number, line, line.split()))

    def error(self, number: int, line: str, message: str, position: int = 0) -> WorkspaceError:
        return WorkspaceError(message, number, self.filename, line, position)

    def read(self) -> Workspace:
        agents: List[str] = []
        order: List[Tuple[str, str]] = []
        bottom: Optional[str] = None
        top: Optional[str] = None
        switches = {
            "box": bool(resolve_config_option("include_box", None)),
            "wish-inheritance": bool(resolve_config_option("wish_inheritance", None)),
        }
        later: List[Tuple[int, str, List[str]]] = []

        for number, line, words in self.lines:
            keyword, args = words[0], words[1:]
            if keyword == "agent":
                if not args:
                    raise self.error(number, line, "agent needs at least one id")
                agents.extend(args)
            elif keyword == "order":
                if len(args) != 3 or args[1] != "<=":
                    raise self.error(number, line, "order must read: order <a> <= <b>")
                order.append((args[0], args[2]))
            elif keyword in ("bottom", "top"):
                if len(args) != 1:
                    raise self.error(number, line, f"{keyword} takes one agent id")
                if keyword == "bottom":
                    bottom = args[0]
                else:
                    top = args[0]
            elif keyword == "option":
                if len(args) != 2 or args[0] not in switches or args[1] not in _SWITCH:
                    raise self.error(
                        number, line, "option must read: option box|wish-inheritance on|off"
                    )
                switches[args[0]] = _SWITCH[args[1]]
            elif keyword in ("edge", "mode", "path", "trust", "assume", "axiom", "expect"):
                later.append((number, line, words))
            else:
                raise self.error(number, line, f"unknown keyword {keyword!r}")

        try:
            universe = AgentUniverse.from_order(agents, order, bottom, top)
        except (ValueError, UnknownAgentError) as e:
            first = self.lines[0][0] if self.lines else 1
            raise WorkspaceError(str(e), first, self.filename) from e

        axioms: List[UnfoldingAxiom] = []
        assumptions: Dict[str, Formula] = {}
        edges: List[Tuple[str, str]] = []
        seeds: List[Tuple[str, ...]] = []
        asserted: List[TrustEdge] = []
        mode: Optional[str] = None
        expectations: List[Expectation] = []

        for number, line, words in later:
            keyword, args = words[0], words[1:]
            try:
                if keyword == "edge":
                    if len(args) != 3 or args[1] != "->":
                        raise self.error(number, line, "edge must read: edge <sender> -> <receiver>")
                    edges.append((universe.check(args[0]), universe.check(args[2])))
                elif keyword == "mode":
                    if len(args) != 1 or args[0] not in (SHORTEST, ACYCLIC):
                        raise self.error(number, line, "mode must be shortest or acyclic")
                    mode = args[0]
                elif keyword == "path":
                    if not args:
                        raise self.error(number, line, "path needs at least one agent")
                    seeds.append(tuple(universe.check(a) for a in args))
                elif keyword == "trust":
                    asserted.append(self._edge(number, line, args, universe))
                elif keyword == "assume":
                    name, formula = self._assumption(number, line, universe)
                    if name in assumptions:
                        raise self.error(number, line, f"assumption {name!r} declared twice")
                    assumptions[name] = formula
                elif keyword == "axiom":
                    axioms.append(parse_axiom(line, universe))
                else:
                    expectations.append(self._expectation(number, line, words[1:], universe))
            except UnknownAgentError as e:
                raise self.error(number, line, str(e)) from e
            except (ParseError, AxiomError) as e:
                if isinstance(e, WorkspaceError):
                    raise
                position = e.position if isinstance(e, ParseError) else 0
                raise self.error(number, line, getattr(e, "message", str(e)), position) from e

        system = self._system(axioms, universe, switches)
        trust_spec = None
        if edges or seeds or asserted or mode is not None:
            try:
                trust_spec = TrustGraphSpec(
                    universe.agents, tuple(edges), mode or SHORTEST, tuple(asserted), tuple(seeds)
                )
            except (ValueError, NetworkError) as e:
                raise WorkspaceError(str(e), later[0][0], self.filename) from e
        return Workspace(
            universe,
            system,
            assumptions,
            trust_spec,
            expectations,
            custom_axioms=bool(axioms),
            source=self.filename,
        )

    def _system(
        self,
        axioms: List[UnfoldingAxiom],
        universe: AgentUniverse,
        switches: Dict[str, bool],
    ) -> CompiledAxiomSystem:
        if not axioms:
            return standard_system(universe, switches["box"], switches["wish-inheritance"])
        system = compile_system(
            axioms, universe, standard_modalities(universe, switches["box"])
        )
        report = check_decomposable(
            system, int(resolve_config_option("decomposability_bound", None))
        )
        if not report.ok:
            logger.warning(
                "%s: custom axioms are not decomposable (%d violations)",
                self.filename,
                len(report.violations),
            )
        return system

    def _edge(
        self, number: int, line: str, args: List[str], universe: AgentUniverse
    ) -> TrustEdge:
        if len(args) != 4 or not args[0].isdigit():
            raise self.error(number, line, "trust edges read: <n> <truster> <trustee> <P>")
        if not _NAME.match(args[3]):
            raise self.error(number, line, f"invalid predicate name {args[3]!r}")
        return TrustEdge(int(args[0]), universe.check(args[1]), universe.check(args[2]), args[3])

    def _assumption(self, number: int, line: str, universe: AgentUniverse) -> Tuple[str, Formula]:
        head, sep, body = line.partition(":")
        words = head.split()
        if not sep or len(words) != 2 or not _NAME.match(words[1]):
            raise self.error(number, line, "assumptions read: assume <name> : <formula>")
        return words[1], self._formula(number, line, body, universe)

    def _formula(self, number: int, line: str, body: str, universe: AgentUniverse) -> Formula:
        offset = len(line) - len(body)
        try:
            return parse_formula(body, universe)
        except ParseError as e:
            raise self.error(number, line, e.message, offset + e.position) from e

    def _verdict(self, number: int, line: str, word: str) -> Verdict:
        if word not in _VERDICTS:
            raise self.error(number, line, f"unknown verdict {word!r}")
        return _VERDICTS[word]

    def _expectation(
        self, number: int, line: str, args: List[str], universe: AgentUniverse
    ) -> Expectation:
        if not args:
            raise self.error(number, line, "expect needs a kind")
        kind = args[0]
        if kind in ("prove", "term", "countermodel"):
            head, sep, body = line.partition(":")
            words = head.split()[2:]
            if not sep or not words:
                raise self.error(number, line, f"expect {kind} <verdict> [using <names>] : <formula>")
            verdict = self._verdict(number, line, words[0])
            using: Optional[Tuple[str, ...]] = None
            if len(words) == 3 and words[1] == "using":
                using = tuple(n for n in words[2].split(",") if n)
            elif len(words) != 1:
                raise self.error(number, line, f"unexpected words before ':' in expect {kind}")
            formula = self._formula(number, line, body, universe)
            return Expectation(kind, number, verdict, formula, using, text=line)
        if kind in ("derived", "not-derived"):
            return Expectation(kind, number, edge=self._edge(number, line, args[1:], universe), text=line)
        if kind == "verify":
            if len(args) != 6:
                raise self.error(number, line, "expect verify <n> <a> <b> <P> <verdict>")
            edge = self._edge(number, line, args[1:5], universe)
            return Expectation(
                kind, number, self._verdict(number, line, args[5]), edge=edge, text=line
            )
        if kind == "risk":
            head, sep, body = line.partition(":")
            words = head.split()[2:]
            if not sep or len(words) < 2:
                raise self.error(number, line, "expect risk <k>of<n> <p...> : <value>")
            try:
                threshold = parse_threshold(words[0])
                probabilities = tuple(float(p) for p in words[1:])
                value = float(body)
            except ValueError as e:
                raise self.error(number, line, str(e)) from e
            if len(probabilities) != threshold[1]:
                raise self.error(
                    number, line, f"{words[0]} needs {threshold[1]} probabilities"
                )
            return Expectation(
                kind,
                number,
                threshold=threshold,
                probabilities=probabilities,
                value=value,
                text=line,
            )
        raise self.error(number, line, f"unknown expectation kind {kind!r}")


def parse_spec(text: str, filename: str = "<string>") -> Workspace:
    """Build a workspace from its text.

    Raises:
        WorkspaceError: Any malformed line, undeclared agent or malformed axiom.

    """
    return _SpecReader(text, filename).read()


def load_workspace(path: Union[str, Path]) -> Workspace:
    path = Path(path)
    logger.info("loading workspace %s", path)
    return parse_spec(path.read_text(encoding="utf-8"), str(path))