"""Modal unfolding axioms and their compiled form.

An unfolding axiom `M => l` stands for the schema `M A -> l(A)`. A set of generators is
compiled into three tables the prover works from:

* ``unit``: pairs (M, N) with `M => N` derivable (reflexive, transitive);
* ``split``: the chosen witness R with `M => N R` derivable, written M (-) N;
* ``eps``: modalities M with `M => .` derivable (`M A -> A`).
"""

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import (
    DefaultDict,
    Deque,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from trustlogic.logic.contexts import AgentUniverse
from trustlogic.logic.formulas import (
    BOX,
    Belief,
    Interact,
    Modality,
    Wish,
    render_modality,
    render_unfolding,
)
from trustlogic.logic.syntax import FormulaParser, ParseError

logger = logging.getLogger(__name__)

Word = Tuple[Modality, ...]


class AxiomError(ValueError):
    """Malformed or unsupported axiom."""


def modality_key(m: Modality) -> str:
    """Deterministic sort key for modalities."""
    return render_modality(m)


@dataclass(frozen=True)
class UnfoldingAxiom:
    """`head(A) -> unfolding(A)` for every formula A; an empty unfolding reads `head(A) -> A`."""

    head: Modality
    unfolding: Word = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "unfolding", tuple(self.unfolding))

    def render(self) -> str:
        return render_axiom(self)


def render_axiom(ax: UnfoldingAxiom) -> str:
    """Workspace line body, e.g. `[I a <- b] => [B a][I a <- b]` or `[box] => .`."""
    return f"[{render_modality(ax.head)}] => {render_unfolding(ax.unfolding)}"


def parse_axiom(text: str, universe: Optional[AgentUniverse] = None) -> UnfoldingAxiom:
    """Read an axiom written as `[M] => [N][R]`; a leading `axiom` keyword is allowed."""
    parser = FormulaParser(text, universe)
    if parser.peek("axiom"):
        parser.identifier(allow_parens=False)
    head = parser.bracketed_modality()
    parser.expect("=>")
    unfolding = parser.unfolding()
    parser.finish()
    return UnfoldingAxiom(head, tuple(unfolding))


@dataclass(frozen=True)
class CompiledAxiomSystem:
    """Finite tables deciding the unfolding axioms derivable from `generators`.

    Attributes:
        modalities (frozenset): The declared modalities.
        unit (frozenset): Pairs (M, N) with `M => N` derivable, reflexively closed.
        split (dict): (M, N) -> R, the chosen residual with `M => N R` derivable.
        eps (frozenset): Modalities M with `M => .` derivable.
        generators (tuple): Source axioms.

    """

    modalities: FrozenSet[Modality]
    unit: FrozenSet[Tuple[Modality, Modality]]
    split: Dict[Tuple[Modality, Modality], Modality]
    eps: FrozenSet[Modality]
    generators: Tuple[UnfoldingAxiom, ...] = ()
    _pairs: FrozenSet[Tuple[Modality, Modality, Modality]] = field(
        default=frozenset(), repr=False, compare=False
    )

    def unit_holds(self, m: Modality, n: Modality) -> bool:
        return m == n or (m, n) in self.unit

    def split_of(self, m: Modality, n: Modality) -> Optional[Modality]:
        return self.split.get((m, n))

    def is_eps(self, m: Modality) -> bool:
        return m in self.eps

    def knows(self, m: Modality) -> bool:
        return m in self.modalities

    def pairs(self) -> FrozenSet[Tuple[Modality, Modality, Modality]]:
        """All derivable length-2 unfoldings (M, N, R)."""
        return self._pairs

    def sorted_modalities(self) -> List[Modality]:
        return sorted(self.modalities, key=modality_key)


# ---------------------------------------------------------------------------+
#                                Compilation                                 |
# ---------------------------------------------------------------------------+


class _Closure:
    """Semi-naive fixpoint over unit pairs, length-2 unfoldings and eps facts."""

    def __init__(self) -> None:
        self.unit: Set[Tuple[Modality, Modality]] = set()
        self.pairs: Set[Tuple[Modality, Modality, Modality]] = set()
        self.eps: Set[Modality] = set()
        self.unit_out: DefaultDict[Modality, Set[Modality]] = defaultdict(set)
        self.unit_in: DefaultDict[Modality, Set[Modality]] = defaultdict(set)
        self.pairs_by_head: DefaultDict[Modality, Set[Tuple[Modality, Modality]]] = defaultdict(set)
        self.pairs_by_first: DefaultDict[Modality, Set[Tuple[Modality, Modality]]] = defaultdict(set)
        self.pairs_by_second: DefaultDict[Modality, Set[Tuple[Modality, Modality]]] = defaultdict(
            set
        )
        self.queue: Deque[Tuple[Modality, ...]] = deque()

    def add_unit(self, m: Modality, n: Modality) -> None:
        if (m, n) not in self.unit:
            self.unit.add((m, n))
            self.unit_out[m].add(n)
            self.unit_in[n].add(m)
            self.queue.append((m, n))

    def add_pair(self, m: Modality, n: Modality, r: Modality) -> None:
        if (m, n, r) not in self.pairs:
            self.pairs.add((m, n, r))
            self.pairs_by_head[m].add((n, r))
            self.pairs_by_first[n].add((m, r))
            self.pairs_by_second[r].add((m, n))
            self.queue.append((m, n, r))

    def add_eps(self, m: Modality) -> None:
        if m not in self.eps:
            self.eps.add(m)
            self.queue.append((m,))

    def add_axiom(self, ax: UnfoldingAxiom) -> None:
        word = ax.unfolding
        if len(word) == 0:
            self.add_eps(ax.head)
        elif len(word) == 1:
            self.add_unit(ax.head, word[0])
        else:
            self.add_pair(ax.head, word[0], word[1])

    def run(self) -> int:
        steps = 0
        while self.queue:
            fact = self.queue.popleft()
            steps += 1
            if len(fact) == 1:
                self._eps_fact(fact[0])
            elif len(fact) == 2:
                self._unit_fact(fact[0], fact[1])
            else:
                self._pair_fact(fact[0], fact[1], fact[2])
        return steps

    def _unit_fact(self, m: Modality, n: Modality) -> None:
        for p in list(self.unit_out[n]):
            self.add_unit(m, p)
        for p, q in list(self.pairs_by_head[n]):
            self.add_pair(m, p, q)
        if n in self.eps:
            self.add_eps(m)
        for k in list(self.unit_in[m]):
            self.add_unit(k, n)
        for k, p in list(self.pairs_by_second[m]):
            self.add_pair(k, p, n)
        for k, r in list(self.pairs_by_first[m]):
            self.add_pair(k, n, r)

    def _pair_fact(self, m: Modality, n: Modality, r: Modality) -> None:
        for s in list(self.unit_out[r]):
            self.add_pair(m, n, s)
        for s in list(self.unit_out[n]):
            self.add_pair(m, s, r)
        if r in self.eps:
            self.add_unit(m, n)
        if n in self.eps:
            self.add_unit(m, r)
        for k in list(self.unit_in[m]):
            self.add_pair(k, n, r)

    def _eps_fact(self, m: Modality) -> None:
        for k in list(self.unit_in[m]):
            self.add_eps(k)
        for k, n in list(self.pairs_by_second[m]):
            self.add_unit(k, n)
        for k, r in list(self.pairs_by_first[m]):
            self.add_unit(k, r)


def compile_system(
    generators: Iterable[UnfoldingAxiom],
    universe: Optional[AgentUniverse] = None,
    modalities: Iterable[Modality] = (),
) -> CompiledAxiomSystem:
    """Compile generators into unit/split/eps tables.

    Args:
        generators (iterable): Axioms with unfoldings of length at most 2.
        universe (AgentUniverse): If given, every agent mentioned must belong to it.
        modalities (iterable): Extra modalities to declare besides those in the generators.

    Returns:
        CompiledAxiomSystem: The compiled system.

    """
    gens = tuple(generators)
    declared: Set[Modality] = set(modalities)
    for ax in gens:
        if len(ax.unfolding) > 2:
            raise AxiomError(f"Unfolding longer than 2 is not supported: {render_axiom(ax)}")
        declared.add(ax.head)
        declared.update(ax.unfolding)
    if universe is not None:
        for m in declared:
            unknown = [a for a in m.agents() if a not in universe]
            if unknown:
                raise AxiomError(f"Unknown modality {render_modality(m)!r}: agent {unknown[0]!r}")

    closure = _Closure()
    for m in declared:
        closure.add_unit(m, m)
    for ax in gens:
        closure.add_axiom(ax)
    steps = closure.run()
    logger.debug(
        "compiled %d generators over %d modalities in %d steps", len(gens), len(declared), steps
    )

    unit = frozenset(closure.unit)
    split: Dict[Tuple[Modality, Modality], Modality] = {}
    for (m, n), candidates in _candidates(closure.pairs).items():
        split[(m, n)] = _choose_split(candidates, unit)
    return CompiledAxiomSystem(
        modalities=frozenset(declared),
        unit=unit,
        split=split,
        eps=frozenset(closure.eps),
        generators=gens,
        _pairs=frozenset(closure.pairs),
    )


def _candidates(
    pairs: Iterable[Tuple[Modality, Modality, Modality]]
) -> Dict[Tuple[Modality, Modality], List[Modality]]:
    found: DefaultDict[Tuple[Modality, Modality], List[Modality]] = defaultdict(list)
    for m, n, r in pairs:
        found[(m, n)].append(r)
    return found


def _choose_split(
    candidates: Sequence[Modality], unit: FrozenSet[Tuple[Modality, Modality]]
) -> Modality:
    ordered = sorted(candidates, key=modality_key)
    for r in ordered:
        if all(r == s or (r, s) in unit for s in ordered):
            return r
    return ordered[0]


# ---------------------------------------------------------------------------+
#                             Standard system                                |
# ---------------------------------------------------------------------------+


def standard_modalities(universe: AgentUniverse, include_box: bool = False) -> List[Modality]:
    mods: List[Modality] = [Belief(a) for a in universe]
    mods += [Interact(a, b) for a in universe for b in universe]
    mods += [Wish(a) for a in universe]
    if include_box:
        mods.append(BOX)
    return mods


def standard_axioms(
    universe: AgentUniverse, include_box: bool = False, wish_inheritance: bool = False
) -> List[UnfoldingAxiom]:
    """Generator list of the standard trust system over `universe`."""
    agents = list(universe)
    axioms: List[UnfoldingAxiom] = []
    for a in agents:
        axioms.append(UnfoldingAxiom(Belief(a), (Belief(a), Belief(a))))
    for a in agents:
        for b in agents:
            i_ab = Interact(a, b)
            axioms.append(UnfoldingAxiom(i_ab, (Belief(a), i_ab)))
            axioms.append(UnfoldingAxiom(i_ab, (i_ab, Belief(b))))
    for a, b in sorted(universe.order):
        if a == b:
            continue
        axioms.append(UnfoldingAxiom(Belief(a), (Belief(b),)))
        if wish_inheritance:
            axioms.append(UnfoldingAxiom(Wish(a), (Wish(b),)))
        for c in agents:
            axioms.append(UnfoldingAxiom(Interact(a, c), (Interact(b, c),)))
            axioms.append(UnfoldingAxiom(Interact(c, a), (Interact(c, b),)))
    if include_box:
        for m in standard_modalities(universe, include_box=True):
            axioms.append(UnfoldingAxiom(BOX, (m, BOX)))
        axioms.append(UnfoldingAxiom(BOX, ()))
    return axioms


def standard_system(
    universe: AgentUniverse, include_box: bool = False, wish_inheritance: bool = False
) -> CompiledAxiomSystem:
    """Compiled belief/interaction system over `universe`, optionally with public knowledge."""
    return compile_system(
        standard_axioms(universe, include_box, wish_inheritance),
        universe,
        standard_modalities(universe, include_box),
    )


# ---------------------------------------------------------------------------+
#                          Deciding and certifying                           |
# ---------------------------------------------------------------------------+


def unfolds(sys: CompiledAxiomSystem, m: Modality, word: Sequence[Modality]) -> bool:
    """Decide whether `m => word` is derivable, factoring through the split table."""
    while True:
        if not word:
            return sys.is_eps(m)
        if len(word) == 1:
            return sys.unit_holds(m, word[0])
        r = sys.split_of(m, word[0])
        if r is None:
            return False
        m, word = r, word[1:]


def derivable_unfoldings(
    generators: Iterable[UnfoldingAxiom], modalities: Iterable[Modality], bound: int
) -> Set[Tuple[Modality, Word]]:
    """Every (M, word) with `M => word` derivable by rewriting with generators, length <= bound.

    Rewrites never pass through words longer than `bound`.
    """
    rules: DefaultDict[Modality, List[Word]] = defaultdict(list)
    heads: Set[Modality] = set(modalities)
    for ax in generators:
        rules[ax.head].append(ax.unfolding)
        heads.add(ax.head)
    found: Set[Tuple[Modality, Word]] = set()
    for head in heads:
        seen: Set[Word] = {(head,)}
        queue: Deque[Word] = deque(seen)
        while queue:
            word = queue.popleft()
            for i, m in enumerate(word):
                for replacement in rules.get(m, ()):
                    new = word[:i] + replacement + word[i + 1 :]
                    if len(new) <= bound and new not in seen:
                        seen.add(new)
                        queue.append(new)
        found.update((head, w) for w in seen)
    return found


@dataclass(frozen=True)
class Violation:
    head: Modality
    unfolding: Word
    reason: str

    def render(self) -> str:
        return f"[{render_modality(self.head)}] => {render_unfolding(self.unfolding)}: {self.reason}"


@dataclass(frozen=True)
class DecomposabilityReport:
    bound: int
    checked: int
    violations: Tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_decomposable(sys: CompiledAxiomSystem, bound: int = 4) -> DecomposabilityReport:
    """Check that every derivable `M => N N' l` of length <= bound factors through M (-) N.

    Args:
        sys (CompiledAxiomSystem): System to certify.
        bound (int): Largest unfolding length examined, at least 3.

    Returns:
        DecomposabilityReport: All violations found.

    """
    if bound < 3:
        raise ValueError("Decomposability bound must be at least 3")
    derivable = derivable_unfoldings(sys.generators, sys.modalities, bound)
    violations: List[Violation] = []
    checked = 0
    for head, word in sorted(derivable, key=_unfolding_key):
        if len(word) < 2:
            continue
        checked += 1
        r = sys.split_of(head, word[0])
        if r is None:
            violations.append(Violation(head, word, "split undefined"))
        elif not unfolds(sys, head, (word[0], r)):
            violations.append(Violation(head, word, f"split {render_modality(r)} is incoherent"))
        elif (r, word[1:]) not in derivable:
            violations.append(
                Violation(
                    head, word, f"split {render_modality(r)} does not unfold to the remainder"
                )
            )
    if violations:
        logger.warning("decomposability check found %d violations", len(violations))
    return DecomposabilityReport(bound, checked, tuple(violations))


def _unfolding_key(item: Tuple[Modality, Word]) -> Tuple[str, int, Tuple[str, ...]]:
    head, word = item
    return modality_key(head), len(word), tuple(modality_key(m) for m in word)


def system_from_lines(
    lines: Iterable[Union[str, UnfoldingAxiom]],
    universe: Optional[AgentUniverse] = None,
    modalities: Iterable[Modality] = (),
) -> CompiledAxiomSystem:
    """Compile a system from axiom text lines (or ready axioms)."""
    axioms: List[UnfoldingAxiom] = []
    for line in lines:
        if isinstance(line, UnfoldingAxiom):
            axioms.append(line)
            continue
        try:
            axioms.append(parse_axiom(line, universe))
        except ParseError as exc:
            raise AxiomError(str(exc)) from exc
    return compile_system(axioms, universe, modalities)
