"""Proof trees of the flat-context sequent calculus and the operations on finished proofs."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from trustlogic.engine.axioms import CompiledAxiomSystem
from trustlogic.logic.contexts import FlatContext, Sequent
from trustlogic.logic.formulas import (
    BOT,
    And,
    Formula,
    Imp,
    Modal,
    Modality,
    Or,
    Token,
    Top,
)


class Rule(Enum):
    VAR = "Var"
    TOP_R = "TopR"
    BOT_L = "BotL"
    IMP_R = "ImpR"
    IMP_L = "ImpL"
    MOD_R = "ModR"
    AND_L1 = "AndL1"
    AND_L2 = "AndL2"
    AND_R = "AndR"
    OR_L = "OrL"
    OR_R1 = "OrR1"
    OR_R2 = "OrR2"
    EPS_L = "EpsL"


class Verdict(Enum):
    PROVED = "proved"
    NOT_PROVABLE = "not-provable"
    BUDGET_EXCEEDED = "budget-exceeded"
    DERIVED = "derived"
    REFUTED = "refuted"
    UNDETERMINED = "undetermined"


def merge(*parts: Iterable[Formula]) -> Tuple[Formula, ...]:
    """Ordered union of formula sequences."""
    out: Dict[Formula, None] = {}
    for part in parts:
        for f in part:
            out[f] = None
    return tuple(out)


@dataclass(frozen=True)
class ProofTree:
    """A node of a derivation; contexts are read as sets.

    Attributes:
        context (tuple): Formulas left of the turnstile.
        goal (Formula): Formula right of the turnstile.
        rule (Rule): Rule concluding this node.
        premises (tuple): Sub-derivations, in the rule's premise order.
        principal (Formula): Context formula a left rule acts on; None for right rules.

    """

    context: Tuple[Formula, ...]
    goal: Formula
    rule: Rule
    premises: Tuple["ProofTree", ...] = ()
    principal: Optional[Formula] = None

    @property
    def sequent(self) -> Sequent:
        return Sequent(FlatContext(self.context), self.goal)

    def walk(self) -> Iterator["ProofTree"]:
        """Pre-order traversal."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.premises))

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def depth(self) -> int:
        if not self.premises:
            return 1
        return 1 + max(p.depth() for p in self.premises)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rule": self.rule.value,
            "principal": None if self.principal is None else self.principal.render(),
            "context": [f.render() for f in self.context],
            "goal": self.goal.render(),
            "premises": [p.to_dict() for p in self.premises],
        }

    def render(self, indent: int = 0) -> str:
        """Indented text, one sequent per line, premises below their conclusion."""
        lines: List[str] = []
        self._render_lines(indent, lines)
        return "\n".join(lines)

    def _render_lines(self, indent: int, lines: List[str]) -> None:
        tag = self.rule.value
        if self.principal is not None:
            tag += f" on {self.principal.render()}"
        lines.append(f"{'  ' * indent}{self.sequent.render()}    [{tag}]")
        for p in self.premises:
            p._render_lines(indent + 1, lines)


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    max_depth: int = 0
    subsumption_prunes: int = 0
    cache_hits: int = 0

    def to_dict(self) -> Dict[str, int]:
        return dict(self.__dict__)


@dataclass
class ProofResult:
    verdict: Verdict
    proof: Optional[ProofTree] = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def proved(self) -> bool:
        return self.verdict is Verdict.PROVED


# ---------------------------------------------------------------------------+
#                           Context subtraction                              |
# ---------------------------------------------------------------------------+


def minus_sources(
    ctx: Iterable[Formula], n: Modality, sys: CompiledAxiomSystem
) -> Dict[Formula, Formula]:
    """Map each formula of `ctx (-) n` to the first context formula producing it."""
    sources: Dict[Formula, Formula] = {}
    for f in ctx:
        if not isinstance(f, Modal):
            continue
        if sys.unit_holds(f.modality, n):
            sources.setdefault(f.body, f)
        r = sys.split_of(f.modality, n)
        if r is not None:
            sources.setdefault(Modal(r, f.body), f)
    return sources


def context_minus(
    ctx: Iterable[Formula], n: Modality, sys: CompiledAxiomSystem
) -> FlatContext:
    """The context available after introducing modality `n` on the right.

    For each `[M]B` in ctx: B when M => N, and `[M (-) N]B` when the split is defined.
    Non-modal formulas are dropped.
    """
    return FlatContext(tuple(minus_sources(ctx, n, sys)))


# ---------------------------------------------------------------------------+
#                              Checking proofs                               |
# ---------------------------------------------------------------------------+


def check_proof(p: ProofTree, sys: CompiledAxiomSystem) -> bool:
    """True iff every node instantiates its rule schema."""
    return all(_check_node(node, sys) for node in p.walk())


def _premises_match(
    p: ProofTree, *expected: Tuple[FrozenSet[Formula], Formula]
) -> bool:
    if len(p.premises) != len(expected):
        return False
    return all(
        frozenset(q.context) == ctx and q.goal == goal
        for q, (ctx, goal) in zip(p.premises, expected)
    )


def _check_node(p: ProofTree, sys: CompiledAxiomSystem) -> bool:
    ctx = frozenset(p.context)
    goal, f, rule = p.goal, p.principal, p.rule
    if rule is Rule.VAR:
        return isinstance(goal, Token) and goal in ctx and not p.premises
    if rule is Rule.TOP_R:
        return isinstance(goal, Top) and not p.premises
    if rule is Rule.BOT_L:
        return BOT in ctx and not p.premises
    if rule is Rule.IMP_R:
        return isinstance(goal, Imp) and _premises_match(p, (ctx | {goal.lhs}, goal.rhs))
    if rule is Rule.AND_R:
        return isinstance(goal, And) and _premises_match(p, (ctx, goal.lhs), (ctx, goal.rhs))
    if rule is Rule.OR_R1:
        return isinstance(goal, Or) and _premises_match(p, (ctx, goal.lhs))
    if rule is Rule.OR_R2:
        return isinstance(goal, Or) and _premises_match(p, (ctx, goal.rhs))
    if rule is Rule.MOD_R:
        if not isinstance(goal, Modal):
            return False
        minus = context_minus(p.context, goal.modality, sys).as_set()
        return _premises_match(p, (minus, goal.body))
    if f is None or f not in ctx:
        return False
    if rule is Rule.IMP_L:
        return isinstance(f, Imp) and _premises_match(p, (ctx, f.lhs), (ctx | {f.rhs}, goal))
    if rule is Rule.AND_L1:
        return isinstance(f, And) and _premises_match(p, (ctx | {f.lhs}, goal))
    if rule is Rule.AND_L2:
        return isinstance(f, And) and _premises_match(p, (ctx | {f.rhs}, goal))
    if rule is Rule.OR_L:
        return isinstance(f, Or) and _premises_match(
            p, (ctx | {f.lhs}, goal), (ctx | {f.rhs}, goal)
        )
    if rule is Rule.EPS_L:
        return (
            isinstance(f, Modal)
            and sys.is_eps(f.modality)
            and _premises_match(p, (ctx | {f.body}, goal))
        )
    return False


# ---------------------------------------------------------------------------+
#                                  Blame                                     |
# ---------------------------------------------------------------------------+


def used_assumptions(p: ProofTree, sys: CompiledAxiomSystem) -> Tuple[Formula, ...]:
    """Root-context formulas the derivation depends on, in context order."""
    used = _used(p, sys)
    return tuple(f for f in p.context if f in used)


def _used(p: ProofTree, sys: CompiledAxiomSystem) -> Set[Formula]:
    ctx = set(p.context)
    if p.rule is Rule.VAR:
        return {p.goal}
    if p.rule is Rule.BOT_L:
        return {BOT}
    if p.rule is Rule.MOD_R:
        assert isinstance(p.goal, Modal)
        sources = minus_sources(p.context, p.goal.modality, sys)
        return {sources[g] for g in _used(p.premises[0], sys) if g in sources}
    found: Set[Formula] = set()
    if p.principal is not None:
        found.add(p.principal)
    for q in p.premises:
        found.update(g for g in _used(q, sys) if g in ctx)
    return found


# ---------------------------------------------------------------------------+
#                           Building proofs directly                         |
# ---------------------------------------------------------------------------+


def weaken_proof(p: ProofTree, ctx: Sequence[Formula], sys: CompiledAxiomSystem) -> ProofTree:
    """Rebuild `p` over a context containing its own."""
    if not set(p.context) <= set(ctx):
        raise ValueError("Weakening context must contain the proof's context")
    new_ctx = merge(ctx, p.context)
    return _weaken(p, new_ctx, sys)


def _weaken(p: ProofTree, ctx: Tuple[Formula, ...], sys: CompiledAxiomSystem) -> ProofTree:
    if p.rule is Rule.MOD_R:
        assert isinstance(p.goal, Modal)
        minus = context_minus(ctx, p.goal.modality, sys).formulas
        premises: Tuple[ProofTree, ...] = (_weaken(p.premises[0], minus, sys),)
    else:
        premises = tuple(_weaken(q, merge(ctx, q.context), sys) for q in p.premises)
    return ProofTree(ctx, p.goal, p.rule, premises, p.principal)


def identity_proof(
    ctx: Sequence[Formula], a: Formula, sys: CompiledAxiomSystem
) -> ProofTree:
    """Proof of `ctx, a |- a` by eta-expansion, without search."""
    full = merge(ctx, (a,))
    if isinstance(a, Token):
        return ProofTree(full, a, Rule.VAR, (), a)
    if isinstance(a, Top):
        return ProofTree(full, a, Rule.TOP_R)
    if a == BOT:
        return ProofTree(full, a, Rule.BOT_L, (), BOT)
    if isinstance(a, Imp):
        with_lhs = merge(full, (a.lhs,))
        arg = identity_proof(full, a.lhs, sys)
        body = identity_proof(with_lhs, a.rhs, sys)
        apply = ProofTree(with_lhs, a.rhs, Rule.IMP_L, (arg, body), a)
        return ProofTree(full, a, Rule.IMP_R, (apply,))
    if isinstance(a, And):
        with_lhs = merge(full, (a.lhs,))
        both = merge(with_lhs, (a.rhs,))
        pair = ProofTree(
            both,
            a,
            Rule.AND_R,
            (
                identity_proof(both, a.lhs, sys),
                identity_proof(both, a.rhs, sys),
            ),
        )
        second = ProofTree(with_lhs, a, Rule.AND_L2, (pair,), a)
        return ProofTree(full, a, Rule.AND_L1, (second,), a)
    if isinstance(a, Or):
        left_ctx = merge(full, (a.lhs,))
        right_ctx = merge(full, (a.rhs,))
        left = ProofTree(left_ctx, a, Rule.OR_R1, (identity_proof(full, a.lhs, sys),))
        right = ProofTree(right_ctx, a, Rule.OR_R2, (identity_proof(full, a.rhs, sys),))
        return ProofTree(full, a, Rule.OR_L, (left, right), a)
    if isinstance(a, Modal):
        minus = context_minus(full, a.modality, sys).formulas
        rest = tuple(g for g in minus if g != a.body)
        return ProofTree(full, a, Rule.MOD_R, (identity_proof(rest, a.body, sys),))
    raise TypeError(f"Unsupported formula type: {type(a)}")
