"""Backward proof search for the flat-context sequent calculus.

Search applies invertible rules eagerly and backtracks only over ImpL principal choice,
the two OrR rules and ModR. A branch whose goal already occurs below an ancestor with a
larger-or-equal context is pruned; such branches never occur in reduced proofs, which
bounds the search and makes a failed search a definitive answer.
"""

import logging
import math
import sys as _sys
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from trustlogic._options import resolve_config_option
from trustlogic.engine.axioms import CompiledAxiomSystem
from trustlogic.engine.proofs import (
    ProofResult,
    ProofTree,
    Rule,
    SearchStats,
    Verdict,
    context_minus,
    identity_proof,
    merge,
    weaken_proof,
)
from trustlogic.logic.contexts import FlatContext, Hypothesis, ModalContext
from trustlogic.logic.formulas import (
    BOT,
    And,
    Formula,
    Imp,
    Modal,
    Or,
    Token,
    Top,
    formula_size,
)

logger = logging.getLogger(__name__)

_NO_ANCESTOR = math.inf
_RECURSION_LIMIT = 6000

Outcome = Tuple[Optional[ProofTree], float]


class _BudgetExhausted(Exception):
    pass


class _ProofSearch:
    """One search run; holds the ancestor stack and the result caches."""

    def __init__(
        self,
        sys: CompiledAxiomSystem,
        budget: float,
        loop_check: bool = True,
        cache_results: bool = True,
    ):
        self.sys = sys
        self.budget = budget
        self.loop_check = loop_check
        self.cache_results = cache_results
        self.stats = SearchStats()
        self._stack: List[Tuple[FrozenSet[Formula], Formula]] = []
        self._proved: Dict[Formula, List[Tuple[FrozenSet[Formula], ProofTree]]] = {}
        self._failed: Dict[Formula, List[FrozenSet[Formula]]] = {}

    # ------------------------------------------------------------------------+
    #                                Main loop                                |
    # ------------------------------------------------------------------------+

    def search(self, ctx: Tuple[Formula, ...], goal: Formula) -> Outcome:
        """Return a proof of `ctx |- goal` or None with the shallowest ancestor the failure used."""
        self.stats.nodes_expanded += 1
        if self.stats.nodes_expanded > self.budget:
            raise _BudgetExhausted()
        depth = len(self._stack)
        self.stats.max_depth = max(self.stats.max_depth, depth)
        ctxset = frozenset(ctx)

        closed = self._close(ctx, ctxset, goal)
        if closed is not None:
            return closed, _NO_ANCESTOR

        if self.loop_check:
            for i, (seen, seen_goal) in enumerate(self._stack):
                if seen_goal == goal and ctxset <= seen:
                    self.stats.subsumption_prunes += 1
                    return None, i

        if self.cache_results:
            for proved_ctx, proof in self._proved.get(goal, ()):
                if proved_ctx <= ctxset:
                    self.stats.cache_hits += 1
                    return weaken_proof(proof, ctx, self.sys), _NO_ANCESTOR
            if any(ctxset <= failed for failed in self._failed.get(goal, ())):
                self.stats.cache_hits += 1
                return None, _NO_ANCESTOR

        self._stack.append((ctxset, goal))
        try:
            proof, low = self._expand(ctx, ctxset, goal)
        finally:
            self._stack.pop()

        if self.cache_results:
            if proof is not None:
                self._proved.setdefault(goal, []).append((ctxset, proof))
            elif low >= depth:
                self._failed.setdefault(goal, []).append(ctxset)
        return proof, low

    def _close(
        self, ctx: Tuple[Formula, ...], ctxset: FrozenSet[Formula], goal: Formula
    ) -> Optional[ProofTree]:
        if isinstance(goal, Top):
            return ProofTree(ctx, goal, Rule.TOP_R)
        if BOT in ctxset:
            return ProofTree(ctx, goal, Rule.BOT_L, (), BOT)
        if isinstance(goal, Token) and goal in ctxset:
            return ProofTree(ctx, goal, Rule.VAR, (), goal)
        return None

    def _expand(
        self, ctx: Tuple[Formula, ...], ctxset: FrozenSet[Formula], goal: Formula
    ) -> Outcome:
        invertible = self._invertible(ctx, ctxset, goal)
        if invertible is not None:
            return invertible
        return self._choose(ctx, ctxset, goal)

    # ------------------------------------------------------------------------+
    #                             Invertible rules                            |
    # ------------------------------------------------------------------------+

    def _single(
        self,
        ctx: Tuple[Formula, ...],
        goal: Formula,
        rule: Rule,
        premise_ctx: Tuple[Formula, ...],
        premise_goal: Formula,
        principal: Optional[Formula] = None,
    ) -> Outcome:
        sub, low = self.search(premise_ctx, premise_goal)
        if sub is None:
            return None, low
        return ProofTree(ctx, goal, rule, (sub,), principal), low

    def _invertible(
        self, ctx: Tuple[Formula, ...], ctxset: FrozenSet[Formula], goal: Formula
    ) -> Optional[Outcome]:
        for f in ctx:
            if isinstance(f, And):
                if f.lhs not in ctxset:
                    return self._single(ctx, goal, Rule.AND_L1, ctx + (f.lhs,), goal, f)
                if f.rhs not in ctxset:
                    return self._single(ctx, goal, Rule.AND_L2, ctx + (f.rhs,), goal, f)
            elif isinstance(f, Modal):
                if self.sys.is_eps(f.modality) and f.body not in ctxset:
                    return self._single(ctx, goal, Rule.EPS_L, ctx + (f.body,), goal, f)
            elif isinstance(f, Imp):
                if f.lhs in ctxset and f.rhs not in ctxset:
                    return self._modus_ponens(ctx, goal, f)

        if isinstance(goal, Imp):
            return self._single(ctx, goal, Rule.IMP_R, merge(ctx, (goal.lhs,)), goal.rhs)
        if isinstance(goal, And):
            left, low = self.search(ctx, goal.lhs)
            if left is None:
                return None, low
            right, low = self.search(ctx, goal.rhs)
            if right is None:
                return None, low
            return ProofTree(ctx, goal, Rule.AND_R, (left, right)), _NO_ANCESTOR

        for f in ctx:
            if isinstance(f, Or) and f.lhs not in ctxset and f.rhs not in ctxset:
                left, low = self.search(ctx + (f.lhs,), goal)
                if left is None:
                    return None, low
                right, low = self.search(ctx + (f.rhs,), goal)
                if right is None:
                    return None, low
                return ProofTree(ctx, goal, Rule.OR_L, (left, right), f), _NO_ANCESTOR
        return None

    def _modus_ponens(self, ctx: Tuple[Formula, ...], goal: Formula, f: Imp) -> Outcome:
        """ImpL whose argument is already in the context."""
        rest = tuple(g for g in ctx if g != f.lhs)
        arg = identity_proof(rest, f.lhs, self.sys)
        body, low = self.search(ctx + (f.rhs,), goal)
        if body is None:
            return None, low
        return ProofTree(ctx, goal, Rule.IMP_L, (arg, body), f), _NO_ANCESTOR

    # ------------------------------------------------------------------------+
    #                              Branching rules                            |
    # ------------------------------------------------------------------------+

    def _choose(
        self, ctx: Tuple[Formula, ...], ctxset: FrozenSet[Formula], goal: Formula
    ) -> Outcome:
        low = _NO_ANCESTOR
        candidates = sorted(
            (
                f
                for f in ctx
                if isinstance(f, Imp) and f.lhs not in ctxset and f.rhs not in ctxset
            ),
            key=lambda f: formula_size(f.lhs),
        )
        for f in candidates:
            assert isinstance(f, Imp)
            arg, arg_low = self.search(ctx, f.lhs)
            low = min(low, arg_low)
            if arg is None:
                continue
            body, body_low = self.search(ctx + (f.rhs,), goal)
            low = min(low, body_low)
            if body is not None:
                return ProofTree(ctx, goal, Rule.IMP_L, (arg, body), f), low

        if isinstance(goal, Or):
            for rule, part in ((Rule.OR_R1, goal.lhs), (Rule.OR_R2, goal.rhs)):
                proof, sub_low = self._single(ctx, goal, rule, ctx, part)
                low = min(low, sub_low)
                if proof is not None:
                    return proof, low

        if isinstance(goal, Modal):
            minus = context_minus(ctx, goal.modality, self.sys).formulas
            proof, sub_low = self._single(ctx, goal, Rule.MOD_R, minus, goal.body)
            low = min(low, sub_low)
            if proof is not None:
                return proof, low
        return None, low


def prove(
    ctx: Union[FlatContext, Sequence[Formula]],
    goal: Formula,
    sys: CompiledAxiomSystem,
    budget: Optional[float] = None,
    loop_check: Optional[bool] = None,
    cache_results: Optional[bool] = None,
) -> ProofResult:
    """Search for a proof of `ctx |- goal`.

    Args:
        ctx (FlatContext or sequence): Assumptions.
        goal (Formula): Formula to prove.
        sys (CompiledAxiomSystem): Unfolding axioms in force.
        budget (float): Node limit; `math.inf` for none. Defaults to `search.node_budget`.
        loop_check (bool): Prune subsumed branches. Defaults to `search.loop_check`.
        cache_results (bool): Reuse proved and failed subgoals. Defaults to `search.cache_results`.

    Returns:
        ProofResult: PROVED with a proof, NOT_PROVABLE after exhausting the search space,
            or BUDGET_EXCEEDED.

    """
    formulas = tuple(ctx.formulas if isinstance(ctx, FlatContext) else FlatContext(tuple(ctx)))
    search = _ProofSearch(
        sys,
        float(resolve_config_option("search.node_budget", budget)),
        bool(resolve_config_option("search.loop_check", loop_check)),
        bool(resolve_config_option("search.cache_results", cache_results)),
    )
    old_limit = _sys.getrecursionlimit()
    _sys.setrecursionlimit(max(old_limit, _RECURSION_LIMIT))
    try:
        proof, _ = search.search(formulas, goal)
    except _BudgetExhausted:
        logger.debug("search budget exhausted after %d nodes", search.stats.nodes_expanded)
        return ProofResult(Verdict.BUDGET_EXCEEDED, None, search.stats)
    except RecursionError:
        logger.warning("search recursion too deep at %d nodes", search.stats.nodes_expanded)
        return ProofResult(Verdict.BUDGET_EXCEEDED, None, search.stats)
    finally:
        _sys.setrecursionlimit(old_limit)

    logger.debug(
        "search finished: %d nodes, depth %d, %d prunes",
        search.stats.nodes_expanded,
        search.stats.max_depth,
        search.stats.subsumption_prunes,
    )
    if proof is None:
        return ProofResult(Verdict.NOT_PROVABLE, None, search.stats)
    return ProofResult(Verdict.PROVED, proof, search.stats)


def fold_modal_context(ctx: ModalContext, goal: Formula) -> Formula:
    """Fold hypotheses into implications and locks into modalities, rightmost first."""
    for entry in reversed(ctx.entries):
        if isinstance(entry, Hypothesis):
            goal = Imp(entry.formula, goal)
        else:
            goal = Modal(entry.modality, goal)
    return goal


def prove_modal(
    ctx: ModalContext,
    goal: Formula,
    sys: CompiledAxiomSystem,
    budget: Optional[float] = None,
) -> ProofResult:
    """Decide a Fitch-style sequent by proving its fold from no assumptions."""
    return prove((), fold_modal_context(ctx, goal), sys, budget)
