"""Deriving shared trust across a forwarding network, and re-proving derivations."""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from trustlogic._options import resolve_config_option
from trustlogic.engine.axioms import CompiledAxiomSystem
from trustlogic.engine.proofs import ProofResult, Verdict, merge
from trustlogic.engine.prover import prove
from trustlogic.logic.contexts import AgentUniverse
from trustlogic.logic.formulas import Formula
from trustlogic.trust.networks import ForwardingNetwork, TrustEdge, reachable_through
from trustlogic.trust.orders import edge_formula, shared_assumptions

logger = logging.getLogger(__name__)

SAME_ORDER = "same-order"
HIGHER_FIRST = "higher-first"
HIGHER_SECOND = "higher-second"


@dataclass(frozen=True)
class Derivation:
    """`edge` obtained from `first = (a, b)` and `second = (b, c)` by `rule`."""

    edge: TrustEdge
    rule: str
    first: TrustEdge
    second: TrustEdge

    @property
    def via(self) -> str:
        return self.first.trustee

    def render(self) -> str:
        return (
            f"derived {self.edge.render()} by {self.rule} "
            f"from ({self.first.render()}) and ({self.second.render()})"
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "edge": self.edge.render(),
            "rule": self.rule,
            "premises": [self.first.render(), self.second.render()],
        }


@dataclass
class Saturation:
    """Asserted edges, everything derivable from them, and how each was first derived."""

    asserted: Tuple[TrustEdge, ...]
    derivations: Dict[TrustEdge, Derivation] = field(default_factory=dict)

    @property
    def edges(self) -> List[TrustEdge]:
        return sorted(set(self.asserted) | set(self.derivations), key=TrustEdge.sort_key)

    def derived(self) -> List[TrustEdge]:
        return sorted(self.derivations, key=TrustEdge.sort_key)

    def holds(self, edge: TrustEdge) -> bool:
        return edge in self.derivations or edge in self.asserted


def _compose(
    first: TrustEdge, second: TrustEdge, literal_second_rule: bool
) -> Optional[Tuple[str, TrustEdge]]:
    m, n = first.order, second.order
    if m == n:
        rule, order = SAME_ORDER, m
    elif m == n + 1:
        rule, order = HIGHER_FIRST, n
    elif literal_second_rule and n == m + 1:
        rule, order = HIGHER_SECOND, m
    else:
        return None
    return rule, TrustEdge(order, first.truster, second.trustee, first.predicate)


def saturate_trust(
    asserted: Iterable[TrustEdge],
    network: ForwardingNetwork,
    literal_second_rule: Optional[bool] = None,
) -> Saturation:
    """Least fixpoint of trust composition over the network.

    With `b` strictly between `a` and `c` on a network path:
    `(n, a, b)` and `(n, b, c)` give `(n, a, c)`;
    `(n+1, a, b)` and `(n, b, c)` give `(n, a, c)`.
    `literal_second_rule` (default `trust.literal_second_rule`) also admits
    `(n, a, b)` and `(n+1, b, c)`.

    Returns:
        Saturation: Asserted edges with the first derivation of every new edge.

    """
    literal = bool(resolve_config_option("trust.literal_second_rule", literal_second_rule))
    asserted = tuple(dict.fromkeys(asserted))
    result = Saturation(asserted)
    known = set(asserted)
    frontier = True
    rounds = 0
    while frontier:
        frontier = False
        rounds += 1
        edges = sorted(known, key=TrustEdge.sort_key)
        by_truster: Dict[Tuple[str, str], List[TrustEdge]] = {}
        for e in edges:
            by_truster.setdefault((e.predicate, e.truster), []).append(e)
        for first in edges:
            for second in by_truster.get((first.predicate, first.trustee), ()):
                if not reachable_through(network, first.truster, first.trustee, second.trustee):
                    continue
                composed = _compose(first, second, literal)
                if composed is None:
                    continue
                rule, edge = composed
                if edge in known:
                    continue
                known.add(edge)
                result.derivations[edge] = Derivation(edge, rule, first, second)
                frontier = True
    logger.debug(
        "saturation: %d asserted, %d derived in %d rounds",
        len(asserted),
        len(result.derivations),
        rounds,
    )
    return result


@dataclass
class ProofObligation:
    """The trust formula of a derived edge, to be proved from its premises' shared assumptions."""

    derivation: Derivation
    assumptions: Tuple[Formula, ...]
    goal: Formula
    result: ProofResult

    @property
    def verdict(self) -> Verdict:
        return self.result.verdict


def verify_derivation(
    derivation: Derivation,
    network: ForwardingNetwork,
    universe: AgentUniverse,
    sys: CompiledAxiomSystem,
    budget: Optional[float] = None,
    forward_index: Optional[str] = None,
) -> ProofObligation:
    """Prove the derived trust formula with the sequent prover.

    Args:
        derivation (Derivation): Step to check.
        network (ForwardingNetwork): Network the trust is shared over.
        universe (AgentUniverse): Agents ranged over by the order-n formulas.
        sys (CompiledAxiomSystem): Axioms in force.
        budget (float): Search node budget. Defaults to `search.node_budget`.
        forward_index (str): Forwarded copies assumed. Defaults to `trust.forward_index`.

    Returns:
        ProofObligation: Assumptions, goal and the prover's answer.

    """
    assumptions = merge(
        shared_assumptions(derivation.first, network, universe, forward_index),
        shared_assumptions(derivation.second, network, universe, forward_index),
    )
    goal = edge_formula(derivation.edge, universe, network)
    result = prove(assumptions, goal, sys, budget)
    logger.debug(
        "verified %s: %s after %d nodes",
        derivation.edge.render(),
        result.verdict.value,
        result.stats.nodes_expanded,
    )
    return ProofObligation(derivation, assumptions, goal, result)
