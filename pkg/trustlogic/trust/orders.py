"""Forwarding modalities and order-n validity and trust formulas."""

from functools import lru_cache
from typing import Iterable, List, Optional, Tuple

from trustlogic._options import resolve_config_option
from trustlogic.logic.contexts import AgentUniverse
from trustlogic.logic.formulas import (
    TOP,
    Belief,
    Formula,
    Imp,
    Modal,
    Token,
    Top,
    conj,
    interact_chain,
    simplify as simplify_formula,
)
from trustlogic.trust.networks import ForwardingNetwork, TrustEdge, reachable_through

FORWARD_INDICES = ("trustee", "truster", "both")


def predicate_token(predicate: str, agent: str) -> Token:
    """The claim `P(a)` as a token."""
    return Token(f"{predicate}({agent})")


def j_expand(network: ForwardingNetwork, a: str, b: str, body: Formula) -> Formula:
    """Conjunction of `body` forwarded from `b` to `a` along every network path.

    `true` when `a == b` or when no path exists.
    """
    if a == b:
        return TOP
    return conj(interact_chain(path, body) for path in network.paths_between(a, b))


def j_validity(network: ForwardingNetwork, a: str, b: str, body: Formula) -> Formula:
    """Validity of all forwardings from `b` to `a`: J(body) -> body."""
    return Imp(j_expand(network, a, b, body), body)


def _dedupe(formulas: Iterable[Formula]) -> Tuple[Formula, ...]:
    return tuple(f for f in dict.fromkeys(formulas) if not isinstance(f, Top))


@lru_cache(maxsize=256)
def _c_set(
    n: int,
    a: str,
    predicate: str,
    universe: AgentUniverse,
    network: ForwardingNetwork,
    simplify: bool,
) -> Tuple[Formula, ...]:
    if n == 0:
        return (predicate_token(predicate, a),)
    found: List[Formula] = []
    for b in universe:
        for f in _c_set(n - 1, b, predicate, universe, network, simplify):
            found.append(j_validity(network, a, b, f))
            found.append(j_expand(network, a, b, f))
    if simplify:
        return _dedupe(simplify_formula(f) for f in found)
    return tuple(found)


def c_set(
    n: int,
    a: str,
    predicate: str,
    universe: AgentUniverse,
    network: ForwardingNetwork,
    simplify: Optional[bool] = None,
) -> Tuple[Formula, ...]:
    """Higher-order statements about `a`: `P(a)` at order 0, then validity and forwarding.

    Args:
        n (int): Order.
        a (str): Agent the statements are about.
        predicate (str): Token family name.
        universe (AgentUniverse): Agents ranged over.
        network (ForwardingNetwork): Paths defining the forwarding modalities.
        simplify (bool): Drop `true` clutter and duplicates. Defaults to `trust.simplify`.
            Without it the result has exactly (2|A|)^n entries.

    Returns:
        tuple: Formulas in generation order.

    """
    if n < 0:
        raise ValueError(f"Order must be a natural number, got {n}")
    universe.check(a)
    simplify = bool(resolve_config_option("trust.simplify", simplify))
    return _c_set(n, a, predicate, universe, network, simplify)


def order_validity(
    n: int,
    a: str,
    b: str,
    predicate: str,
    universe: AgentUniverse,
    network: ForwardingNetwork,
    simplify: Optional[bool] = None,
) -> Formula:
    """n-th order validity of `a` in `b`: validity of forwarding for every order-n statement about `b`."""
    simplify = bool(resolve_config_option("trust.simplify", simplify))
    parts = [j_validity(network, a, b, f) for f in c_set(n, b, predicate, universe, network, simplify)]
    if simplify:
        return conj(_dedupe(simplify_formula(f) for f in parts))
    return conj(parts)


def order_trust(
    n: int,
    a: str,
    b: str,
    predicate: str,
    universe: AgentUniverse,
    network: ForwardingNetwork,
    simplify: Optional[bool] = None,
) -> Formula:
    """n-th order trust: `a` believes the n-th order validity of `b`."""
    return Modal(Belief(a), order_validity(n, a, b, predicate, universe, network, simplify))


def edge_formula(
    edge: TrustEdge,
    universe: AgentUniverse,
    network: ForwardingNetwork,
    simplify: Optional[bool] = None,
) -> Formula:
    return order_trust(
        edge.order, edge.truster, edge.trustee, edge.predicate, universe, network, simplify
    )


def shared_assumptions(
    edge: TrustEdge,
    network: ForwardingNetwork,
    universe: AgentUniverse,
    forward_index: Optional[str] = None,
    simplify: Optional[bool] = None,
) -> Tuple[Formula, ...]:
    """What holds when `edge` is shared over the network.

    The trust itself, plus for every `c` reaching the truster and trustee in line the
    order-n validity forwarded to `c`: from the trustee (`'trustee'`), from the truster
    (`'truster'`) or both. Defaults to `trust.forward_index`.

    Raises:
        ValueError: Unknown forward index.

    """
    forward_index = str(resolve_config_option("trust.forward_index", forward_index))
    if forward_index not in FORWARD_INDICES:
        raise ValueError(
            f"Unknown forward index {forward_index!r}: use one of {', '.join(FORWARD_INDICES)}"
        )
    a, b = edge.truster, edge.trustee
    validity_ab = order_validity(edge.order, a, b, edge.predicate, universe, network, simplify)
    found: List[Formula] = [edge_formula(edge, universe, network, simplify)]
    for c in universe:
        if not reachable_through(network, c, a, b):
            continue
        if forward_index in ("trustee", "both"):
            found.append(j_expand(network, c, b, validity_ab))
        if forward_index in ("truster", "both"):
            found.append(j_expand(network, c, a, validity_ab))
    return _dedupe(found)
