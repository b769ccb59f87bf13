"""Threshold trust formulas and the failure risk of k-of-n schemes."""

import re
from itertools import combinations
from typing import List, Sequence, Tuple

from trustlogic.logic.contexts import AgentUniverse
from trustlogic.logic.formulas import (
    BOT,
    TOP,
    Formula,
    Imp,
    Interact,
    Modal,
    conj,
    disj,
)
from trustlogic.trust.networks import ForwardingNetwork
from trustlogic.trust.orders import order_trust, order_validity

_THRESHOLD = re.compile(r"\s*(\d+)\s*of\s*(\d+)\s*\Z")


def k_of_n(k: int, formulas: Sequence[Formula]) -> Formula:
    """Disjunction over every k-subset of the conjunction of its members.

    `true` for k = 0 and `false` when k exceeds the number of formulas.
    """
    if k < 0:
        raise ValueError(f"Threshold must be non-negative, got {k}")
    if k == 0:
        return TOP
    if k > len(formulas):
        return BOT
    return disj(conj(group) for group in combinations(formulas, k))


def two_of_three(a: Formula, b: Formula, c: Formula) -> Formula:
    """(A & B) | (A & C) | (B & C)"""
    return k_of_n(2, [a, b, c])


def parse_threshold(text: str) -> Tuple[int, int]:
    """Read `<k>of<n>`."""
    match = _THRESHOLD.match(text)
    if match is None:
        raise ValueError(f"Threshold must look like 2of3, got {text!r}")
    k, n = int(match.group(1)), int(match.group(2))
    if not 1 <= k <= n:
        raise ValueError(f"Threshold needs 1 <= k <= n, got {k}of{n}")
    return k, n


def risk_aggregate(k: int, failure_probabilities: Sequence[float]) -> float:
    """Probability that a k-of-n scheme fails, sources failing independently.

    The scheme fails when more than n - k sources fail.

    Args:
        k (int): Sources needed.
        failure_probabilities (sequence): Per-source failure probability, one per source.

    Returns:
        float: Failure probability.

    Raises:
        ValueError: A probability lies outside [0, 1] or k is not in 1..n.

    """
    n = len(failure_probabilities)
    if not 1 <= k <= n:
        raise ValueError(f"Threshold needs 1 <= k <= n, got {k}of{n}")
    for p in failure_probabilities:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"Failure probability out of range: {p}")
    # failures[i]: probability that exactly i of the sources seen so far failed
    failures: List[float] = [1.0]
    for p in failure_probabilities:
        step = [0.0] * (len(failures) + 1)
        for i, q in enumerate(failures):
            step[i] += q * (1.0 - p)
            step[i + 1] += q * p
        failures = step
    return sum(failures[n - k + 1 :])


def threshold_lemma(
    k: int,
    truster: str,
    trustee: str,
    authorities: Sequence[str],
    predicate: str,
    universe: AgentUniverse,
    network: ForwardingNetwork,
) -> Formula:
    """k-of-n trusted authorities and k-of-n authorities vouching give order-0 trust.

    k_of_n(T1(a, i)) & k_of_n([I a <- i] V0(i, b)) -> T0(a, b), over the authorities i.
    """
    trusted = [order_trust(1, truster, i, predicate, universe, network) for i in authorities]
    vouching = [
        Modal(Interact(truster, i), order_validity(0, i, trustee, predicate, universe, network))
        for i in authorities
    ]
    goal = order_trust(0, truster, trustee, predicate, universe, network)
    return Imp(conj([k_of_n(k, trusted), k_of_n(k, vouching)]), goal)
