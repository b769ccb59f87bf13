"""Forwarding networks, order-n trust, trust saturation and threshold trust."""

from trustlogic.trust.networks import (
    ForwardingNetwork,
    NetworkError,
    TrustEdge,
    TrustGraphSpec,
    acyclic_paths_network,
    close_forwarding,
    reachable_through,
    shortest_paths_network,
)
from trustlogic.trust.orders import (
    c_set,
    j_expand,
    order_trust,
    order_validity,
    predicate_token,
    shared_assumptions,
)
from trustlogic.trust.saturation import (
    Derivation,
    ProofObligation,
    Saturation,
    saturate_trust,
    verify_derivation,
)
from trustlogic.trust.threshold import k_of_n, risk_aggregate, two_of_three
