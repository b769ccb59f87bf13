# -*- coding: utf-8 -*-
"""
trustlogic
==========

Decidable intuitionistic multimodal logic of belief, interaction and trust,
with a sequent prover, proof terms, Kripke countermodels and trust networks.

"""

from pathlib import Path as _Path

__version__ = "0.1.0"

_MODULE_PATH: _Path = _Path(__file__).parent.absolute()


from trustlogic._options import LogicOptions, options
from trustlogic.engine import (
    check_proof,
    counterexample_search,
    extract_term,
    normalize,
    prove,
    prove_modal,
    standard_system,
    typecheck,
)
from trustlogic.logic import (
    AgentUniverse,
    FlatContext,
    ModalContext,
    ParseError,
    parse_formula,
    render_formula,
)
from trustlogic.trust import (
    ForwardingNetwork,
    TrustEdge,
    close_forwarding,
    order_trust,
    risk_aggregate,
    saturate_trust,
)
