"""Agents, modalities, formulas, contexts and their text syntax."""

from trustlogic.logic.contexts import (
    AgentUniverse,
    FlatContext,
    Hypothesis,
    ModalContext,
    ModalLock,
    Sequent,
    UnknownAgentError,
)
from trustlogic.logic.formulas import (
    BOT,
    BOX,
    TOP,
    And,
    Belief,
    Bot,
    Box,
    Formula,
    Imp,
    Interact,
    Modal,
    Modality,
    Named,
    Or,
    Token,
    Top,
    Wish,
    cautious_trust,
    conj,
    disj,
    interact_chain,
    negate,
    prefix,
    render_formula,
    render_modality,
    simplify,
    validity,
)
from trustlogic.logic.syntax import ParseError, parse_formula, parse_modality
