"""Axiom systems, proof search, proof terms and Kripke models."""

from trustlogic.engine.axioms import (
    AxiomError,
    CompiledAxiomSystem,
    UnfoldingAxiom,
    check_decomposable,
    compile_system,
    parse_axiom,
    standard_axioms,
    standard_system,
    unfolds,
)
from trustlogic.engine.kripke import (
    Countermodel,
    KripkeFrame,
    conforms,
    counterexample_search,
    frame_validates,
    lemma_counter_frame,
    random_frame,
    satisfies,
)
from trustlogic.engine.normalize import SubstitutionError, normalize
from trustlogic.engine.proofs import (
    ProofResult,
    ProofTree,
    Rule,
    Verdict,
    check_proof,
    used_assumptions,
)
from trustlogic.engine.prover import prove, prove_modal
from trustlogic.engine.terms import Term, parse_term, render_term
from trustlogic.engine.typecheck import TypingError, extract_term, typecheck
