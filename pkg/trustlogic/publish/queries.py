"""Query dispatch: prove, term, countermodel, trust-derive, trust-verify and risk."""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from trustlogic import _MODULE_PATH
from trustlogic.engine.kripke import Countermodel, conforms, counterexample_search, refuting_worlds
from trustlogic.engine.normalize import normalize
from trustlogic.engine.proofs import (
    ProofTree,
    SearchStats,
    Verdict,
    check_proof,
    used_assumptions,
)
from trustlogic.engine.prover import prove
from trustlogic.engine.terms import Term
from trustlogic.engine.typecheck import extract_term, proof_context, typecheck
from trustlogic.logic.formulas import Formula, render_formula
from trustlogic.publish.workspace import Expectation, Workspace, load_workspace
from trustlogic.trust.networks import TrustEdge
from trustlogic.trust.saturation import (
    Derivation,
    ProofObligation,
    Saturation,
    saturate_trust,
    verify_derivation,
)
from trustlogic.trust.threshold import risk_aggregate

logger = logging.getLogger(__name__)

PROVE = "prove"
TERM = "term"
COUNTERMODEL = "countermodel"
TRUST_DERIVE = "trust-derive"
TRUST_VERIFY = "trust-verify"
RISK = "risk"
QUERY_KINDS = (PROVE, TERM, COUNTERMODEL, TRUST_DERIVE, TRUST_VERIFY, RISK)

RISK_TOLERANCE = 1e-12


class QueryError(ValueError):
    """Query does not fit the workspace it runs against."""


@dataclass(frozen=True)
class Query:
    """One question put to a workspace.

    Attributes:
        kind (str): One of `QUERY_KINDS`.
        formula (Formula): Goal of prove, term and countermodel queries.
        using (tuple): Assumption names to prove from; None for all.
        edge (TrustEdge): Edge of a trust-verify query, or of a trust-derive membership check.
        threshold (tuple): (k, n) of a risk query.
        probabilities (tuple): Per-source failure probabilities of a risk query.
        budget (float): Search node budget; None for `search.node_budget`.
        worlds (int): Countermodel size bound; None for `models.max_worlds`.
        verify (bool): Re-prove every derivation of a trust-derive query.

    """

    kind: str
    formula: Optional[Formula] = None
    using: Optional[Tuple[str, ...]] = None
    edge: Optional[TrustEdge] = None
    threshold: Optional[Tuple[int, int]] = None
    probabilities: Tuple[float, ...] = ()
    budget: Optional[float] = None
    worlds: Optional[int] = None
    verify: bool = False

    def __post_init__(self) -> None:
        if self.kind not in QUERY_KINDS:
            raise QueryError(f"Unknown query kind {self.kind!r}")

    def render(self) -> str:
        if self.kind in (PROVE, TERM, COUNTERMODEL):
            assert self.formula is not None
            using = f" using {','.join(self.using)}" if self.using is not None else ""
            return f"{self.kind}{using} : {render_formula(self.formula)}"
        if self.kind == RISK:
            assert self.threshold is not None
            k, n = self.threshold
            return f"risk {k}of{n} " + " ".join(str(p) for p in self.probabilities)
        if self.edge is not None:
            return f"{self.kind} {self.edge.render()}"
        return self.kind


@dataclass
class QueryReport:
    """Answer to a query, with whatever evidence its kind produces."""

    query: Query
    verdict: Verdict
    proof: Optional[ProofTree] = None
    proof_checked: Optional[bool] = None
    used: List[str] = field(default_factory=list)
    term: Optional[Term] = None
    normal_form: Optional[Term] = None
    normal_steps: Optional[int] = None
    hypotheses: Dict[str, str] = field(default_factory=dict)
    countermodel: Optional[Countermodel] = None
    derivations: List[Derivation] = field(default_factory=list)
    obligations: List[ProofObligation] = field(default_factory=list)
    value: Optional[float] = None
    stats: SearchStats = field(default_factory=SearchStats)
    message: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "query": self.query.render(),
            "kind": self.query.kind,
            "verdict": self.verdict.value,
            "proof": self.proof.to_dict() if self.proof is not None else None,
            "proof_checked": self.proof_checked,
            "used_assumptions": list(self.used),
            "term": self.term.render() if self.term is not None else None,
            "normal_form": self.normal_form.render() if self.normal_form is not None else None,
            "normal_steps": self.normal_steps,
            "hypotheses": dict(self.hypotheses),
            "countermodel": self.countermodel.to_dict() if self.countermodel else None,
            "derivations": [d.to_dict() for d in self.derivations],
            "obligations": [
                {"edge": o.derivation.edge.render(), "verdict": o.verdict.value}
                for o in self.obligations
            ],
            "value": self.value,
            "stats": self.stats.to_dict(),
            "message": self.message,
        }


def _goal(q: Query) -> Formula:
    if q.formula is None:
        raise QueryError(f"{q.kind} query needs a formula")
    return q.formula


def _attach_proof(ws: Workspace, report: QueryReport, proof: ProofTree) -> None:
    report.proof_checked = check_proof(proof, ws.system)
    report.used = ws.names_of(used_assumptions(proof, ws.system))


def _prove(ws: Workspace, q: Query) -> QueryReport:
    ctx = ws.context(q.using)
    result = prove(ctx, _goal(q), ws.system, q.budget)
    report = QueryReport(q, result.verdict, result.proof, stats=result.stats)
    if result.proof is not None:
        _attach_proof(ws, report, result.proof)
    elif result.verdict is Verdict.NOT_PROVABLE:
        report.countermodel = counterexample_search((ctx.formulas, _goal(q)), ws.system, q.worlds)
        if report.countermodel is None:
            report.message = "no countermodel within bounds"
    else:
        report.message = "search budget exhausted"
    return report


def _term(ws: Workspace, q: Query) -> QueryReport:
    report = _prove(ws, q)
    if report.proof is None:
        return report
    ctx = proof_context(report.proof)
    term = extract_term(report.proof, ws.system)
    typecheck(ctx, term, ws.system)
    normal = normalize(term, ws.system)
    if typecheck(ctx, normal.term, ws.system) != report.proof.goal:
        report.message = "normal form lost its type"
    report.term = term
    report.normal_form = normal.term
    report.normal_steps = normal.steps
    by_formula: Dict[Formula, str] = {}
    for name, f in ws.assumptions.items():
        by_formula.setdefault(f, name)
    report.hypotheses = {
        h.name: by_formula.get(h.formula, render_formula(h.formula)) for h in ctx.hypotheses()
    }
    if not normal.complete:
        report.message = f"normalization stopped after {normal.steps} steps"
    return report


def _countermodel(ws: Workspace, q: Query) -> QueryReport:
    ctx = ws.context(q.using)
    result = prove(ctx, _goal(q), ws.system, q.budget)
    if result.proof is not None:
        report = QueryReport(q, Verdict.PROVED, result.proof, stats=result.stats)
        _attach_proof(ws, report, result.proof)
        return report
    found = counterexample_search((ctx.formulas, _goal(q)), ws.system, q.worlds)
    if found is not None:
        if not conforms(found.frame, ws.system):
            raise QueryError("countermodel does not conform to the axiom system")
        if not refuting_worlds(found.frame, (ctx.formulas, _goal(q))):
            raise QueryError("countermodel does not refute the sequent")
        return QueryReport(q, Verdict.REFUTED, countermodel=found, stats=result.stats)
    return QueryReport(
        q, Verdict.UNDETERMINED, stats=result.stats, message="undetermined within bounds"
    )


def saturation_of(ws: Workspace) -> Saturation:
    if ws.trust_spec is None or ws.network is None:
        raise QueryError(f"{ws.source} declares no trust graph")
    return saturate_trust(ws.trust_spec.asserted, ws.network)


def _trust_derive(ws: Workspace, q: Query) -> QueryReport:
    saturation = saturation_of(ws)
    if q.edge is not None:
        verdict = Verdict.DERIVED if saturation.holds(q.edge) else Verdict.NOT_PROVABLE
        derivation = saturation.derivations.get(q.edge)
        return QueryReport(q, verdict, derivations=[derivation] if derivation else [])
    derivations = [saturation.derivations[e] for e in saturation.derived()]
    report = QueryReport(q, Verdict.DERIVED, derivations=derivations)
    if q.verify:
        assert ws.network is not None
        report.obligations = [
            verify_derivation(d, ws.network, ws.universe, ws.system, q.budget) for d in derivations
        ]
    return report


def _trust_verify(ws: Workspace, q: Query) -> QueryReport:
    if q.edge is None:
        raise QueryError("trust-verify needs an edge")
    saturation = saturation_of(ws)
    derivation = saturation.derivations.get(q.edge)
    if derivation is None:
        message = "asserted, nothing to verify" if q.edge in saturation.asserted else "not derived"
        return QueryReport(q, Verdict.NOT_PROVABLE, message=message)
    assert ws.network is not None
    obligation = verify_derivation(derivation, ws.network, ws.universe, ws.system, q.budget)
    report = QueryReport(
        q,
        obligation.verdict,
        obligation.result.proof,
        derivations=[derivation],
        obligations=[obligation],
        stats=obligation.result.stats,
    )
    if obligation.result.proof is not None:
        report.proof_checked = check_proof(obligation.result.proof, ws.system)
    return report


def _risk(ws: Optional[Workspace], q: Query) -> QueryReport:
    if q.threshold is None:
        raise QueryError("risk query needs a threshold")
    k, n = q.threshold
    if len(q.probabilities) != n:
        raise QueryError(f"{k}of{n} needs {n} probabilities, got {len(q.probabilities)}")
    value = risk_aggregate(k, q.probabilities)
    return QueryReport(q, Verdict.DERIVED, value=value)


_DISPATCH: Dict[str, Callable[[Workspace, Query], QueryReport]] = {
    PROVE: _prove,
    TERM: _term,
    COUNTERMODEL: _countermodel,
    TRUST_DERIVE: _trust_derive,
    TRUST_VERIFY: _trust_verify,
}


def run_query(ws: Optional[Workspace], q: Query) -> QueryReport:
    """Answer `q` against `ws`; risk queries need no workspace.

    Raises:
        QueryError: The query lacks what its kind needs, or the workspace has no trust graph.
        KeyError: `q.using` names an unknown assumption.

    """
    if q.kind == RISK:
        report = _risk(ws, q)
    elif ws is None:
        raise QueryError(f"{q.kind} query needs a workspace")
    else:
        report = _DISPATCH[q.kind](ws, q)
    logger.debug("%s -> %s", q.render(), report.verdict.value)
    return report


# ---------------------------------------------------------------------------+
#                                Expectations                                |
# ---------------------------------------------------------------------------+


@dataclass
class ExpectationResult:
    expectation: Expectation
    report: QueryReport
    passed: bool

    def render(self) -> str:
        status = "ok" if self.passed else "FAILED"
        return f"line {self.expectation.line}: {status}: {self.expectation.text}"


def expectation_query(e: Expectation, budget: Optional[float] = None) -> Query:
    if e.kind in (PROVE, TERM, COUNTERMODEL):
        return Query(e.kind, e.formula, e.using, budget=budget)
    if e.kind in ("derived", "not-derived"):
        return Query(TRUST_DERIVE, edge=e.edge)
    if e.kind == "verify":
        return Query(TRUST_VERIFY, edge=e.edge, budget=budget)
    return Query(RISK, threshold=e.threshold, probabilities=e.probabilities)


def _passed(e: Expectation, report: QueryReport) -> bool:
    if e.kind == "derived":
        return report.verdict is Verdict.DERIVED
    if e.kind == "not-derived":
        return report.verdict is not Verdict.DERIVED
    if e.kind == RISK:
        assert report.value is not None and e.value is not None
        return math.isclose(report.value, e.value, rel_tol=0.0, abs_tol=RISK_TOLERANCE)
    return report.verdict is e.verdict


def run_expectations(ws: Workspace, budget: Optional[float] = None) -> List[ExpectationResult]:
    """Run every golden expectation of the workspace, in file order."""
    results = []
    for e in ws.expectations:
        report = run_query(ws, expectation_query(e, budget))
        results.append(ExpectationResult(e, report, _passed(e, report)))
    return results


@dataclass
class CorpusResult:
    path: str
    results: List[ExpectationResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def corpus_paths() -> List[Path]:
    """The workspace files shipped with the package."""
    return sorted((_MODULE_PATH / "resources/corpus").glob("*.tl"))


def run_corpus(
    paths: Optional[Sequence[Union[str, Path]]] = None, budget: Optional[float] = None
) -> List[CorpusResult]:
    """Load each workspace and check its expectations; defaults to the shipped corpus."""
    found = []
    for path in paths if paths is not None else corpus_paths():
        logger.info("corpus file %s", path)
        ws = load_workspace(path)
        results = run_expectations(ws, budget)
        found.append(CorpusResult(str(path), results))
        logger.info(
            "corpus file %s: %d/%d expectations met",
            path,
            sum(r.passed for r in results),
            len(results),
        )
    return found
