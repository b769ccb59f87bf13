import pytest

import trustlogic.publish.queries as qu
from trustlogic.engine.kripke import Countermodel, KripkeFrame
from trustlogic.engine.proofs import Verdict
from trustlogic.logic.syntax import parse_formula
from trustlogic.publish.workspace import parse_spec
from trustlogic.trust.networks import TrustEdge

fitch_text = """\
agent a b
assume h : [B a]([I a <- b]t -> t)
assume g : [I a <- b]r
"""

dedicated_text = """\
agent a CA b
edge CA -> a
edge b -> CA
trust 1 a CA P
trust 0 CA b P
"""

report_keys = {
    "query",
    "kind",
    "verdict",
    "proof",
    "proof_checked",
    "used_assumptions",
    "term",
    "normal_form",
    "normal_steps",
    "hypotheses",
    "countermodel",
    "derivations",
    "obligations",
    "value",
    "stats",
    "message",
}


@pytest.fixture
def fitch():
    return parse_spec(fitch_text)


@pytest.fixture
def dedicated():
    return parse_spec(dedicated_text)


def formula_query(ws, kind, text, using=None, **kwargs):
    return qu.Query(kind, parse_formula(text, ws.universe), using, **kwargs)


def test_prove_reports_used_assumptions(fitch):
    report = qu.run_query(fitch, formula_query(fitch, qu.PROVE, "[I a <- b]t -> [B a]t"))
    assert report.verdict is Verdict.PROVED
    assert report.proof_checked
    assert report.used == ["h"]
    assert set(report.to_dict()) == report_keys


def test_prove_from_selected_assumptions(fitch):
    query = formula_query(fitch, qu.PROVE, "[I a <- b]t -> [B a]t", ("g",))
    report = qu.run_query(fitch, query)
    assert report.verdict is Verdict.NOT_PROVABLE
    assert report.countermodel is not None
    assert query.render().startswith("prove using g : ")


def test_prove_budget(fitch):
    query = formula_query(fitch, qu.PROVE, "[I a <- b]t -> [B a]t", budget=1)
    report = qu.run_query(fitch, query)
    assert report.verdict is Verdict.BUDGET_EXCEEDED
    assert report.message == "search budget exhausted"


def test_unknown_assumption(fitch):
    with pytest.raises(KeyError):
        qu.run_query(fitch, formula_query(fitch, qu.PROVE, "t", ("nope",)))


def test_term(fitch):
    report = qu.run_query(fitch, formula_query(fitch, qu.TERM, "[I a <- b]t -> [B a]t", ("h",)))
    assert report.verdict is Verdict.PROVED
    assert report.term is not None
    assert report.normal_form is not None
    assert report.normal_steps >= 0
    assert report.hypotheses == {"h0": "h"}
    assert report.message == ""


@pytest.mark.parametrize(
    "text,verdict",
    [
        ("[B a]t -> t", Verdict.REFUTED),
        ("t -> [B a]t", Verdict.REFUTED),
        ("t -> [I a <- b]t -> t", Verdict.PROVED),
    ],
)
def test_countermodel(text, verdict):
    ws = parse_spec("agent a b\n")
    report = qu.run_query(ws, formula_query(ws, qu.COUNTERMODEL, text))
    assert report.verdict is verdict
    assert (report.countermodel is not None) == (verdict is Verdict.REFUTED)


def test_countermodel_proved_carries_blame(fitch):
    query = formula_query(fitch, qu.COUNTERMODEL, "[I a <- b]t -> [B a]t")
    report = qu.run_query(fitch, query)
    proved = qu.run_query(fitch, formula_query(fitch, qu.PROVE, "[I a <- b]t -> [B a]t"))
    assert report.verdict is Verdict.PROVED
    assert report.proof_checked
    assert report.used == proved.used == ["h"]
    assert report.countermodel is None


def test_countermodel_using_narrows_context():
    ws = parse_spec(
        "agent a b c d\n"
        "assume g1 : [I b <- a]t -> [I c <- b]t\n"
        "assume g2 : [I c <- b]t -> [I d <- c]t\n"
    )
    text = "[I b <- a]t -> [I d <- c]t"
    assert qu.run_query(ws, formula_query(ws, qu.COUNTERMODEL, text)).verdict is Verdict.PROVED
    report = qu.run_query(ws, formula_query(ws, qu.COUNTERMODEL, text, ("g1",)))
    assert report.verdict is Verdict.REFUTED
    assert report.countermodel is not None


def test_countermodel_must_refute(monkeypatch):
    ws = parse_spec("agent a b\n")
    satisfied = KripkeFrame((0,), frozenset({(0, 0)}), {"t": frozenset({0})})
    monkeypatch.setattr(qu, "counterexample_search", lambda *args: Countermodel(satisfied, 0))
    with pytest.raises(qu.QueryError, match="does not refute"):
        qu.run_query(ws, formula_query(ws, qu.COUNTERMODEL, "t"))


def test_countermodel_undetermined():
    ws = parse_spec("agent a b\n")
    report = qu.run_query(ws, formula_query(ws, qu.COUNTERMODEL, "t -> [B a]t", worlds=1))
    assert report.verdict is Verdict.UNDETERMINED
    assert report.message == "undetermined within bounds"


def test_trust_derive(dedicated):
    report = qu.run_query(dedicated, qu.Query(qu.TRUST_DERIVE))
    assert report.verdict is Verdict.DERIVED
    assert [d.edge for d in report.derivations] == [TrustEdge(0, "a", "b")]
    assert report.obligations == []


def test_trust_derive_verify(dedicated):
    report = qu.run_query(dedicated, qu.Query(qu.TRUST_DERIVE, verify=True))
    assert [o.verdict for o in report.obligations] == [Verdict.PROVED]
    assert report.to_dict()["obligations"] == [{"edge": "0 a b P", "verdict": "proved"}]


@pytest.mark.parametrize(
    "edge,verdict",
    [
        (TrustEdge(0, "a", "b"), Verdict.DERIVED),
        (TrustEdge(1, "a", "CA"), Verdict.DERIVED),
        (TrustEdge(1, "a", "b"), Verdict.NOT_PROVABLE),
    ],
)
def test_trust_derive_membership(dedicated, edge, verdict):
    assert qu.run_query(dedicated, qu.Query(qu.TRUST_DERIVE, edge=edge)).verdict is verdict


def test_trust_verify(dedicated):
    report = qu.run_query(dedicated, qu.Query(qu.TRUST_VERIFY, edge=TrustEdge(0, "a", "b")))
    assert report.verdict is Verdict.PROVED
    assert report.proof_checked


@pytest.mark.parametrize(
    "edge,message",
    [
        (TrustEdge(1, "a", "CA"), "asserted, nothing to verify"),
        (TrustEdge(0, "b", "a"), "not derived"),
    ],
)
def test_trust_verify_without_derivation(dedicated, edge, message):
    report = qu.run_query(dedicated, qu.Query(qu.TRUST_VERIFY, edge=edge))
    assert report.verdict is Verdict.NOT_PROVABLE
    assert report.message == message


def test_trust_query_needs_graph(fitch):
    with pytest.raises(qu.QueryError, match="declares no trust graph"):
        qu.run_query(fitch, qu.Query(qu.TRUST_DERIVE))


def test_risk_needs_no_workspace():
    query = qu.Query(qu.RISK, threshold=(2, 3), probabilities=(0.05, 0.05, 0.05))
    report = qu.run_query(None, query)
    assert report.verdict is Verdict.DERIVED
    assert report.value == pytest.approx(0.00725, abs=qu.RISK_TOLERANCE)
    assert query.render() == "risk 2of3 0.05 0.05 0.05"


@pytest.mark.parametrize(
    "query",
    [
        qu.Query(qu.RISK, threshold=(2, 3), probabilities=(0.1,)),
        qu.Query(qu.RISK),
        qu.Query(qu.PROVE),
    ],
)
def test_bad_queries(query):
    with pytest.raises(qu.QueryError):
        qu.run_query(None, query)


def test_unknown_kind():
    with pytest.raises(qu.QueryError):
        qu.Query("guess")


def test_run_expectations():
    ws = parse_spec(
        dedicated_text
        + "expect derived 0 a b P\n"
        + "expect derived 1 a b P\n"
        + "expect risk 1of1 0.3 : 0.3\n"
    )
    results = qu.run_expectations(ws)
    assert [r.passed for r in results] == [True, False, True]
    assert results[1].render() == "line 7: FAILED: expect derived 1 a b P"


def test_shipped_corpus_passes():
    paths = qu.corpus_paths()
    assert len(paths) >= 10
    for result in qu.run_corpus(paths):
        failed = [r.render() for r in result.results if not r.passed]
        assert result.passed, f"{result.path}: {failed}"
