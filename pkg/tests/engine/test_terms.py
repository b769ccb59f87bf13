import pytest

import trustlogic.engine.terms as te
from trustlogic.engine.normalize import (
    SubstitutionError,
    cut_term,
    modal_substitute,
    normalize,
)
from trustlogic.engine.prover import fold_modal_context, prove
from trustlogic.engine.typecheck import (
    TypingError,
    check_term,
    extract_term,
    proof_context,
    typecheck,
    unfold_term,
)
from trustlogic.logic.contexts import Hypothesis, ModalContext, ModalLock
from trustlogic.logic.formulas import TOP, Belief, Token
from trustlogic.logic.syntax import ParseError
from tests.conftest import theorem_list

ba = Belief("a")

typed_terms = [
    ("\\x:[B a]t. lock[B a](key[B a => B a](x))", "[B a]t -> [B a]t"),
    ("\\x:[B a]t. lock[B a](lock[B a](key[B a => B a, B a](x)))", "[B a]t -> [B a][B a]t"),
    (
        "\\f:[B a](t -> r). \\y:[B a]t. lock[B a](key[B a => B a](f) . key[B a => B a](y))",
        "[B a](t -> r) -> [B a]t -> [B a]r",
    ),
    (
        "\\x:[I a <- b]t. lock[B a](lock[I a <- b](key[I a <- b => B a, I a <- b](x)))",
        "[I a <- b]t -> [B a][I a <- b]t",
    ),
    ("\\p:t & r. (pi2(p), pi1(p))", "t & r -> r & t"),
    (
        "\\s:t | r. case[r | t](s; x. inj2[r | t](x); y. inj1[r | t](y))",
        "t | r -> r | t",
    ),
    ("\\b:false. abs[t](b)", "false -> t"),
    ("*", "true"),
]


@pytest.mark.parametrize("text,formula", typed_terms)
def test_typecheck(text, formula, system, parse):
    term = te.parse_term(text)
    assert typecheck((), term, system) == parse(formula)
    assert check_term((), term, parse(formula), system)


@pytest.mark.parametrize("text,formula", typed_terms)
def test_render_parses_back(text, formula):
    term = te.parse_term(text)
    assert te.parse_term(term.render()) == term


ill_typed_terms = [
    ("\\x:t. lock[B a](x)", "behind a lock"),
    ("\\x:[B a]t. key[B a => .](x)", "not derivable"),
    ("\\x:[B a]t. lock[B b](key[B a => B a](x))", "does not match locks"),
    ("\\x:[B a]t. key[B a => B a](x)", "needs 1 locks"),
    ("\\x:t. x . x", "Applying"),
    ("\\x:t. pi1(x)", "Projecting"),
    ("y", "Unbound"),
    ("\\x:t. inj1[t](x)", "non-disjunction"),
]


@pytest.mark.parametrize("text,message", ill_typed_terms)
def test_typing_errors(text, message, system):
    with pytest.raises(TypingError, match=message):
        typecheck((), te.parse_term(text), system)


def test_check_term_false_on_mismatch(system, parse):
    term = te.parse_term("\\x:t. x")
    assert not check_term((), term, parse("r -> r"), system)
    assert not check_term((), te.parse_term("y"), parse("t"), system)


def test_shadowing_uses_latest_hypothesis(system):
    ctx = [Hypothesis("x", Token("t")), Hypothesis("x", Token("r"))]
    assert typecheck(ctx, te.Var("x"), system) == Token("r")


def test_term_helpers():
    term = te.parse_term("\\x:t. f . x")
    assert te.free_vars(term) == {"f"}
    assert te.all_names(term) == {"f", "x"}
    assert te.alpha_equivalent(term, te.parse_term("\\y:t. f . y"))
    assert not te.alpha_equivalent(term, te.parse_term("\\f:t. f . f"))
    assert te.term_size(term) == 4


def test_keyword_not_a_variable():
    with pytest.raises(ParseError):
        te.parse_term("\\lock:t. lock")


@pytest.mark.parametrize("text", theorem_list)
def test_extracted_terms_typecheck(text, system, parse):
    proof = prove((), parse(text), system).proof
    term = extract_term(proof, system)
    assert typecheck(proof_context(proof), term, system) == parse(text)
    normal = normalize(term, system)
    assert normal.complete
    assert typecheck(proof_context(proof), normal.term, system) == parse(text)


def test_extraction_names_hypotheses(system, parse):
    h = parse("[B a]([I a <- b]t -> t)")
    goal = parse("[I a <- b]t -> [B a]t")
    proof = prove([h], goal, system).proof
    ctx = proof_context(proof)
    assert [entry.render() for entry in ctx.entries] == ["h0: " + h.render()]
    term = extract_term(proof, system)
    assert "h0" in te.free_vars(term)
    assert check_term(ctx, term, goal, system)


def test_unfold_term_moves_into_modal_context(system, parse):
    ctx = ModalContext((Hypothesis("x", parse("[B a]t")), ModalLock(ba)))
    folded = fold_modal_context(ctx, parse("t"))
    proof = prove((), folded, system).proof
    closed = extract_term(proof, system)
    assert check_term((), closed, folded, system)
    assert check_term(ctx, unfold_term(ctx, closed), parse("t"), system)


def test_normalize_beta(system):
    result = normalize(te.parse_term("(\\x:t. x) . y"), system)
    assert result.term == te.Var("y")
    assert result.steps == 1
    assert result.complete


def test_normalize_key_of_lock(system, parse):
    redex = te.parse_term(
        "\\x:[B a]t. lock[B a](key[B a => B a](lock[B a](key[B a => B a](x))))"
    )
    assert typecheck((), redex, system) == parse("[B a]t -> [B a]t")
    result = normalize(redex, system)
    assert result.term == te.parse_term("\\x:[B a]t. lock[B a](key[B a => B a](x))")
    assert result.steps == 1


def test_normalize_projection_and_case(system):
    assert normalize(te.parse_term("pi2((a, b))"), system).term == te.Var("b")
    term = te.parse_term("case[t](inj2[r | t](z); x. x; y. y)")
    assert normalize(term, system).term == te.Var("z")


def test_normalize_step_limit(system):
    result = normalize(te.parse_term("(\\x:t. x) . ((\\y:t. y) . z)"), system, step_limit=1)
    assert not result.complete
    assert result.steps == 1
    assert normalize(result.term, system).term == te.Var("z")


def test_cut_term(system):
    ctx = [Hypothesis("y", TOP)]
    body = te.Pair(te.Var("y"), te.Var("y"))
    assert cut_term(ctx, "y", te.UNIT, body, system) == te.Pair(te.UNIT, te.UNIT)
    with pytest.raises(TypingError):
        cut_term([Hypothesis("y", Token("t"))], "y", te.UNIT, body, system)


def test_substitution_avoids_capture(system):
    term = te.parse_term("(\\x:t. \\y:r. x) . y")
    result = normalize(term, system).term
    assert isinstance(result, te.Lam)
    assert result.var != "y"
    assert result.body == te.Var("y")


def test_modal_substitute_checks_unfoldings(system):
    term = te.Key(ba, (ba,), te.Var("x"))
    assert modal_substitute(term, [(ba, ba)], system) == te.Key(ba, (ba, ba), te.Var("x"))
    with pytest.raises(SubstitutionError):
        modal_substitute(term, [(Belief("b"),)], system)
