import pickle

import pytest

import trustlogic.logic.formulas as fo
from trustlogic.logic.contexts import (
    AgentUniverse,
    FlatContext,
    Hypothesis,
    ModalContext,
    ModalLock,
    Sequent,
    UnknownAgentError,
)

t, r = fo.Token("t"), fo.Token("r")
ba, bb = fo.Belief("a"), fo.Belief("b")
iab = fo.Interact("a", "b")

render_cases = [
    (fo.TOP, "true"),
    (fo.BOT, "false"),
    (fo.Modal(ba, t), "[B a](t)"),
    (fo.Modal(ba, fo.Modal(iab, t)), "[B a][I a <- b](t)"),
    (fo.Imp(t, fo.Imp(r, t)), "t -> r -> t"),
    (fo.Imp(fo.Imp(t, r), t), "(t -> r) -> t"),
    (fo.And(t, fo.Or(r, t)), "t & (r | t)"),
    (fo.Or(fo.And(t, r), t), "t & r | t"),
    (fo.Modal(fo.BOX, fo.Imp(t, r)), "[box](t -> r)"),
    (fo.Modal(fo.Wish("a"), t), "[W a](t)"),
    (fo.Modal(fo.Named("ch"), t), "[M ch](t)"),
]


@pytest.mark.parametrize("formula,expected", render_cases)
def test_render(formula, expected):
    assert formula.render() == expected
    assert str(formula) == expected


def test_structural_equality_and_hash():
    first = fo.Modal(fo.Interact("a", "b"), fo.Imp(t, r))
    second = fo.Modal(fo.Interact("a", "b"), fo.Imp(fo.Token("t"), fo.Token("r")))
    assert first == second
    assert hash(first) == hash(second)
    assert first != fo.Modal(fo.Interact("b", "a"), fo.Imp(t, r))
    assert len({first, second}) == 1


def test_pickle_keeps_equality():
    f = fo.Modal(ba, fo.And(t, r))
    assert pickle.loads(pickle.dumps(f)) == f


def test_conj_disj_edge_cases():
    assert fo.conj([]) == fo.TOP
    assert fo.disj([]) == fo.BOT
    assert fo.conj([t]) == t
    assert fo.conj([t, r, t]) == fo.And(fo.And(t, r), t)
    assert fo.disj([t, r]) == fo.Or(t, r)


def test_prefix_and_chains():
    assert fo.prefix([ba, bb], t) == fo.Modal(ba, fo.Modal(bb, t))
    assert fo.chain_modalities(["a", "b", "c"]) == [
        fo.Interact("a", "b"),
        fo.Interact("b", "c"),
    ]
    assert fo.interact_chain(["a"], t) == t
    assert fo.validity([iab], t) == fo.Imp(fo.Modal(iab, t), t)
    with pytest.raises(ValueError):
        fo.chain_modalities([])


def test_cautious_trust_shape():
    f = fo.cautious_trust("a", "b", t)
    assert f.render() == "[B a](([I a <- b](t) -> [B b](t)) & ([B b](t) -> t))"


simplify_cases = [
    (fo.And(fo.TOP, t), t),
    (fo.And(t, fo.TOP), t),
    (fo.Imp(fo.TOP, t), t),
    (fo.Imp(t, fo.TOP), fo.TOP),
    (fo.Modal(ba, fo.TOP), fo.TOP),
    (fo.Or(t, fo.TOP), fo.TOP),
    (fo.Modal(ba, fo.Imp(fo.And(fo.TOP, t), r)), fo.Modal(ba, fo.Imp(t, r))),
]


@pytest.mark.parametrize("formula,expected", simplify_cases)
def test_simplify(formula, expected):
    assert fo.simplify(formula) == expected


def test_introspection():
    f = fo.Modal(ba, fo.Imp(fo.Modal(iab, t), r))
    assert fo.tokens(f) == {"t", "r"}
    assert fo.modalities(f) == {ba, iab}
    assert fo.formula_agents(f) == {"a", "b"}
    assert fo.formula_size(f) == 5
    assert list(fo.subformulas(f))[0] == f


def test_negate():
    assert fo.negate(t) == fo.Imp(t, fo.BOT)


def test_universe_from_order_closes_preorder():
    universe = AgentUniverse.from_order(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert universe.leq("a", "c")
    assert not universe.leq("c", "a")
    assert universe.above("a") == ["a", "b", "c"]


def test_universe_bottom_and_top():
    universe = AgentUniverse.from_order(["a", "b"], bottom="nobody", top="all")
    assert universe.agents == ("a", "b", "nobody", "all")
    assert universe.leq("nobody", "a")
    assert universe.leq("b", "all")


universe_error_cases = [
    (("a", "a"), frozenset({("a", "a")})),
    (("a", "b"), frozenset({("a", "a")})),
    (("a-b",), frozenset({("a-b", "a-b")})),
]


@pytest.mark.parametrize("agents,order", universe_error_cases)
def test_universe_rejects_bad_input(agents, order):
    with pytest.raises(ValueError):
        AgentUniverse(agents, order)


def test_universe_check():
    universe = AgentUniverse.from_order(["a"])
    assert universe.check("a") == "a"
    with pytest.raises(UnknownAgentError) as info:
        universe.check("z")
    assert str(info.value) == "unknown agent: 'z'"


def test_contexts_render():
    ctx = ModalContext((Hypothesis("x", t), ModalLock(ba), Hypothesis("y", r)))
    assert ctx.lock_word() == (ba,)
    assert [h.name for h in ctx.hypotheses()] == ["x", "y"]
    flat = FlatContext((t, r, t))
    assert len(flat) == 2
    assert Sequent.flat([t], r).is_flat()
