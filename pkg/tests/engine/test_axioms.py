import pytest

import trustlogic.engine.axioms as ax
from trustlogic.engine.prover import prove
from trustlogic.logic.formulas import BOX, Belief, Interact, Named, Wish
from trustlogic.logic.syntax import parse_formula

ba, bb, bc = Belief("a"), Belief("b"), Belief("c")
iab = Interact("a", "b")


def test_parse_axiom():
    axiom = ax.parse_axiom("axiom [I a <- b] => [B a][I a <- b]")
    assert axiom == ax.UnfoldingAxiom(iab, (ba, iab))
    assert axiom.render() == "[I a <- b] => [B a][I a <- b]"


def test_parse_empty_unfolding():
    assert ax.parse_axiom("[box] => .") == ax.UnfoldingAxiom(BOX, ())


def test_compile_rejects_long_unfoldings():
    x = Named("x")
    with pytest.raises(ax.AxiomError, match="longer than 2"):
        ax.compile_system([ax.UnfoldingAxiom(x, (x, x, x))])


def test_compile_rejects_unknown_agents(universe):
    with pytest.raises(ax.AxiomError, match="agent 'z'"):
        ax.compile_system([ax.UnfoldingAxiom(Belief("z"), ())], universe)


def test_system_from_lines_wraps_parse_errors():
    with pytest.raises(ax.AxiomError):
        ax.system_from_lines(["[M x] => [M y", "[M x] => ."])


def test_standard_generator_counts(universe, ordered_universe):
    assert len(ax.standard_axioms(universe)) == 21
    assert len(ax.standard_axioms(ordered_universe)) == 35
    assert len(ax.standard_axioms(ordered_universe, wish_inheritance=True)) == 37
    assert len(ax.standard_axioms(ordered_universe, include_box=True)) == 35 + 17


def test_standard_tables(system):
    assert system.split_of(iab, ba) == iab
    assert system.split_of(iab, iab) == bb
    assert system.split_of(ba, ba) == ba
    assert not system.unit_holds(ba, bb)
    assert not system.is_eps(ba)


def test_inheritance_tables(ordered_universe):
    sys = ax.standard_system(ordered_universe)
    assert sys.unit_holds(ba, bb)
    assert sys.unit_holds(Interact("a", "c"), Interact("b", "c"))
    assert sys.unit_holds(Interact("c", "a"), Interact("c", "b"))
    assert not sys.unit_holds(bb, ba)
    assert sys.split_of(ba, bb) == ba
    assert not sys.unit_holds(Wish("a"), Wish("b"))
    assert ax.standard_system(ordered_universe, wish_inheritance=True).unit_holds(
        Wish("a"), Wish("b")
    )


unfolds_cases = [
    (ba, (ba, ba, ba), True),
    (ba, (), False),
    (iab, (ba, iab, bb), True),
    (iab, (bb,), False),
    (iab, (iab, bb, bb), True),
    (iab, (bb, iab), False),
]


@pytest.mark.parametrize("head,word,expected", unfolds_cases)
def test_unfolds(system, head, word, expected):
    assert ax.unfolds(system, head, word) is expected


def test_box_unfolds_to_everything(box_system):
    assert box_system.is_eps(BOX)
    assert ax.unfolds(box_system, BOX, (ba,))
    assert ax.unfolds(box_system, BOX, (iab, bc))
    assert ax.unfolds(box_system, BOX, (BOX, Wish("c")))


def test_standard_systems_are_decomposable(system, box_system):
    assert ax.check_decomposable(system).ok
    assert ax.check_decomposable(box_system, bound=3).ok


def test_non_decomposable_system_reported():
    sys = ax.system_from_lines(["[M x] => [M y][M z]", "[M x] => [M y][M w]"])
    report = ax.check_decomposable(sys, bound=3)
    assert not report.ok
    assert [v.render() for v in report.violations] == [
        "[M x] => [M y][M z]: split M w does not unfold to the remainder"
    ]


def test_decomposability_bound_checked(system):
    with pytest.raises(ValueError):
        ax.check_decomposable(system, bound=2)


@pytest.mark.parametrize("wish_inheritance", [False, True])
def test_wish_inheritance_provability(ordered_universe, wish_inheritance):
    sys = ax.standard_system(ordered_universe, wish_inheritance=wish_inheritance)
    goal = parse_formula("[W a]t -> [W b]t", ordered_universe)
    assert prove((), goal, sys).proved is wish_inheritance
