import random

import pytest

import trustlogic.engine.kripke as kr
from trustlogic.engine.axioms import system_from_lines
from trustlogic.logic.contexts import Sequent
from trustlogic.logic.formulas import Named
from trustlogic.logic.syntax import parse_formula
from tests.conftest import theorem_list

m = Named("M")


def test_lemma_counter_frame():
    frame = kr.lemma_counter_frame()
    assert frame.check_invariants() == []
    assert kr.satisfies(frame, "v", parse_formula("[M M]t -> t"))
    assert kr.satisfies(frame, "v", parse_formula("[M M](t -> r) -> t -> r"))
    assert not kr.satisfies(frame, "v", parse_formula("[M M]r -> r"))


def test_frame_dict_round_trip():
    frame = kr.lemma_counter_frame()
    data = frame.to_dict()
    assert data["relations"] == {"M M": [["v", "w"]]}
    assert kr.KripkeFrame.from_dict(data) == frame


def test_check_invariants_reports_problems():
    frame = kr.KripkeFrame(
        worlds=(0, 1),
        leq=frozenset({(0, 0), (1, 1), (0, 1)}),
        valuation={"t": frozenset({0})},
        rel={m: frozenset({(1, 1)})},
    )
    problems = frame.check_invariants()
    assert "token t not persistent from 0 to 1" in problems
    assert "relation M M breaks the back condition" in problems


def test_back_condition_and_compose():
    leq = frozenset({(0, 0), (1, 1), (0, 1)})
    assert not kr.back_condition(leq, frozenset({(1, 1)}))
    assert kr.back_condition(leq, frozenset({(0, 1), (1, 1)}))
    assert kr.compose(frozenset({(0, 1)}), frozenset({(1, 2)})) == {(0, 2)}


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 3), (3, 9)])
def test_preorders_up_to_isomorphism(n, expected):
    assert len(list(kr.preorders(n))) == expected


def test_up_sets():
    leq = frozenset({(0, 0), (1, 1), (0, 1)})
    assert sorted(kr.up_sets([0, 1], leq), key=len) == [
        frozenset(),
        frozenset({1}),
        frozenset({0, 1}),
    ]


def test_conforms():
    frame = kr.lemma_counter_frame()
    assert kr.conforms(frame, system_from_lines(["[M M] => [M M][M M]"]))
    reflexive = system_from_lines(["[M M] => ."])
    assert not kr.conforms(frame, reflexive)
    with pytest.raises(ValueError):
        kr.frame_validates(frame, ((), parse_formula("t")), reflexive)


countermodel_cases = [
    ("[B a]t -> t", 1),
    ("t -> [B a]t", 2),
    ("t | (t -> false)", 2),
    ("[I a <- b]t -> [B b]t", 1),
]


@pytest.mark.parametrize("text,worlds", countermodel_cases)
def test_countermodel_search(text, worlds, system, parse):
    seq = Sequent.flat([], parse(text))
    found = kr.counterexample_search(seq, system, max_worlds=2)
    assert found is not None
    assert len(found.frame.worlds) == worlds
    assert kr.conforms(found.frame, system)
    assert found.frame.check_invariants() == []
    assert not kr.satisfies(found.frame, found.world, parse(text))
    assert found.render().startswith(f"refuted at world {found.world}")


@pytest.mark.parametrize("text", theorem_list[:4])
def test_no_countermodel_for_theorems(text, system, parse):
    assert kr.counterexample_search(((), parse(text)), system, max_worlds=2) is None


def test_countermodel_respects_context(system, parse):
    seq = ([parse("t")], parse("[B a]t"))
    found = kr.counterexample_search(seq, system, max_worlds=2)
    assert found is not None
    assert kr.satisfies(found.frame, found.world, parse("t"))
    assert kr.refuting_worlds(found.frame, seq)


def test_assignment_cap(system, parse):
    seq = ((), parse("t -> [B a]t"))
    assert kr.counterexample_search(seq, system, max_worlds=2, max_assignments=1) is None


def test_random_frames_conform(system):
    rng = random.Random(3)
    for _ in range(20):
        frame = kr.random_frame(rng, system, worlds=3, token_names=["t"])
        assert kr.conforms(frame, system)
        assert frame.check_invariants() == []
