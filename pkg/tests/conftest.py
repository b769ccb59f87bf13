import pytest

from trustlogic.engine.axioms import standard_system
from trustlogic.logic.contexts import AgentUniverse
from trustlogic.logic.syntax import parse_formula

# Theorems of the standard system over agents a, b, c
theorem_list = [
    "[B a]t -> [B a][B a]t",
    "[I a <- b]t -> [B a][I a <- b]t",
    "[I a <- b]t -> [I a <- b][B b]t",
    "[B a](t -> r) -> [B a]t -> [B a]r",
    "[B a](t & r) -> [B a]t & [B a]r",
    "[B a]t | [B a]r -> [B a](t | r)",
    "[B a]([I a <- b]t -> [B b]t) & [B a]([B b]t -> t) -> [I a <- b]t -> [B a]t",
    "[I a <- b][I b <- c]t -> [B a][I a <- b][B b][I b <- c]t",
    "t -> [B a]true",
    "false -> [B a]t",
]

# Formulas the standard system does not prove
non_theorem_list = [
    "t -> [B a]t",
    "[B a]t -> t",
    "[B a]t -> [B b]t",
    "[I a <- b]t -> [I b <- a]t",
    "[I a <- b]t -> [B b]t",
    "([B a]t -> [B a]r) -> [B a](t -> r)",
    "t | (t -> false)",
]


@pytest.fixture
def universe() -> AgentUniverse:
    return AgentUniverse.from_order(["a", "b", "c"])


@pytest.fixture
def ordered_universe() -> AgentUniverse:
    return AgentUniverse.from_order(["a", "b", "c"], [("a", "b"), ("a", "c")])


@pytest.fixture
def system(universe):
    return standard_system(universe)


@pytest.fixture
def box_system(ordered_universe):
    return standard_system(ordered_universe, include_box=True)


@pytest.fixture
def parse(universe):
    def _parse(text: str):
        return parse_formula(text, universe)

    return _parse
