"""Agent universes, flat and modal contexts, and sequents."""

import re
from dataclasses import dataclass
from typing import (
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from trustlogic.logic.formulas import Formula, Modality, render_modality

_AGENT_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class UnknownAgentError(KeyError):
    """Agent id not declared in the universe."""

    def __init__(self, agent: str):
        super().__init__(agent)
        self.agent = agent

    def __str__(self) -> str:
        return f"unknown agent: {self.agent!r}"


def validate_agent_id(agent: str) -> str:
    """Return `agent` unchanged if it is a valid id, else raise ValueError."""
    if not isinstance(agent, str):
        raise TypeError(r"Agent id must be str")
    if not _AGENT_ID.match(agent):
        raise ValueError(f"Invalid agent id: {agent!r}")
    return agent


@dataclass(frozen=True)
class AgentUniverse:
    """Finite set of agents with the inheritance preorder.

    `a <= b` means b inherits all knowledge of a.

    Attributes:
        agents (tuple): Agent ids in declaration order.
        order (frozenset): Pairs (a, b) with a <= b; reflexive and transitive.
        bottom (str): Optional agent below every other.
        top (str): Optional agent above every other.

    """

    agents: Tuple[str, ...]
    order: FrozenSet[Tuple[str, str]] = frozenset()
    bottom: Optional[str] = None
    top: Optional[str] = None

    def __post_init__(self) -> None:
        for a in self.agents:
            validate_agent_id(a)
        if len(set(self.agents)) != len(self.agents):
            raise ValueError("Agent ids must be unique")
        known = set(self.agents)
        for a, b in self.order:
            if a not in known or b not in known:
                raise UnknownAgentError(a if a not in known else b)
        for a in self.agents:
            if (a, a) not in self.order:
                raise ValueError(f"Order is not reflexive at {a!r}")
        for a, b in self.order:
            for c, d in self.order:
                if b == c and (a, d) not in self.order:
                    raise ValueError(
                        f"Order is not transitive: {a} <= {b} <= {d} but not {a} <= {d}"
                    )
        if self.bottom is not None and not all(self.leq(self.bottom, a) for a in self.agents):
            raise ValueError(f"Bottom agent {self.bottom!r} is not below every agent")
        if self.top is not None and not all(self.leq(a, self.top) for a in self.agents):
            raise ValueError(f"Top agent {self.top!r} is not above every agent")

    @classmethod
    def from_order(
        cls,
        agents: Iterable[str],
        pairs: Iterable[Tuple[str, str]] = (),
        bottom: Optional[str] = None,
        top: Optional[str] = None,
    ) -> "AgentUniverse":
        """Build a universe from declared `a <= b` pairs, closing them reflexively and transitively.

        A declared bottom or top agent is related to every agent.
        """
        names = list(dict.fromkeys(agents))
        for extra in (bottom, top):
            if extra is not None and extra not in names:
                names.append(extra)
        order: Set[Tuple[str, str]] = {(a, a) for a in names}
        order.update(pairs)
        if bottom is not None:
            order.update((bottom, a) for a in names)
        if top is not None:
            order.update((a, top) for a in names)
        for k in names:
            for i in names:
                if (i, k) not in order:
                    continue
                for j in names:
                    if (k, j) in order:
                        order.add((i, j))
        return cls(tuple(names), frozenset(order), bottom, top)

    def leq(self, a: str, b: str) -> bool:
        return a == b or (a, b) in self.order

    def above(self, a: str) -> List[str]:
        """Agents inheriting from `a`, including `a`."""
        return [b for b in self.agents if self.leq(a, b)]

    def check(self, agent: str) -> str:
        if agent not in self.agents:
            raise UnknownAgentError(agent)
        return agent

    def check_modality(self, m: Modality) -> Modality:
        for a in m.agents():
            self.check(a)
        return m

    def __contains__(self, agent: object) -> bool:
        return agent in self.agents

    def __iter__(self) -> Iterator[str]:
        return iter(self.agents)

    def __len__(self) -> int:
        return len(self.agents)


@dataclass(frozen=True)
class FlatContext:
    """Lock-free list of formulas; duplicates collapse, first occurrence keeps its place."""

    formulas: Tuple[Formula, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "formulas", tuple(dict.fromkeys(self.formulas)))

    def add(self, *formulas: Formula) -> "FlatContext":
        return FlatContext(self.formulas + formulas)

    def as_set(self) -> FrozenSet[Formula]:
        return frozenset(self.formulas)

    def render(self) -> str:
        return ", ".join(f.render() for f in self.formulas)

    def __contains__(self, f: object) -> bool:
        return f in self.formulas

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.formulas)

    def __len__(self) -> int:
        return len(self.formulas)


@dataclass(frozen=True)
class Hypothesis:
    name: str
    formula: Formula

    def render(self) -> str:
        return f"{self.name}: {self.formula.render()}"


@dataclass(frozen=True)
class ModalLock:
    """A modal shift `{M}` in a Fitch-style context."""

    modality: Modality

    def render(self) -> str:
        return "{" + render_modality(self.modality) + "}"


ContextEntry = Union[Hypothesis, ModalLock]


@dataclass(frozen=True)
class ModalContext:
    """Hypotheses interleaved with locks, oldest first."""

    entries: Tuple[ContextEntry, ...] = ()

    def __post_init__(self) -> None:
        names = [e.name for e in self.entries if isinstance(e, Hypothesis)]
        if len(set(names)) != len(names):
            raise ValueError(f"Hypothesis names must be unique: {names}")

    def lock_word(self) -> Tuple[Modality, ...]:
        return tuple(e.modality for e in self.entries if isinstance(e, ModalLock))

    def hypotheses(self) -> List[Hypothesis]:
        return [e for e in self.entries if isinstance(e, Hypothesis)]

    def extend(self, *entries: ContextEntry) -> "ModalContext":
        return ModalContext(self.entries + entries)

    def render(self) -> str:
        return ", ".join(e.render() for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Sequent:
    context: Union[FlatContext, ModalContext]
    goal: Formula

    @classmethod
    def flat(cls, context: Sequence[Formula], goal: Formula) -> "Sequent":
        return cls(FlatContext(tuple(context)), goal)

    def is_flat(self) -> bool:
        return isinstance(self.context, FlatContext)

    def render(self) -> str:
        lhs = self.context.render()
        return f"{lhs} |- {self.goal.render()}" if lhs else f"|- {self.goal.render()}"
