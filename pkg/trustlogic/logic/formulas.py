"""Modalities, formulas and the derived formula constructors."""

from dataclasses import dataclass
from functools import reduce
from typing import Callable, FrozenSet, Iterable, Iterator, List, Sequence, Set, Tuple

from trustlogic.logic.base import AbstractSyntax, cached_hash

# ---------------------------------------------------------------------------+
#                                Modalities                                  |
# ---------------------------------------------------------------------------+


class Modality(AbstractSyntax):
    """Template for modal operators: `B a`, `I a <- b`, `box`, `W a` and `M id`."""

    def agents(self) -> Tuple[str, ...]:
        """Agents this modality mentions."""
        return ()

    def render(self) -> str:
        return render_modality(self)


@cached_hash
@dataclass(frozen=True, eq=False)
class Belief(Modality):
    """What `agent` believes."""

    agent: str

    def agents(self) -> Tuple[str, ...]:
        return (self.agent,)


@cached_hash
@dataclass(frozen=True, eq=False)
class Interact(Modality):
    """Claims made by `sender` to `recipient`."""

    recipient: str
    sender: str

    def agents(self) -> Tuple[str, ...]:
        return (self.recipient, self.sender)


@cached_hash
@dataclass(frozen=True, eq=False)
class Box(Modality):
    """Public knowledge."""


@cached_hash
@dataclass(frozen=True, eq=False)
class Wish(Modality):
    """What `agent` wishes to hold."""

    agent: str

    def agents(self) -> Tuple[str, ...]:
        return (self.agent,)


@cached_hash
@dataclass(frozen=True, eq=False)
class Named(Modality):
    """A free-standing modality for custom axiom systems."""

    ident: str


BOX = Box()


def render_modality(m: Modality) -> str:
    """Bracket-free modality text, e.g. `I a <- b`."""
    if isinstance(m, Belief):
        return f"B {m.agent}"
    if isinstance(m, Interact):
        return f"I {m.recipient} <- {m.sender}"
    if isinstance(m, Box):
        return "box"
    if isinstance(m, Wish):
        return f"W {m.agent}"
    if isinstance(m, Named):
        return f"M {m.ident}"
    raise TypeError(f"Unsupported modality type: {type(m)}")


def render_unfolding(mods: Sequence[Modality]) -> str:
    """Render a modality list as `[B a][I a <- b]`, or `.` when empty."""
    if not mods:
        return "."
    return "".join(f"[{render_modality(m)}]" for m in mods)


# ---------------------------------------------------------------------------+
#                                 Formulas                                   |
# ---------------------------------------------------------------------------+


class Formula(AbstractSyntax):
    """Template for formulas of the modal propositional language."""

    def render(self) -> str:
        return render_formula(self)


@cached_hash
@dataclass(frozen=True, eq=False)
class Top(Formula):
    pass


@cached_hash
@dataclass(frozen=True, eq=False)
class Bot(Formula):
    pass


@cached_hash
@dataclass(frozen=True, eq=False)
class Token(Formula):
    name: str


@cached_hash
@dataclass(frozen=True, eq=False)
class Modal(Formula):
    modality: Modality
    body: Formula

    def children(self) -> Tuple[AbstractSyntax, ...]:
        return (self.body,)


@cached_hash
@dataclass(frozen=True, eq=False)
class Imp(Formula):
    lhs: Formula
    rhs: Formula

    def children(self) -> Tuple[AbstractSyntax, ...]:
        return (self.lhs, self.rhs)


@cached_hash
@dataclass(frozen=True, eq=False)
class And(Formula):
    lhs: Formula
    rhs: Formula

    def children(self) -> Tuple[AbstractSyntax, ...]:
        return (self.lhs, self.rhs)


@cached_hash
@dataclass(frozen=True, eq=False)
class Or(Formula):
    lhs: Formula
    rhs: Formula

    def children(self) -> Tuple[AbstractSyntax, ...]:
        return (self.lhs, self.rhs)


TOP = Top()
BOT = Bot()

_IMP, _OR, _AND, _UNARY = range(4)


def render_formula(f: Formula) -> str:
    """Canonical text of `f`; `parse_formula` reads it back to an equal formula."""
    return _render(f, _IMP)


def _render(f: Formula, level: int) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Token):
        return f.name
    if isinstance(f, Modal):
        head = f"[{render_modality(f.modality)}]"
        if isinstance(f.body, Modal):
            return head + _render(f.body, _UNARY)
        return f"{head}({_render(f.body, _IMP)})"
    if isinstance(f, And):
        text = f"{_render(f.lhs, _AND)} & {_render(f.rhs, _UNARY)}"
        return f"({text})" if level > _AND else text
    if isinstance(f, Or):
        text = f"{_render(f.lhs, _OR)} | {_render(f.rhs, _AND)}"
        return f"({text})" if level > _OR else text
    if isinstance(f, Imp):
        text = f"{_render(f.lhs, _OR)} -> {_render(f.rhs, _IMP)}"
        return f"({text})" if level > _IMP else text
    raise TypeError(f"Unsupported formula type: {type(f)}")


# ---------------------------------------------------------------------------+
#                                  Macros                                    |
# ---------------------------------------------------------------------------+


def negate(f: Formula) -> Formula:
    """A -> false."""
    return Imp(f, BOT)


def conj(formulas: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; `true` for no conjuncts."""
    items = list(formulas)
    if not items:
        return TOP
    return reduce(And, items)


def disj(formulas: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; `false` for no disjuncts."""
    items = list(formulas)
    if not items:
        return BOT
    return reduce(Or, items)


def forall_agents(agents: Iterable[str], body: Callable[[str], Formula]) -> Formula:
    return conj(body(a) for a in agents)


def exists_agents(agents: Iterable[str], body: Callable[[str], Formula]) -> Formula:
    return disj(body(a) for a in agents)


def prefix(mods: Sequence[Modality], body: Formula) -> Formula:
    """Apply a modality list, outermost first: `[M1]...[Mn](body)`."""
    for m in reversed(mods):
        body = Modal(m, body)
    return body


def chain_modalities(agents: Sequence[str]) -> List[Modality]:
    """`I a1 <- a2`, `I a2 <- a3`, ... for the chain a1 <- a2 <- ... <- an."""
    if not agents:
        raise ValueError("Chain needs at least one agent")
    return [Interact(r, s) for r, s in zip(agents, agents[1:])]


def interact_chain(agents: Sequence[str], body: Formula) -> Formula:
    """Chain modality I_{a1<-a2<-...<-an} applied to `body`."""
    return prefix(chain_modalities(agents), body)


def validity(mods: Sequence[Modality], body: Formula) -> Formula:
    """Validity of a modality list concerning `body`: l(body) -> body."""
    return Imp(prefix(mods, body), body)


def cautious_trust(truster: str, trustee: str, body: Formula) -> Formula:
    """B_a((I_{a<-b} A -> B_b A) & (B_b A -> A))."""
    believed = Modal(Belief(trustee), body)
    return Modal(
        Belief(truster),
        And(Imp(Modal(Interact(truster, trustee), body), believed), Imp(believed, body)),
    )


def simplify(f: Formula) -> Formula:
    """Remove `true` clutter: true conjuncts, `true -> A`, `A -> true` and `[M]true`."""
    if isinstance(f, Modal):
        body = simplify(f.body)
        return TOP if isinstance(body, Top) else Modal(f.modality, body)
    if isinstance(f, And):
        lhs, rhs = simplify(f.lhs), simplify(f.rhs)
        if isinstance(lhs, Top):
            return rhs
        if isinstance(rhs, Top):
            return lhs
        return And(lhs, rhs)
    if isinstance(f, Or):
        lhs, rhs = simplify(f.lhs), simplify(f.rhs)
        if isinstance(lhs, Top) or isinstance(rhs, Top):
            return TOP
        return Or(lhs, rhs)
    if isinstance(f, Imp):
        lhs, rhs = simplify(f.lhs), simplify(f.rhs)
        if isinstance(rhs, Top):
            return TOP
        if isinstance(lhs, Top):
            return rhs
        return Imp(lhs, rhs)
    return f


# ---------------------------------------------------------------------------+
#                               Introspection                                |
# ---------------------------------------------------------------------------+


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk over `f` and all its subformulas."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))  # type: ignore[arg-type]


def tokens(f: Formula) -> FrozenSet[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Token))


def modalities(f: Formula) -> FrozenSet[Modality]:
    return frozenset(g.modality for g in subformulas(f) if isinstance(g, Modal))


def formula_size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def formula_agents(f: Formula) -> Set[str]:
    found: Set[str] = set()
    for m in modalities(f):
        found.update(m.agents())
    return found
