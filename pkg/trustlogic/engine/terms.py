"""Proof terms of the Fitch-style modal lambda calculus and their text syntax.

Syntax::

    x                         variable
    *                         unit
    (t, u)                    pair
    \\x:A. t                  abstraction; the body extends as far as possible
    t . u                     application of t to u, left associative
    lock[M](t)                modal introduction
    key[M => N1, N2](t)       modal elimination along an unfolding; `key[M => .](t)` for the empty one
    pi1(t), pi2(t)            projections
    inj1[A | B](t)            injections, annotated with the disjunction
    case[C](t; x. u; y. v)    disjunction elimination into C
    abs[A](t)                 ex falso
"""

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterator, Optional, Set, Tuple

from trustlogic.logic.base import AbstractSyntax, cached_hash
from trustlogic.logic.contexts import AgentUniverse
from trustlogic.logic.formulas import Formula, Modality, render_formula, render_modality
from trustlogic.logic.syntax import FormulaParser


class Term(AbstractSyntax):
    """Template for proof terms."""

    def render(self) -> str:
        return render_term(self)


@cached_hash
@dataclass(frozen=True, eq=False)
class Var(Term):
    name: str


@cached_hash
@dataclass(frozen=True, eq=False)
class Unit(Term):
    pass


@cached_hash
@dataclass(frozen=True, eq=False)
class Lam(Term):
    var: str
    domain: Formula
    body: Term

    def children(self) -> Tuple[AbstractSyntax, ...]:
        return (self.body,)


@cached_hash
@dataclass(frozen=True, eq=False)
class App(Term):
    fun: Term
    arg: Term

    def children(self) -> Tuple[AbstractSyntax, ...]:
        return (self.fun, self.arg)


@cached_hash
@dataclass(frozen=True, eq=False)
class Pair(Term):
    left: Term
    right: Term

    def children(self) -> Tuple[AbstractSyntax, ...]:
        return (self.left, self.right)


@cached_hash
@dataclass(frozen=True, eq=False)
class Proj(Term):
    index: int
    body: Term

    def children(self) -> Tuple[AbstractSyntax, ...]:
        return (self.body,)


@cached_hash
@dataclass(frozen=True, eq=False)
class Inj(Term):
    """Injection into `target`, which must be a disjunction."""

    index: int
    target: Formula
    body: Term

    def children(self) -> Tuple[AbstractSyntax, ...]:
        return (self.body,)


@cached_hash
@dataclass(frozen=True, eq=False)
class Case(Term):
    result: Formula
    scrutinee: Term
    left_var: str
    left_body: Term
    right_var: str
    right_body: Term

    def children(self) -> Tuple[AbstractSyntax, ...]:
        return (self.scrutinee, self.left_body, self.right_body)


@cached_hash
@dataclass(frozen=True, eq=False)
class ExFalso(Term):
    target: Formula
    body: Term

    def children(self) -> Tuple[AbstractSyntax, ...]:
        return (self.body,)


@cached_hash
@dataclass(frozen=True, eq=False)
class Lock(Term):
    modality: Modality
    body: Term

    def children(self) -> Tuple[AbstractSyntax, ...]:
        return (self.body,)


@cached_hash
@dataclass(frozen=True, eq=False)
class Key(Term):
    """Unlock a `modality` formula along `unfolding`, consuming that many context locks."""

    modality: Modality
    unfolding: Tuple[Modality, ...]
    body: Term

    def children(self) -> Tuple[AbstractSyntax, ...]:
        return (self.body,)


UNIT = Unit()

# ---------------------------------------------------------------------------+
#                                 Rendering                                  |
# ---------------------------------------------------------------------------+


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Unit):
        return "*"
    if isinstance(t, Lam):
        return f"\\{t.var}:{render_formula(t.domain)}. {render_term(t.body)}"
    if isinstance(t, App):
        fun = render_term(t.fun)
        if isinstance(t.fun, Lam):
            fun = f"({fun})"
        arg = render_term(t.arg)
        if isinstance(t.arg, (App, Lam)):
            arg = f"({arg})"
        return f"{fun} . {arg}"
    if isinstance(t, Pair):
        return f"({render_term(t.left)}, {render_term(t.right)})"
    if isinstance(t, Proj):
        return f"pi{t.index}({render_term(t.body)})"
    if isinstance(t, Inj):
        return f"inj{t.index}[{render_formula(t.target)}]({render_term(t.body)})"
    if isinstance(t, Case):
        return (
            f"case[{render_formula(t.result)}]({render_term(t.scrutinee)}; "
            f"{t.left_var}. {render_term(t.left_body)}; {t.right_var}. {render_term(t.right_body)})"
        )
    if isinstance(t, ExFalso):
        return f"abs[{render_formula(t.target)}]({render_term(t.body)})"
    if isinstance(t, Lock):
        return f"lock[{render_modality(t.modality)}]({render_term(t.body)})"
    if isinstance(t, Key):
        targets = ", ".join(render_modality(m) for m in t.unfolding) or "."
        return f"key[{render_modality(t.modality)} => {targets}]({render_term(t.body)})"
    raise TypeError(f"Unsupported term type: {type(t)}")


# ---------------------------------------------------------------------------+
#                                  Parsing                                   |
# ---------------------------------------------------------------------------+

_KEYWORDS = frozenset({"lock", "key", "pi1", "pi2", "inj1", "inj2", "case", "abs"})


class TermParser(FormulaParser):
    """Reads the term syntax; formula and modality annotations reuse the formula grammar."""

    def term(self) -> Term:
        t = self.atom()
        while self.accept("."):
            t = App(t, self.atom())
        return t

    def variable(self) -> str:
        name = self.identifier(allow_parens=False)
        if name in _KEYWORDS:
            raise self.error(f"keyword {name!r} used as a variable")
        return name

    def atom(self) -> Term:
        if self.accept("*"):
            return UNIT
        if self.accept("("):
            first = self.term()
            if self.accept(","):
                second = self.term()
                self.expect(")")
                return Pair(first, second)
            self.expect(")")
            return first
        if self.accept("\\"):
            var = self.variable()
            self.expect(":")
            domain = self.formula()
            self.expect(".")
            return Lam(var, domain, self.term())
        self.skip_ws()
        start = self.pos
        word = self.identifier(allow_parens=False)
        if word not in _KEYWORDS:
            return Var(word)
        if word == "lock":
            m = self.bracketed_modality()
            return Lock(m, self._argument())
        if word == "key":
            self.expect("[")
            m = self.modality()
            self.expect("=>")
            unfolding: Tuple[Modality, ...] = ()
            if not self.accept("."):
                mods = [self.modality()]
                while self.accept(","):
                    mods.append(self.modality())
                unfolding = tuple(mods)
            self.expect("]")
            return Key(m, unfolding, self._argument())
        if word in ("pi1", "pi2"):
            return Proj(int(word[-1]), self._argument())
        if word in ("inj1", "inj2"):
            target = self._annotation()
            return Inj(int(word[-1]), target, self._argument())
        if word == "abs":
            target = self._annotation()
            return ExFalso(target, self._argument())
        if word == "case":
            result = self._annotation()
            self.expect("(")
            scrutinee = self.term()
            self.expect(";")
            left_var = self.variable()
            self.expect(".")
            left = self.term()
            self.expect(";")
            right_var = self.variable()
            self.expect(".")
            right = self.term()
            self.expect(")")
            return Case(result, scrutinee, left_var, left, right_var, right)
        self.pos = start
        raise self.error(f"unexpected keyword {word!r}")

    def _annotation(self) -> Formula:
        self.expect("[")
        f = self.formula()
        self.expect("]")
        return f

    def _argument(self) -> Term:
        self.expect("(")
        t = self.term()
        self.expect(")")
        return t


def parse_term(text: str, universe: Optional[AgentUniverse] = None) -> Term:
    """Parse a complete proof term."""
    parser = TermParser(text, universe)
    t = parser.term()
    parser.finish()
    return t


# ---------------------------------------------------------------------------+
#                              Variables and binders                         |
# ---------------------------------------------------------------------------+


def free_vars(t: Term) -> FrozenSet[str]:
    if isinstance(t, Var):
        return frozenset({t.name})
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.var}
    if isinstance(t, Case):
        return (
            free_vars(t.scrutinee)
            | (free_vars(t.left_body) - {t.left_var})
            | (free_vars(t.right_body) - {t.right_var})
        )
    found: Set[str] = set()
    for child in t.children():
        assert isinstance(child, Term)
        found |= free_vars(child)
    return frozenset(found)


def all_names(t: Term) -> Set[str]:
    """Free and bound variable names."""
    names: Set[str] = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            names.add(node.name)
        elif isinstance(node, Lam):
            names.add(node.var)
        elif isinstance(node, Case):
            names.update((node.left_var, node.right_var))
        stack.extend(c for c in node.children() if isinstance(c, Term))
    return names


def fresh_names(avoid: Set[str], stem: str = "v") -> Iterator[str]:
    for i in itertools.count():
        name = f"{stem}{i}"
        if name not in avoid:
            yield name


def rename_free(t: Term, old: str, new: str) -> Term:
    """Rename free occurrences of `old`; `new` must not be bound in `t`."""
    if isinstance(t, Var):
        return Var(new) if t.name == old else t
    if isinstance(t, Lam):
        if t.var == old:
            return t
        return Lam(t.var, t.domain, rename_free(t.body, old, new))
    if isinstance(t, Case):
        return Case(
            t.result,
            rename_free(t.scrutinee, old, new),
            t.left_var,
            t.left_body if t.left_var == old else rename_free(t.left_body, old, new),
            t.right_var,
            t.right_body if t.right_var == old else rename_free(t.right_body, old, new),
        )
    return map_children(t, lambda child: rename_free(child, old, new))


def map_children(t: Term, fn: Callable[[Term], Term]) -> Term:
    """Rebuild `t` with `fn` applied to each immediate subterm (binders untouched)."""
    if isinstance(t, (Var, Unit)):
        return t
    if isinstance(t, Lam):
        return Lam(t.var, t.domain, fn(t.body))
    if isinstance(t, App):
        return App(fn(t.fun), fn(t.arg))
    if isinstance(t, Pair):
        return Pair(fn(t.left), fn(t.right))
    if isinstance(t, Proj):
        return Proj(t.index, fn(t.body))
    if isinstance(t, Inj):
        return Inj(t.index, t.target, fn(t.body))
    if isinstance(t, Case):
        return Case(
            t.result, fn(t.scrutinee), t.left_var, fn(t.left_body), t.right_var, fn(t.right_body)
        )
    if isinstance(t, ExFalso):
        return ExFalso(t.target, fn(t.body))
    if isinstance(t, Lock):
        return Lock(t.modality, fn(t.body))
    if isinstance(t, Key):
        return Key(t.modality, t.unfolding, fn(t.body))
    raise TypeError(f"Unsupported term type: {type(t)}")


def canonical(t: Term) -> Term:
    """Rename every binder to `v0, v1, ...` in pre-order, avoiding the free variables."""
    return _canonical(t, {}, fresh_names(set(free_vars(t))))


def _canonical(t: Term, env: Dict[str, str], names: Iterator[str]) -> Term:
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    if isinstance(t, Lam):
        new = next(names)
        return Lam(new, t.domain, _canonical(t.body, {**env, t.var: new}, names))
    if isinstance(t, Case):
        scrutinee = _canonical(t.scrutinee, env, names)
        left_var = next(names)
        left = _canonical(t.left_body, {**env, t.left_var: left_var}, names)
        right_var = next(names)
        right = _canonical(t.right_body, {**env, t.right_var: right_var}, names)
        return Case(t.result, scrutinee, left_var, left, right_var, right)
    return map_children(t, lambda child: _canonical(child, env, names))


def alpha_equivalent(t: Term, u: Term) -> bool:
    return canonical(t) == canonical(u)


def term_size(t: Term) -> int:
    return 1 + sum(term_size(c) for c in t.children() if isinstance(c, Term))

