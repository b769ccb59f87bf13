"""Typing of proof terms in modal contexts, and terms read off sequent proofs."""

import itertools
from typing import Dict, Iterator, Sequence, Tuple, Union

from trustlogic.engine.axioms import CompiledAxiomSystem, unfolds
from trustlogic.engine.proofs import ProofTree, Rule, minus_sources
from trustlogic.engine.terms import (
    UNIT,
    App,
    Case,
    ExFalso,
    Inj,
    Key,
    Lam,
    Lock,
    Pair,
    Proj,
    Term,
    Unit,
    Var,
)
from trustlogic.logic.contexts import ContextEntry, Hypothesis, ModalContext, ModalLock
from trustlogic.logic.formulas import (
    BOT,
    TOP,
    And,
    Formula,
    Imp,
    Modal,
    Or,
    render_formula,
    render_unfolding,
)

Entries = Tuple[ContextEntry, ...]


class TypingError(TypeError):
    """Term has no type in the given context."""


def _entries(ctx: Union[ModalContext, Sequence[ContextEntry]]) -> Entries:
    return ctx.entries if isinstance(ctx, ModalContext) else tuple(ctx)


def typecheck(
    ctx: Union[ModalContext, Sequence[ContextEntry]], t: Term, sys: CompiledAxiomSystem
) -> Formula:
    """Return the formula `t` proves in `ctx`.

    Later hypotheses shadow earlier ones with the same name.

    Raises:
        TypingError: Unbound variable, variable behind a lock, key whose locks or
            unfolding do not fit, or a constructor applied to a term of the wrong shape.

    """
    return _infer(_entries(ctx), t, sys)


def _infer(ctx: Entries, t: Term, sys: CompiledAxiomSystem) -> Formula:
    if isinstance(t, Var):
        return _lookup(ctx, t.name)
    if isinstance(t, Unit):
        return TOP
    if isinstance(t, Lam):
        body = _infer(ctx + (Hypothesis(t.var, t.domain),), t.body, sys)
        return Imp(t.domain, body)
    if isinstance(t, App):
        fun = _infer(ctx, t.fun, sys)
        if not isinstance(fun, Imp):
            raise TypingError(f"Applying a term of type {render_formula(fun)}")
        _expect(ctx, t.arg, fun.lhs, sys)
        return fun.rhs
    if isinstance(t, Pair):
        return And(_infer(ctx, t.left, sys), _infer(ctx, t.right, sys))
    if isinstance(t, Proj):
        body = _infer(ctx, t.body, sys)
        if not isinstance(body, And):
            raise TypingError(f"Projecting from {render_formula(body)}")
        return body.lhs if t.index == 1 else body.rhs
    if isinstance(t, Inj):
        if not isinstance(t.target, Or):
            raise TypingError(f"Injection into non-disjunction {render_formula(t.target)}")
        _expect(ctx, t.body, t.target.lhs if t.index == 1 else t.target.rhs, sys)
        return t.target
    if isinstance(t, Case):
        scrutinee = _infer(ctx, t.scrutinee, sys)
        if not isinstance(scrutinee, Or):
            raise TypingError(f"Case analysis on {render_formula(scrutinee)}")
        _expect(ctx + (Hypothesis(t.left_var, scrutinee.lhs),), t.left_body, t.result, sys)
        _expect(ctx + (Hypothesis(t.right_var, scrutinee.rhs),), t.right_body, t.result, sys)
        return t.result
    if isinstance(t, ExFalso):
        _expect(ctx, t.body, BOT, sys)
        return t.target
    if isinstance(t, Lock):
        return Modal(t.modality, _infer(ctx + (ModalLock(t.modality),), t.body, sys))
    if isinstance(t, Key):
        prefix = _key_prefix(ctx, t)
        if not unfolds(sys, t.modality, t.unfolding):
            raise TypingError(
                f"Unfolding [{t.modality.render()}] => {render_unfolding(t.unfolding)} "
                "is not derivable"
            )
        inner = _infer(prefix, t.body, sys)
        if not isinstance(inner, Modal) or inner.modality != t.modality:
            raise TypingError(f"Key for [{t.modality.render()}] on {render_formula(inner)}")
        return inner.body
    raise TypingError(f"Unsupported term type: {type(t)}")


def _expect(ctx: Entries, t: Term, expected: Formula, sys: CompiledAxiomSystem) -> None:
    found = _infer(ctx, t, sys)
    if found != expected:
        raise TypingError(
            f"Expected {render_formula(expected)}, found {render_formula(found)} for {t.render()}"
        )


def _lookup(ctx: Entries, name: str) -> Formula:
    for entry in reversed(ctx):
        if isinstance(entry, ModalLock):
            if any(isinstance(e, Hypothesis) and e.name == name for e in ctx):
                raise TypingError(f"Variable {name!r} is behind a lock")
            break
        if entry.name == name:
            return entry.formula
    raise TypingError(f"Unbound variable {name!r}")


def _key_prefix(ctx: Entries, t: Key) -> Entries:
    """Context left of the locks a key consumes."""
    k = len(t.unfolding)
    if k == 0:
        return ctx
    locks = [i for i, e in enumerate(ctx) if isinstance(e, ModalLock)]
    if len(locks) < k:
        raise TypingError(f"Key needs {k} locks, context has {len(locks)}")
    start = locks[-k]
    word = tuple(e.modality for e in ctx[start:] if isinstance(e, ModalLock))
    if word != t.unfolding:
        raise TypingError(
            f"Key unfolding {render_unfolding(t.unfolding)} does not match locks "
            f"{render_unfolding(word)}"
        )
    return ctx[:start]


# ---------------------------------------------------------------------------+
#                              Term extraction                               |
# ---------------------------------------------------------------------------+


def proof_context(p: ProofTree) -> ModalContext:
    """Name the root formulas of `p` as `h0, h1, ...`."""
    return ModalContext(tuple(Hypothesis(f"h{i}", f) for i, f in enumerate(p.context)))


def extract_term(p: ProofTree, sys: CompiledAxiomSystem) -> Term:
    """Term of type `p.goal` in `proof_context(p)`.

    Each context formula is tracked with a term proving it at the current position;
    ModR re-derives the subtracted context through keys under the new lock.
    """
    env: Dict[Formula, Term] = {f: Var(f"h{i}") for i, f in enumerate(p.context)}
    return _Extractor(sys).run(p, env)


class _Extractor:
    def __init__(self, sys: CompiledAxiomSystem):
        self.sys = sys
        self.names: Iterator[str] = (f"x{i}" for i in itertools.count())

    def run(self, p: ProofTree, env: Dict[Formula, Term]) -> Term:
        rule, goal, f = p.rule, p.goal, p.principal
        if rule is Rule.VAR:
            return env[goal]
        if rule is Rule.TOP_R:
            return UNIT
        if rule is Rule.BOT_L:
            return ExFalso(goal, env[BOT])
        if rule is Rule.IMP_R:
            assert isinstance(goal, Imp)
            var = next(self.names)
            body = self.run(p.premises[0], {**env, goal.lhs: Var(var)})
            return Lam(var, goal.lhs, body)
        if rule is Rule.AND_R:
            return Pair(self.run(p.premises[0], env), self.run(p.premises[1], env))
        if rule in (Rule.OR_R1, Rule.OR_R2):
            index = 1 if rule is Rule.OR_R1 else 2
            return Inj(index, goal, self.run(p.premises[0], env))
        if rule is Rule.MOD_R:
            assert isinstance(goal, Modal)
            return Lock(goal.modality, self.run(p.premises[0], self._shift(p, env, goal)))
        assert f is not None
        if rule is Rule.IMP_L:
            assert isinstance(f, Imp)
            arg = self.run(p.premises[0], env)
            return self.run(p.premises[1], self._extend(env, f.rhs, App(env[f], arg)))
        if rule in (Rule.AND_L1, Rule.AND_L2):
            assert isinstance(f, And)
            index = 1 if rule is Rule.AND_L1 else 2
            part = f.lhs if index == 1 else f.rhs
            return self.run(p.premises[0], self._extend(env, part, Proj(index, env[f])))
        if rule is Rule.EPS_L:
            assert isinstance(f, Modal)
            return self.run(p.premises[0], self._extend(env, f.body, Key(f.modality, (), env[f])))
        if rule is Rule.OR_L:
            assert isinstance(f, Or)
            left_var, right_var = next(self.names), next(self.names)
            left = self.run(p.premises[0], {**env, f.lhs: Var(left_var)})
            right = self.run(p.premises[1], {**env, f.rhs: Var(right_var)})
            return Case(goal, env[f], left_var, left, right_var, right)
        raise TypingError(f"Unsupported rule {rule}")

    @staticmethod
    def _extend(env: Dict[Formula, Term], f: Formula, t: Term) -> Dict[Formula, Term]:
        if f in env:
            return env
        return {**env, f: t}

    def _shift(self, p: ProofTree, env: Dict[Formula, Term], goal: Modal) -> Dict[Formula, Term]:
        n = goal.modality
        shifted: Dict[Formula, Term] = {}
        for target, source in minus_sources(p.context, n, self.sys).items():
            assert isinstance(source, Modal)
            if target == source.body and self.sys.unit_holds(source.modality, n):
                shifted[target] = Key(source.modality, (n,), env[source])
            else:
                assert isinstance(target, Modal)
                shifted[target] = Lock(
                    target.modality, Key(source.modality, (n, target.modality), env[source])
                )
        return shifted


def unfold_term(ctx: Union[ModalContext, Sequence[ContextEntry]], t: Term) -> Term:
    """Turn a closed term of the folded sequent into a term in `ctx` itself."""
    for entry in _entries(ctx):
        if isinstance(entry, Hypothesis):
            t = App(t, Var(entry.name))
        else:
            t = Key(entry.modality, (entry.modality,), t)
    return t


def check_term(
    ctx: Union[ModalContext, Sequence[ContextEntry]],
    t: Term,
    expected: Formula,
    sys: CompiledAxiomSystem,
) -> bool:
    """True iff `t` has type `expected` in `ctx`."""
    try:
        return typecheck(ctx, t, sys) == expected
    except TypingError:
        return False
