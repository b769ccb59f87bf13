"""Variable and modal substitution, and leftmost-outermost normalization of proof terms."""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

from trustlogic._options import resolve_config_option
from trustlogic.engine.axioms import CompiledAxiomSystem, unfolds
from trustlogic.engine.terms import (
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
    all_names,
    free_vars,
    fresh_names,
    map_children,
    rename_free,
)
from trustlogic.engine.typecheck import TypingError, typecheck
from trustlogic.logic.contexts import ContextEntry, Hypothesis, ModalContext
from trustlogic.logic.formulas import BOT, And, Imp, Modality, Or, render_formula, render_unfolding

logger = logging.getLogger(__name__)

# One entry per context lock, aligned to the end of the lock word; None keeps the lock.
LockReplacement = Optional[Tuple[Modality, ...]]


class SubstitutionError(ValueError):
    """A modal substitution would need an unfolding the axiom system does not derive."""


# ---------------------------------------------------------------------------+
#                               Substitution                                 |
# ---------------------------------------------------------------------------+


def var_substitute(t: Term, x: str, q: Term) -> Term:
    """Capture-avoiding `t[q/x]`."""
    if isinstance(t, Var):
        return q if t.name == x else t
    if isinstance(t, Lam):
        if t.var == x:
            return t
        var, body = _avoid_capture(t.var, t.body, x, q)
        return Lam(var, t.domain, var_substitute(body, x, q))
    if isinstance(t, Case):
        left_var, left = t.left_var, t.left_body
        if left_var != x:
            left_var, left = _avoid_capture(left_var, left, x, q)
            left = var_substitute(left, x, q)
        right_var, right = t.right_var, t.right_body
        if right_var != x:
            right_var, right = _avoid_capture(right_var, right, x, q)
            right = var_substitute(right, x, q)
        return Case(t.result, var_substitute(t.scrutinee, x, q), left_var, left, right_var, right)
    return map_children(t, lambda child: var_substitute(child, x, q))


def _avoid_capture(binder: str, body: Term, x: str, q: Term) -> Tuple[str, Term]:
    if binder not in free_vars(q) or x not in free_vars(body):
        return binder, body
    new = next(fresh_names(set(free_vars(q)) | all_names(body) | {x}, stem=binder))
    return new, rename_free(body, binder, new)


def cut_term(
    ctx: Union[ModalContext, Sequence[ContextEntry]],
    x: str,
    q: Term,
    t: Term,
    sys: CompiledAxiomSystem,
) -> Term:
    """Substitute `q` for hypothesis `x` after checking `q` against the hypothesis formula.

    `q` is typed in the part of `ctx` left of `x`.
    """
    entries = ctx.entries if isinstance(ctx, ModalContext) else tuple(ctx)
    for i in range(len(entries) - 1, -1, -1):
        entry = entries[i]
        if isinstance(entry, Hypothesis) and entry.name == x:
            found = typecheck(entries[:i], q, sys)
            if found != entry.formula:
                raise TypingError(
                    f"Substituting a proof of {render_formula(found)} "
                    f"for {x}: {render_formula(entry.formula)}"
                )
            return var_substitute(t, x, q)
    raise TypingError(f"Unbound variable {x!r}")


def modal_substitute(
    t: Term, lists: Sequence[LockReplacement], sys: CompiledAxiomSystem
) -> Term:
    """Replace the trailing context locks of `t` by unfoldings, re-targeting every key.

    `lists[i]` replaces the i-th of the last `len(lists)` locks; earlier locks are kept.

    Raises:
        SubstitutionError: A key's re-targeted unfolding is not derivable.

    """
    return _modal(t, tuple(lists), sys)


def _modal(t: Term, lists: Tuple[LockReplacement, ...], sys: CompiledAxiomSystem) -> Term:
    if not any(entry is not None for entry in lists):
        return t
    if isinstance(t, (Var, Unit)):
        return t
    if isinstance(t, Lock):
        return Lock(t.modality, _modal(t.body, lists + (None,), sys))
    if isinstance(t, Key):
        k = len(t.unfolding)
        if k == 0:
            return Key(t.modality, t.unfolding, _modal(t.body, lists, sys))
        tail = lists[-k:]
        tail = (None,) * (k - len(tail)) + tail
        remaining = lists[:-k] if len(lists) > k else ()
        unfolding: Tuple[Modality, ...] = ()
        for original, replacement in zip(t.unfolding, tail):
            unfolding += (original,) if replacement is None else replacement
        if not unfolds(sys, t.modality, unfolding):
            raise SubstitutionError(
                f"[{t.modality.render()}] => {render_unfolding(unfolding)} is not derivable"
            )
        return Key(t.modality, unfolding, _modal(t.body, remaining, sys))
    return map_children(t, lambda child: _modal(child, lists, sys))


# ---------------------------------------------------------------------------+
#                               Normalization                                |
# ---------------------------------------------------------------------------+


def _contract(t: Term, sys: CompiledAxiomSystem) -> Optional[Term]:
    """Rewrite `t` at the root, or None when the root is not a redex."""
    # ex falso absorption first
    if isinstance(t, ExFalso) and isinstance(t.body, ExFalso) and t.body.target == BOT:
        return ExFalso(t.target, t.body.body)
    if isinstance(t, App) and isinstance(t.fun, ExFalso) and isinstance(t.fun.target, Imp):
        return ExFalso(t.fun.target.rhs, t.fun.body)
    if isinstance(t, Proj) and isinstance(t.body, ExFalso) and isinstance(t.body.target, And):
        target = t.body.target
        return ExFalso(target.lhs if t.index == 1 else target.rhs, t.body.body)
    if isinstance(t, Case) and isinstance(t.scrutinee, ExFalso) and isinstance(
        t.scrutinee.target, Or
    ):
        return ExFalso(t.result, t.scrutinee.body)

    if isinstance(t, Key) and isinstance(t.body, Lock) and t.body.modality == t.modality:
        return modal_substitute(t.body.body, (t.unfolding,), sys)
    if isinstance(t, App) and isinstance(t.fun, Lam):
        return var_substitute(t.fun.body, t.fun.var, t.arg)
    if isinstance(t, Proj) and isinstance(t.body, Pair):
        return t.body.left if t.index == 1 else t.body.right
    if isinstance(t, Case) and isinstance(t.scrutinee, Inj):
        inj = t.scrutinee
        if inj.index == 1:
            return var_substitute(t.left_body, t.left_var, inj.body)
        return var_substitute(t.right_body, t.right_var, inj.body)
    return None


def step(t: Term, sys: CompiledAxiomSystem) -> Optional[Term]:
    """One leftmost-outermost rewrite, or None if `t` is normal."""
    contracted = _contract(t, sys)
    if contracted is not None:
        return contracted
    children = [c for c in t.children() if isinstance(c, Term)]
    for i, child in enumerate(children):
        reduced = step(child, sys)
        if reduced is not None:
            replacement = iter(children[:i] + [reduced] + children[i + 1 :])
            return map_children(t, lambda _: next(replacement))
    return None


@dataclass(frozen=True)
class NormalizationResult:
    term: Term
    steps: int
    complete: bool


def normalize(
    t: Term, sys: CompiledAxiomSystem, step_limit: Optional[int] = None
) -> NormalizationResult:
    """Rewrite to normal form, stopping after `step_limit` steps (default `terms.step_limit`)."""
    limit = int(resolve_config_option("terms.step_limit", step_limit))
    steps = 0
    while steps < limit:
        reduced = step(t, sys)
        if reduced is None:
            return NormalizationResult(t, steps, True)
        t = reduced
        steps += 1
    if step(t, sys) is None:
        return NormalizationResult(t, steps, True)
    logger.warning("normalization stopped at the step limit of %d", limit)
    return NormalizationResult(t, steps, False)
