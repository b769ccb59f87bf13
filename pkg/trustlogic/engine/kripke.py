"""Kripke frames for the modal logic: satisfaction, conformance and bounded countermodel search.

A frame has a preorder of worlds, a persistent valuation of tokens and one relation per
modality satisfying the back condition: `v <= w` and `w R w'` give some `v'` with
`v R v'` and `v' <= w'`. A frame conforms to an axiom system when every generator
`M => N1 ... Nn` has `R_N1 ; ... ; R_Nn` contained in `R_M`.
"""

import itertools
import json
import logging
import random
from dataclasses import dataclass, field
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from trustlogic._options import resolve_config_option
from trustlogic.engine.axioms import CompiledAxiomSystem, UnfoldingAxiom
from trustlogic.logic.contexts import FlatContext, Sequent
from trustlogic.logic.formulas import (
    And,
    Bot,
    Formula,
    Imp,
    Modal,
    Modality,
    Named,
    Or,
    Token,
    Top,
    modalities,
    render_modality,
    tokens,
)
from trustlogic.logic.syntax import parse_modality

logger = logging.getLogger(__name__)

World = Union[int, str]
Relation = FrozenSet[Tuple[World, World]]


@dataclass(frozen=True)
class KripkeFrame:
    """Attributes:
    worlds (tuple): World labels.
    leq (frozenset): The preorder, as pairs (v, w) with v <= w.
    valuation (dict): Token name -> worlds where it holds; absent tokens hold nowhere.
    rel (dict): Modality -> accessibility pairs; absent modalities relate nothing.
    """

    worlds: Tuple[World, ...]
    leq: Relation
    valuation: Mapping[str, FrozenSet[World]] = field(default_factory=dict)
    rel: Mapping[Modality, Relation] = field(default_factory=dict)
    _truth: Dict[Formula, FrozenSet[World]] = field(
        default_factory=dict, repr=False, compare=False
    )

    def up(self, w: World) -> List[World]:
        return [v for v in self.worlds if (w, v) in self.leq]

    def relation(self, m: Modality) -> Relation:
        return self.rel.get(m, frozenset())

    def successors(self, m: Modality, w: World) -> List[World]:
        return [v for (u, v) in self.relation(m) if u == w]

    def check_invariants(self) -> List[str]:
        """Descriptions of every violated frame condition; empty when the frame is well formed."""
        problems: List[str] = []
        worlds = set(self.worlds)
        for w in self.worlds:
            if (w, w) not in self.leq:
                problems.append(f"preorder not reflexive at {w!r}")
        for u, v in self.leq:
            if u not in worlds or v not in worlds:
                problems.append(f"preorder mentions unknown world in {(u, v)!r}")
            for w in self.up(v):
                if (u, w) not in self.leq:
                    problems.append(f"preorder not transitive: {u!r} <= {v!r} <= {w!r}")
        for name, holds in self.valuation.items():
            for v, w in self.leq:
                if v in holds and w not in holds:
                    problems.append(f"token {name} not persistent from {v!r} to {w!r}")
        for m in self.rel:
            if not back_condition(self.leq, self.relation(m)):
                problems.append(f"relation {render_modality(m)} breaks the back condition")
        return problems

    def to_dict(self) -> Dict[str, Any]:
        return {
            "worlds": list(self.worlds),
            "leq": sorted([list(p) for p in self.leq], key=str),
            "valuation": {k: sorted(v, key=str) for k, v in sorted(self.valuation.items())},
            "relations": {
                render_modality(m): sorted([list(p) for p in r], key=str)
                for m, r in sorted(self.rel.items(), key=lambda item: render_modality(item[0]))
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "KripkeFrame":
        return cls(
            worlds=tuple(data["worlds"]),
            leq=frozenset(tuple(p) for p in data["leq"]),
            valuation={k: frozenset(v) for k, v in data.get("valuation", {}).items()},
            rel={
                parse_modality(k): frozenset(tuple(p) for p in v)
                for k, v in data.get("relations", {}).items()
            },
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def back_condition(leq: Iterable[Tuple[World, World]], r: Relation) -> bool:
    leq = frozenset(leq)
    for v, w in leq:
        for u, w2 in r:
            if u != w:
                continue
            if not any(x == v and (v2, w2) in leq for x, v2 in r):
                return False
    return True


def compose(*relations: Relation) -> Set[Tuple[World, World]]:
    """Relational composition, left to right."""
    result: Set[Tuple[World, World]] = set()
    if not relations:
        return result
    result = set(relations[0])
    for r in relations[1:]:
        result = {(u, w) for (u, v) in result for (v2, w) in r if v == v2}
    return result


# ---------------------------------------------------------------------------+
#                                Satisfaction                                |
# ---------------------------------------------------------------------------+


def truth_set(frame: KripkeFrame, f: Formula) -> FrozenSet[World]:
    """Worlds satisfying `f`, memoised on the frame."""
    cached = frame._truth.get(f)
    if cached is not None:
        return cached
    result: FrozenSet[World]
    if isinstance(f, Top):
        result = frozenset(frame.worlds)
    elif isinstance(f, Bot):
        result = frozenset()
    elif isinstance(f, Token):
        result = frozenset(frame.valuation.get(f.name, frozenset()))
    elif isinstance(f, Modal):
        body = truth_set(frame, f.body)
        result = frozenset(
            w for w in frame.worlds if all(v in body for v in frame.successors(f.modality, w))
        )
    elif isinstance(f, Imp):
        lhs, rhs = truth_set(frame, f.lhs), truth_set(frame, f.rhs)
        result = frozenset(
            w for w in frame.worlds if all(v not in lhs or v in rhs for v in frame.up(w))
        )
    elif isinstance(f, And):
        result = truth_set(frame, f.lhs) & truth_set(frame, f.rhs)
    elif isinstance(f, Or):
        result = truth_set(frame, f.lhs) | truth_set(frame, f.rhs)
    else:
        raise TypeError(f"Unsupported formula type: {type(f)}")
    frame._truth[f] = result
    return result


def satisfies(frame: KripkeFrame, world: World, f: Formula) -> bool:
    return world in truth_set(frame, f)


def _sequent_parts(seq: Union[Sequent, Tuple[Sequence[Formula], Formula]]) -> Tuple[Tuple[Formula, ...], Formula]:
    if isinstance(seq, Sequent):
        if not isinstance(seq.context, FlatContext):
            raise ValueError("Kripke validation needs a flat sequent")
        return seq.context.formulas, seq.goal
    ctx, goal = seq
    return tuple(ctx), goal


def refuting_worlds(
    frame: KripkeFrame, seq: Union[Sequent, Tuple[Sequence[Formula], Formula]]
) -> List[World]:
    """Worlds satisfying every context formula but not the goal."""
    ctx, goal = _sequent_parts(seq)
    holding = set(frame.worlds)
    for f in ctx:
        holding &= truth_set(frame, f)
    goal_set = truth_set(frame, goal)
    return [w for w in frame.worlds if w in holding and w not in goal_set]


def frame_validates(
    frame: KripkeFrame,
    seq: Union[Sequent, Tuple[Sequence[Formula], Formula]],
    sys: Optional[CompiledAxiomSystem] = None,
) -> bool:
    """True iff every world satisfying the context satisfies the goal.

    Raises:
        ValueError: `sys` is given and the frame does not conform to it.

    """
    if sys is not None and not conforms(frame, sys):
        raise ValueError("Frame does not conform to the axiom system")
    return not refuting_worlds(frame, seq)


# ---------------------------------------------------------------------------+
#                                Conformance                                 |
# ---------------------------------------------------------------------------+


def _generator_holds(frame: KripkeFrame, ax: UnfoldingAxiom) -> bool:
    target = frame.relation(ax.head)
    if not ax.unfolding:
        return all((w, w) in target for w in frame.worlds)
    return compose(*(frame.relation(m) for m in ax.unfolding)) <= target


def conforms(frame: KripkeFrame, sys: CompiledAxiomSystem) -> bool:
    """Check every generator; compositions of conforming unfoldings conform as well."""
    return all(_generator_holds(frame, ax) for ax in sys.generators)


def close_relations(
    worlds: Sequence[World],
    leq: Relation,
    rel: Dict[Modality, Set[Tuple[World, World]]],
    sys: CompiledAxiomSystem,
    fixed: FrozenSet[Modality] = frozenset(),
) -> Dict[Modality, Set[Tuple[World, World]]]:
    """Grow the relations not in `fixed` until they are <=-closed and meet every generator."""
    rel = {m: set(rel.get(m, ())) for m in set(rel) | set(sys.modalities)}
    changed = True
    while changed:
        changed = False
        for m in rel:
            if m in fixed:
                continue
            closed = {(u, w) for (u, v) in leq for (v2, w) in rel[m] if v == v2}
            if not closed <= rel[m]:
                rel[m] |= closed
                changed = True
        for ax in sys.generators:
            if ax.head in fixed:
                continue
            if ax.unfolding:
                needed = compose(*(frozenset(rel.get(m, ())) for m in ax.unfolding))
            else:
                needed = {(w, w) for w in worlds}
            if not needed <= rel[ax.head]:
                rel[ax.head] |= needed
                changed = True
    return rel


def random_frame(
    rng: random.Random,
    sys: CompiledAxiomSystem,
    worlds: Optional[int] = None,
    token_names: Iterable[str] = (),
    density: float = 0.3,
) -> KripkeFrame:
    """Draw a conforming frame with at most `worlds` worlds (default `models.random_frame_worlds`)."""
    n = rng.randint(1, int(resolve_config_option("models.random_frame_worlds", worlds)))
    labels: Tuple[World, ...] = tuple(range(n))
    pairs = {(v, w) for v in labels for w in labels if v == w or rng.random() < density}
    leq = _transitive_closure(labels, pairs)
    valuation = {
        name: frozenset(_up_close(leq, {w for w in labels if rng.random() < 0.5}))
        for name in token_names
    }
    seed = {
        m: {(v, w) for v in labels for w in labels if rng.random() < density / 2}
        for m in sys.sorted_modalities()
    }
    rel = close_relations(labels, leq, seed, sys)
    return KripkeFrame(labels, leq, valuation, {m: frozenset(r) for m, r in rel.items()})


def _transitive_closure(worlds: Sequence[World], pairs: Set[Tuple[World, World]]) -> Relation:
    closure = set(pairs) | {(w, w) for w in worlds}
    for k in worlds:
        for i in worlds:
            if (i, k) not in closure:
                continue
            for j in worlds:
                if (k, j) in closure:
                    closure.add((i, j))
    return frozenset(closure)


def _up_close(leq: Relation, holds: Set[World]) -> Set[World]:
    return holds | {w for (v, w) in leq if v in holds}


# ---------------------------------------------------------------------------+
#                             Countermodel search                            |
# ---------------------------------------------------------------------------+


@dataclass(frozen=True)
class Countermodel:
    frame: KripkeFrame
    world: World

    def to_dict(self) -> Dict[str, Any]:
        return {"world": self.world, "frame": self.frame.to_dict()}

    def render(self) -> str:
        lines = [f"refuted at world {self.world}", f"worlds: {list(self.frame.worlds)}"]
        strict = sorted((v, w) for v, w in self.frame.leq if v != w)
        lines.append(f"order: {strict}")
        for name, holds in sorted(self.frame.valuation.items()):
            lines.append(f"{name}: {sorted(holds)}")
        for m, r in sorted(self.frame.rel.items(), key=lambda item: render_modality(item[0])):
            if r:
                lines.append(f"R[{render_modality(m)}]: {sorted(r)}")
        return "\n".join(lines)


def preorders(n: int) -> Iterator[Relation]:
    """Preorders on worlds 0..n-1, one per isomorphism class."""
    labels = list(range(n))
    off_diagonal = [(v, w) for v in labels for w in labels if v != w]
    seen: Set[Tuple[Tuple[int, int], ...]] = set()
    for mask in range(1 << len(off_diagonal)):
        pairs = {p for i, p in enumerate(off_diagonal) if mask >> i & 1}
        leq = frozenset(pairs | {(w, w) for w in labels})
        if _transitive_closure(labels, set(leq)) != leq:
            continue
        key = min(
            tuple(sorted((perm[v], perm[w]) for v, w in leq))
            for perm in itertools.permutations(labels)
        )
        if key in seen:
            continue
        seen.add(key)
        yield leq


def up_sets(worlds: Sequence[int], leq: Relation) -> List[FrozenSet[int]]:
    found = []
    for mask in range(1 << len(worlds)):
        holds = {w for w in worlds if mask >> w & 1}
        if _up_close(leq, holds) == holds:
            found.append(frozenset(holds))
    return found


def _all_relations(worlds: Sequence[int], leq: Relation) -> List[Relation]:
    pairs = [(v, w) for v in worlds for w in worlds]
    found = []
    for mask in range(1 << len(pairs)):
        r = frozenset(p for i, p in enumerate(pairs) if mask >> i & 1)
        if back_condition(leq, r):
            found.append(r)
    return found


def counterexample_search(
    seq: Union[Sequent, Tuple[Sequence[Formula], Formula]],
    sys: CompiledAxiomSystem,
    max_worlds: Optional[int] = None,
    max_tokens: Optional[int] = None,
    max_assignments: Optional[int] = None,
) -> Optional[Countermodel]:
    """Find a conforming frame and world refuting `seq`, smallest frames first.

    Relations are enumerated for the modalities occurring in the sequent; every other
    modality gets the least relation its generators force. Finding nothing proves
    nothing beyond the bound.

    Args:
        seq (Sequent): Flat sequent to refute.
        sys (CompiledAxiomSystem): Axioms the frame must conform to.
        max_worlds (int): Largest frame tried. Defaults to `models.max_worlds`.
        max_tokens (int): Tokens given non-empty valuations. Defaults to `models.max_tokens`.
        max_assignments (int): Relation assignments tried before giving up.
            Defaults to `models.max_assignments`.

    Returns:
        Countermodel: The first refuting frame and world, or None.

    """
    ctx, goal = _sequent_parts(seq)
    max_worlds = int(resolve_config_option("models.max_worlds", max_worlds))
    max_tokens = int(resolve_config_option("models.max_tokens", max_tokens))
    budget = int(resolve_config_option("models.max_assignments", max_assignments))
    tried = 0
    names: Set[str] = set()
    mods: Set[Modality] = set()
    for f in ctx + (goal,):
        names |= tokens(f)
        mods |= modalities(f)
    token_names = sorted(names)[:max_tokens]
    occurring = sorted(mods, key=render_modality)

    for n in range(1, max_worlds + 1):
        labels = list(range(n))
        for leq in preorders(n):
            candidates = _all_relations(labels, leq)
            valuations = up_sets(labels, leq)
            logger.debug(
                "%d worlds: %d relations, %d up-sets per token", n, len(candidates), len(valuations)
            )
            for choice in itertools.product(candidates, repeat=len(occurring)):
                tried += 1
                if tried > budget:
                    logger.debug("countermodel search gave up after %d assignments", budget)
                    return None
                chosen = dict(zip(occurring, (set(r) for r in choice)))
                rel = close_relations(labels, leq, chosen, sys, fixed=frozenset(occurring))
                frame_rel = {m: frozenset(r) for m, r in rel.items()}
                probe = KripkeFrame(tuple(labels), leq, {}, frame_rel)
                if not conforms(probe, sys) or probe.check_invariants():
                    continue
                for values in itertools.product(valuations, repeat=len(token_names)):
                    frame = KripkeFrame(
                        tuple(labels), leq, dict(zip(token_names, values)), frame_rel
                    )
                    worlds = refuting_worlds(frame, (ctx, goal))
                    if worlds:
                        return Countermodel(frame, worlds[0])
    return None


def lemma_counter_frame() -> KripkeFrame:
    """Two worlds v, w; R_M = {(v, w)}; r holds at w only; t holds nowhere.

    With no axioms on M it satisfies both validities of t and t -> r at v but not the
    validity of r, so validity does not distribute over implication.
    """
    m = Named("M")
    return KripkeFrame(
        worlds=("v", "w"),
        leq=frozenset({("v", "v"), ("w", "w")}),
        valuation={"t": frozenset(), "r": frozenset({"w"})},
        rel={m: frozenset({("v", "w")})},
    )
