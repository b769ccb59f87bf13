"""Forwarding networks: the agent lists along which claims are passed on.

A path is written receiver first: `(a, x, c)` carries a claim from `c` through `x` to `a`.
Graph edges are pairs `(sender, receiver)`.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import (
    Deque,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Sequence,
    Set,
    Tuple,
)

from trustlogic.logic.contexts import validate_agent_id

logger = logging.getLogger(__name__)

Path = Tuple[str, ...]
Edge = Tuple[str, str]

SHORTEST = "shortest"
ACYCLIC = "acyclic"


class NetworkError(ValueError):
    """Repeating or empty path, or a cyclic graph where an acyclic one is required."""


def _check_path(path: Sequence[str]) -> Path:
    path = tuple(path)
    if not path:
        raise NetworkError("Forwarding paths must be non-empty")
    if len(set(path)) != len(path):
        raise NetworkError(f"Forwarding path repeats an agent: {' '.join(path)}")
    for agent in path:
        validate_agent_id(agent)
    return path


@dataclass(frozen=True)
class ForwardingNetwork:
    """Set of non-empty, non-repeating agent lists.

    Build closed networks with `close_forwarding`, `shortest_paths_network` or
    `acyclic_paths_network`; the constructor validates the lists only.
    """

    paths: FrozenSet[Path] = frozenset()
    _by_ends: Dict[Tuple[str, str], List[Path]] = field(
        default_factory=dict, init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        for p in self.paths:
            _check_path(p)
        by_ends: Dict[Tuple[str, str], List[Path]] = {}
        for p in sorted(self.paths):
            by_ends.setdefault((p[0], p[-1]), []).append(p)
        object.__setattr__(self, "_by_ends", by_ends)

    @property
    def agents(self) -> List[str]:
        return sorted({a for p in self.paths for a in p})

    def paths_between(self, receiver: str, sender: str) -> List[Path]:
        """Paths carrying claims from `sender` to `receiver`, sorted."""
        return list(self._by_ends.get((receiver, sender), ()))

    def is_forwarding_network(self) -> bool:
        """Check sublist closure and splice closure."""
        for p in self.paths:
            if len(p) > 1 and (p[1:] not in self.paths or p[:-1] not in self.paths):
                return False
        for p in self.paths:
            for i, j, q in self._splice_sites(p):
                spliced = p[:i] + q + p[j + 1 :]
                if spliced not in self.paths:
                    return False
        return True

    def _splice_sites(self, p: Path) -> Iterator[Tuple[int, int, Path]]:
        for i in range(len(p)):
            for j in range(i + 1, len(p)):
                for q in self._by_ends.get((p[i], p[j]), ()):
                    yield i, j, q

    def render(self) -> List[str]:
        return [" ".join(p) for p in sorted(self.paths, key=lambda p: (len(p), p))]

    def __contains__(self, path: object) -> bool:
        return path in self.paths

    def __iter__(self) -> Iterator[Path]:
        return iter(sorted(self.paths))

    def __len__(self) -> int:
        return len(self.paths)


def close_forwarding(seed: Iterable[Sequence[str]]) -> ForwardingNetwork:
    """Least superset of `seed` closed under sublists and splicing.

    Splices that would repeat an agent have no non-repeating result and are skipped
    with a warning.

    Raises:
        NetworkError: A seed list is empty or repeats an agent.

    """
    paths: Set[Path] = {_check_path(p) for p in seed}
    dropped: Set[Path] = set()
    changed = True
    while changed:
        changed = False
        for p in sorted(paths):
            if len(p) > 1:
                for sub in (p[1:], p[:-1]):
                    if sub not in paths:
                        paths.add(sub)
                        changed = True
        network = ForwardingNetwork(frozenset(paths))
        for p in sorted(paths):
            for i, j, q in network._splice_sites(p):
                spliced = p[:i] + q + p[j + 1 :]
                if spliced in paths:
                    continue
                if len(set(spliced)) != len(spliced):
                    if spliced not in dropped:
                        dropped.add(spliced)
                        logger.warning(
                            "dropping splice %s: it repeats an agent", " ".join(spliced)
                        )
                    continue
                paths.add(spliced)
                changed = True
    return ForwardingNetwork(frozenset(paths))


def _adjacency(vertices: Iterable[str], edges: Iterable[Edge]) -> Dict[str, List[str]]:
    adjacency: Dict[str, List[str]] = {validate_agent_id(v): [] for v in vertices}
    for sender, receiver in edges:
        adjacency.setdefault(validate_agent_id(sender), [])
        adjacency.setdefault(validate_agent_id(receiver), [])
        if receiver not in adjacency[sender]:
            adjacency[sender].append(receiver)
    for targets in adjacency.values():
        targets.sort()
    return adjacency


def shortest_paths_network(
    edges: Iterable[Edge], vertices: Iterable[str] = ()
) -> ForwardingNetwork:
    """All shortest paths between all ordered vertex pairs, plus every singleton.

    Args:
        edges (iterable): Pairs `(sender, receiver)`.
        vertices (iterable): Extra vertices without edges.

    Returns:
        ForwardingNetwork: Closed under sublists and splicing.

    """
    adjacency = _adjacency(vertices, edges)
    paths: Set[Path] = set()
    for source in adjacency:
        dist: Dict[str, int] = {source: 0}
        preds: Dict[str, List[str]] = {source: []}
        queue: Deque[str] = deque([source])
        while queue:
            v = queue.popleft()
            for w in adjacency[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    preds[w] = [v]
                    queue.append(w)
                elif dist[w] == dist[v] + 1:
                    preds[w].append(v)
        for target in dist:
            paths.update(_walk_back(target, preds))
    logger.debug("shortest-path network: %d paths over %d agents", len(paths), len(adjacency))
    return ForwardingNetwork(frozenset(paths))


def _walk_back(target: str, preds: Dict[str, List[str]]) -> Iterator[Path]:
    """Receiver-first paths from the BFS source to `target`."""
    if not preds[target]:
        yield (target,)
        return
    for pred in preds[target]:
        for rest in _walk_back(pred, preds):
            yield (target,) + rest


def acyclic_paths_network(
    edges: Iterable[Edge], vertices: Iterable[str] = ()
) -> ForwardingNetwork:
    """All paths of an acyclic graph.

    Raises:
        NetworkError: The graph has a cycle.

    """
    adjacency = _adjacency(vertices, edges)
    _check_acyclic(adjacency)
    paths: Set[Path] = set()

    def extend(path: Path) -> None:
        paths.add(path)
        for nxt in adjacency[path[0]]:
            extend((nxt,) + path)

    for v in adjacency:
        extend((v,))
    return ForwardingNetwork(frozenset(paths))


def _check_acyclic(adjacency: Dict[str, List[str]]) -> None:
    indegree = {v: 0 for v in adjacency}
    for targets in adjacency.values():
        for w in targets:
            indegree[w] += 1
    ready = [v for v, d in indegree.items() if d == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for w in adjacency[v]:
            indegree[w] -= 1
            if indegree[w] == 0:
                ready.append(w)
    if seen != len(adjacency):
        cyclic = sorted(v for v, d in indegree.items() if d > 0)
        raise NetworkError(f"Graph has a cycle through {', '.join(cyclic)}")


def reachable_through(network: ForwardingNetwork, a: str, b: str, c: str) -> bool:
    """True iff some path `(a, ..., b, ..., c)` has `b` strictly inside."""
    return any(b in p[1:-1] for p in network.paths_between(a, c))


@dataclass(frozen=True)
class TrustEdge:
    """Order-n trust of `truster` in `trustee` regarding predicate family `predicate`."""

    order: int
    truster: str
    trustee: str
    predicate: str = "P"

    def __post_init__(self) -> None:
        if not isinstance(self.order, int) or self.order < 0:
            raise ValueError(f"Trust order must be a natural number, got {self.order!r}")

    def render(self) -> str:
        return f"{self.order} {self.truster} {self.trustee} {self.predicate}"

    def sort_key(self) -> Tuple[str, int, str, str]:
        return (self.predicate, self.order, self.truster, self.trustee)


@dataclass(frozen=True)
class TrustGraphSpec:
    """Communication graph, path seeds and asserted shared trust.

    Attributes:
        agents (tuple): Vertices.
        edges (tuple): Pairs `(sender, receiver)`.
        mode (str): 'shortest' or 'acyclic'.
        asserted (tuple): Trust edges assumed shared over the network.
        seeds (tuple): Extra paths closed into the network.

    """

    agents: Tuple[str, ...] = ()
    edges: Tuple[Edge, ...] = ()
    mode: str = SHORTEST
    asserted: Tuple[TrustEdge, ...] = ()
    seeds: Tuple[Path, ...] = ()

    def __post_init__(self) -> None:
        if self.mode not in (SHORTEST, ACYCLIC):
            raise ValueError(f"Unknown network mode {self.mode!r}: use 'shortest' or 'acyclic'")

    def network(self) -> ForwardingNetwork:
        if self.mode == ACYCLIC:
            base = acyclic_paths_network(self.edges, self.agents)
        else:
            base = shortest_paths_network(self.edges, self.agents)
        if not self.seeds:
            return base
        return close_forwarding(list(base.paths) + list(self.seeds))

