"""Rooted edge-labelled directed graphs and their path languages.

A :class:`LabelledGraph` may be finite and explicit, or the explored part of
an infinite graph.  In the second case the graph carries an *expander*
(a function returning the outgoing edges of a vertex) and every vertex whose
outgoing edges have not been produced yet sits on the *frontier*.  Path
operations never guess what lies beyond the frontier: they raise
:class:`~conepda.errors.FrontierEscape` and leave expansion to the caller
(usually through :func:`ball`).
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .errors import FrontierEscape, NotDeterministic, ResourceLimit
from .words import Alphabet, Word

Vertex = Hashable
Expander = Callable[[Vertex], Iterable[tuple[str, Vertex]]]


def _vertex_cap() -> int | None:
    raw = os.environ.get("CONEPDA_MAX_MEMORY")
    return int(raw) if raw else None


class LabelledGraph:
    """Edge-labelled digraph with root, optional lazy expansion and a frontier.

    ``assume_symmetric`` declares that every edge ``(x, a, y)`` has its
    reversed partner ``(y, a^-1, x)``.  Incoming edges are then read off the
    outgoing ones instead of being stored, which halves memory on large
    Schreier balls.  :func:`check_structure` still verifies the claim on the
    explored part.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        root: Vertex,
        edges: Iterable[tuple[Vertex, str, Vertex]] = (),
        *,
        expander: Expander | None = None,
        frontier: Iterable[Vertex] = (),
        assume_symmetric: bool = False,
    ):
        if assume_symmetric and not alphabet.is_symmetric:
            raise ValueError("assume_symmetric needs an alphabet with involution")
        self.alphabet = alphabet
        self.root = root
        self.assume_symmetric = assume_symmetric
        self._expander = expander
        self._out: dict[Vertex, list[tuple[str, Vertex]]] = {}
        self._in: dict[Vertex, list[tuple[str, Vertex]]] | None = None if assume_symmetric else {}
        self._pending: set[Vertex] = set()
        self._cap = _vertex_cap()
        self._add_vertex(root)
        for x, a, y in edges:
            self.add_edge(x, a, y)
        for v in frontier:
            self._add_vertex(v)
            self._pending.add(v)

    # -- construction -----------------------------------------------------

    def _add_vertex(self, v: Vertex) -> bool:
        if v in self._out:
            return False
        if self._cap is not None and len(self._out) >= self._cap:
            raise ResourceLimit(f"vertex cap {self._cap} (CONEPDA_MAX_MEMORY) exceeded")
        self._out[v] = []
        if self._in is not None:
            self._in[v] = []
        if self._expander is not None:
            self._pending.add(v)
        return True

    def add_vertex(self, v: Vertex) -> None:
        self._add_vertex(v)

    def add_edge(self, x: Vertex, a: str, y: Vertex) -> None:
        if a not in self.alphabet:
            raise ValueError(f"label {a!r} not in {self.alphabet!r}")
        self._add_vertex(x)
        self._add_vertex(y)
        if (a, y) in self._out[x]:
            return
        self._out[x].append((a, y))
        if self._in is not None:
            self._in[y].append((a, x))

    def expand(self, v: Vertex) -> None:
        """Produce the outgoing edges of ``v`` through the expander."""
        if v not in self._pending:
            return
        if self._expander is None:
            raise FrontierEscape(v)
        for a, y in self._expander(v):
            self.add_edge(v, a, y)
        self._pending.discard(v)

    def mark_frontier(self, v: Vertex) -> None:
        self._add_vertex(v)
        self._pending.add(v)

    # -- queries ------------------------------------------------------------

    @property
    def lazy(self) -> bool:
        return self._expander is not None

    @property
    def frontier(self) -> frozenset:
        return frozenset(self._pending)

    def is_complete(self, v: Vertex) -> bool:
        return v in self._out and v not in self._pending

    @property
    def vertices(self) -> list:
        return list(self._out)

    def __contains__(self, v) -> bool:
        return v in self._out

    def __len__(self) -> int:
        return len(self._out)

    def edges(self) -> Iterator[tuple[Vertex, str, Vertex]]:
        for x, outs in self._out.items():
            for a, y in outs:
                yield x, a, y

    def edge_count(self) -> int:
        return sum(len(o) for o in self._out.values())

    def known_out_edges(self, v: Vertex) -> list[tuple[str, Vertex]]:
        return self._out[v]

    def out_edges(self, v: Vertex) -> list[tuple[str, Vertex]]:
        if v not in self._out or v in self._pending:
            raise FrontierEscape(v)
        return self._out[v]

    def in_edges(self, v: Vertex) -> list[tuple[str, Vertex]]:
        """Pairs ``(a, x)`` with ``(x, a, v)`` an edge."""
        if self._in is not None:
            if v not in self._in:
                raise FrontierEscape(v)
            return self._in[v]
        inv = self.alphabet.inverse
        return [(inv(a), y) for a, y in self.out_edges(v)]

    def targets(self, v: Vertex, a: str) -> list[Vertex]:
        return [y for b, y in self.out_edges(v) if b == a]

    def target(self, v: Vertex, a: str) -> Vertex | None:
        """The unique ``a``-successor of ``v`` (deterministic graphs)."""
        found = None
        for b, y in self.out_edges(v):
            if b == a:
                if found is not None:
                    raise NotDeterministic(f"two {a!r}-edges leave {v!r}")
                found = y
        return found

    def neighbours(self, v: Vertex) -> set:
        """Neighbours in the underlying undirected graph (known edges only)."""
        nb = {y for _, y in self._out.get(v, ())}
        if self._in is not None:
            nb.update(x for _, x in self._in.get(v, ()))
        return nb

    def copy(self) -> "LabelledGraph":
        g = LabelledGraph(
            self.alphabet,
            self.root,
            expander=self._expander,
            assume_symmetric=self.assume_symmetric,
        )
        g._pending = set()
        for v in self._out:
            g._add_vertex(v)
        g._pending = set(self._pending)
        for x, a, y in self.edges():
            g.add_edge(x, a, y)
        return g

    def rerooted(self, root: Vertex) -> "LabelledGraph":
        g = self.copy()
        g.root = root
        return g

    def expand_ball(self, centers: Iterable[Vertex], radius: int) -> None:
        """Expand every vertex within distance ``radius`` of ``centers``."""
        seen = {}
        queue = deque()
        for c in centers:
            self._add_vertex(c)
            seen[c] = 0
            queue.append(c)
        while queue:
            v = queue.popleft()
            d = seen[v]
            if d > radius:
                continue
            if v in self._pending:
                self.expand(v)
            for y in self.neighbours(v):
                if y not in seen:
                    seen[y] = d + 1
                    queue.append(y)

    def __repr__(self) -> str:
        return (
            f"LabelledGraph(|V|={len(self)}, |E|={self.edge_count()}, "
            f"root={self.root!r}, frontier={len(self._pending)})"
        )


@dataclass(frozen=True)
class StructureReport:
    deterministic: bool
    fully_labelled: bool
    symmetric: bool

    @property
    def fully_deterministic(self) -> bool:
        return self.deterministic and self.fully_labelled


def check_structure(g: LabelledGraph) -> StructureReport:
    """Determinism, full labelling and symmetry on the explored region.

    Full labelling is only asserted at complete vertices; symmetry of an edge
    is only checked when its terminal vertex is complete.
    """
    deterministic = True
    fully_labelled = True
    symmetric = g.alphabet.is_symmetric
    letters = set(g.alphabet)
    for v in g.vertices:
        labels = [a for a, _ in g.known_out_edges(v)]
        if len(labels) != len(set(labels)):
            deterministic = False
        if g.is_complete(v) and set(labels) != letters:
            fully_labelled = False
    if symmetric:
        inv = g.alphabet.inverse
        for x, a, y in g.edges():
            if g.is_complete(y) and (inv(a), x) not in g.known_out_edges(y):
                symmetric = False
                break
    return StructureReport(deterministic, fully_labelled, symmetric)


def step(g: LabelledGraph, x: Vertex, w: Sequence[str]) -> frozenset:
    """The set ``x^w`` of endpoints of paths from ``x`` labelled ``w``."""
    current = {x}
    for a in w:
        nxt = set()
        for v in current:
            nxt.update(y for b, y in g.out_edges(v) if b == a)
        current = nxt
        if not current:
            break
    return frozenset(current)


def distances(g: LabelledGraph, centers: Iterable[Vertex], limit: int | None = None) -> dict:
    """BFS distance to ``centers`` in the symmetrised edge relation.

    Only known edges are used; vertices are not expanded.
    """
    dist = {}
    queue = deque()
    for c in centers:
        dist[c] = 0
        queue.append(c)
    while queue:
        v = queue.popleft()
        d = dist[v]
        if limit is not None and d >= limit:
            continue
        for y in g.neighbours(v):
            if y not in dist:
                dist[y] = d + 1
                queue.append(y)
    return dist


def _distances_to(g: LabelledGraph, y: Vertex, limit: int) -> dict:
    """Directed distance from each vertex to ``y`` (reverse BFS), up to limit."""
    dist = {y: 0}
    queue = deque([y])
    while queue:
        v = queue.popleft()
        d = dist[v]
        if d >= limit:
            continue
        for _, x in g.in_edges(v):
            if x not in dist:
                dist[x] = d + 1
                queue.append(x)
    return dist


def enumerate_loop_language(g: LabelledGraph, x: Vertex, y: Vertex, max_len: int) -> set:
    """All words ``w`` with ``|w| <= max_len`` and ``y`` in ``x^w``."""
    if g.lazy:
        g.expand_ball([x, y], max_len)
    to_y = _distances_to(g, y, max_len)
    found: set = set()
    stack = [(x, ())]
    while stack:
        v, w = stack.pop()
        r = max_len - len(w)
        if to_y.get(v, max_len + 1) > r:
            continue
        if v == y:
            found.add(w)
        if r == 0:
            continue
        for a, u in g.out_edges(v):
            stack.append((u, w + (a,)))
    return found


@dataclass
class GraphBall:
    graph: LabelledGraph
    centers: frozenset
    radius: int
    distance: dict

    @property
    def members(self) -> frozenset:
        return frozenset(self.distance)

    def __contains__(self, v) -> bool:
        return v in self.distance

    def __len__(self) -> int:
        return len(self.distance)


def ball(g: LabelledGraph, centers: Iterable[Vertex], radius: int) -> GraphBall:
    """``B(F, n) = {x : d(x, F) <= n}``, expanding lazy graphs as needed."""
    centers = list(centers)
    if not centers:
        raise ValueError("ball needs at least one center")
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if g.lazy:
        g.expand_ball(centers, radius)
    dist = distances(g, centers, radius)
    for v, d in dist.items():
        if d < radius and not g.is_complete(v):
            raise FrontierEscape(v)
    return GraphBall(g, frozenset(centers), radius, {v: d for v, d in dist.items() if d <= radius})
