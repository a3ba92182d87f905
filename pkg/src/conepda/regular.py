"""Finite automata and the finite-index case.

When ``K`` has finite index the Schreier graph is finite and, with the root
as its only final state, it is a deterministic automaton for the word
problem.  Conversely any reduced deterministic automaton for the word
problem maps onto the Schreier graph by ``kappa``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .backends import CosetSpace, schreier_graph
from .errors import EmptyLanguage, LanguageMismatch, NotDeterministic, NotWellDefined
from .graph import LabelledGraph, check_structure
from .registry import language_construction
from .words import Alphabet, format_word


class Dfa:
    """A finite deterministic automaton ``(X, o, F)`` over a labelled graph."""

    def __init__(self, graph: LabelledGraph, initial: Hashable | None = None, finals: Iterable = ()):
        if graph.frontier:
            raise ValueError("automaton graph must be finite (empty frontier)")
        if not check_structure(graph).deterministic:
            raise NotDeterministic("automaton graph has two equally labelled edges at a vertex")
        self.graph = graph
        self.initial = graph.root if initial is None else initial
        if self.initial not in graph:
            raise ValueError("initial state is not a vertex")
        self.finals = frozenset(finals)
        if not self.finals <= set(graph.vertices):
            raise ValueError("final states must be vertices")
        self._delta = {(x, a): y for x, a, y in graph.edges()}

    @property
    def alphabet(self) -> Alphabet:
        return self.graph.alphabet

    @property
    def states(self) -> list:
        return self.graph.vertices

    def __len__(self):
        return len(self.graph)

    def __repr__(self):
        return f"Dfa(|Q|={len(self)}, |F|={len(self.finals)})"

    def run(self, w: Sequence[str]):
        """Final state reached on ``w`` or None if the run blocks."""
        x = self.initial
        for a in w:
            x = self._delta.get((x, a))
            if x is None:
                return None
        return x

    def accepts(self, w: Sequence[str]) -> bool:
        return self.run(w) in self.finals

    def next(self, x, a):
        return self._delta.get((x, a))


@dataclass(frozen=True)
class InfiniteIndexWitness:
    """The Schreier graph did not close within the radius cap."""

    radius: int
    explored: int
    frontier: int

    def __str__(self):
        return f"not closed within radius {self.radius}: {self.explored} cosets seen, {self.frontier} unexpanded"


def _close(space: CosetSpace, cap: int):
    g = schreier_graph(space)
    depth = {space.root_key: 0}
    queue = deque([space.root_key])
    while queue:
        v = queue.popleft()
        if depth[v] > cap:
            continue
        g.expand(v)
        for _, y in g.out_edges(v):
            if y not in depth:
                depth[y] = depth[v] + 1
                queue.append(y)
    return g


@language_construction
def schreier_to_dfa(space: CosetSpace, radius_cap: int = 8):
    """``Dfa(X, o, {o})`` if the Schreier graph closes within the cap, else a witness."""
    g = _close(space, radius_cap)
    if g.frontier:
        return InfiniteIndexWitness(radius_cap, len(g), len(g.frontier))
    return Dfa(g, space.root_key, {space.root_key})


def finite_index_check(space: CosetSpace, cap: int = 8):
    """``("finite", n)`` when the Schreier graph closes with ``n`` cosets, else ``("unknown", None)``."""
    d = schreier_to_dfa(space, cap)
    if isinstance(d, Dfa):
        return ("finite", len(d))
    return ("unknown", None)


@language_construction
def reduce_dfa(d: Dfa) -> Dfa:
    """Keep exactly the states on some path from the initial state to a final state."""
    g = d.graph
    reach = {d.initial}
    queue = deque([d.initial])
    while queue:
        v = queue.popleft()
        for _, y in g.out_edges(v):
            if y not in reach:
                reach.add(y)
                queue.append(y)
    back = set(f for f in d.finals if f in reach)
    queue = deque(back)
    while queue:
        v = queue.popleft()
        for _, x in g.in_edges(v):
            if x in reach and x not in back:
                back.add(x)
                queue.append(x)
    useful = reach & back
    if not useful:
        raise EmptyLanguage("automaton accepts no word")
    h = LabelledGraph(g.alphabet, d.initial)
    for v in g.vertices:
        if v in useful:
            h.add_vertex(v)
    for x, a, y in g.edges():
        if x in useful and y in useful:
            h.add_edge(x, a, y)
    return Dfa(h, d.initial, d.finals & useful)


@dataclass
class KappaResult:
    mapping: dict
    surjective: bool
    injective: bool
    label_preserving: bool
    witnesses: dict

    @property
    def is_homomorphism(self) -> bool:
        return self.label_preserving


def _words_to_states(d: Dfa, per_state: int, max_len: int, budget: int = 200_000):
    """First ``per_state`` words in shortlex order reaching each state."""
    found: dict = {}
    layer = [((), d.initial)]
    found.setdefault(d.initial, []).append(())
    letters = list(d.alphabet)
    work = 0
    for _ in range(max_len):
        nxt = []
        for w, x in layer:
            for a in letters:
                y = d.next(x, a)
                if y is None:
                    continue
                u = w + (a,)
                bucket = found.setdefault(y, [])
                if len(bucket) < per_state:
                    bucket.append(u)
                nxt.append((u, y))
                work += 1
        if all(len(found.get(s, ())) >= per_state for s in d.states) or work > budget:
            break
        layer = nxt
    return found


def kappa_homomorphism(d: Dfa, space: CosetSpace, check_len: int = 10, alternatives: int = 5) -> KappaResult:
    """The map ``kappa: state -> coset`` of a reduced automaton for the word problem.

    Raises :class:`LanguageMismatch` when ``d`` disagrees with the coset
    oracle on some word of length ``<= check_len``, and
    :class:`NotWellDefined` when two words reaching one state give different
    cosets.
    """
    if set(d.alphabet) != set(space.alphabet):
        raise LanguageMismatch("automaton and coset space use different alphabets")
    # language check by walking the word trie once
    stack = [((), d.initial, space.root_key)]
    while stack:
        w, x, k = stack.pop()
        if (x in d.finals) != (k == space.root_key):
            raise LanguageMismatch(f"automaton and word problem disagree on '{format_word(w)}'")
        if len(w) == check_len:
            continue
        for a in d.alphabet:
            # a blocked run (x is None) keeps rejecting, so its extensions are still checked
            y = None if x is None else d.next(x, a)
            stack.append((w + (a,), y, space.act(k, a)))
    words = _words_to_states(d, alternatives + 1, max(2 * len(d) + 2, 6))
    mapping = {}
    for y in d.states:
        ws = words.get(y)
        if not ws:
            raise NotWellDefined(f"state {y!r} is unreachable")
        keys = {space.key_of(w) for w in ws}
        if len(keys) > 1:
            raise NotWellDefined(f"words reaching {y!r} lie in different cosets")
        mapping[y] = keys.pop()
    label_preserving = all(space.act(mapping[x], a) == mapping[y] for x, a, y in d.graph.edges())
    if not label_preserving:
        raise NotWellDefined("kappa does not carry automaton edges to Schreier graph edges")
    closed = _close(space, max(len(d), 1) + 1)
    image = set(mapping.values())
    surjective = not closed.frontier and image == set(closed.vertices)
    injective = len(image) == len(mapping)
    return KappaResult(mapping, surjective, injective, label_preserving, {y: words[y][0] for y in d.states})
