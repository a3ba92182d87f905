"""Pushdown automata: simulation, synthesis from cone tables, translation, lifting.

Semantics.  A configuration is ``(state, stack)`` with the top of the stack
at the right end.  With a non-empty stack whose top is ``z`` the automaton
uses ``delta(p, a, z)`` (reading ``a``) or ``delta(p, eps, z)``; a chosen
pair ``(q, push)`` replaces ``z`` by the word ``push``.  With an empty stack
it uses ``delta(p, a, eps)`` and ``delta(p, eps, eps)`` and pushes ``push``.
A word is accepted when some run consumes it and ends in a final state with
an empty stack.

Transition maps are dicts ``(p, letter or None, top or None) -> tuple of
(q, push)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Hashable, Iterable, Mapping, Sequence

from .cones import ConeTypeTable, classify_cone_types, cone_moves
from .errors import EmptyImage, InvalidTable, NotCertified
from .grammar import Cfg
from .graph import LabelledGraph, ball
from .registry import language_construction
from .words import Alphabet

EPS = None


class Verdict(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    UNKNOWN = "unknown"


class Pda:
    """``(Q, Sigma, Z, delta, q0, Q_f, z0)``."""

    def __init__(
        self,
        states: Iterable,
        alphabet: Alphabet | Sequence[str],
        stack_symbols: Iterable,
        transitions: Mapping,
        initial,
        finals: Iterable,
        start_symbol,
    ):
        self.states = frozenset(states)
        self.alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(list(alphabet))
        self.stack_symbols = frozenset(stack_symbols)
        self.initial = initial
        self.finals = frozenset(finals)
        self.start_symbol = start_symbol
        delta = {}
        for (p, a, z), options in transitions.items():
            if p not in self.states:
                raise ValueError(f"transition from undeclared state {p!r}")
            if a is not None and a not in self.alphabet:
                raise ValueError(f"transition on undeclared letter {a!r}")
            if z is not None and z not in self.stack_symbols:
                raise ValueError(f"transition on undeclared stack symbol {z!r}")
            opts = []
            for q, push in options:
                push = tuple(push)
                if q not in self.states:
                    raise ValueError(f"transition into undeclared state {q!r}")
                for s in push:
                    if s not in self.stack_symbols:
                        raise ValueError(f"push of undeclared stack symbol {s!r}")
                if (q, push) not in opts:
                    opts.append((q, push))
            if opts:
                delta[(p, a, z)] = tuple(opts)
        self.delta = delta
        if initial not in self.states:
            raise ValueError("initial state not declared")
        if not self.finals <= self.states:
            raise ValueError("final states must be declared states")
        if start_symbol not in self.stack_symbols:
            raise ValueError("start symbol must be a stack symbol")

    def __repr__(self):
        return (
            f"Pda(|Q|={len(self.states)}, |Z|={len(self.stack_symbols)}, "
            f"|delta|={sum(len(v) for v in self.delta.values())})"
        )

    def moves(self, p, a, z) -> tuple:
        return self.delta.get((p, a, z), ())

    def transition_count(self) -> int:
        return sum(len(v) for v in self.delta.values())

    def relabeled(self) -> "Pda":
        """Copy with states ``q0, q1, ...`` and stack symbols ``z0, t1, t2, ...``."""
        states = sorted(self.states, key=repr)
        states.remove(self.initial)
        names = {self.initial: "q0"}
        for s in states:
            names[s] = f"q{len(names)}"
        syms = sorted(self.stack_symbols - {self.start_symbol}, key=repr)
        snames = {self.start_symbol: "z0"}
        for s in syms:
            snames[s] = f"t{len(snames)}"
        delta = {}
        for (p, a, z), opts in self.delta.items():
            key = (names[p], a, None if z is None else snames[z])
            delta[key] = tuple((names[q], tuple(snames[s] for s in push)) for q, push in opts)
        return Pda(
            names.values(), self.alphabet, snames.values(), delta, "q0",
            [names[f] for f in self.finals], "z0",
        )


# ---------------------------------------------------------------------------
# simulation


def _apply(stack, push, top):
    return stack[:-1] + push if top is not None else stack + push


class PdaAcceptor:
    """Incremental simulation: a node is the set of configurations after a prefix.

    Nodes are ``(configs, pruned)``; ``pruned`` records that some
    configuration exceeded ``max_stack`` or the step budget was exhausted,
    in which case a negative answer degrades to UNKNOWN.
    """

    def __init__(self, m: Pda, max_stack: int = 64, max_steps: int = 100_000):
        self.m = m
        self.max_stack = max_stack
        self.max_steps = max_steps

    def _closure(self, configs, pruned):
        m = self.m
        seen = set(configs)
        stack = list(configs)
        steps = 0
        while stack:
            p, st = stack.pop()
            steps += 1
            if steps > self.max_steps:
                return frozenset(seen), True
            top = st[-1] if st else None
            for q, push in m.delta.get((p, None, top), ()):
                new = _apply(st, push, top)
                if len(new) > self.max_stack:
                    pruned = True
                    continue
                c = (q, new)
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return frozenset(seen), pruned

    def start(self):
        return self._closure({(self.m.initial, (self.m.start_symbol,))}, False)

    def step(self, node, a):
        configs, pruned = node
        out = set()
        delta = self.m.delta
        for p, st in configs:
            top = st[-1] if st else None
            for q, push in delta.get((p, a, top), ()):
                new = _apply(st, push, top)
                if len(new) > self.max_stack:
                    pruned = True
                    continue
                out.add((q, new))
        return self._closure(out, pruned)

    def verdict(self, node) -> Verdict:
        configs, pruned = node
        finals = self.m.finals
        if any(not st and p in finals for p, st in configs):
            return Verdict.ACCEPT
        return Verdict.UNKNOWN if pruned else Verdict.REJECT

    def dead(self, node) -> bool:
        configs, pruned = node
        return not configs and not pruned

    def accepts(self, w) -> Verdict:
        node = self.start()
        for a in w:
            if self.dead(node):
                return Verdict.REJECT
            node = self.step(node, a)
        return self.verdict(node)


def pda_accepts(m: Pda, w: Sequence[str], max_steps: int = 100_000, max_stack: int = 64) -> Verdict:
    """Accept, reject or unknown (budget exhausted) for the word ``w``."""
    return PdaAcceptor(m, max_stack=max_stack, max_steps=max_steps).accepts(tuple(w))


def pda_is_deterministic(m: Pda) -> bool:
    """``|delta(p, a, z)| + |delta(p, eps, z)| <= 1`` for all p, a, z (z may be eps)."""
    keys = {(p, z) for (p, _, z) in m.delta}
    for p, z in keys:
        eps = len(m.delta.get((p, None, z), ()))
        if eps > 1:
            return False
        for a in m.alphabet:
            if len(m.delta.get((p, a, z), ())) + eps > 1:
                return False
    return True


# ---------------------------------------------------------------------------
# synthesis from a cone table


@language_construction
def build_pda_from_cones(table: ConeTypeTable, g: LabelledGraph | None = None, x0=None, y0=None) -> Pda:
    """Pushdown automaton accepting ``L_{x0, y0}`` built from a certified cone table.

    States are pairs ``(type, vertex)`` with the vertex on the boundary of the
    type's representative (type 0 stands for ``F`` itself); stack symbols are
    the successor symbols ``(i, j, k)`` and the start symbol ``("F", x0)``.
    While the path stays in ``F`` the stack is empty; every step away from
    ``F`` pushes the second-order type of the new vertex, every step back
    pops.  If ``x0`` or ``y0`` is outside ``F`` the classification is redone
    with ``F`` replaced by a ball around it.
    """
    if g is not None and g is not table.graph:
        raise ValueError("table was computed for a different graph")
    if not table.certified:
        raise NotCertified(table.status_line())
    x0 = table.centers[0] if x0 is None else x0
    y0 = x0 if y0 is None else y0
    F = set(table.centers)
    if x0 not in F or y0 not in F:
        table = _enlarge(table, [x0, y0])
        F = set(table.centers)
    moves = cone_moves(table)
    states = {(0, x) for x in F}
    for t in table.types[1:]:
        states |= {(t.index, p) for p in t.boundary}
    z0 = ("F", x0)
    symbols = set(table.symbols()) | {z0}
    delta = {}
    for key, opts in moves.items():
        delta[key] = opts
    delta[((0, x0), None, z0)] = (((0, x0), ()),)
    return Pda(states, table.graph.alphabet, symbols, delta, (0, x0), {(0, y0)}, z0)


def _enlarge(table, vertices):
    g = table.graph
    dist = table.distance
    n = 0
    for v in vertices:
        if v not in dist:
            raise NotCertified(f"vertex {v!r} outside the explored region")
        n = max(n, dist[v])
    b = ball(g, table.centers, n)
    centers = sorted(b.members, key=lambda v: (b.distance[v], repr(v)))
    new = classify_cone_types(
        g, centers=centers, max_radius=table.radius + n, depth=table.depth, patience=table.patience
    )
    if not new.certified:
        raise NotCertified("classification with the enlarged set F is not certified: " + new.status_line())
    return new


@language_construction
def synthesize(space_or_graph, x0=None, y0=None, max_radius: int = 8, depth: int = 3):
    """Classify cones of a graph (or a coset space's Schreier graph) and build the PDA."""
    from .backends import CosetSpace, schreier_graph

    g = schreier_graph(space_or_graph) if isinstance(space_or_graph, CosetSpace) else space_or_graph
    x0 = g.root if x0 is None else x0
    y0 = x0 if y0 is None else y0
    centers = [x0] if x0 == y0 else [x0, y0]
    table = classify_cone_types(g, centers=centers, max_radius=max_radius, depth=depth)
    if not table.certified:
        raise NotCertified(table.status_line())
    return build_pda_from_cones(table, g, x0, y0), table


@language_construction
def free_group_pda(alphabet: Alphabet) -> Pda:
    """The classical free-reduction automaton for the free group on ``alphabet``.

    The stack holds the reduced form of the prefix read so far; a letter
    cancels the top when it is its inverse and is pushed otherwise.
    """
    z0 = "z0" if "z0" not in alphabet else ("z0",)
    delta = {("start", None, z0): (("q", ()),)}
    for a in alphabet:
        delta[("q", a, None)] = (("q", (a,)),)
        for z in alphabet:
            delta[("q", a, z)] = (("q", ()),) if z == alphabet.inverse(a) else (("q", (z, a)),)
    return Pda({"start", "q"}, alphabet, set(alphabet) | {z0}, delta, "start", {"q"}, z0)


# ---------------------------------------------------------------------------
# translation along a substitution


@dataclass(frozen=True)
class Pending:
    """Translator state: simulate ``state`` and still feed ``suffix``."""

    state: Hashable
    suffix: tuple


def _tops(m: Pda):
    return list(m.stack_symbols) + [None]


@language_construction
def translate_pda(m: Pda, u: Mapping[str, Sequence[str]], alphabet: Alphabet | None = None) -> Pda:
    """Automaton over the new letters accepting ``{b1..bn : u(b1)..u(bn) in L(m)}``."""
    u = {b: tuple(w) for b, w in u.items()}
    for b, w in u.items():
        if not w:
            raise EmptyImage(f"u({b}) is empty")
        for a in w:
            if a not in m.alphabet:
                raise ValueError(f"u({b}) uses letter {a!r} outside the automaton's alphabet")
    new_alphabet = alphabet or Alphabet(list(u))
    if set(new_alphabet) != set(u):
        raise ValueError("substitution must be defined exactly on the new alphabet")
    delta: dict = {}

    def add(key, opts):
        if opts:
            delta.setdefault(key, [])
            for o in opts:
                if o not in delta[key]:
                    delta[key].append(o)

    suffixes = set()
    for w in u.values():
        for i in range(1, len(w)):
            suffixes.add(w[i:])
    states = set(m.states) | {Pending(p, v) for p in m.states for v in suffixes}
    for p in m.states:
        for z in _tops(m):
            add((p, None, z), m.moves(p, None, z))
            for b, w in u.items():
                if len(w) == 1:
                    add((p, b, z), m.moves(p, w[0], z))
                else:
                    add((p, b, z), [(Pending(q, w[1:]), push) for q, push in m.moves(p, w[0], z)])
            for v in suffixes:
                src = Pending(p, v)
                opts = [(Pending(q, v), push) for q, push in m.moves(p, None, z)]
                if len(v) >= 2:
                    opts += [(Pending(q, v[1:]), push) for q, push in m.moves(p, v[0], z)]
                else:
                    opts += list(m.moves(p, v[0], z))
                add((src, None, z), opts)
    return Pda(states, new_alphabet, m.stack_symbols, delta, m.initial, m.finals, m.start_symbol)


# ---------------------------------------------------------------------------
# finite-index lift


@dataclass
class CosetTable:
    """Right coset representatives of ``H`` in ``G`` and the rewriting data.

    For every representative ``g`` and new letter ``b``:
    ``g psi'(b) = psi(u[g, b]) bar[g, b]`` with ``bar[g, b]`` a representative.
    """

    reps: tuple
    identity: Hashable
    alphabet: Alphabet
    bar: dict
    u: dict

    def validate(self, letters: Alphabet | None = None, check=None) -> None:
        if self.identity not in self.reps:
            raise InvalidTable("identity is not among the representatives")
        if len(set(self.reps)) != len(self.reps):
            raise InvalidTable("repeated representative")
        for g in self.reps:
            for b in self.alphabet:
                if (g, b) not in self.bar or (g, b) not in self.u:
                    raise InvalidTable(f"missing entry for ({g!r}, {b!r})")
                if self.bar[g, b] not in self.reps:
                    raise InvalidTable(f"bar({g!r}, {b!r}) = {self.bar[g, b]!r} is not a representative")
                if letters is not None:
                    for a in self.u[g, b]:
                        if a not in letters:
                            raise InvalidTable(f"u({g!r}, {b!r}) uses unknown letter {a!r}")
                if check is not None and not check(g, b, tuple(self.u[g, b]), self.bar[g, b]):
                    raise InvalidTable(f"entry ({g!r}, {b!r}) fails the group check")
        if check is not None:
            # acting twice must agree with composing the two rewrites
            for g in self.reps:
                for b in self.alphabet:
                    h = self.bar[g, b]
                    for c in self.alphabet:
                        word = tuple(self.u[g, b]) + tuple(self.u[h, c])
                        if not check(g, (b, c), word, self.bar[h, c]):
                            raise InvalidTable(f"composition ({g!r}, {b!r}, {c!r}) is inconsistent")


def coset_table_from_graph(g: LabelledGraph, prefix: str = "g"):
    """Coset table for ``K(X)`` inside the free group from a finite symmetric graph.

    Representatives are the vertices (standing for their spanning-tree
    paths).  The subgroup is generated freely by the words of
    :func:`~conepda.backends.spanning_tree_generators`; its letters are
    ``g1, g1^, g2, ...``.  Returns ``(table, letters, generators)`` where
    ``letters`` is the subgroup's symmetric alphabet.
    """
    from .backends import spanning_tree_edges, spanning_tree_generators

    edges, parent = spanning_tree_edges(g)
    gens = spanning_tree_generators(g)
    letters = Alphabet.symmetric(*(f"{prefix}{i + 1}" for i in range(len(gens))))
    inv = g.alphabet.inverse
    forward = {e: letters.letters[2 * i] for i, e in enumerate(edges)}
    backward = {(y, inv(a), x): letters.inverse(letters.letters[2 * i]) for i, (x, a, y) in enumerate(edges)}
    bar, u = {}, {}
    for x, a, y in g.edges():
        bar[x, a] = y
        if (x, a, y) in forward:
            u[x, a] = (forward[x, a, y],)
        elif (x, a, y) in backward:
            u[x, a] = (backward[x, a, y],)
        else:
            u[x, a] = ()
    reps = tuple(sorted(g.vertices, key=repr))
    return CosetTable(reps, g.root, g.alphabet, bar, u), letters, gens


@dataclass(frozen=True)
class AtCoset:
    state: Hashable
    coset: Hashable


@dataclass(frozen=True)
class PendingAt:
    state: Hashable
    coset: Hashable
    suffix: tuple


@language_construction
def finite_index_lift(m: Pda, table: CosetTable, check=None) -> Pda:
    """Automaton for ``L(G, K, psi')`` from one for ``L(H, K, psi)`` with ``[G:H]`` finite.

    The lifted automaton remembers the current coset ``H g`` in its state and
    feeds ``u(g, b)`` to ``m`` for each input letter ``b``.
    """
    table.validate(m.alphabet, check)
    delta: dict = {}

    def add(key, opts):
        if opts:
            delta.setdefault(key, [])
            for o in opts:
                if o not in delta[key]:
                    delta[key].append(o)

    suffixes = set()
    for w in table.u.values():
        w = tuple(w)
        for i in range(1, len(w)):
            suffixes.add(w[i:])
    states = set()
    for p in m.states:
        for g in table.reps:
            states.add(AtCoset(p, g))
            for v in suffixes:
                states.add(PendingAt(p, g, v))
    for p in m.states:
        for g in table.reps:
            src = AtCoset(p, g)
            for z in _tops(m):
                add((src, None, z), [(AtCoset(q, g), push) for q, push in m.moves(p, None, z)])
                for b in table.alphabet:
                    w = tuple(table.u[g, b])
                    h = table.bar[g, b]
                    if not w:
                        add((src, b, z), [(AtCoset(p, h), (z,) if z is not None else ())])
                    elif len(w) == 1:
                        add((src, b, z), [(AtCoset(q, h), push) for q, push in m.moves(p, w[0], z)])
                    else:
                        add((src, b, z), [(PendingAt(q, h, w[1:]), push) for q, push in m.moves(p, w[0], z)])
                for v in suffixes:
                    pend = PendingAt(p, g, v)
                    opts = [(PendingAt(q, g, v), push) for q, push in m.moves(p, None, z)]
                    if len(v) >= 2:
                        opts += [(PendingAt(q, g, v[1:]), push) for q, push in m.moves(p, v[0], z)]
                    else:
                        opts += [(AtCoset(q, g), push) for q, push in m.moves(p, v[0], z)]
                    add((pend, None, z), opts)
    return Pda(
        states,
        table.alphabet,
        m.stack_symbols,
        delta,
        AtCoset(m.initial, table.identity),
        {AtCoset(f, table.identity) for f in m.finals},
        m.start_symbol,
    )


# ---------------------------------------------------------------------------
# grammar export


@language_construction
def pda_to_cfg(m: Pda) -> Cfg:
    """Context-free grammar for ``L(m)`` (triple construction, reduced).

    ``("T", p, z, q)`` derives the words read while going from ``p`` with
    ``z`` on top to ``q`` with that ``z`` removed; ``("E", p, q)`` derives the
    words read from ``p`` to ``q`` starting and ending with an empty stack.
    """
    Q = sorted(m.states, key=repr)
    start = ("S",)
    variables = {start}
    rules = []

    def chain(q, push, end):
        """All variable sequences popping ``push`` (top first) from ``q`` to ``end``."""
        syms = list(reversed(push))
        if not syms:
            return [([], q)] if end is None else ([([], q)] if q == end else [])
        out = []

        def rec(i, cur, acc):
            if i == len(syms) - 1:
                targets = Q if end is None else [end]
                for r in targets:
                    out.append((acc + [("T", cur, syms[i], r)], r))
                return
            for r in Q:
                rec(i + 1, r, acc + [("T", cur, syms[i], r)])

        rec(0, q, [])
        return out

    for (p, a, z), opts in m.delta.items():
        lead = [] if a is None else [a]
        for q, push in opts:
            if z is not None:
                for r in Q:
                    for seq, _ in chain(q, push, r):
                        rules.append((("T", p, z, r), tuple(lead + seq)))
            else:
                # empty stack: push, pop it all again, continue with an empty stack
                for seq, mid in chain(q, push, None):
                    for r in Q:
                        rules.append((("E", p, r), tuple(lead + seq + [("E", mid, r)])))
    for p in Q:
        rules.append((("E", p, p), ()))
    for q in Q:
        for f in m.finals:
            rules.append((start, (("T", m.initial, m.start_symbol, q), ("E", q, f))))
    for lhs, rhs in rules:
        variables.add(lhs)
        variables.update(s for s in rhs if isinstance(s, tuple))
    return Cfg(variables, m.alphabet, rules, start).reduced()
