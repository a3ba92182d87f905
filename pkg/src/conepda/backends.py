"""Coset spaces realising pairs (G, K, psi), Schreier graphs and covers.

A coset space only has to answer three questions: what is the key of the
coset ``K``, how does a letter act on a key, and are two keys equal.  The
Schreier graph is then the orbit of the root key under the letters.

Three backends are provided:

* :class:`FreeGroupSubgroupBackend` -- ``K`` a finitely generated subgroup of
  a free group, handled by Stallings folding.  A coset key is a vertex of the
  folded core together with the reduced word hanging off it.
* :class:`FiniteGroupBackend` -- a finite group given by its multiplication
  table.
* :class:`RuleBackend` -- a handful of infinite graphs given by coordinate
  rules (lattice, comb, line, two-strand ladders).
"""

from __future__ import annotations

from collections import deque
from itertools import product
from math import isqrt
from typing import Callable, Hashable, Iterable, Sequence

from .errors import NotConnected, NotSymmetric, ParseError
from .graph import LabelledGraph, check_structure, step
from .words import Alphabet, Word, free_reduce, invert_word


class CosetSpace:
    """Interface: right cosets ``Kg`` with the action ``Kg -> Kg psi(a)``."""

    alphabet: Alphabet
    root_key: Hashable
    #: True when the alphabet is symmetric and psi(a^-1) = psi(a)^-1.
    symmetric: bool = False

    def act(self, key, letter: str):
        raise NotImplementedError

    def act_word(self, key, word: Iterable[str]):
        for a in word:
            key = self.act(key, a)
        return key

    def key_of(self, word: Iterable[str]):
        return self.act_word(self.root_key, word)

    def describe(self) -> str:
        return type(self).__name__


# ---------------------------------------------------------------------------
# free groups and Stallings folding


def fold_subgroup(alphabet: Alphabet, generators: Iterable[Sequence[str]]):
    """Stallings-fold the bouquet of generator loops.

    Returns ``(core, base)`` where ``core`` is a list of dicts ``label ->
    vertex`` with vertices numbered canonically by label-ordered BFS from the
    base (which is vertex 0).  The numbering depends only on the subgroup, not
    on the order or spelling of the generators.
    """
    if not alphabet.is_symmetric:
        raise NotSymmetric("free-group backends need a symmetric alphabet")
    inv = alphabet.inverse
    parent = [0]

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    edges: set[tuple[int, str, int]] = set()

    def new_vertex():
        parent.append(len(parent))
        return len(parent) - 1

    for gen in generators:
        w = free_reduce(gen, alphabet)
        if not w:
            continue
        prev = 0
        for i, a in enumerate(w):
            nxt = 0 if i == len(w) - 1 else new_vertex()
            edges.add((prev, a, nxt))
            edges.add((nxt, inv(a), prev))
            prev = nxt

    changed = True
    while changed:
        changed = False
        edges = {(find(x), a, find(y)) for x, a, y in edges}
        seen: dict[tuple[int, str], int] = {}
        for x, a, y in sorted(edges):
            other = seen.get((x, a))
            if other is None:
                seen[(x, a)] = y
            elif other != y:
                parent[find(y)] = find(other)
                changed = True
                break

    adjacency: dict[int, dict[str, int]] = {}
    for x, a, y in edges:
        adjacency.setdefault(x, {})[a] = y
    base = find(0)
    order = {base: 0}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for a in alphabet:
            y = adjacency.get(v, {}).get(a)
            if y is not None and y not in order:
                order[y] = len(order)
                queue.append(y)
    core: list[dict[str, int]] = [dict() for _ in order]
    for x, a, y in edges:
        core[order[x]][a] = order[y]
    return core, 0


class FreeGroupSubgroupBackend(CosetSpace):
    """Cosets of a finitely generated subgroup ``K`` of the free group ``F_Sigma``.

    ``psi(a) = a``; the alphabet must be symmetric.  With no generators this is
    the Cayley graph of the free group (the tree ``T_Sigma``).
    """

    symmetric = True

    def __init__(self, alphabet: Alphabet, generators: Iterable[Sequence[str]] = ()):
        self.alphabet = alphabet
        self.generators = [free_reduce(g, alphabet) for g in generators]
        self.core, base = fold_subgroup(alphabet, self.generators)
        self.root_key = (base, ())

    def act(self, key, letter):
        v, tail = key
        if not tail:
            y = self.core[v].get(letter)
            if y is not None:
                return (y, ())
            return (v, (letter,))
        if self.alphabet.inverse(tail[-1]) == letter:
            return (v, tail[:-1])
        return (v, tail + (letter,))

    def contains(self, word: Iterable[str]) -> bool:
        return self.key_of(word) == self.root_key

    def core_graph(self) -> LabelledGraph:
        g = LabelledGraph(self.alphabet, 0)
        for x, outs in enumerate(self.core):
            g.add_vertex(x)
            for a, y in outs.items():
                g.add_edge(x, a, y)
        return g

    def index(self) -> int | None:
        """``[F:K]`` when the core is a full covering (every label at every vertex)."""
        if all(len(outs) == len(self.alphabet) for outs in self.core):
            return len(self.core)
        return None

    def describe(self):
        gens = " ".join('"' + " ".join(g) + '"' for g in self.generators)
        return f"backend free-subgroup {self.alphabet.text()} gens {gens}".rstrip()


# ---------------------------------------------------------------------------
# finite groups


class FiniteGroupBackend(CosetSpace):
    """Right cosets of a subgroup of a finite group given by its table.

    ``table[x][y]`` is the index of ``x * y``.  A coset key is the smallest
    element index in the coset.
    """

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        subgroup: Iterable[int],
        psi: dict[str, int],
        alphabet: Alphabet | None = None,
    ):
        self.table = [list(row) for row in table]
        n = len(self.table)
        if any(len(row) != n for row in self.table):
            raise ValueError("multiplication table must be square")
        self.order = n
        self._check_group()
        self.subgroup = sorted(set(subgroup)) or [self.identity]
        if self.identity not in self.subgroup:
            raise ValueError("subgroup must contain the identity")
        for h in self.subgroup:
            for k in self.subgroup:
                if self.table[h][k] not in self.subgroup:
                    raise ValueError("subgroup is not closed under multiplication")
        self.alphabet = alphabet or Alphabet(list(psi))
        self.psi = dict(psi)
        if set(self.psi) != set(self.alphabet):
            raise ValueError("psi must be defined exactly on the alphabet")
        self.root_key = self._key(self.identity)
        self.symmetric = self.alphabet.is_symmetric and all(
            self.table[self.psi[a]][self.psi[self.alphabet.inverse(a)]] == self.identity
            for a in self.alphabet
        )

    def _check_group(self):
        t, n = self.table, self.order
        ids = [e for e in range(n) if all(t[e][x] == x and t[x][e] == x for x in range(n))]
        if len(ids) != 1:
            raise ValueError("table has no two-sided identity")
        self.identity = ids[0]
        self.inverse_of = {}
        for x in range(n):
            invs = [y for y in range(n) if t[x][y] == self.identity]
            if len(invs) != 1 or t[invs[0]][x] != self.identity:
                raise ValueError(f"element {x} has no inverse")
            self.inverse_of[x] = invs[0]
        triples = product(range(n), repeat=3) if n <= 24 else (
            ((i * 7) % n, (i * 13 + 1) % n, (i * 29 + 3) % n) for i in range(4000)
        )
        for x, y, z in triples:
            if t[t[x][y]][z] != t[x][t[y][z]]:
                raise ValueError(f"table is not associative at {(x, y, z)}")

    def _key(self, g: int) -> int:
        return min(self.table[h][g] for h in self.subgroup)

    def act(self, key, letter):
        return self._key(self.table[key][self.psi[letter]])

    def element(self, word: Iterable[str]) -> int:
        g = self.identity
        for a in word:
            g = self.table[g][self.psi[a]]
        return g

    def index(self) -> int:
        return self.order // len(self.subgroup)

    @classmethod
    def cyclic(cls, n: int, psi: dict[str, int], subgroup=(0,), alphabet=None):
        table = [[(x + y) % n for y in range(n)] for x in range(n)]
        return cls(table, subgroup, psi, alphabet)


# ---------------------------------------------------------------------------
# coordinate rule graphs


def quadratic_w(m: int) -> bool:
    """Membership in ``W = {k(|k|+1) : k in Z}``."""
    m = abs(m)
    j = (isqrt(4 * m + 1) - 1) // 2
    return j * (j + 1) == m


def _z2(key, a):
    x, y = key
    return {"a": (x + 1, y), "a^": (x - 1, y), "b": (x, y + 1), "b^": (x, y - 1)}[a]


def _comb(key, a):
    k, l = key
    if a in ("a", "a^"):
        if l != 0:
            return key
        return (k + 1, 0) if a == "a" else (k - 1, 0)
    return (k, l + 1) if a == "b" else (k, l - 1)


def _line(key, a):
    return key + 1 if a == "a" else key - 1


def _y_line(key, a):
    return key + 1 if a in ("a", "b") else key - 1


def _x_w(in_w):
    def rule(key, a):
        k, s = key
        if a == "a":
            return (k + 1, s)
        if a == "a^":
            return (k - 1, s)
        if a == "b":
            return (k + 1, 1 - s if in_w(k) else s)
        return (k - 1, 1 - s if in_w(k - 1) else s)

    return rule


class RuleBackend(CosetSpace):
    """Infinite symmetric graphs given by coordinate rules.

    ``z2``      Cayley graph of Z^2, root (0, 0)
    ``comb``    comb lattice: a-edges on the x-axis, a-loops off it, b vertical
    ``line``    Cayley graph of Z over {a, a^}
    ``y_line``  Z with doubled edges labelled a and b
    ``x_w``     two strands Z x {0, 1}; b-edges cross at positions in W
    """

    symmetric = True
    NAMES = ("z2", "comb", "line", "y_line", "x_w")

    def __init__(self, name: str, W: Iterable[int] | str | Callable[[int], bool] | None = None):
        self.name = name
        self.W = W
        if name == "z2":
            self.alphabet, self.root_key, self._rule = Alphabet.symmetric("a", "b"), (0, 0), _z2
        elif name == "comb":
            self.alphabet, self.root_key, self._rule = Alphabet.symmetric("a", "b"), (0, 0), _comb
        elif name == "line":
            self.alphabet, self.root_key, self._rule = Alphabet.symmetric("a"), 0, _line
        elif name == "y_line":
            self.alphabet, self.root_key, self._rule = Alphabet.symmetric("a", "b"), 0, _y_line
        elif name == "x_w":
            if W is None or W == "quadratic":
                in_w = quadratic_w
            elif callable(W):
                in_w = W
            else:
                members = frozenset(W)
                if not members:
                    raise ValueError("W must be non-empty")
                in_w = members.__contains__
            self.in_w = in_w
            self.alphabet, self.root_key, self._rule = Alphabet.symmetric("a", "b"), (0, 0), _x_w(in_w)
        else:
            raise ParseError(f"unknown rule set {name!r}; expected one of {self.NAMES}")

    def act(self, key, letter):
        if letter not in self.alphabet:
            raise ValueError(f"letter {letter!r} not in {self.alphabet!r}")
        return self._rule(key, letter)

    def describe(self):
        if self.name == "x_w":
            w = self.W if isinstance(self.W, (str, type(None))) else ",".join(map(str, sorted(self.W)))
            return f"backend rule x_w W={w or 'quadratic'}"
        return f"backend rule {self.name}"


# ---------------------------------------------------------------------------
# operations


def schreier_graph(space: CosetSpace) -> LabelledGraph:
    """Unexpanded lazy Schreier graph of ``space`` rooted at the root coset."""

    def expander(key):
        return [(a, space.act(key, a)) for a in space.alphabet]

    return LabelledGraph(
        space.alphabet, space.root_key, expander=expander, assume_symmetric=space.symmetric
    )


def build_schreier(space: CosetSpace, radius: int) -> LabelledGraph:
    """Schreier graph explored to ``radius``; the sphere of that radius is the frontier."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    g = schreier_graph(space)
    if radius > 0:
        g.expand_ball([space.root_key], radius - 1)
    return g


def word_problem_oracle(space: CosetSpace, w: Iterable[str]) -> bool:
    """``psi(w) in K``, by acting on the root coset."""
    return space.key_of(w) == space.root_key


def universal_cover_map(g: LabelledGraph, w: Sequence[str]):
    """``Phi(w) = o^w`` for a fully deterministic graph."""
    ends = step(g, g.root, w)
    if len(ends) != 1:
        raise ValueError(f"graph is not fully deterministic along {w!r}")
    return next(iter(ends))


def cover_is_local_isomorphism(g: LabelledGraph, w: Sequence[str]) -> bool:
    """Check that Phi is bijective between the edges at ``w`` and at ``Phi(w)``."""
    alphabet = g.alphabet
    w = free_reduce(w, alphabet)
    x = universal_cover_map(g, w)
    out_labels = sorted(a for a, _ in g.out_edges(x))
    in_labels = sorted(a for a, _ in g.in_edges(x))
    tree_labels = sorted(alphabet)
    if out_labels != tree_labels or in_labels != tree_labels:
        return False
    for a in alphabet:
        image = universal_cover_map(g, free_reduce(w + (a,), alphabet))
        if g.targets(x, a) != [image]:
            return False
    return True


def fundamental_group_sample(g: LabelledGraph, max_len: int) -> set:
    """Reduced words of length <= max_len labelling closed paths at the root."""
    alphabet = g.alphabet
    inv = alphabet.inverse
    found = {()}
    stack = [(g.root, ())]
    while stack:
        v, w = stack.pop()
        if len(w) == max_len:
            continue
        for a, y in g.out_edges(v):
            if w and inv(w[-1]) == a:
                continue
            u = w + (a,)
            if y == g.root:
                found.add(u)
            stack.append((y, u))
    return found


def bfs_tree(g: LabelledGraph):
    """Label-ordered BFS spanning tree from the root.

    Returns ``(order, parent)`` where ``order`` maps vertices to BFS rank and
    ``parent[v] = (u, a)`` is the tree edge ``(u, a, v)``.
    """
    alphabet = g.alphabet
    order = {g.root: 0}
    parent: dict = {}
    queue = deque([g.root])
    while queue:
        v = queue.popleft()
        for a, y in sorted(g.out_edges(v), key=lambda e: alphabet.index(e[0])):
            if y not in order:
                order[y] = len(order)
                parent[y] = (v, a)
                queue.append(y)
    return order, parent


def tree_path(parent: dict, v) -> Word:
    """Label of the tree path from the root to ``v``."""
    labels = []
    while v in parent:
        v, a = parent[v]
        labels.append(a)
    return tuple(reversed(labels))


def spanning_tree_edges(g: LabelledGraph):
    """Non-tree edges, one per inverse pair, and the BFS tree parent map.

    The tree is the label-ordered BFS tree; of each non-tree edge pair the
    orientation with the smaller ``(BFS rank of source, label index)`` is kept.
    """
    alphabet = g.alphabet
    if not check_structure(g).symmetric:
        raise NotSymmetric("spanning tree generators need a symmetric graph")
    if g.frontier:
        raise ValueError("graph must be finite (empty frontier)")
    order, parent = bfs_tree(g)
    if len(order) != len(g):
        raise NotConnected(f"{len(g) - len(order)} vertices unreachable from the root")
    inv = alphabet.inverse
    tree_edges = set()
    for v, (u, a) in parent.items():
        tree_edges.add((u, a, v))
        tree_edges.add((v, inv(a), u))
    chosen = []
    for x, a, y in g.edges():
        if (x, a, y) in tree_edges:
            continue
        mine = (order[x], alphabet.index(a))
        partner = (order[y], alphabet.index(inv(a)))
        if mine < partner:
            chosen.append((mine, (x, a, y)))
    chosen.sort()
    return [e for _, e in chosen], parent


def spanning_tree_generators(g: LabelledGraph) -> list:
    """Free generators ``w(e)`` of the fundamental group from a spanning tree."""
    edges, parent = spanning_tree_edges(g)
    gens = []
    for x, a, y in edges:
        w = tree_path(parent, x) + (a,) + invert_word(tree_path(parent, y), g.alphabet)
        gens.append(free_reduce(w, g.alphabet))
    return gens
