"""Context-free grammars, Chomsky normal form, CYK, derivations and polygons.

Variables may be any hashable values; terminals are the letters of an
alphabet.  A right-hand side is a tuple of symbols, and a symbol is a
terminal exactly when it belongs to the grammar's terminal set.

Derivations are explicit lists of steps ``(position, (lhs, rhs))`` where
``position`` indexes the variable being rewritten in the current sentential
form.  This makes the choice of derivation (leftmost, rightmost or anything
in between) an input of :func:`triangulate`, which is the object the
triangulation is defined from.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Hashable, Iterable, Sequence

from .errors import EmptyLanguage, InvalidDerivation, NotInLanguage
from .graph import LabelledGraph, ball
from .registry import language_construction

Rule = tuple  # (lhs, rhs tuple)


class Cfg:
    """A context-free grammar ``(V, Sigma, P, S)``."""

    def __init__(self, variables: Iterable, terminals: Iterable[str], productions: Iterable, start):
        self.variables = frozenset(variables)
        self.terminals = frozenset(terminals)
        if self.variables & self.terminals:
            raise ValueError(f"symbols used both as variable and terminal: {sorted(map(str, self.variables & self.terminals))}")
        if start not in self.variables:
            raise ValueError(f"start symbol {start!r} is not a variable")
        self.start = start
        rules = []
        seen = set()
        for lhs, rhs in productions:
            rhs = tuple(rhs)
            if lhs not in self.variables:
                raise ValueError(f"rule head {lhs!r} is not a variable")
            for s in rhs:
                if s not in self.variables and s not in self.terminals:
                    raise ValueError(f"undeclared symbol {s!r} in rule for {lhs!r}")
            if (lhs, rhs) not in seen:
                seen.add((lhs, rhs))
                rules.append((lhs, rhs))
        self.productions = tuple(rules)
        self._by_head: dict = {}
        for lhs, rhs in self.productions:
            self._by_head.setdefault(lhs, []).append(rhs)

    def rules_for(self, var) -> list:
        return self._by_head.get(var, [])

    def is_terminal(self, sym) -> bool:
        return sym in self.terminals

    def __repr__(self):
        return f"{type(self).__name__}(|V|={len(self.variables)}, |P|={len(self.productions)}, start={self.start!r})"

    def productive(self) -> set:
        prod: set = set()
        changed = True
        while changed:
            changed = False
            for lhs, rhs in self.productions:
                if lhs not in prod and all(s in prod or s in self.terminals for s in rhs):
                    prod.add(lhs)
                    changed = True
        return prod

    def reduced(self) -> "Cfg":
        """Drop useless variables (unproductive or unreachable)."""
        prod = self.productive()
        rules = [(l, r) for l, r in self.productions if l in prod and all(s in prod or s in self.terminals for s in r)]
        reach = {self.start}
        stack = [self.start]
        heads: dict = {}
        for l, r in rules:
            heads.setdefault(l, []).append(r)
        while stack:
            v = stack.pop()
            for r in heads.get(v, ()):
                for s in r:
                    if s in prod and s not in reach:
                        reach.add(s)
                        stack.append(s)
        rules = [(l, r) for l, r in rules if l in reach]
        return Cfg(reach, self.terminals, rules, self.start)

    def is_empty(self) -> bool:
        return self.start not in self.productive()

    def relabeled(self, prefix: str = "V") -> "Cfg":
        """Same grammar with variables renamed ``S, V1, V2, ...`` in first-use order."""
        names = {self.start: "S"}
        for lhs, rhs in self.productions:
            for s in (lhs,) + rhs:
                if s in self.variables and s not in names:
                    names[s] = f"{prefix}{len(names)}"
        for v in sorted(self.variables - set(names), key=repr):
            names[v] = f"{prefix}{len(names)}"
        rules = [(names[l], tuple(names.get(s, s) if s in self.variables else s for s in r)) for l, r in self.productions]
        cls = type(self)
        return cls(names.values(), self.terminals, rules, "S")

    def words(self, max_len: int) -> set:
        return enumerate_language(self, max_len)


class CnfGrammar(Cfg):
    """A grammar in Chomsky normal form.

    Every rule is ``T -> U V`` (two variables) or ``T -> a``; ``S -> eps`` is
    allowed only when ``S`` occurs on no right-hand side.
    """

    def __init__(self, variables, terminals, productions, start):
        super().__init__(variables, terminals, productions, start)
        eps = False
        on_right = False
        for lhs, rhs in self.productions:
            if len(rhs) == 0:
                if lhs != self.start:
                    raise ValueError(f"epsilon rule for non-start variable {lhs!r}")
                eps = True
            elif len(rhs) == 1:
                if rhs[0] not in self.terminals:
                    raise ValueError(f"unit rule {lhs!r} -> {rhs[0]!r} is not in CNF")
            elif len(rhs) == 2:
                if not all(s in self.variables for s in rhs):
                    raise ValueError(f"binary rule for {lhs!r} must have two variables")
                on_right = on_right or self.start in rhs
            else:
                raise ValueError(f"rule for {lhs!r} has length {len(rhs)}")
        if eps and on_right:
            raise ValueError("start symbol with an epsilon rule occurs on a right-hand side")
        self.binary: dict = {}
        self.unary: dict = {}
        for lhs, rhs in self.productions:
            if len(rhs) == 2:
                self.binary.setdefault(rhs, []).append(lhs)
            elif len(rhs) == 1:
                self.unary.setdefault(rhs[0], []).append(lhs)
        self.has_epsilon = eps


# ---------------------------------------------------------------------------
# CNF conversion


class _Fresh:
    def __init__(self, used):
        self.used = set(used)
        self.count = 0

    def __call__(self, base):
        if isinstance(base, str) and base not in self.used:
            self.used.add(base)
            return base
        while True:
            self.count += 1
            name = f"{base}#{self.count}" if isinstance(base, str) else ("#", base, self.count)
            if name not in self.used:
                self.used.add(name)
                return name


@language_construction
def to_cnf(g: Cfg) -> CnfGrammar:
    """Equivalent grammar in Chomsky normal form, with every variable useful."""
    if isinstance(g, CnfGrammar):
        r = g.reduced()
        if not r.is_empty():
            return CnfGrammar(r.variables, r.terminals, r.productions, r.start)
    g = g.reduced()
    if g.is_empty():
        raise EmptyLanguage("grammar generates no word")
    fresh = _Fresh(set(g.variables) | set(g.terminals))
    start = fresh("S0" if isinstance(g.start, str) else g.start)
    rules = [(start, (g.start,))] + list(g.productions)
    variables = set(g.variables) | {start}

    # terminals inside long right-hand sides
    term_var = {}
    out = []
    for lhs, rhs in rules:
        if len(rhs) >= 2:
            new = []
            for s in rhs:
                if s in g.terminals:
                    if s not in term_var:
                        term_var[s] = fresh(f"<{s}>")
                        variables.add(term_var[s])
                        out.append((term_var[s], (s,)))
                    new.append(term_var[s])
                else:
                    new.append(s)
            out.append((lhs, tuple(new)))
        else:
            out.append((lhs, rhs))
    rules = out

    # binarise
    out = []
    for lhs, rhs in rules:
        head = lhs
        while len(rhs) > 2:
            nxt = fresh(lhs)
            variables.add(nxt)
            out.append((head, (rhs[0], nxt)))
            head, rhs = nxt, rhs[1:]
        out.append((head, rhs))
    rules = out

    # epsilon rules
    nullable: set = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in rules:
            if lhs not in nullable and all(s in nullable for s in rhs):
                nullable.add(lhs)
                changed = True
    out = set()
    for lhs, rhs in rules:
        options = [((s,), ()) if s in nullable else ((s,),) for s in rhs]
        for choice in product(*options):
            new = tuple(x for part in choice for x in part)
            if new or lhs == start:
                out.add((lhs, new))
    rules = sorted(out, key=repr)

    # unit rules
    unit_edges: dict = {}
    proper: dict = {}
    for lhs, rhs in rules:
        if len(rhs) == 1 and rhs[0] in variables:
            unit_edges.setdefault(lhs, set()).add(rhs[0])
        else:
            proper.setdefault(lhs, []).append(rhs)
    final = []
    for v in sorted(variables, key=repr):
        reach = {v}
        stack = [v]
        while stack:
            for y in unit_edges.get(stack.pop(), ()):
                if y not in reach:
                    reach.add(y)
                    stack.append(y)
        for u in sorted(reach, key=repr):
            for rhs in proper.get(u, ()):
                if len(rhs) == 0 and v != start:
                    continue
                final.append((v, rhs))
    reduced = Cfg(variables, g.terminals, final, start).reduced()
    return CnfGrammar(reduced.variables, reduced.terminals, reduced.productions, reduced.start)


# ---------------------------------------------------------------------------
# shortest yields and enumeration


def min_yield(g: Cfg):
    """``(m(T) for every productive variable T, max of those)``."""
    m: dict = {}
    changed = True
    while changed:
        changed = False
        for lhs, rhs in g.productions:
            total = 0
            for s in rhs:
                if s in g.terminals:
                    total += 1
                elif s in m:
                    total += m[s]
                else:
                    break
            else:
                if lhs not in m or total < m[lhs]:
                    m[lhs] = total
                    changed = True
    return m, max(m.values(), default=0)


def enumerate_language(g: Cfg, max_len: int, start=None) -> set:
    """All words of length <= max_len generated from ``start`` (default: the start symbol)."""
    start = g.start if start is None else start
    try:
        cnf = g if isinstance(g, CnfGrammar) and start == g.start else to_cnf(Cfg(g.variables, g.terminals, g.productions, start))
    except EmptyLanguage:
        return set()
    by_len: dict = {v: [set() for _ in range(max_len + 1)] for v in cnf.variables}
    if max_len >= 1:
        for lhs, rhs in cnf.productions:
            if len(rhs) == 1:
                by_len[lhs][1].add(rhs)
    binary = [(l, r) for l, r in cnf.productions if len(r) == 2]
    for n in range(2, max_len + 1):
        for lhs, (u, v) in binary:
            target = by_len[lhs][n]
            for k in range(1, n):
                left, right = by_len[u][k], by_len[v][n - k]
                if left and right:
                    for x in left:
                        for y in right:
                            target.add(x + y)
    words = set()
    for n in range(1, max_len + 1):
        words |= by_len[cnf.start][n]
    if cnf.has_epsilon:
        words.add(())
    return words


# ---------------------------------------------------------------------------
# CYK and derivations


@dataclass(frozen=True)
class ParseTree:
    symbol: Hashable
    start: int
    end: int
    children: tuple  # ParseTree nodes, or a single terminal string

    def rule(self):
        if self.children and isinstance(self.children[0], ParseTree):
            return (self.symbol, tuple(c.symbol for c in self.children))
        return (self.symbol, tuple(self.children))


def cyk_member(g: CnfGrammar, w: Sequence[str], start=None):
    """``(True, ParseTree)`` if ``start`` (default ``S``) derives ``w``, else ``(False, None)``."""
    start = g.start if start is None else start
    w = tuple(w)
    n = len(w)
    if n == 0:
        if start == g.start and g.has_epsilon:
            return True, ParseTree(start, 0, 0, ())
        return False, None
    table: dict = {}
    for i, a in enumerate(w):
        cell = {}
        for lhs in g.unary.get(a, ()):
            cell.setdefault(lhs, None)
        table[i, i + 1] = cell
    for length in range(2, n + 1):
        for i in range(0, n - length + 1):
            j = i + length
            cell = {}
            for k in range(i + 1, j):
                left, right = table[i, k], table[k, j]
                if not left or not right:
                    continue
                for u in left:
                    for v in right:
                        for lhs in g.binary.get((u, v), ()):
                            if lhs not in cell:
                                cell[lhs] = (k, u, v)
            table[i, j] = cell
    if start not in table[0, n]:
        return False, None

    def build(sym, i, j):
        back = table[i, j][sym]
        if back is None:
            return ParseTree(sym, i, j, (w[i],))
        k, u, v = back
        return ParseTree(sym, i, j, (build(u, i, k), build(v, k, j)))

    return True, build(start, 0, n)


def _derivation(tree: ParseTree, rightmost: bool):
    steps = []
    # frontier of unexpanded nodes in sentential-form order
    form = [tree]
    while True:
        positions = [i for i, s in enumerate(form) if isinstance(s, ParseTree)]
        if not positions:
            return steps
        pos = positions[-1] if rightmost else positions[0]
        node = form[pos]
        steps.append((pos, node.rule()))
        kids = list(node.children)
        form[pos : pos + 1] = kids


def rightmost_derivation(tree: ParseTree) -> list:
    return _derivation(tree, True)


def leftmost_derivation(tree: ParseTree) -> list:
    return _derivation(tree, False)


def apply_derivation(g: Cfg, steps, start=None) -> tuple:
    """Replay ``steps`` from the start symbol and return the final sentential form."""
    form = [g.start if start is None else start]
    rules = set(g.productions)
    for pos, (lhs, rhs) in steps:
        if not (0 <= pos < len(form)) or form[pos] != lhs or lhs not in g.variables:
            raise InvalidDerivation(f"step rewrites {lhs!r} at {pos} but finds {form[pos] if 0 <= pos < len(form) else None!r}")
        if (lhs, tuple(rhs)) not in rules:
            raise InvalidDerivation(f"no rule {lhs!r} -> {rhs!r}")
        form[pos : pos + 1] = list(rhs)
    return tuple(form)


# ---------------------------------------------------------------------------
# polygon triangulation


@dataclass(frozen=True)
class PolygonTriangulation:
    word: tuple
    start: Hashable
    diagonals: frozenset  # of (i, T, j)

    @property
    def n(self):
        return len(self.word)

    def boundary_edges(self):
        edges = [(i, a, i + 1) for i, a in enumerate(self.word)]
        return edges + [(0, self.start, self.n)]

    def pairs(self):
        return {(i, j) for i, _, j in self.diagonals}

    def is_noncrossing(self) -> bool:
        ds = sorted(self.pairs())
        for a, b in ds:
            for c, d in ds:
                if a < c < b < d:
                    return False
        return True

    def is_triangulation(self) -> bool:
        """Non-crossing, one diagonal per vertex pair, and ``n - 2`` diagonals."""
        if len(self.pairs()) != len(self.diagonals):
            return False
        expected = max(self.n - 2, 0)
        return self.is_noncrossing() and len(self.diagonals) == expected and all(j - i >= 2 for i, _, j in self.diagonals)


def triangulate(g: CnfGrammar, w: Sequence[str], derivation) -> PolygonTriangulation:
    """Diagonal triangulation of the polygon of ``w`` read off a derivation.

    Every binary step ``T -> U V`` whose parts derive ``a_{i+1}..a_j`` and
    ``a_{j+1}..a_k`` contributes the diagonals ``(i, U, j)`` and ``(j, V, k)``
    when those are not polygon sides.
    """
    w = tuple(w)
    rules = set(g.productions)
    # nodes: [symbol, children ids]; leaves carry terminals
    nodes = [[g.start, None]]
    form = [0]
    for step in derivation:
        try:
            pos, (lhs, rhs) = step
        except (TypeError, ValueError):
            raise InvalidDerivation(f"malformed step {step!r}") from None
        rhs = tuple(rhs)
        if not (0 <= pos < len(form)):
            raise InvalidDerivation(f"position {pos} outside sentential form of length {len(form)}")
        node = form[pos]
        if nodes[node][0] != lhs or nodes[node][1] is not None or lhs not in g.variables:
            raise InvalidDerivation(f"step {pos}: expected variable {lhs!r}, found {nodes[node][0]!r}")
        if (lhs, rhs) not in rules:
            raise InvalidDerivation(f"no rule {lhs!r} -> {rhs!r} in the grammar")
        kids = []
        for s in rhs:
            nodes.append([s, None])
            kids.append(len(nodes) - 1)
        nodes[node][1] = kids
        form[pos : pos + 1] = kids
    final = tuple(nodes[i][0] for i in form)
    if final != w or any(nodes[i][1] is not None or nodes[i][0] in g.variables for i in form):
        raise InvalidDerivation(f"derivation yields {final!r}, not {w!r}")
    span = {}
    for pos, leaf in enumerate(form):
        span[leaf] = (pos, pos + 1)

    def compute(i):
        if i in span:
            return span[i]
        kids = nodes[i][1]
        if not kids:  # epsilon rule
            raise InvalidDerivation("epsilon rules cannot occur inside a triangulated derivation")
        parts = [compute(c) for c in kids]
        span[i] = (parts[0][0], parts[-1][1])
        return span[i]

    compute(0)
    diagonals = set()
    for idx, (sym, kids) in enumerate(nodes):
        if idx == 0 or kids is None:
            continue
        i, j = span[idx]
        if j - i >= 2:
            diagonals.add((i, sym, j))
    tri = PolygonTriangulation(w, g.start, frozenset(diagonals))
    for i, sym, j in tri.diagonals:
        if not cyk_member(g, w[i:j], start=sym)[0]:
            raise InvalidDerivation(f"diagonal {(i, sym, j)!r} does not derive its subword")
    return tri


# ---------------------------------------------------------------------------
# graph distances along diagonals


def _walk(graph: LabelledGraph, x, w):
    path = [x]
    v = x
    for a in w:
        if graph.lazy:
            graph.expand(v)
        targets = graph.targets(v, a)
        if len(targets) != 1:
            raise NotInLanguage(f"no unique {a!r}-edge at {v!r}")
        v = targets[0]
        path.append(v)
    return path


def diagonal_distances(g: CnfGrammar, graph: LabelledGraph, x, w, m=None, derivation=None) -> list:
    """``[(i, T, j, d(x_i, x_j), m(T))]`` for the diagonals of a triangulation of ``w``."""
    w = tuple(w)
    ok, tree = cyk_member(g, w)
    if not ok:
        raise NotInLanguage(f"{' '.join(w) or 'eps'} is not generated by the grammar")
    if derivation is None:
        derivation = rightmost_derivation(tree)
    tri = triangulate(g, w, derivation)
    mvals = m if m is not None else min_yield(g)[0]
    path = _walk(graph, x, w)
    rows = []
    for i, sym, j in sorted(tri.diagonals, key=lambda d: (d[0], d[2])):
        bound = mvals[sym]
        if bound < 0:
            rows.append((i, sym, j, None, bound))
            continue
        b = ball(graph, [path[i]], bound)
        d = b.distance.get(path[j])
        rows.append((i, sym, j, d, bound))
    return rows


def diagonal_distance_check(g: CnfGrammar, graph: LabelledGraph, x, w, m=None, derivation=None) -> bool:
    """Every diagonal ``(i, T, j)`` joins vertices at distance at most ``m(T)``.

    ``m`` may override the shortest-yield table, which is how the check is
    mutation-tested.  Raises :class:`NotInLanguage` if ``w`` is not generated
    and :class:`FrontierEscape` if the graph cannot be explored far enough.
    """
    return all(d is not None for _, _, _, d, _ in diagonal_distances(g, graph, x, w, m, derivation))


# ---------------------------------------------------------------------------
# syntactic classes


def is_regular_grammar(g: Cfg) -> str:
    """``'right_linear'``, ``'linear'`` or ``'general'``."""
    right = True
    for _, rhs in g.productions:
        vars_at = [i for i, s in enumerate(rhs) if s in g.variables]
        if len(vars_at) > 1:
            return "general"
        if vars_at and vars_at[0] != len(rhs) - 1:
            right = False
    return "right_linear" if right else "linear"

