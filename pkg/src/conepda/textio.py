"""Line-oriented text formats and DOT export.

Graphs::

    alphabet a a^ b b^
    root o
    edge o a x
    final o            # automata only

Automata::

    alphabet a b
    state q0 initial
    state qf final
    stack z0 start
    trans q0 a z0 -> q0 z0 a     # pushed word, top at the right; eps for none

Grammars::

    start S
    rule S -> A B
    rule A -> 'a'
    rule S -> eps

Backends::

    backend free-subgroup alphabet a a^ b b^ gens "a" "b a b^"
    backend finite table groups/s3.txt subgroup 0 psi a=1 b=3
    backend finite cyclic 2 psi a=1
    backend rule x_w W=quadratic

Lines starting with ``#`` and text after `` #`` are comments.
"""

from __future__ import annotations

import shlex
from pathlib import Path

from .backends import CosetSpace, FiniteGroupBackend, FreeGroupSubgroupBackend, RuleBackend
from .cones import ConeTypeTable, phi_tau
from .errors import ConePdaError, ParseError
from .grammar import Cfg, PolygonTriangulation
from .graph import LabelledGraph
from .pda import CosetTable, Pda
from .regular import Dfa
from .words import Alphabet


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split(" #", 1)[0].strip()
        if line and not line.startswith("#"):
            yield no, line


def token(v) -> str:
    """Whitespace-free name of a vertex, state or stack symbol."""
    if isinstance(v, str):
        return v
    return repr(v).replace(" ", "")


# ---------------------------------------------------------------------------
# graphs and automata


def parse_graph(text: str):
    """Return ``(graph, finals)``; the alphabet line is required."""
    alphabet, root, edges, vertices, finals = None, None, [], [], []
    for no, line in _lines(text):
        head, *rest = line.split()
        if head == "alphabet":
            alphabet = Alphabet.parse(line)
        elif head == "root" and len(rest) == 1:
            root = rest[0]
        elif head == "edge" and len(rest) == 3:
            edges.append(tuple(rest))
        elif head == "vertex" and len(rest) == 1:
            vertices.append(rest[0])
        elif head == "final" and rest:
            finals.extend(rest)
        else:
            raise ParseError(f"line {no}: cannot parse {line!r}")
    if alphabet is None:
        raise ParseError("missing 'alphabet' line")
    if root is None:
        if not edges:
            raise ParseError("missing 'root' line")
        root = edges[0][0]
    g = LabelledGraph(alphabet, root)
    for v in vertices:
        g.add_vertex(v)
    for x, a, y in edges:
        if a not in alphabet:
            raise ParseError(f"edge label {a!r} not in {alphabet!r}")
        g.add_edge(x, a, y)
    missing = [f for f in finals if f not in g]
    if missing:
        raise ParseError(f"final states {missing} are not vertices")
    return g, finals


def graph_to_text(g: LabelledGraph, finals=()) -> str:
    lines = [g.alphabet.text(), f"root {token(g.root)}"]
    edges = list(g.edges())
    touched = {x for x, _, _ in edges} | {y for _, _, y in edges}
    for v in g.vertices:
        if v not in touched:
            lines.append(f"vertex {token(v)}")
    for x, a, y in sorted(edges, key=lambda e: (token(e[0]), g.alphabet.index(e[1]), token(e[2]))):
        lines.append(f"edge {token(x)} {a} {token(y)}")
    for f in sorted(map(token, finals)):
        lines.append(f"final {f}")
    return "\n".join(lines) + "\n"


def parse_dfa(text: str) -> Dfa:
    g, finals = parse_graph(text)
    return Dfa(g, g.root, finals)


def dfa_to_text(d: Dfa) -> str:
    return graph_to_text(d.graph, d.finals)


# ---------------------------------------------------------------------------
# pushdown automata


def parse_pda(text: str) -> Pda:
    alphabet, states, symbols, initial, start, finals, delta = None, [], [], None, None, [], {}
    for no, line in _lines(text):
        parts = line.split()
        head = parts[0]
        if head == "alphabet":
            alphabet = Alphabet.parse(line)
        elif head == "state" and len(parts) >= 2:
            states.append(parts[1])
            for flag in parts[2:]:
                if flag == "initial":
                    if initial is not None:
                        raise ParseError(f"line {no}: second initial state")
                    initial = parts[1]
                elif flag == "final":
                    finals.append(parts[1])
                else:
                    raise ParseError(f"line {no}: unknown state flag {flag!r}")
        elif head == "stack" and len(parts) >= 2:
            symbols.append(parts[1])
            for flag in parts[2:]:
                if flag != "start":
                    raise ParseError(f"line {no}: unknown stack flag {flag!r}")
                start = parts[1]
        elif head == "trans":
            if len(parts) < 6 or parts[4] != "->":
                raise ParseError(f"line {no}: expected 'trans <q> <a|eps> <z|eps> -> <q'> <stackword|eps>'")
            _, p, a, z, _, q, *push = parts
            a = None if a == "eps" else a
            z = None if z == "eps" else z
            push = tuple(s for s in push if s != "eps")
            delta.setdefault((p, a, z), []).append((q, push))
        else:
            raise ParseError(f"line {no}: cannot parse {line!r}")
    if alphabet is None:
        raise ParseError("missing 'alphabet' line")
    if initial is None:
        raise ParseError("no initial state")
    if start is None:
        raise ParseError("no start stack symbol")
    try:
        return Pda(states, alphabet, symbols, delta, initial, finals, start)
    except ValueError as e:
        raise ParseError(str(e)) from None


def pda_to_text(m: Pda) -> str:
    """Text form; states and symbols are renamed ``q0..`` and ``z0, t1..`` unless already plain strings."""
    plain = all(isinstance(s, str) and " " not in s for s in m.states | m.stack_symbols)
    plain = plain and "eps" not in m.states | m.stack_symbols
    if not plain:
        m = m.relabeled()
    lines = [m.alphabet.text()]
    for q in sorted(m.states, key=lambda s: (s != m.initial, s)):
        flags = (" initial" if q == m.initial else "") + (" final" if q in m.finals else "")
        lines.append(f"state {q}{flags}")
    for z in sorted(m.stack_symbols, key=lambda s: (s != m.start_symbol, s)):
        lines.append(f"stack {z}" + (" start" if z == m.start_symbol else ""))
    rows = []
    for (p, a, z), opts in m.delta.items():
        for q, push in opts:
            rows.append(f"trans {p} {a or 'eps'} {z or 'eps'} -> {q} {' '.join(push) or 'eps'}")
    return "\n".join(lines + sorted(rows)) + "\n"


# ---------------------------------------------------------------------------
# grammars


def _symbol(tok: str, no: int):
    if len(tok) >= 2 and tok[0] == tok[-1] == "'":
        return ("t", tok[1:-1])
    if "'" in tok:
        raise ParseError(f"line {no}: bad quoting in {tok!r}")
    return ("v", tok)


def parse_grammar(text: str) -> Cfg:
    start, rules, terminals = None, [], set()
    for no, line in _lines(text):
        parts = line.split()
        if parts[0] == "start" and len(parts) == 2:
            start = parts[1]
        elif parts[0] == "alphabet":
            terminals |= set(Alphabet.parse(line))
        elif parts[0] == "rule" and len(parts) >= 4 and parts[2] == "->":
            lhs = _symbol(parts[1], no)
            if lhs[0] != "v":
                raise ParseError(f"line {no}: rule head must be a variable")
            rhs = []
            for tok in parts[3:]:
                if tok == "eps":
                    continue
                rhs.append(_symbol(tok, no))
            rules.append((lhs[1], rhs))
        else:
            raise ParseError(f"line {no}: cannot parse {line!r}")
    if start is None:
        if not rules:
            raise ParseError("empty grammar")
        start = rules[0][0]
    variables = {start} | {lhs for lhs, _ in rules}
    for _, rhs in rules:
        terminals |= {s for kind, s in rhs if kind == "t"}
        variables |= {s for kind, s in rhs if kind == "v"}
    clash = variables & terminals
    if clash:
        raise ParseError(f"symbols used as both variable and terminal: {sorted(clash)}")
    return Cfg(variables, terminals, [(lhs, tuple(s for _, s in rhs)) for lhs, rhs in rules], start)


def grammar_to_text(g: Cfg) -> str:
    """Text form; non-string variables are renamed first."""
    if not all(isinstance(v, str) and " " not in v and "'" not in v for v in g.variables):
        g = g.relabeled()
    lines = [f"start {g.start}"]
    for lhs, rhs in g.productions:
        body = " ".join(f"'{s}'" if s in g.terminals else s for s in rhs) or "eps"
        lines.append(f"rule {lhs} -> {body}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# coset tables


def parse_coset_table(text: str) -> CosetTable:
    """``alphabet s t``, ``reps 1 s``, ``identity 1`` and ``entry <g> <b> -> <h> <u..|eps>`` lines."""
    alphabet, reps, identity, bar, u = None, None, None, {}, {}
    for no, line in _lines(text):
        parts = line.split()
        if parts[0] == "alphabet":
            alphabet = Alphabet.parse(line)
        elif parts[0] == "reps" and len(parts) >= 2:
            reps = tuple(parts[1:])
        elif parts[0] == "identity" and len(parts) == 2:
            identity = parts[1]
        elif parts[0] == "entry" and len(parts) >= 6 and parts[3] == "->":
            g, b, h = parts[1], parts[2], parts[4]
            bar[g, b] = h
            u[g, b] = tuple(t for t in parts[5:] if t != "eps")
        else:
            raise ParseError(f"line {no}: cannot parse {line!r}")
    if alphabet is None or reps is None:
        raise ParseError("coset table needs 'alphabet' and 'reps' lines")
    return CosetTable(reps, identity if identity is not None else reps[0], alphabet, bar, u)


def coset_table_to_text(t: CosetTable) -> str:
    lines = [t.alphabet.text(), "reps " + " ".join(map(token, t.reps)), f"identity {token(t.identity)}"]
    for g in t.reps:
        for b in t.alphabet:
            lines.append(f"entry {token(g)} {b} -> {token(t.bar[g, b])} {' '.join(t.u[g, b]) or 'eps'}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# backends


def parse_table_file(path) -> list:
    rows = []
    for no, line in _lines(Path(path).read_text()):
        try:
            rows.append([int(t) for t in line.split()])
        except ValueError:
            raise ParseError(f"{path}:{no}: expected integers") from None
    return rows


def _psi(tokens):
    psi = {}
    for t in tokens:
        if "=" not in t:
            raise ParseError(f"expected letter=element, found {t!r}")
        a, x = t.split("=", 1)
        psi[a] = int(x)
    return psi


def _w_value(text: str):
    if text in ("quadratic", ""):
        return "quadratic"
    try:
        return [int(t) for t in text.replace(";", ",").split(",") if t]
    except ValueError:
        raise ParseError(f"W must be 'quadratic' or a list of integers, not {text!r}") from None


def parse_backend(spec: str, base: Path | None = None) -> CosetSpace:
    """Full ``backend ...`` line or a shorthand.

    Shorthands: ``rule:<name>[:W=<list>]``, ``finite:z<n>`` (cyclic group,
    ``psi(a) = 1``), ``free:`` (Cayley tree of F2) and ``free:<gens>`` with
    generators separated by ``,`` and letters by spaces or dots, e.g.
    ``free:a`` or ``free:a.a,a.b,a.b^``.
    """
    spec = spec.strip()
    if spec.startswith("@"):
        return parse_backend(Path(spec[1:]).read_text(), Path(spec[1:]).parent)
    if not spec.startswith("backend"):
        return _shorthand(spec)
    try:
        tokens = shlex.split(spec)
    except ValueError as e:
        raise ParseError(f"backend line: {e}") from None
    if len(tokens) < 2:
        raise ParseError("backend kind missing")
    kind, rest = tokens[1], tokens[2:]
    try:
        if kind == "free-subgroup":
            if not rest or rest[0] != "alphabet":
                raise ParseError("expected 'alphabet' after free-subgroup")
            if "gens" in rest:
                i = rest.index("gens")
                alphabet, gens = Alphabet.parse(" ".join(rest[1:i])), rest[i + 1 :]
            else:
                alphabet, gens = Alphabet.parse(" ".join(rest[1:])), []
            return FreeGroupSubgroupBackend(alphabet, [alphabet.word(w) for w in gens])
        if kind == "finite":
            opts = _keywords(rest, ("table", "cyclic", "subgroup", "psi", "alphabet"))
            if "table" in opts:
                path = Path(opts["table"][0])
                if base is not None and not path.is_absolute():
                    path = base / path
                table = parse_table_file(path)
            elif "cyclic" in opts:
                n = int(opts["cyclic"][0])
                table = [[(x + y) % n for y in range(n)] for x in range(n)]
            else:
                raise ParseError("finite backend needs 'table <file>' or 'cyclic <n>'")
            if "psi" not in opts:
                raise ParseError("finite backend needs 'psi a=<element> ...'")
            subgroup = [int(t) for t in opts.get("subgroup", ["0"])]
            psi = _psi(opts["psi"])
            alphabet = Alphabet.parse(" ".join(opts["alphabet"])) if "alphabet" in opts else Alphabet.parse(" ".join(psi))
            return FiniteGroupBackend(table, subgroup, psi, alphabet)
        if kind == "rule":
            if not rest:
                raise ParseError("rule backend needs a name")
            W = None
            for t in rest[1:]:
                if not t.startswith("W="):
                    raise ParseError(f"unexpected {t!r} in rule backend")
                W = _w_value(t[2:])
            return RuleBackend(rest[0], W)
    except (ValueError, KeyError) as e:
        if isinstance(e, ConePdaError):
            raise
        raise ParseError(f"bad backend line: {e}") from None
    raise ParseError(f"unknown backend kind {kind!r}")


def _keywords(tokens, keys):
    out, current = {}, None
    for t in tokens:
        if t in keys:
            current = t
            out[t] = []
        elif current is None:
            raise ParseError(f"unexpected {t!r}")
        else:
            out[current].append(t)
    return out


def _shorthand(spec: str) -> CosetSpace:
    kind, _, arg = spec.partition(":")
    if kind == "rule":
        name, _, w = arg.partition(":")
        if w and not w.startswith("W="):
            raise ParseError(f"expected W=... after the rule name, found {w!r}")
        return RuleBackend(name, _w_value(w[2:]) if w else None)
    if kind == "finite":
        if not arg.startswith("z") or not arg[1:].isdigit() or int(arg[1:]) < 1:
            raise ParseError(f"finite shorthand is 'finite:z<n>', not {spec!r}")
        return FiniteGroupBackend.cyclic(int(arg[1:]), {"a": 1 % int(arg[1:])})
    if kind == "free":
        alphabet = Alphabet.symmetric("a", "b")
        gens = [g for g in arg.split(",") if g.strip()]
        return FreeGroupSubgroupBackend(alphabet, [alphabet.word(g.replace(".", " ")) for g in gens])
    raise ParseError(f"unknown backend {spec!r}; use rule:<name>, finite:z<n>, free:<gens> or a 'backend ...' line")


# ---------------------------------------------------------------------------
# DOT export


def _q(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot_body(g: LabelledGraph, prefix: str = "", fold_symmetric: bool = False, finals=(), indent="  "):
    lines = []
    finals = set(finals)
    for v in g.vertices:
        attrs = [f"label={_q(token(v))}"]
        if v == g.root:
            attrs.append("penwidth=2")
        if v in finals:
            attrs.append("shape=doublecircle")
        if v in g.frontier:
            attrs.append("style=dashed")
        lines.append(f"{indent}{_q(prefix + token(v))} [{', '.join(attrs)}];")
    alphabet = g.alphabet
    fold = fold_symmetric and alphabet.is_symmetric
    edges = sorted(g.edges(), key=lambda e: (token(e[0]), alphabet.index(e[1]), token(e[2])))
    present = set(edges)
    for x, a, y in edges:
        if fold and alphabet.index(a) > alphabet.index(alphabet.inverse(a)) and (y, alphabet.inverse(a), x) in present:
            # drawn once, from the partner edge
            continue
        lines.append(f"{indent}{_q(prefix + token(x))} -> {_q(prefix + token(y))} [label={_q(a)}];")
    return lines


def graph_to_dot(g: LabelledGraph, name: str = "X", fold_symmetric: bool = False, finals=()) -> str:
    """DOT digraph with labelled edges; with ``fold_symmetric`` each inverse pair is drawn once."""
    body = _dot_body(g, "", fold_symmetric, finals)
    return f"digraph {_q(name)} {{\n  rankdir=LR;\n" + "\n".join(body) + "\n}\n"


def graphs_to_dot(graphs: dict, fold_symmetric: bool = False, finals: dict | None = None) -> str:
    """Several graphs as clusters of one digraph (vertex ids prefixed by the cluster name)."""
    finals = finals or {}
    out = ["digraph G {", "  rankdir=LR;"]
    for i, (name, g) in enumerate(graphs.items()):
        out.append(f"  subgraph cluster_{i} {{")
        out.append(f"    label={_q(name)};")
        out += _dot_body(g, f"{name}:", fold_symmetric, finals.get(name, ()), indent="    ")
        out.append("  }")
    out.append("}")
    return "\n".join(out) + "\n"


def triangulation_to_dot(tri: PolygonTriangulation) -> str:
    """The polygon with vertices ``t0..tn``, its sides and its diagonals."""
    n = tri.n
    out = ["digraph P {", "  layout=circo;"]
    for i in range(n + 1):
        out.append(f"  t{i} [label={_q(f't{i}')}];")
    for i, a, j in tri.boundary_edges():
        out.append(f"  t{i} -> t{j} [label={_q(token(a))}];")
    for i, sym, j in sorted(tri.diagonals, key=lambda d: (d[0], d[2])):
        out.append(f"  t{i} -> t{j} [label={_q(token(sym))}, style=dashed];")
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# cone tables


def cone_table_to_text(table: ConeTypeTable, tau_radius: int = 2) -> str:
    """Line-oriented cone table: status, growth, representatives, successors, d matrix and tau."""
    lines = [
        f"status {table.status} depth {table.depth} radius {table.radius}",
        f"centers {' '.join(token(c) for c in table.centers)}",
    ]
    if table.reason:
        lines.append(f"reason {table.reason}")
    for n, count in table.growth:
        lines.append(f"growth {n} {count}")
    for t in table.types[1:]:
        lines.append(f"type {t.index} level {t.level} boundary {' '.join(token(v) for v in t.boundary)}")
    for i in sorted(table.successors):
        for s in table.successors[i]:
            link = " ".join(f"{token(a)}={token(b)}" for a, b in sorted(s.link.items(), key=lambda e: token(e[0])))
            lines.append(f"successor {s.parent} {s.type} {s.k} link {link}")
    for i, row in enumerate(table.d_matrix()):
        lines.append(f"d {i} {' '.join(map(str, row))}")
    if table.certified:
        dist = table.distance
        near = sorted((v for v, d in dist.items() if 0 < d <= tau_radius), key=lambda v: (dist[v], token(v)))
        for v in near:
            state, tau = phi_tau(table, v)
            lines.append(f"tau {token(v)} state {state[0]}:{token(state[1])} symbol {token(tau)}")
    return "\n".join(lines) + "\n"


def growth_table(table: ConeTypeTable) -> str:
    rows = ["level  classes"] + [f"{n:>5}  {c:>7}" for n, c in table.growth]
    return "\n".join(rows)

