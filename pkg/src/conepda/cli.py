"""``conepda`` command line.

Exit codes: 0 success, 1 verification failure (a counterexample is
printed), 2 usage or input error, 3 budget exhausted (answer unknown).

Which command exercises which result:

==================  =====================================================
examples order-two  Schreier graph of Z_2 and two automata for {a^2n}
regular             finite index <=> regular word problem; kappa
cones, build-pda    context-free graph => deterministic PDA
translate-pda       PDA along a letter substitution
lift-pda            PDA for a finite-index overgroup
pda-to-cfg          PDA => grammar (triple construction)
grammar             normal form, CYK, polygon triangulation, diagonals
verify              bounded differential tests and negative examples
==================  =====================================================
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import fixtures
from .backends import build_schreier, schreier_graph, word_problem_oracle
from .cones import classify_cone_types
from .errors import (
    ConePdaError,
    FrontierEscape,
    LanguageMismatch,
    NotCertified,
    NotWellDefined,
    ParseError,
    ResourceLimit,
)
from .grammar import (
    cyk_member,
    diagonal_distances,
    is_regular_grammar,
    min_yield,
    rightmost_derivation,
    to_cnf,
    triangulate,
)
from .pda import (
    PdaAcceptor,
    Verdict,
    build_pda_from_cones,
    finite_index_lift,
    pda_accepts,
    pda_is_deterministic,
    pda_to_cfg,
    translate_pda,
)
from .regular import Dfa, finite_index_check, kappa_homomorphism, reduce_dfa, schreier_to_dfa
from .textio import (
    cone_table_to_text,
    coset_table_to_text,
    dfa_to_text,
    grammar_to_text,
    graph_to_dot,
    graph_to_text,
    graphs_to_dot,
    growth_table,
    parse_backend,
    parse_coset_table,
    parse_dfa,
    parse_grammar,
    parse_graph,
    parse_pda,
    pda_to_text,
    triangulation_to_dot,
)
from .verify import GraphOracle, SUITES, differential_test, reports_to_json, run_suite
from .words import Alphabet, format_word

OK, FAILED, USAGE, UNKNOWN = 0, 1, 2, 3


class UsageError(Exception):
    pass


def positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if n <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def non_negative(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {n}")
    return n


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
        print(f"wrote {path}")


def _source(parser, required=True):
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--backend", help="backend spec: rule:<name>, finite:z<n>, free:<gens>, 'backend ...' or @file")
    group.add_argument("--graph", help="finite graph file")


def _load_graph(args):
    """``(graph, space or None)`` from ``--backend`` or ``--graph``."""
    if getattr(args, "backend", None):
        space = parse_backend(args.backend)
        return schreier_graph(space), space
    g, _ = parse_graph(_read(args.graph))
    return g, None


# ---------------------------------------------------------------------------
# commands


def cmd_examples(args):
    name = args.name
    if name == "list":
        print("order-two triangulation comb z2 xw dihedral")
        return OK
    if name == "order-two":
        a1, a2 = fixtures.order_two_automata()
        graphs = fixtures.order_two_graphs()
        print("Schreier graph of (Z_2, {1}, psi(a) = t):")
        print(graph_to_text(graphs["schreier"]), end="")
        print("automaton A1 (finals {1}):")
        print(dfa_to_text(a1), end="")
        print("automaton A2 (finals {o, f}):")
        print(dfa_to_text(a2), end="")
        if args.dot:
            _write(args.dot, graphs_to_dot(graphs, finals={"A1": a1.finals, "A2": a2.finals}))
        return OK
    if name == "triangulation":
        g = fixtures.six_letter_grammar()
        tri = triangulate(g, fixtures.SIX_LETTER_WORD, fixtures.six_letter_derivation())
        print(grammar_to_text(g), end="")
        print("word " + format_word(fixtures.SIX_LETTER_WORD))
        for i, sym, j in sorted(tri.diagonals):
            print(f"diagonal {i} {sym} {j}")
        if args.dot:
            _write(args.dot, triangulation_to_dot(tri))
        return OK
    spaces = {"comb": fixtures.comb(), "z2": fixtures.z2_lattice(), "xw": fixtures.x_w()}
    if name in spaces:
        space = spaces[name]
        print(space.describe())
        g = build_schreier(space, args.radius)
        if args.dot:
            _write(args.dot, graph_to_dot(g, name, fold_symmetric=True))
        return OK
    if name == "dihedral":
        print(coset_table_to_text(fixtures.dihedral_coset_table()), end="")
        return OK
    raise UsageError(f"unknown example {name!r}; try 'conepda examples list'")


def cmd_build_graph(args):
    space = parse_backend(args.backend)
    g = build_schreier(space, args.radius)
    _write(args.out, graph_to_text(g))
    if args.dot:
        _write(args.dot, graph_to_dot(g, fold_symmetric=args.fold_symmetric))
    return OK


def cmd_export_dot(args):
    if args.backend:
        g = build_schreier(parse_backend(args.backend), args.radius)
        finals = ()
    else:
        g, finals = parse_graph(_read(args.graph))
    _write(args.out, graph_to_dot(g, fold_symmetric=args.fold_symmetric, finals=finals))
    return OK


def _classify(args):
    g, space = _load_graph(args)
    table = classify_cone_types(g, max_radius=args.radius, depth=args.depth, patience=args.patience)
    return g, space, table


def cmd_cones(args):
    g, _, table = _classify(args)
    print(table.status_line())
    print(growth_table(table))
    if table.certified:
        print("d matrix:")
        for row in table.d_matrix():
            print("  " + " ".join(map(str, row)))
    if args.emit_table:
        _write(args.emit_table, cone_table_to_text(table))
    if args.dot:
        _write(args.dot, graph_to_dot(g, fold_symmetric=True))
    return OK


def cmd_build_pda(args):
    g, space, table = _classify(args)
    print(table.status_line())
    if not table.certified:
        print("no automaton: the cone classification is not certified within the radius")
        return UNKNOWN
    m = build_pda_from_cones(table)
    print(f"pda: {len(m.states)} states, {len(m.stack_symbols)} stack symbols, "
          f"{m.transition_count()} transitions, deterministic={pda_is_deterministic(m)}")
    _write(args.out, pda_to_text(m))
    if args.verify:
        oracle = space if space is not None else GraphOracle(g)
        r = differential_test(PdaAcceptor(m, max_stack=args.max_stack), oracle, g.alphabet, args.verify,
                              construction="build-pda", oracle="word problem" if space else "graph walk")
        print(r.summary())
        if r.disagree:
            return FAILED
        if r.unknown:
            return UNKNOWN
    return OK


def cmd_run_pda(args):
    m = parse_pda(_read(args.pda))
    v = pda_accepts(m, m.alphabet.word(args.word), max_steps=args.max_steps, max_stack=args.max_stack)
    print(v.value)
    return UNKNOWN if v == Verdict.UNKNOWN else OK


def _substitution(items, target: Alphabet):
    u = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"--subst expects 'letter=word', got {item!r}")
        b, w = item.split("=", 1)
        u[b.strip()] = target.word(w.replace(".", " "))
    return u


def cmd_translate_pda(args):
    m = parse_pda(_read(args.pda))
    u = _substitution(args.subst, m.alphabet)
    alphabet = Alphabet.parse(args.alphabet) if args.alphabet else None
    t = translate_pda(m, u, alphabet)
    print(f"translated: deterministic={pda_is_deterministic(t)}")
    _write(args.out, pda_to_text(t))
    return OK


def cmd_lift_pda(args):
    m = parse_pda(_read(args.pda))
    table = parse_coset_table(_read(args.table))
    lifted = finite_index_lift(m, table)
    _write(args.out, pda_to_text(lifted))
    return OK


def cmd_pda_to_cfg(args):
    m = parse_pda(_read(args.pda))
    g = pda_to_cfg(m)
    if args.cnf:
        g = to_cnf(g)
    _write(args.out, grammar_to_text(g))
    return OK


def cmd_grammar(args):
    g = parse_grammar(_read(args.grammar))
    if args.action == "cnf":
        c = to_cnf(g)
        print(f"# {is_regular_grammar(g)} grammar, {len(c.variables)} variables in normal form")
        _write(args.out, grammar_to_text(c))
        return OK
    if args.word is None:
        raise UsageError(f"grammar {args.action} needs --word")
    letters = g.terminals
    w = tuple(t for t in args.word.split() if t != "eps")
    bad = [a for a in w if a not in letters]
    if bad:
        raise UsageError(f"--word uses letters {bad} that are not terminals")
    c = to_cnf(g)
    ok, tree = cyk_member(c, w)
    if args.action == "member":
        print("true" if ok else "false")
        return OK
    if not ok:
        print(f"{format_word(w)} is not generated by the grammar")
        return FAILED
    if args.action == "triangulate":
        tri = triangulate(c, w, rightmost_derivation(tree))
        for i, sym, j in sorted(tri.diagonals, key=lambda d: (d[0], d[2])):
            print(f"diagonal {i} {sym} {j}")
        if args.dot:
            _write(args.dot, triangulation_to_dot(tri))
        return OK
    # check-diagonals
    if not (args.backend or args.graph):
        raise UsageError("grammar check-diagonals needs --backend or --graph")
    graph, _ = _load_graph(args)
    m = min_yield(c)[0]
    if args.mutate:
        m = {k: v - 1 for k, v in m.items()}
    rows = diagonal_distances(c, graph, graph.root, w, m=m)
    failed = False
    for i, sym, j, d, bound in rows:
        status = "ok" if d is not None else "FAIL"
        failed |= d is None
        print(f"{status} diagonal ({i}, {sym}, {j}) distance {'>' + str(bound) if d is None else d} bound {bound}")
    return FAILED if failed else OK


def cmd_regular(args):
    if args.action in ("build", "index", "kappa"):
        if not args.backend:
            raise UsageError(f"regular {args.action} needs --backend")
        space = parse_backend(args.backend)
    if args.action == "index":
        status, n = finite_index_check(space, args.cap)
        print(f"finite {n}" if status == "finite" else "unknown")
        return OK if status == "finite" else UNKNOWN
    if args.action == "build":
        d = schreier_to_dfa(space, args.cap)
        if not isinstance(d, Dfa):
            print(f"unknown: {d}")
            return UNKNOWN
        _write(args.out, dfa_to_text(d))
        return OK
    if not args.dfa:
        raise UsageError(f"regular {args.action} needs --dfa")
    d = parse_dfa(_read(args.dfa))
    if args.action == "reduce":
        _write(args.out, dfa_to_text(reduce_dfa(d)))
        return OK
    r = kappa_homomorphism(reduce_dfa(d), space, check_len=args.max_len)
    for y, k in sorted(r.mapping.items(), key=lambda e: str(e[0])):
        print(f"kappa {y} -> {k!r}")
    print(f"label_preserving={r.label_preserving} surjective={r.surjective} injective={r.injective}")
    return OK


def cmd_verify(args):
    reports = run_suite(args.suite, args.max_len)
    for r in reports:
        print(r.summary())
    if args.json:
        _write(args.json, reports_to_json(reports))
    if any(not r.passed for r in reports):
        return FAILED
    if any(r.unknown for r in reports):
        return UNKNOWN
    return OK


def cmd_word_problem(args):
    space = parse_backend(args.backend)
    w = space.alphabet.word(args.word)
    print("true" if word_problem_oracle(space, w) else "false")
    return OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conepda", description="Word problems, cone types and pushdown automata.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("examples", help="built-in example gallery")
    s.add_argument("name", help="order-two, triangulation, comb, z2, xw, dihedral or list")
    s.add_argument("--dot", help="write DOT output here")
    s.add_argument("--radius", type=positive, default=3)
    s.set_defaults(func=cmd_examples)

    s = sub.add_parser("build-graph", help="explore a Schreier graph to a radius")
    s.add_argument("--backend", required=True)
    s.add_argument("--radius", type=non_negative, default=4)
    s.add_argument("--out")
    s.add_argument("--dot")
    s.add_argument("--fold-symmetric", action="store_true")
    s.set_defaults(func=cmd_build_graph)

    for name, func in (("cones", cmd_cones), ("build-pda", cmd_build_pda)):
        s = sub.add_parser(name, help="classify cone types" if name == "cones" else "synthesize a PDA from cone types")
        _source(s)
        s.add_argument("--radius", type=positive, default=8)
        s.add_argument("--depth", type=positive, default=3)
        s.add_argument("--patience", type=positive, default=2)
        if name == "cones":
            s.add_argument("--emit-table")
            s.add_argument("--dot")
        else:
            s.add_argument("--out")
            s.add_argument("--verify", type=positive, metavar="MAX_LEN")
            s.add_argument("--max-stack", type=positive, default=14)
        s.set_defaults(func=func)

    s = sub.add_parser("run-pda", help="run a PDA on one word")
    s.add_argument("--pda", required=True)
    s.add_argument("--word", required=True)
    s.add_argument("--max-steps", type=positive, default=100_000)
    s.add_argument("--max-stack", type=positive, default=64)
    s.set_defaults(func=cmd_run_pda)

    s = sub.add_parser("translate-pda", help="PDA for the preimage under a letter substitution")
    s.add_argument("--pda", required=True)
    s.add_argument("--subst", action="append", required=True, metavar="LETTER=WORD")
    s.add_argument("--alphabet", help="new alphabet declaration, e.g. 'c c^ d d^'")
    s.add_argument("--out")
    s.set_defaults(func=cmd_translate_pda)

    s = sub.add_parser("lift-pda", help="lift a PDA along a finite coset table")
    s.add_argument("--pda", required=True)
    s.add_argument("--table", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_lift_pda)

    s = sub.add_parser("pda-to-cfg", help="grammar for a PDA's language")
    s.add_argument("--pda", required=True)
    s.add_argument("--cnf", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_pda_to_cfg)

    s = sub.add_parser("grammar", help="normal form, membership, triangulation, diagonal check")
    s.add_argument("action", choices=["cnf", "member", "triangulate", "check-diagonals"])
    s.add_argument("--grammar", required=True)
    s.add_argument("--word")
    s.add_argument("--dot")
    s.add_argument("--out")
    s.add_argument("--mutate", action="store_true", help="lower every m(T) by one (the check should then fail)")
    _source(s, required=False)
    s.set_defaults(func=cmd_grammar)

    s = sub.add_parser("regular", help="finite-index case")
    s.add_argument("action", choices=["build", "reduce", "kappa", "index"])
    s.add_argument("--backend")
    s.add_argument("--dfa")
    s.add_argument("--cap", type=positive, default=8)
    s.add_argument("--max-len", type=positive, default=10)
    s.add_argument("--out")
    s.set_defaults(func=cmd_regular)

    s = sub.add_parser("verify", help="differential test suites")
    s.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    s.add_argument("--max-len", type=positive, default=8)
    s.add_argument("--json")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("export-dot", help="DOT for a graph file or an explored backend")
    _source(s)
    s.add_argument("--radius", type=non_negative, default=3)
    s.add_argument("--fold-symmetric", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_export_dot)

    s = sub.add_parser("word-problem", help="decide one word with the coset oracle")
    s.add_argument("--backend", required=True)
    s.add_argument("--word", required=True)
    s.set_defaults(func=cmd_word_problem)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code not in (0, None) else OK
    try:
        return args.func(args)
    except (UsageError, ParseError) as e:
        print(f"conepda {args.command}: error: {e}", file=sys.stderr)
        return USAGE
    except (FrontierEscape, ResourceLimit) as e:
        print(f"conepda {args.command}: budget exhausted: {e}", file=sys.stderr)
        return UNKNOWN
    except (LanguageMismatch, NotWellDefined) as e:
        print(f"conepda {args.command}: verification failed: {e}", file=sys.stderr)
        return FAILED
    except NotCertified as e:
        print(f"conepda {args.command}: unknown: {e}", file=sys.stderr)
        return UNKNOWN
    except (ConePdaError, ValueError) as e:
        print(f"conepda {args.command}: error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
