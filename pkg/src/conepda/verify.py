"""Differential testing of every construction against independent oracles.

An *acceptor* is anything :func:`as_acceptor` understands: a
:class:`~conepda.pda.PdaAcceptor` (which carries its own budget), a
:class:`~conepda.regular.Dfa`, a coset space (the word problem oracle), a
:class:`GraphOracle`, or a plain callable ``word -> bool``.  Acceptors are
walked along the word trie so each prefix is processed once.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

from . import fixtures
from .backends import CosetSpace, build_schreier, schreier_graph
from .cones import classify_cone_types
from .grammar import cyk_member, to_cnf
from .graph import LabelledGraph, ball, enumerate_loop_language
from .pda import (
    PdaAcceptor,
    Verdict,
    build_pda_from_cones,
    coset_table_from_graph,
    finite_index_lift,
    free_group_pda,
    pda_is_deterministic,
    pda_to_cfg,
    synthesize,
    translate_pda,
)
from .regular import Dfa, reduce_dfa, schreier_to_dfa
from .words import Alphabet, format_word, free_reduce

SAMPLE_THRESHOLD = 10**6
SAMPLE_SIZE = 100_000
DEFAULT_SEED = 20240601
PDA_MAX_STACK = 14


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    construction: str
    oracle: str
    max_len: int
    agree: int = 0
    disagree: int = 0
    unknown: int = 0
    counterexample: str | None = None
    sampled: bool = False
    sample_size: int | None = None
    seed: int | None = None
    seconds: float = 0.0
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.disagree == 0 and all(c.passed for c in self.checks)

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    def summary(self) -> str:
        head = "PASS" if self.passed else "FAIL"
        words = f"agree={self.agree} disagree={self.disagree} unknown={self.unknown}"
        if self.sampled:
            words += f" (sampled {self.sample_size}, seed {self.seed})"
        line = f"{head} {self.construction} vs {self.oracle} max_len={self.max_len} {words}"
        if self.counterexample is not None:
            line += f" first counterexample: {self.counterexample}"
        for c in self.checks:
            line += f"\n    [{'ok' if c.passed else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else "")
        return line


def reports_to_json(reports, seed: int = DEFAULT_SEED) -> str:
    """JSON document ``{"passed", "seed", "reports": [...]}``."""
    return json.dumps(
        {"passed": all(r.passed for r in reports), "seed": seed, "reports": [r.to_dict() for r in reports]},
        indent=2,
        sort_keys=True,
    )


# ---------------------------------------------------------------------------
# acceptors


class GraphOracle:
    """``L_{x,y}`` of a deterministic (possibly lazy) graph, read by walking."""

    def __init__(self, g: LabelledGraph, x=None, y=None):
        self.g = g
        self.x = g.root if x is None else x
        self.y = self.x if y is None else y

    def start(self):
        return self.x

    def step(self, v, a):
        if v is None:
            return None
        if self.g.lazy:
            self.g.expand(v)
        return self.g.target(v, a)

    def verdict(self, v):
        return Verdict.ACCEPT if v is not None and v == self.y else Verdict.REJECT


class _SpaceAcceptor:
    def __init__(self, space: CosetSpace):
        self.space = space

    def start(self):
        return self.space.root_key

    def step(self, k, a):
        return self.space.act(k, a)

    def verdict(self, k):
        return Verdict.ACCEPT if k == self.space.root_key else Verdict.REJECT


class _DfaAcceptor:
    def __init__(self, d: Dfa):
        self.d = d

    def start(self):
        return self.d.initial

    def step(self, x, a):
        return None if x is None else self.d.next(x, a)

    def verdict(self, x):
        return Verdict.ACCEPT if x in self.d.finals else Verdict.REJECT


class _FunctionAcceptor:
    def __init__(self, f: Callable):
        self.f = f

    def start(self):
        return ()

    def step(self, w, a):
        return w + (a,)

    def verdict(self, w):
        v = self.f(w)
        if isinstance(v, Verdict):
            return v
        return Verdict.ACCEPT if v else Verdict.REJECT


def as_acceptor(obj):
    if isinstance(obj, (PdaAcceptor, GraphOracle, _SpaceAcceptor, _DfaAcceptor, _FunctionAcceptor)):
        return obj
    if isinstance(obj, CosetSpace):
        return _SpaceAcceptor(obj)
    if isinstance(obj, Dfa):
        return _DfaAcceptor(obj)
    if callable(obj):
        return _FunctionAcceptor(obj)
    raise TypeError(f"cannot use {type(obj).__name__} as an acceptor")


def grammar_acceptor(g):
    """CYK membership for a grammar (converted to normal form once)."""
    cnf = to_cnf(g)
    return _FunctionAcceptor(lambda w: cyk_member(cnf, w)[0])


# ---------------------------------------------------------------------------
# differential testing


def _record(report, w, va, vb, best):
    if va == Verdict.UNKNOWN or vb == Verdict.UNKNOWN:
        report.unknown += 1
    elif va == vb:
        report.agree += 1
    else:
        report.disagree += 1
        key = (len(w), w)
        if best[0] is None or key < best[0]:
            best[0] = key


def differential_test(
    lang_a,
    lang_b,
    alphabet: Alphabet,
    max_len: int,
    *,
    construction: str = "a",
    oracle: str = "b",
    sample_threshold: int | None = SAMPLE_THRESHOLD,
    sample_size: int = SAMPLE_SIZE,
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    """Compare two acceptors on all words of length ``<= max_len``.

    When there are more than ``sample_threshold`` words (and the threshold is
    not None) a uniform sample of ``sample_size`` words is tested instead and
    the seed is recorded.  The reported counterexample is the shortlex-least
    disagreement found.
    """
    a, b = as_acceptor(lang_a), as_acceptor(lang_b)
    report = VerificationReport(construction, oracle, max_len)
    letters = list(alphabet)
    best = [None]
    t0 = time.perf_counter()
    total = alphabet.count_words(max_len)
    if sample_threshold is not None and total > sample_threshold:
        rng = random.Random(seed)
        report.sampled, report.sample_size, report.seed = True, sample_size, seed
        lengths = list(range(max_len + 1))
        weights = [len(letters) ** n for n in lengths]
        for _ in range(sample_size):
            n = rng.choices(lengths, weights)[0]
            w = tuple(rng.choice(letters) for _ in range(n))
            na, nb = a.start(), b.start()
            for x in w:
                na, nb = a.step(na, x), b.step(nb, x)
            _record(report, w, a.verdict(na), b.verdict(nb), best)
    else:
        stack = [((), a.start(), b.start())]
        while stack:
            w, na, nb = stack.pop()
            _record(report, w, a.verdict(na), b.verdict(nb), best)
            if len(w) < max_len:
                for x in reversed(letters):
                    stack.append((w + (x,), a.step(na, x), b.step(nb, x)))
    if best[0] is not None:
        report.counterexample = format_word(best[0][1])
    report.seconds = round(time.perf_counter() - t0, 3)
    return report


def pda_report(m, oracle, alphabet, max_len, construction, oracle_name, **kw) -> VerificationReport:
    """Differential test of a PDA (budget ``max_stack = 14``) that also records determinism."""
    r = differential_test(
        PdaAcceptor(m, max_stack=kw.pop("max_stack", PDA_MAX_STACK)),
        oracle, alphabet, max_len, construction=construction, oracle=oracle_name, **kw,
    )
    r.check("deterministic", pda_is_deterministic(m))
    return r


# ---------------------------------------------------------------------------
# negative examples


def _loop_words(space: CosetSpace, max_len: int) -> list:
    return sorted(enumerate_loop_language(schreier_graph(space), space.root_key, space.root_key, max_len))


def transitivity_counterexample_suite(radius: int = 8, loop_len: int = 10, samples: int = 2000,
                                      seed: int = DEFAULT_SEED) -> VerificationReport:
    """The negative examples as structured checks.

    (a) the Z^2 lattice does not stabilise while its line does;
    (b) ``Y`` is certified, ``X_W`` is not, and ``(k, s) -> k`` is a 2-to-1
        label-preserving map on the explored ball;
    (c) ``K_W`` sits in ``K`` with index 2, seen on sampled loop words.
    """
    t0 = time.perf_counter()
    r = VerificationReport("negative-examples", "rule-backends", loop_len)
    # (a)
    z2 = classify_cone_types(schreier_graph(fixtures.z2_lattice()), max_radius=radius)
    counts = [c for n, c in z2.growth if 1 <= n <= radius]
    r.check("Z^2 cones unstable", not z2.certified, z2.status_line())
    r.check(
        f"Z^2 class counts strictly increase for n = 1..{radius}",
        len(counts) == radius and all(x < y for x, y in zip(counts, counts[1:])),
        " ".join(map(str, counts)),
    )
    line_space = fixtures.line()
    line = classify_cone_types(schreier_graph(line_space), max_radius=radius)
    r.check("line certified", line.certified, line.status_line())
    zb = build_schreier(fixtures.z2_lattice(), radius)
    axis = [v for v in zb.vertices if v[1] == 0]
    r.check(
        "a-edges on the x-axis form the line",
        all(line_space.act(x, a) == y[0] for (x, _) in axis for a, y in zb.known_out_edges((x, 0)) if a in ("a", "a^")),
    )
    # (b)
    yspace, xspace = fixtures.y_line(), fixtures.x_w()
    y = classify_cone_types(schreier_graph(yspace), max_radius=radius)
    r.check("Y certified", y.certified, y.status_line())
    xw = classify_cone_types(schreier_graph(xspace), max_radius=radius)
    r.check(f"X_W not stabilised up to radius {radius}", not xw.certified, xw.status_line())
    xb = ball(schreier_graph(xspace), [xspace.root_key], radius)
    edges = [(v, a) for v in xb.members for a in xspace.alphabet]
    r.check(
        f"(k, s) -> k label-preserving on the radius-{radius} ball",
        all(yspace.act(v[0], a) == xspace.act(v, a)[0] for v, a in edges),
        f"{len(edges)} edges",
    )
    r.check(
        "(k, s) -> (k, 1 - s) is a label-preserving automorphism",
        all(xspace.act((k, 1 - s), a) == (lambda t: (t[0], 1 - t[1]))(xspace.act((k, s), a)) for (k, s), a in edges),
    )
    fibres: dict = {}
    for k, s in xb.members:
        fibres.setdefault(k, set()).add(s)
    yball = set(ball(schreier_graph(yspace), [0], radius).members)
    r.check(
        "quotient is onto the Y ball with fibres of size at most 2",
        set(fibres) == yball and all(len(f) <= 2 for f in fibres.values()) and any(len(f) == 2 for f in fibres.values()),
        f"{sum(len(f) == 2 for f in fibres.values())} full fibres",
    )
    # (c)
    k_loops = _loop_words(yspace, loop_len)
    kw_loops = set(_loop_words(xspace, loop_len))
    r.check("every X_W loop word is a Y loop word", kw_loops <= set(k_loops), f"{len(kw_loops)} vs {len(k_loops)}")
    rng = random.Random(seed)
    sample = rng.sample(k_loops, min(samples, len(k_loops)))
    split = {0: [], 1: []}
    for w in sample:
        split[xspace.act_word(xspace.root_key, w)[1]].append(w)
    r.check("both cosets of K_W occur among sampled Y loops", bool(split[0]) and bool(split[1]),
            f"{len(split[0])} in K_W, {len(split[1])} outside")
    inv = yspace.alphabet
    bad = 0
    for u, v in zip(split[1], reversed(split[1])):
        w = u + tuple(inv.inverse(a) for a in reversed(v))
        bad += xspace.act_word(xspace.root_key, w) != xspace.root_key
    r.check("u v^-1 in K_W for u, v outside K_W (index 2)", bad == 0, f"{len(split[1])} pairs")
    dens = {n: (sum(1 for w in kw_loops if len(w) == n), sum(1 for w in k_loops if len(w) == n))
            for n in range(2, loop_len + 1, 2)}
    r.check("loop densities of K_W in K", all(0 < a < b for a, b in dens.values()),
            " ".join(f"{n}:{a}/{b}" for n, (a, b) in dens.items()))
    r.agree = sum(len(s) for s in split.values())
    r.seed = seed
    r.seconds = round(time.perf_counter() - t0, 3)
    return r


# ---------------------------------------------------------------------------
# suites


def suite_order_two(max_len: int = 10):
    space = fixtures.z2_space()
    dfa = schreier_to_dfa(space)
    m, _ = synthesize(space)
    out = [
        differential_test(dfa, space, space.alphabet, max_len, construction="schreier_to_dfa(Z2)", oracle="coset space"),
        pda_report(m, dfa, space.alphabet, max_len, "synthesize(Z2)", "schreier_to_dfa(Z2)"),
    ]
    a1, a2 = fixtures.order_two_automata()
    out.append(differential_test(reduce_dfa(a2), space, space.alphabet, max_len,
                                 construction="reduce_dfa(A2)", oracle="coset space"))
    out.append(differential_test(grammar_acceptor(pda_to_cfg(m)), space, space.alphabet, min(max_len, 8),
                                 construction="pda_to_cfg(Z2 PDA)", oracle="coset space"))
    return out


def suite_comb(max_len: int = 10):
    space = fixtures.comb()
    m, _ = synthesize(space)
    out = [pda_report(m, space, space.alphabet, max_len, "synthesize(comb)", "comb rule backend")]
    g = pda_to_cfg(m)
    out.append(differential_test(grammar_acceptor(g), space, space.alphabet, min(max_len, 6),
                                 construction="to_cnf(pda_to_cfg(comb PDA))", oracle="comb rule backend"))
    return out


def suite_z2(max_len: int = 10):
    line = fixtures.line()
    g = schreier_graph(line)
    table = classify_cone_types(g)
    m = build_pda_from_cones(table)
    return [
        pda_report(m, GraphOracle(g), line.alphabet, max_len, "build_pda_from_cones(line)", "graph walk"),
        transitivity_counterexample_suite(),
    ]


def suite_xw(max_len: int = 10):
    y = fixtures.y_line()
    m, _ = synthesize(y)
    return [
        pda_report(m, y, y.alphabet, max_len, "synthesize(Y)", "Y rule backend"),
        transitivity_counterexample_suite(),
    ]


def suite_dihedral(max_len: int = 10):
    mh, _ = synthesize(fixtures.line())
    table = fixtures.dihedral_coset_table()
    m = finite_index_lift(mh, table, check=fixtures.dihedral_check)
    r = differential_test(PdaAcceptor(m, max_stack=PDA_MAX_STACK), fixtures.dihedral_is_identity, table.alphabet,
                          max_len, construction="finite_index_lift(D_inf over <st>)", oracle="dihedral normal form")
    return [r]


def suite_free_subgroup(max_len: int = 10):
    out = []
    for name, space in (
        ("F2 tree", fixtures.free_group()),
        ("(F2, <a>)", fixtures.f2_cyclic_subgroup()),
        ("(F2, even length)", fixtures.f2_index2_subgroup()),
    ):
        m, _ = synthesize(space)
        out.append(pda_report(m, GraphOracle(schreier_graph(space)), space.alphabet, max_len,
                              f"synthesize {name}", "graph walk"))
    for k in (2, 3, 5):
        space = fixtures.cyclic_subgroup(k)
        d = schreier_to_dfa(space)
        out.append(differential_test(d, space, space.alphabet, max_len,
                                     construction=f"schreier_to_dfa(Z, {k}Z)", oracle="folding"))
    # translation along u(c) = aa, u(d) = b
    A = Alphabet.symmetric("a", "b")
    tree, _ = synthesize(fixtures.free_group())
    u = {"c": ("a", "a"), "c^": ("a^", "a^"), "d": ("b",), "d^": ("b^",)}
    C = Alphabet.symmetric("c", "d")
    mt = translate_pda(tree, u, C)
    folding = fixtures.free_group()
    out.append(pda_report(mt, lambda w: folding.contains(tuple(x for b in w for x in u[b])), C, min(max_len, 8),
                          "translate_pda(F2 tree, c->aa, d->b)", "folding of u(w)", max_stack=2 * PDA_MAX_STACK))
    # lift from the even-length subgroup back to F2
    table, letters, _ = coset_table_from_graph(fixtures.two_vertex_f2_graph())
    out.append(pda_report(free_group_pda(A), fixtures.free_group(), A, max_len, "free_group_pda(F2)", "folding"))
    ml = finite_index_lift(free_group_pda(letters), table)
    out.append(differential_test(PdaAcceptor(ml, max_stack=PDA_MAX_STACK), lambda w: not free_reduce(w, A), A,
                                 min(max_len, 8), construction="finite_index_lift(F2 over even length)",
                                 oracle="free reduction"))
    return out


SUITES = {
    "order-two": (suite_order_two, {"regular.schreier_to_dfa", "regular.reduce_dfa", "pda.synthesize",
                                "pda.build_pda_from_cones", "pda.pda_to_cfg", "grammar.to_cnf"}),
    "comb": (suite_comb, {"pda.synthesize", "pda.build_pda_from_cones", "pda.pda_to_cfg", "grammar.to_cnf"}),
    "z2": (suite_z2, {"pda.build_pda_from_cones"}),
    "xw": (suite_xw, {"pda.synthesize"}),
    "dihedral": (suite_dihedral, {"pda.finite_index_lift"}),
    "free-subgroup": (suite_free_subgroup, {"pda.synthesize", "pda.translate_pda", "pda.finite_index_lift",
                                            "pda.free_group_pda", "regular.schreier_to_dfa"}),
}


def covered_constructions() -> set:
    return set().union(*(covers for _, covers in SUITES.values()))


def run_suite(name: str, max_len: int = 10) -> list:
    """Run one suite (or ``"all"``) and return its reports."""
    if name == "all":
        out = []
        seen_negative = False
        for key, (fn, _) in SUITES.items():
            for r in fn(max_len):
                # the negative-example report appears in two suites; keep it once
                if r.construction == "negative-examples":
                    if seen_negative:
                        continue
                    seen_negative = True
                out.append(r)
        return out
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; expected one of {sorted(SUITES) + ['all']}")
    return SUITES[name][0](max_len)

