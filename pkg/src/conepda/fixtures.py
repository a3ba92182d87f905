"""Named example objects: small groups, graphs, automata and grammars.

Everything here is built from scratch on every call so callers may mutate
the results freely.
"""

from __future__ import annotations

from .backends import FiniteGroupBackend, FreeGroupSubgroupBackend, RuleBackend
from .grammar import Cfg, CnfGrammar
from .graph import LabelledGraph
from .pda import CosetTable
from .regular import Dfa
from .words import Alphabet


# ---------------------------------------------------------------------------
# the group of order two


def z2_space() -> FiniteGroupBackend:
    """``(Z_2, {1}, psi(a) = t)`` over the one-letter alphabet ``{a}``."""
    return FiniteGroupBackend.cyclic(2, {"a": 1})


def z2_symmetric_space() -> FiniteGroupBackend:
    """``Z_2`` over ``{a, a^}`` with both letters sent to ``t``."""
    return FiniteGroupBackend.cyclic(2, {"a": 1, "a^": 1}, alphabet=Alphabet.symmetric("a"))


def z2_graph() -> LabelledGraph:
    """The two-vertex Schreier graph with vertices ``1`` and ``t``."""
    g = LabelledGraph(Alphabet(["a"]), "1")
    g.add_edge("1", "a", "t")
    g.add_edge("t", "a", "1")
    return g


def z2_symmetric_graph() -> LabelledGraph:
    """Two vertices joined by both a/a^ edge pairs (a symmetric Z_2 graph)."""
    g = LabelledGraph(Alphabet.symmetric("a"), "o")
    for x, y in (("o", "x"), ("x", "o")):
        g.add_edge(x, "a", y)
        g.add_edge(y, "a^", x)
    return g


def order_two_automata():
    """``(A1, A2)``: the Schreier graph with finals ``{1}`` and the 4-cycle ``o u f l`` with finals ``{o, f}``."""
    a1 = Dfa(z2_graph(), "1", {"1"})
    g = LabelledGraph(Alphabet(["a"]), "o")
    for x, y in (("o", "u"), ("u", "f"), ("f", "l"), ("l", "o")):
        g.add_edge(x, "a", y)
    return a1, Dfa(g, "o", {"o", "f"})


def order_two_graphs() -> dict:
    a1, a2 = order_two_automata()
    return {"schreier": z2_graph(), "A1": a1.graph, "A2": a2.graph}


def even_a_language(max_len: int) -> set:
    return {("a",) * n for n in range(0, max_len + 1, 2)}


# ---------------------------------------------------------------------------
# free groups and subgroups


def free_group(*names: str) -> FreeGroupSubgroupBackend:
    """Trivial subgroup of the free group: the Cayley tree."""
    return FreeGroupSubgroupBackend(Alphabet.symmetric(*(names or ("a", "b"))), [])


def f2_cyclic_subgroup() -> FreeGroupSubgroupBackend:
    """``(F_2, <a>)``."""
    return FreeGroupSubgroupBackend(Alphabet.symmetric("a", "b"), [("a",)])


def two_vertex_f2_graph() -> LabelledGraph:
    """Two vertices with both generators swapping them: the even-length subgroup."""
    g = LabelledGraph(Alphabet.symmetric("a", "b"), "o")
    for x, y in (("o", "x"), ("x", "o")):
        for a in ("a", "b"):
            g.add_edge(x, a, y)
            g.add_edge(y, a + "^", x)
    return g


def f2_index2_subgroup() -> FreeGroupSubgroupBackend:
    """Words of even length in ``F_2``, an index-2 subgroup."""
    return FreeGroupSubgroupBackend(Alphabet.symmetric("a", "b"), [("a", "a"), ("a", "b"), ("a", "b^")])


def cyclic_subgroup(k: int) -> FreeGroupSubgroupBackend:
    """``(Z, kZ)`` realised as ``<a^k>`` in the free group of rank one."""
    return FreeGroupSubgroupBackend(Alphabet.symmetric("a"), [("a",) * k])


# ---------------------------------------------------------------------------
# rule-based infinite graphs


def comb() -> RuleBackend:
    return RuleBackend("comb")


def z2_lattice() -> RuleBackend:
    return RuleBackend("z2")


def line() -> RuleBackend:
    return RuleBackend("line")


def y_line() -> RuleBackend:
    return RuleBackend("y_line")


def x_w(W="quadratic") -> RuleBackend:
    return RuleBackend("x_w", W)


# ---------------------------------------------------------------------------
# infinite dihedral group


def dihedral_normal_form(w) -> tuple:
    """Reduce a word over ``{s, t}`` using ``s s = t t = 1``."""
    out: list = []
    for x in w:
        if out and out[-1] == x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def dihedral_is_identity(w) -> bool:
    return not dihedral_normal_form(w)


def _affine(w):
    """Element of the dihedral group as ``x -> sign * x + shift`` acting on the right."""
    sign, shift = 1, 0
    for x in w:
        # s: x -> -x, t: x -> 1 - x, a: x -> x + 1 (a = s t)
        if x == "s":
            sign, shift = -sign, -shift
        elif x == "t":
            sign, shift = -sign, 1 - shift
        elif x == "a":
            shift += 1
        elif x == "a^":
            shift -= 1
        else:
            raise ValueError(f"unknown letter {x!r}")
    return sign, shift


_DIHEDRAL_REP = {"1": (), "s": ("s",)}


def dihedral_check(g, b, u, h) -> bool:
    """``rep(g) b == psi(u) rep(h)`` in the infinite dihedral group."""
    bs = (b,) if isinstance(b, str) else tuple(b)
    return _affine(_DIHEDRAL_REP[g] + bs) == _affine(tuple(u) + _DIHEDRAL_REP[h])


def dihedral_coset_table() -> CosetTable:
    """Cosets of ``H = <s t>`` (a copy of Z) in ``<s, t | s^2, t^2>``."""
    return CosetTable(
        reps=("1", "s"),
        identity="1",
        alphabet=Alphabet(["s", "t"]),
        bar={("1", "s"): "s", ("1", "t"): "s", ("s", "s"): "1", ("s", "t"): "1"},
        u={("1", "s"): (), ("1", "t"): ("a^",), ("s", "s"): (), ("s", "t"): ("a",)},
    )


# ---------------------------------------------------------------------------
# grammars


def even_a_grammar() -> Cfg:
    """``S -> S S | a a | eps`` generating the even powers of ``a``."""
    return Cfg({"S"}, {"a"}, [("S", ("S", "S")), ("S", ("a", "a")), ("S", ())], "S")


def dyck_grammar(alphabet: Alphabet) -> Cfg:
    """Two-sided Dyck language: words over a symmetric alphabet that freely reduce to ``eps``."""
    rules = [("S", ("S", "S")), ("S", ())]
    for a in alphabet:
        rules.append(("S", (a, "S", alphabet.inverse(a))))
    return Cfg({"S"}, set(alphabet), rules, "S")


def zero_sum_grammar() -> Cfg:
    """Words over ``{a, a^}`` with as many ``a`` as ``a^`` (the one-counter language)."""
    return dyck_grammar(Alphabet.symmetric("a"))


def six_letter_grammar() -> CnfGrammar:
    """The six-letter example: ``w = a1 .. a6``; ``Th`` stands for a hatted variable."""
    rules = [
        ("S", ("T1", "T1h")),
        ("T1", ("T5", "T5h")),
        ("T1h", ("T2", "T2h")),
        ("T2h", ("T3", "T3h")),
        ("T3", ("T4", "T4h")),
        ("T5", ("a1",)),
        ("T5h", ("a2",)),
        ("T2", ("a3",)),
        ("T4", ("a4",)),
        ("T4h", ("a5",)),
        ("T3h", ("a6",)),
    ]
    variables = {lhs for lhs, _ in rules}
    return CnfGrammar(variables, [f"a{i}" for i in range(1, 7)], rules, "S")


SIX_LETTER_WORD = ("a1", "a2", "a3", "a4", "a5", "a6")


def six_letter_derivation() -> list:
    """The rightmost derivation as ``(position, (lhs, rhs))`` steps."""
    return [
        (0, ("S", ("T1", "T1h"))),
        (1, ("T1h", ("T2", "T2h"))),
        (2, ("T2h", ("T3", "T3h"))),
        (3, ("T3h", ("a6",))),
        (2, ("T3", ("T4", "T4h"))),
        (3, ("T4h", ("a5",))),
        (2, ("T4", ("a4",))),
        (1, ("T2", ("a3",))),
        (0, ("T1", ("T5", "T5h"))),
        (1, ("T5h", ("a2",))),
        (0, ("T5", ("a1",))),
    ]


SIX_LETTER_DIAGONALS = frozenset({(0, "T1", 2), (2, "T1h", 6), (3, "T2h", 6), (3, "T3", 5)})
