"""Word problems of Schreier graphs, cone types and pushdown automata."""

from .backends import (
    CosetSpace,
    FiniteGroupBackend,
    FreeGroupSubgroupBackend,
    RuleBackend,
    build_schreier,
    schreier_graph,
    spanning_tree_generators,
    word_problem_oracle,
)
from .cones import CERTIFIED, UNSTABLE, ConeTypeTable, classify_cone_types
from .grammar import Cfg, CnfGrammar, cyk_member, to_cnf, triangulate
from .graph import LabelledGraph, ball, check_structure, enumerate_loop_language
from .pda import (
    Pda,
    PdaAcceptor,
    Verdict,
    finite_index_lift,
    pda_accepts,
    pda_is_deterministic,
    pda_to_cfg,
    synthesize,
    translate_pda,
)
from .regular import Dfa, finite_index_check, kappa_homomorphism, schreier_to_dfa
from .words import Alphabet, free_reduce

__version__ = "0.1.0"
