"""Prefixal factorizations of infinite words: unbordered prefixes, derived
words, the P_n hierarchy and the Sturmian classification."""

from .coloring import Coloring, FrontierReport, color, frontier, parse_coloring, refute_via_P1
from .dsl import parse_word
from .errors import (CrossCheckError, DecodeError, GenerationError, NotSturmianError, PrefalError,
                     SpecError, StallError)
from .morphic import (CodeTable, MorphicFixedPoint, Morphism, MorphismImage, apply, decode,
                      derived_morphism, fixed_point, gamma_fixed_point)
from .prefactor import (Completeness, DerivedChain, HierarchyVerdict, Status, UPAnalysis, analyze,
                        certify_up, classify_hierarchy, derive, derived_chain, greedy_factorize,
                        refine_prefixal, scan_up)
from .sturmian import (Directive, NormalForm, SturmianSpec, SturmianWord, classify_sturmian,
                       delta_base, desubstitute, is_in_P1, is_singular, standard_word,
                       sturmian_delta, sturmian_type, up_pair)
from .words import (Concat, InfiniteWord, Periodic, Relabel, Shift, factor_stats, is_balanced,
                    is_unbordered, shortest_border, uniform_recurrence_gap, word_isomorphic)

__version__ = "0.1.0"

__all__ = [
    "Coloring",
    "FrontierReport",
    "color",
    "frontier",
    "parse_coloring",
    "refute_via_P1",
    "parse_word",
    "CrossCheckError",
    "DecodeError",
    "GenerationError",
    "NotSturmianError",
    "PrefalError",
    "SpecError",
    "StallError",
    "CodeTable",
    "MorphicFixedPoint",
    "Morphism",
    "MorphismImage",
    "apply",
    "decode",
    "derived_morphism",
    "fixed_point",
    "gamma_fixed_point",
    "Completeness",
    "DerivedChain",
    "HierarchyVerdict",
    "Status",
    "UPAnalysis",
    "analyze",
    "certify_up",
    "classify_hierarchy",
    "derive",
    "derived_chain",
    "greedy_factorize",
    "refine_prefixal",
    "scan_up",
    "Directive",
    "NormalForm",
    "SturmianSpec",
    "SturmianWord",
    "classify_sturmian",
    "delta_base",
    "desubstitute",
    "is_in_P1",
    "is_singular",
    "standard_word",
    "sturmian_delta",
    "sturmian_type",
    "up_pair",
    "Concat",
    "InfiniteWord",
    "Periodic",
    "Relabel",
    "Shift",
    "factor_stats",
    "is_balanced",
    "is_unbordered",
    "shortest_border",
    "uniform_recurrence_gap",
    "word_isomorphic",
]
