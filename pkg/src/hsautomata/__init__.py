"""Schreier automata of free-group subgroups and coset partitions."""

__version__ = "0.1.0"

from .errors import (AlphabetMismatch, BoundExceeded, EmptyGenerators, HSError, InfiniteIndex,
                     InvalidPartition, NotIrreducible, ParseError, PeriodAbsent, ResourceBound, ZeroConstantTerm)
from .words import Alphabet, Word, invert, parse_word, parse_words, reduce_concat
from .schreier import (CosetAutomaton, SchreierGraph, build_schreier, canonical_form, coset_reps,
                       enumerate_subgroups, walk)
from .spectral import (TransitionMatrix, build_B_matrix, check_limits, count_words, divisibility_check,
                       generating_function, min_exponents, period)
from .polynomials import Poly, RationalFunction, series_coeffs
from .partition import (CosetPartition, Part, build_C_matrix, build_D_matrix, density_check,
                        genfun_identity_check, period_repetition_checks, theorem1_analyze, verify_partition)
from .search import SearchConfig, find_partitions, search_counterexamples
