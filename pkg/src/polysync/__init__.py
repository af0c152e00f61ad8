"""Constrained synchronization with polycyclic constraint automata."""

from .automata import (
    DCSA, NFA, PDFA, AlphabetMismatch, Automaton, AutomatonError, KindError,
    ParseError, SccDecomposition, closure_automaton, complement, complete,
    determinize, includes, is_empty, parse_automaton, product_intersection, scc,
    serialize_automaton, step, to_dot,
)
from .polycyclic import (
    CycleInfo, NotPolycyclic, PolycyclicSkeleton, complement_pc, concat_pc,
    intersection_pc, is_polycyclic, nfa_loop_condition, quotient_pc, skeleton,
    subset_of_single_word_powers, union_pc, unfold_start,
)
from .solver import (
    ConstrSyncResult, Orbit, WCode, oracle, orbit, p_case_applicable, power_step,
    solve, solve_p_case, verify_wcode,
)
from .sync import PairAutomaton, SyncWitness, is_synchronizing, synchronizing_word

__version__ = "0.1.0"
