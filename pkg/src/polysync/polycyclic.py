"""Polycyclic automata: detection, cycle words and closure constructions.

A PDFA is polycyclic when the loop language at every state lies in the
powers of one word, which happens exactly when each strongly connected
component is a single cycle.  The constructions here keep that shape:
start-state unfolding, union by merging unfolded starts, concatenation by
entering the second automaton from every final state, product
intersection, quotients and complement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .automata import (
    NFA, PDFA, Automaton, AutomatonError, KindError, SccDecomposition, Word,
    _same_alphabet, as_dfa, complement, complete, empty_language, fresh_name,
    product_intersection, reachable_states, restrict, scc, trim,
)


class NotPolycyclic(AutomatonError):
    pass


class ClosureNotPolycyclic(NotPolycyclic):
    """A construction produced an automaton that is not polycyclic."""


@dataclass(frozen=True)
class CycleInfo:
    state: int
    cycle_word: Word
    loop_exponent: int = 1

    @property
    def generator(self) -> Word:
        """The word whose powers form the loop language at `state`."""
        return self.cycle_word * self.loop_exponent


@dataclass(frozen=True)
class PolycyclicSkeleton:
    base: Automaton
    scc: SccDecomposition
    cycle_info: dict
    start_unfolded: bool

    def generator(self, p: int) -> Word | None:
        info = self.cycle_info.get(p)
        return None if info is None else info.generator


def _require_deterministic(aut: Automaton) -> None:
    if aut.kind == NFA:
        raise KindError("polycyclicity is defined for deterministic automata; "
                        "use nfa_loop_condition for an nfa")


def is_polycyclic(aut: Automaton) -> bool:
    _require_deterministic(aut)
    return all(scc(aut).is_single_cycle)


def _cycle_successor(aut: Automaton, q: int, component: frozenset) -> tuple[int, int]:
    for x in range(aut.n_symbols):
        t = aut.succ(q, x)
        if t is not None and t in component:
            return x, t
    raise AssertionError("state on a cycle without an in-component edge")


def skeleton(aut: Automaton) -> PolycyclicSkeleton:
    _require_deterministic(aut)
    decomposition = scc(aut)
    if not all(decomposition.is_single_cycle):
        raise NotPolycyclic("some strongly connected component is not a single cycle")
    info = {}
    for c in decomposition.cyclic_components():
        component = decomposition.components[c]
        for p in component:
            word = []
            q = p
            while True:
                x, q = _cycle_successor(aut, q, component)
                word.append(x)
                if q == p:
                    break
            info[p] = CycleInfo(p, tuple(word))
    unfolded = aut.initial is None or aut.initial not in info
    return PolycyclicSkeleton(aut, decomposition, info, unfolded)


def _require_polycyclic(*automata: Automaton) -> None:
    for aut in automata:
        if aut.initial is None:
            raise KindError("polycyclic constructions need an initial state")
        if not is_polycyclic(aut):
            raise NotPolycyclic("input automaton is not polycyclic")


def unfold_start(aut: Automaton) -> Automaton:
    """Equivalent polycyclic PDFA whose initial state lies on no cycle.

    When the start is on a cycle, a fresh copy of it with the same outgoing
    transitions (and the same finality) becomes the new start.
    """
    _require_polycyclic(aut)
    p0 = aut.initial
    decomposition = scc(aut)
    if decomposition.is_trivial[decomposition.component_of[p0]]:
        return aut
    new = aut.n_states
    finals = set(aut.finals)
    if p0 in aut.finals:
        finals.add(new)
    return Automaton(
        kind=PDFA,
        alphabet=aut.alphabet,
        states=aut.states + (fresh_name(aut.states[p0], aut.states),),
        delta=aut.delta + (aut.delta[p0],),
        initial=new,
        finals=frozenset(finals),
    )


def nfa_loop_condition(nfa: Automaton) -> bool:
    """Whether the reachable subset automaton (empty set dropped) is polycyclic."""
    if nfa.initial is None:
        raise KindError("nfa_loop_condition needs an initial state")
    return is_polycyclic(as_dfa(nfa))


def _finish(aut: Automaton, what: str) -> Automaton:
    result = trim(as_dfa(aut))
    if not is_polycyclic(result):
        raise ClosureNotPolycyclic(f"{what} is not polycyclic")
    return result


def _glue(b1: Automaton, b2: Automaton, entry_states: Iterable[int], finals2_extra):
    """NFA on ``P1 ∪ (P2 minus its start)``; the states in `entry_states`
    additionally get the outgoing transitions of b2's start."""
    s2 = b2.initial
    keep2 = [q for q in range(b2.n_states) if q != s2]
    offset = b1.n_states
    new_id = {q: offset + i for i, q in enumerate(keep2)}
    taken = set(b1.states)
    names2 = []
    for q in keep2:
        name = fresh_name(b2.states[q], taken)
        taken.add(name)
        names2.append(name)

    def moved(targets):
        # b2's start has no incoming edges after unfolding and trimming
        return frozenset(new_id[t] for t in targets if t != s2)

    entry = set(entry_states)
    rows = []
    for q in range(b1.n_states):
        row = []
        for x in range(b1.n_symbols):
            targets = set(b1.delta[q][x])
            if q in entry:
                targets |= moved(b2.delta[s2][x])
            row.append(frozenset(targets))
        rows.append(tuple(row))
    for q in keep2:
        rows.append(tuple(moved(b2.delta[q][x]) for x in range(b2.n_symbols)))
    finals = {new_id[f] for f in b2.finals if f != s2} | set(finals2_extra)
    return Automaton(NFA, b1.alphabet, b1.states + tuple(names2), tuple(rows),
                     b1.initial, frozenset(finals))


def union_pc(b1: Automaton, b2: Automaton) -> Automaton:
    _same_alphabet(b1, b2)
    _require_polycyclic(b1, b2)
    u1 = unfold_start(trim(b1))
    u2 = unfold_start(trim(b2))
    extra = set(u1.finals)
    if u2.initial in u2.finals:
        extra.add(u1.initial)
    merged = _glue(u1, u2, [u1.initial], extra)
    return _finish(merged, "union")


def concat_pc(b1: Automaton, b2: Automaton) -> Automaton:
    _same_alphabet(b1, b2)
    _require_polycyclic(b1, b2)
    u1 = trim(b1)
    u2 = unfold_start(trim(b2))
    extra = set(u1.finals) if u2.initial in u2.finals else set()
    glued = _glue(u1, u2, u1.finals, extra)
    return _finish(glued, "concatenation")


def intersection_pc(b1: Automaton, b2: Automaton) -> Automaton:
    _same_alphabet(b1, b2)
    _require_polycyclic(b1, b2)
    return _finish(product_intersection(b1, b2), "intersection")


def complement_pc(aut: Automaton, strict: bool = True) -> Automaton:
    """Complete with a trap state and swap final and non-final states.

    Over two or more letters the trap (now final) carries one self-loop per
    letter, so the result is usually not polycyclic; with ``strict`` that
    raises `ClosureNotPolycyclic`, otherwise the complement is returned as is.
    """
    _require_polycyclic(aut)
    result = complement(complete(aut))
    if strict:
        return _finish(result, "complement")
    return restrict(result, reachable_states(result))


def quotient_pc(aut: Automaton, u: Sequence[int]) -> Automaton:
    """Left quotient ``u^-1 L``: start where u leads; empty if u falls off."""
    _require_polycyclic(aut)
    target = aut.run(aut.initial, u)
    if target is None:
        return empty_language(aut.alphabet)
    return _finish(aut.restart(initial=target), "quotient")


# ---------------------------------------------------------------------------
# words


def primitive_root(word: Sequence[int]) -> Word:
    word = tuple(word)
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


def subset_of_single_word_powers(words: Iterable[Sequence[int]]) -> Word | None:
    """A word w with every input in w*, or None.

    Two nonempty words lie in the powers of a common word exactly when they
    commute, so all inputs must commute with the first one.
    """
    words = [tuple(w) for w in words if w]
    if not words:
        return ()
    first = words[0]
    if any(first + w != w + first for w in words[1:]):
        return None
    return primitive_root(first)


def word_automaton(alphabet: Sequence[str], word: Sequence[int]) -> Automaton:
    """PDFA accepting exactly ``{word}``."""
    n = len(word) + 1
    return Automaton.build(PDFA, alphabet, n, [(i, x, i + 1) for i, x in enumerate(word)],
                           initial=0, finals=[n - 1])


def star_automaton(alphabet: Sequence[str], word: Sequence[int]) -> Automaton:
    """PDFA accepting ``word*`` as a single cycle through the start."""
    if not word:
        return word_automaton(alphabet, ())
    n = len(word)
    return Automaton.build(PDFA, alphabet, n,
                           [(i, x, (i + 1) % n) for i, x in enumerate(word)],
                           initial=0, finals=[0])
