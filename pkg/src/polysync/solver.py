"""Constrained synchronization for polycyclic constraint automata.

Given a DCSA ``A`` and a constraint PDFA ``B``, decide whether some word
of ``L(B)`` synchronizes ``A``.  Witnesses are kept in compressed form: a
list of segments ``(pump state p, exponent n, connector v)`` standing for
``g_p^n v`` where ``g_p`` generates the loop language at ``p``.  Huge
exponents are evaluated through per-state orbits (tail plus cycle), so a
certificate is checked in time polynomial in its bit length.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .automata import (
    DCSA, Automaton, AutomatonError, KindError, StateSet, Word,
    closure_automaton, includes, reachable_states, step, with_alphabet,
)
from .polycyclic import NotPolycyclic, PolycyclicSkeleton, skeleton, star_automaton


class UndefinedTransition(AutomatonError):
    pass


class PumpStateMismatch(AutomatonError):
    pass


class PCaseNotApplicable(AutomatonError):
    pass


class MalformedCode(AutomatonError):
    pass


# ---------------------------------------------------------------------------
# orbits


@dataclass(frozen=True)
class Orbit:
    state: int
    word: Word
    tail: int
    cycle: int
    visited: tuple[int, ...]

    def state_at(self, x: int) -> int:
        """The state reached from `state` by ``word^x``."""
        if x <= self.tail:
            return self.visited[x]
        return self.visited[self.tail + (x - self.tail) % self.cycle]


def orbit(aut: Automaton, q: int, u: Sequence[int]) -> Orbit:
    if not u:
        raise ValueError("orbit of the empty word")
    u = tuple(u)
    seen = {}
    visited = []
    while q not in seen:
        seen[q] = len(visited)
        visited.append(q)
        q = aut.run(q, u)
        if q is None:
            raise KindError("orbit needs a complete automaton")
    tail = seen[q]
    return Orbit(visited[0], u, tail, len(visited) - tail, tuple(visited))


def power_step(aut: Automaton, S, u: Sequence[int], x: int) -> frozenset:
    """``δ(S, u^x)`` for arbitrarily large x."""
    S = frozenset(S)
    if x == 0 or not u:
        return S
    if x < 0:
        raise ValueError("negative exponent")
    return frozenset(orbit(aut, q, u).state_at(x) for q in S)


def subset_orbit(aut: Automaton, S, g: Sequence[int]) -> list[frozenset]:
    """``S, δ(S,g), δ(S,g²), …`` up to (excluding) the first repetition."""
    images = []
    seen = set()
    current = frozenset(S)
    while current not in seen:
        seen.add(current)
        images.append(current)
        current = step(aut, current, g)
    return images


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Segment:
    pump: int
    exponent: int
    connector: Word


@dataclass(frozen=True)
class WCode:
    segments: tuple[Segment, ...]

    def encode(self, constraint: Automaton) -> str:
        parts = []
        for seg in self.segments:
            v = constraint.format_word(seg.connector) or "-"
            parts.append(f"p={constraint.states[seg.pump]},n={seg.exponent},v={v}")
        return ";".join(parts)

    def unary_binary_encoding(self, constraint: Automaton) -> str:
        """Alternative form ``1^(p+1) # binary(n) v`` per segment (states
        numbered from 1); not used for round trips."""
        return "".join(
            "1" * (seg.pump + 1) + "#" + format(seg.exponent, "b")
            + constraint.format_word(seg.connector)
            for seg in self.segments)

    def expanded_length(self, skel: PolycyclicSkeleton) -> int:
        total = 0
        for seg in self.segments:
            if seg.exponent:
                total += seg.exponent * len(skel.generator(seg.pump))
            total += len(seg.connector)
        return total

    def expand(self, skel: PolycyclicSkeleton) -> Word:
        word: Word = ()
        for seg in self.segments:
            if seg.exponent:
                word += skel.generator(seg.pump) * seg.exponent
            word += seg.connector
        return word


def parse_wcode(text: str, constraint: Automaton) -> WCode:
    text = text.strip()
    if not text:
        return WCode(())
    segments = []
    for chunk in text.split(";"):
        fields = {}
        for item in chunk.split(","):
            key, sep, value = item.partition("=")
            if not sep or key not in ("p", "n", "v") or key in fields:
                raise MalformedCode(f"bad segment {chunk!r}")
            fields[key] = value
        if set(fields) != {"p", "n", "v"}:
            raise MalformedCode(f"segment {chunk!r} needs p=, n= and v=")
        if not fields["n"].isdigit():
            raise MalformedCode(f"exponent {fields['n']!r} is not a decimal number")
        segments.append(Segment(constraint.state_id(fields["p"]), int(fields["n"]),
                                constraint.word(fields["v"])))
    return WCode(tuple(segments))


@dataclass
class ConstrSyncResult:
    decision: bool
    witness: WCode | None = None
    expanded_length: int | None = None
    word: Word | None = None
    stats: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# helpers


def _prepare(A: Automaton, B: Automaton) -> Automaton:
    if A.kind != DCSA:
        raise KindError(f"input automaton must be a dcsa, got {A.kind}")
    if B.initial is None:
        raise KindError("constraint automaton needs an initial state")
    if B.kind not in ("pdfa", DCSA):
        raise KindError("constraint automaton must be deterministic")
    return with_alphabet(B, A.alphabet)


def encode_word(word: Sequence[int], skel: PolycyclicSkeleton) -> WCode:
    """Compress a word of ``L(B)`` (or any word B can read) into segments.

    Pumps are taken greedily wherever the rest of the word starts with the
    local loop generator; connectors then visit pairwise distinct states, so
    they are shorter than ``|P|`` and there are at most ``|P|`` segments.
    """
    B = skel.base
    word = tuple(word)
    p = B.initial
    i = 0
    segments = []
    while True:
        pump, n = p, 0
        g = skel.generator(p)
        if g:
            while word[i:i + len(g)] == g:
                i += len(g)
                n += 1
        start = i
        while i < len(word):
            p = B.succ(p, word[i])
            if p is None:
                raise UndefinedTransition("word leaves the constraint automaton")
            i += 1
            g = skel.generator(p)
            if g and word[i:i + len(g)] == g:
                break
        segments.append(Segment(pump, n, word[start:i]))
        if i >= len(word):
            return WCode(tuple(segments))


def verify_wcode(A: Automaton, B: Automaton, code: WCode, skel=None) -> bool:
    """Replay a certificate on the active states of A and the state of B."""
    B = _prepare(A, B)
    if skel is None:
        skel = skeleton(B)
    if len(code.segments) > B.n_states:
        raise MalformedCode("more segments than constraint states")
    S = frozenset(range(A.n_states))
    p = B.initial
    for seg in code.segments:
        if len(seg.connector) >= B.n_states:
            raise MalformedCode("connector longer than |P| - 1")
        if seg.exponent < 0:
            raise MalformedCode("negative exponent")
        if seg.exponent > 0:
            if seg.pump != p:
                raise PumpStateMismatch(
                    f"pump at {B.states[seg.pump]} while the constraint is in {B.states[p]}")
            g = skel.generator(p)
            if g is None:
                raise PumpStateMismatch(f"{B.states[p]} lies on no cycle")
            S = power_step(A, S, g, seg.exponent)
        for x in seg.connector:
            p = B.succ(p, x)
            if p is None:
                raise UndefinedTransition("connector leaves the constraint automaton")
        S = step(A, S, seg.connector)
    return len(S) == 1 and p in B.finals


# ---------------------------------------------------------------------------
# decision procedures


def oracle(A: Automaton, B: Automaton) -> ConstrSyncResult:
    """Breadth-first search over (active set of A, state of B).

    Exact for any deterministic constraint; exponential in ``|Q|``.  The
    shortest witness is returned as a word and, for polycyclic B, also as a
    certificate.
    """
    B = _prepare(A, B)
    start = (frozenset(range(A.n_states)), B.initial)
    parent = {start: None}
    queue = deque([start])
    found = None
    while queue:
        node = queue.popleft()
        S, p = node
        if len(S) == 1 and p in B.finals:
            found = node
            break
        for x in range(A.n_symbols):
            p2 = B.succ(p, x)
            if p2 is None:
                continue
            nxt = (step(A, S, (x,)), p2)
            if nxt not in parent:
                parent[nxt] = (node, x)
                queue.append(nxt)
    stats = {"explored": len(parent)}
    if found is None:
        return ConstrSyncResult(False, stats=stats)
    word = []
    node = found
    while parent[node] is not None:
        node, x = parent[node]
        word.append(x)
    word = tuple(reversed(word))
    code = None
    try:
        code = encode_word(word, skeleton(B))
    except NotPolycyclic:
        pass
    return ConstrSyncResult(True, code, len(word), word, stats)


def _connectors(B: Automaton) -> list[list[tuple[Word, int]]]:
    """Per state, the B-readable words whose run visits pairwise distinct
    states (so shorter than ``|P|``), in shortlex order, epsilon first."""
    table = []
    for p in range(B.n_states):
        found = [((), p, frozenset([p]))]
        layer = found
        while layer:
            nxt = []
            for w, q, seen in layer:
                for x in range(B.n_symbols):
                    q2 = B.succ(q, x)
                    if q2 is not None and q2 not in seen:
                        nxt.append((w + (x,), q2, seen | {q2}))
            found = found + nxt
            layer = nxt
        table.append([(w, q) for w, q, _ in found])
    return table


def _search(A: Automaton, B: Automaton, skel: PolycyclicSkeleton, max_exponents=None):
    """Depth-first search over segment sequences from ``(Q, p0)``.

    Every word of L(B) splits greedily into at most ``|P|`` segments whose
    connectors are simple paths, so restricting to those loses nothing.
    Failed ``(S, p, segments left)`` triples are memoized.
    """
    connectors = _connectors(B)
    failed = set()
    stats = {"search_nodes": 0}

    def go(S, p, remaining):
        key = (S, p, remaining)
        if key in failed:
            return None
        stats["search_nodes"] += 1
        g = skel.generator(p)
        images = subset_orbit(A, S, g) if g else [S]
        if max_exponents is not None:
            images = images[:max_exponents]
        moves = []
        for n, pumped in enumerate(images):
            for v, q in connectors[p]:
                S2 = step(A, pumped, v)
                if len(S2) == 1 and q in B.finals:
                    return [Segment(p, n, v)]
                moves.append((n, v, S2, q))
        if remaining > 1:
            for n, v, S2, q in moves:
                # an empty connector would only repeat this segment
                if v:
                    rest = go(S2, q, remaining - 1)
                    if rest is not None:
                        return [Segment(p, n, v)] + rest
        failed.add(key)
        return None

    found = go(frozenset(range(A.n_states)), B.initial, B.n_states)
    return found, stats


def _result(A, B, skel, segments, stats) -> ConstrSyncResult:
    if segments is None:
        return ConstrSyncResult(False, stats=stats)
    code = WCode(tuple(segments))
    if not verify_wcode(A, B, code, skel):
        raise AssertionError("search produced a certificate that does not verify")
    return ConstrSyncResult(True, code, code.expanded_length(skel), stats=stats)


def solve(A: Automaton, B: Automaton) -> ConstrSyncResult:
    """Complete search over certificates of at most ``|P|`` segments.

    At a pump state the candidate exponents are the distinct positions of
    the subset orbit ``S, δ(S,g), δ(S,g²), …`` before it repeats; every
    image reachable by some power is among them.
    """
    B = _prepare(A, B)
    skel = skeleton(B)
    segments, stats = _search(A, B, skel)
    return _result(A, B, skel, segments, stats)


def p_case_applicable(B: Automaton) -> bool:
    """Whether every reachable on-cycle state p has
    ``L(B_{p0,{p}}) ⊆ S(g_p*)``."""
    if B.initial is None:
        raise KindError("constraint automaton needs an initial state")
    skel = skeleton(B)
    reachable = reachable_states(B)
    for p, info in sorted(skel.cycle_info.items()):
        if p not in reachable:
            continue
        suffixes = closure_automaton(star_automaton(B.alphabet, info.generator), "suffix")
        if not includes(suffixes, B.restart(finals=[p])):
            return False
    return True


def solve_p_case(A: Automaton, B: Automaton) -> ConstrSyncResult:
    """`solve` with exponents limited to ``0..|Q|-1``.

    Sound when `p_case_applicable` holds: the prefix reaching a pump state is
    a suffix of a power of its generator, so the images ``δ(Q, u g^k)``
    shrink monotonically and stop changing after ``|Q| - 1`` steps.
    """
    B = _prepare(A, B)
    if not p_case_applicable(B):
        raise PCaseNotApplicable("constraint does not satisfy the suffix criterion")
    skel = skeleton(B)
    segments, stats = _search(A, B, skel, max_exponents=A.n_states)
    return _result(A, B, skel, segments, stats)
