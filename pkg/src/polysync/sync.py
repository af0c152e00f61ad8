"""Unconstrained synchronization through the pair automaton."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .automata import DCSA, Automaton, KindError, Word, step


def _require_dcsa(aut: Automaton) -> None:
    if aut.kind != DCSA:
        raise KindError(f"expected a dcsa, got {aut.kind}")


class PairAutomaton:
    """States are the unordered pairs ``{q, q'}`` of a DCSA, singletons included."""

    def __init__(self, base: Automaton):
        _require_dcsa(base)
        self.base = base
        n = base.n_states
        self.pairs = [(p, q) for p in range(n) for q in range(p, n)]
        self.index = {pair: i for i, pair in enumerate(self.pairs)}
        self.delta = []
        for p, q in self.pairs:
            row = []
            for x in range(base.n_symbols):
                a, b = base.succ(p, x), base.succ(q, x)
                row.append(self.index[(min(a, b), max(a, b))])
            self.delta.append(row)

    def __len__(self):
        return len(self.pairs)

    def pair(self, p: int, q: int) -> int:
        return self.index[(min(p, q), max(p, q))]

    def is_singleton(self, i: int) -> bool:
        p, q = self.pairs[i]
        return p == q

    def merging_word(self, p: int, q: int) -> Word | None:
        """Shortest word sending p and q to one state; shortlex-least among those."""
        start = self.pair(p, q)
        parent = {start: None}
        queue = deque([start])
        while queue:
            i = queue.popleft()
            if self.is_singleton(i):
                word = []
                while parent[i] is not None:
                    i, x = parent[i]
                    word.append(x)
                return tuple(reversed(word))
            for x, j in enumerate(self.delta[i]):
                if j not in parent:
                    parent[j] = (i, x)
                    queue.append(j)
        return None

    def mergeable(self) -> list[bool]:
        """For every pair, whether some word collapses it (backward search from singletons)."""
        preds = [[] for _ in self.pairs]
        for i, row in enumerate(self.delta):
            for j in row:
                preds[j].append(i)
        good = [self.is_singleton(i) for i in range(len(self.pairs))]
        queue = deque(i for i, g in enumerate(good) if g)
        while queue:
            j = queue.popleft()
            for i in preds[j]:
                if not good[i]:
                    good[i] = True
                    queue.append(i)
        return good


@dataclass(frozen=True)
class SyncWitness:
    word: Word
    sink: int


def is_synchronizing(aut: Automaton) -> bool:
    return all(PairAutomaton(aut).mergeable())


def synchronizing_word(aut: Automaton) -> SyncWitness | None:
    """Greedy pair merging: repeatedly collapse the two lowest active states.

    The word has length at most ``|Q|^3`` and is checked before it is returned.
    """
    pairs = PairAutomaton(aut)
    if not all(pairs.mergeable()):
        return None
    word: Word = ()
    active = frozenset(range(aut.n_states))
    while len(active) > 1:
        p, q = sorted(active)[:2]
        piece = pairs.merging_word(p, q)
        word += piece
        active = step(aut, active, piece)
    image = step(aut, range(aut.n_states), word)
    if len(image) != 1:
        raise AssertionError("greedy synchronizing word failed verification")
    (sink,) = image
    return SyncWitness(word, sink)


def pair_merge_language(aut: Automaton, q: int, q2: int) -> Automaton:
    """Complete DFA over pair states accepting the words that merge q and q2."""
    pairs = PairAutomaton(aut)
    names = tuple("{" + aut.states[a] + ("," + aut.states[b] if a != b else "") + "}"
                  for a, b in pairs.pairs)
    return Automaton(
        kind=DCSA,
        alphabet=aut.alphabet,
        states=names,
        delta=tuple(tuple(frozenset([j]) for j in row) for row in pairs.delta),
        initial=pairs.pair(q, q2),
        finals=frozenset(i for i in range(len(pairs)) if pairs.is_singleton(i)),
    )
