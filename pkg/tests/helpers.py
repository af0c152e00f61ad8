"""Brute-force oracles and random generators shared by the tests.

Everything here works directly on ``Automaton.delta`` and never calls the
algorithms it is used to check.
"""

from __future__ import annotations

import itertools
import random
from collections import deque

from polysync.automata import DCSA, NFA, PDFA, Automaton


def all_words(k: int, max_len: int):
    for n in range(max_len + 1):
        yield from itertools.product(range(k), repeat=n)


def nfa_accepts(aut: Automaton, word) -> bool:
    current = {aut.initial}
    for x in word:
        current = {t for q in current for t in aut.delta[q][x]}
    return bool(current & aut.finals)


def image(aut: Automaton, S, word) -> frozenset:
    current = set(S)
    for x in word:
        current = {t for q in current for t in aut.delta[q][x]}
    return frozenset(current)


def language(aut: Automaton, max_len: int) -> set:
    return {w for w in all_words(len(aut.alphabet), max_len) if nfa_accepts(aut, w)}


def loop_words(aut: Automaton, p: int, max_len: int) -> list:
    """Nonempty words labelling a path from p back to p."""
    found = []
    layer = [((), p)]
    for _ in range(max_len):
        nxt = []
        for w, q in layer:
            for x in range(len(aut.alphabet)):
                for t in aut.delta[q][x]:
                    nxt.append((w + (x,), t))
        found.extend(w for w, q in nxt if q == p)
        layer = nxt
    return found


def root(word):
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]


def loops_in_one_power(words) -> bool:
    words = [tuple(w) for w in words if w]
    if not words:
        return True
    r = root(min(words, key=len))
    return all(len(w) % len(r) == 0 and r * (len(w) // len(r)) == w for w in words)


def brute_polycyclic(aut: Automaton, max_len: int = 8) -> bool:
    return all(loops_in_one_power(loop_words(aut, p, max_len))
               for p in range(len(aut.states)))


def brute_sync(aut: Automaton) -> bool:
    """Subset BFS from the full state set."""
    start = frozenset(range(len(aut.states)))
    seen = {start}
    queue = deque([start])
    while queue:
        S = queue.popleft()
        if len(S) == 1:
            return True
        for x in range(len(aut.alphabet)):
            T = image(aut, S, (x,))
            if T not in seen:
                seen.add(T)
                queue.append(T)
    return False


def brute_constr_sync(A: Automaton, B: Automaton):
    """BFS over (subset of A, state of B) with its own transition code."""
    start = (frozenset(range(len(A.states))), B.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        S, p = node = queue.popleft()
        if len(S) == 1 and p in B.finals:
            word = []
            while parent[node] is not None:
                node, x = parent[node]
                word.append(x)
            return tuple(reversed(word))
        for x in range(len(A.alphabet)):
            if not B.delta[p][x]:
                continue
            (p2,) = B.delta[p][x]
            nxt = (image(A, S, (x,)), p2)
            if nxt not in parent:
                parent[nxt] = (node, x)
                queue.append(nxt)
    return None


def brute_scc(aut: Automaton) -> set:
    """SCCs via reachability closure (Floyd-Warshall style)."""
    n = len(aut.states)
    reach = [[i == j for j in range(n)] for i in range(n)]
    for q in range(n):
        for row in aut.delta[q]:
            for t in row:
                reach[q][t] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    return {frozenset(j for j in range(n) if reach[i][j] and reach[j][i]) for i in range(n)}


def brute_intersection_nonempty(dfas, max_len: int) -> bool:
    return any(all(nfa_accepts(d, w) for d in dfas)
               for w in all_words(len(dfas[0].alphabet), max_len))


def product_nonempty(dfas) -> bool:
    """BFS over tuples of states of several complete DFAs."""
    start = tuple(d.initial for d in dfas)
    seen = {start}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        if all(q in d.finals for q, d in zip(t, dfas)):
            return True
        for x in range(len(dfas[0].alphabet)):
            nxt = tuple(next(iter(d.delta[q][x])) for q, d in zip(t, dfas))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def transporter_bfs(aut: Automaton, S, T) -> bool:
    start = frozenset(S)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur <= T:
            return True
        for x in range(len(aut.alphabet)):
            nxt = image(aut, cur, (x,))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


# ---------------------------------------------------------------------------
# generators


def random_dcsa(rng: random.Random, n: int, k: int) -> Automaton:
    alphabet = "ab"[:k] if k <= 2 else tuple(f"x{i}" for i in range(k))
    trans = [(q, x, rng.randrange(n)) for q in range(n) for x in range(k)]
    return Automaton.build(DCSA, alphabet, n, trans)


def random_pdfa(rng: random.Random, n: int, k: int, density: float = 0.7) -> Automaton:
    trans = [(q, x, rng.randrange(n)) for q in range(n) for x in range(k)
             if rng.random() < density]
    finals = [q for q in range(n) if rng.random() < 0.4] or [rng.randrange(n)]
    return Automaton.build(PDFA, "ab"[:k], n, trans, initial=0, finals=finals)


def random_nfa(rng: random.Random, n: int, k: int) -> Automaton:
    trans = [(q, x, t) for q in range(n) for x in range(k) for t in range(n)
             if rng.random() < 0.3]
    finals = [q for q in range(n) if rng.random() < 0.4]
    return Automaton.build(NFA, "ab"[:k], n, trans, initial=0, finals=finals)


def random_polycyclic(rng: random.Random, max_states: int = 4, k: int = 2) -> Automaton:
    """PDFA built as a chain of blocks, each a simple cycle or a lone state.

    Edges between blocks only go forward, and inside a block every state
    uses exactly one letter for its cycle edge, so every SCC is a single
    cycle by construction.
    """
    n = rng.randint(1, max_states)
    sizes = []
    left = n
    while left:
        s = rng.randint(1, left)
        sizes.append(s)
        left -= s
    blocks = []
    start = 0
    for s in sizes:
        blocks.append(list(range(start, start + s)))
        start += s
    table = [[None] * k for _ in range(n)]
    for block in blocks:
        if len(block) == 1 and rng.random() < 0.5:
            continue  # acyclic singleton
        for i, q in enumerate(block):
            table[q][rng.randrange(k)] = block[(i + 1) % len(block)]
    for bi, block in enumerate(blocks):
        later = [q for b in blocks[bi + 1:] for q in b]
        for q in block:
            for x in range(k):
                if table[q][x] is None and later and rng.random() < 0.6:
                    table[q][x] = rng.choice(later)
    trans = [(q, x, t) for q in range(n) for x in range(k)
             if (t := table[q][x]) is not None]
    finals = [q for q in range(n) if rng.random() < 0.4] or [n - 1]
    return Automaton.build(PDFA, "ab"[:k], n, trans, initial=0, finals=finals)
