"""Finite automata with dense integer states and symbols.

One `Automaton` type covers complete deterministic semi-automata (DCSA),
partial deterministic automata (PDFA) and nondeterministic automata (NFA).
States are ``0..n-1`` in declaration order; symbols are indices into the
alphabet tuple.  Words are tuples of symbol ids and state sets are
frozensets of state ids.

Besides the type and its text format this module carries the usual toolbox:
strongly connected components, subset construction, completion, complement,
product, emptiness, inclusion and the prefix/suffix/factor closures.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

DCSA = "dcsa"
PDFA = "pdfa"
NFA = "nfa"
KINDS = (DCSA, PDFA, NFA)

Word = tuple  # tuple[int, ...]
StateSet = frozenset  # frozenset[int]


class AutomatonError(ValueError):
    pass


class ParseError(AutomatonError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class KindError(AutomatonError):
    """The transition structure contradicts the declared kind."""

    def __init__(self, message: str):
        super().__init__(f"kind violation: {message}")


class AlphabetMismatch(AutomatonError):
    pass


@dataclass(frozen=True)
class Automaton:
    kind: str
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    delta: tuple[tuple[frozenset, ...], ...]
    initial: int | None = None
    finals: frozenset = frozenset()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise AutomatonError(f"unknown kind {self.kind!r}")
        if not self.alphabet:
            raise AutomatonError("empty alphabet")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise AutomatonError("alphabet tokens must be distinct")
        if not self.states:
            raise AutomatonError("automaton needs at least one state")
        if len(set(self.states)) != len(self.states):
            raise AutomatonError("state names must be distinct")
        n, k = len(self.states), len(self.alphabet)
        if len(self.delta) != n or any(len(row) != k for row in self.delta):
            raise AutomatonError("transition table has the wrong shape")
        for row in self.delta:
            for targets in row:
                if any(not 0 <= t < n for t in targets):
                    raise AutomatonError("transition target out of range")
        if self.initial is not None and not 0 <= self.initial < n:
            raise AutomatonError("initial state out of range")
        if any(not 0 <= f < n for f in self.finals):
            raise AutomatonError("final state out of range")
        if self.kind != DCSA and self.initial is None:
            raise KindError(f"{self.kind} requires an initial state")
        if self.kind in (DCSA, PDFA):
            for q, row in enumerate(self.delta):
                for x, targets in enumerate(row):
                    if len(targets) > 1:
                        raise KindError(
                            f"{self.kind} has two successors for "
                            f"({self.states[q]}, {self.alphabet[x]})")
                    if self.kind == DCSA and not targets:
                        raise KindError(
                            f"dcsa is missing ({self.states[q]}, {self.alphabet[x]})")

    @classmethod
    def build(cls, kind, alphabet, states, transitions=(), initial=None, finals=()):
        """Build from names (or ids).

        `alphabet` may be a string of single-character symbols, `states` a
        count or a sequence of names, `transitions` triples
        ``(source, symbol, target)``.
        """
        alphabet = tuple(alphabet)
        if isinstance(states, int):
            states = tuple(f"q{i}" for i in range(states))
        states = tuple(states)
        state_id = {name: i for i, name in enumerate(states)}
        symbol_id = {name: i for i, name in enumerate(alphabet)}

        def sid(q):
            return q if isinstance(q, int) else state_id[q]

        table = [[set() for _ in alphabet] for _ in states]
        for src, sym, dst in transitions:
            x = sym if isinstance(sym, int) else symbol_id[sym]
            table[sid(src)][x].add(sid(dst))
        return cls(
            kind=kind,
            alphabet=alphabet,
            states=states,
            delta=tuple(tuple(frozenset(t) for t in row) for row in table),
            initial=None if initial is None else sid(initial),
            finals=frozenset(sid(f) for f in finals),
        )

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_symbols(self) -> int:
        return len(self.alphabet)

    def state_id(self, name: str) -> int:
        try:
            return self.states.index(name)
        except ValueError:
            raise AutomatonError(f"unknown state {name!r}") from None

    def successors(self, q: int, x: int) -> frozenset:
        return self.delta[q][x]

    def succ(self, q: int, x: int) -> int | None:
        """The unique successor of a deterministic automaton, or None."""
        targets = self.delta[q][x]
        if not targets:
            return None
        if len(targets) > 1:
            raise KindError("succ() on a nondeterministic cell")
        (t,) = targets
        return t

    def run(self, q: int | None, word: Sequence[int]) -> int | None:
        for x in word:
            if q is None:
                return None
            q = self.succ(q, x)
        return q

    def accepts(self, word: Sequence[int]) -> bool:
        if self.initial is None:
            return False
        current = step(self, frozenset([self.initial]), word)
        return not current.isdisjoint(self.finals)

    def transitions(self) -> Iterator[tuple[int, int, int]]:
        for q, row in enumerate(self.delta):
            for x, targets in enumerate(row):
                for t in sorted(targets):
                    yield q, x, t

    def is_deterministic(self) -> bool:
        return all(len(t) <= 1 for row in self.delta for t in row)

    def is_complete(self) -> bool:
        return all(len(t) >= 1 for row in self.delta for t in row)

    def restart(self, initial: int | None = None, finals: Iterable[int] | None = None):
        """Return ``A_{r,S}``: the same transitions with a new start and/or final set."""
        return Automaton(
            kind=self.kind,
            alphabet=self.alphabet,
            states=self.states,
            delta=self.delta,
            initial=self.initial if initial is None else initial,
            finals=self.finals if finals is None else frozenset(finals),
        )

    def word(self, text: str) -> Word:
        return parse_word(text, self.alphabet)

    def format_word(self, word: Sequence[int]) -> str:
        return format_word(word, self.alphabet)

    def __str__(self):
        return serialize_automaton(self)


def parse_word(text: str, alphabet: Sequence[str]) -> Word:
    """Read a word: ``-`` or empty is epsilon; tokens are separated by
    whitespace or dots, or given as plain characters when every symbol is a
    single character."""
    text = text.strip()
    if text in ("", "-"):
        return ()
    index = {a: i for i, a in enumerate(alphabet)}
    if any(c.isspace() or c == "." for c in text):
        tokens = text.replace(".", " ").split()
    elif text in index:
        tokens = [text]
    elif all(len(a) == 1 for a in alphabet):
        tokens = list(text)
    else:
        tokens = [text]
    try:
        return tuple(index[t] for t in tokens)
    except KeyError as e:
        raise AutomatonError(f"symbol {e.args[0]!r} not in alphabet") from None


def format_word(word: Sequence[int], alphabet: Sequence[str]) -> str:
    sep = "" if all(len(a) == 1 for a in alphabet) else "."
    return sep.join(alphabet[x] for x in word)


def words_up_to(n_symbols: int, max_len: int) -> Iterator[Word]:
    """All words of length <= max_len in shortlex order."""
    layer = [()]
    for _ in range(max_len + 1):
        yield from layer
        layer = [w + (x,) for w in layer for x in range(n_symbols)]


# ---------------------------------------------------------------------------
# text format


_KEYS = ("kind", "alphabet", "states", "initial", "final", "trans")


def parse_automaton(text: str | bytes) -> Automaton:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    fields: dict[str, tuple[int, int, list[str]]] = {}
    finals: list[tuple[int, int, str]] = []
    trans: list[tuple[int, int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in _KEYS:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError(f"expected one of {', '.join(_KEYS)} followed by ':'",
                             lineno, col)
        value_col = len(key) + 2 + (len(line) - len(line.lstrip()))
        tokens = rest.split()
        if key == "trans":
            if len(tokens) != 3:
                raise ParseError("trans needs 'source symbol target'", lineno, value_col)
            trans.append((lineno, value_col, tokens))
        elif key == "final":
            finals.extend((lineno, value_col, t) for t in tokens)
        else:
            if key in fields:
                raise ParseError(f"duplicate {key} line", lineno, 1)
            fields[key] = (lineno, value_col, tokens)

    for key in ("kind", "alphabet", "states"):
        if key not in fields:
            raise ParseError(f"missing {key} line", len(text.splitlines()) + 1)
    lineno, col, kind_tokens = fields["kind"]
    if len(kind_tokens) != 1 or kind_tokens[0] not in KINDS:
        raise ParseError("kind must be one of dcsa, pdfa, nfa", lineno, col)
    kind = kind_tokens[0]
    lineno, col, alphabet = fields["alphabet"]
    if not alphabet:
        raise ParseError("empty alphabet", lineno, col)
    if len(set(alphabet)) != len(alphabet):
        raise ParseError("duplicate alphabet symbol", lineno, col)
    lineno, col, states = fields["states"]
    if not states:
        raise ParseError("no states declared", lineno, col)
    if len(set(states)) != len(states):
        raise ParseError("duplicate state name", lineno, col)
    state_id = {s: i for i, s in enumerate(states)}
    symbol_id = {a: i for i, a in enumerate(alphabet)}

    def lookup(name, lineno, col):
        if name not in state_id:
            raise ParseError(f"dangling state name {name!r}", lineno, col)
        return state_id[name]

    initial = None
    if "initial" in fields:
        lineno, col, toks = fields["initial"]
        if len(toks) != 1:
            raise ParseError("initial takes exactly one state", lineno, col)
        initial = lookup(toks[0], lineno, col)
    final_ids = [lookup(name, ln, col) for ln, col, name in finals]
    triples = []
    for lineno, col, (src, sym, dst) in trans:
        if sym not in symbol_id:
            raise ParseError(f"unknown symbol {sym!r}", lineno, col)
        triples.append((lookup(src, lineno, col), symbol_id[sym], lookup(dst, lineno, col)))
    try:
        return Automaton.build(kind, alphabet, states, triples, initial, final_ids)
    except KindError:
        raise
    except AutomatonError as e:
        raise KindError(str(e)) from None


def serialize_automaton(aut: Automaton) -> str:
    lines = [
        f"kind: {aut.kind}",
        "alphabet: " + " ".join(aut.alphabet),
        "states: " + " ".join(aut.states),
    ]
    if aut.initial is not None:
        lines.append(f"initial: {aut.states[aut.initial]}")
    lines.append("final:" + "".join(" " + aut.states[f] for f in sorted(aut.finals)))
    for q, x, t in aut.transitions():
        lines.append(f"trans: {aut.states[q]} {aut.alphabet[x]} {aut.states[t]}")
    return "\n".join(lines) + "\n"


def to_dot(aut: Automaton, name: str = "automaton") -> str:
    out = [f"digraph {name} {{", "  rankdir=LR;"]
    for q, label in enumerate(aut.states):
        shape = "doublecircle" if q in aut.finals else "circle"
        out.append(f'  s{q} [label="{label}", shape={shape}];')
    if aut.initial is not None:
        out.append('  start [shape=point];')
        out.append(f"  start -> s{aut.initial};")
    edges: dict[tuple[int, int], list[str]] = {}
    for q, x, t in aut.transitions():
        edges.setdefault((q, t), []).append(aut.alphabet[x])
    for (q, t), labels in sorted(edges.items()):
        out.append(f'  s{q} -> s{t} [label="{",".join(labels)}"];')
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# basic operations


def step(aut: Automaton, S: Iterable[int], w: Sequence[int]) -> frozenset:
    """Image of the state set `S` under the word `w`."""
    current = frozenset(S)
    delta = aut.delta
    for x in w:
        nxt = set()
        for q in current:
            nxt |= delta[q][x]
        current = frozenset(nxt)
    return current


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    name = base
    while name in taken:
        name += "'"
    return name


def reachable_states(aut: Automaton, start: Iterable[int] | None = None) -> frozenset:
    if start is None:
        start = () if aut.initial is None else (aut.initial,)
    seen = set(start)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for targets in aut.delta[q]:
            for t in targets:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
    return frozenset(seen)


def coaccessible_states(aut: Automaton) -> frozenset:
    preds: list[set[int]] = [set() for _ in aut.states]
    for q, _, t in aut.transitions():
        preds[t].add(q)
    seen = set(aut.finals)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for p in preds[q]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return frozenset(seen)


def restrict(aut: Automaton, keep: Iterable[int], kind: str | None = None) -> Automaton:
    """Sub-automaton on `keep` (original order preserved, edges leaving it dropped)."""
    keep = sorted(set(keep))
    new_id = {q: i for i, q in enumerate(keep)}
    delta = tuple(
        tuple(frozenset(new_id[t] for t in aut.delta[q][x] if t in new_id)
              for x in range(aut.n_symbols))
        for q in keep)
    if kind is None:
        kind = aut.kind
        if kind == DCSA and not all(t for row in delta for t in row):
            kind = PDFA
    return Automaton(
        kind=kind,
        alphabet=aut.alphabet,
        states=tuple(aut.states[q] for q in keep),
        delta=delta,
        initial=new_id.get(aut.initial) if aut.initial is not None else None,
        finals=frozenset(new_id[f] for f in aut.finals if f in new_id),
    )


def empty_language(alphabet: Sequence[str], kind: str = PDFA) -> Automaton:
    return Automaton(kind=kind, alphabet=tuple(alphabet), states=("q0",),
                     delta=((frozenset(),) * len(alphabet),), initial=0)


def accessible(aut: Automaton) -> Automaton:
    """Keep only the states reachable from the initial state."""
    return restrict(aut, reachable_states(aut))


def trim(aut: Automaton) -> Automaton:
    """Keep states that are both reachable and co-accessible.

    An automaton with empty language collapses to a single non-final state.
    """
    useful = reachable_states(aut) & coaccessible_states(aut)
    if aut.initial is None or aut.initial not in useful:
        return empty_language(aut.alphabet, NFA if aut.kind == NFA else PDFA)
    return restrict(aut, useful)


def with_alphabet(aut: Automaton, alphabet: Sequence[str]) -> Automaton:
    """Re-index `aut` over a superset alphabet; new symbols get no transitions."""
    alphabet = tuple(alphabet)
    if not set(aut.alphabet) <= set(alphabet):
        raise AlphabetMismatch(
            f"alphabet {' '.join(aut.alphabet)} is not contained in {' '.join(alphabet)}")
    if alphabet == aut.alphabet:
        return aut
    old = {a: i for i, a in enumerate(aut.alphabet)}
    delta = tuple(
        tuple(row[old[a]] if a in old else frozenset() for a in alphabet)
        for row in aut.delta)
    kind = aut.kind
    if kind == DCSA:
        if aut.initial is None:
            raise AlphabetMismatch("cannot extend the alphabet of a complete semi-automaton")
        kind = PDFA
    return Automaton(kind, alphabet, aut.states, delta, aut.initial, aut.finals)


def _same_alphabet(a1: Automaton, a2: Automaton) -> None:
    if a1.alphabet != a2.alphabet:
        raise AlphabetMismatch(
            f"alphabets differ: {' '.join(a1.alphabet)} vs {' '.join(a2.alphabet)}")


# ---------------------------------------------------------------------------
# strongly connected components


@dataclass(frozen=True)
class SccDecomposition:
    component_of: tuple[int, ...]
    components: tuple[frozenset, ...]
    dag_edges: frozenset
    is_single_cycle: tuple[bool, ...]
    is_trivial: tuple[bool, ...]

    def cyclic_components(self) -> list[int]:
        return [c for c, trivial in enumerate(self.is_trivial) if not trivial]


def scc(aut: Automaton) -> SccDecomposition:
    """Iterative Tarjan.

    Components are numbered in the order Tarjan closes them, which is a
    reverse topological order of the condensation.  A component is trivial
    when it is a singleton without self-loop; it is a single cycle when every
    state has at most one transition staying inside it (trivial components
    qualify vacuously).
    """
    n = aut.n_states
    succ = [sorted({t for targets in row for t in targets}) for row in aut.delta]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    component_of = [-1] * n
    components: list[frozenset] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                members = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component_of[w] = len(components)
                    members.append(w)
                    if w == v:
                        break
                components.append(frozenset(members))

    dag_edges = set()
    inner_edges = [0] * n
    for q, _, t in aut.transitions():
        cq, ct = component_of[q], component_of[t]
        if cq == ct:
            inner_edges[q] += 1
        else:
            dag_edges.add((cq, ct))
    single, trivial = [], []
    for comp in components:
        single.append(all(inner_edges[q] <= 1 for q in comp))
        trivial.append(len(comp) == 1 and all(inner_edges[q] == 0 for q in comp))
    return SccDecomposition(tuple(component_of), tuple(components),
                            frozenset(dag_edges), tuple(single), tuple(trivial))


# ---------------------------------------------------------------------------
# subset construction and boolean operations


def _subset_name(aut: Automaton, subset: frozenset) -> str:
    return "{" + ",".join(aut.states[q] for q in sorted(subset)) + "}"


def determinize(nfa: Automaton, partial: bool = False) -> Automaton:
    """Subset construction over the reachable subsets.

    The result is a complete DFA (kind dcsa with initial state) including the
    empty-subset trap when it is reachable.  With ``partial=True`` the empty
    subset is dropped and the result is a PDFA.
    """
    if nfa.initial is None:
        raise KindError("determinize needs an initial state")
    start = frozenset([nfa.initial])
    order = [start]
    ids = {start: 0}
    rows = []
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        row = []
        for x in range(nfa.n_symbols):
            target = step(nfa, subset, (x,))
            if partial and not target:
                row.append(frozenset())
                continue
            if target not in ids:
                ids[target] = len(order)
                order.append(target)
                queue.append(target)
            row.append(frozenset([ids[target]]))
        rows.append(tuple(row))
    return Automaton(
        kind=PDFA if partial else DCSA,
        alphabet=nfa.alphabet,
        states=tuple(_subset_name(nfa, s) for s in order),
        delta=tuple(rows),
        initial=0,
        finals=frozenset(i for i, s in enumerate(order) if not s.isdisjoint(nfa.finals)),
    )


def as_dfa(aut: Automaton) -> Automaton:
    """Deterministic version of `aut` (unchanged when already deterministic)."""
    if aut.is_deterministic():
        if aut.kind == NFA:
            return Automaton(PDFA, aut.alphabet, aut.states, aut.delta, aut.initial, aut.finals)
        return aut
    return determinize(aut, partial=True)


def complete(aut: Automaton) -> Automaton:
    """Add one fresh non-final trap state for every missing transition."""
    if not aut.is_deterministic():
        raise KindError("completion needs a deterministic automaton")
    if aut.is_complete():
        return Automaton(DCSA, aut.alphabet, aut.states, aut.delta, aut.initial, aut.finals)
    trap = aut.n_states
    delta = tuple(
        tuple(targets if targets else frozenset([trap]) for targets in row)
        for row in aut.delta) + ((frozenset([trap]),) * aut.n_symbols,)
    return Automaton(DCSA, aut.alphabet, aut.states + (fresh_name("trap", aut.states),),
                     delta, aut.initial, aut.finals)


def complement(dfa: Automaton) -> Automaton:
    if dfa.kind != DCSA or dfa.initial is None:
        raise KindError("complement needs a complete DFA (dcsa with initial state)")
    return dfa.restart(finals=set(range(dfa.n_states)) - dfa.finals)


def product_intersection(a1: Automaton, a2: Automaton) -> Automaton:
    _same_alphabet(a1, a2)
    if a1.initial is None or a2.initial is None:
        raise KindError("product needs initial states")
    start = (a1.initial, a2.initial)
    order = [start]
    ids = {start: 0}
    rows = []
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        row = []
        for x in range(a1.n_symbols):
            targets = set()
            for p2 in sorted(a1.delta[p][x]):
                for q2 in sorted(a2.delta[q][x]):
                    pair = (p2, q2)
                    if pair not in ids:
                        ids[pair] = len(order)
                        order.append(pair)
                        queue.append(pair)
                    targets.add(ids[pair])
            row.append(frozenset(targets))
        rows.append(tuple(row))
    if NFA in (a1.kind, a2.kind):
        kind = NFA
    elif all(t for row in rows for t in row):
        kind = DCSA
    else:
        kind = PDFA
    return Automaton(
        kind=kind,
        alphabet=a1.alphabet,
        states=tuple(f"({a1.states[p]},{a2.states[q]})" for p, q in order),
        delta=tuple(rows),
        initial=0,
        finals=frozenset(i for i, (p, q) in enumerate(order)
                         if p in a1.finals and q in a2.finals),
    )


def is_empty(aut: Automaton) -> bool:
    return reachable_states(aut).isdisjoint(aut.finals)


def shortest_word(aut: Automaton) -> Word | None:
    """A shortlex-least accepted word, or None for the empty language."""
    if aut.initial is None:
        return None
    start = frozenset([aut.initial])
    parent = {start: None}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        if not current.isdisjoint(aut.finals):
            word = []
            while parent[current] is not None:
                current, x = parent[current]
                word.append(x)
            return tuple(reversed(word))
        for x in range(aut.n_symbols):
            nxt = step(aut, current, (x,))
            if nxt and nxt not in parent:
                parent[nxt] = (current, x)
                queue.append(nxt)
    return None


def includes(a1: Automaton, a2: Automaton) -> bool:
    """Decide ``L(a2) ⊆ L(a1)``."""
    _same_alphabet(a1, a2)
    rejecting = complement(complete(as_dfa(a1)))
    return is_empty(product_intersection(rejecting, a2))


def closure_automaton(aut: Automaton, mode: str) -> Automaton:
    """Automaton for the prefixes, suffixes or factors of ``L(aut)``.

    prefix: every co-accessible state becomes final.  suffix: a fresh
    initial state that behaves like every accessible state at once (the
    epsilon moves are resolved here), giving an NFA.  factor: both.
    """
    if aut.initial is None:
        raise KindError("closure needs an initial state")
    if mode not in ("prefix", "suffix", "factor"):
        raise ValueError(f"unknown closure mode {mode!r}")
    if mode in ("prefix", "factor"):
        live = coaccessible_states(aut)
        aut = aut.restart(finals=live)
        if mode == "prefix":
            return aut
    sources = reachable_states(aut)
    new = aut.n_states
    start_row = tuple(
        frozenset(t for q in sources for t in aut.delta[q][x])
        for x in range(aut.n_symbols))
    finals = set(aut.finals)
    if not sources.isdisjoint(aut.finals):
        finals.add(new)
    return Automaton(
        kind=NFA,
        alphabet=aut.alphabet,
        states=aut.states + (fresh_name("start", aut.states),),
        delta=aut.delta + (start_row,),
        initial=new,
        finals=frozenset(finals),
    )
