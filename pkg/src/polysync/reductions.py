"""SetTransporter, its reductions, and the NP-hardness gadget.

The gadget turns a unary DisjointSetTransporter instance ``(A, S, T)`` into
a DCSA ``A'`` over the constraint's alphabet such that ``A'`` has a
synchronizing word in ``u v* U`` iff some power of the letter maps S into T.
`gadget_equivalence_batch` checks that equivalence empirically against the exact
solvers.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .automata import (
    DCSA, Automaton, AutomatonError, KindError, _same_alphabet, closure_automaton,
    fresh_name, is_empty, parse_automaton, product_intersection, serialize_automaton,
    step,
)
from .polycyclic import concat_pc, star_automaton, word_automaton
from .solver import oracle


class EmptyU(AutomatonError):
    pass


class CriterionFailed(AutomatonError):
    pass


@dataclass(frozen=True)
class SetTransporterInstance:
    aut: Automaton
    S: frozenset
    T: frozenset

    def __post_init__(self):
        if self.aut.kind != DCSA:
            raise KindError("set transporter instances need a dcsa")
        n = self.aut.n_states
        for name, states in (("S", self.S), ("T", self.T)):
            if not states:
                raise AutomatonError(f"{name} must be nonempty")
            if any(not 0 <= q < n for q in states):
                raise AutomatonError(f"{name} contains an unknown state")

    @property
    def disjoint(self) -> bool:
        return self.S.isdisjoint(self.T)

    def maps_into(self, word) -> bool:
        return step(self.aut, self.S, word) <= self.T


def parse_instance(text: str) -> SetTransporterInstance:
    """Automaton file plus ``S:`` and ``T:`` lines naming states."""
    rest, sets = [], {}
    for line in text.splitlines():
        head = line.split("#", 1)[0].strip()
        key = head.split(":", 1)[0].strip()
        if key in ("S", "T") and ":" in head:
            if key in sets:
                raise AutomatonError(f"duplicate {key} line")
            sets[key] = head.split(":", 1)[1].split()
        else:
            rest.append(line)
    aut = parse_automaton("\n".join(rest))
    if set(sets) != {"S", "T"}:
        raise AutomatonError("instance needs S: and T: lines")
    return SetTransporterInstance(
        aut,
        frozenset(aut.state_id(s) for s in sets["S"]),
        frozenset(aut.state_id(t) for t in sets["T"]))


def serialize_instance(inst: SetTransporterInstance) -> str:
    names = inst.aut.states
    return (serialize_automaton(inst.aut)
            + "S: " + " ".join(names[q] for q in sorted(inst.S)) + "\n"
            + "T: " + " ".join(names[q] for q in sorted(inst.T)) + "\n")


def set_transporter_bruteforce(inst: SetTransporterInstance):
    """Shortest (shortlex-least) word mapping S into T, or None."""
    aut = inst.aut
    parent = {inst.S: None}
    queue = deque([inst.S])
    while queue:
        current = queue.popleft()
        if current <= inst.T:
            word = []
            while parent[current] is not None:
                current, x = parent[current]
                word.append(x)
            return tuple(reversed(word))
        for x in range(aut.n_symbols):
            nxt = step(aut, current, (x,))
            if nxt not in parent:
                parent[nxt] = (current, x)
                queue.append(nxt)
    return None


def disjointify(inst: SetTransporterInstance) -> SetTransporterInstance:
    """Replace S by a fresh copy S' (same outgoing transitions) disjoint from T.

    Nonempty witnesses carry over unchanged; the case ``S ⊆ T`` (answered by
    the empty word) must be handled by the caller.
    """
    if inst.S <= inst.T:
        raise AutomatonError("S is already contained in T; the empty word answers it")
    aut = inst.aut
    names = list(aut.states)
    copies = {}
    for s in sorted(inst.S):
        copies[s] = len(names)
        names.append(fresh_name(aut.states[s] + "'", names))
    delta = aut.delta + tuple(aut.delta[s] for s in sorted(inst.S))
    new = Automaton(DCSA, aut.alphabet, tuple(names), delta, aut.initial, aut.finals)
    return SetTransporterInstance(new, frozenset(copies.values()), inst.T)


def intersection_to_settransporter(dfas: Sequence[Automaton]) -> SetTransporterInstance:
    """Disjoint union of complete DFAs; S = their starts, T = their finals."""
    if not dfas:
        raise AutomatonError("need at least one automaton")
    for d in dfas:
        _same_alphabet(dfas[0], d)
        if d.kind != DCSA or d.initial is None:
            raise KindError("intersection instances must be complete DFAs")
    names, delta, S, T = [], [], set(), set()
    for i, d in enumerate(dfas):
        offset = len(names)
        names.extend(f"{i}.{q}" for q in d.states)
        delta.extend(tuple(frozenset(t + offset for t in cell) for cell in row)
                     for row in d.delta)
        S.add(d.initial + offset)
        T.update(f + offset for f in d.finals)
    aut = Automaton(DCSA, dfas[0].alphabet, tuple(names), tuple(delta))
    if not T:
        # T must be nonempty: target an isolated sink that S never reaches
        sink = len(names)
        names.append(fresh_name("sink", names))
        delta.append((frozenset([sink]),) * aut.n_symbols)
        aut = Automaton(DCSA, aut.alphabet, tuple(names), tuple(delta))
        T = {sink}
    return SetTransporterInstance(aut, frozenset(S), frozenset(T))


def settransporter_to_intersection(inst: SetTransporterInstance) -> list[Automaton]:
    """One complete DFA per state of S, each started there with finals T."""
    return [inst.aut.restart(initial=s, finals=inst.T) for s in sorted(inst.S)]


# ---------------------------------------------------------------------------
# hardness criterion and gadget


@dataclass(frozen=True)
class HardnessTriple:
    u: tuple
    v: tuple
    U: Automaton

    @property
    def alphabet(self):
        return self.U.alphabet


def is_factor(x: Sequence[int], y: Sequence[int]) -> bool:
    x, y = tuple(x), tuple(y)
    return any(y[i:i + len(x)] == x for i in range(len(y) - len(x) + 1))


def in_factors_of_star(u: Sequence[int], v: Sequence[int]) -> bool:
    """Whether u is a factor of some power of v."""
    if not v:
        return not u
    reps = -(-len(u) // len(v)) + 1
    return is_factor(u, tuple(v) * reps)


def in_prefixes_of_star(w: Sequence[int], v: Sequence[int]) -> bool:
    if not v:
        return not w
    w = tuple(w)
    reps = -(-len(w) // len(v))
    return (tuple(v) * reps)[:len(w)] == w


def check_np_hard_criterion(t: HardnessTriple) -> bool:
    """``u ∉ F(v*)``, ``v ∉ F(U)`` and ``P(v*) ∩ U = ∅``."""
    if is_empty(t.U):
        raise EmptyU("U must be a nonempty language")
    if in_factors_of_star(t.u, t.v):
        return False
    if closure_automaton(t.U, "factor").accepts(t.v):
        return False
    prefixes = closure_automaton(star_automaton(t.alphabet, t.v), "prefix")
    return is_empty(product_intersection(prefixes, t.U))


def normalize_tail_word(w: Sequence[int], v: Sequence[int]) -> tuple:
    """Strip the longest prefix of w that is a nonempty power of v."""
    w, v = tuple(w), tuple(v)
    while v and w[:len(v)] == v:
        w = w[len(v):]
    return w


def build_hardness_gadget(inst: SetTransporterInstance, t: HardnessTriple,
                          w: Sequence[int]) -> Automaton:
    """The DCSA ``A'`` on ``Q ∪ Q_1 ∪ … ∪ Q_{n-1} ∪ {trap}`` with ``n = |u||v|``.

    Copy i of a state waits for letter ``i+1`` of ``v^|u|``; the last letter
    applies the unary transition.  Any other letter sends S-states back to
    themselves, T-states into the trap and all other states to the lowest
    state of S.
    """
    if inst.aut.n_symbols != 1:
        raise AutomatonError("the gadget needs a unary instance")
    if not inst.disjoint:
        raise AutomatonError("the gadget needs S and T disjoint")
    if not check_np_hard_criterion(t):
        raise CriterionFailed("(u, v, U) does not satisfy the hardness criterion")
    w = normalize_tail_word(w, t.v)
    if not t.U.accepts(w):
        raise AutomatonError("w is not in U (after stripping leading powers of v)")
    if is_factor(t.v, w) or in_prefixes_of_star(w, t.v):
        raise AutomatonError("w must avoid v as a factor and not be a prefix of v*")

    base = inst.aut
    block = tuple(t.v) * len(t.u)
    n = len(block)
    m = base.n_states
    names = list(base.states)
    for i in range(1, n):
        names.extend(f"{name}_{i}" for name in base.states)
    trap = n * m
    names.append(fresh_name("t", names))
    s_hat = min(inst.S)

    def sid(i, q):
        return i * m + q

    rows = []
    for i in range(n):
        for q in range(m):
            row = []
            for x in range(t.U.n_symbols):
                if x == block[i]:
                    target = sid(i + 1, q) if i < n - 1 else base.succ(q, 0)
                elif q in inst.S:
                    target = q
                elif q in inst.T:
                    target = trap
                else:
                    target = s_hat
                row.append(frozenset([target]))
            rows.append(tuple(row))
    rows.append((frozenset([trap]),) * t.U.n_symbols)
    return Automaton(DCSA, t.alphabet, tuple(names), tuple(rows))


def gadget_constraint(t: HardnessTriple, w: Sequence[int]) -> Automaton:
    """Polycyclic PDFA for ``u v* {w}`` assembled by concatenation."""
    alphabet = t.alphabet
    head = concat_pc(word_automaton(alphabet, t.u), star_automaton(alphabet, t.v))
    return concat_pc(head, word_automaton(alphabet, w))


def random_unary_instance(rng: random.Random, n_states: int) -> SetTransporterInstance:
    """Uniform unary DCSA with random nonempty disjoint S and T."""
    aut = Automaton.build(DCSA, ("a",), n_states,
                          [(q, 0, rng.randrange(n_states)) for q in range(n_states)])
    order = list(range(n_states))
    rng.shuffle(order)
    cut = rng.randint(1, n_states - 1)
    S = order[:cut]
    rest = order[cut:]
    T = rest[:rng.randint(1, len(rest))]
    return SetTransporterInstance(aut, frozenset(S), frozenset(T))


@dataclass
class BatchReport:
    seed: int
    count: int
    agreements: int = 0
    yes_instances: int = 0
    counterexamples: list = field(default_factory=list)

    def text(self) -> str:
        lines = [f"seed {self.seed}", f"instances {self.count}",
                 f"yes-instances {self.yes_instances}"]
        for index, instance_text, expected, got in self.counterexamples:
            lines.append(f"counterexample {index}: settransporter={expected} gadget={got}")
            lines.extend("  " + line for line in instance_text.splitlines())
        lines.append(f"agreement {self.agreements}/{self.count}")
        return "\n".join(lines) + "\n"


def gadget_equivalence_batch(count: int, max_q: int, triple: HardnessTriple,
                             w: Sequence[int], seed: int = 0,
                             min_q: int = 2) -> BatchReport:
    """Compare SetTransporter brute force with the constrained-sync oracle on
    the gadget for `count` random unary disjoint instances."""
    if not check_np_hard_criterion(triple):
        raise CriterionFailed("(u, v, U) does not satisfy the hardness criterion")
    if max_q < 2:
        raise ValueError("disjoint nonempty S and T need at least two states")
    constraint = gadget_constraint(triple, w)
    rng = random.Random(seed)
    report = BatchReport(seed=seed, count=count)
    for index in range(count):
        inst = random_unary_instance(rng, rng.randint(max(2, min_q), max_q))
        expected = set_transporter_bruteforce(inst) is not None
        gadget = build_hardness_gadget(inst, triple, w)
        got = oracle(gadget, constraint).decision
        report.yes_instances += expected
        if expected == got:
            report.agreements += 1
        else:
            report.counterexamples.append((index, serialize_instance(inst), expected, got))
    return report
