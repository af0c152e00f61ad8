"""Command-line entry point.

Verdict commands print a one-line verdict on stdout, optionally followed by
the witness, and exit 0 for a positive verdict, 1 for a negative one and 2
for usage or validation errors.  Commands that produce an automaton print
it in the text format.  ``--json`` replaces stdout by a single JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys

from .automata import (
    Automaton, AutomatonError, format_word, parse_automaton, parse_word,
    serialize_automaton, to_dot, with_alphabet,
)
from .polycyclic import (
    NotPolycyclic, complement_pc, concat_pc, intersection_pc, is_polycyclic,
    nfa_loop_condition, quotient_pc, skeleton, union_pc, unfold_start, word_automaton,
)
from .reductions import (
    HardnessTriple, SetTransporterInstance, build_hardness_gadget,
    check_np_hard_criterion, disjointify, gadget_equivalence_batch, parse_instance,
    serialize_instance, set_transporter_bruteforce,
)
from .solver import (
    oracle, p_case_applicable, parse_wcode, solve, solve_p_case, verify_wcode,
)
from .sync import is_synchronizing, synchronizing_word


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def _load(path: str) -> Automaton:
    return parse_automaton(_read(path))


class Output:
    def __init__(self, args):
        self.json = getattr(args, "json", False)

    def verdict(self, verdict: str, ok: bool, witness=None, stats=None, lines=()):
        if self.json:
            print(json.dumps({"verdict": verdict, "witness": witness,
                              "stats": stats or {}}, sort_keys=True))
        else:
            print(verdict)
            for line in lines:
                print(line)
            for key, value in sorted((stats or {}).items()):
                print(f"{key}: {value}", file=sys.stderr)
        return 0 if ok else 1

    def automaton(self, aut: Automaton, path: str | None):
        text = serialize_automaton(aut)
        if path:
            with open(path, "w", encoding="utf-8") as f:
                f.write(text)
        elif self.json:
            print(json.dumps({"verdict": "ok", "witness": None,
                              "stats": {"automaton": text}}, sort_keys=True))
        else:
            sys.stdout.write(text)
        return 0


def _word_text(aut: Automaton, word) -> str:
    return format_word(word, aut.alphabet) or "-"


# ---------------------------------------------------------------------------
# commands


def cmd_fmt(args, out):
    return out.automaton(_load(args.file), args.output)


def cmd_dot(args, out):
    sys.stdout.write(to_dot(_load(args.file)))
    return 0


def cmd_sync_check(args, out):
    aut = _load(args.file)
    ok = is_synchronizing(aut)
    return out.verdict("synchronizing" if ok else "not-synchronizing", ok)


def cmd_sync_word(args, out):
    aut = _load(args.file)
    witness = synchronizing_word(aut)
    if witness is None:
        return out.verdict("no", False)
    word = _word_text(aut, witness.word)
    return out.verdict("yes", True, word,
                       {"length": len(witness.word), "sink": aut.states[witness.sink]},
                       [word])


def cmd_poly_check(args, out):
    aut = _load(args.file)
    ok = nfa_loop_condition(aut) if aut.kind == "nfa" else is_polycyclic(aut)
    return out.verdict("polycyclic" if ok else "not-polycyclic", ok)


def cmd_poly_skeleton(args, out):
    aut = _load(args.file)
    if not is_polycyclic(aut):
        return out.verdict("not-polycyclic", False)
    skel = skeleton(aut)
    rows = [f"{aut.states[p]} {_word_text(aut, info.cycle_word)} {info.loop_exponent}"
            for p, info in sorted(skel.cycle_info.items())]
    return out.verdict("polycyclic", True, None,
                       {"cycles": len(skel.scc.cyclic_components())}, rows)


def cmd_poly_op(args, out):
    first = _load(args.file)
    if args.op in ("union", "intersect", "concat"):
        if not args.other:
            raise UsageError(f"{args.op} needs a second automaton")
        second = _load(args.other)
        fn = {"union": union_pc, "intersect": intersection_pc, "concat": concat_pc}[args.op]
        result = fn(first, second)
    elif args.op == "complement":
        result = complement_pc(first, strict=not args.unchecked)
    elif args.op == "quotient":
        if args.word is None:
            raise UsageError("quotient needs --word")
        result = quotient_pc(first, first.word(args.word))
    else:
        result = unfold_start(first)
    return out.automaton(result, args.output)


def cmd_constr_solve(args, out):
    A = _load(args.input)
    B = with_alphabet(_load(args.constraint), A.alphabet)
    mode = args.mode
    stats = {}
    polycyclic = B.kind != "nfa" and is_polycyclic(B)
    if mode == "auto":
        if polycyclic:
            if p_case_applicable(B):
                mode = "pcase"
                stats["class"] = "P"
            else:
                mode = "search"
                stats["class"] = "unknown complexity class"
        elif args.allow_oracle:
            mode = "oracle"
            stats["class"] = "not polycyclic"
        else:
            raise NotPolycyclic("constraint is not polycyclic (use --allow-oracle)")
    if mode == "oracle":
        result = oracle(A, B)
    elif mode == "pcase":
        result = solve_p_case(A, B)
    else:
        result = solve(A, B)
    stats["mode"] = mode
    stats.update(result.stats)
    if not result.decision:
        return out.verdict("no", False, None, stats)
    lines = []
    witness = None
    if result.witness is not None:
        witness = result.witness.encode(B)
        lines.append(witness)
    elif result.word is not None:
        lines.append(_word_text(A, result.word))
    stats["expanded_length"] = result.expanded_length
    if args.expand:
        word = result.word
        if word is None and result.expanded_length <= args.max_expansion:
            word = result.witness.expand(skeleton(B))
        if word is not None and len(word) <= args.max_expansion:
            text = _word_text(A, word)
            lines.append(text)
            stats["expanded"] = text
    return out.verdict("yes", True, witness, stats, lines)


def cmd_constr_verify(args, out):
    A = _load(args.input)
    B = with_alphabet(_load(args.constraint), A.alphabet)
    code = parse_wcode(args.code, B)
    ok = verify_wcode(A, B, code)
    return out.verdict("valid" if ok else "invalid", ok)


def _instance(args) -> SetTransporterInstance:
    text = _read(args.file)
    if args.S or args.T:
        if not (args.S and args.T):
            raise UsageError("give both --S and --T")
        aut = parse_automaton(text)
        return SetTransporterInstance(
            aut,
            frozenset(aut.state_id(s) for s in args.S.replace(",", " ").split()),
            frozenset(aut.state_id(t) for t in args.T.replace(",", " ").split()))
    return parse_instance(text)


def cmd_reduce_transport(args, out):
    inst = _instance(args)
    word = set_transporter_bruteforce(inst)
    if word is None:
        return out.verdict("no", False)
    text = _word_text(inst.aut, word)
    return out.verdict("yes", True, text, {"length": len(word)}, [text])


def cmd_reduce_disjointify(args, out):
    inst = _instance(args)
    result = disjointify(inst)
    text = serialize_instance(result)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _triple(u: str, v: str, w: str, alphabet: str | None):
    if alphabet:
        symbols = tuple(alphabet.replace(",", " ").split())
    else:
        symbols = tuple(sorted(set(u + v + w) - {"-"}))
    if not symbols:
        raise UsageError("cannot infer an alphabet from empty words")
    uw, vw, ww = (parse_word(s, symbols) for s in (u, v, w))
    return HardnessTriple(uw, vw, word_automaton(symbols, ww)), ww


def cmd_reduce_gadget(args, out):
    triple, w = _triple(args.u, args.v, args.w, args.alphabet)
    inst = _instance(args)
    return out.automaton(build_hardness_gadget(inst, triple, w), args.output)


def cmd_reduce_criterion(args, out):
    triple, _ = _triple(args.u, args.v, args.w, args.alphabet)
    ok = check_np_hard_criterion(triple)
    return out.verdict("np-hard" if ok else "criterion-fails", ok)


def cmd_reduce_batch(args, out):
    parts = args.triple.split(",")
    if len(parts) != 3:
        raise UsageError("--triple takes u,v,w")
    triple, w = _triple(*parts, args.alphabet)
    report = gadget_equivalence_batch(args.count, args.max_q, triple, w, seed=args.seed)
    ok = report.agreements == report.count
    if out.json:
        print(json.dumps({
            "verdict": "agree" if ok else "disagree",
            "witness": None,
            "stats": {"seed": report.seed, "count": report.count,
                      "agreements": report.agreements,
                      "yes_instances": report.yes_instances,
                      "counterexamples": [c[1] for c in report.counterexamples]},
        }, sort_keys=True))
    else:
        sys.stdout.write(report.text())
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polysync",
        description="Constrained synchronization with polycyclic constraint automata.")
    parser.add_argument("--json", action="store_true", help="print one JSON object")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fmt", help="rewrite an automaton file in canonical form")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fmt)

    p = sub.add_parser("dot", help="Graphviz export")
    p.add_argument("file")
    p.set_defaults(func=cmd_dot)

    sync = sub.add_parser("sync", help="unconstrained synchronization").add_subparsers(
        dest="action", required=True)
    p = sync.add_parser("check")
    p.add_argument("file")
    p.set_defaults(func=cmd_sync_check)
    p = sync.add_parser("word")
    p.add_argument("file")
    p.set_defaults(func=cmd_sync_word)

    poly = sub.add_parser("poly", help="polycyclic automata").add_subparsers(
        dest="action", required=True)
    p = poly.add_parser("check")
    p.add_argument("file")
    p.set_defaults(func=cmd_poly_check)
    p = poly.add_parser("skeleton")
    p.add_argument("file")
    p.set_defaults(func=cmd_poly_skeleton)
    p = poly.add_parser("op")
    p.add_argument("op", choices=["complement", "union", "intersect", "concat",
                                  "quotient", "unfold"])
    p.add_argument("file")
    p.add_argument("other", nargs="?")
    p.add_argument("--word", help="quotient word")
    p.add_argument("--unchecked", action="store_true",
                   help="emit the complement even when it is not polycyclic")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_poly_op)

    constr = sub.add_parser("constr", help="constrained synchronization").add_subparsers(
        dest="action", required=True)
    p = constr.add_parser("solve")
    p.add_argument("--constraint", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=["oracle", "search", "pcase", "auto"], default="auto")
    p.add_argument("--allow-oracle", action="store_true")
    p.add_argument("--expand", action="store_true")
    p.add_argument("--max-expansion", type=int, default=1000)
    p.set_defaults(func=cmd_constr_solve)
    p = constr.add_parser("verify")
    p.add_argument("--constraint", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--code", required=True)
    p.set_defaults(func=cmd_constr_verify)

    reduce = sub.add_parser("reduce", help="SetTransporter reductions").add_subparsers(
        dest="action", required=True)
    for name, func in (("transport", cmd_reduce_transport),
                       ("disjointify", cmd_reduce_disjointify)):
        p = reduce.add_parser(name)
        p.add_argument("file")
        p.add_argument("--S")
        p.add_argument("--T")
        p.add_argument("-o", "--output")
        p.set_defaults(func=func)
    p = reduce.add_parser("gadget")
    p.add_argument("file")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--alphabet")
    p.add_argument("--S")
    p.add_argument("--T")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce_gadget)
    p = reduce.add_parser("criterion")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--alphabet")
    p.set_defaults(func=cmd_reduce_criterion)
    p = reduce.add_parser("batch")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--max-q", type=int, required=True)
    p.add_argument("--triple", required=True, help="u,v,w")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alphabet")
    p.set_defaults(func=cmd_reduce_batch)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    out = Output(args)
    try:
        return args.func(args, out)
    except (AutomatonError, UsageError, OSError) as e:
        message = str(e).splitlines()[0] if str(e) else type(e).__name__
        print(f"error: {message}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
