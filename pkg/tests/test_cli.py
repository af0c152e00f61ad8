import json
from pathlib import Path

import pytest

from polysync.cli import run

DATA = Path(__file__).resolve().parent.parent / "data"


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_poly_check(capsys):
    assert call(capsys, "poly", "check", DATA / "aba_cycle.aut")[:2] == (0, "polycyclic\n")


def test_poly_check_negative(tmp_path, capsys):
    f = tmp_path / "star.aut"
    f.write_text("kind: pdfa\nalphabet: a b\nstates: p\ninitial: p\nfinal: p\n"
                 "trans: p a p\ntrans: p b p\n")
    assert call(capsys, "poly", "check", f)[:2] == (1, "not-polycyclic\n")


def test_poly_skeleton(capsys):
    code, out, _ = call(capsys, "poly", "skeleton", DATA / "aba_cycle.aut")
    assert code == 0
    assert out.splitlines() == ["polycyclic", "q3 aba 1", "q4 baa 1", "q5 aab 1"]


def test_fmt_idempotent(tmp_path, capsys):
    messy = tmp_path / "messy.aut"
    messy.write_text("# comment\nkind:   pdfa\nalphabet: a b\nstates: q1 q2 q3\n"
                     "trans: q2 b q3\ntrans: q1 b q2\ninitial: q1\nfinal: q3\ntrans: q2 a q2\n")
    code, once, _ = call(capsys, "fmt", messy)
    assert code == 0
    canon = tmp_path / "canon.aut"
    canon.write_text(once)
    _, twice, _ = call(capsys, "fmt", canon)
    assert twice == once
    assert once == (DATA / "ba_star_b.aut").read_text().split("\n", 1)[1]


def test_constr_solve_one_state(capsys):
    code, out, err = call(capsys, "constr", "solve", "--constraint", DATA / "aba_cycle.aut",
                          "--input", DATA / "one_state.aut", "--expand")
    assert code == 0
    assert out == "yes\np=q1,n=0,v=bab\nbab\n"
    assert "class: P" in err


def test_constr_solve_modes_agree(capsys):
    verdicts = set()
    for mode in ("oracle", "search", "auto"):
        code, out, _ = call(capsys, "constr", "solve", "--constraint", DATA / "ba_star_b.aut",
                            "--input", DATA / "cerny4.aut", "--mode", mode)
        verdicts.add((code, out.splitlines()[0]))
    assert len(verdicts) == 1
    code, _, err = call(capsys, "constr", "solve", "--constraint", DATA / "ba_star_b.aut",
                        "--input", DATA / "cerny4.aut", "--mode", "pcase")
    assert code == 2 and err.startswith("error:")


def test_constr_solve_auto_reports_unknown_class(capsys):
    _, _, err = call(capsys, "constr", "solve", "--constraint", DATA / "ba_star_b.aut",
                     "--input", DATA / "one_state.aut")
    assert "class: unknown complexity class" in err


def test_constr_verify(capsys):
    args = ["constr", "verify", "--constraint", DATA / "ba_star_b.aut",
            "--input", DATA / "one_state.aut", "--code"]
    assert call(capsys, *args, "p=q1,n=0,v=b;p=q2,n=1000000000000,v=b")[:2] == (0, "valid\n")
    assert call(capsys, *args, "p=q1,n=0,v=b")[:2] == (1, "invalid\n")
    code, out, err = call(capsys, *args, "p=q1,n=0,v=a")
    assert code == 2 and out == "" and err.count("\n") == 1


def test_json_output(capsys):
    code, out, _ = call(capsys, "--json", "constr", "solve", "--constraint",
                        DATA / "aba_cycle.aut", "--input", DATA / "one_state.aut")
    data = json.loads(out)
    assert code == 0
    assert set(data) == {"verdict", "witness", "stats"}
    assert data["verdict"] == "yes" and data["witness"] == "p=q1,n=0,v=bab"


def test_sync_commands(capsys):
    assert call(capsys, "sync", "check", DATA / "cerny4.aut")[:2] == (0, "synchronizing\n")
    code, out, err = call(capsys, "sync", "word", DATA / "cerny4.aut")
    assert code == 0 and out.startswith("yes\n")
    assert "length: 9" in err


def test_poly_ops(tmp_path, capsys):
    f = DATA / "ba_star_b.aut"
    code, out, _ = call(capsys, "poly", "op", "quotient", f, "--word", "b")
    assert code == 0 and out.startswith("kind: pdfa")
    code, _, err = call(capsys, "poly", "op", "complement", f)
    assert code == 2 and "not polycyclic" in err
    code, out, _ = call(capsys, "poly", "op", "complement", f, "--unchecked")
    assert code == 0 and "kind: dcsa" in out
    target = tmp_path / "u.aut"
    assert call(capsys, "poly", "op", "union", f, DATA / "aba_cycle.aut", "-o", target)[0] == 0
    assert target.read_text().startswith("kind: pdfa")
    assert call(capsys, "poly", "op", "union", f)[0] == 2


def test_reduce_commands(tmp_path, capsys):
    inst = DATA / "mod5.inst"
    assert call(capsys, "reduce", "transport", inst)[:2] == (0, "yes\naa\n")
    code, out, _ = call(capsys, "reduce", "disjointify", inst)
    assert code == 0 and "S: 0'" in out
    code, out, _ = call(capsys, "reduce", "gadget", inst, "--u", "b", "--v", "a", "--w", "b")
    assert code == 0 and out.startswith("kind: dcsa\nalphabet: a b\n")
    g = tmp_path / "g.aut"
    g.write_text(out)
    b = tmp_path / "b.aut"
    b.write_text((DATA / "ba_star_b.aut").read_text())
    assert call(capsys, "constr", "solve", "--constraint", b, "--input", g)[0] == 0
    assert call(capsys, "reduce", "criterion", "--u", "b", "--v", "a", "--w", "b")[:2] == \
        (0, "np-hard\n")
    assert call(capsys, "reduce", "criterion", "--u", "a", "--v", "a", "--w", "b")[:2] == \
        (1, "criterion-fails\n")


def test_reduce_batch(capsys):
    code, out, _ = call(capsys, "reduce", "batch", "--count", 10, "--max-q", 4,
                        "--triple", "b,a,b", "--seed", 7)
    assert code == 0
    assert out.splitlines()[-1] == "agreement 10/10"


def test_usage_errors(capsys):
    assert call(capsys, "poly", "check", "/nonexistent.aut")[0] == 2
    assert call(capsys, "bogus")[0] == 2
    assert call(capsys, "reduce", "batch", "--count", 1, "--max-q", 3, "--triple", "a,b")[0] == 2


@pytest.mark.parametrize("argv", [
    ["reduce", "batch", "--count", "15", "--max-q", "4", "--triple", "b,a,b", "--seed", "3"],
    ["sync", "word", str(DATA / "cerny4.aut")],
    ["constr", "solve", "--constraint", str(DATA / "aba_cycle.aut"),
     "--input", str(DATA / "cerny4.aut"), "--expand"],
    ["dot", str(DATA / "aba_cycle.aut")],
])
def test_deterministic_output(capsys, argv):
    first = call(capsys, *argv)
    second = call(capsys, *argv)
    assert first == second
