import json
import re
import subprocess
import sys

from unexpand.cli import main
from unexpand.expansion import ClauseId, Clause
from unexpand.reader import default_ops, read_all
from unexpand.solver import consult, parse_query
from unexpand.terms import variant

from helpers import EX0_TEXT, PROGRAMS_DIR, answers, load, make_db

EX0 = str(PROGRAMS_DIR / "ex0.pl")
GREETING = str(PROGRAMS_DIR / "greeting.pl")

# expected target translation, with the chained dataflow this system produces
EXPECTED_STRIP = """
f(X,Res) :- X < 42, !, m(X,M), l(M,L), k(L,K), T is K*3, Res = T.
f(X,1000).
k(X,Res) :- Res is X+1.
l(X,Res) :- Res is X-2.
m(X,X).
"""


def run_main(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def test_expand_strip_matches_target_program(capsys):
    code, out = run_main(capsys, "expand", EX0, "--strip")
    assert code == 0
    got = [s.term for s in read_all(out, default_ops(), "got")]
    want = [s.term for s in read_all(EXPECTED_STRIP, default_ops(), "want")]
    assert len(got) == len(want) == 5
    for g, w in zip(got, want):
        assert variant(g, w), (g, w)


def test_expand_strip_verbatim_k_and_m(capsys):
    _, out = run_main(capsys, "expand", EX0, "--strip")
    squeezed = [re.sub(r"\s+", "", line) for line in out.splitlines()]
    # k and m keep their published single-clause form, variable names aside
    assert any(re.fullmatch(r"k\(X,(\w+)\):-\1isX\+1\.", line)
               for line in squeezed)
    assert "m(X,X)." in squeezed


def test_expand_annotated_is_rereadable(capsys):
    code, out = run_main(capsys, "expand", EX0)
    assert code == 0
    program_text = "\n".join(line for line in out.splitlines()
                             if not line.startswith("%"))
    prog = load(EX0_TEXT, "ex0")
    sents = read_all(program_text, prog.ops, "again")
    assert len(sents) == 4
    assert all(s.term.functor == "$clause_info" for s in sents)
    assert "% --- symbol table ---" in out
    dumped = [line for line in out.splitlines() if line.startswith("% ex0:")]
    assert len(dumped) == 5


def test_strip_roundtrip_same_solutions(capsys):
    _, out = run_main(capsys, "expand", EX0, "--strip")
    clauses = []
    for i, sent in enumerate(read_all(out, default_ops(), "rt"), start=1):
        term = sent.term
        if hasattr(term, "functor") and term.functor == ":-" and len(term.args) == 2:
            head, body = term.args
        else:
            from unexpand.terms import Atom
            head, body = term, Atom("true")
        clauses.append(Clause(head, body, ClauseId("rt", i)))
    db_rt = consult(clauses)
    prog = load(EX0_TEXT, "ex0")
    db = make_db(prog)
    for goal_text in ["f(3,R)", "f(100,R)", "k(7,R)"]:
        goal = parse_query(goal_text, prog.ops).term
        assert answers(db_rt, goal, prog.ops) == answers(db, goal, prog.ops)


def test_run_subcommand(capsys):
    code, out = run_main(capsys, "run", EX0, "-g", "f(3,R)")
    assert code == 0
    assert out.strip() == "R = 6"
    code, out = run_main(capsys, "run", EX0, "-g", "f(100,R)")
    assert out.strip() == "R = 1000"
    code, out = run_main(capsys, "run", GREETING, "-g",
                         "phrase(greeting,[hello,world],[])")
    assert out.strip() == "yes"
    code, out = run_main(capsys, "run", GREETING, "-g",
                         "phrase(greeting,[bye],[])")
    assert out.strip() == "no"


def test_debug_script_target_view(capsys, tmp_path):
    script = tmp_path / "creep.txt"
    script.write_text("c\n" * 50, encoding="utf-8")
    code, out = run_main(capsys, "debug", EX0, "-g", "f(3,R)",
                         "--view", "target", "--script", str(script))
    assert code == 0
    lines = out.splitlines()
    assert re.fullmatch(r"   2  2    Call: f\(3,_G\d+\) \? ", lines[0])
    assert lines[-1] == "R = 6"


def test_debug_script_source_view(capsys, tmp_path):
    script = tmp_path / "creep.txt"
    script.write_text("", encoding="utf-8")
    code, out = run_main(capsys, "debug", EX0, "-g", "f(3,R)",
                         "--view", "source", "--script", str(script))
    assert code == 0
    assert "f(3) := 3 < 42 ? k(l(m(3)))*3 | 1000" in out
    assert "m(3) := 3" in out


def test_debug_deterministic(capsys, tmp_path):
    script = tmp_path / "creep.txt"
    script.write_text("", encoding="utf-8")
    _, out1 = run_main(capsys, "debug", EX0, "-g", "f(3,R)",
                       "--view", "target", "--script", str(script))
    _, out2 = run_main(capsys, "debug", EX0, "-g", "f(3,R)",
                       "--view", "target", "--script", str(script))
    assert out1 == out2


def test_missing_file_exit_code(capsys):
    code, _out = run_main(capsys, "run", "no_such_file.pl", "-g", "p(X)")
    assert code == 1
    captured = capsys.readouterr()


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.pl"
    bad.write_text("p(1", encoding="utf-8")
    code, _ = run_main(capsys, "run", str(bad), "-g", "p(X)")
    assert code == 1


def test_usage_error_exit_code(capsys):
    assert main(["run", EX0]) == 2          # missing -g
    capsys.readouterr()
    assert main(["frobnicate"]) == 2
    capsys.readouterr()


def test_console_entry_point_subprocess():
    result = subprocess.run(
        [sys.executable, "-m", "unexpand", "run", EX0, "-g", "f(3,R)"],
        capture_output=True, text=True, timeout=60,
        cwd=str(PROGRAMS_DIR.parent))
    assert result.returncode == 0
    assert result.stdout.strip() == "R = 6"


def test_serve_stdio_subprocess():
    requests = "\n".join(json.dumps({"cmd": "step"}) for _ in range(100))
    result = subprocess.run(
        [sys.executable, "-m", "unexpand", "serve", EX0, "-g", "f(3,R)",
         "--port", "0"],
        input=requests + "\n", capture_output=True, text=True, timeout=60,
        cwd=str(PROGRAMS_DIR.parent))
    assert result.returncode == 0
    events = [json.loads(line) for line in result.stdout.splitlines()]
    assert events[0]["type"] == "hello"
    assert events[-1]["type"] == "done"
    assert {"type": "solution", "bindings": {"R": "6"}} in events
