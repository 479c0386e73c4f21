"""Acceptance suite: one test per shipped criterion.

Each test prints a PASS line on success so a plain `pytest -s
tests/test_acceptance.py` reads as a checklist.  Timing limits are
asserted inside the tests themselves.
"""

import json
import random
import re
import socket
import threading
import time

from unexpand.cli import main
from unexpand.reader import default_ops, read_all, read_sentence
from unexpand.server import DebugServer
from unexpand.solver import parse_query
from unexpand.terms import (Atom, Int, apply_subst, fresh_var, mk, mk_list,
                            occurs_in, unify, variant)
from unexpand.writer import write_term

from helpers import (ARITH_TEXT, EX0_TEXT, FAMILY_TEXT, GREETING_TEXT,
                     PROGRAMS_DIR, answers, distinct_names, load, make_db,
                     random_term, scripted_trace, stripped_db)

EX0_PATH = str(PROGRAMS_DIR / "ex0.pl")


def report(name: str) -> None:
    print("ACCEPTANCE PASS: %s" % name)


class timed:
    def __init__(self, limit: float):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.monotonic()
        return self

    def __exit__(self, *exc):
        if exc[0] is None:
            elapsed = time.monotonic() - self.t0
            assert elapsed < self.limit, \
                "took %.2fs, limit %.2fs" % (elapsed, self.limit)


def test_fig1_expansion_golden(capsys):
    with timed(1.0):
        code = main(["expand", EX0_PATH, "--strip"])
        out = capsys.readouterr().out
        assert code == 0
        sentences = read_all(out, default_ops(), "got")
        assert len(sentences) == 5

        x, res, m_, l_, k_, t = (fresh_var(n) for n in "X R M L K T".split())
        expected = [
            mk(":-", mk("f", x, res),
               mk(",", mk("<", x, Int(42)),
                  mk(",", Atom("!"),
                     mk(",", mk("m", x, m_),
                        mk(",", mk("l", m_, l_),
                           mk(",", mk("k", l_, k_),
                              mk(",", mk("is", t, mk("*", k_, Int(3))),
                                 mk("=", res, t)))))))),
            mk("f", x, Int(1000)),
            mk(":-", mk("k", x, res), mk("is", res, mk("+", x, Int(1)))),
            mk(":-", mk("l", x, res), mk("is", res, mk("-", x, Int(2)))),
            mk("m", x, x),
        ]
        for got, want in zip(sentences, expected):
            assert variant(got.term, want), (got.term, want)

        squeezed = [re.sub(r"\s+", "", line) for line in out.splitlines()]
        assert any(re.fullmatch(r"k\(X,(\w+)\):-\1isX\+1\.", s) for s in squeezed)
        assert "m(X,X)." in squeezed
    report("expansion golden test (strip output, chained dataflow, "
           "verbatim k/m clauses)")


def test_raw_trace_reproduction():
    with timed(1.0):
        prog = load(EX0_TEXT, "ex0")
        lines, sols = scripted_trace(prog, "f(3,R)", "target")
        match = re.fullmatch(r"   2  2    Call: f\(3,(_G\d+)\) \? ", lines[0])
        assert match, lines[0]
        assert lines[0] == "   2  2    Call: f(3,%s) ? " % match.group(1)
        calls = []
        for line in lines:
            m = re.match(r"\s*(\d+)\s+(\d+)    Call: ([^( ]+)", line)
            if m:
                calls.append((int(m.group(1)), int(m.group(2)), m.group(3)))
        assert calls == [
            (2, 2, "f"), (3, 3, "<"), (4, 3, "m"), (5, 3, "l"), (6, 4, "is"),
            (7, 3, "k"), (8, 4, "is"), (9, 3, "is"), (10, 3, "="),
        ], calls
        assert sols == ["R = 6"]
    report("raw trace reproduction (reference port/goal sequence, "
           "byte-checked layout)")


def test_source_level_trace_reproduction():
    with timed(1.0):
        prog = load(EX0_TEXT, "ex0")
        lines, sols = scripted_trace(prog, "f(3,R)", "source")
        texts = [
            "f(3) := 3 < 42 ? k(l(m(3)))*3 | 1000",
            "m(3) := 3",
            "l(3) := 3 - 2",
            "k(1) := 1 + 1",
        ]
        pos = -1
        for text in texts:
            hits = [i for i, line in enumerate(lines) if text in line]
            assert hits, text
            assert hits[0] > pos
            pos = hits[0]
        # translation-introduced unifications are invisible
        assert not any(re.search(r"(Call|Exit|Redo|Fail): =\(", line)
                       for line in lines)
        # Published versions of this example print f(3,12), passing X to
        # all three calls; that contradicts the leftmost-innermost rewrite
        # (and the displayed step "k(1) := 1 + 1", where k receives l's
        # result). With the chained dataflow the answer is 6.
        assert sols == ["R = 6"]
    report("source-level trace reproduction (declaration texts in order, "
           "unifications hidden, R = 6)")


def _random_queries(rng: random.Random):
    ex0_args = lambda: Int(rng.randint(-5, 50))
    tokens = ["hello", "world", "prolog", "bye"]
    people = ["tom", "bob", "liz", "ann", "pat", "zoe"]

    def var_or(mk_value):
        return fresh_var() if rng.random() < 0.5 else mk_value()

    queries = []
    for _ in range(70):
        name = rng.choice(["f", "k", "l", "m"])
        queries.append(("ex0", mk(name, ex0_args(), fresh_var())))
    for _ in range(50):
        toks = mk_list([Atom(rng.choice(tokens))
                        for _ in range(rng.randint(0, 3))])
        nt = rng.choice(["greeting", "name"])
        queries.append(("g", mk(nt, toks, var_or(lambda: Atom("[]")))))
    for _ in range(50):
        name = rng.choice(["parent", "grandparent", "sibling"])
        args = [var_or(lambda: Atom(rng.choice(people))) for _ in range(2)]
        queries.append(("fam", mk(name, *args)))
    for _ in range(30):
        name, arity = rng.choice([("double", 2), ("quad", 2), ("fact", 2)])
        queries.append(("ar", mk(name, Int(rng.randint(0, 7)), fresh_var())))
    return queries


def test_annotation_transparency_property_suite():
    with timed(10.0):
        programs = {
            "ex0": load(EX0_TEXT, "ex0"),
            "g": load(GREETING_TEXT, "g"),
            "fam": load(FAMILY_TEXT, "fam"),
            "ar": load(ARITH_TEXT, "ar"),
        }
        dbs = {name: (make_db(p), stripped_db(p), p.ops)
               for name, p in programs.items()}

        # shipped example queries first
        fixed = [
            ("ex0", parse_query("f(3,R)", programs["ex0"].ops).term),
            ("ex0", parse_query("f(100,R)", programs["ex0"].ops).term),
            ("g", parse_query("greeting([hello,world],[])",
                              programs["g"].ops).term),
            ("fam", parse_query("grandparent(X,Z)", programs["fam"].ops).term),
        ]
        rng = random.Random(99)
        randomized = _random_queries(rng)
        assert len(randomized) == 200
        checked = 0
        for name, goal in fixed + randomized:
            annotated_db, plain_db, ops = dbs[name]
            assert answers(annotated_db, goal, ops) == \
                answers(plain_db, goal, ops), (name, goal)
            checked += 1
        assert checked == 204
        # the else-branch value is the published one
        ex0_db, _, ops = dbs["ex0"]
        assert answers(ex0_db, parse_query("f(100,R)", ops).term, ops) \
            == ["f(100,1000)"]
    report("annotation transparency across corpus + 200 randomized queries")


def test_unification_and_reader_property_suites():
    with timed(10.0):
        rng = random.Random(41)
        unifiable = 0
        for _ in range(1000):
            pool = [fresh_var("U%d" % i) for i in range(3)]
            t1 = random_term(rng, depth=3, var_pool=pool)
            t2 = random_term(rng, depth=3, var_pool=pool)
            s12 = unify(t1, t2, occurs_check=True)
            s21 = unify(t2, t1, occurs_check=True)
            assert (s12 is None) == (s21 is None)
            if s12 is None:
                continue
            unifiable += 1
            a1 = apply_subst(s12, t1)
            assert a1 == apply_subst(s12, t2)
            assert variant(a1, apply_subst(s21, t1))
            assert apply_subst(s12, a1) == a1           # idempotence
            for vid, bound in s12.items():
                assert not occurs_in(s12, vid, bound)   # occurs soundness
        assert unifiable > 50

        ops = default_ops()
        ops.add(1150, "xfx", ":=")
        ops.add(1100, "xfy", "|")
        ops.add(1050, "xfx", "?")
        for _ in range(1000):
            t = distinct_names(random_term(rng, depth=4))
            back = read_sentence(write_term(t, ops) + " .", ops)
            assert back is not None and variant(back.term, t)
    report("unification + reader property suites (1000 pairs, 1000 "
           "read/write round trips)")


def test_dcg_oracle():
    with timed(2.0):
        prog = load(GREETING_TEXT, "g")
        db = make_db(prog)
        ok = answers(db, parse_query("greeting([hello,world],[])",
                                     prog.ops).term, prog.ops)
        assert ok == ["greeting([hello,world],[])"]
        bad = answers(db, parse_query("phrase(greeting,[bye],[])",
                                      prog.ops).term, prog.ops)
        assert bad == []
        source_arity = {}
        for sent in prog.sentences:
            head = sent.term.args[0]
            name = head.name if isinstance(head, Atom) else head.functor
            source_arity[name] = 0 if isinstance(head, Atom) else len(head.args)
        for clause in prog.clauses:
            assert len(clause.head.args) == source_arity[clause.head.functor] + 2
    report("DCG oracle (greeting parse, failing phrase, arity shift)")


def test_protocol_conformance():
    with timed(2.0):
        prog = load(EX0_TEXT, "ex0")
        server = DebugServer(prog, "f(3,R)", "programs/ex0.pl", port=0)
        thread = threading.Thread(target=server.serve_one, daemon=True)
        thread.start()
        events = []
        try:
            sock = socket.create_connection(("127.0.0.1", server.port),
                                            timeout=10)
            with sock:
                rfile = sock.makefile("r", encoding="utf-8")
                wfile = sock.makefile("w", encoding="utf-8")
                pending = 0
                while True:
                    raw = rfile.readline()
                    assert raw.endswith("\n") and raw.count("\n") == 1
                    event = json.loads(raw)      # every line parses as JSON
                    events.append(event)
                    if event["type"] == "done":
                        break
                    if event["type"] == "port" and not event["hidden"]:
                        assert pending == 0      # strict alternation
                        pending += 1
                        wfile.write(json.dumps({"cmd": "step"}) + "\n")
                        wfile.flush()
                        pending -= 1
            thread.join(timeout=10)
        finally:
            server.close()
        assert events[0]["type"] == "hello"
        solutions = [e for e in events if e["type"] == "solution"]
        assert solutions == [{"type": "solution", "bindings": {"R": "6"}}]
        assert events[-1]["type"] == "done"
    report("protocol conformance (TCP step-to-completion, alternation, "
           "solution R = 6)")
