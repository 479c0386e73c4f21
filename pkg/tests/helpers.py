"""Shared test machinery: generators, trace capture, answer comparison."""

from __future__ import annotations

import random
from pathlib import Path

from unexpand.debugger import DebugSession, ScriptIO, interactive_loop
from unexpand.expansion import Program, load_text, strip_annotations
from unexpand.reader import OperatorTable, default_ops
from unexpand.registry import default_registry
from unexpand.solver import Database, Solver, TraceEvent, consult
from unexpand.terms import (Atom, Compound, Int, Subst, Term, Var, fresh_var,
                            term_vars)
from unexpand.writer import write_term

PROGRAMS_DIR = Path(__file__).resolve().parent.parent / "programs"

EX0_TEXT = (PROGRAMS_DIR / "ex0.pl").read_text(encoding="utf-8")
GREETING_TEXT = (PROGRAMS_DIR / "greeting.pl").read_text(encoding="utf-8")
FAMILY_TEXT = (PROGRAMS_DIR / "family.pl").read_text(encoding="utf-8")
ARITH_TEXT = (PROGRAMS_DIR / "arith.pl").read_text(encoding="utf-8")


def load(text: str, module: str) -> Program:
    return load_text(text, module, default_registry())


def make_db(program: Program) -> Database:
    return consult(program.clauses, program.builtins)


def stripped_db(program: Program) -> Database:
    return consult(strip_annotations(program.annotated, program.module),
                   program.builtins)


# -- random terms ----------------------------------------------------------------

SAFE_ATOMS = ["a", "b", "foo", "bar", "[]", "{}", "nil"]
OP_ATOMS = ["+", "-", "*", "mod", "is", "=", ":-"]
FUNCTORS = ["f", "g", "h", "pair", "+", "-", "*", "is", "=", "."]


def random_term(rng: random.Random, depth: int = 4,
                var_pool: list[Var] | None = None) -> Term:
    if var_pool is None:
        var_pool = [fresh_var("V%d" % i) for i in range(rng.randint(1, 4))]
    roll = rng.random()
    if depth == 0 or roll < 0.35:
        kind = rng.randint(0, 2)
        if kind == 0:
            return rng.choice(var_pool)
        if kind == 1:
            return Atom(rng.choice(SAFE_ATOMS + OP_ATOMS))
        return Int(rng.randint(-99, 99))
    functor = rng.choice(FUNCTORS)
    arity = 2 if functor in ("+", "-", "*", "is", "=", ".") else rng.randint(1, 3)
    args = tuple(random_term(rng, depth - 1, var_pool) for _ in range(arity))
    return Compound(functor, args)


def distinct_names(t: Term) -> Term:
    """Give every distinct variable its own safe display name."""
    from unexpand.terms import instantiate
    mapping = {}
    for i, v in enumerate(term_vars(t)):
        mapping[v.id] = Var(v.id, "X%d" % i)
    return instantiate(t, mapping)


# -- traces ------------------------------------------------------------------------

def collect_events(db: Database, goal: Term, first_invocation: int = 2,
                   depth: int = 2) -> tuple[list, list[Subst]]:
    events: list = []
    solver = Solver(db, events.append, first_invocation=first_invocation)
    solutions = list(solver.solve(goal, depth=depth))
    return events, solutions


def scripted_trace(program: Program, goal: str, view: str,
                   commands: list[str] | None = None) -> tuple[list[str], list[str]]:
    """(step lines, solution lines) for a scripted debug session."""
    db = make_db(program)
    sess = DebugSession(db, program.symtab, program.ops, program.module,
                        view=view)
    lines: list[str] = []
    solutions: list[str] = []
    io = ScriptIO(commands or [], lines.append)
    interactive_loop(sess, goal, io, solutions.append)
    return lines, solutions


def check_port_discipline(events: list) -> None:
    follows = {
        None: {"call"},
        "call": {"exit", "fail"},
        "exit": {"redo"},
        "redo": {"exit", "fail"},
        "fail": set(),
    }
    last: dict[int, str] = {}
    for ev in events:
        if not isinstance(ev, TraceEvent):
            continue
        allowed = follows[last.get(ev.n)]
        assert ev.port in allowed, \
            "box %d: %s after %s" % (ev.n, ev.port, last.get(ev.n))
        last[ev.n] = ev.port


# -- answers ---------------------------------------------------------------------

def canonical_answer(goal: Term, s: Subst, ops: OperatorTable | None = None) -> str:
    """Answer rendered with variables normalized to appearance order."""
    from unexpand.terms import instantiate
    resolved = s.resolve(goal)
    mapping = {}
    for i, v in enumerate(term_vars(resolved)):
        mapping[v.id] = Var(v.id, "_A%d" % i)
    return write_term(instantiate(resolved, mapping), ops or default_ops())


def answers(db: Database, goal: Term, ops=None, limit: int = 500) -> list[str]:
    solver = Solver(db)
    out = []
    for s in solver.solve(goal):
        out.append(canonical_answer(goal, s, ops))
        if len(out) >= limit:
            break
    return sorted(out)
