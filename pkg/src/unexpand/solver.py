"""SLD-resolution interpreter emitting Byrd-box trace events.

Solutions are enumerated lazily in standard order: leftmost goal, top
clause first, chronological backtracking.  Every procedure box gets a
globally unique invocation number and emits call/exit/redo/fail events
to a monitor callback; a monitor may answer "abort" to unwind the whole
query.  '$gmark'(Id, Goal) wrappers left by annotation extraction are
executed transparently: they create no box of their own, and a '!'
inside one still cuts the enclosing clause.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .errors import InstantiationError, LoadError, PrologError, UnexpandError
from .expansion import GOAL_MARK, Clause, ClauseId, RESERVED_HEADS
from .reader import OperatorTable, default_ops, read_sentence
from .terms import (EMPTY_SUBST, Atom, Compound, Int, Subst, Term, Var,
                    eval_arith, indicator, rename_with_map, unify)
from .writer import write_term

COMPARISONS: dict[str, Callable[[int, int], bool]] = {
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
    "=<": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
}


@dataclass(frozen=True)
class TraceEvent:
    n: int
    depth: int
    port: str
    goal: Term                      # current instance; bindings live in subst
    subst: Subst
    clause_id: ClauseId | None      # clause whose body invoked this goal
    renaming: dict[int, Var] | None  # that clause activation's variable renaming
    goal_id: int | None             # id of the '$gmark' the goal came from


@dataclass(frozen=True)
class ExistenceEvent:
    """Side note emitted between the call and fail ports of an unknown
    predicate's box."""
    n: int
    depth: int
    goal: Term
    subst: Subst
    message: str


Monitor = Callable[[TraceEvent | ExistenceEvent], str | None]


class QueryAborted(UnexpandError):
    """Raised through the solve stack when a monitor answers "abort"."""


class Database:
    """Indexed, immutable clause store plus package-provided builtins."""

    def __init__(self, clauses: list[Clause],
                 extensions: dict[tuple[str, int], Callable] | None = None):
        self._preds: dict[tuple[str, int], list[Clause]] = {}
        self.by_id: dict[ClauseId, Clause] = {}
        for clause in clauses:
            self._preds.setdefault(indicator(clause.head), []).append(clause)
            self.by_id[clause.id] = clause
        self.extensions = dict(extensions or {})

    def clauses_for(self, key: tuple[str, int]) -> list[Clause] | None:
        return self._preds.get(key)

    def predicates(self) -> list[tuple[str, int]]:
        return sorted(self._preds)


def consult(clauses: list[Clause],
            extensions: dict[tuple[str, int], Callable] | None = None) -> Database:
    for clause in clauses:
        if not isinstance(clause.head, (Atom, Compound)):
            raise LoadError("clause head must be an atom or compound")
        if indicator(clause.head) in RESERVED_HEADS:
            raise LoadError("reserved functor in clause head: %s/%d"
                            % indicator(clause.head))
    return Database(clauses, extensions)


@dataclass
class _Activation:
    clause_id: ClauseId
    renaming: dict[int, Var]


class _CutBox:
    __slots__ = ("fired",)

    def __init__(self) -> None:
        self.fired = False


def flatten_body(body: Term) -> list[tuple[Term, int | None]]:
    """Body goals in execution order, each with its '$gmark' id if any.

    Conjunctions inside a mark are spliced without the id: the mark then
    describes the group, and the member goals report through their own
    clause or callee annotations instead.
    """
    out: list[tuple[Term, int | None]] = []

    def walk(t: Term, gid: int | None) -> None:
        if isinstance(t, Compound) and t.functor == "," and len(t.args) == 2:
            walk(t.args[0], gid)
            walk(t.args[1], gid)
        elif (isinstance(t, Compound) and t.functor == GOAL_MARK
              and len(t.args) == 2 and isinstance(t.args[0], Int)):
            inner = t.args[1]
            if isinstance(inner, Compound) and inner.functor == "," and len(inner.args) == 2:
                walk(inner, None)
            else:
                walk(inner, t.args[0].value)
        elif isinstance(t, Atom) and t.name == "true":
            pass
        else:
            out.append((t, gid))

    walk(body, None)
    return out


class Solver:
    def __init__(self, db: Database, monitor: Monitor | None = None,
                 occurs_check: bool = False, first_invocation: int = 1):
        self.db = db
        self.monitor = monitor
        self.occurs_check = occurs_check
        self._n = first_invocation - 1

    # -- events --------------------------------------------------------------

    def _next_n(self) -> int:
        self._n += 1
        return self._n

    def _emit(self, ev: TraceEvent | ExistenceEvent) -> None:
        if self.monitor is None:
            return
        if self.monitor(ev) == "abort":
            raise QueryAborted()

    def _event(self, n: int, depth: int, port: str, goal: Term, s: Subst,
               site: _Activation | None, gid: int | None) -> None:
        self._emit(TraceEvent(n, depth, port, goal, s,
                              site.clause_id if site else None,
                              site.renaming if site else None, gid))

    # -- public entry ----------------------------------------------------------

    def solve(self, goal: Term, s: Subst | None = None,
              depth: int = 1) -> Iterator[Subst]:
        s = s if s is not None else EMPTY_SUBST
        items = flatten_body(goal)
        yield from self._seq(items, 0, s, depth, None, _CutBox())

    # -- resolution ------------------------------------------------------------

    def _seq(self, items: list[tuple[Term, int | None]], idx: int, s: Subst,
             depth: int, site: _Activation | None,
             cutbox: _CutBox) -> Iterator[Subst]:
        if idx == len(items):
            yield s
            return
        goal, gid = items[idx]
        if isinstance(goal, Atom) and goal.name == "!":
            yield from self._seq(items, idx + 1, s, depth, site, cutbox)
            cutbox.fired = True  # backtracked into the cut: prune this clause
            return
        gen = self._solve_goal(goal, gid, s, depth, site)
        for s1 in gen:
            yield from self._seq(items, idx + 1, s1, depth, site, cutbox)
            if cutbox.fired:
                gen.close()
                return

    def _boxed(self, goal: Term, gid: int | None, s: Subst, depth: int,
               site: _Activation | None,
               produce: Iterator[Subst]) -> Iterator[Subst]:
        n = self._next_n()
        self._event(n, depth, "call", goal, s, site, gid)
        if isinstance(goal, (Atom, Compound)) \
                and self.db.clauses_for(indicator(goal)) is None \
                and indicator(goal) not in _BUILTINS \
                and indicator(goal) not in self.db.extensions:
            self._emit(ExistenceEvent(n, depth, goal, s,
                                      "existence error: unknown predicate %s/%d"
                                      % indicator(goal)))
        for s1 in produce:
            self._event(n, depth, "exit", goal, s1, site, gid)
            yield s1
            self._event(n, depth, "redo", goal, s1, site, gid)
        self._event(n, depth, "fail", goal, s, site, gid)

    def _solve_goal(self, goal: Term, gid: int | None, s: Subst, depth: int,
                    site: _Activation | None) -> Iterator[Subst]:
        goal = s.walk(goal)
        if isinstance(goal, Var):
            raise InstantiationError("unbound goal")
        if isinstance(goal, Int):
            raise PrologError("goal must be callable: %r" % (goal,))
        key = indicator(goal)
        if key == ("true", 0):
            yield s
            return
        if key == ("!", 0):
            # a dynamically-called cut has nothing to prune
            yield s
            return
        if key == (",", 2):
            yield from self._seq(flatten_body(goal), 0, s, depth, site, _CutBox())
            return
        if key == (GOAL_MARK, 2) and isinstance(goal.args[0], Int):
            inner = goal.args[1]
            inner_gid = goal.args[0].value
            if isinstance(inner, Compound) and inner.functor == ",":
                yield from self._seq(flatten_body(inner), 0, s, depth, site, _CutBox())
            else:
                yield from self._solve_goal(inner, inner_gid, s, depth, site)
            return
        if key == ("call", 1):
            payload = s.walk(goal.args[0])
            if isinstance(payload, Var):
                raise InstantiationError("call/1: unbound goal")
            yield from self._solve_goal(payload, None, s, depth, None)
            return
        if key in _BUILTINS:
            yield from self._boxed(goal, gid, s, depth, site,
                                   _BUILTINS[key](self, goal, s))
            return
        if key in self.db.extensions:
            constructed = self.db.extensions[key](goal.args, s, self)

            def meta() -> Iterator[Subst]:
                yield from self._solve_goal(constructed, None, s, depth + 1, None)

            yield from self._boxed(goal, gid, s, depth, site, meta())
            return
        yield from self._boxed(goal, gid, s, depth, site,
                               self._clauses(goal, key, s, depth))

    def _clauses(self, goal: Term, key: tuple[str, int], s: Subst,
                 depth: int) -> Iterator[Subst]:
        clauses = self.db.clauses_for(key)
        if clauses is None:
            return
        mycut = _CutBox()
        for clause in clauses:
            scheme = Compound(":-", (clause.head, clause.body))
            renamed, mapping = rename_with_map(scheme, keep_names=False)
            assert isinstance(renamed, Compound)
            head, body = renamed.args
            s1 = unify(goal, head, s, occurs_check=self.occurs_check)
            if s1 is None:
                continue
            act = _Activation(clause.id, mapping)
            items = flatten_body(body)
            yield from self._seq(items, 0, s1, depth + 1, act, mycut)
            if mycut.fired:
                return


# -- builtin predicates --------------------------------------------------------

def _bi_unify(solver: Solver, goal: Compound, s: Subst) -> Iterator[Subst]:
    s1 = unify(goal.args[0], goal.args[1], s, occurs_check=solver.occurs_check)
    if s1 is not None:
        yield s1


def _bi_is(solver: Solver, goal: Compound, s: Subst) -> Iterator[Subst]:
    value = Int(eval_arith(goal.args[1], s))
    s1 = unify(goal.args[0], value, s, occurs_check=solver.occurs_check)
    if s1 is not None:
        yield s1


def _bi_compare(op: str):
    def run(solver: Solver, goal: Compound, s: Subst) -> Iterator[Subst]:
        a = eval_arith(goal.args[0], s)
        b = eval_arith(goal.args[1], s)
        if COMPARISONS[op](a, b):
            yield s
    return run


def _bi_fail(solver: Solver, goal: Term, s: Subst) -> Iterator[Subst]:
    return iter(())


_BUILTINS: dict[tuple[str, int], Callable] = {
    ("=", 2): _bi_unify,
    ("is", 2): _bi_is,
    ("<", 2): _bi_compare("<"),
    (">", 2): _bi_compare(">"),
    ("=<", 2): _bi_compare("=<"),
    (">=", 2): _bi_compare(">="),
    ("fail", 0): _bi_fail,
}


# -- query convenience -----------------------------------------------------------

def parse_query(text: str, ops: OperatorTable | None = None):
    """Sentence for a query string; a missing final period is tolerated."""
    text = text.strip()
    if not text.endswith("."):
        text += " ."
    sent = read_sentence(text, ops or default_ops(), "query")
    if sent is None:
        raise PrologError("empty query")
    return sent


def solution_line(var_names: dict[int, str], s: Subst,
                  ops: OperatorTable | None = None) -> str:
    parts = ["%s = %s" % (name, write_term(Var(vid), ops, s))
             for vid, name in var_names.items()]
    return ", ".join(parts) if parts else "yes"


def run_query(text: str, db: Database, ops: OperatorTable | None = None,
              monitor: Monitor | None = None) -> list[str]:
    """Solve a query string; one line per solution, or ["no"]."""
    sent = parse_query(text, ops)
    solver = Solver(db, monitor)
    lines = []
    for s in solver.solve(sent.term):
        lines.append(solution_line(sent.var_names, s, ops))
    return lines if lines else ["no"]
