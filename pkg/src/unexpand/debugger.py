"""Interactive trace controller.

For every solver event the meta-controller picks the most specific
source rendering available: the goal's own annotation, then the
definition annotation of the predicate being called, then the
annotation of the clause the goal was generated from, and finally the
raw target goal (module-qualified).  Unifications introduced by a
translation are suppressed entirely in source view; target view always
shows the raw trace.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .expansion import SourceInfo, SymbolTable
from .reader import OperatorTable
from .solver import (Database, ExistenceEvent, QueryAborted, Solver,
                     TraceEvent, parse_query, solution_line)
from .terms import (Atom, Compound, Subst, Term, Var, indicator, instantiate,
                    rename_with_map, set_var_counter, unify, var_counter)
from .writer import write_goal, write_term

PORT_NAMES = {"call": "Call", "exit": "Exit", "redo": "Redo", "fail": "Fail"}


@dataclass
class DebugSession:
    db: Database
    symtab: SymbolTable
    ops: OperatorTable
    module: str
    mode: str = "trace"            # trace | leap | skip | off
    skip_depth: int = 0
    view: str = "source"           # source | target
    spypoints: set[tuple[str, int]] = field(default_factory=set)
    spy_targets: set[tuple[str, int]] = field(default_factory=set)
    last_clause_info: SourceInfo | None = None

    def spy(self, name: str, arity: int) -> None:
        self.spypoints.add((name, arity))
        self._resolve_spypoints()

    def nospy(self, name: str, arity: int) -> None:
        self.spypoints.discard((name, arity))
        self._resolve_spypoints()

    def _resolve_spypoints(self) -> None:
        """Expand source-level spypoints to the translated predicates.

        Spying f/1 must also stop at f/2 when f/1 was defined in
        functional or grammar notation; the definition head inside each
        clause annotation tells us the source arity.
        """
        targets = set(self.spypoints)
        for cid, info in self.symtab.clause_entries.items():
            if info.si is None or not isinstance(info.si, Compound):
                continue
            if info.si.functor not in (":=", "-->") or len(info.si.args) != 2:
                continue
            src_head = info.si.args[0]
            if not isinstance(src_head, (Atom, Compound)):
                continue
            if indicator(src_head) in self.spypoints:
                clause = self.db.by_id.get(cid)
                if clause is not None:
                    targets.add(indicator(clause.head))
        self.spy_targets = targets


@dataclass
class DisplayedStep:
    n: int
    depth: int
    port: str
    text: str
    origin: str                    # source | target | module-qualified
    line: int | None = None


def format_step(step: DisplayedStep) -> str:
    return "%4d %2d    %s: %s ? " % (step.n, step.depth,
                                     PORT_NAMES[step.port], step.text)


def _is_plain_unification(goal: Term) -> bool:
    return (isinstance(goal, Compound) and goal.functor == "=" and
            len(goal.args) == 2 and
            (isinstance(goal.args[0], Var) or isinstance(goal.args[1], Var)))


def _qualified_raw(ev: TraceEvent, sess: DebugSession) -> str:
    text = write_goal(ev.goal, sess.ops, ev.subst)
    key = indicator(ev.goal) if isinstance(ev.goal, (Atom, Compound)) else None
    if key is not None and sess.db.clauses_for(key) is not None:
        return "%s:%s" % (sess.module, text)
    return text


def _render_si(info: SourceInfo, renaming: dict[int, Var] | None,
               s: Subst, sess: DebugSession) -> str:
    si = info.si
    assert si is not None
    if renaming:
        si = instantiate(si, dict(renaming))
    return write_term(si, sess.ops, s)


def _callee_definition_view(ev: TraceEvent,
                            sess: DebugSession) -> tuple[str, int | None] | None:
    """Render the called predicate's own definition under the call's
    bindings: the first clause whose head matches decides.

    Renaming here is display-only, so the fresh-variable counter is
    restored afterwards; otherwise trace variable numbering would depend
    on the active view.
    """
    goal = ev.subst.resolve(ev.goal)
    if not isinstance(goal, (Atom, Compound)):
        return None
    clauses = sess.db.clauses_for(indicator(goal))
    if not clauses:
        return None
    mark = var_counter()
    try:
        for clause in clauses:
            info = sess.symtab.lookup_clause(clause.id)
            if info is None or info.si is None:
                head_renamed, _m = rename_with_map(clause.head, keep_names=False)
                if unify(goal, head_renamed) is not None:
                    return None     # first matching clause carries no annotation
                continue
            renamed, _m = rename_with_map(
                Compound("$view", (clause.head, info.si)), keep_names=False)
            assert isinstance(renamed, Compound)
            head, si = renamed.args
            u = unify(goal, head)
            if u is None:
                continue
            return write_term(si, sess.ops, u), info.span.start_line
        return None
    finally:
        set_var_counter(mark)


def meta_controller(ev: TraceEvent, sess: DebugSession) -> DisplayedStep | None:
    """DisplayedStep for one event, or None when the step is hidden."""
    if sess.view == "target":
        text = write_goal(ev.goal, sess.ops, ev.subst)
        return DisplayedStep(ev.n, ev.depth, ev.port, text, "target")

    site_info = sess.symtab.lookup_clause(ev.clause_id) if ev.clause_id else None
    if site_info is not None:
        sess.last_clause_info = site_info

    if ev.goal_id is not None:
        info = sess.symtab.lookup_goal(ev.goal_id)
        if info is not None and info.si is not None:
            text = _render_si(info, ev.renaming, ev.subst, sess)
            return DisplayedStep(ev.n, ev.depth, ev.port, text, "source",
                                 info.span.start_line)

    if site_info is not None and ev.goal_id is None and _is_plain_unification(ev.goal):
        return None             # translation-introduced unification

    if site_info is not None:
        rendered = _callee_definition_view(ev, sess)
        if rendered is not None:
            text, line = rendered
            return DisplayedStep(ev.n, ev.depth, ev.port, text, "source", line)
        if site_info.si is not None:
            text = _render_si(site_info, ev.renaming, ev.subst, sess)
            return DisplayedStep(ev.n, ev.depth, ev.port, text, "source",
                                 site_info.span.start_line)

    return DisplayedStep(ev.n, ev.depth, ev.port, _qualified_raw(ev, sess),
                         "module-qualified")


# -- stepping ------------------------------------------------------------------

class ScriptIO:
    """Command source for non-interactive sessions: one command per
    prompt; an exhausted script keeps creeping."""

    def __init__(self, commands: Iterable[str], sink: Callable[[str], None]):
        self._commands = list(commands)
        self._pos = 0
        self._sink = sink

    def prompt(self, text: str) -> str:
        self._sink(text)
        if self._pos < len(self._commands):
            cmd = self._commands[self._pos]
            self._pos += 1
            return cmd
        return "c"

    def note(self, text: str) -> None:
        self._sink(text)


class TerminalIO:
    def __init__(self, out=None, infile=None):
        self._out = out or sys.stdout
        self._in = infile or sys.stdin

    def prompt(self, text: str) -> str:
        self._out.write(text)
        self._out.flush()
        line = self._in.readline()
        if not line:
            return "a"
        return line.strip()

    def note(self, text: str) -> None:
        self._out.write(text + "\n")
        self._out.flush()


def _parse_spypoint(text: str) -> tuple[str, int] | None:
    name, sep, arity = text.partition("/")
    if not sep or not name or not arity.isdigit():
        return None
    return name, int(arity)


def _should_stop(sess: DebugSession, ev: TraceEvent) -> bool:
    if sess.mode == "off":
        return False
    if sess.mode == "trace":
        return True
    if sess.mode == "skip":
        if ev.depth <= sess.skip_depth:
            sess.mode = "trace"
            return True
        return False
    if sess.mode == "leap":
        if isinstance(ev.goal, (Atom, Compound)):
            return indicator(ev.goal) in sess.spy_targets
        return False
    return True


def apply_command(cmd: str, sess: DebugSession, ev: TraceEvent) -> str | None:
    """Mutate the session per one debugger command.

    Returns "abort" to unwind, "again" when another command is needed
    (malformed input), or None to proceed.
    """
    cmd = cmd.strip()
    if cmd in ("", "c"):
        sess.mode = "trace"
        return None
    if cmd == "s":
        sess.mode = "skip"
        sess.skip_depth = ev.depth
        return None
    if cmd == "l":
        sess.mode = "leap"
        return None
    if cmd == "a":
        return "abort"
    if cmd == "v":
        sess.view = "target" if sess.view == "source" else "source"
        return None
    if cmd.startswith("+") or cmd.startswith("-"):
        point = _parse_spypoint(cmd[1:])
        if point is None:
            return "again"
        if cmd.startswith("+"):
            sess.spy(*point)
        else:
            sess.nospy(*point)
        return None
    return "again"


def interactive_loop(sess: DebugSession, query_text: str, io,
                     out: Callable[[str], None]) -> list[Subst]:
    """Drive one query under the debugger; returns its solutions."""
    sent = parse_query(query_text, sess.ops)
    renamed, qmap = rename_with_map(sent.term, keep_names=False)
    display_names = {qmap[vid].id: name for vid, name in sent.var_names.items()
                     if vid in qmap}

    def monitor(ev):
        if isinstance(ev, ExistenceEvent):
            io.note("% " + ev.message)
            return None
        step = meta_controller(ev, sess)
        if step is None or not _should_stop(sess, ev):
            return None
        while True:
            cmd = io.prompt(format_step(step))
            action = apply_command(cmd, sess, ev)
            if action != "again":
                return action

    solver = Solver(sess.db, monitor, first_invocation=2)
    solutions: list[Subst] = []
    aborted = False
    try:
        for s in solver.solve(renamed, depth=2):
            solutions.append(s)
    except QueryAborted:
        aborted = True
    for s in solutions:
        out(solution_line(display_names, s, sess.ops))
    if not solutions and not aborted:
        out("no")
    return solutions
