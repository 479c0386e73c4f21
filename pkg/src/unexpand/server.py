"""Newline-delimited JSON debug protocol.

One session per connection: a "hello" event opens, "port" events stream
the trace, and after every non-hidden port event the server blocks until
the client sends exactly one request.  Hidden steps are emitted too (to
let a client dim them) but consume no request.  Solutions and
termination are reported with "solution" and "done" events.
"""

from __future__ import annotations

import json
import socket
from dataclasses import dataclass
from .debugger import DebugSession, apply_command, meta_controller
from .errors import ProtocolError
from .expansion import Program
from .solver import (ExistenceEvent, QueryAborted, Solver, TraceEvent,
                     consult, parse_query)
from .terms import Var, rename_with_map, set_var_counter
from .writer import write_goal, write_term

PROTOCOL_VERSION = 1
DEFAULT_PORT = 7458

_COMMANDS = {"step": "c", "continue": "l", "skip": "s", "abort": "a"}


@dataclass
class LineChannel:
    """Blocking line transport; EOF reads as None."""
    rfile: object
    wfile: object

    def send(self, payload: dict) -> None:
        self.wfile.write(json.dumps(payload, separators=(",", ":")) + "\n")
        self.wfile.flush()

    def recv(self) -> dict | None:
        line = self.rfile.readline()
        if not line:
            return None
        try:
            value = json.loads(line)
        except ValueError:
            raise ProtocolError("malformed JSON request") from None
        if not isinstance(value, dict):
            raise ProtocolError("request must be a JSON object")
        return value


def _port_event(ev: TraceEvent, sess: DebugSession, module: str) -> tuple[dict, bool]:
    target = write_goal(ev.goal, sess.ops, ev.subst)
    hidden = False
    source = None
    line = None
    if sess.view == "source":
        step = meta_controller(ev, sess)
        if step is None:
            hidden = True
        else:
            source = step.text
            line = step.line
    return ({
        "type": "port",
        "n": ev.n,
        "depth": ev.depth,
        "port": ev.port,
        "source": source,
        "target": target,
        "module": module,
        "line": line,
        "hidden": hidden,
    }, hidden)


def serve_session(channel: LineChannel, program: Program, goal_text: str,
                  file_label: str) -> None:
    """Run one query to completion (or abort) over the channel."""
    set_var_counter(program.var_base)
    db = consult(program.clauses, program.builtins)
    sess = DebugSession(db, program.symtab, program.ops, program.module)
    channel.send({"type": "hello", "version": PROTOCOL_VERSION,
                  "file": file_label, "goal": goal_text})
    try:
        sent = parse_query(goal_text, sess.ops)
    except Exception as exc:
        channel.send({"type": "error", "message": str(exc)})
        channel.send({"type": "done"})
        return
    renamed, qmap = rename_with_map(sent.term, keep_names=False)
    display_names = {qmap[vid].id: name for vid, name in sent.var_names.items()
                     if vid in qmap}

    def monitor(ev):
        if isinstance(ev, ExistenceEvent):
            channel.send({"type": "error", "message": ev.message})
            return None
        payload, hidden = _port_event(ev, sess, program.module)
        channel.send(payload)
        if hidden:
            return None
        while True:
            request = channel.recv()
            if request is None:
                return "abort"          # connection closed
            cmd = request.get("cmd")
            if cmd in _COMMANDS:
                return apply_command(_COMMANDS[cmd], sess, ev)
            if cmd in ("spy", "nospy"):
                pred = request.get("pred", "")
                action = apply_command(("+" if cmd == "spy" else "-") + pred,
                                       sess, ev)
                if action == "again":
                    channel.send({"type": "error",
                                  "message": "bad spypoint: %r" % pred})
                    continue
                return action
            if cmd == "view":
                mode = request.get("view")
                if mode in ("source", "target"):
                    sess.view = mode
                    return None
                channel.send({"type": "error", "message": "bad view: %r" % mode})
                continue
            channel.send({"type": "error", "message": "unknown command: %r" % cmd})

    solver = Solver(db, monitor, first_invocation=2)
    try:
        for s in solver.solve(renamed, depth=2):
            bindings = {name: write_term(Var(vid), sess.ops, s)
                        for vid, name in display_names.items()}
            channel.send({"type": "solution", "bindings": bindings})
    except QueryAborted:
        pass
    except ProtocolError as exc:
        channel.send({"type": "error", "message": str(exc)})
        return
    channel.send({"type": "done"})


class DebugServer:
    """TCP front end; one session per accepted connection."""

    def __init__(self, program: Program, goal_text: str, file_label: str,
                 host: str = "127.0.0.1", port: int = DEFAULT_PORT):
        self.program = program
        self.goal_text = goal_text
        self.file_label = file_label
        self._sock = socket.create_server((host, port))
        self.port = self._sock.getsockname()[1]

    def serve_one(self) -> None:
        conn, _addr = self._sock.accept()
        try:
            with conn:
                rfile = conn.makefile("r", encoding="utf-8")
                wfile = conn.makefile("w", encoding="utf-8")
                serve_session(LineChannel(rfile, wfile), self.program,
                              self.goal_text, self.file_label)
        except (BrokenPipeError, ConnectionResetError):
            pass

    def serve_forever(self) -> None:
        while True:
            self.serve_one()

    def close(self) -> None:
        self._sock.close()


def serve_stdio(program: Program, goal_text: str, file_label: str,
                rfile=None, wfile=None) -> None:
    import sys
    channel = LineChannel(rfile or sys.stdin, wfile or sys.stdout)
    serve_session(channel, program, goal_text, file_label)
