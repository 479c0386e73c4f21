#!/usr/bin/env python3
"""Record the frontend's offline fixture from a live debug session.

Writes frontend/fixtures/session.json (the protocol event stream of a
step-to-completion run over programs/ex0.pl) and golden_trace.txt (the
terminal debugger's source-view step lines for the same query), which
the frontend replay test compares against.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from unexpand.debugger import DebugSession, ScriptIO, interactive_loop  # noqa: E402
from unexpand.expansion import load_program  # noqa: E402
from unexpand.registry import default_registry  # noqa: E402
from unexpand.server import serve_session  # noqa: E402
from unexpand.solver import consult  # noqa: E402
from unexpand.terms import set_var_counter  # noqa: E402

GOAL = "f(3,R)"


class RecordingChannel:
    def __init__(self):
        self.sent = []

    def send(self, payload):
        self.sent.append(payload)

    def recv(self):
        return {"cmd": "step"}


def main() -> None:
    set_var_counter(1)
    program = load_program(ROOT / "programs" / "ex0.pl", default_registry())
    fixtures = ROOT / "frontend" / "fixtures"
    fixtures.mkdir(parents=True, exist_ok=True)

    channel = RecordingChannel()
    serve_session(channel, program, GOAL, "programs/ex0.pl")
    (fixtures / "session.json").write_text(
        json.dumps(channel.sent, indent=2) + "\n", encoding="utf-8")

    set_var_counter(program.var_base)
    db = consult(program.clauses, program.builtins)
    sess = DebugSession(db, program.symtab, program.ops, program.module)
    lines: list[str] = []
    solutions: list[str] = []
    interactive_loop(sess, GOAL, ScriptIO([], lines.append), solutions.append)
    (fixtures / "golden_trace.txt").write_text(
        "\n".join(lines) + "\n", encoding="utf-8")
    (fixtures / "golden_solutions.txt").write_text(
        "\n".join(solutions) + "\n", encoding="utf-8")
    print("recorded %d events, %d trace lines, %d solutions"
          % (len(channel.sent), len(lines), len(solutions)))


if __name__ == "__main__":
    main()
