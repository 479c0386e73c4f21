"""Command-line entry point: expand, run, debug, and serve.

Exit codes: 0 success, 1 program error (missing file, syntax error,
runtime error), 2 usage error.  Output carries no styling, so the
UNEXPAND_NO_COLOR environment variable is honored trivially.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .debugger import DebugSession, ScriptIO, TerminalIO, interactive_loop
from .errors import UnexpandError
from .expansion import Program, load_program, strip_annotations
from .registry import default_registry
from .server import DEFAULT_PORT, DebugServer, serve_stdio
from .solver import consult, run_query
from .terms import Atom, Compound, set_var_counter
from .writer import write_term


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unexpand",
        description="Run and debug logic programs written with "
                    "reversible syntax extensions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_expand = sub.add_parser("expand", help="print the translated program")
    p_expand.add_argument("file")
    p_expand.add_argument("--strip", action="store_true",
                          help="erase annotations instead of printing them")

    p_run = sub.add_parser("run", help="solve a query")
    p_run.add_argument("file")
    p_run.add_argument("-g", "--goal", required=True)

    p_debug = sub.add_parser("debug", help="step through a query")
    p_debug.add_argument("file")
    p_debug.add_argument("-g", "--goal", required=True)
    p_debug.add_argument("--view", choices=("source", "target"),
                         default="source")
    p_debug.add_argument("--script", help="file with one command per line")

    p_serve = sub.add_parser("serve", help="expose a debug session over "
                                           "the JSON line protocol")
    p_serve.add_argument("file")
    p_serve.add_argument("-g", "--goal", required=True)
    p_serve.add_argument("--port", type=int, default=DEFAULT_PORT,
                         help="TCP port (0 = talk on stdin/stdout)")
    return parser


def _load(path: str) -> Program:
    # pin the fresh-variable counter so repeated invocations print
    # identical traces
    set_var_counter(1)
    return load_program(path, default_registry())


def _clause_text(clause, ops) -> str:
    term = clause.head if clause.body == Atom("true") \
        else Compound(":-", (clause.head, clause.body))
    return write_term(term, ops) + "."


def cmd_expand(args, out) -> int:
    program = _load(args.file)
    if args.strip:
        for clause in strip_annotations(program.annotated, program.module):
            out(_clause_text(clause, program.ops))
        return 0
    for ac in program.annotated:
        out(write_term(ac.payload, program.ops) + ".")
    out("% --- symbol table ---")
    dump = program.symtab.dump(program.ops)
    for line in dump.splitlines():
        out("% " + line)
    return 0


def cmd_run(args, out) -> int:
    program = _load(args.file)
    set_var_counter(program.var_base)
    db = consult(program.clauses, program.builtins)
    for line in run_query(args.goal, db, program.ops):
        out(line)
    return 0


def cmd_debug(args, out) -> int:
    program = _load(args.file)
    set_var_counter(program.var_base)
    db = consult(program.clauses, program.builtins)
    sess = DebugSession(db, program.symtab, program.ops, program.module,
                        view=args.view)
    if args.script:
        commands = Path(args.script).read_text(encoding="utf-8").splitlines()
        io = ScriptIO(commands, out)
    else:
        io = TerminalIO()
    interactive_loop(sess, args.goal, io, out)
    return 0


def cmd_serve(args, out) -> int:
    program = _load(args.file)
    if args.port == 0:
        serve_stdio(program, args.goal, args.file)
        return 0
    server = DebugServer(program, args.goal, args.file, port=args.port)
    out("listening on port %d" % server.port)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.close()
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    def out(line: str) -> None:
        print(line)

    handlers = {"expand": cmd_expand, "run": cmd_run,
                "debug": cmd_debug, "serve": cmd_serve}
    try:
        return handlers[args.command](args, out)
    except UnexpandError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
