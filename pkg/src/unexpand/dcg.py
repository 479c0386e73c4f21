"""Definite Clause Grammar package.

'-->' rules compile to plain clauses threading a difference list: a
nonterminal of arity n becomes a predicate of arity n+2, terminal lists
become one unification against the input list, and '{Goal}' runs Goal
without consuming input.  Each rule is wrapped in '$clause_info' with
the original rule as symbolic info; terminal unifications carry their
token list in a '$goal_info' wrapper.
"""

from __future__ import annotations

from typing import Callable

from .errors import InstantiationError, TranslationError
from .expansion import CLAUSE_INFO, GOAL_INFO, AnnotatedClause, Package
from .reader import Sentence
from .terms import Atom, Compound, Term, Var, fresh_var, list_parts, mk_list

DCG_OPERATORS = [(1200, "xfx", "-->")]


def _is(t: Term, functor: str, arity: int) -> bool:
    return isinstance(t, Compound) and t.functor == functor and len(t.args) == arity


def _add_args(t: Term, *extra: Term) -> Term:
    if isinstance(t, Atom):
        return Compound(t.name, extra)
    assert isinstance(t, Compound)
    return Compound(t.functor, t.args + extra)


def _conj(goals: list[Term]) -> Term:
    if not goals:
        return Atom("true")
    out = goals[-1]
    for g in reversed(goals[:-1]):
        out = Compound(",", (g, out))
    return out


class _RuleError(Exception):
    def __init__(self, message: str):
        self.message = message


def _tr_body(body: Term, s0: Term) -> tuple[list[Term], Term]:
    """Goals threading the token list from s0; returns (goals, rest-var)."""
    if isinstance(body, Atom) and body.name == "[]":
        return [], s0
    if isinstance(body, Atom) and body.name == "!":
        return [Atom("!")], s0
    if _is(body, ",", 2):
        goals_a, s1 = _tr_body(body.args[0], s0)
        goals_b, s2 = _tr_body(body.args[1], s1)
        return goals_a + goals_b, s2
    if _is(body, "{}", 1):
        return [body.args[0]], s0
    if _is(body, ".", 2):
        items, tail = list_parts(body)
        if not (isinstance(tail, Atom) and tail.name == "[]"):
            raise _RuleError("terminal list must be proper")
        s1 = fresh_var()
        goal = Compound("=", (s0, mk_list(items, s1)))
        return [Compound(GOAL_INFO, (goal, body))], s1
    if isinstance(body, (Atom, Compound)):
        s1 = fresh_var()
        return [_add_args(body, s0, s1)], s1
    raise _RuleError("unsupported grammar body construct")


def dcg_rule(sentence: Sentence) -> AnnotatedClause:
    term = sentence.term
    head, body = term.args
    span = sentence.span

    def err(message: str):
        raise TranslationError(message, span.module, span.start_line, span.start_col)

    if _is(head, ",", 2):
        err("pushback grammar rules are not supported")
    if not isinstance(head, (Atom, Compound)):
        err("'-->' head must be an atom or compound")
    s0 = fresh_var()
    try:
        goals, s_end = _tr_body(body, s0)
    except _RuleError as exc:
        err(exc.message)
    new_head = _add_args(head, s0, s_end)
    clause = new_head if not goals else Compound(":-", (new_head, _conj(goals)))
    payload = Compound(CLAUSE_INFO, (mk_list([clause]), term))
    return AnnotatedClause(payload, span)


def _translate(sentence: Sentence, _ctx) -> list[AnnotatedClause] | None:
    if _is(sentence.term, "-->", 2):
        return [dcg_rule(sentence)]
    return None


def make_phrase_builtin(solve_goal: Callable | None = None):
    """phrase(NT, List, Rest): call NT with the difference list appended."""

    def phrase(args: tuple[Term, ...], s, ctx):
        nt = s.resolve(args[0])
        if isinstance(nt, Var):
            raise InstantiationError("phrase/3: unbound nonterminal")
        if not isinstance(nt, (Atom, Compound)):
            raise InstantiationError("phrase/3: nonterminal must be callable")
        return _add_args(nt, args[1], args[2])

    return phrase


def dcg_package() -> Package:
    return Package(
        name="dcg",
        operators=list(DCG_OPERATORS),
        translate=_translate,
        builtins={("phrase", 3): make_phrase_builtin()},
    )
