"""Functional notation package.

':=' sentences define relations written as functions with an implicit
result argument; 'Cond ? Then | Else' chains give guarded alternatives.
Each sentence translates to a '$clause_info' group of plain clauses, and
the generated condition/branch goals are wrapped in '$goal_info' so the
debugger can show the original declaration with live bindings.

Nested calls flatten leftmost-innermost: m inside l inside k becomes the
goal chain m(X,T1), l(T1,T2), k(T2,T3).  Arithmetic functors compile to
is/2 instead of relation calls.
"""

from __future__ import annotations

from .errors import TranslationError
from .expansion import CLAUSE_INFO, GOAL_INFO, AnnotatedClause, Package
from .reader import Sentence
from .terms import (ARITH_FUNCTORS, Atom, Compound, Int, Term, Var,
                    fresh_var, indicator, mk_list)

FSYNTAX_OPERATORS = [(1150, "xfx", ":="), (1100, "xfy", "|"), (1050, "xfx", "?")]

FunctionSet = frozenset


def _is(t: Term, functor: str, arity: int) -> bool:
    return isinstance(t, Compound) and t.functor == functor and len(t.args) == arity


def collect_functions(sentences: list[Sentence]) -> FunctionSet:
    """Source-arity indicators of every ':=' definition in the module."""
    funcs = set()
    for sent in sentences:
        if _is(sent.term, ":=", 2):
            head = sent.term.args[0]
            if isinstance(head, (Atom, Compound)):
                funcs.add(indicator(head))
    return frozenset(funcs)


def _conj(goals: list[Term]) -> Term:
    if not goals:
        return Atom("true")
    out = goals[-1]
    for g in reversed(goals[:-1]):
        out = Compound(",", (g, out))
    return out


def _add_result(head: Term, res: Term) -> Term:
    if isinstance(head, Atom):
        return Compound(head.name, (res,))
    assert isinstance(head, Compound)
    return Compound(head.functor, head.args + (res,))


def _is_data(t: Term) -> bool:
    return isinstance(t, (Var, Atom, Int))


def flatten_expr(e: Term, funcs: FunctionSet, out: Var | None = None
                 ) -> tuple[list[Term], Term]:
    """Leftmost-innermost flattening of a value expression.

    Every non-arithmetic compound is treated as a function call with a
    fresh result argument; arithmetic builds an is/2 goal.  When `out`
    is given, the top-level generated goal delivers into it directly.
    List cells stay data (their elements are flattened in place).
    """
    if _is_data(e):
        return [], e
    assert isinstance(e, Compound)
    key = (e.functor, len(e.args))
    if key == (".", 2):
        goals_h, h = flatten_expr(e.args[0], funcs)
        goals_t, t = flatten_expr(e.args[1], funcs)
        return goals_h + goals_t, Compound(".", (h, t))
    goals: list[Term] = []
    args: list[Term] = []
    for a in e.args:
        g, a2 = flatten_expr(a, funcs)
        goals.extend(g)
        args.append(a2)
    res = out if out is not None else fresh_var()
    if key in ARITH_FUNCTORS:
        goals.append(Compound("is", (res, Compound(e.functor, tuple(args)))))
    else:
        goals.append(Compound(e.functor, tuple(args) + (res,)))
    return goals, res


def _flatten_goal_arg(a: Term, funcs: FunctionSet) -> tuple[list[Term], Term]:
    """Flatten function calls inside one argument of an ordinary goal."""
    if _is_data(a):
        return [], a
    assert isinstance(a, Compound)
    goals: list[Term] = []
    args: list[Term] = []
    for sub in a.args:
        g, sub2 = _flatten_goal_arg(sub, funcs)
        goals.extend(g)
        args.append(sub2)
    if indicator(a) in funcs:
        res = fresh_var()
        goals.append(Compound(a.functor, tuple(args) + (res,)))
        return goals, res
    return goals, Compound(a.functor, tuple(args))


def expand_goal(g: Term, funcs: FunctionSet) -> Term:
    """Prefix the function calls nested in g's arguments as goals."""
    if not isinstance(g, Compound) or g.functor in (",", GOAL_INFO):
        return g
    goals: list[Term] = []
    args: list[Term] = []
    for a in g.args:
        pre, a2 = _flatten_goal_arg(a, funcs)
        goals.extend(pre)
        args.append(a2)
    return _conj(goals + [Compound(g.functor, tuple(args))])


def _expand_conj(body: Term, funcs: FunctionSet) -> Term:
    if _is(body, ",", 2):
        return Compound(",", (_expand_conj(body.args[0], funcs),
                              _expand_conj(body.args[1], funcs)))
    return expand_goal(body, funcs)


def defunc_rec(head: Term, rhs: Term, si: Term,
               funcs: FunctionSet) -> list[Term]:
    """Clause terms for one option chain of a ':=' definition."""
    if _is(rhs, "|", 2):
        return (defunc_rec(head, rhs.args[0], si, funcs)
                + defunc_rec(head, rhs.args[1], si, funcs))
    if _is(rhs, "?", 2):
        cond, val = rhs.args
        res = fresh_var()
        cond_goal = _expand_conj(cond, funcs)
        val_goals, val_res = flatten_expr(val, funcs)
        branch = _conj([Atom("!")] + val_goals
                       + [Compound("=", (res, val_res))])
        body = Compound(",", (Compound(GOAL_INFO, (cond_goal, si)),
                              Compound(GOAL_INFO, (branch, si))))
        return [Compound(":-", (_add_result(head, res), body))]
    res = fresh_var()
    val_goals, val_res = flatten_expr(rhs, funcs, out=res)
    if not val_goals:
        return [_add_result(head, val_res)]
    body = Compound(GOAL_INFO, (_conj(val_goals), si))
    return [Compound(":-", (_add_result(head, val_res), body))]


def defunc(sentence: Sentence, funcs: FunctionSet) -> AnnotatedClause:
    term = sentence.term
    head, rhs = term.args
    if not isinstance(head, (Atom, Compound)):
        raise TranslationError("':=' head must be an atom or compound",
                               sentence.span.module,
                               sentence.span.start_line, sentence.span.start_col)
    clauses = defunc_rec(head, rhs, term, funcs)
    payload = Compound(CLAUSE_INFO, (mk_list(clauses), term))
    return AnnotatedClause(payload, sentence.span)


def _translate(sentence: Sentence, funcs: FunctionSet
               ) -> list[AnnotatedClause] | None:
    term = sentence.term
    if _is(term, ":=", 2):
        return [defunc(sentence, funcs)]
    if _is(term, "-->", 2):
        return None
    if _is(term, ":-", 2):
        head, body = term.args
        expanded = _expand_conj(body, funcs)
        if expanded == body:
            return None
        return [AnnotatedClause(Compound(":-", (head, expanded)), sentence.span)]
    return None


def fsyntax_package() -> Package:
    return Package(
        name="fsyntax",
        operators=list(FSYNTAX_OPERATORS),
        translate=_translate,
        prepare=collect_functions,
    )
