"""First-order terms, substitutions, unification, arithmetic.

A term is a Var, an Atom, an Int, or a Compound with at least one
argument; zero-arity symbols are always Atoms.  Vars are identified by a
globally unique integer id; the display name is carried for printing
only and never takes part in comparisons.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import EvalTypeError, EvaluationError, InstantiationError


@dataclass(frozen=True)
class Var:
    id: int
    name: str | None = field(default=None, compare=False)

    def __repr__(self) -> str:
        return "Var(%d%s)" % (self.id, ", %r" % self.name if self.name else "")


@dataclass(frozen=True)
class Atom:
    name: str

    def __repr__(self) -> str:
        return "Atom(%r)" % self.name


@dataclass(frozen=True)
class Int:
    value: int

    def __repr__(self) -> str:
        return "Int(%d)" % self.value


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple["Term", ...]

    def __post_init__(self) -> None:
        if not self.args:
            raise ValueError("Compound needs arity >= 1; use Atom for %r" % self.functor)

    def __repr__(self) -> str:
        return "Compound(%r, %r)" % (self.functor, list(self.args))


Term = Union[Var, Atom, Int, Compound]

TRUE = Atom("true")
FAIL = Atom("fail")
CUT = Atom("!")
NIL = Atom("[]")

_var_ids = itertools.count(1)


def fresh_var(name: str | None = None) -> Var:
    return Var(next(_var_ids), name)


def var_counter() -> int:
    """Next id that fresh_var would hand out (for save/restore)."""
    peek = next(_var_ids)
    set_var_counter(peek)
    return peek


def set_var_counter(n: int) -> None:
    global _var_ids
    _var_ids = itertools.count(n)


def mk(functor: str, *args: Term) -> Term:
    """Atom for arity 0, Compound otherwise."""
    return Compound(functor, tuple(args)) if args else Atom(functor)


def indicator(t: Term) -> tuple[str, int]:
    """(name, arity) of a callable term."""
    if isinstance(t, Atom):
        return (t.name, 0)
    if isinstance(t, Compound):
        return (t.functor, len(t.args))
    raise TypeError("not callable: %r" % (t,))


def mk_list(items: list[Term], tail: Term = NIL) -> Term:
    out = tail
    for item in reversed(items):
        out = Compound(".", (item, out))
    return out


def list_parts(t: Term) -> tuple[list[Term], Term]:
    """Split a './2' chain into (elements, tail)."""
    items: list[Term] = []
    while isinstance(t, Compound) and t.functor == "." and len(t.args) == 2:
        items.append(t.args[0])
        t = t.args[1]
    return items, t


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Compound):
        for a in t.args:
            yield from subterms(a)


def term_vars(t: Term) -> list[Var]:
    """Distinct variables of t in first-occurrence order."""
    seen: dict[int, Var] = {}
    for sub in subterms(t):
        if isinstance(sub, Var) and sub.id not in seen:
            seen[sub.id] = sub
    return list(seen.values())


class Subst:
    """Immutable binding map from Var id to Term.

    Extension copies the underlying dict, which keeps backtracking
    trivially correct (older substitutions are never mutated).
    """

    __slots__ = ("_b",)

    def __init__(self, bindings: dict[int, Term] | None = None):
        self._b = bindings or {}

    def __len__(self) -> int:
        return len(self._b)

    def lookup(self, vid: int) -> Term | None:
        return self._b.get(vid)

    def walk(self, t: Term) -> Term:
        """Follow bindings until an unbound Var or a non-Var term."""
        while isinstance(t, Var):
            nxt = self._b.get(t.id)
            if nxt is None:
                return t
            t = nxt
        return t

    def bind(self, vid: int, t: Term) -> "Subst":
        new = dict(self._b)
        new[vid] = t
        return Subst(new)

    def resolve(self, t: Term) -> Term:
        """Replace every bound Var in t by its full dereference."""
        t = self.walk(t)
        if isinstance(t, Compound):
            return Compound(t.functor, tuple(self.resolve(a) for a in t.args))
        return t

    def items(self):
        return self._b.items()

    def __repr__(self) -> str:
        return "Subst(%r)" % self._b


EMPTY_SUBST = Subst()


def apply_subst(s: Subst, t: Term) -> Term:
    return s.resolve(t)


def occurs_in(s: Subst, vid: int, t: Term) -> bool:
    t = s.walk(t)
    if isinstance(t, Var):
        return t.id == vid
    if isinstance(t, Compound):
        return any(occurs_in(s, vid, a) for a in t.args)
    return False


def unify(t1: Term, t2: Term, s: Subst | None = None,
          occurs_check: bool = False) -> Subst | None:
    """Most general unifier extending s, or None if none exists."""
    if s is None:
        s = EMPTY_SUBST
    work = dict(s._b)

    def walk(t: Term) -> Term:
        while isinstance(t, Var):
            nxt = work.get(t.id)
            if nxt is None:
                return t
            t = nxt
        return t

    def occurs(vid: int, t: Term) -> bool:
        t = walk(t)
        if isinstance(t, Var):
            return t.id == vid
        if isinstance(t, Compound):
            return any(occurs(vid, a) for a in t.args)
        return False

    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        a, b = walk(a), walk(b)
        if isinstance(a, Var) and isinstance(b, Var) and a.id == b.id:
            continue
        if isinstance(a, Var):
            if occurs_check and occurs(a.id, b):
                return None
            work[a.id] = b
        elif isinstance(b, Var):
            if occurs_check and occurs(b.id, a):
                return None
            work[b.id] = a
        elif isinstance(a, Atom) and isinstance(b, Atom):
            if a.name != b.name:
                return None
        elif isinstance(a, Int) and isinstance(b, Int):
            if a.value != b.value:
                return None
        elif isinstance(a, Compound) and isinstance(b, Compound):
            if a.functor != b.functor or len(a.args) != len(b.args):
                return None
            stack.extend(zip(a.args, b.args))
        else:
            return None
    return Subst(work)


def instantiate(t: Term, mapping: dict[int, Term]) -> Term:
    """Replace mapped Vars by their image; unmapped Vars stay."""
    if isinstance(t, Var):
        return mapping.get(t.id, t)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(instantiate(a, mapping) for a in t.args))
    return t


def rename_with_map(t: Term, keep_names: bool = True) -> tuple[Term, dict[int, Var]]:
    """Fresh-variable copy of t plus the old-id -> fresh-Var map."""
    mapping: dict[int, Var] = {}
    for v in term_vars(t):
        mapping[v.id] = fresh_var(v.name if keep_names else None)
    return instantiate(t, dict(mapping)), mapping


def rename_apart(t: Term, keep_names: bool = True) -> Term:
    return rename_with_map(t, keep_names)[0]


def variant(t1: Term, t2: Term) -> bool:
    """Structural equality modulo a variable-renaming bijection."""
    fwd: dict[int, int] = {}
    bwd: dict[int, int] = {}

    def go(a: Term, b: Term) -> bool:
        if isinstance(a, Var) and isinstance(b, Var):
            if fwd.setdefault(a.id, b.id) != b.id:
                return False
            if bwd.setdefault(b.id, a.id) != a.id:
                return False
            return True
        if isinstance(a, Atom) and isinstance(b, Atom):
            return a.name == b.name
        if isinstance(a, Int) and isinstance(b, Int):
            return a.value == b.value
        if isinstance(a, Compound) and isinstance(b, Compound):
            return (a.functor == b.functor and len(a.args) == len(b.args)
                    and all(go(x, y) for x, y in zip(a.args, b.args)))
        return False

    return go(t1, t2)


# Arithmetic -----------------------------------------------------------------

ARITH_FUNCTORS = {("+", 2), ("-", 2), ("*", 2), ("//", 2), ("mod", 2), ("-", 1)}


def _int_quot(a: int, b: int) -> int:
    # '//' truncates toward zero; Python's floor division does not.
    q = abs(a) // abs(b)
    return -q if (a < 0) != (b < 0) else q


def eval_arith(t: Term, s: Subst | None = None) -> int:
    """Value of a ground integer expression over +, -, *, //, mod."""
    if s is None:
        s = EMPTY_SUBST
    t = s.walk(t)
    if isinstance(t, Int):
        return t.value
    if isinstance(t, Var):
        raise InstantiationError("arithmetic: unbound variable in expression")
    if isinstance(t, Compound):
        key = (t.functor, len(t.args))
        if key not in ARITH_FUNCTORS:
            raise EvalTypeError("arithmetic: unknown functor %s/%d" % key)
        vals = [eval_arith(a, s) for a in t.args]
        op = t.functor
        if key == ("-", 1):
            return -vals[0]
        a, b = vals
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "//":
            if b == 0:
                raise EvaluationError("arithmetic: division by zero")
            return _int_quot(a, b)
        if op == "mod":
            if b == 0:
                raise EvaluationError("arithmetic: division by zero")
            return a % b
    raise EvalTypeError("arithmetic: not a number: %r" % (t,))
