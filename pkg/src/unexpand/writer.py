"""Terms -> text using an operator table.

Output re-tokenizes to the same term: operator atoms used as operands
are parenthesized, and a space is inserted wherever two adjacent tokens
would otherwise fuse.  Binary operators at priority 500 and above (and
all word operators) are written with surrounding spaces; tighter ones
(*, //) are written without, which matches the trace layout the
debugger is expected to produce.
"""

from __future__ import annotations

from .reader import GRAPHIC_CHARS, OperatorTable, default_ops
from .terms import EMPTY_SUBST, Atom, Compound, Int, Subst, Term, Var, list_parts


def _word(name: str) -> bool:
    return bool(name) and (name[0].isalpha() or name[0] == "_")


def _needs_space(prev: str, nxt: str) -> bool:
    if not prev or not nxt:
        return False
    a, b = prev[-1], nxt[0]
    if a in GRAPHIC_CHARS and b in GRAPHIC_CHARS:
        return True
    a_word = a.isalnum() or a == "_"
    b_word = b.isalnum() or b == "_"
    return a_word and b_word


def _join(tokens: list[str]) -> str:
    out: list[str] = []
    for tok in tokens:
        if out and _needs_space(out[-1], tok):
            out.append(" ")
        out.append(tok)
    return "".join(out)


class _Writer:
    def __init__(self, ops: OperatorTable):
        self.ops = ops

    def tokens(self, t: Term, maxp: int) -> list[str]:
        if isinstance(t, Var):
            return [t.name if t.name else "_G%d" % t.id]
        if isinstance(t, Int):
            return [str(t.value)]
        if isinstance(t, Atom):
            # an atom that is an operator reads back as one; bracket it
            # anywhere it stands for an operand
            if maxp < 1200 and self.ops.is_operator(t.name):
                return ["(", t.name, ")"]
            return [t.name]
        return self.compound(t, maxp)

    def compound(self, t: Compound, maxp: int) -> list[str]:
        name, arity = t.functor, len(t.args)
        if name == "." and arity == 2:
            return self.list_tokens(t)
        if name == "{}" and arity == 1:
            return ["{"] + self.tokens(t.args[0], 1200) + ["}"]
        if arity == 2:
            entry = self.ops.lookup(name, "infix")
            if entry is not None:
                p, optype = entry
                lmax = p if optype == "yfx" else p - 1
                rmax = p if optype == "xfy" else p - 1
                toks = self.tokens(t.args[0], lmax)
                if name == ",":
                    toks += [", "]
                elif _word(name) or p >= 500:
                    toks += [" ", name, " "]
                else:
                    toks += [name]
                toks += self.tokens(t.args[1], rmax)
                if p > maxp:
                    return ["("] + toks + [")"]
                return toks
        if arity == 1:
            entry = self.ops.lookup(name, "prefix")
            if entry is not None:
                p, optype = entry
                argmax = p if optype == "fy" else p - 1
                arg = t.args[0]
                toks = [name]
                if _word(name):
                    toks.append(" ")
                elif name == "-" and isinstance(arg, Int) and arg.value >= 0:
                    # keep "- 1" distinct from the negative literal "-1"
                    toks.append(" ")
                toks += self.tokens(arg, argmax)
                if p > maxp:
                    return ["("] + toks + [")"]
                return toks
            entry = self.ops.lookup(name, "postfix")
            if entry is not None:
                p, optype = entry
                argmax = p if optype == "yf" else p - 1
                toks = self.tokens(t.args[0], argmax) + [name]
                if p > maxp:
                    return ["("] + toks + [")"]
                return toks
        return self.canonical(t)

    def canonical(self, t: Compound) -> list[str]:
        toks = [t.functor, "("]
        for i, a in enumerate(t.args):
            if i:
                toks.append(",")
            toks += self.tokens(a, 999)
        toks.append(")")
        return toks

    def list_tokens(self, t: Term) -> list[str]:
        items, tail = list_parts(t)
        toks = ["["]
        for i, item in enumerate(items):
            if i:
                toks.append(",")
            toks += self.tokens(item, 999)
        if not (isinstance(tail, Atom) and tail.name == "[]"):
            toks.append("|")
            toks += self.tokens(tail, 999)
        toks.append("]")
        return toks


def write_term(t: Term, ops: OperatorTable | None = None,
               s: Subst | None = None, maxp: int = 1200) -> str:
    """Operator-formatted text of t with bindings from s applied."""
    ops = ops or default_ops()
    s = s or EMPTY_SUBST
    return _join(_Writer(ops).tokens(s.resolve(t), maxp))


def write_goal(t: Term, ops: OperatorTable | None = None,
               s: Subst | None = None) -> str:
    """Goal text with the outermost functor in canonical form.

    Matches the raw debugger display: the goal's own functor is never
    shown as an operator ("=(_G1,6)"), while argument terms keep
    operator syntax ("is(_G2,3-2)" stays "3-2" inside).
    """
    ops = ops or default_ops()
    s = s or EMPTY_SUBST
    t = s.resolve(t)
    w = _Writer(ops)
    if isinstance(t, Compound):
        return _join(w.canonical(t))
    return _join(w.tokens(t, 1200))
