"""Program text -> terms: tokenizer and operator-precedence parser.

The reader works against a dynamic operator table, records a source
span for every sentence and subterm, and keeps the original variable
names of each sentence.  Tokenization is independent of the operator
table, so a table extended by a package directive can take effect for
the sentences that follow it in the same file.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ReadError
from .terms import Atom, Compound, Int, Term, Var, fresh_var

GRAPHIC_CHARS = set("#$&*+-./:<=>?@^~\\")
SOLO_CHARS = set("!;")
PUNCT_CHARS = set("()[]{},|")

PREFIX_TYPES = ("fy", "fx")
INFIX_TYPES = ("xfx", "xfy", "yfx")
POSTFIX_TYPES = ("xf", "yf")


def _kind_of(optype: str) -> str:
    if optype in PREFIX_TYPES:
        return "prefix"
    if optype in INFIX_TYPES:
        return "infix"
    if optype in POSTFIX_TYPES:
        return "postfix"
    raise ValueError("bad operator type %r" % optype)


class OperatorTable:
    """Map (name, fixity-kind) -> (priority, type); one entry per kind."""

    def __init__(self) -> None:
        self._entries: dict[tuple[str, str], tuple[int, str]] = {}

    def add(self, priority: int, optype: str, name: str) -> None:
        if not 1 <= priority <= 1200:
            raise ValueError("operator priority out of range: %d" % priority)
        self._entries[(name, _kind_of(optype))] = (priority, optype)

    def lookup(self, name: str, kind: str) -> tuple[int, str] | None:
        return self._entries.get((name, kind))

    def is_operator(self, name: str) -> bool:
        return any(name == n for (n, _k) in self._entries)

    def operand_priority(self, name: str) -> int:
        """Priority of a bare atom used as an operand (0 if not an op)."""
        prios = [p for (n, _k), (p, _t) in self._entries.items() if n == name]
        return max(prios, default=0)

    def copy(self) -> "OperatorTable":
        t = OperatorTable()
        t._entries = dict(self._entries)
        return t

    def entries(self):
        return sorted((name, kind, p, ty)
                      for (name, kind), (p, ty) in self._entries.items())


def default_ops() -> OperatorTable:
    t = OperatorTable()
    for prio, optype, names in [
        (1200, "xfx", [":-"]),
        (1200, "fx", [":-"]),
        (1000, "xfy", [","]),
        (700, "xfx", ["=", "<", ">", "=<", ">=", "is"]),
        (500, "yfx", ["+", "-"]),
        (400, "yfx", ["*", "//", "mod"]),
        (200, "fy", ["-"]),
    ]:
        for name in names:
            t.add(prio, optype, name)
    return t


@dataclass(frozen=True)
class SourceSpan:
    module: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def covers(self, other: "SourceSpan") -> bool:
        return ((self.start_line, self.start_col) <= (other.start_line, other.start_col)
                and (other.end_line, other.end_col) <= (self.end_line, self.end_col))


def _cover(a: SourceSpan, b: SourceSpan) -> SourceSpan:
    start = min((a.start_line, a.start_col), (b.start_line, b.start_col))
    end = max((a.end_line, a.end_col), (b.end_line, b.end_col))
    return SourceSpan(a.module, start[0], start[1], end[0], end[1])


@dataclass
class Sentence:
    term: Term
    span: SourceSpan
    var_names: dict[int, str]
    subterm_spans: dict[tuple[int, ...], SourceSpan] = field(default_factory=dict)


@dataclass(frozen=True)
class _Token:
    kind: str           # atom | var | int | punct | end | eof
    text: str
    line: int
    col: int
    end_line: int
    end_col: int
    tight: bool         # no layout between the previous token and this one

    def span(self, module: str) -> SourceSpan:
        return SourceSpan(module, self.line, self.col, self.end_line, self.end_col)


def _tokenize(text: str, module: str) -> list[_Token]:
    toks: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    tight = False

    def error(msg: str):
        raise ReadError(msg, module, line, col)

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1
            tight = False
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            tight = False
            continue
        start_line, start_col = line, col

        def emit(kind: str, tok_text: str):
            toks.append(_Token(kind, tok_text, start_line, start_col,
                               line, col - 1, tight))

        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            word = text[i:j]
            col += j - i
            i = j
            emit("int", word)
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            col += j - i
            i = j
            emit("var" if (ch == "_" or ch.isupper()) else "atom", word)
        elif ch in SOLO_CHARS:
            col += 1
            i += 1
            emit("atom", ch)
        elif ch in PUNCT_CHARS:
            col += 1
            i += 1
            emit("punct", ch)
        elif ch == "$" and i + 1 < n and (text[i + 1].isalpha() or text[i + 1] == "_"):
            # system atoms like $clause_info read as one token
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            col += j - i
            i = j
            emit("atom", word)
        elif ch in GRAPHIC_CHARS:
            j = i
            while j < n and text[j] in GRAPHIC_CHARS:
                j += 1
            word = text[i:j]
            nxt = text[j] if j < n else ""
            if word == "." and (nxt == "" or nxt in " \t\r\n%"):
                col += 1
                i += 1
                emit("end", ".")
            else:
                col += j - i
                i = j
                emit("atom", word)
        else:
            error("unexpected character %r" % ch)
        tight = True
    toks.append(_Token("eof", "", line, col, line, col, False))
    return toks


@dataclass
class _Node:
    """Parsed term plus span tree aligned with Compound argument order."""
    term: Term
    span: SourceSpan
    children: tuple["_Node", ...] = ()


class _Parser:
    def __init__(self, tokens: list[_Token], pos: int, ops: OperatorTable,
                 module: str):
        self.toks = tokens
        self.pos = pos
        self.ops = ops
        self.module = module
        self.scope: dict[str, Var] = {}

    def peek(self, ahead: int = 0) -> _Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> _Token:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, msg: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise ReadError(msg, self.module, tok.line, tok.col)

    def expect_punct(self, text: str) -> _Token:
        tok = self.next()
        if tok.kind != "punct" or tok.text != text:
            self.error("expected %r, found %r" % (text, tok.text or "end of input"), tok)
        return tok

    # -- grammar ------------------------------------------------------------

    def sentence(self) -> _Node:
        node, _prio = self.term(1200)
        tok = self.next()
        if tok.kind != "end":
            self.error("operator expected before %r (or missing '.')"
                       % (tok.text or "end of input"), tok)
        return _Node(node.term, _cover(node.span, tok.span(self.module)),
                     node.children)

    def term(self, maxp: int) -> tuple[_Node, int]:
        left, leftprio = self.primary(maxp)
        return self.infix_loop(left, leftprio, maxp)

    def infix_loop(self, left: _Node, leftprio: int, maxp: int) -> tuple[_Node, int]:
        while True:
            tok = self.peek()
            name = tok.text
            if tok.kind == "punct" and name in (",", "|"):
                entry = self.ops.lookup(name, "infix")
            elif tok.kind == "atom":
                entry = self.ops.lookup(name, "infix")
                if entry is None:
                    post = self.ops.lookup(name, "postfix")
                    if post is not None:
                        p, optype = post
                        if p > maxp or leftprio > (p if optype == "yf" else p - 1):
                            return left, leftprio
                        self.next()
                        left = _Node(Compound(name, (left.term,)),
                                     _cover(left.span, tok.span(self.module)),
                                     (left,))
                        leftprio = p
                        continue
            else:
                entry = None
            if entry is None:
                return left, leftprio
            p, optype = entry
            lmax = p if optype == "yfx" else p - 1
            rmax = p if optype == "xfy" else p - 1
            if p > maxp or leftprio > lmax:
                return left, leftprio
            self.next()
            right, _rp = self.term(rmax)
            left = _Node(Compound(name, (left.term, right.term)),
                         _cover(left.span, right.span), (left, right))
            leftprio = p

    def can_start_term(self, tok: _Token) -> bool:
        if tok.kind in ("int", "var"):
            return True
        if tok.kind == "punct":
            return tok.text in "([{"
        if tok.kind == "atom":
            # an atom that is only an infix/postfix operator cannot open a term
            name = tok.text
            if self.peek(1).kind == "punct" and self.peek(1).text == "(" and self.peek(1).tight:
                return True
            if self.ops.lookup(name, "infix") or self.ops.lookup(name, "postfix"):
                return self.ops.lookup(name, "prefix") is not None
            return True
        return False

    def primary(self, maxp: int) -> tuple[_Node, int]:
        tok = self.next()
        module = self.module
        if tok.kind == "int":
            return _Node(Int(int(tok.text)), tok.span(module)), 0
        if tok.kind == "var":
            return _Node(self.mk_var(tok), tok.span(module)), 0
        if tok.kind == "punct":
            if tok.text == "(":
                inner, _p = self.term(1200)
                close = self.expect_punct(")")
                span = _cover(tok.span(module), close.span(module))
                return _Node(inner.term, span, inner.children), 0
            if tok.text == "{":
                if self.peek().kind == "punct" and self.peek().text == "}":
                    close = self.next()
                    return _Node(Atom("{}"),
                                 _cover(tok.span(module), close.span(module))), 0
                inner, _p = self.term(1200)
                close = self.expect_punct("}")
                span = _cover(tok.span(module), close.span(module))
                return _Node(Compound("{}", (inner.term,)), span, (inner,)), 0
            if tok.text == "[":
                return self.list_term(tok), 0
            self.error("unexpected %r" % tok.text, tok)
        if tok.kind == "atom":
            name = tok.text
            nxt = self.peek()
            if nxt.kind == "punct" and nxt.text == "(" and nxt.tight:
                return self.compound(tok), 0
            prefix = self.ops.lookup(name, "prefix")
            if prefix is not None:
                p, optype = prefix
                argmax = p if optype == "fy" else p - 1
                if p <= maxp and self.can_start_term(nxt):
                    if name == "-" and nxt.kind == "int" and nxt.tight:
                        lit = self.next()
                        span = _cover(tok.span(module), lit.span(module))
                        return _Node(Int(-int(lit.text)), span), 0
                    arg, _ap = self.term(argmax)
                    span = _cover(tok.span(module), arg.span)
                    return _Node(Compound(name, (arg.term,)), span, (arg,)), p
            return (_Node(Atom(name), tok.span(module)),
                    self.ops.operand_priority(name))
        self.error("unexpected end of input", tok)
        raise AssertionError  # unreachable

    def mk_var(self, tok: _Token) -> Var:
        if tok.text == "_":
            return fresh_var()
        v = self.scope.get(tok.text)
        if v is None:
            v = fresh_var(tok.text)
            self.scope[tok.text] = v
        return v

    def compound(self, functor_tok: _Token) -> _Node:
        self.expect_punct("(")
        args: list[_Node] = []
        while True:
            arg, _p = self.term(999)
            args.append(arg)
            tok = self.next()
            if tok.kind == "punct" and tok.text == ",":
                continue
            if tok.kind == "punct" and tok.text == ")":
                break
            self.error("expected ',' or ')' in arguments", tok)
        span = _cover(functor_tok.span(self.module), tok.span(self.module))
        term = Compound(functor_tok.text, tuple(a.term for a in args))
        return _Node(term, span, tuple(args))

    def list_term(self, open_tok: _Token) -> _Node:
        module = self.module
        if self.peek().kind == "punct" and self.peek().text == "]":
            close = self.next()
            return _Node(Atom("[]"), _cover(open_tok.span(module), close.span(module)))
        elems: list[_Node] = []
        tail: _Node | None = None
        while True:
            elem, _p = self.term(999)
            elems.append(elem)
            tok = self.next()
            if tok.kind == "punct" and tok.text == ",":
                continue
            if tok.kind == "punct" and tok.text == "|":
                tail, _tp = self.term(999)
                tok = self.next()
            if tok.kind == "punct" and tok.text == "]":
                break
            self.error("expected ',', '|' or ']' in list", tok)
        close_span = tok.span(module)
        full = _cover(open_tok.span(module), close_span)
        if tail is None:
            tail = _Node(Atom("[]"), close_span)
        node = tail
        for elem in reversed(elems):
            node = _Node(Compound(".", (elem.term, node.term)),
                         _cover(elem.span, close_span), (elem, node))
        return _Node(node.term, full, node.children)


class Reader:
    """Stream sentences out of one program text."""

    def __init__(self, text: str, ops: OperatorTable, module: str = "user"):
        self.ops = ops
        self.module = module
        self._toks = _tokenize(text, module)
        self._pos = 0

    def set_ops(self, ops: OperatorTable) -> None:
        self.ops = ops

    def at_end(self) -> bool:
        return self._toks[self._pos].kind == "eof"

    def read(self) -> Sentence | None:
        if self.at_end():
            return None
        parser = _Parser(self._toks, self._pos, self.ops, self.module)
        node = parser.sentence()
        self._pos = parser.pos
        var_names = {v.id: name for name, v in parser.scope.items()}
        spans: dict[tuple[int, ...], SourceSpan] = {}

        def walk(n: _Node, path: tuple[int, ...]) -> None:
            spans[path] = n.span
            for i, child in enumerate(n.children, start=1):
                walk(child, path + (i,))

        walk(node, ())
        spans[()] = node.span  # sentence span includes the terminating period
        return Sentence(node.term, node.span, var_names, spans)


def read_sentence(text: str, ops: OperatorTable | None = None,
                  module: str = "user") -> Sentence | None:
    """First sentence of text, or None on end of input."""
    return Reader(text, ops or default_ops(), module).read()


def read_all(text: str, ops: OperatorTable | None = None,
             module: str = "user") -> list[Sentence]:
    reader = Reader(text, ops or default_ops(), module)
    out = []
    while True:
        sent = reader.read()
        if sent is None:
            return out
        out.append(sent)
