"""Package registry, expansion pipeline, and annotation extraction.

A package contributes operator declarations and a sentence translation
rule.  Expanding a program produces annotated clauses: either bare
clause terms, or '$clause_info'(Clauses, SI) groups whose bodies may
contain '$goal_info'(Goal, SI) wrappers.  Extraction flattens the
groups into plain clauses, replaces every '$goal_info' wrapper with a
'$gmark'(Id, Goal) call, and collects the symbolic information into a
sidecar symbol table keyed by clause and goal ids.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .errors import DuplicatePackageError, ExtractionError, LoadError
from .reader import (OperatorTable, Reader, Sentence, SourceSpan, default_ops)
from .terms import Atom, Compound, Int, Term, Var, list_parts, var_counter
from .writer import write_term

CLAUSE_INFO = "$clause_info"
GOAL_INFO = "$goal_info"
GOAL_MARK = "$gmark"

RESERVED_HEADS = {(",", 2), ("->", 2), ("!", 0), (CLAUSE_INFO, 2), (GOAL_INFO, 2),
                  (GOAL_MARK, 2), (":-", 1), (":-", 2)}


@dataclass(frozen=True)
class ClauseId:
    module: str
    ordinal: int

    def __str__(self) -> str:
        return "%s:%d" % (self.module, self.ordinal)


@dataclass
class Clause:
    head: Term
    body: Term          # Atom('true') for facts
    id: ClauseId


@dataclass
class AnnotatedClause:
    payload: Term       # bare clause term or '$clause_info'(Clauses, SI)
    span: SourceSpan


@dataclass
class SourceInfo:
    si: Term | None     # None: span-only info (SI was left unbound)
    span: SourceSpan
    group: list[ClauseId]


class SymbolTable:
    def __init__(self) -> None:
        self.clause_entries: dict[ClauseId, SourceInfo] = {}
        self.goal_entries: dict[int, SourceInfo] = {}

    def lookup_clause(self, cid: ClauseId) -> SourceInfo | None:
        return self.clause_entries.get(cid)

    def lookup_goal(self, gid: int) -> SourceInfo | None:
        return self.goal_entries.get(gid)

    def dump(self, ops: OperatorTable) -> str:
        """Deterministic "id<TAB>line<TAB>si" listing for golden tests."""
        lines = []
        for cid in sorted(self.clause_entries, key=lambda c: (c.module, c.ordinal)):
            info = self.clause_entries[cid]
            si = write_term(info.si, ops) if info.si is not None else "-"
            lines.append("%s\t%d\t%s" % (cid, info.span.start_line, si))
        for gid in sorted(self.goal_entries):
            info = self.goal_entries[gid]
            si = write_term(info.si, ops) if info.si is not None else "-"
            lines.append("g%d\t%d\t%s" % (gid, info.span.start_line, si))
        return "\n".join(lines)


@dataclass
class Package:
    """A language extension: syntax, translation rule, runtime support."""
    name: str
    operators: list[tuple[int, str, str]] = field(default_factory=list)
    # translate(sentence, ctx) returns the sentence's annotated clauses,
    # or None when the sentence is not handled by this package.
    translate: Callable[[Sentence, object], list[AnnotatedClause] | None] = \
        lambda sentence, ctx: None
    # prepare(sentences) builds the per-program context handed to translate.
    prepare: Callable[[list[Sentence]], object] | None = None
    runtime_predicates: list[Term] = field(default_factory=list)
    builtins: dict[tuple[str, int], Callable] = field(default_factory=dict)


class PackageRegistry:
    def __init__(self) -> None:
        self._pkgs: dict[str, Package] = {}

    def register(self, pkg: Package) -> "PackageRegistry":
        if pkg.name in self._pkgs:
            raise DuplicatePackageError("package already registered: %s" % pkg.name)
        self._pkgs[pkg.name] = pkg
        return self

    def get(self, name: str) -> Package | None:
        return self._pkgs.get(name)

    def names(self) -> list[str]:
        return sorted(self._pkgs)


def register_package(registry: PackageRegistry, pkg: Package) -> PackageRegistry:
    return registry.register(pkg)


def expand_program(sentences: list[Sentence],
                   pkgs: list[Package]) -> list[AnnotatedClause]:
    """Translate sentences package by package, in package list order.

    Each package sees the sentences the previous ones left untranslated;
    sentences no package handles become bare clauses.
    """
    items: list[Sentence | AnnotatedClause] = list(sentences)
    for pkg in pkgs:
        ctx = pkg.prepare([s for s in items if isinstance(s, Sentence)]) \
            if pkg.prepare else None
        new_items: list[Sentence | AnnotatedClause] = []
        for item in items:
            if isinstance(item, Sentence):
                produced = pkg.translate(item, ctx)
                if produced is not None:
                    new_items.extend(produced)
                    continue
            new_items.append(item)
        items = new_items
    out: list[AnnotatedClause] = []
    for item in items:
        if isinstance(item, Sentence):
            out.append(AnnotatedClause(item.term, item.span))
        else:
            out.append(item)
    return out


def _split_clause(t: Term) -> tuple[Term, Term]:
    if isinstance(t, Compound) and t.functor == ":-" and len(t.args) == 2:
        return t.args[0], t.args[1]
    return t, Atom("true")


class _Extractor:
    def __init__(self, module: str):
        self.module = module
        self.table = SymbolTable()
        self._ordinal = 0
        self._gid = 0
        self.clauses: list[Clause] = []

    def next_id(self) -> ClauseId:
        self._ordinal += 1
        return ClauseId(self.module, self._ordinal)

    def mark_goals(self, t: Term, span: SourceSpan, group: list[ClauseId]) -> Term:
        if isinstance(t, Compound):
            if t.functor == GOAL_INFO and len(t.args) == 2:
                goal, si = t.args
                self._gid += 1
                info_si = None if isinstance(si, Var) else si
                if info_si is None:
                    warnings.warn("unbound SI in %s; keeping span only" % GOAL_INFO)
                self.table.goal_entries[self._gid] = SourceInfo(info_si, span, group)
                inner = self.mark_goals(goal, span, group)
                return Compound(GOAL_MARK, (Int(self._gid), inner))
            if t.functor == GOAL_INFO:
                raise ExtractionError("%s needs exactly 2 arguments" % GOAL_INFO)
            if t.functor == "," and len(t.args) == 2:
                return Compound(",", (self.mark_goals(t.args[0], span, group),
                                      self.mark_goals(t.args[1], span, group)))
        return t

    def add_clause(self, term: Term, span: SourceSpan,
                   cid: ClauseId, group: list[ClauseId]) -> None:
        head, body = _split_clause(term)
        self.clauses.append(Clause(head, self.mark_goals(body, span, group), cid))

    def feed(self, ac: AnnotatedClause) -> None:
        payload = ac.payload
        if isinstance(payload, Compound) and payload.functor == CLAUSE_INFO:
            if len(payload.args) != 2:
                raise ExtractionError("%s needs exactly 2 arguments" % CLAUSE_INFO)
            clause_list, si = payload.args
            items, tail = list_parts(clause_list)
            if not items or not (isinstance(tail, Atom) and tail.name == "[]"):
                raise ExtractionError("%s payload must be a proper, non-empty list"
                                      % CLAUSE_INFO)
            info_si: Term | None = si
            if isinstance(si, Var):
                warnings.warn("unbound SI in %s; keeping span only" % CLAUSE_INFO)
                info_si = None
            group = [self.next_id() for _ in items]
            info = SourceInfo(info_si, ac.span, group)
            for cid, term in zip(group, items):
                self.table.clause_entries[cid] = info
                self.add_clause(term, ac.span, cid, group)
        else:
            self.add_clause(payload, ac.span, self.next_id(), [])


def extract_annotations(acs: list[AnnotatedClause],
                        module: str = "user") -> tuple[list[Clause], SymbolTable]:
    ex = _Extractor(module)
    for ac in acs:
        ex.feed(ac)
    return ex.clauses, ex.table


def _erase_goal_info(t: Term) -> Term:
    if isinstance(t, Compound):
        if t.functor == GOAL_INFO and len(t.args) == 2:
            return _erase_goal_info(t.args[0])
        if t.functor == "," and len(t.args) == 2:
            return Compound(",", (_erase_goal_info(t.args[0]),
                                  _erase_goal_info(t.args[1])))
    return t


def strip_annotations(acs: list[AnnotatedClause],
                      module: str = "user") -> list[Clause]:
    """Annotation-free clauses: wrappers erased in place, no table."""
    out: list[Clause] = []
    ordinal = 0
    for ac in acs:
        payload = ac.payload
        if isinstance(payload, Compound) and payload.functor == CLAUSE_INFO \
                and len(payload.args) == 2:
            items, _tail = list_parts(payload.args[0])
        else:
            items = [payload]
        for term in items:
            head, body = _split_clause(term)
            ordinal += 1
            out.append(Clause(head, _erase_goal_info(body), ClauseId(module, ordinal)))
    return out


def lookup_clause(table: SymbolTable, cid: ClauseId) -> SourceInfo | None:
    return table.lookup_clause(cid)


# Program loading -------------------------------------------------------------

@dataclass
class Program:
    module: str
    ops: OperatorTable
    packages: list[Package]
    sentences: list[Sentence]
    annotated: list[AnnotatedClause]
    clauses: list[Clause]
    symtab: SymbolTable
    builtins: dict[tuple[str, int], Callable]
    text: str
    var_base: int = 0   # fresh-variable counter right after loading


def _use_package_names(t: Term) -> list[str] | None:
    """Package names of a ':- use_package(...)' directive, else None."""
    if not (isinstance(t, Compound) and t.functor == ":-" and len(t.args) == 1):
        return None
    d = t.args[0]
    if not (isinstance(d, Compound) and d.functor == "use_package" and len(d.args) == 1):
        return None
    arg = d.args[0]
    if isinstance(arg, Atom):
        return [arg.name]
    names = []
    items, tail = list_parts(arg)
    if items and isinstance(tail, Atom) and tail.name == "[]":
        for item in items:
            if not isinstance(item, Atom):
                return []
            names.append(item.name)
        return names
    return []


def load_text(text: str, module: str, registry: PackageRegistry) -> Program:
    ops = default_ops()
    reader = Reader(text, ops, module)
    packages: list[Package] = []
    sentences: list[Sentence] = []
    in_prelude = True
    while True:
        sent = reader.read()
        if sent is None:
            break
        names = _use_package_names(sent.term)
        if names is not None:
            if not in_prelude:
                raise LoadError("use_package must precede all clauses",
                                module, sent.span.start_line, sent.span.start_col)
            if not names:
                raise LoadError("bad use_package argument",
                                module, sent.span.start_line, sent.span.start_col)
            for name in names:
                pkg = registry.get(name)
                if pkg is None:
                    raise LoadError("unknown package: %s" % name,
                                    module, sent.span.start_line, sent.span.start_col)
                packages.append(pkg)
                ops = ops.copy()
                for prio, optype, opname in pkg.operators:
                    ops.add(prio, optype, opname)
                reader.set_ops(ops)
            continue
        if isinstance(sent.term, Compound) and sent.term.functor == ":-" \
                and len(sent.term.args) == 1:
            raise LoadError("unsupported directive",
                            module, sent.span.start_line, sent.span.start_col)
        in_prelude = False
        sentences.append(sent)

    annotated = expand_program(sentences, packages)
    clauses, symtab = extract_annotations(annotated, module)
    builtins: dict[tuple[str, int], Callable] = {}
    ordinal = len(clauses)
    for pkg in packages:
        builtins.update(pkg.builtins)
        for term in pkg.runtime_predicates:
            head, body = _split_clause(term)
            ordinal += 1
            clauses.append(Clause(head, body, ClauseId(pkg.name, ordinal)))
    return Program(module, ops, packages, sentences, annotated, clauses,
                   symtab, builtins, text, var_counter())


def load_program(path: str | Path, registry: PackageRegistry) -> Program:
    path = Path(path)
    module = path.stem
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError("cannot read %s: %s" % (path, exc)) from None
    return load_text(text, module, registry)
