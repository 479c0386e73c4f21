"""Mini logic-programming system with reversible language extensions.

Programs written with syntactic extensions (functional notation, DCGs)
are translated to plain clauses that carry symbolic annotations; the
annotations are extracted into a sidecar symbol table which lets the
interactive debugger replay the execution in source-level terms.
"""

from .terms import (Atom, Compound, Int, Subst, Term, Var, eval_arith,
                    rename_apart, unify)
from .reader import (OperatorTable, Reader, Sentence, SourceSpan,
                     default_ops, read_all, read_sentence)
from .writer import write_goal, write_term

__version__ = "0.1.0"

__all__ = [
    "Atom", "Compound", "Int", "Subst", "Term", "Var",
    "eval_arith", "rename_apart", "unify",
    "OperatorTable", "Reader", "Sentence", "SourceSpan",
    "default_ops", "read_all", "read_sentence",
    "write_goal", "write_term",
    "__version__",
]
