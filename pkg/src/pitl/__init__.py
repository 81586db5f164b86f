"""Toolkit for a two-sorted probabilistic interval logic with durations.

Subpackages: :mod:`pitl.syntax` (ASTs and structural operations),
:mod:`pitl.parser` (concrete syntax), :mod:`pitl.gen` (seeded random
generators), :mod:`pitl.semantics` (exact evaluation over finite models),
:mod:`pitl.proofsys` (Hilbert-style proof checking), :mod:`pitl.derivations`
(programmatic proof-script construction), :mod:`pitl.translate` (syntactic
translations), :mod:`pitl.automata` (probabilistic timed automata as model
generators) and :mod:`pitl.cli` (batch front end).
"""

from .syntax import (  # noqa: F401
    Sort, Symbol, SymbolKind, Vocabulary,
    Formula, Term, StateExpr,
    Bottom, Top, Not, And, Or, Iff, Implies, Chop, Exists, Forall,
    Diamond, Box, DiaL, DiaR, BoxL, BoxR, Cmp, RelApp, StateHolds,
    Var, Const, FunApp, DurationOf, Prob, Mu,
    SZero, SVar, SImplies, s_and, s_not, s_one, s_or,
    desugar, free_vars, is_rigid, prob_height, sort_check, substitute,
)
from .parser import (  # noqa: F401
    ParseError, parse_formula, parse_formula_file, parse_term,
    parse_vocabulary, pretty,
)
