"""Abstract syntax for a two-sorted interval logic with durations and probabilities.

Terms come in two sorts: durations (discrete time amounts extended with an
infinite element) and probabilities (nonnegative rationals).  Formulas are
built from equality/relation atoms by implication, falsum, the binary chop
connective, and existential quantification; a sugar layer (boolean
connectives, comparisons, eventually/always, state-duration atoms,
left/right neighbourhood modalities) expands into the core via
:func:`desugar`.  All nodes are immutable and hashable; source spans are
carried but ignored by equality.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


class Sort(enum.Enum):
    DUR = "dur"
    PROB = "prob"

    def __repr__(self) -> str:  # terse in test diffs
        return self.value


class SymbolKind(enum.Enum):
    VAR = "var"
    RIGID_CONST = "rigidconst"
    FLEX_CONST = "flexconst"
    RIGID_FUN = "rigidfun"
    FLEX_FUN = "flexfun"
    RIGID_REL = "rigidrel"
    FLEX_REL = "flexrel"
    STATE_VAR = "statevar"


_FLEX_KINDS = frozenset(
    {SymbolKind.FLEX_CONST, SymbolKind.FLEX_FUN, SymbolKind.FLEX_REL, SymbolKind.STATE_VAR}
)


@dataclass(frozen=True)
class Symbol:
    """A declared name: variable, constant, function, relation or state variable."""

    name: str
    kind: SymbolKind
    arg_sorts: tuple[Sort, ...] = ()
    sort: Optional[Sort] = None  # result sort; None for relations and state variables


#: Surface keywords; none of these can be declared as a symbol name.
KEYWORDS = frozenset(
    {
        "bot", "top", "dia", "box", "dia_l", "dia_r", "box_l", "box_r",
        "dur", "p", "mu", "ex", "all", "inf", "l",
    }
)

#: Names installed in every vocabulary (some overloaded across the two sorts).
BUILTIN_NAMES = frozenset({"0", "1", "inf", "l", "+", "*", "="})


def _builtin_symbols() -> tuple[Symbol, ...]:
    D, P = Sort.DUR, Sort.PROB
    RC, FC, RF, RR = (
        SymbolKind.RIGID_CONST,
        SymbolKind.FLEX_CONST,
        SymbolKind.RIGID_FUN,
        SymbolKind.RIGID_REL,
    )
    return (
        Symbol("0", RC, (), D),
        Symbol("0", RC, (), P),
        Symbol("1", RC, (), P),
        Symbol("inf", RC, (), D),
        Symbol("l", FC, (), D),
        Symbol("+", RF, (D, D), D),
        Symbol("+", RF, (P, P), P),
        Symbol("*", RF, (P, P), P),
        Symbol("=", RR, (D, D), None),
        Symbol("=", RR, (P, P), None),
    )


class VocabularyError(ValueError):
    pass


class Vocabulary:
    """Symbol table mapping names to their (possibly overloaded) declarations.

    The built-in names ``0 1 inf l + * =`` are pre-installed; only they may
    be overloaded.  User declarations are single and may not shadow keywords
    or built-ins.
    """

    def __init__(self, symbols: tuple[Symbol, ...] = ()):
        self._table: dict[str, tuple[Symbol, ...]] = {}
        for sym in _builtin_symbols():
            self._table.setdefault(sym.name, ())
            self._table[sym.name] += (sym,)
        for sym in symbols:
            self.declare(sym)

    def declare(self, sym: Symbol) -> None:
        if sym.name in KEYWORDS or sym.name in BUILTIN_NAMES:
            raise VocabularyError(f"cannot declare reserved name {sym.name!r}")
        if sym.name in self._table:
            raise VocabularyError(f"duplicate declaration of {sym.name!r}")
        self._table[sym.name] = (sym,)

    def lookup(self, name: str) -> tuple[Symbol, ...]:
        return self._table.get(name, ())

    def __contains__(self, name: str) -> bool:
        return name in self._table

    def symbols(self) -> Iterator[Symbol]:
        for over in self._table.values():
            yield from over

    def is_flexible_name(self, name: str) -> bool:
        return any(s.kind in _FLEX_KINDS for s in self.lookup(name))

    def extended(self, symbols: tuple[Symbol, ...]) -> "Vocabulary":
        """A copy with extra declarations."""
        out = Vocabulary()
        out._table = dict(self._table)
        for sym in symbols:
            out.declare(sym)
        return out


# ---------------------------------------------------------------------------
# AST nodes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


@dataclass(frozen=True)
class Node:
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False, kw_only=True)


# -- state expressions (boolean expressions over state variables) ----------


@dataclass(frozen=True)
class StateExpr(Node):
    pass


@dataclass(frozen=True)
class SZero(StateExpr):
    pass


@dataclass(frozen=True)
class SVar(StateExpr):
    name: str


@dataclass(frozen=True)
class SImplies(StateExpr):
    lhs: StateExpr
    rhs: StateExpr


def s_not(s: StateExpr) -> StateExpr:
    return SImplies(s, SZero())


def s_one() -> StateExpr:
    return SImplies(SZero(), SZero())


def s_or(a: StateExpr, b: StateExpr) -> StateExpr:
    return SImplies(s_not(a), b)


def s_and(a: StateExpr, b: StateExpr) -> StateExpr:
    return s_not(SImplies(a, s_not(b)))


# -- terms ------------------------------------------------------------------


@dataclass(frozen=True)
class Term(Node):
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str
    sort: Sort


@dataclass(frozen=True)
class Const(Term):
    name: str
    sort: Optional[Sort]  # None only transiently, for unresolved numerals


@dataclass(frozen=True)
class FunApp(Term):
    name: str
    args: tuple[Term, ...]
    sort: Optional[Sort]


@dataclass(frozen=True)
class DurationOf(Term):
    """Accumulated duration of a state expression over the current interval."""

    state: StateExpr


@dataclass(frozen=True)
class Prob(Term):
    """Probability of a formula over behaviours agreeing up to the present."""

    body: "Formula"


@dataclass(frozen=True)
class Mu(Term):
    """Measure-style sugar: ``mu(phi)(t)`` abbreviates ``p((phi & l=t ; top))``."""

    body: "Formula"
    duration: Term


# -- formulas ---------------------------------------------------------------


@dataclass(frozen=True)
class Formula(Node):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class RelApp(Formula):
    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Chop(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: Symbol
    body: Formula


# Neighbourhood modalities: core connectives of the chop-free sublanguage.


@dataclass(frozen=True)
class DiaL(Formula):
    body: Formula


@dataclass(frozen=True)
class DiaR(Formula):
    body: Formula


# -- sugar ------------------------------------------------------------------


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Or(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Iff(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: Symbol
    body: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    body: Formula


@dataclass(frozen=True)
class Box(Formula):
    body: Formula


@dataclass(frozen=True)
class BoxL(Formula):
    body: Formula


@dataclass(frozen=True)
class BoxR(Formula):
    body: Formula


CMP_OPS = ("<=", "<", ">", ">=", "!=")


@dataclass(frozen=True)
class Cmp(Formula):
    op: str  # one of CMP_OPS; plain equality is a RelApp
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class StateHolds(Formula):
    """The state expression holds (almost) everywhere on a nonempty interval."""

    state: StateExpr


# ---------------------------------------------------------------------------
# Convenience constructors
# ---------------------------------------------------------------------------

L = Const("l", Sort.DUR)
INF = Const("inf", Sort.DUR)
ZERO_D = Const("0", Sort.DUR)
ZERO_P = Const("0", Sort.PROB)
ONE_P = Const("1", Sort.PROB)


def var(name: str, sort: Sort) -> Var:
    return Var(name, sort)


def var_symbol(name: str, sort: Sort) -> Symbol:
    return Symbol(name, SymbolKind.VAR, (), sort)


def eq(a: Term, b: Term) -> RelApp:
    return RelApp("=", (a, b))


def add(a: Term, b: Term) -> FunApp:
    return FunApp("+", (a, b), term_sort(a))


def mul(a: Term, b: Term) -> FunApp:
    return FunApp("*", (a, b), Sort.PROB)


def conj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def chop_n(*fs: Formula) -> Formula:
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Chop(f, out)
    return out


def term_sort(t: Term) -> Optional[Sort]:
    """The sort a term claims for itself (None for unresolved numerals)."""
    if isinstance(t, (Var, Const, FunApp)):
        return t.sort
    if isinstance(t, DurationOf):
        return Sort.DUR
    if isinstance(t, (Prob, Mu)):
        return Sort.PROB
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# Structural queries
# ---------------------------------------------------------------------------


def _child_nodes(n: Node) -> Iterator[Node]:
    for name in getattr(n, "__dataclass_fields__", {}):
        if name == "span":
            continue
        value = getattr(n, name)
        if isinstance(value, Node):
            yield value
        elif isinstance(value, tuple):
            for item in value:
                if isinstance(item, Node):
                    yield item


def walk(n: Node) -> Iterator[Node]:
    """Yield ``n`` and all descendant nodes, preorder."""
    yield n
    for child in _child_nodes(n):
        yield from walk(child)


def free_vars(n: Node) -> frozenset[Symbol]:
    """Free variables, as VAR-kind symbols."""
    if isinstance(n, Var):
        return frozenset({var_symbol(n.name, n.sort)})
    if isinstance(n, (Exists, Forall)):
        return free_vars(n.body) - {n.var}
    out: frozenset[Symbol] = frozenset()
    for child in _child_nodes(n):
        out |= free_vars(child)
    return out


def all_names(n: Node) -> frozenset[str]:
    """Every symbol name occurring in ``n`` (free, bound or applied)."""
    out: set[str] = set()
    for sub in walk(n):
        if isinstance(sub, (Var, Const, FunApp, SVar)):
            out.add(sub.name)
        elif isinstance(sub, RelApp):
            out.add(sub.name)
        elif isinstance(sub, (Exists, Forall)):
            out.add(sub.var.name)
    return frozenset(out)


def is_rigid(n: Node, vocab: Vocabulary) -> bool:
    """True when ``n`` contains no flexible symbol.

    Durations of states, the interval-length constant and state atoms are
    flexible; ``p(...)``/``mu(...)`` are rigid exactly when their bodies are.
    """
    for sub in walk(n):
        if isinstance(sub, (DurationOf, StateHolds, SVar)):
            return False
        if isinstance(sub, (Var,)):
            continue
        if isinstance(sub, (Const, FunApp, RelApp)) and vocab.is_flexible_name(sub.name):
            return False
    return True


def prob_height(n: Node) -> int:
    """Nesting depth of probability terms (0 when none occur)."""
    if isinstance(n, Prob):
        return 1 + prob_height(n.body)
    if isinstance(n, Mu):
        return 1 + max(prob_height(n.body), prob_height(n.duration))
    heights = [prob_height(c) for c in _child_nodes(n)]
    return max(heights, default=0)


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------


class SubstitutionError(ValueError):
    pass


class CaptureError(SubstitutionError):
    pass


class FlexibleUnderChop(SubstitutionError):
    pass


#: Nodes whose evaluation shifts the reference interval: substituting a
#: flexible term below one of these changes its value, so it is refused.
_INTERVAL_SHIFTING = (Chop, Prob, Mu, Diamond, Box, DiaL, DiaR, BoxL, BoxR)


def substitute(n: Node, target: Symbol, t: Term, vocab: Vocabulary) -> Node:
    """Replace free occurrences of ``target`` in ``n`` by the term ``t``.

    Raises :class:`CaptureError` when a binder in ``n`` would capture a free
    variable of ``t``, and :class:`FlexibleUnderChop` when ``t`` is flexible
    and some free occurrence of ``target`` sits below an interval-shifting
    connective (where the term's value would no longer be the outer one).
    """
    if target not in free_vars(n):
        return n
    flexible = not is_rigid(t, vocab)
    t_names = {s.name for s in free_vars(t)}

    def go(node: Node, shifted: bool) -> Node:
        if target not in free_vars(node):
            return node
        if isinstance(node, Var):
            if shifted and flexible:
                raise FlexibleUnderChop(
                    f"flexible term for {target.name!r} below a chop/probability context"
                )
            return t
        if isinstance(node, (Exists, Forall)):
            if node.var == target:
                return node  # unreachable: target not free then
            if node.var.name in t_names:
                raise CaptureError(
                    f"binder {node.var.name!r} would capture a free variable of the witness"
                )
            return type(node)(node.var, go(node.body, shifted))
        shift_below = shifted or isinstance(node, _INTERVAL_SHIFTING)

        def rebuild(value):
            if isinstance(value, Node):
                return go(value, shift_below)
            if isinstance(value, tuple):
                return tuple(rebuild(v) for v in value)
            return value

        kwargs = {
            name: rebuild(getattr(node, name))
            for name in node.__dataclass_fields__
            if name != "span"
        }
        return type(node)(**kwargs)

    return go(n, False)


# ---------------------------------------------------------------------------
# Sort checking
# ---------------------------------------------------------------------------


class SortError(ValueError):
    def __init__(self, path: tuple, message: str):
        super().__init__(f"at {'/'.join(map(str, path)) or '<root>'}: {message}")
        self.path = path
        self.message = message


class UnknownSymbol(SortError):
    pass


class ArityMismatch(SortError):
    pass


class SortMismatch(SortError):
    pass


def sort_check(vocab: Vocabulary, n: Node) -> Optional[Sort]:
    """Verify declarations/arities/sorts throughout ``n``.

    Returns the sort for terms and None for formulas/state expressions.
    Variable occurrences certify their own sort (binders may shadow
    declarations); every other symbol must match a declaration.
    """

    def state(s: StateExpr, path: tuple) -> None:
        if isinstance(s, SZero):
            return
        if isinstance(s, SVar):
            if not any(d.kind == SymbolKind.STATE_VAR for d in vocab.lookup(s.name)):
                raise UnknownSymbol(path, f"undeclared state variable {s.name!r}")
            return
        if isinstance(s, SImplies):
            state(s.lhs, path + ("lhs",))
            state(s.rhs, path + ("rhs",))
            return
        raise SortMismatch(path, f"not a state expression: {type(s).__name__}")

    def term(t: Term, path: tuple) -> Sort:
        if isinstance(t, Var):
            return t.sort
        if isinstance(t, Const):
            decls = [d for d in vocab.lookup(t.name)
                     if d.kind in (SymbolKind.RIGID_CONST, SymbolKind.FLEX_CONST)]
            if not decls:
                raise UnknownSymbol(path, f"undeclared constant {t.name!r}")
            if t.sort is None or t.sort not in {d.sort for d in decls}:
                raise SortMismatch(
                    path, f"constant {t.name!r} has no {t.sort and t.sort.value} declaration"
                )
            return t.sort
        if isinstance(t, FunApp):
            decls = [d for d in vocab.lookup(t.name)
                     if d.kind in (SymbolKind.RIGID_FUN, SymbolKind.FLEX_FUN)]
            if not decls:
                raise UnknownSymbol(path, f"undeclared function {t.name!r}")
            if all(len(d.arg_sorts) != len(t.args) for d in decls):
                raise ArityMismatch(
                    path, f"{t.name!r} expects {len(decls[0].arg_sorts)} args, got {len(t.args)}"
                )
            arg_sorts = [term(a, path + (i,)) for i, a in enumerate(t.args)]
            for d in decls:
                if list(d.arg_sorts) == arg_sorts and d.sort == t.sort:
                    return t.sort
            witness = next(d for d in decls if len(d.arg_sorts) == len(t.args))
            for d in decls:
                if len(d.arg_sorts) == len(t.args) and list(d.arg_sorts) == arg_sorts:
                    raise SortMismatch(path, f"{t.name!r} result sort is not {t.sort}")
            bad = next(i for i, (got, want) in enumerate(zip(arg_sorts, witness.arg_sorts))
                       if got != want)
            raise SortMismatch(
                path + (bad,),
                f"argument {bad} of {t.name!r}: expected {witness.arg_sorts[bad].value}, "
                f"got {arg_sorts[bad] and arg_sorts[bad].value}",
            )
        if isinstance(t, DurationOf):
            state(t.state, path + ("state",))
            return Sort.DUR
        if isinstance(t, Prob):
            formula(t.body, path + ("body",))
            return Sort.PROB
        if isinstance(t, Mu):
            formula(t.body, path + ("body",))
            if term(t.duration, path + ("duration",)) != Sort.DUR:
                raise SortMismatch(path + ("duration",), "mu needs a duration-sorted bound")
            return Sort.PROB
        raise SortMismatch(path, f"not a term: {type(t).__name__}")

    def formula(f: Formula, path: tuple) -> None:
        if isinstance(f, (Bottom, Top)):
            return
        if isinstance(f, RelApp):
            decls = [d for d in vocab.lookup(f.name)
                     if d.kind in (SymbolKind.RIGID_REL, SymbolKind.FLEX_REL)]
            if not decls:
                raise UnknownSymbol(path, f"undeclared relation {f.name!r}")
            if all(len(d.arg_sorts) != len(f.args) for d in decls):
                raise ArityMismatch(
                    path, f"{f.name!r} expects {len(decls[0].arg_sorts)} args, got {len(f.args)}"
                )
            arg_sorts = [term(a, path + (i,)) for i, a in enumerate(f.args)]
            if any(list(d.arg_sorts) == arg_sorts for d in decls):
                return
            witness = next(d for d in decls if len(d.arg_sorts) == len(f.args))
            bad = next(i for i, (got, want) in enumerate(zip(arg_sorts, witness.arg_sorts))
                       if got != want)
            raise SortMismatch(
                path + (bad,),
                f"argument {bad} of {f.name!r}: expected {witness.arg_sorts[bad].value}, "
                f"got {arg_sorts[bad] and arg_sorts[bad].value}",
            )
        if isinstance(f, Cmp):
            a = term(f.lhs, path + ("lhs",))
            b = term(f.rhs, path + ("rhs",))
            if a != b:
                raise SortMismatch(path, f"comparison across sorts: {a.value} vs {b.value}")
            return
        if isinstance(f, (Implies, Chop, And, Or, Iff)):
            formula(f.lhs, path + ("lhs",))
            formula(f.rhs, path + ("rhs",))
            return
        if isinstance(f, (Not, Diamond, Box, DiaL, DiaR, BoxL, BoxR)):
            formula(f.body, path + ("body",))
            return
        if isinstance(f, (Exists, Forall)):
            formula(f.body, path + ("body",))
            return
        if isinstance(f, StateHolds):
            state(f.state, path + ("state",))
            return
        raise SortMismatch(path, f"not a formula: {type(f).__name__}")

    if isinstance(n, Term):
        return term(n, ())
    if isinstance(n, Formula):
        formula(n, ())
        return None
    if isinstance(n, StateExpr):
        state(n, ())
        return None
    raise TypeError(f"cannot sort-check {type(n).__name__}")


# ---------------------------------------------------------------------------
# Desugaring
# ---------------------------------------------------------------------------


def fresh_name(base: str, used: frozenset[str]) -> str:
    if base not in used:
        return base
    for i in itertools.count(1):
        cand = f"{base}#{i}"
        if cand not in used:
            return cand
    raise AssertionError


def le_formula(a: Term, b: Term) -> Formula:
    """The canonical expansion of ``a <= b``: ``ex z . a + z = b``.

    The binder is the first of ``z, z#1, z#2 ...`` not occurring (in any
    role) in either operand, so equal comparisons expand identically.
    """
    sort = term_sort(a) or term_sort(b) or Sort.DUR
    zname = fresh_name("z", all_names(a) | all_names(b))
    z = var_symbol(zname, sort)
    return Exists(z, eq(FunApp("+", (a, Var(zname, sort)), sort), b))


def _not_d(f: Formula) -> Formula:
    return Implies(f, Bottom())


def _and_d(a: Formula, b: Formula) -> Formula:
    return Implies(Implies(a, Implies(b, Bottom())), Bottom())


def _or_d(a: Formula, b: Formula) -> Formula:
    return Implies(Implies(a, Bottom()), b)


def desugar(n: Node) -> Node:
    """Expand all sugar into the core language; idempotent."""
    if isinstance(n, (Bottom, SZero, SVar, Var)):
        return n
    if isinstance(n, Const):
        return Const(n.name, n.sort)
    if isinstance(n, Top):
        return Implies(Bottom(), Bottom())
    if isinstance(n, Not):
        return _not_d(desugar(n.body))
    if isinstance(n, And):
        return _and_d(desugar(n.lhs), desugar(n.rhs))
    if isinstance(n, Or):
        return _or_d(desugar(n.lhs), desugar(n.rhs))
    if isinstance(n, Iff):
        a, b = desugar(n.lhs), desugar(n.rhs)
        return _and_d(Implies(a, b), Implies(b, a))
    if isinstance(n, Forall):
        return _not_d(Exists(n.var, _not_d(desugar(n.body))))
    if isinstance(n, Diamond):
        body = desugar(n.body)
        top = Implies(Bottom(), Bottom())
        return _or_d(Chop(top, Chop(body, top)), Chop(top, body))
    if isinstance(n, Box):
        return desugar(Not(Diamond(Not(n.body))))
    if isinstance(n, BoxL):
        return _not_d(DiaL(_not_d(desugar(n.body))))
    if isinstance(n, BoxR):
        return _not_d(DiaR(_not_d(desugar(n.body))))
    if isinstance(n, StateHolds):
        s = desugar(n.state)
        return _and_d(eq(DurationOf(s), L), _not_d(eq(L, ZERO_D)))
    if isinstance(n, Cmp):
        a = desugar(n.lhs)
        b = desugar(n.rhs)
        if n.op == "<=":
            return le_formula(a, b)
        if n.op == "<":
            return _not_d(le_formula(b, a))
        if n.op == ">":
            return _not_d(le_formula(a, b))
        if n.op == ">=":
            return le_formula(b, a)
        if n.op == "!=":
            return _not_d(eq(a, b))
        raise ValueError(f"unknown comparison {n.op!r}")
    if isinstance(n, Mu):
        body = desugar(n.body)
        bound = desugar(n.duration)
        top = Implies(Bottom(), Bottom())
        return Prob(Chop(_and_d(body, eq(L, bound)), top))
    if isinstance(n, RelApp):
        return RelApp(n.name, tuple(desugar(a) for a in n.args))
    if isinstance(n, Implies):
        return Implies(desugar(n.lhs), desugar(n.rhs))
    if isinstance(n, Chop):
        return Chop(desugar(n.lhs), desugar(n.rhs))
    if isinstance(n, Exists):
        return Exists(n.var, desugar(n.body))
    if isinstance(n, DiaL):
        return DiaL(desugar(n.body))
    if isinstance(n, DiaR):
        return DiaR(desugar(n.body))
    if isinstance(n, SImplies):
        return SImplies(desugar(n.lhs), desugar(n.rhs))
    if isinstance(n, FunApp):
        return FunApp(n.name, tuple(desugar(a) for a in n.args), n.sort)
    if isinstance(n, DurationOf):
        return DurationOf(desugar(n.state))
    if isinstance(n, Prob):
        return Prob(desugar(n.body))
    raise TypeError(f"cannot desugar {type(n).__name__}")


#: Nodes that survive desugaring.
CORE_FORMULA_TYPES = (Bottom, RelApp, Implies, Chop, Exists, DiaL, DiaR)
CORE_TERM_TYPES = (Var, Const, FunApp, DurationOf, Prob)


def is_core(n: Node) -> bool:
    return all(
        isinstance(sub, CORE_FORMULA_TYPES + CORE_TERM_TYPES + (SZero, SVar, SImplies))
        for sub in walk(n)
    )
