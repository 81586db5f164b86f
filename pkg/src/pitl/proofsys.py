"""Axiom-schema catalog and a checker for Hilbert-style proof scripts.

The catalog states every axiom schema of the logic over metavariable
markers (``?phi`` for formulas, ``?x`` for sorted terms, ``?S`` for state
expressions); :func:`match_schema` decides whether a concrete desugared
formula instantiates a schema and enforces the schema's side conditions.
Proof scripts are plain-text files of numbered lines, each carrying a
justification; :func:`check_proof` validates a script line by line and
reports which axiom groups it draws on.  A registry of pre-checked
derived theorems and rules (:data:`REGISTRY`) lets scripts cite earlier
results by name; :func:`check_registry` re-derives every registry entry
from the bundled scripts in dependency order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, Mapping, Optional, Union

from .parser import ParseError, parse_formula, parse_term, parse_vocabulary, pretty
from .syntax import (
    INF, L, ONE_P, ZERO_D, ZERO_P,
    And, Bottom, Chop, Cmp, Const, DiaL, DiaR, DurationOf, Exists, Formula,
    FunApp, Iff, Implies, Node, Not, Or, Prob, RelApp, SImplies, SVar, SZero,
    Sort, StateExpr, Symbol, SymbolKind, Term, Top, Var, Vocabulary,
    VocabularyError, add, all_names, desugar, eq, free_vars, is_rigid, mul,
    s_and, s_not, s_one, s_or, sort_check, SortError, SubstitutionError,
    substitute, term_sort, var_symbol, walk,
)

__all__ = [
    "Schema", "MatchError", "SideConditionViolated", "RigidFormula",
    "RigidTerm", "NotFree", "PropEquivStates", "FreshVar", "AdmissibleSubst",
    "CATALOG", "GROUPS", "match_schema", "instantiate_form",
    "fmeta", "tmeta", "smeta",
    "Just", "ProofLine", "Proof", "LineReport", "ProofVerdict",
    "ProofFormatError", "parse_proof_file", "load_proof", "check_proof",
    "TheoremEntry", "RuleEntry", "REGISTRY", "REGISTRY_SCRIPTS",
    "check_registry",
]

_M = "?"

G_ITL = "ITL"
G_DUR = "Duration"
G_PROB = "Probability-domain"
G_PITL = "PITL"
G_DC = "DC"
G_GLOBAL = "Global"
GROUPS = (G_ITL, G_DUR, G_PROB, G_PITL, G_DC, G_GLOBAL)


# ---------------------------------------------------------------------------
# Metavariable markers
# ---------------------------------------------------------------------------


def fmeta(name: str) -> RelApp:
    """Formula metavariable: a 0-ary relation marker ``?name``."""
    return RelApp(_M + name, ())


def tmeta(name: str, sort: Sort) -> Var:
    """Term metavariable of a fixed sort: a variable marker ``?name``."""
    return Var(_M + name, sort)


def smeta(name: str) -> SVar:
    """State-expression metavariable: a state-variable marker ``?name``."""
    return SVar(_M + name)


def _is_marker(name: str) -> bool:
    return name.startswith(_M)


def _meta_kinds(pat: Node) -> dict[str, str]:
    """Map each metavariable in a pattern to formula/term/state/binder."""
    kinds: dict[str, str] = {}
    for sub in walk(pat):
        if isinstance(sub, Var) and _is_marker(sub.name):
            kinds.setdefault(sub.name[1:], "term")
        elif isinstance(sub, RelApp) and _is_marker(sub.name):
            kinds.setdefault(sub.name[1:], "formula")
        elif isinstance(sub, SVar) and _is_marker(sub.name):
            kinds.setdefault(sub.name[1:], "state")
        elif isinstance(sub, Exists) and _is_marker(sub.var.name):
            kinds.setdefault(sub.var.name[1:], "binder")
    return kinds


def _shift_exposed_term_metas(pat: Node, shifted: bool = False) -> frozenset[str]:
    """Term metavariables with an occurrence under a chop or probability node.

    Matching such a position with a flexible term would move it to a
    different evaluation interval, so those metas only admit rigid terms.
    """
    out: set[str] = set()
    if isinstance(pat, Var) and _is_marker(pat.name):
        if shifted:
            out.add(pat.name[1:])
        return frozenset(out)
    child_shift = shifted or isinstance(pat, (Chop, Prob, DiaL, DiaR))
    for child in _children(pat):
        out |= _shift_exposed_term_metas(child, child_shift)
    return frozenset(out)


def _children(n: Node) -> Iterator[Node]:
    for fname in getattr(n, "__dataclass_fields__", {}):
        if fname == "span":
            continue
        value = getattr(n, fname)
        if isinstance(value, Node):
            yield value
        elif isinstance(value, tuple):
            for item in value:
                if isinstance(item, Node):
                    yield item


def _top_d() -> Formula:
    return Implies(Bottom(), Bottom())


# ---------------------------------------------------------------------------
# Side conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RigidFormula:
    """The formula bound to ``meta`` must contain no flexible symbol."""
    meta: str


@dataclass(frozen=True)
class RigidTerm:
    """The term bound to ``meta`` must be rigid (implicit at shifted spots)."""
    meta: str


@dataclass(frozen=True)
class NotFree:
    """The variable bound to ``var_meta`` may not be free in ``formula_meta``."""
    var_meta: str
    formula_meta: str


@dataclass(frozen=True)
class PropEquivStates:
    """The two matched state expressions must be propositionally equivalent."""
    lhs: str
    rhs: str


@dataclass(frozen=True)
class FreshVar:
    """The variable bound to ``var_meta`` must be fresh for the whole match."""
    var_meta: str


@dataclass(frozen=True)
class AdmissibleSubst:
    """``term_meta`` must be substitutable for ``var_meta`` in ``formula_meta``."""
    term_meta: str
    var_meta: str
    formula_meta: str


SideCondition = Union[RigidFormula, RigidTerm, NotFree, PropEquivStates,
                      FreshVar, AdmissibleSubst]


class MatchError(ValueError):
    """A formula is not an instance of the schema."""


class SideConditionViolated(MatchError):
    """Structural match succeeded but a side condition failed."""

    def __init__(self, condition: SideCondition, message: str):
        super().__init__(message)
        self.condition = condition


class _NoMatch(Exception):
    pass


# ---------------------------------------------------------------------------
# Schemas and matching
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Schema:
    """A named axiom schema: alternative pattern forms plus side conditions.

    Patterns are stored desugared.  ``rigid_term_metas`` is aligned with
    ``forms`` and lists the term metas that only admit rigid instances.
    """

    name: str
    group: str
    forms: tuple[Formula, ...]
    side: tuple[SideCondition, ...]
    display: str
    rigid_term_metas: tuple[frozenset[str], ...]


def _validate_pattern(pat: Node, bound: frozenset[str] = frozenset()) -> None:
    if isinstance(pat, Var) and not _is_marker(pat.name):
        if pat.name not in bound:
            raise AssertionError(f"free plain variable {pat.name!r} in pattern")
        return
    if isinstance(pat, Exists):
        _validate_pattern(pat.body, bound | {pat.var.name})
        return
    for child in _children(pat):
        _validate_pattern(child, bound)


def _schema(name: str, group: str, display: str, forms: tuple[Formula, ...],
            side: tuple[SideCondition, ...] = ()) -> Schema:
    dforms = tuple(desugar(f) for f in forms)
    for df in dforms:
        _validate_pattern(df)
    kinds: dict[str, str] = {}
    for df in dforms:
        kinds.update(_meta_kinds(df))
    for cond in side:
        for meta in (getattr(cond, n) for n in ("meta", "var_meta", "formula_meta",
                                                "term_meta", "lhs", "rhs")
                     if hasattr(cond, n)):
            if meta not in kinds:
                raise AssertionError(f"{name}: side condition names unknown meta {meta!r}")
    rigid = tuple(_shift_exposed_term_metas(df) for df in dforms)
    return Schema(name, group, dforms, tuple(side), display, rigid)


def _bind(env: dict, key: str, value) -> None:
    prior = env.get(key)
    if prior is None:
        env[key] = value
    elif prior != value:
        raise _NoMatch(f"metavariable {key} matched two different operands")


def _scope_guard(value: Node, scope: tuple, term_meta: bool) -> None:
    # A pattern binder may not capture variables of a matched term; binders
    # that are themselves metavariables bind into matched formulas by design.
    if not scope:
        return
    fv = free_vars(value)
    for _pname, sym, is_meta in scope:
        if is_meta and not term_meta:
            continue
        if var_symbol(sym.name, sym.sort) in fv:
            raise _NoMatch(f"pattern binder {sym.name} would capture the matched operand")


def _m(pat: Node, node: Node, scope: tuple, env: dict, vocab: Vocabulary) -> None:
    if isinstance(pat, Var):
        if _is_marker(pat.name):
            if not isinstance(node, Term):
                raise _NoMatch("term metavariable matched against a non-term")
            if term_sort(node) != pat.sort:
                raise _NoMatch(f"term metavariable {pat.name[1:]} has sort "
                               f"{pat.sort.value}; operand differs")
            _scope_guard(node, scope, term_meta=True)
            _bind(env, pat.name[1:], node)
            return
        for pname, sym, _is_meta in reversed(scope):
            if pname == pat.name:
                if not (isinstance(node, Var) and node.name == sym.name
                        and node.sort == sym.sort):
                    raise _NoMatch(f"expected the bound variable {sym.name}")
                return
        raise AssertionError(f"unbound plain variable {pat.name!r} in pattern")
    if isinstance(pat, RelApp) and _is_marker(pat.name):
        if not isinstance(node, Formula):
            raise _NoMatch("formula metavariable matched against a non-formula")
        _scope_guard(node, scope, term_meta=False)
        _bind(env, pat.name[1:], node)
        return
    if isinstance(pat, SVar) and _is_marker(pat.name):
        if not isinstance(node, StateExpr):
            raise _NoMatch("state metavariable matched against a non-state")
        _bind(env, pat.name[1:], node)
        return
    if isinstance(pat, Exists):
        if not isinstance(node, Exists):
            raise _NoMatch("expected an existential")
        if _is_marker(pat.var.name):
            if pat.var.sort is not None and pat.var.sort != node.var.sort:
                raise _NoMatch("binder sort differs")
            _bind(env, pat.var.name[1:], node.var)
            entry = (pat.var.name, node.var, True)
        else:
            if pat.var.sort != node.var.sort:
                raise _NoMatch("binder sort differs")
            entry = (pat.var.name, node.var, False)
        _m(pat.body, node.body, scope + (entry,), env, vocab)
        return
    if isinstance(pat, Bottom):
        if not isinstance(node, Bottom):
            raise _NoMatch("expected falsum")
        return
    if isinstance(pat, Const):
        if not (isinstance(node, Const) and node.name == pat.name
                and node.sort == pat.sort):
            raise _NoMatch(f"expected the constant {pat.name}")
        return
    if isinstance(pat, FunApp):
        if not (isinstance(node, FunApp) and node.name == pat.name
                and node.sort == pat.sort and len(node.args) == len(pat.args)):
            raise _NoMatch(f"expected an application of {pat.name}")
        for p, n in zip(pat.args, node.args):
            _m(p, n, scope, env, vocab)
        return
    if isinstance(pat, RelApp):
        if not (isinstance(node, RelApp) and node.name == pat.name
                and len(node.args) == len(pat.args)):
            raise _NoMatch(f"expected an atom of {pat.name}")
        for p, n in zip(pat.args, node.args):
            _m(p, n, scope, env, vocab)
        return
    if isinstance(pat, Implies):
        if not isinstance(node, Implies):
            raise _NoMatch("expected an implication")
        _m(pat.lhs, node.lhs, scope, env, vocab)
        _m(pat.rhs, node.rhs, scope, env, vocab)
        return
    if isinstance(pat, Chop):
        if not isinstance(node, Chop):
            raise _NoMatch("expected a chop")
        _m(pat.lhs, node.lhs, scope, env, vocab)
        _m(pat.rhs, node.rhs, scope, env, vocab)
        return
    if isinstance(pat, Prob):
        if not isinstance(node, Prob):
            raise _NoMatch("expected a probability term")
        _m(pat.body, node.body, scope, env, vocab)
        return
    if isinstance(pat, DurationOf):
        if not isinstance(node, DurationOf):
            raise _NoMatch("expected a duration term")
        _m(pat.state, node.state, scope, env, vocab)
        return
    if isinstance(pat, (DiaL, DiaR)):
        if type(node) is not type(pat):
            raise _NoMatch("expected a neighbourhood modality")
        _m(pat.body, node.body, scope, env, vocab)
        return
    if isinstance(pat, SZero):
        if not isinstance(node, SZero):
            raise _NoMatch("expected the zero state")
        return
    if isinstance(pat, SImplies):
        if not isinstance(node, SImplies):
            raise _NoMatch("expected a state implication")
        _m(pat.lhs, node.lhs, scope, env, vocab)
        _m(pat.rhs, node.rhs, scope, env, vocab)
        return
    raise AssertionError(f"unhandled pattern node {type(pat).__name__}")


def _match_structural(form: Formula, formula: Formula, vocab: Vocabulary) -> dict:
    env: dict = {}
    _m(form, formula, (), env, vocab)
    return env


def _state_truth(s: StateExpr, asg: Mapping[str, bool]) -> bool:
    if isinstance(s, SZero):
        return False
    if isinstance(s, SVar):
        return asg[s.name]
    if isinstance(s, SImplies):
        return (not _state_truth(s.lhs, asg)) or _state_truth(s.rhs, asg)
    raise AssertionError(type(s).__name__)


def _state_equiv(a: StateExpr, b: StateExpr) -> bool:
    names = sorted({n.name for n in walk(a) if isinstance(n, SVar)}
                   | {n.name for n in walk(b) if isinstance(n, SVar)})
    if len(names) > 16:
        raise MatchError("state expressions mention too many state variables")
    for bits in range(1 << len(names)):
        asg = {nm: bool(bits >> i & 1) for i, nm in enumerate(names)}
        if _state_truth(a, asg) != _state_truth(b, asg):
            return False
    return True


def _check_sides(schema: Schema, form_idx: int, env: dict, vocab: Vocabulary) -> None:
    for meta in schema.rigid_term_metas[form_idx]:
        value = env[meta]
        if not is_rigid(value, vocab):
            raise SideConditionViolated(
                RigidTerm(meta),
                f"{schema.name}: position of {meta} admits only rigid terms, "
                f"matched {pretty(value)}")
    for cond in schema.side:
        if isinstance(cond, RigidFormula):
            if not is_rigid(env[cond.meta], vocab):
                raise SideConditionViolated(
                    cond, f"{schema.name}: {cond.meta} must be rigid, matched "
                    f"{pretty(env[cond.meta])}")
        elif isinstance(cond, NotFree):
            sym = env[cond.var_meta]
            if var_symbol(sym.name, sym.sort) in free_vars(env[cond.formula_meta]):
                raise SideConditionViolated(
                    cond, f"{schema.name}: {sym.name} must not be free in the "
                    f"operand of {cond.formula_meta}")
        elif isinstance(cond, PropEquivStates):
            if not _state_equiv(env[cond.lhs], env[cond.rhs]):
                raise SideConditionViolated(
                    cond, f"{schema.name}: matched state expressions are not "
                    "propositionally equivalent")
        else:
            raise AssertionError(f"unsupported side condition {cond}")


def match_schema(schema: Schema, formula: Formula, vocab: Vocabulary) -> dict:
    """Match a desugared formula against a schema.

    Returns the instantiation (meta name to matched node, binder metas to
    symbols).  Raises :class:`SideConditionViolated` when some form matches
    structurally but fails its side conditions, :class:`MatchError` otherwise.
    Forms are tried in declaration order; matching is deterministic.
    """
    side_exc: Optional[SideConditionViolated] = None
    for idx, form in enumerate(schema.forms):
        try:
            env = _match_structural(form, formula, vocab)
        except _NoMatch:
            continue
        try:
            _check_sides(schema, idx, env, vocab)
            return env
        except SideConditionViolated as exc:
            side_exc = exc
    if side_exc is not None:
        raise side_exc
    raise MatchError(f"{schema.name}: no pattern form matches {pretty(formula)}")


def instantiate_form(form: Formula, env: Mapping[str, object]) -> Node:
    """Replace metavariable markers in a pattern by the given operands.

    Plain pattern binders are renamed away from every name occurring in the
    instantiation, so the result never captures variables of the operands.
    """
    used: set[str] = set()
    for value in env.values():
        if isinstance(value, Node):
            used |= all_names(value)
        elif isinstance(value, Symbol):
            used.add(value.name)

    from .syntax import fresh_name

    def go(n: Node, bound: Mapping[str, Symbol]):
        if isinstance(n, Var):
            if _is_marker(n.name):
                return env[n.name[1:]]
            if n.name in bound:
                sym = bound[n.name]
                return Var(sym.name, sym.sort)
            return n
        if isinstance(n, RelApp) and _is_marker(n.name):
            return env[n.name[1:]]
        if isinstance(n, SVar) and _is_marker(n.name):
            return env[n.name[1:]]
        if isinstance(n, Exists):
            if _is_marker(n.var.name):
                sym = env[n.var.name[1:]]
                assert isinstance(sym, Symbol)
                return Exists(sym, go(n.body, bound))
            fresh = fresh_name(n.var.name, frozenset(used))
            used.add(fresh)
            sym = var_symbol(fresh, n.var.sort)
            return Exists(sym, go(n.body, {**bound, n.var.name: sym}))
        if isinstance(n, (Bottom, Const, SZero)):
            return n
        if isinstance(n, FunApp):
            return FunApp(n.name, tuple(go(a, bound) for a in n.args), n.sort)
        if isinstance(n, RelApp):
            return RelApp(n.name, tuple(go(a, bound) for a in n.args))
        if isinstance(n, Implies):
            return Implies(go(n.lhs, bound), go(n.rhs, bound))
        if isinstance(n, Chop):
            return Chop(go(n.lhs, bound), go(n.rhs, bound))
        if isinstance(n, Prob):
            return Prob(go(n.body, bound))
        if isinstance(n, DurationOf):
            return DurationOf(go(n.state, bound))
        if isinstance(n, DiaL):
            return DiaL(go(n.body, bound))
        if isinstance(n, DiaR):
            return DiaR(go(n.body, bound))
        if isinstance(n, SImplies):
            return SImplies(go(n.lhs, bound), go(n.rhs, bound))
        raise AssertionError(type(n).__name__)

    return go(form, {})


# ---------------------------------------------------------------------------
# The axiom catalog
# ---------------------------------------------------------------------------


def _build_catalog() -> dict[str, Schema]:
    phi, psi, chi, theta = fmeta("phi"), fmeta("psi"), fmeta("chi"), fmeta("theta")
    xd, yd, zd = tmeta("x", Sort.DUR), tmeta("y", Sort.DUR), tmeta("z", Sort.DUR)
    xp, yp, zp = tmeta("x", Sort.PROB), tmeta("y", Sort.PROB), tmeta("z", Sort.PROB)
    S, S1, S2 = smeta("S"), smeta("S1"), smeta("S2")
    bx = Symbol(_M + "x", SymbolKind.VAR, (), None)
    wd = var_symbol("w", Sort.DUR)
    wp = var_symbol("w", Sort.PROB)

    def lv(sym: Symbol) -> Var:
        return Var(sym.name, sym.sort)

    schemas = [
        _schema("A1", G_ITL,
                "(phi;psi) & !(chi;psi) => (phi & !chi; psi)   |   "
                "(phi;psi) & !(phi;chi) => (phi; psi & !chi)",
                (Implies(And(Chop(phi, psi), Not(Chop(chi, psi))),
                         Chop(And(phi, Not(chi)), psi)),
                 Implies(And(Chop(phi, psi), Not(Chop(phi, chi))),
                         Chop(phi, And(psi, Not(chi)))))),
        _schema("A2", G_ITL,
                "((phi;psi);chi) <=> (phi;(psi;chi))",
                (Iff(Chop(Chop(phi, psi), chi), Chop(phi, Chop(psi, chi))),)),
        _schema("R", G_ITL,
                "(phi;psi) => phi   |   (psi;phi) => phi     [phi rigid]",
                (Implies(Chop(phi, psi), phi),
                 Implies(Chop(psi, phi), phi)),
                side=(RigidFormula("phi"),)),
        _schema("B", G_ITL,
                "(ex x phi; psi) => ex x (phi;psi)   |   "
                "(psi; ex x phi) => ex x (psi;phi)     [x not free in psi]",
                (Implies(Chop(Exists(bx, phi), psi), Exists(bx, Chop(phi, psi))),
                 Implies(Chop(psi, Exists(bx, phi)), Exists(bx, Chop(psi, phi)))),
                side=(NotFree("x", "psi"),)),
        _schema("L1", G_ITL,
                "(l=x;phi) => !(l=x;!phi)   |   "
                "(phi; l=x & x!=inf) => !(!phi; l=x)",
                (Implies(Chop(eq(L, xd), phi), Not(Chop(eq(L, xd), Not(phi)))),
                 Implies(Chop(phi, And(eq(L, xd), Cmp("!=", xd, INF))),
                         Not(Chop(Not(phi), eq(L, xd)))))),
        _schema("L2", G_ITL,
                "l=x+y & x!=inf <=> (l=x; l=y)",
                (Iff(And(eq(L, add(xd, yd)), Cmp("!=", xd, INF)),
                     Chop(eq(L, xd), eq(L, yd))),)),
        _schema("L3", G_ITL,
                "phi => (l=0; phi)   |   phi & l!=inf => (phi; l=0)",
                (Implies(phi, Chop(eq(L, ZERO_D), phi)),
                 Implies(And(phi, Cmp("!=", L, INF)), Chop(phi, eq(L, ZERO_D))))),
        _schema("S1", G_ITL,
                "(l=x & phi; psi) => !(l=x & !phi; chi)",
                (Implies(Chop(And(eq(L, xd), phi), psi),
                         Not(Chop(And(eq(L, xd), Not(phi)), chi))),)),
        _schema("P1", G_ITL, "!(l=inf; phi)",
                (Not(Chop(eq(L, INF), phi)),)),
        _schema("P2", G_ITL, "(phi; l=inf) => l=inf",
                (Implies(Chop(phi, eq(L, INF)), eq(L, INF)),)),
        _schema("P3", G_ITL, "(phi; l!=inf) => l!=inf",
                (Implies(Chop(phi, Cmp("!=", L, INF)), Cmp("!=", L, INF)),)),
        # Durations
        _schema("D1", G_DUR, "x+(y+z) = (x+y)+z   [dur]",
                (eq(add(xd, add(yd, zd)), add(add(xd, yd), zd)),)),
        _schema("D2", G_DUR, "x+0 = x   |   0+x = x   [dur]",
                (eq(add(xd, ZERO_D), xd), eq(add(ZERO_D, xd), xd))),
        _schema("D3'", G_DUR,
                "x+y=x+z => x=inf | y=z   |   x+z=y+z => z=inf | x=y",
                (Implies(eq(add(xd, yd), add(xd, zd)),
                         Or(eq(xd, INF), eq(yd, zd))),
                 Implies(eq(add(xd, zd), add(yd, zd)),
                         Or(eq(zd, INF), eq(xd, yd))))),
        _schema("D4", G_DUR, "x+y=0 => x=0 & y=0   [dur]",
                (Implies(eq(add(xd, yd), ZERO_D),
                         And(eq(xd, ZERO_D), eq(yd, ZERO_D))),)),
        _schema("D5", G_DUR,
                "ex w (x+w=y | y+w=x)   |   ex w (w+x=y | w+y=x)   [dur]",
                (Exists(wd, Or(eq(add(xd, lv(wd)), yd), eq(add(yd, lv(wd)), xd))),
                 Exists(wd, Or(eq(add(lv(wd), xd), yd), eq(add(lv(wd), yd), xd))))),
        _schema("D6", G_DUR, "x+y=inf <=> x=inf | y=inf",
                (Iff(eq(add(xd, yd), INF), Or(eq(xd, INF), eq(yd, INF))),)),
        # Probability domain
        _schema("U1", G_PROB, "x+(y+z) = (x+y)+z   [prob]",
                (eq(add(xp, add(yp, zp)), add(add(xp, yp), zp)),)),
        _schema("U2", G_PROB, "x+y = y+x",
                (eq(add(xp, yp), add(yp, xp)),)),
        _schema("U3", G_PROB, "x+0 = x   [prob]",
                (eq(add(xp, ZERO_P), xp),)),
        _schema("U4", G_PROB, "x+y = x+z => y=z",
                (Implies(eq(add(xp, yp), add(xp, zp)), eq(yp, zp)),)),
        _schema("U5", G_PROB, "x+y=0 => x=0 & y=0   [prob]",
                (Implies(eq(add(xp, yp), ZERO_P),
                         And(eq(xp, ZERO_P), eq(yp, ZERO_P))),)),
        _schema("U6", G_PROB, "ex w (x+w=y | y+w=x)   [prob]",
                (Exists(wp, Or(eq(add(xp, lv(wp)), yp), eq(add(yp, lv(wp)), xp))),)),
        _schema("U7", G_PROB, "0 != 1",
                (Cmp("!=", ZERO_P, ONE_P),)),
        _schema("U8", G_PROB, "(x*y)*z = x*(y*z)",
                (eq(mul(mul(xp, yp), zp), mul(xp, mul(yp, zp))),)),
        _schema("U9", G_PROB, "x*y = y*x",
                (eq(mul(xp, yp), mul(yp, xp)),)),
        _schema("U10", G_PROB, "(x+y)*z = x*z + y*z",
                (eq(mul(add(xp, yp), zp), add(mul(xp, zp), mul(yp, zp))),)),
        _schema("U11", G_PROB, "x*1 = x",
                (eq(mul(xp, ONE_P), xp),)),
        _schema("U12", G_PROB, "x*y = x*z => x=0 | y=z",
                (Implies(eq(mul(xp, yp), mul(xp, zp)),
                         Or(eq(xp, ZERO_P), eq(yp, zp))),)),
        _schema("U13", G_PROB, "x=0 | ex w (x*w=z)",
                (Or(eq(xp, ZERO_P), Exists(wp, eq(mul(xp, lv(wp)), zp))),)),
        # Probabilities of formulas
        _schema("PSEMI", G_PITL,
                "(l=x; p(psi)=y) => p((l=x; psi)) = y",
                (Implies(Chop(eq(L, xd), eq(Prob(psi), yp)),
                         eq(Prob(Chop(eq(L, xd), psi)), yp)),)),
        _schema("PINF", G_PITL, "l=inf => (phi <=> p(phi)=1)",
                (Implies(eq(L, INF), Iff(phi, eq(Prob(phi), ONE_P))),)),
        _schema("PBOT", G_PITL, "p(bot) = 0",
                (eq(Prob(Bottom()), ZERO_P),)),
        _schema("PTOP", G_PITL, "p(top) = 1",
                (eq(Prob(Top()), ONE_P),)),
        _schema("PPLUS", G_PITL,
                "p(phi) + p(psi) = p(phi|psi) + p(phi&psi)",
                (eq(add(Prob(phi), Prob(psi)),
                    add(Prob(Or(phi, psi)), Prob(And(phi, psi)))),)),
        # State durations
        _schema("DC1", G_DC, "dur(0) = 0",
                (eq(DurationOf(SZero()), ZERO_D),)),
        _schema("DC2", G_DC, "dur(1) = l",
                (eq(DurationOf(s_one()), L),)),
        _schema("DC3", G_DC, "dur(S) >= 0",
                (Cmp(">=", DurationOf(S), ZERO_D),)),
        _schema("DC4", G_DC,
                "dur(S1) + dur(S2) = dur(S1|S2) + dur(S1&S2)",
                (eq(add(DurationOf(S1), DurationOf(S2)),
                    add(DurationOf(s_or(S1, S2)), DurationOf(s_and(S1, S2)))),)),
        _schema("DC5", G_DC,
                "(dur(S)=x; dur(S)=y) => dur(S) = x+y",
                (Implies(Chop(eq(DurationOf(S), xd), eq(DurationOf(S), yd)),
                         eq(DurationOf(S), add(xd, yd))),)),
        _schema("DC6", G_DC,
                "dur(S1) = dur(S2)     [S1, S2 propositionally equivalent]",
                (eq(DurationOf(S1), DurationOf(S2)),),
                side=(PropEquivStates("S1", "S2"),)),
        _schema("T1", G_DC,
                "l=0 | ([[S]];top) | ([[!S]];top)",
                (Or(Or(eq(L, ZERO_D),
                       Chop(_state_holds(S), Top())),
                    Chop(_state_holds(s_not(S)), Top())),)),
        _schema("T2", G_DC,
                "l=0 | l=inf | (top;[[S]]) | (top;[[!S]])",
                (Or(Or(Or(eq(L, ZERO_D), eq(L, INF)),
                       Chop(Top(), _state_holds(S))),
                    Chop(Top(), _state_holds(s_not(S)))),)),
        # Conditional probability bounds
        _schema("PBAR", G_GLOBAL,
                "l<=y & p((l=y & theta & p(phi)>x; top)) = 0 => "
                "p((theta & l=y; top) & phi) <= x * p((theta & l=y; top))",
                (Implies(
                    And(Cmp("<=", L, yd),
                        eq(Prob(Chop(And(And(eq(L, yd), theta),
                                         Cmp(">", Prob(phi), xp)), Top())),
                           ZERO_P)),
                    Cmp("<=",
                        Prob(And(Chop(And(theta, eq(L, yd)), Top()), phi)),
                        mul(xp, Prob(Chop(And(theta, eq(L, yd)), Top()))))),)),
        _schema("PLOW", G_GLOBAL,
                "l<=y & p((l=y & theta & p(phi)<=x; top)) = 0 => "
                "p((theta & l=y; top) & phi) >= x * p((theta & l=y; top))",
                (Implies(
                    And(Cmp("<=", L, yd),
                        eq(Prob(Chop(And(And(eq(L, yd), theta),
                                         Cmp("<=", Prob(phi), xp)), Top())),
                           ZERO_P)),
                    Cmp(">=",
                        Prob(And(Chop(And(theta, eq(L, yd)), Top()), phi)),
                        mul(xp, Prob(Chop(And(theta, eq(L, yd)), Top()))))),)),
    ]
    catalog = {s.name: s for s in schemas}
    assert len(catalog) == 45, len(catalog)
    return catalog


def _state_holds(s: StateExpr) -> Formula:
    from .syntax import StateHolds
    return StateHolds(s)


CATALOG: dict[str, Schema] = _build_catalog()


# ---------------------------------------------------------------------------
# Propositional oracle over alpha-canonical atoms
# ---------------------------------------------------------------------------

_MAX_ATOMS = 24


def _alpha_key(n: Node, depth: Mapping[str, int] = None) -> str:
    """Serialise a node, naming bound variables by binding depth.

    Alpha-variant formulas get equal keys, so the propositional oracle
    treats them as the same atom.
    """
    depth = depth or {}
    if isinstance(n, Var):
        if n.name in depth:
            return f"b{depth[n.name]}"
        return f"v:{n.name}:{n.sort.value}"
    if isinstance(n, Const):
        return f"c:{n.name}:{n.sort.value}"
    if isinstance(n, FunApp):
        args = ",".join(_alpha_key(a, depth) for a in n.args)
        return f"f:{n.name}:{n.sort.value}({args})"
    if isinstance(n, RelApp):
        args = ",".join(_alpha_key(a, depth) for a in n.args)
        return f"R:{n.name}({args})"
    if isinstance(n, Bottom):
        return "bot"
    if isinstance(n, Implies):
        return f"({_alpha_key(n.lhs, depth)}=>{_alpha_key(n.rhs, depth)})"
    if isinstance(n, Chop):
        return f"({_alpha_key(n.lhs, depth)};{_alpha_key(n.rhs, depth)})"
    if isinstance(n, Exists):
        inner = {**depth, n.var.name: len(depth)}
        return f"ex[{n.var.sort.value}]({_alpha_key(n.body, inner)})"
    if isinstance(n, Prob):
        return f"p({_alpha_key(n.body, depth)})"
    if isinstance(n, DurationOf):
        return f"dur({_alpha_key(n.state, depth)})"
    if isinstance(n, DiaL):
        return f"dl({_alpha_key(n.body, depth)})"
    if isinstance(n, DiaR):
        return f"dr({_alpha_key(n.body, depth)})"
    if isinstance(n, SZero):
        return "s0"
    if isinstance(n, SVar):
        return f"S:{n.name}"
    if isinstance(n, SImplies):
        return f"({_alpha_key(n.lhs, depth)}->{_alpha_key(n.rhs, depth)})"
    raise AssertionError(type(n).__name__)


def _skeleton(f: Formula, table: dict[str, int]):
    if isinstance(f, Bottom):
        return ("bot",)
    if isinstance(f, Implies):
        return ("imp", _skeleton(f.lhs, table), _skeleton(f.rhs, table))
    key = _alpha_key(f)
    idx = table.setdefault(key, len(table))
    return ("atom", idx)


def _column(j: int, n: int) -> int:
    mask = ((1 << (1 << j)) - 1) << (1 << j)
    width = 2 << j
    total = 1 << n
    while width < total:
        mask |= mask << width
        width <<= 1
    return mask


def _truth(skel, cols, full: int) -> int:
    if skel[0] == "bot":
        return 0
    if skel[0] == "atom":
        return cols[skel[1]]
    a = _truth(skel[1], cols, full)
    b = _truth(skel[2], cols, full)
    return (full ^ a) | b


def _prop_entails(cited: tuple[Formula, ...], conclusion: Formula) -> bool:
    table: dict[str, int] = {}
    skels = [_skeleton(f, table) for f in cited]
    goal = _skeleton(conclusion, table)
    n = len(table)
    if n > _MAX_ATOMS:
        raise MatchError(f"propositional step has {n} distinct atoms "
                         f"(limit {_MAX_ATOMS})")
    full = (1 << (1 << n)) - 1
    cols = [_column(j, n) for j in range(n)]
    ant = full
    for sk in skels:
        ant &= _truth(sk, cols, full)
    return ((full ^ ant) | _truth(goal, cols, full)) == full


def prop_tautology(f: Formula) -> bool:
    """Truth-table validity over maximal non-propositional subformulas."""
    return _prop_entails((), f)


def prop_consequence(cited: tuple[Formula, ...], f: Formula) -> bool:
    """Propositional entailment of ``f`` by ``cited`` under shared atoms."""
    return _prop_entails(tuple(cited), f)


# ---------------------------------------------------------------------------
# Equality congruence steps
# ---------------------------------------------------------------------------


def _cong_count(a: Node, b: Node, s: Term, t: Term, shifted: bool,
                bound: frozenset[Symbol], vocab: Vocabulary) -> int:
    """Number of ``s``-to-``t`` replacements turning ``a`` into ``b``.

    Raises :class:`_NoMatch` when the two nodes differ in any other way,
    when a replacement sits under an interval-shifting node with a
    non-rigid operand, or when a replacement would capture a bound variable.
    """
    if a == b:
        return 0
    if isinstance(a, Term) and a == s and b == t:
        if shifted and not (is_rigid(s, vocab) and is_rigid(t, vocab)):
            raise _NoMatch("replacement under a chop or probability term "
                           "requires rigid operands")
        if bound & (free_vars(s) | free_vars(t)):
            raise _NoMatch("replacement under a binder would capture a variable")
        return 1
    if type(a) is not type(b):
        raise _NoMatch("nodes differ beyond the replaced term")
    if isinstance(a, FunApp):
        if a.name != b.name or a.sort != b.sort or len(a.args) != len(b.args):
            raise _NoMatch("function applications differ")
        return sum(_cong_count(x, y, s, t, shifted, bound, vocab)
                   for x, y in zip(a.args, b.args))
    if isinstance(a, RelApp):
        if a.name != b.name or len(a.args) != len(b.args):
            raise _NoMatch("atoms differ")
        return sum(_cong_count(x, y, s, t, shifted, bound, vocab)
                   for x, y in zip(a.args, b.args))
    if isinstance(a, Implies):
        return (_cong_count(a.lhs, b.lhs, s, t, shifted, bound, vocab)
                + _cong_count(a.rhs, b.rhs, s, t, shifted, bound, vocab))
    if isinstance(a, Chop):
        return (_cong_count(a.lhs, b.lhs, s, t, True, bound, vocab)
                + _cong_count(a.rhs, b.rhs, s, t, True, bound, vocab))
    if isinstance(a, Exists):
        if a.var != b.var:
            raise _NoMatch("binders differ")
        return _cong_count(a.body, b.body, s, t, shifted, bound | {a.var}, vocab)
    if isinstance(a, Prob):
        return _cong_count(a.body, b.body, s, t, True, bound, vocab)
    if isinstance(a, (DiaL, DiaR)):
        return _cong_count(a.body, b.body, s, t, True, bound, vocab)
    if isinstance(a, DurationOf):
        raise _NoMatch("state expressions contain no replaceable terms")
    raise _NoMatch(f"cannot replace inside {type(a).__name__}")


# ---------------------------------------------------------------------------
# Justifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Just:
    """A parsed justification: a keyword plus its arguments."""

    kind: str
    refs: tuple[int, ...] = ()
    name: str = ""
    side: str = ""
    var: str = ""
    wth: Optional[Formula] = None
    bindings: tuple[tuple[str, object], ...] = ()


_JUST_GROUP = {
    "TAUT": G_ITL, "PROP": G_ITL, "MP": G_ITL, "GEN": G_ITL, "EXL": G_ITL,
    "EXR": G_ITL, "ALLE": G_ITL, "EQREFL": G_ITL, "EQSYM": G_ITL,
    "EQTRANS": G_ITL, "EQCONGF": G_ITL, "EQCONGR": G_ITL,
    "N": G_ITL, "MONO": G_ITL, "PLEQ": G_PITL, "PITL1": G_PITL,
}


# ---------------------------------------------------------------------------
# Registry of derived theorems and rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TheoremEntry:
    """A derived theorem schema backed by a bundled proof script."""

    name: str
    pattern: Formula
    rigid_metas: frozenset[str]
    letters: tuple[tuple[str, object], ...]
    groups: frozenset[str]
    sensitive: frozenset[str]
    script: str


@dataclass(frozen=True)
class RuleEntry:
    """A derived rule schema backed by a bundled proof script.

    The defining script lists the rule's premises under ``hypotheses:`` (in
    order) and proves the conclusion from them; citations must supply
    theorem-grade lines matching the premise patterns.
    """

    name: str
    premises: tuple[Formula, ...]
    conclusion: Formula
    side: tuple[SideCondition, ...]
    rigid_metas: frozenset[str]
    letters: tuple[tuple[str, object], ...]
    groups: frozenset[str]
    sensitive: frozenset[str]
    script: str


RegistryEntry = Union[TheoremEntry, RuleEntry]


def _thm(name: str, pattern: Formula, letters: dict, groups: frozenset,
         sensitive: frozenset, script: str) -> TheoremEntry:
    dp = desugar(pattern)
    _validate_pattern(dp)
    return TheoremEntry(name, dp, _shift_exposed_term_metas(dp),
                        tuple(sorted(letters.items())), groups, sensitive, script)


def _rule(name: str, premises: tuple[Formula, ...], conclusion: Formula,
          side: tuple, letters: dict, groups: frozenset, sensitive: frozenset,
          script: str) -> RuleEntry:
    dps = tuple(desugar(p) for p in premises)
    dc = desugar(conclusion)
    for p in dps + (dc,):
        _validate_pattern(p)
    rigid = _shift_exposed_term_metas(dc)
    for p in dps:
        rigid |= _shift_exposed_term_metas(p)
    return RuleEntry(name, dps, dc, tuple(side), rigid,
                     tuple(sorted(letters.items())), groups, sensitive, script)


def _build_registry() -> dict[str, RegistryEntry]:
    phi, psi, chi = fmeta("phi"), fmeta("psi"), fmeta("chi")
    xp, yp, up, vp = (tmeta(n, Sort.PROB) for n in "xyuv")
    xd = tmeta("x", Sort.DUR)
    A, B, C, RA = (RelApp(n, ()) for n in ("A", "B", "C", "RA"))
    vx, vy, vu, vv = (Var(n, Sort.PROB) for n in "xyuv")
    va = Var("a", Sort.DUR)
    itl = frozenset({G_ITL})
    prob = frozenset({G_ITL, G_PROB})
    dur = frozenset({G_ITL, G_DUR})
    deep = frozenset({G_PITL, G_ITL, G_PROB, G_DUR})
    arith_sens = frozenset({"z", "w", "g", "b"})
    pl = {"x": vx, "y": vy, "u": vu, "v": vv}
    dl = {"x": va}

    entries: list[RegistryEntry] = [
        _thm("ADD0L", eq(add(ZERO_P, xp), xp), {"x": vx},
             prob, arith_sens, "arith.prf"),
        _thm("SUM1R", Implies(eq(yp, ZERO_P), eq(add(xp, yp), xp)),
             {"x": vx, "y": vy}, prob, arith_sens, "arith.prf"),
        _thm("LE-REFL", Cmp("<=", xp, xp), {"x": vx},
             prob, arith_sens, "arith.prf"),
        _thm("LE-ZERO", Cmp("<=", ZERO_P, xp), {"x": vx},
             prob, arith_sens, "arith.prf"),
        _thm("LE-TRANS",
             Implies(Cmp("<=", xp, yp),
                     Implies(Cmp("<=", yp, up), Cmp("<=", xp, up))),
             {"x": vx, "y": vy, "u": vu}, prob, arith_sens, "arith.prf"),
        _thm("LE-ANTISYM",
             Implies(Cmp("<=", xp, yp), Implies(Cmp("<=", yp, xp), eq(xp, yp))),
             {"x": vx, "y": vy}, prob, arith_sens, "arith.prf"),
        _thm("LE-SUBST-L",
             Implies(eq(xp, yp), Implies(Cmp("<=", xp, up), Cmp("<=", yp, up))),
             {"x": vx, "y": vy, "u": vu}, itl, arith_sens, "arith.prf"),
        _thm("LE-SUBST-R",
             Implies(eq(xp, yp), Implies(Cmp("<=", up, xp), Cmp("<=", up, yp))),
             {"x": vx, "y": vy, "u": vu}, itl, arith_sens, "arith.prf"),
        _thm("LE-ADD",
             Implies(Cmp("<=", xp, yp),
                     Implies(Cmp("<=", up, vp),
                             Cmp("<=", add(xp, up), add(yp, vp)))),
             pl, prob, arith_sens, "arith.prf"),
        _thm("LT-LE-TRANS",
             Implies(Cmp("<", xp, yp),
                     Implies(Cmp("<=", yp, up), Cmp("<", xp, up))),
             {"x": vx, "y": vy, "u": vu}, prob, arith_sens, "arith.prf"),
        _thm("LE-INF", Cmp("<=", xd, INF), dl, dur, arith_sens, "arith.prf"),
        _thm("NEQ-INF-LT", Implies(Cmp("!=", xd, INF), Cmp("<", xd, INF)),
             dl, dur, arith_sens, "arith.prf"),
        _thm("LT-INF-NEQ", Implies(Cmp("<", xd, INF), Cmp("!=", xd, INF)),
             dl, dur, arith_sens, "arith.prf"),
        _thm("PITL2", eq(add(Prob(phi), Prob(Not(phi))), ONE_P),
             {"phi": A}, frozenset({G_PITL, G_ITL, G_PROB}),
             frozenset(), "pitl2.prf"),
        _rule("PLEQINF",
              (Implies(Or(Chop(phi, eq(L, INF)), And(phi, eq(L, INF))),
                       Implies(psi, chi)),),
              Implies(phi, Cmp("<=", Prob(psi), Prob(chi))),
              (), {"phi": A, "psi": B, "chi": C},
              deep, frozenset({"z", "a"}), "pleqinf.prf"),
        _rule("CONDZERO",
              (Implies(phi, Implies(psi, Bottom())),),
              Implies(phi, eq(Prob(psi), ZERO_P)),
              (RigidFormula("phi"),), {"phi": RA, "psi": B},
              deep, frozenset({"z"}), "condzero.prf"),
        _thm("PITL4", eq(Prob(phi), Prob(And(phi, eq(L, INF)))),
             {"phi": A}, deep, frozenset({"z"}), "pitl4.prf"),
    ]
    return {e.name: e for e in entries}


REGISTRY: dict[str, RegistryEntry] = _build_registry()

#: Bundled proof scripts in dependency order; later scripts may cite the
#: registry entries established by earlier ones.
REGISTRY_SCRIPTS: tuple[str, ...] = (
    "arith.prf", "pitl2.prf", "pleqinf.prf", "condzero.prf", "pitl4.prf",
    "pitl3.prf", "papprox2.prf",
)

_SCRIPT_ENTRIES: dict[str, tuple[str, ...]] = {
    "arith.prf": ("ADD0L", "SUM1R", "LE-REFL", "LE-ZERO", "LE-TRANS",
                  "LE-ANTISYM", "LE-SUBST-L", "LE-SUBST-R", "LE-ADD",
                  "LT-LE-TRANS", "LE-INF", "NEQ-INF-LT", "LT-INF-NEQ"),
    "pitl2.prf": ("PITL2",),
    "pleqinf.prf": ("PLEQINF",),
    "condzero.prf": ("CONDZERO",),
    "pitl4.prf": ("PITL4",),
}


# ---------------------------------------------------------------------------
# Proof files
# ---------------------------------------------------------------------------


class ProofFormatError(ValueError):
    """The proof file is malformed (unparseable, ill-sorted, bad references)."""


@dataclass(frozen=True)
class ProofLine:
    no: int
    formula: Formula          # desugared
    text: str
    just: Just


@dataclass(frozen=True)
class Proof:
    vocab: Vocabulary
    premises: tuple[tuple[str, Formula], ...]
    theorems: tuple[tuple[str, Formula], ...]
    hypotheses: tuple[tuple[str, Formula], ...]
    goal: Formula
    lines: tuple[ProofLine, ...]
    source: str = ""


_COMMENT_RE = re.compile(r"(?:^|(?<=\s))#.*$")
_LINE_RE = re.compile(r"^(\d+)\.\s+(.*)$")
_BY_RE = re.compile(r"\sBY\s")
_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9'_-]*$")


def _strip_comment(line: str) -> str:
    return _COMMENT_RE.sub("", line).rstrip()


def _retarget_zero(t: Node, sort: Sort) -> Node:
    """Re-sort the ambiguous numeral 0 toward an expected sort."""
    if isinstance(t, Const) and t.name == "0":
        return Const(t.name, sort)
    if isinstance(t, FunApp) and t.name == "+":
        return FunApp("+", tuple(_retarget_zero(a, sort) for a in t.args), sort)
    return t


def _term_meta_sorts(pat: Node) -> dict[str, Sort]:
    out: dict[str, Sort] = {}
    for sub in walk(pat):
        if isinstance(sub, Var) and _is_marker(sub.name):
            out.setdefault(sub.name[1:], sub.sort)
    return out


def _parse_bindings(text: str, kinds: Mapping[str, str], vocab: Vocabulary,
                    sorts: Mapping[str, Sort] = None
                    ) -> tuple[tuple[str, object], ...]:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ProofFormatError(f"malformed bindings {text!r}")
    body = text[1:-1].strip()
    if not body:
        return ()
    out = []
    for part in body.split(","):
        if ":=" not in part:
            raise ProofFormatError(f"malformed binding {part!r}")
        key, value = part.split(":=", 1)
        key, value = key.strip(), value.strip()
        kind = kinds.get(key, "term")
        try:
            if kind == "formula":
                node: object = desugar(parse_formula(value, vocab))
            elif kind == "binder":
                term = parse_term(value, vocab)
                if not isinstance(term, Var):
                    raise ProofFormatError(
                        f"binding for binder metavariable {key} must be a variable")
                node = var_symbol(term.name, term.sort)
            elif kind == "state":
                raise ProofFormatError(
                    f"state metavariable {key} cannot be bound explicitly")
            else:
                node = desugar(parse_term(value, vocab))
                want = (sorts or {}).get(key)
                if want is not None and term_sort(node) != want:
                    node = _retarget_zero(node, want)
        except ParseError as exc:
            raise ProofFormatError(f"binding {key}: {exc}") from exc
        out.append((key, node))
    return tuple(out)


def parse_justification(text: str, vocab: Vocabulary,
                        registry: Mapping[str, RegistryEntry] = None) -> Just:
    """Parse the justification part of a proof line."""
    registry = REGISTRY if registry is None else registry
    words = text.strip().split(None, 1)
    if not words:
        raise ProofFormatError("missing justification")
    head, rest = words[0], (words[1] if len(words) > 1 else "")

    def ints(s: str) -> tuple[int, ...]:
        try:
            return tuple(int(w) for w in s.split())
        except ValueError:
            raise ProofFormatError(f"expected line numbers, got {s!r}")

    if head in ("PREMISE", "THEOREM", "HYP"):
        name = rest.strip()
        if not _NAME_RE.match(name):
            raise ProofFormatError(f"bad assumption name {name!r}")
        return Just(head, name=name)
    if head == "AX":
        parts = rest.strip().split(None, 1)
        if not parts:
            raise ProofFormatError("AX needs a schema name")
        name = parts[0]
        if name not in CATALOG:
            raise ProofFormatError(f"unknown axiom schema {name!r}")
        bindings = ()
        if len(parts) > 1 and parts[1].strip():
            kinds: dict[str, str] = {}
            sorts: dict[str, Sort] = {}
            for form in CATALOG[name].forms:
                kinds.update(_meta_kinds(form))
                sorts.update(_term_meta_sorts(form))
            bindings = _parse_bindings(parts[1], kinds, vocab, sorts)
        return Just("AX", name=name, bindings=bindings)
    if head == "THM":
        parts = rest.strip().split(None, 1)
        if not parts:
            raise ProofFormatError("THM needs a registry name")
        name = parts[0]
        entry = registry.get(name)
        if not isinstance(entry, TheoremEntry):
            raise ProofFormatError(f"unknown registry theorem {name!r}")
        bindings = ()
        if len(parts) > 1 and parts[1].strip():
            bindings = _parse_bindings(parts[1], _meta_kinds(entry.pattern),
                                       vocab, _term_meta_sorts(entry.pattern))
        return Just("THM", name=name, bindings=bindings)
    if head == "RULE":
        parts = rest.strip().split()
        if len(parts) < 2:
            raise ProofFormatError("RULE needs a name and cited lines")
        name = parts[0]
        if not isinstance(registry.get(name), RuleEntry):
            raise ProofFormatError(f"unknown registry rule {name!r}")
        return Just("RULE", refs=ints(" ".join(parts[1:])), name=name)
    if head == "MP":
        refs = ints(rest)
        if len(refs) != 2:
            raise ProofFormatError("MP cites exactly two lines")
        return Just("MP", refs=refs)
    if head == "TAUT":
        if rest.strip():
            raise ProofFormatError("TAUT takes no arguments")
        return Just("TAUT")
    if head == "PROP":
        refs = ints(rest)
        if not refs:
            raise ProofFormatError("PROP cites at least one line")
        return Just("PROP", refs=refs)
    if head in ("N-LEFT", "N-RIGHT"):
        m = re.match(r"^(\d+)\s+WITH\s+(.*)$", rest.strip())
        if not m:
            raise ProofFormatError(f"{head} needs '<line> WITH <formula>'")
        try:
            wth = desugar(parse_formula(m.group(2), vocab))
        except ParseError as exc:
            raise ProofFormatError(str(exc)) from exc
        return Just("N", refs=(int(m.group(1)),),
                    side=head.split("-")[1].lower(), wth=wth)
    if head in ("MONO-LEFT", "MONO-RIGHT"):
        refs = ints(rest)
        if len(refs) != 1:
            raise ProofFormatError(f"{head} cites exactly one line")
        return Just("MONO", refs=refs, side=head.split("-")[1].lower())
    if head in ("PLEQ", "PITL1"):
        refs = ints(rest)
        if len(refs) != 1:
            raise ProofFormatError(f"{head} cites exactly one line")
        return Just(head, refs=refs)
    if head in ("GEN", "EXL"):
        parts = rest.strip().split()
        if len(parts) != 2:
            raise ProofFormatError(f"{head} needs '<line> <variable>'")
        return Just(head, refs=ints(parts[0]), var=parts[1])
    if head in ("EXR", "ALLE"):
        bindings = _parse_bindings(rest, {}, vocab)
        if len(bindings) != 1:
            raise ProofFormatError(f"{head} needs exactly one witness binding")
        return Just(head, bindings=bindings)
    if head in ("EQREFL", "EQSYM", "EQTRANS", "EQCONGF", "EQCONGR"):
        if rest.strip():
            raise ProofFormatError(f"{head} takes no arguments")
        return Just(head)
    raise ProofFormatError(f"unknown justification {head!r}")


def parse_proof_file(text: str, *, base_dir: Union[str, Path] = ".",
                     vocab: Optional[Vocabulary] = None,
                     registry: Mapping[str, RegistryEntry] = None,
                     source: str = "") -> Proof:
    """Parse a proof script.

    The script names its vocabulary file (resolved against ``base_dir``)
    unless one is supplied; optional ``premises:``, ``theorems:`` and
    ``hypotheses:`` sections declare named assumption formulas, ``goal:``
    states the formula the final line must establish, and numbered lines
    read ``N. <formula>  BY <justification>``.
    """
    base = Path(base_dir)
    premises: list[tuple[str, Formula]] = []
    theorems: list[tuple[str, Formula]] = []
    hypotheses: list[tuple[str, Formula]] = []
    goal: Optional[Formula] = None
    lines: list[ProofLine] = []
    section: Optional[list] = None
    seen: set[str] = set()

    def bail(lineno: int, msg: str) -> ProofFormatError:
        return ProofFormatError(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = _strip_comment(raw).strip()
        if not stripped:
            continue
        if stripped.startswith("vocab "):
            if vocab is not None:
                raise bail(lineno, "vocabulary declared twice")
            path = base / stripped[len("vocab "):].strip()
            try:
                vocab = parse_vocabulary(path.read_text())
            except OSError as exc:
                raise bail(lineno, f"cannot read vocabulary: {exc}")
            except (ParseError, VocabularyError) as exc:
                raise bail(lineno, f"bad vocabulary: {exc}")
            continue
        if stripped in ("premises:", "theorems:", "hypotheses:"):
            section = {"premises:": premises, "theorems:": theorems,
                       "hypotheses:": hypotheses}[stripped]
            continue
        if vocab is None:
            raise bail(lineno, "the vocabulary must be declared first")
        if stripped.startswith("goal:"):
            section = None
            try:
                goal = desugar(parse_formula(stripped[len("goal:"):], vocab))
                sort_check(vocab, goal)
            except (ParseError, SortError) as exc:
                raise bail(lineno, f"bad goal: {exc}")
            continue
        m = _LINE_RE.match(stripped)
        if m:
            section = None
            no = int(m.group(1))
            if no != len(lines) + 1:
                raise bail(lineno, f"expected line {len(lines) + 1}, got {no}")
            split = _BY_RE.split(m.group(2), maxsplit=1)
            if len(split) != 2:
                raise bail(lineno, "missing ' BY <justification>'")
            ftext, jtext = split
            try:
                formula = desugar(parse_formula(ftext, vocab))
                sort_check(vocab, formula)
                just = parse_justification(jtext, vocab, registry)
            except (ParseError, SortError, ProofFormatError) as exc:
                raise bail(lineno, str(exc))
            for ref in just.refs:
                if not 1 <= ref < no:
                    raise bail(lineno, f"reference {ref} does not precede line {no}")
            lines.append(ProofLine(no, formula, ftext.strip(), just))
            continue
        if section is not None and ":" in stripped:
            name, ftext = stripped.split(":", 1)
            name = name.strip()
            if not _NAME_RE.match(name):
                raise bail(lineno, f"bad assumption name {name!r}")
            if name in seen:
                raise bail(lineno, f"duplicate assumption name {name!r}")
            seen.add(name)
            try:
                formula = desugar(parse_formula(ftext, vocab))
                sort_check(vocab, formula)
            except (ParseError, SortError) as exc:
                raise bail(lineno, str(exc))
            section.append((name, formula))
            continue
        raise bail(lineno, f"cannot interpret {stripped!r}")

    if vocab is None:
        raise ProofFormatError("missing vocabulary declaration")
    if goal is None:
        raise ProofFormatError("missing goal")
    if not lines:
        raise ProofFormatError("no proof lines")
    return Proof(vocab, tuple(premises), tuple(theorems), tuple(hypotheses),
                 goal, tuple(lines), source)


def load_proof(path: Union[str, Path],
               registry: Mapping[str, RegistryEntry] = None) -> Proof:
    """Read a proof script from disk, resolving its vocabulary beside it."""
    p = Path(path)
    return parse_proof_file(p.read_text(), base_dir=p.parent,
                            registry=registry, source=str(p))


# ---------------------------------------------------------------------------
# Proof checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LineReport:
    no: int
    kind: str
    name: str
    refs: tuple[int, ...]
    groups: frozenset[str]
    premises: frozenset[str]


@dataclass(frozen=True)
class ProofVerdict:
    ok: bool
    error: Optional[tuple[int, str]]
    groups: frozenset[str]
    premises_used: frozenset[str]
    theorems_used: frozenset[str]
    hypotheses_used: frozenset[str]
    reports: tuple[LineReport, ...]

    def summary(self) -> str:
        if not self.ok:
            line, msg = self.error
            return f"REJECTED at line {line}: {msg}"
        groups = ", ".join(sorted(self.groups)) or "none"
        return f"ACCEPTED ({len(self.reports)} lines; groups: {groups})"


class _Fail(Exception):
    pass


@dataclass
class _LineState:
    formula: Formula
    premises: frozenset[str]
    groups: frozenset[str]
    refs: tuple[int, ...]


class _Checker:
    def __init__(self, proof: Proof, registry: Mapping[str, RegistryEntry],
                 entry_guard: Optional[Callable[[str, int], bool]]):
        self.proof = proof
        self.vocab = proof.vocab
        self.registry = registry
        self.entry_guard = entry_guard
        self.premises = dict(proof.premises)
        self.theorems = dict(proof.theorems)
        self.hypotheses = dict(proof.hypotheses)
        self.states: list[_LineState] = []
        self.theorems_used: set[str] = set()
        self.hypotheses_used: set[str] = set()

    # -- helpers ----------------------------------------------------------

    def _ref(self, no: int) -> _LineState:
        return self.states[no - 1]

    def _theorem_grade(self, no: int, what: str) -> _LineState:
        state = self._ref(no)
        if state.premises:
            raise _Fail(f"{what} requires a premise-free line, but line {no} "
                        f"depends on premises {sorted(state.premises)}")
        return state

    def _entry(self, name: str, no: int) -> RegistryEntry:
        entry = self.registry.get(name)
        if entry is None:
            raise _Fail(f"registry entry {name!r} is not available")
        if self.entry_guard is not None and not self.entry_guard(name, no):
            raise _Fail(f"registry entry {name!r} may not be cited yet")
        return entry

    def _check_sensitive(self, entry: RegistryEntry, env: Mapping) -> None:
        for value in env.values():
            if isinstance(value, Symbol):
                names = {value.name}
            else:
                names = {s.name for s in free_vars(value)}
            clash = names & set(entry.sensitive)
            if clash:
                raise _Fail(f"{entry.name}: operands may not mention "
                            f"{sorted(clash)} freely (used internally by its "
                            "derivation)")

    def _cross_check(self, env: Mapping, bindings, what: str) -> None:
        for key, value in bindings:
            if key not in env:
                raise _Fail(f"{what}: unknown metavariable {key!r} in bindings")
            if env[key] != value:
                raise _Fail(f"{what}: stated binding for {key} does not match "
                            "the formula")

    # -- handlers ---------------------------------------------------------

    def check_line(self, line: ProofLine) -> _LineState:
        cur = line.formula
        just = line.just
        kind = just.kind
        premset: frozenset[str] = frozenset()
        groups: frozenset[str] = frozenset()

        if kind == "PREMISE":
            expected = self.premises.get(just.name)
            if expected is None:
                raise _Fail(f"no premise named {just.name!r}")
            if cur != expected:
                raise _Fail(f"line does not restate premise {just.name!r}")
            premset = frozenset({just.name})
        elif kind == "THEOREM":
            expected = self.theorems.get(just.name)
            if expected is None:
                raise _Fail(f"no theorem assumption named {just.name!r}")
            if cur != expected:
                raise _Fail(f"line does not restate theorem {just.name!r}")
            self.theorems_used.add(just.name)
        elif kind == "HYP":
            expected = self.hypotheses.get(just.name)
            if expected is None:
                raise _Fail(f"no hypothesis named {just.name!r}")
            if cur != expected:
                raise _Fail(f"line does not restate hypothesis {just.name!r}")
            self.hypotheses_used.add(just.name)
        elif kind == "AX":
            schema = CATALOG[just.name]
            try:
                env = match_schema(schema, cur, self.vocab)
            except MatchError as exc:
                raise _Fail(str(exc))
            self._cross_check(env, just.bindings, f"AX {just.name}")
            groups = frozenset({schema.group})
        elif kind == "TAUT":
            try:
                if not prop_tautology(cur):
                    raise _Fail("not a propositional tautology")
            except MatchError as exc:
                raise _Fail(str(exc))
            groups = frozenset({G_ITL})
        elif kind == "PROP":
            cited = tuple(self._ref(r) for r in just.refs)
            try:
                if not prop_consequence(tuple(s.formula for s in cited), cur):
                    raise _Fail("not a propositional consequence of the cited lines")
            except MatchError as exc:
                raise _Fail(str(exc))
            for s in cited:
                premset |= s.premises
                groups |= s.groups
            groups |= {G_ITL}
        elif kind == "MP":
            ai, aj = just.refs
            si, sj = self._ref(ai), self._ref(aj)
            if sj.formula != Implies(si.formula, cur):
                raise _Fail(f"line {aj} is not 'line {ai} => this line'")
            premset = si.premises | sj.premises
            groups = si.groups | sj.groups | {G_ITL}
        elif kind == "N":
            state = self._theorem_grade(just.refs[0], "necessitation")
            fd = state.formula
            if just.side == "left":
                expected = Implies(Chop(Implies(fd, Bottom()), just.wth), Bottom())
            else:
                expected = Implies(Chop(just.wth, Implies(fd, Bottom())), Bottom())
            if cur != expected:
                raise _Fail("line is not the stated necessitation of the cited line")
            groups = state.groups | {G_ITL}
        elif kind == "MONO":
            state = self._theorem_grade(just.refs[0], "monotonicity")
            f = state.formula
            if not isinstance(f, Implies):
                raise _Fail("monotonicity needs an implication to lift")
            if not (isinstance(cur, Implies) and isinstance(cur.lhs, Chop)
                    and isinstance(cur.rhs, Chop)):
                raise _Fail("conclusion must relate two chops")
            a, b = cur.lhs, cur.rhs
            if just.side == "left":
                ok = (a.lhs == f.lhs and b.lhs == f.rhs and a.rhs == b.rhs)
            else:
                ok = (a.rhs == f.lhs and b.rhs == f.rhs and a.lhs == b.lhs)
            if not ok:
                raise _Fail("conclusion does not lift the cited implication "
                            f"through the {just.side} side of a chop")
            groups = state.groups | {G_ITL}
        elif kind == "PLEQ":
            state = self._theorem_grade(just.refs[0], "probability comparison")
            f = state.formula
            if not (isinstance(f, Implies) and isinstance(f.lhs, Chop)
                    and f.lhs.rhs == eq(L, INF) and isinstance(f.rhs, Implies)):
                raise _Fail("cited line must read '(phi; l=inf) => (psi => chi)'")
            phi, psi, chi = f.lhs.lhs, f.rhs.lhs, f.rhs.rhs
            expected = desugar(Implies(And(phi, Cmp("<", L, INF)),
                                       Cmp("<=", Prob(psi), Prob(chi))))
            if cur != expected:
                raise _Fail("conclusion does not match the cited line")
            groups = state.groups | {G_PITL}
        elif kind == "PITL1":
            state = self._theorem_grade(just.refs[0], "probability congruence")
            if not (isinstance(cur, RelApp) and cur.name == "="
                    and len(cur.args) == 2
                    and isinstance(cur.args[0], Prob)
                    and isinstance(cur.args[1], Prob)):
                raise _Fail("conclusion must equate two probability terms")
            a, b = cur.args[0].body, cur.args[1].body
            if state.formula != desugar(Iff(a, b)):
                raise _Fail("cited line is not the equivalence of the two bodies")
            groups = state.groups | {G_PITL}
        elif kind == "GEN":
            state = self._theorem_grade(just.refs[0], "generalisation")
            sym = self._var(just.var)
            expected = Implies(Exists(sym, Implies(state.formula, Bottom())),
                               Bottom())
            if cur != expected:
                raise _Fail(f"line is not the universal closure over {just.var}")
            groups = state.groups | {G_ITL}
        elif kind == "EXL":
            state = self._ref(just.refs[0])
            f = state.formula
            if not isinstance(f, Implies):
                raise _Fail("the cited line must be an implication")
            if not (isinstance(cur, Implies) and isinstance(cur.lhs, Exists)):
                raise _Fail("conclusion must existentially close the antecedent")
            sym = cur.lhs.var
            if sym.name != just.var:
                raise _Fail(f"stated variable {just.var} differs from the binder")
            if cur.lhs.body != f.lhs or cur.rhs != f.rhs:
                raise _Fail("conclusion does not close the cited implication")
            if var_symbol(sym.name, sym.sort) in free_vars(f.rhs):
                raise _Fail(f"{sym.name} occurs free in the consequent")
            for name in state.premises:
                if var_symbol(sym.name, sym.sort) in free_vars(self.premises[name]):
                    raise _Fail(f"{sym.name} occurs free in premise {name!r}")
            premset = state.premises
            groups = state.groups | {G_ITL}
        elif kind == "EXR":
            if not (isinstance(cur, Implies) and isinstance(cur.rhs, Exists)):
                raise _Fail("conclusion must read 'phi[t/x] => ex x phi'")
            sym, body = cur.rhs.var, cur.rhs.body
            key, term = just.bindings[0]
            if key != sym.name:
                raise _Fail(f"witness binding names {key!r}, binder is {sym.name!r}")
            if term_sort(term) != sym.sort:
                term = _retarget_zero(term, sym.sort)
            if term_sort(term) != sym.sort:
                raise _Fail("witness sort differs from the binder sort")
            try:
                inst = substitute(body, sym, term, self.vocab)
            except SubstitutionError as exc:
                raise _Fail(f"witness is not admissible: {exc}")
            if cur.lhs != inst:
                raise _Fail("antecedent is not the witnessed body")
            groups = frozenset({G_ITL})
        elif kind == "ALLE":
            shape = (isinstance(cur, Implies) and isinstance(cur.lhs, Implies)
                     and isinstance(cur.lhs.lhs, Exists)
                     and cur.lhs.rhs == Bottom()
                     and isinstance(cur.lhs.lhs.body, Implies)
                     and cur.lhs.lhs.body.rhs == Bottom())
            if not shape:
                raise _Fail("conclusion must read 'all x phi => phi[t/x]'")
            sym = cur.lhs.lhs.var
            body = cur.lhs.lhs.body.lhs
            key, term = just.bindings[0]
            if key != sym.name:
                raise _Fail(f"witness binding names {key!r}, binder is {sym.name!r}")
            if term_sort(term) != sym.sort:
                term = _retarget_zero(term, sym.sort)
            if term_sort(term) != sym.sort:
                raise _Fail("witness sort differs from the binder sort")
            try:
                inst = substitute(body, sym, term, self.vocab)
            except SubstitutionError as exc:
                raise _Fail(f"witness is not admissible: {exc}")
            if cur.rhs != inst:
                raise _Fail("consequent is not the instantiated body")
            groups = frozenset({G_ITL})
        elif kind == "EQREFL":
            if not (isinstance(cur, RelApp) and cur.name == "="
                    and cur.args[0] == cur.args[1]):
                raise _Fail("line must equate a term with itself")
            groups = frozenset({G_ITL})
        elif kind == "EQSYM":
            shape = (isinstance(cur, Implies)
                     and _is_eq(cur.lhs) and _is_eq(cur.rhs)
                     and cur.lhs.args[0] == cur.rhs.args[1]
                     and cur.lhs.args[1] == cur.rhs.args[0])
            if not shape:
                raise _Fail("line must read 's=t => t=s'")
            groups = frozenset({G_ITL})
        elif kind == "EQTRANS":
            shape = (isinstance(cur, Implies) and _is_eq(cur.lhs)
                     and isinstance(cur.rhs, Implies)
                     and _is_eq(cur.rhs.lhs) and _is_eq(cur.rhs.rhs)
                     and cur.lhs.args[1] == cur.rhs.lhs.args[0]
                     and cur.rhs.rhs.args[0] == cur.lhs.args[0]
                     and cur.rhs.rhs.args[1] == cur.rhs.lhs.args[1])
            if not shape:
                raise _Fail("line must read 's=t => (t=u => s=u)'")
            groups = frozenset({G_ITL})
        elif kind == "EQCONGF":
            if not (isinstance(cur, Implies) and _is_eq(cur.lhs)
                    and _is_eq(cur.rhs)):
                raise _Fail("line must read 's=t => a=b'")
            s, t = cur.lhs.args
            a, b = cur.rhs.args
            try:
                count = _cong_count(a, b, s, t, False, frozenset(), self.vocab)
            except _NoMatch as exc:
                raise _Fail(f"not a congruence step: {exc}")
            if count < 1:
                raise _Fail("no occurrence was replaced")
            groups = frozenset({G_ITL})
        elif kind == "EQCONGR":
            shape = (isinstance(cur, Implies) and _is_eq(cur.lhs)
                     and isinstance(cur.rhs, Implies)
                     and isinstance(cur.rhs.lhs, Implies)
                     and cur.rhs.rhs == Bottom()
                     and isinstance(cur.rhs.lhs.lhs, Implies)
                     and isinstance(cur.rhs.lhs.rhs, Implies)
                     and cur.rhs.lhs.rhs.rhs == Bottom()
                     and isinstance(cur.rhs.lhs.rhs.lhs, Implies))
            if not shape:
                raise _Fail("line must read 's=t => (A <=> B)'")
            s, t = cur.lhs.args
            fwd = cur.rhs.lhs.lhs
            bwd = cur.rhs.lhs.rhs.lhs
            a, b = fwd.lhs, fwd.rhs
            if bwd != Implies(b, a):
                raise _Fail("the two directions of the equivalence disagree")
            try:
                count = _cong_count(a, b, s, t, False, frozenset(), self.vocab)
            except _NoMatch as exc:
                raise _Fail(f"not a congruence step: {exc}")
            if count < 1:
                raise _Fail("no occurrence was replaced")
            groups = frozenset({G_ITL})
        elif kind == "THM":
            entry = self._entry(just.name, line.no)
            assert isinstance(entry, TheoremEntry)
            schema = Schema(entry.name, "derived", (entry.pattern,), (),
                            entry.name, (entry.rigid_metas,))
            try:
                env = match_schema(schema, cur, self.vocab)
            except MatchError as exc:
                raise _Fail(str(exc))
            self._check_sensitive(entry, env)
            self._cross_check(env, just.bindings, f"THM {just.name}")
            groups = entry.groups
        elif kind == "RULE":
            entry = self._entry(just.name, line.no)
            assert isinstance(entry, RuleEntry)
            if len(just.refs) != len(entry.premises):
                raise _Fail(f"{entry.name} takes {len(entry.premises)} cited "
                            f"lines, got {len(just.refs)}")
            cited = [self._theorem_grade(r, f"rule {entry.name}")
                     for r in just.refs]
            env: dict = {}
            try:
                _m(entry.conclusion, cur, (), env, self.vocab)
            except _NoMatch:
                env = {}
                try:
                    _m(entry.conclusion, Implies(_top_d(), cur), (), env,
                       self.vocab)
                except _NoMatch:
                    raise _Fail(f"line does not match the conclusion of "
                                f"{entry.name}")
            try:
                for pat, st in zip(entry.premises, cited):
                    _m(pat, st.formula, (), env, self.vocab)
            except _NoMatch as exc:
                raise _Fail(f"cited lines do not match the premises of "
                            f"{entry.name}: {exc}")
            for meta in entry.rigid_metas:
                if not is_rigid(env[meta], self.vocab):
                    raise _Fail(f"{entry.name}: {meta} admits only rigid terms")
            for cond in entry.side:
                if isinstance(cond, RigidFormula):
                    if not is_rigid(env[cond.meta], self.vocab):
                        raise _Fail(f"{entry.name}: {cond.meta} must be rigid")
                else:
                    raise _Fail(f"unsupported rule side condition {cond}")
            self._check_sensitive(entry, env)
            groups = entry.groups
            for st in cited:
                groups |= st.groups
        else:
            raise _Fail(f"unhandled justification {kind!r}")

        return _LineState(cur, premset, groups, just.refs)

    def _var(self, name: str) -> Symbol:
        for sym in self.vocab.lookup(name):
            if sym.kind == SymbolKind.VAR:
                return sym
        raise _Fail(f"{name!r} is not a declared variable")

    def run(self) -> ProofVerdict:
        reports: list[LineReport] = []
        for line in self.proof.lines:
            try:
                state = self.check_line(line)
            except _Fail as exc:
                return ProofVerdict(
                    False, (line.no, str(exc)), frozenset(), frozenset(),
                    frozenset(), frozenset(), tuple(reports))
            self.states.append(state)
            reports.append(LineReport(line.no, line.just.kind, line.just.name,
                                      line.just.refs, state.groups,
                                      state.premises))
        last = self.proof.lines[-1]
        if last.formula != self.proof.goal:
            return ProofVerdict(
                False, (last.no, "final line does not establish the goal"),
                frozenset(), frozenset(), frozenset(), frozenset(),
                tuple(reports))
        groups: frozenset[str] = frozenset()
        for st in self.states:
            groups |= st.groups
        return ProofVerdict(
            True, None, groups, self.states[-1].premises,
            frozenset(self.theorems_used), frozenset(self.hypotheses_used),
            tuple(reports))


def _is_eq(f: Node) -> bool:
    return isinstance(f, RelApp) and f.name == "=" and len(f.args) == 2


def check_proof(proof: Proof, *, registry: Mapping[str, RegistryEntry] = None,
                entry_guard: Optional[Callable[[str, int], bool]] = None
                ) -> ProofVerdict:
    """Check every line of a proof script and the goal.

    Returns a verdict with the first failing line (if any), the axiom groups
    used, and which premises/theorem assumptions/hypotheses were consumed.
    """
    registry = REGISTRY if registry is None else registry
    return _Checker(proof, registry, entry_guard).run()


# ---------------------------------------------------------------------------
# Registry re-derivation
# ---------------------------------------------------------------------------


class RegistryError(ValueError):
    """A bundled script fails to re-establish its registry entries."""


def _cone(reports: tuple[LineReport, ...], anchor: int) -> frozenset[str]:
    groups: set[str] = set()
    todo = [anchor]
    seen: set[int] = set()
    while todo:
        no = todo.pop()
        if no in seen:
            continue
        seen.add(no)
        rep = reports[no - 1]
        groups |= rep.groups
        todo.extend(rep.refs)
    return frozenset(groups)


def _script_sensitive(proof: Proof) -> frozenset[str]:
    names: set[str] = set()
    formulas = [ln.formula for ln in proof.lines]
    formulas += [f for _n, f in proof.premises + proof.theorems + proof.hypotheses]
    formulas.append(proof.goal)
    for f in formulas:
        for sub in walk(f):
            if isinstance(sub, Exists):
                names.add(sub.var.name)
    for ln in proof.lines:
        if ln.just.kind in ("EXL", "GEN"):
            names.add(ln.just.var)
    return frozenset(names)


def check_registry(scripts_dir: Union[str, Path],
                   log: Optional[list] = None) -> list[str]:
    """Re-derive every registry entry from the bundled scripts.

    Scripts are checked in dependency order with only the entries already
    re-established available for citation; each entry's anchor line, groups
    and sensitive-variable set are verified against the shipped records.
    Returns human-readable report lines; raises :class:`RegistryError` on
    any failure.
    """
    base = Path(scripts_dir)
    out: list[str] = []
    allowed: dict[str, RegistryEntry] = {}
    for script in REGISTRY_SCRIPTS:
        path = base / script
        proof = load_proof(path)
        names = _SCRIPT_ENTRIES.get(script, ())
        anchors: dict[str, int] = {}
        for nm in names:
            entry = REGISTRY[nm]
            if isinstance(entry, TheoremEntry):
                target = _alpha_key(
                    instantiate_form(entry.pattern, dict(entry.letters)))
                for ln in proof.lines:
                    if _alpha_key(ln.formula) == target:
                        anchors[nm] = ln.no
                        break
                else:
                    raise RegistryError(f"{script}: no line establishes {nm}")
            else:
                target = instantiate_form(entry.conclusion, dict(entry.letters))
                if _alpha_key(proof.goal) != _alpha_key(target):
                    raise RegistryError(f"{script}: goal is not the conclusion "
                                        f"of {nm}")
                hyp_keys = [_alpha_key(f) for _n, f in proof.hypotheses]
                want = [_alpha_key(instantiate_form(p, dict(entry.letters)))
                        for p in entry.premises]
                if hyp_keys != want:
                    raise RegistryError(f"{script}: hypotheses do not state the "
                                        f"premises of {nm}")
                anchors[nm] = len(proof.lines)

        local = dict(allowed)
        for nm in names:
            local[nm] = REGISTRY[nm]

        def guard(name: str, line_no: int) -> bool:
            if name in anchors:
                return anchors[name] < line_no
            return name in allowed

        verdict = check_proof(proof, registry=local, entry_guard=guard)
        if not verdict.ok:
            line, msg = verdict.error
            raise RegistryError(f"{script}: rejected at line {line}: {msg}")
        if verdict.premises_used:
            raise RegistryError(f"{script}: goal depends on plain premises")
        sens = _script_sensitive(proof)
        for nm in names:
            entry = REGISTRY[nm]
            if entry.script != script:
                raise RegistryError(f"{nm}: recorded script {entry.script!r} "
                                    f"does not match {script!r}")
            if entry.sensitive != sens:
                raise RegistryError(
                    f"{nm}: recorded sensitive variables {sorted(entry.sensitive)} "
                    f"differ from the script's {sorted(sens)}")
            cone = _cone(verdict.reports, anchors[nm])
            if isinstance(entry, RuleEntry):
                cone = verdict.groups
            if cone != entry.groups:
                raise RegistryError(
                    f"{nm}: recorded groups {sorted(entry.groups)} differ from "
                    f"the derivation's {sorted(cone)}")
            allowed[nm] = entry
        out.append(f"{script}: {verdict.summary()}")
        if log is not None:
            log.append((script, verdict))
    return out
