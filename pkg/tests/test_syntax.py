"""Structural operations on the AST: desugaring, substitution, sorts, rigidity."""

import pytest
from hypothesis import given, settings, strategies as st

from pitl.gen import FormulaGen, standard_vocabulary
from pitl.syntax import (
    And, ArityMismatch, Bottom, Box, CaptureError, Chop, Cmp, Const,
    Diamond, DurationOf,
    Exists, FlexibleUnderChop, Forall, FunApp, Iff, Implies, INF, L, Mu, Not,
    ONE_P, Or, Prob, RelApp, SImplies, SVar, SZero, Sort, SortMismatch,
    StateHolds, Symbol, SymbolKind, Top, UnknownSymbol, Var, Vocabulary,
    VocabularyError, ZERO_D, ZERO_P, all_names, desugar, eq, free_vars,
    is_core, is_rigid, le_formula, prob_height, s_and, s_not, s_one, s_or,
    sort_check, substitute, var_symbol, walk,
)

VOCAB = standard_vocabulary()
X = Var("x", Sort.DUR)
Y = Var("y", Sort.DUR)
W = Var("w", Sort.PROB)
XS = var_symbol("x", Sort.DUR)
WS = var_symbol("w", Sort.PROB)


def gen_formulas(seed, n, depth=3, **kw):
    g = FormulaGen(seed, **kw)
    return [g.formula(depth) for _ in range(n)]


# ---------------------------------------------------------------------------
# Vocabulary
# ---------------------------------------------------------------------------


def test_vocabulary_builtin_overloads():
    v = Vocabulary()
    assert {s.sort for s in v.lookup("0")} == {Sort.DUR, Sort.PROB}
    assert [s.sort for s in v.lookup("1")] == [Sort.PROB]
    assert [s.sort for s in v.lookup("inf")] == [Sort.DUR]
    assert len(v.lookup("+")) == 2 and len(v.lookup("=")) == 2
    assert v.is_flexible_name("l") and not v.is_flexible_name("inf")


def test_vocabulary_reserved_and_duplicates():
    v = Vocabulary()
    with pytest.raises(VocabularyError):
        v.declare(Symbol("inf", SymbolKind.RIGID_CONST, (), Sort.DUR))
    with pytest.raises(VocabularyError):
        v.declare(Symbol("dia", SymbolKind.VAR, (), Sort.DUR))
    v.declare(Symbol("c", SymbolKind.RIGID_CONST, (), Sort.DUR))
    with pytest.raises(VocabularyError):
        v.declare(Symbol("c", SymbolKind.VAR, (), Sort.DUR))


# ---------------------------------------------------------------------------
# Desugaring: pinned expansions
# ---------------------------------------------------------------------------


def nd(f):
    return Implies(f, Bottom())


def test_desugar_boolean_layer():
    a, b = RelApp("base", ()), Bottom()
    assert desugar(Top()) == Implies(Bottom(), Bottom())
    assert desugar(Not(a)) == nd(a)
    assert desugar(And(a, b)) == nd(Implies(a, Implies(b, Bottom())))
    assert desugar(Or(a, b)) == Implies(nd(a), b)
    assert desugar(Iff(a, b)) == nd(Implies(Implies(a, b), Implies(Implies(b, a), Bottom())))


def test_desugar_quantifiers_and_modalities():
    a = RelApp("base", ())
    top = Implies(Bottom(), Bottom())
    assert desugar(Forall(XS, a)) == nd(Exists(XS, nd(a)))
    assert desugar(Diamond(a)) == Implies(nd(Chop(top, Chop(a, top))), Chop(top, a))
    box = desugar(Box(a))
    assert box == nd(desugar(Diamond(nd(a))))


def test_desugar_state_atom_operand_order():
    s = SVar("P")
    got = desugar(StateHolds(s))
    want = nd(Implies(eq(DurationOf(s), L), Implies(nd(eq(L, ZERO_D)), Bottom())))
    assert got == want


def test_desugar_comparisons():
    z = Var("z", Sort.DUR)
    le = Exists(var_symbol("z", Sort.DUR), eq(FunApp("+", (X, z), Sort.DUR), Y))
    assert desugar(Cmp("<=", X, Y)) == le
    assert desugar(Cmp(">=", Y, X)) == le
    assert desugar(Cmp("<", Y, X)) == nd(le)  # y < x  ==  not (x <= y)... mirrored
    assert desugar(Cmp(">", X, Y)) == nd(le)
    assert desugar(Cmp("!=", X, Y)) == nd(eq(X, Y))


def test_desugar_le_binder_avoids_operand_names():
    z = Var("z", Sort.DUR)
    f = Cmp("<=", z, Y)
    got = desugar(f)
    binder = got.var
    assert binder.name == "z#1"
    assert got == Exists(var_symbol("z#1", Sort.DUR),
                         eq(FunApp("+", (z, Var("z#1", Sort.DUR)), Sort.DUR), Y))


def test_desugar_identical_comparisons_share_binder():
    a = Cmp("<=", Prob(RelApp("base", ())), W)
    b = Cmp("<=", Prob(RelApp("base", ())), W)
    assert desugar(a) == desugar(b)
    # and the strict form is literally the negation of the weak form
    assert desugar(Cmp(">", Prob(RelApp("base", ())), W)) == nd(desugar(a))


def test_desugar_mu():
    body = RelApp("base", ())
    got = desugar(Mu(body, X))
    top = Implies(Bottom(), Bottom())
    want = Prob(Chop(nd(Implies(body, Implies(eq(L, X), Bottom()))), top))
    assert got == want
    assert prob_height(got) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_desugar_idempotent_and_core(seed):
    for f in gen_formulas(seed, 3, depth=3, allow_nl=True):
        d = desugar(f)
        assert desugar(d) == d
        assert is_core(d)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_desugar_preserves_prob_height_without_mu(seed):
    g = FormulaGen(seed)
    for _ in range(3):
        f = g.formula(3)
        if any(isinstance(s, Mu) for s in walk(f)):
            continue
        assert prob_height(desugar(f)) == prob_height(f)


# ---------------------------------------------------------------------------
# free_vars / all_names / rigidity / prob_height
# ---------------------------------------------------------------------------


def test_free_vars_binding():
    f = Exists(XS, eq(FunApp("+", (X, Y), Sort.DUR), X))
    assert free_vars(f) == {var_symbol("y", Sort.DUR)}
    assert free_vars(Forall(var_symbol("y", Sort.DUR), f)) == frozenset()
    assert free_vars(Prob(eq(X, Y))) == {XS, var_symbol("y", Sort.DUR)}


def test_all_names_includes_binders_and_applied():
    f = Exists(XS, RelApp("R", (FunApp("f", (Y, Y), Sort.DUR), Const("c", Sort.DUR))))
    assert {"x", "y", "R", "f", "c"} <= set(all_names(f))


def test_is_rigid():
    assert not is_rigid(L, VOCAB)
    assert not is_rigid(DurationOf(SVar("P")), VOCAB)
    assert not is_rigid(StateHolds(SVar("P")), VOCAB)
    assert not is_rigid(Const("k", Sort.PROB), VOCAB)  # flexible constant
    assert is_rigid(eq(X, INF), VOCAB)
    assert is_rigid(Chop(Bottom(), Top()), VOCAB)
    # p(phi) is rigid exactly when phi is
    assert is_rigid(Prob(eq(X, Y)), VOCAB)
    assert not is_rigid(Prob(eq(L, X)), VOCAB)


def test_prob_height():
    assert prob_height(eq(X, Y)) == 0
    assert prob_height(eq(Prob(Bottom()), W)) == 1
    nested = eq(Prob(eq(Prob(Bottom()), ONE_P)), W)
    assert prob_height(nested) == 2
    assert prob_height(Mu(eq(Prob(Bottom()), W), X)) == 2


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------


def test_substitute_basic():
    f = eq(FunApp("+", (X, Y), Sort.DUR), X)
    got = substitute(f, XS, Const("c", Sort.DUR), VOCAB)
    c = Const("c", Sort.DUR)
    assert got == eq(FunApp("+", (c, Y), Sort.DUR), c)


def test_substitute_skips_bound_occurrences():
    f = And(eq(X, Y), Exists(XS, eq(X, ZERO_D)))
    got = substitute(f, XS, Y, VOCAB)
    assert got == And(eq(Y, Y), Exists(XS, eq(X, ZERO_D)))


def test_substitute_capture():
    f = Exists(var_symbol("y", Sort.DUR), eq(X, Y))
    with pytest.raises(CaptureError):
        substitute(f, XS, FunApp("+", (Y, Y), Sort.DUR), VOCAB)


def test_substitute_flexible_under_prob_rejected():
    # [l/x] (p(l = x) = 1 & x = 0) is refused: x occurs below p(...)
    f = And(eq(Prob(eq(L, X)), ONE_P), eq(X, ZERO_D))
    with pytest.raises(FlexibleUnderChop):
        substitute(f, XS, L, VOCAB)


def test_substitute_flexible_under_chop_rejected():
    f = Chop(eq(X, ZERO_D), Top())
    with pytest.raises(FlexibleUnderChop):
        substitute(f, XS, L, VOCAB)


def test_substitute_flexible_outside_shifting_context_allowed():
    # w only occurs outside p(...): a flexible witness is fine
    f = eq(FunApp("+", (Prob(RelApp("base", ())), W), Sort.PROB), ONE_P)
    witness = Prob(Not(RelApp("base", ())))
    got = substitute(f, WS, witness, VOCAB)
    assert got == eq(FunApp("+", (Prob(RelApp("base", ())), witness), Sort.PROB), ONE_P)


def test_substitute_rigid_under_chop_allowed():
    f = Chop(eq(X, ZERO_D), Top())
    got = substitute(f, XS, INF, VOCAB)
    assert got == Chop(eq(INF, ZERO_D), Top())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_substitute_identity(seed):
    for f in gen_formulas(seed, 3):
        assert substitute(f, XS, X, VOCAB) == f


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_substitute_free_var_law(seed):
    t = Const("c", Sort.DUR)
    for f in gen_formulas(seed, 3):
        if XS not in free_vars(f):
            continue
        got = substitute(f, XS, t, VOCAB)
        assert XS not in free_vars(got)
        assert free_vars(got) == (free_vars(f) - {XS}) | free_vars(t)


# ---------------------------------------------------------------------------
# Sort checking
# ---------------------------------------------------------------------------


def test_sort_check_accepts_terms_and_formulas():
    assert sort_check(VOCAB, FunApp("+", (X, INF), Sort.DUR)) == Sort.DUR
    assert sort_check(VOCAB, Prob(StateHolds(SVar("P")))) == Sort.PROB
    assert sort_check(VOCAB, Cmp("<=", W, ONE_P)) is None


def test_sort_check_cross_sort_equality():
    with pytest.raises(SortMismatch) as e:
        sort_check(VOCAB, eq(X, W))
    assert e.value.path == (1,)


def test_sort_check_arity_mismatch():
    with pytest.raises(ArityMismatch):
        sort_check(VOCAB, RelApp("R", (X,)))
    with pytest.raises(ArityMismatch):
        sort_check(VOCAB, eq(FunApp("f", (X,), Sort.DUR), X))


def test_sort_check_unknown_symbol():
    with pytest.raises(UnknownSymbol):
        sort_check(VOCAB, RelApp("mystery", ()))
    with pytest.raises(UnknownSymbol):
        sort_check(VOCAB, eq(Const("ghost", Sort.DUR), X))
    with pytest.raises(UnknownSymbol):
        sort_check(VOCAB, DurationOf(SVar("missing")))


def test_sort_check_wrong_numeral_sort():
    with pytest.raises(SortMismatch):
        sort_check(VOCAB, eq(Const("1", Sort.DUR), X))
    with pytest.raises(SortMismatch):
        sort_check(VOCAB, eq(FunApp("+", (W, X), Sort.PROB), W))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_sort_check_accepts_generator_output(seed):
    for f in gen_formulas(seed, 3, allow_nl=True):
        assert sort_check(VOCAB, f) is None
        assert sort_check(VOCAB, desugar(f)) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_sort_check_rejects_ill_typed(seed):
    g = FormulaGen(seed)
    for kind in FormulaGen.ILL_TYPED_KINDS:
        with pytest.raises((UnknownSymbol, ArityMismatch, SortMismatch)):
            sort_check(VOCAB, g.ill_typed(2, kind))


# ---------------------------------------------------------------------------
# State expression factories
# ---------------------------------------------------------------------------


def test_state_factories_expand():
    p, s = SVar("P"), SVar("S")
    assert s_not(p) == SImplies(p, SZero())
    assert s_one() == SImplies(SZero(), SZero())
    assert s_or(p, s) == SImplies(SImplies(p, SZero()), s)
    assert s_and(p, s) == SImplies(SImplies(p, SImplies(s, SZero())), SZero())
