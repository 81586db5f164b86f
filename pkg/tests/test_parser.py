"""Concrete syntax: tokenizing, parsing, printing and their round trip."""

import pytest
from hypothesis import given, settings, strategies as st

from pitl.gen import FormulaGen, standard_vocabulary
from pitl.parser import (
    ParseError, parse_formula, parse_formula_file, parse_term,
    parse_vocabulary, pretty, tokenize,
)
from pitl.syntax import (
    And, Bottom, Chop, Cmp, Const, DiaL, Diamond, DurationOf, Exists,
    Forall, FunApp, Iff, Implies, Mu, Not, Or, Prob, RelApp, SImplies, SVar,
    SZero, Sort, StateHolds, Top, Var, desugar, eq, s_not, sort_check,
    var_symbol,
)

VOCAB = standard_vocabulary()
X = Var("x", Sort.DUR)
Y = Var("y", Sort.DUR)
W = Var("w", Sort.PROB)


def rt(text):
    return parse_formula(text, VOCAB)


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------


def test_tokenize_fresh_suffix_vs_comment():
    toks = tokenize("z#1 + z")
    assert [t.value for t in toks[:-1]] == ["z#1", "+", "z"]
    toks = tokenize("z #1 + z")  # '#' after a break starts a comment
    assert [t.value for t in toks[:-1]] == ["z"]
    assert [t.value for t in tokenize("x # trailing\n+ y")[:-1]] == ["x", "+", "y"]


def test_tokenize_multichar_operators():
    assert [t.value for t in tokenize("<=> => <= >= != [[ ]]")[:-1]] == [
        "<=>", "=>", "<=", ">=", "!=", "[[", "]]"]


# ---------------------------------------------------------------------------
# Parsing: structure pins
# ---------------------------------------------------------------------------


def test_parse_precedence():
    f = rt("x = 0 & bot => top | base")
    assert f == Implies(And(eq(X, Const("0", Sort.DUR)), Bottom()),
                        Or(Top(), RelApp("base", ())))


def test_parse_implication_right_assoc():
    assert rt("bot => top => bot") == Implies(Bottom(), Implies(Top(), Bottom()))


def test_parse_and_left_assoc():
    assert rt("bot & top & base") == And(And(Bottom(), Top()), RelApp("base", ()))


def test_parse_chop_group():
    f = rt("(bot ; top ; base)")
    assert f == Chop(Bottom(), Chop(Top(), RelApp("base", ())))
    g = rt("((bot ; top) ; base)")
    assert g == Chop(Chop(Bottom(), Top()), RelApp("base", ()))


def test_parse_top_level_chop_binds_loosest():
    f = rt("bot => top ; base")
    assert f == Chop(Implies(Bottom(), Top()), RelApp("base", ()))


def test_parse_prefix_tighter_than_and():
    f = rt("dia bot & !top")
    assert f == And(Diamond(Bottom()), Not(Top()))


def test_parse_quantifiers():
    f = rt("ex z:dur . z = 0")
    z = Var("z", Sort.DUR)
    assert f == Exists(var_symbol("z", Sort.DUR), eq(z, Const("0", Sort.DUR)))
    g = rt("all x . x = y")  # sort from the declaration of x
    assert g == Forall(var_symbol("x", Sort.DUR), eq(X, Y))
    with pytest.raises(ParseError):
        rt("ex undeclared . bot")


def test_parse_quantifier_body_extends_to_iff():
    f = rt("(ex z:dur . z = 0 & top ; bot)")
    assert isinstance(f, Chop) and isinstance(f.lhs, Exists)
    assert f.lhs.body == And(eq(Var("z", Sort.DUR), Const("0", Sort.DUR)), Top())


def test_parse_probability_terms():
    f = rt("p(bot) = 1")
    assert f == eq(Prob(Bottom()), Const("1", Sort.PROB))
    g = rt("mu(base)(x) <= w")
    assert g == Cmp("<=", Mu(RelApp("base", ()), X), W)


def test_parse_state_expressions():
    f = rt("[[P => 0]]")
    assert f == StateHolds(SImplies(SVar("P"), SZero()))
    assert rt("[[!P]]") == f  # sugar expands at parse time
    assert rt("dur(P & S) = l") == rt("dur(!(P => !S)) = l")


def test_parse_numeral_resolution():
    f = rt("0 = 0")  # no anchor: both default to duration
    assert f == eq(Const("0", Sort.DUR), Const("0", Sort.DUR))
    g = rt("0:prob = 0")  # annotation anchors the atom
    assert g == eq(Const("0", Sort.PROB), Const("0", Sort.PROB))
    h = rt("p(bot) = 0")  # probability term anchors
    assert h == eq(Prob(Bottom()), Const("0", Sort.PROB))
    k = rt("0 + 0 = x")  # variable anchors, + pushes down
    zd = Const("0", Sort.DUR)
    assert k == eq(FunApp("+", (zd, zd), Sort.DUR), X)
    m = rt("Q(0)")  # declared relation signature anchors
    assert m == RelApp("Q", (Const("0", Sort.PROB),))
    n = rt("0 * w = w")  # * anchors to probability
    assert n == eq(FunApp("*", (Const("0", Sort.PROB), W), Sort.PROB), W)


def test_parse_numeral_rejects_other_literals():
    with pytest.raises(ParseError):
        rt("x = 2")


def test_parse_terms_standalone():
    assert parse_term("x + c", VOCAB) == FunApp("+", (X, Const("c", Sort.DUR)), Sort.DUR)
    assert parse_term("0", VOCAB) == Const("0", Sort.DUR)
    assert parse_term("0:prob", VOCAB) == Const("0", Sort.PROB)
    assert parse_term("p(bot)", VOCAB) == Prob(Bottom())


def test_parse_errors():
    for bad in ["", "x +", "(", "x = ", "[[P]", "ex x:dur x = 0", "f(x) = x",
                "unknownrel(x)", "p(bot"]:
        with pytest.raises(ParseError):
            rt(bad)


def test_parse_formula_file_skips_blank_and_comments():
    text = "# header\n\nbot\n  top # trailing\n"
    got = parse_formula_file(text, VOCAB)
    assert got == [(3, Bottom()), (4, Top())]


# ---------------------------------------------------------------------------
# Vocabulary files
# ---------------------------------------------------------------------------


def test_parse_vocabulary_roundtrip():
    text = """
    # declarations
    var t : dur
    rigidconst half : prob
    flexconst load : prob
    rigidfun bump : dur dur -> dur
    flexrel busy : dur
    flexrel marker :
    statevar Run
    """
    v = parse_vocabulary(text)
    assert v.lookup("t")[0].sort == Sort.DUR
    assert v.lookup("half")[0].kind.value == "rigidconst"
    assert v.lookup("bump")[0].arg_sorts == (Sort.DUR, Sort.DUR)
    assert v.lookup("marker")[0].arg_sorts == ()
    assert v.lookup("Run")[0].kind.value == "statevar"
    f = parse_formula("(ex t . busy(t)) & marker", v)
    assert isinstance(f, And)


def test_parse_vocabulary_errors():
    for bad in ["frob x : dur", "var x", "rigidfun f : dur", "var inf : dur",
                "statevar P : dur"]:
        with pytest.raises(ParseError):
            parse_vocabulary(bad)


# ---------------------------------------------------------------------------
# Pretty printing and round trip
# ---------------------------------------------------------------------------


def test_pretty_pins():
    assert pretty(rt("(bot ; top ; base)"), VOCAB) == "(bot ; top ; base)"
    assert pretty(rt("x <= y & bot"), VOCAB) == "x <= y & bot"
    assert pretty(rt("ex z:dur . z = 0"), VOCAB) == "(ex z:dur . z = 0)"
    assert pretty(rt("!p(bot) = 1"), VOCAB) == "!p(bot) = 1"
    assert pretty(rt("0 = 0"), VOCAB) == "0 = 0"
    assert pretty(eq(Const("0", Sort.PROB), Const("0", Sort.PROB)), VOCAB) == "0:prob = 0"
    assert pretty(rt("mu(base)(l) <= w"), VOCAB) == "mu(base)(l) <= w"
    assert pretty(rt("x + c + y = f(x, y)"), VOCAB) == "x + c + y = f(x, y)"
    assert pretty(FunApp("+", (X, FunApp("+", (Y, X), Sort.DUR)), Sort.DUR),
                  VOCAB) == "x + (y + x)"


def test_pretty_state():
    f = StateHolds(SImplies(SImplies(SVar("P"), SZero()), SVar("S")))
    assert pretty(f, VOCAB) == "[[(P => 0) => S]]"
    assert rt(pretty(f, VOCAB)) == f


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**7))
def test_roundtrip_generated(seed):
    g = FormulaGen(seed, allow_nl=True)
    for _ in range(2):
        f = g.formula(4)
        assert rt(pretty(f, VOCAB)) == f


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**7))
def test_roundtrip_desugared(seed):
    g = FormulaGen(seed)
    f = desugar(g.formula(3))
    assert rt(pretty(f, VOCAB)) == f


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**7))
def test_roundtrip_sort_checks(seed):
    g = FormulaGen(seed, allow_nl=True)
    f = g.formula(4)
    assert sort_check(VOCAB, rt(pretty(f, VOCAB))) is None
