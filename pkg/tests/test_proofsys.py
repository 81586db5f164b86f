"""Schema matching, propositional steps, and proof checking.

The pinned matcher verdicts are worked out by hand against the schema
displays before being compared with :func:`match_schema`.  The property
sections then exercise the soundness link (generated instances of every
schema hold on validated random models at every core and interval) and
the checker's rejection behaviour for broken justifications.
"""

import textwrap
from pathlib import Path

import pytest

from pitl.parser import parse_formula, parse_vocabulary, pretty
from pitl.proofsys import (
    CATALOG,
    GROUPS,
    MatchError,
    NotFree,
    PropEquivStates,
    ProofFormatError,
    REGISTRY,
    RigidFormula,
    RigidTerm,
    RuleEntry,
    SideConditionViolated,
    TheoremEntry,
    _meta_kinds,
    _strip_comment,
    _term_meta_sorts,
    check_proof,
    instantiate_form,
    match_schema,
    parse_proof_file,
    prop_consequence,
    prop_tautology,
)
from pitl.gen import random_model, standard_vocabulary
from pitl.semantics import holds, validate_model
from pitl.syntax import (
    Const,
    RelApp,
    Sort,
    SVar,
    Var,
    desugar,
    eq,
    free_vars,
    is_core,
    is_rigid,
    sort_check,
    var_symbol,
)

V = parse_vocabulary("""
var x : dur
var y : dur
var u : prob
var v : prob
var z : prob
rigidconst c : dur
rigidconst q : prob
flexconst k : prob
flexrel A :
flexrel B :
flexrel C :
flexrel base :
flexrel Q : prob
statevar P
statevar S
""")


def fd(text):
    f = desugar(parse_formula(text, V))
    sort_check(V, f)
    return f


def run(script, vocab_text=None, tmp=None):
    """Parse and check an inline proof script against the shared vocabulary."""
    vocab_text = vocab_text or (
        "var x : dur\nvar y : dur\nvar u : prob\nvar v : prob\nvar z : prob\n"
        "rigidconst c : dur\nrigidconst q : prob\nflexconst k : prob\n"
        "flexrel A :\nflexrel B :\nflexrel C :\nstatevar P\nstatevar S\n")
    vocab = parse_vocabulary(vocab_text)
    proof = parse_proof_file(textwrap.dedent(script), vocab=vocab)
    return check_proof(proof)


# ---------------------------------------------------------------------------
# Catalog shape
# ---------------------------------------------------------------------------


class TestCatalog:
    def test_total_and_group_counts(self):
        assert len(CATALOG) == 45
        counts = {}
        for s in CATALOG.values():
            counts[s.group] = counts.get(s.group, 0) + 1
        assert counts == {"ITL": 11, "Duration": 6, "Probability-domain": 13,
                          "PITL": 5, "DC": 8, "Global": 2}
        assert set(counts) == set(GROUPS)

    def test_forms_are_core_and_displayed(self):
        for s in CATALOG.values():
            assert s.display.strip()
            for form in s.forms:
                assert is_core(form), s.name

    def test_side_conditions_present_where_expected(self):
        assert any(isinstance(c, RigidFormula) for c in CATALOG["R"].side)
        assert any(isinstance(c, NotFree) for c in CATALOG["B"].side)
        assert any(isinstance(c, PropEquivStates) for c in CATALOG["DC6"].side)

    def test_rigid_positions_marked(self):
        # term metas under a chop or probability term admit only rigid terms
        assert "x" in CATALOG["L1"].rigid_term_metas[0]
        assert "x" in CATALOG["PSEMI"].rigid_term_metas[0]
        assert "y" in CATALOG["PSEMI"].rigid_term_metas[0]
        # purely algebraic schemas leave their metas unconstrained
        assert CATALOG["U2"].rigid_term_metas[0] == frozenset()
        assert CATALOG["D5"].rigid_term_metas[0] == frozenset()


# ---------------------------------------------------------------------------
# Matcher pins
# ---------------------------------------------------------------------------


class TestMatcherPins:
    def test_a1_binding(self):
        f = fd("(l = 0 ; top) & !(bot ; top) => (l = 0 & !bot ; top)")
        env = match_schema(CATALOG["A1"], f, V)
        assert env == {"phi": fd("l = 0"), "psi": fd("top"), "chi": fd("bot")}

    def test_r_matches_second_form_with_rigid_phi(self):
        env = match_schema(CATALOG["R"], fd("(l = 0 ; top) => top"), V)
        assert env["phi"] == fd("top")
        assert env["psi"] == fd("l = 0")

    def test_r_rigidity_violation_is_reported(self):
        with pytest.raises(SideConditionViolated) as exc:
            match_schema(CATALOG["R"], fd("(top ; l = 0) => l = 0"), V)
        assert exc.value.condition == RigidFormula("phi")

    def test_a2_associativity(self):
        f = fd("((A ; B) ; C) <=> (A ; (B ; C))")
        env = match_schema(CATALOG["A2"], f, V)
        assert env == {"phi": fd("A"), "psi": fd("B"), "chi": fd("C")}

    def test_repeated_meta_must_agree(self):
        # the two psi positions of A1's first form must carry equal operands
        bad = fd("(A ; B) & !(C ; A) => (A & !C ; B)")
        with pytest.raises(MatchError):
            match_schema(CATALOG["A1"], bad, V)

    def test_binder_meta_shared_across_chop(self):
        f = fd("(ex x : dur . l = x ; A) => ex x : dur . (l = x ; A)")
        env = match_schema(CATALOG["B"], f, V)
        assert env["x"] == var_symbol("x", Sort.DUR)
        assert env["phi"] == fd("l = x")

    def test_binder_meta_requires_same_variable(self):
        f = fd("(ex x : dur . l = x ; A) => ex y : dur . (l = y ; A)")
        with pytest.raises(MatchError):
            match_schema(CATALOG["B"], f, V)

    def test_b_not_free_side_condition(self):
        f = fd("(ex x : dur . l = x ; x = 0) => ex x : dur . (l = x ; x = 0)")
        with pytest.raises(SideConditionViolated) as exc:
            match_schema(CATALOG["B"], f, V)
        assert isinstance(exc.value.condition, NotFree)

    def test_flexible_term_refused_at_shifted_position(self):
        f = fd("(l = dur(P) ; A) => !(l = dur(P) ; !A)")
        with pytest.raises(SideConditionViolated) as exc:
            match_schema(CATALOG["L1"], f, V)
        assert exc.value.condition == RigidTerm("x")

    def test_flexible_term_allowed_outside_shifting(self):
        f = fd("ex w : dur . (dur(P) + w = y | y + w = dur(P))")
        env = match_schema(CATALOG["D5"], f, V)
        assert not is_rigid(env["x"], V)

    def test_dc6_propositional_equivalence(self):
        env = match_schema(CATALOG["DC6"], fd("dur(P & P) = dur(P)"), V)
        assert env["S1"] == desugar(parse_formula("dur(P & P) = 0", V)).args[0].state
        with pytest.raises(SideConditionViolated) as exc:
            match_schema(CATALOG["DC6"], fd("dur(P) = dur(S)"), V)
        assert isinstance(exc.value.condition, PropEquivStates)

    def test_term_meta_capture_refused(self):
        # D5's witness binder may not swallow a variable of the matched term
        f = fd("ex w : dur . (w + w = y | y + w = w)")
        with pytest.raises(MatchError):
            match_schema(CATALOG["D5"], f, V)

    def test_wrong_shape_raises_match_error(self):
        with pytest.raises(MatchError):
            match_schema(CATALOG["P1"], fd("(l = inf ; A)"), V)


# ---------------------------------------------------------------------------
# Instantiation round trip and model soundness
# ---------------------------------------------------------------------------


def _stand_ins(schema, *, closed):
    """Distinct operands for each metavariable of a schema.

    With ``closed`` the instance contains no free variables, so it can be
    evaluated on a model without an assignment.
    """
    if closed:
        formulas = [fd("base"), fd("l = 0"), fd("top"), fd("Q(1)")]
        terms = {Sort.DUR: [fd("c = c").args[0], Const("0", Sort.DUR)],
                 Sort.PROB: [fd("q = q").args[0], Const("1", Sort.PROB)]}
    else:
        formulas = [fd("A"), fd("B"), fd("C"), fd("base")]
        terms = {Sort.DUR: [Var("x", Sort.DUR), Var("y", Sort.DUR)],
                 Sort.PROB: [Var("u", Sort.PROB), Var("v", Sort.PROB)]}
    kinds = {}
    sorts = {}
    for form in schema.forms:
        kinds.update(_meta_kinds(form))
        sorts.update(_term_meta_sorts(form))
    env = {}
    fi = 0
    ti = {Sort.DUR: 0, Sort.PROB: 0}
    rigid_needed = {c.meta for c in schema.side if isinstance(c, RigidFormula)}
    equiv = [c for c in schema.side if isinstance(c, PropEquivStates)]
    for name in sorted(kinds):
        kind = kinds[name]
        if kind == "formula":
            if name in rigid_needed:
                env[name] = fd("q = q")
            else:
                env[name] = formulas[fi % len(formulas)]
                fi += 1
        elif kind == "term":
            sort = sorts[name]
            env[name] = terms[sort][ti[sort] % len(terms[sort])]
            ti[sort] += 1
        elif kind == "binder":
            env[name] = var_symbol("x", Sort.DUR)
        elif kind == "state":
            env[name] = SVar("P")
    for cond in equiv:
        env[cond.rhs] = env[cond.lhs]
    if schema.name == "B":
        # the bound variable must appear in phi and stay out of psi
        env["phi"] = fd("l = x")
        env["psi"] = fd("base")
    if schema.name == "U13" and closed:
        # keep the divisibility witness inside the evaluation carrier
        env["z"] = Const("0", Sort.PROB)
    return env


class TestInstantiation:
    @pytest.mark.parametrize("name", sorted(CATALOG))
    def test_matcher_recovers_generated_instances(self, name):
        schema = CATALOG[name]
        env = _stand_ins(schema, closed=False)
        instance = instantiate_form(schema.forms[0], env)
        sort_check(V, instance)
        got = match_schema(schema, instance, V)
        for key, value in env.items():
            assert got[key] == value

    @pytest.mark.parametrize("name", sorted(CATALOG))
    def test_every_form_of_every_schema_instantiates(self, name):
        schema = CATALOG[name]
        env = _stand_ins(schema, closed=False)
        for form in schema.forms:
            instance = instantiate_form(form, env)
            sort_check(V, instance)
            assert is_core(instance)


class TestSoundness:
    @pytest.mark.parametrize("seed", [7, 19])
    def test_closed_instances_hold_on_random_models(self, seed):
        model = random_model(seed, horizon=3, n_cores=3)
        assert [v for v in validate_model(model) if v.severity != "note"] == []
        intervals = model.frame.canonical_intervals()
        for name in sorted(CATALOG):
            schema = CATALOG[name]
            env = _stand_ins(schema, closed=True)
            for form in schema.forms:
                instance = instantiate_form(form, env)
                assert not free_vars(instance)
                for w in model.cores:
                    for sigma in intervals:
                        assert holds(model, w, {}, sigma, instance), (
                            f"{name} fails at {w}, {sigma}: {pretty(instance)}")


# ---------------------------------------------------------------------------
# Propositional oracle
# ---------------------------------------------------------------------------


class TestPropOracle:
    def test_basic_tautologies(self):
        assert prop_tautology(fd("A | !A"))
        assert prop_tautology(fd("(A => B) => ((B => C) => (A => C))"))
        assert not prop_tautology(fd("A => B"))

    def test_atoms_are_opaque(self):
        # a chop is one atom: no propositional reasoning below it
        assert not prop_tautology(fd("(A ; B) => (A ; B | A)"))
        assert prop_tautology(fd("(A ; B) => (A ; B)"))

    def test_alpha_variant_atoms_coincide(self):
        f = fd("(ex x : dur . l = x) => (ex y : dur . l = y)")
        assert prop_tautology(f)

    def test_consequence(self):
        assert prop_consequence((fd("A => B"), fd("A")), fd("B"))
        assert not prop_consequence((fd("A => B"),), fd("B"))
        assert prop_consequence((fd("bot"),), fd("A"))

    def test_atom_limit(self):
        lines = ["flexrel R{} :".format(i) for i in range(25)]
        vocab = parse_vocabulary("\n".join(lines))
        big = desugar(parse_formula(" | ".join(f"R{i}" for i in range(25)), vocab))
        with pytest.raises(MatchError):
            prop_tautology(big)


# ---------------------------------------------------------------------------
# Justification checking
# ---------------------------------------------------------------------------


class TestJustifications:
    def test_modus_ponens_orientation(self):
        good = run("""
            goal: B
            premises:
              h1: A
              h2: A => B
            1. A  BY PREMISE h1
            2. A => B  BY PREMISE h2
            3. B  BY MP 1 2
        """)
        assert good.ok and good.premises_used == {"h1", "h2"}
        bad = run("""
            goal: B
            premises:
              h1: A
              h2: A => B
            1. A  BY PREMISE h1
            2. A => B  BY PREMISE h2
            3. B  BY MP 2 1
        """)
        assert not bad.ok and bad.error[0] == 3

    def test_necessitation_needs_theorem_grade(self):
        v = run("""
            goal: !(!(A | !A) ; B)
            1. A | !A  BY TAUT
            2. !(!(A | !A) ; B)  BY N-LEFT 1 WITH B
        """)
        assert v.ok
        tainted = run("""
            goal: !(!A ; B)
            premises:
              h: A
            1. A  BY PREMISE h
            2. !(!A ; B)  BY N-LEFT 1 WITH B
        """)
        assert not tainted.ok

    def test_necessitation_right(self):
        v = run("""
            goal: !(B ; !(A | !A))
            1. A | !A  BY TAUT
            2. !(B ; !(A | !A))  BY N-RIGHT 1 WITH B
        """)
        assert v.ok

    def test_mono_sides(self):
        v = run("""
            goal: (B ; A & B) => (B ; A)
            1. A & B => A  BY TAUT
            2. (B ; A & B) => (B ; A)  BY MONO-RIGHT 1
        """)
        assert v.ok
        wrong_side = run("""
            goal: (B ; A & B) => (B ; A)
            1. A & B => A  BY TAUT
            2. (B ; A & B) => (B ; A)  BY MONO-LEFT 1
        """)
        assert not wrong_side.ok

    def test_pleq_reconstruction(self):
        v = run("""
            goal: A & l < inf => p(B) <= p(B | C)
            1. (A ; l = inf) => (B => B | C)  BY TAUT
            2. A & l < inf => p(B) <= p(B | C)  BY PLEQ 1
        """)
        assert v.ok and v.groups == {"ITL", "PITL"}
        mismatch = run("""
            goal: A & l < inf => p(B) <= p(C)
            1. (A ; l = inf) => (B => B | C)  BY TAUT
            2. A & l < inf => p(B) <= p(C)  BY PLEQ 1
        """)
        assert not mismatch.ok

    def test_pitl1(self):
        v = run("""
            goal: p(A & B) = p(B & A)
            1. A & B <=> B & A  BY TAUT
            2. p(A & B) = p(B & A)  BY PITL1 1
        """)
        assert v.ok
        not_iff = run("""
            goal: p(A) = p(B)
            1. A => B  BY TAUT
            2. p(A) = p(B)  BY PITL1 1
        """)
        assert not not_iff.ok

    def test_gen(self):
        v = run("""
            goal: all x : dur . (l = x => l = x)
            1. l = x => l = x  BY TAUT
            2. all x : dur . (l = x => l = x)  BY GEN 1 x
        """)
        assert v.ok

    def test_exl_eigenvariable_conditions(self):
        v = run("""
            goal: (ex x : dur . l = x) => top
            1. l = x => top  BY TAUT
            2. (ex x : dur . l = x) => top  BY EXL 1 x
        """)
        assert v.ok
        free_in_consequent = run("""
            goal: (ex x : dur . l = x) => x = x
            1. l = x => x = x  BY TAUT
            2. (ex x : dur . l = x) => x = x  BY EXL 1 x
        """)
        assert not free_in_consequent.ok
        free_in_premise = run("""
            goal: (ex x : dur . l = x) => top
            premises:
              h: x = 0
            1. x = 0  BY PREMISE h
            2. l = x => top  BY PROP 1
            3. (ex x : dur . l = x) => top  BY EXL 2 x
        """)
        assert not free_in_premise.ok

    def test_exr_witnessing(self):
        v = run("""
            goal: u + 0 = u => u <= u
            1. u + 0 = u => u <= u  BY EXR {z := 0}
        """)
        assert v.ok
        flexible_under_chop = run("""
            goal: (l = dur(P) ; A) => ex x : dur . (l = x ; A)
            1. (l = dur(P) ; A) => ex x : dur . (l = x ; A)  BY EXR {x := dur(P)}
        """)
        assert not flexible_under_chop.ok
        rigid_under_chop = run("""
            goal: (l = c ; A) => ex x : dur . (l = x ; A)
            1. (l = c ; A) => ex x : dur . (l = x ; A)  BY EXR {x := c}
        """)
        assert rigid_under_chop.ok

    def test_alle(self):
        v = run("""
            goal: (all x : dur . l = x) => l = c
            1. (all x : dur . l = x) => l = c  BY ALLE {x := c}
        """)
        assert v.ok

    def test_equality_steps(self):
        assert run("goal: c = c\n1. c = c  BY EQREFL\n").ok
        assert run("goal: x = y => y = x\n1. x = y => y = x  BY EQSYM\n").ok
        assert run("""
            goal: x = y => (y = c => x = c)
            1. x = y => (y = c => x = c)  BY EQTRANS
        """).ok
        assert run("""
            goal: u = v => u + u = v + v
            1. u = v => u + u = v + v  BY EQCONGF
        """).ok
        assert run("""
            goal: u = v => (u <= q <=> v <= q)
            1. u = v => (u <= q <=> v <= q)  BY EQCONGR
        """).ok

    def test_congruence_guards(self):
        # flexible operands may not be replaced below a probability term
        flexible = run("""
            goal: k = q => p((l = 0 ; A & k = k)) = p((l = 0 ; A & q = k))
            1. k = q => p((l = 0 ; A & k = k)) = p((l = 0 ; A & q = k))  BY EQCONGF
        """)
        assert not flexible.ok
        rigid = run("""
            goal: c = x => p((l = c ; A)) = p((l = x ; A))
            1. c = x => p((l = c ; A)) = p((l = x ; A))  BY EQCONGF
        """)
        assert rigid.ok
        unrelated = run("""
            goal: u = v => u + u = v + q
            1. u = v => u + u = v + q  BY EQCONGF
        """)
        assert not unrelated.ok

    def test_theorem_citation(self):
        v = run("""
            goal: p(A) <= p(A)
            1. p(A) <= p(A)  BY THM LE-REFL {x := p(A)}
        """)
        assert v.ok and v.groups == {"ITL", "Probability-domain"}

    def test_sensitive_variables_blocked(self):
        clash = run("""
            goal: z <= z
            1. z <= z  BY THM LE-REFL {x := z}
        """)
        assert not clash.ok and "internally" in clash.error[1]

    def test_rule_citation_and_top_normalisation(self):
        v = run("""
            goal: p(B) <= p(A | B)
            1. ((top ; l = inf) | (top & l = inf)) => (B => A | B)  BY TAUT
            2. p(B) <= p(A | B)  BY RULE PLEQINF 1
        """)
        assert v.ok
        assert v.groups == {"PITL", "ITL", "Probability-domain", "Duration"}

    def test_rule_side_condition(self):
        v = run("""
            goal: q = q => p(A & !A) = 0
            1. q = q => (A & !A => bot)  BY TAUT
            2. q = q => p(A & !A) = 0  BY RULE CONDZERO 1
        """)
        assert v.ok
        not_rigid = run("""
            goal: base => p(A & !A) = 0
            1. base => (A & !A => bot)  BY TAUT
            2. base => p(A & !A) = 0  BY RULE CONDZERO 1
        """, vocab_text="flexrel A :\nflexrel base :\n")
        assert not not_rigid.ok

    def test_rule_requires_theorem_grade_citations(self):
        v = run("""
            goal: p(B) <= p(A | B)
            premises:
              h: ((top ; l = inf) | (top & l = inf)) => (B => A | B)
            1. ((top ; l = inf) | (top & l = inf)) => (B => A | B)  BY PREMISE h
            2. p(B) <= p(A | B)  BY RULE PLEQINF 1
        """)
        assert not v.ok

    def test_axiom_binding_cross_check(self):
        v = run("""
            goal: u + 0 = u
            1. u + 0 = u  BY AX U3 {x := u}
        """)
        assert v.ok
        wrong = run("""
            goal: u + 0 = u
            1. u + 0 = u  BY AX U3 {x := v}
        """)
        assert not wrong.ok

    def test_theorem_assumptions_do_not_taint(self):
        v = run("""
            goal: !(!(A => A) ; B)
            theorems:
              t: A => A
            1. A => A  BY THEOREM t
            2. !(!(A => A) ; B)  BY N-LEFT 1 WITH B
        """)
        assert v.ok and v.theorems_used == {"t"}


# ---------------------------------------------------------------------------
# Proof files
# ---------------------------------------------------------------------------


class TestProofFiles:
    def test_goal_must_be_last_line(self):
        v = run("""
            goal: A | !A
            1. A | !A  BY TAUT
            2. top  BY TAUT
        """)
        assert not v.ok and "goal" in v.error[1]

    def test_numbering_must_be_consecutive(self):
        with pytest.raises(ProofFormatError):
            run("goal: top\n2. top  BY TAUT\n")

    def test_references_must_precede(self):
        with pytest.raises(ProofFormatError):
            run("goal: top\n1. top  BY PROP 1\n")

    def test_missing_by_is_malformed(self):
        with pytest.raises(ProofFormatError):
            run("goal: top\n1. top TAUT\n")

    def test_unknown_schema_is_malformed(self):
        with pytest.raises(ProofFormatError):
            run("goal: top\n1. top  BY AX NOSUCH\n")

    def test_ill_sorted_line_is_malformed(self):
        with pytest.raises(ProofFormatError):
            run("goal: top\n1. x + u = x  BY TAUT\n")

    def test_duplicate_assumption_names(self):
        with pytest.raises(ProofFormatError):
            run("""
                premises:
                  h: A
                  h: B
                goal: A
                1. A  BY PREMISE h
            """)

    def test_vocab_file_resolution(self, tmp_path):
        (tmp_path / "toy.vocab").write_text("flexrel A :\n")
        (tmp_path / "toy.prf").write_text(
            "vocab toy.vocab\ngoal: A | !A\n1. A | !A  BY TAUT\n")
        from pitl.proofsys import load_proof
        proof = load_proof(tmp_path / "toy.prf")
        assert check_proof(proof).ok

    def test_comment_stripping_keeps_hash_names(self):
        assert _strip_comment("1. ex z#1 : prob . top  # note") == \
            "1. ex z#1 : prob . top"
        assert _strip_comment("# whole line") == ""
        assert _strip_comment("text # tail") == "text"


# ---------------------------------------------------------------------------
# Registry table
# ---------------------------------------------------------------------------


class TestRegistry:
    def test_entries_well_formed(self):
        assert set(REGISTRY) >= {"LE-REFL", "LE-TRANS", "LE-ANTISYM", "PITL2",
                                 "PLEQINF", "CONDZERO", "PITL4"}
        for entry in REGISTRY.values():
            if isinstance(entry, TheoremEntry):
                assert is_core(entry.pattern), entry.name
            else:
                assert isinstance(entry, RuleEntry)
                assert is_core(entry.conclusion)
                for p in entry.premises:
                    assert is_core(p)
            assert entry.groups
            assert entry.script.endswith(".prf")

    def test_letters_instantiate_patterns(self):
        for entry in REGISTRY.values():
            letters = dict(entry.letters)
            if isinstance(entry, TheoremEntry):
                instantiate_form(entry.pattern, letters)
            else:
                instantiate_form(entry.conclusion, letters)
                for p in entry.premises:
                    instantiate_form(p, letters)
