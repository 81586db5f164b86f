"""Seeded random generators for terms, formulas and ill-typed mutants.

Everything is driven by an explicit :class:`random.Random`, so suites are
reproducible from a single seed.
"""

from __future__ import annotations

import random
from typing import Optional, Union

from .syntax import (
    And, Box, BoxL, BoxR, Bottom, Chop, Cmp, Const, CMP_OPS, DiaL, DiaR, Diamond,
    DurationOf, Exists, Forall, Formula, FunApp, Iff, Implies, Mu, Not, Or,
    Prob, RelApp, SImplies, SVar, SZero, Sort, StateExpr, StateHolds, Symbol,
    SymbolKind, Term, Top, Var, Vocabulary, eq, s_and, s_not, s_one, s_or,
    var_symbol,
)


def standard_vocabulary() -> Vocabulary:
    """The vocabulary used throughout the test suites."""
    v = Vocabulary()
    D, P = Sort.DUR, Sort.PROB
    for sym in (
        Symbol("x", SymbolKind.VAR, (), D),
        Symbol("y", SymbolKind.VAR, (), D),
        Symbol("w", SymbolKind.VAR, (), P),
        Symbol("c", SymbolKind.RIGID_CONST, (), D),
        Symbol("q", SymbolKind.RIGID_CONST, (), P),
        Symbol("k", SymbolKind.FLEX_CONST, (), P),
        Symbol("f", SymbolKind.RIGID_FUN, (D, D), D),
        Symbol("g", SymbolKind.FLEX_FUN, (D,), P),
        Symbol("R", SymbolKind.RIGID_REL, (D, D), None),
        Symbol("Q", SymbolKind.FLEX_REL, (P,), None),
        Symbol("base", SymbolKind.FLEX_REL, (), None),
        Symbol("P", SymbolKind.STATE_VAR),
        Symbol("S", SymbolKind.STATE_VAR),
    ):
        v.declare(sym)
    return v


class FormulaGen:
    """Random well-sorted ASTs over a vocabulary.

    ``allow_prob`` gates probability terms, ``allow_nl`` the neighbourhood
    modalities, ``dc_only`` restricts to the probability-free duration
    fragment (state atoms, durations, length, chop, booleans, duration
    quantifiers).
    """

    def __init__(self, rng: Union[int, random.Random],
                 vocab: Optional[Vocabulary] = None, *,
                 allow_prob: bool = True, allow_nl: bool = False,
                 dc_only: bool = False, carrier_safe: bool = False):
        self.rng = rng if isinstance(rng, random.Random) else random.Random(rng)
        self.vocab = vocab if vocab is not None else standard_vocabulary()
        self.allow_prob = allow_prob and not dc_only
        self.allow_nl = allow_nl
        self.dc_only = dc_only
        # With carrier_safe, flexible symbols are only applied to variables
        # and constants, so evaluating any instantiation stays inside a
        # model's declared carrier.
        self.carrier_safe = carrier_safe
        self._bound: list[Symbol] = []
        self._binder_counter = 0
        self._state_vars = [s.name for s in self.vocab.symbols()
                            if s.kind == SymbolKind.STATE_VAR]
        self._vars = {
            Sort.DUR: [s for s in self.vocab.symbols()
                       if s.kind == SymbolKind.VAR and s.sort == Sort.DUR],
            Sort.PROB: [s for s in self.vocab.symbols()
                        if s.kind == SymbolKind.VAR and s.sort == Sort.PROB],
        }
        self._consts = {
            Sort.DUR: [s for s in self.vocab.symbols() if s.sort == Sort.DUR
                       and s.kind in (SymbolKind.RIGID_CONST, SymbolKind.FLEX_CONST)
                       and not (dc_only and s.name not in ("0", "l", "inf"))],
            Sort.PROB: [s for s in self.vocab.symbols() if s.sort == Sort.PROB
                        and s.kind in (SymbolKind.RIGID_CONST, SymbolKind.FLEX_CONST)],
        }
        self._funs = [s for s in self.vocab.symbols()
                      if s.kind in (SymbolKind.RIGID_FUN, SymbolKind.FLEX_FUN)
                      and s.name not in ("+", "*") and not dc_only]
        self._rels = [s for s in self.vocab.symbols()
                      if s.kind in (SymbolKind.RIGID_REL, SymbolKind.FLEX_REL)
                      and s.name != "=" and not dc_only]

    # -- helpers -----------------------------------------------------------

    def _fresh_binder(self, sort: Sort) -> Symbol:
        self._binder_counter += 1
        name = f"b{self._binder_counter}"
        while name in self.vocab or any(b.name == name for b in self._bound):
            self._binder_counter += 1
            name = f"b{self._binder_counter}"
        return var_symbol(name, sort)

    def _choice(self, options):
        return self.rng.choice(options)

    # -- states -------------------------------------------------------------

    def state(self, depth: int = 2) -> StateExpr:
        if depth <= 0 or self.rng.random() < 0.4:
            roll = self.rng.random()
            if roll < 0.15:
                return SZero()
            if roll < 0.25:
                return s_one()
            return SVar(self._choice(self._state_vars))
        op = self._choice(["not", "and", "or", "implies"])
        if op == "not":
            return s_not(self.state(depth - 1))
        a, b = self.state(depth - 1), self.state(depth - 1)
        if op == "and":
            return s_and(a, b)
        if op == "or":
            return s_or(a, b)
        return SImplies(a, b)

    # -- terms --------------------------------------------------------------

    def term(self, sort: Sort, depth: int = 2) -> Term:
        leafy = depth <= 0 or self.rng.random() < 0.45
        bound = [b for b in self._bound if b.sort == sort]
        if leafy:
            pool: list[Term] = [Const(c.name, c.sort) for c in self._consts[sort]]
            pool += [Var(v.name, v.sort) for v in self._vars[sort] + bound]
            if sort == Sort.PROB:
                pool += [Const("0", Sort.PROB), Const("1", Sort.PROB)]
            else:
                pool += [Const("0", Sort.DUR)]
            return self._choice(pool)
        options = ["add", "leaf"]
        if sort == Sort.DUR:
            options += ["durof"]
            options += [f.name for f in self._funs if f.sort == Sort.DUR]
        else:
            options += ["mul"]
            options += [f.name for f in self._funs if f.sort == Sort.PROB]
            if self.allow_prob:
                options += ["prob", "prob", "mu"]
        op = self._choice(options)
        if op == "leaf":
            return self.term(sort, 0)
        if op == "add":
            return FunApp("+", (self.term(sort, depth - 1), self.term(sort, depth - 1)), sort)
        if op == "mul":
            return FunApp("*", (self.term(sort, depth - 1), self.term(sort, depth - 1)),
                          Sort.PROB)
        if op == "durof":
            return DurationOf(self.state(depth - 1))
        if op == "prob":
            return Prob(self.formula(depth - 1))
        if op == "mu":
            return Mu(self.formula(depth - 1), self.term(Sort.DUR, depth - 1))
        decl = next(f for f in self._funs if f.name == op)
        return FunApp(op, tuple(self._arg_term(decl, s, depth - 1)
                                for s in decl.arg_sorts), decl.sort)

    def _arg_term(self, decl: Symbol, sort: Sort, depth: int) -> Term:
        if self.carrier_safe and decl.kind in (SymbolKind.FLEX_FUN,
                                               SymbolKind.FLEX_REL):
            bound = [b for b in self._bound if b.sort == sort]
            pool: list[Term] = [Var(v.name, v.sort)
                                for v in self._vars[sort] + bound]
            pool += [Const(c.name, c.sort) for c in self._consts[sort]
                     if c.kind == SymbolKind.RIGID_CONST]
            pool += [Const("0", sort)]
            if sort == Sort.PROB:
                pool += [Const("1", Sort.PROB)]
            return self._choice(pool)
        return self.term(sort, depth)

    # -- formulas -----------------------------------------------------------

    def atom(self, depth: int = 1) -> Formula:
        options = ["bot", "top", "eq_dur", "cmp_dur", "holds"]
        if not self.dc_only:
            options += ["eq_prob", "cmp_prob"]
            options += [r.name for r in self._rels]
        op = self._choice(options)
        if op == "bot":
            return Bottom()
        if op == "top":
            return Top()
        if op == "holds":
            return StateHolds(self.state(depth))
        if op in ("eq_dur", "eq_prob"):
            sort = Sort.DUR if op == "eq_dur" else Sort.PROB
            return eq(self.term(sort, depth), self.term(sort, depth))
        if op in ("cmp_dur", "cmp_prob"):
            sort = Sort.DUR if op == "cmp_dur" else Sort.PROB
            return Cmp(self._choice(list(CMP_OPS)),
                       self.term(sort, depth), self.term(sort, depth))
        decl = next(r for r in self._rels if r.name == op)
        return RelApp(op, tuple(self._arg_term(decl, s, depth)
                                for s in decl.arg_sorts))

    def formula(self, depth: int = 3) -> Formula:
        if depth <= 0 or self.rng.random() < 0.3:
            return self.atom(max(depth, 0) + 1)
        options = ["not", "and", "or", "implies", "iff", "chop", "chop",
                   "exists", "forall", "dia", "box"]
        if self.allow_nl:
            options += ["dia_l", "dia_r", "box_l", "box_r"]
        op = self._choice(options)
        if op == "not":
            return Not(self.formula(depth - 1))
        if op in ("and", "or", "implies", "iff"):
            klass = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[op]
            return klass(self.formula(depth - 1), self.formula(depth - 1))
        if op == "chop":
            return Chop(self.formula(depth - 1), self.formula(depth - 1))
        if op in ("exists", "forall"):
            sort = Sort.DUR if self.dc_only or self.rng.random() < 0.7 else Sort.PROB
            binder = self._fresh_binder(sort)
            self._bound.append(binder)
            try:
                body = self.formula(depth - 1)
            finally:
                self._bound.pop()
            return Exists(binder, body) if op == "exists" else Forall(binder, body)
        klass = {"dia": Diamond, "box": Box, "dia_l": DiaL, "dia_r": DiaR}.get(op)
        if klass is not None:
            return klass(self.formula(depth - 1))
        return {"box_l": BoxL, "box_r": BoxR}[op](self.formula(depth - 1))

    # -- ill-typed mutants ----------------------------------------------------

    ILL_TYPED_KINDS = ("cross_sort_eq", "arity", "unknown", "plus_sort")

    def ill_typed(self, depth: int = 2, kind: Optional[str] = None) -> Formula:
        """A formula containing one seeded sort/arity/declaration error."""
        kind = kind or self._choice(list(self.ILL_TYPED_KINDS))
        if kind == "cross_sort_eq":
            bad: Formula = eq(self.term(Sort.DUR, 1), self.term(Sort.PROB, 1))
        elif kind == "arity":
            if self.rng.random() < 0.5:
                bad = RelApp("R", (self.term(Sort.DUR, 1),))
            else:
                bad = eq(FunApp("f", (self.term(Sort.DUR, 1),), Sort.DUR),
                         self.term(Sort.DUR, 1))
        elif kind == "unknown":
            roll = self.rng.random()
            if roll < 0.34:
                bad = RelApp("mystery", ())
            elif roll < 0.67:
                bad = eq(Const("ghost", Sort.DUR), self.term(Sort.DUR, 1))
            else:
                bad = eq(FunApp("conjure", (self.term(Sort.DUR, 1),), Sort.DUR),
                         self.term(Sort.DUR, 1))
        else:  # plus_sort: a duration argument below a probability +
            bad = eq(FunApp("+", (self.term(Sort.PROB, 1), self.term(Sort.DUR, 1)),
                            Sort.PROB),
                     self.term(Sort.PROB, 1))
        host = self.formula(depth)
        wrap = self._choice(["and", "or", "implies", "chop", "plain"])
        if wrap == "and":
            return And(host, bad)
        if wrap == "or":
            return Or(bad, host)
        if wrap == "implies":
            return Implies(host, bad)
        if wrap == "chop":
            return Chop(bad, host)
        return bad

# ---------------------------------------------------------------------------
# Random discrete models
# ---------------------------------------------------------------------------


def random_model(seed: Union[int, random.Random], *,
                 horizon: Optional[int] = None,
                 n_cores: Optional[int] = None,
                 vocab: Optional[Vocabulary] = None):
    """A small random discrete model that passes validation.

    Cores are grown as a branching tree: a new core may copy an earlier one
    up to a branch time, which makes the behaviour-equivalence classes
    non-trivial at intermediate times.  The weight family is conditioned
    from one strictly positive global measure, so it is consistent by
    construction.
    """
    from fractions import Fraction

    from .semantics import (DiscreteFrame, DiscreteModel, WorldCore,
                            build_conditional_family)

    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    v = vocab if vocab is not None else standard_vocabulary()
    h = horizon if horizon is not None else rng.randint(2, 4)
    n = n_cores if n_cores is not None else rng.randint(2, 4)
    frame = DiscreteFrame(h)
    canon = frame.canonical_intervals()
    prob_pool = [Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(3, 4),
                 Fraction(1)]
    dur_args = list(range(h + 2))
    state_vars = [s.name for s in v.symbols() if s.kind == SymbolKind.STATE_VAR]
    flex_syms = [s for s in v.symbols() if not s.kind.value.startswith("rigid")
                 and s.kind in (SymbolKind.FLEX_CONST, SymbolKind.FLEX_FUN,
                                SymbolKind.FLEX_REL) and s.name != "l"]

    rigid_consts = {}
    rigid_funs = {}
    rigid_rels = {}
    for s in v.symbols():
        if s.kind == SymbolKind.RIGID_CONST:
            rigid_consts[s.name] = (rng.randint(0, h + 1) if s.sort == Sort.DUR
                                    else Fraction(1, 2))
        elif s.kind == SymbolKind.RIGID_FUN and s.name not in ("+", "*"):
            tbl = {}
            for _ in range(rng.randint(0, 4)):
                args = tuple(rng.choice(dur_args) if t == Sort.DUR
                             else rng.choice(prob_pool) for t in s.arg_sorts)
                tbl[args] = (rng.choice(dur_args) if s.sort == Sort.DUR
                             else rng.choice(prob_pool))
            rigid_funs[s.name] = tbl
        elif s.kind == SymbolKind.RIGID_REL and s.name != "=":
            true_set = set()
            for _ in range(rng.randint(0, 4)):
                true_set.add(tuple(rng.choice(dur_args) if t == Sort.DUR
                                   else rng.choice(prob_pool)
                                   for t in s.arg_sorts))
            rigid_rels[s.name] = frozenset(true_set)

    ids = [f"w{i}" for i in range(n)]
    cores = {}
    for i, wid in enumerate(ids):
        core = WorldCore(id=wid, rigid_consts=rigid_consts,
                         rigid_funs=rigid_funs, rigid_rels=rigid_rels)
        parent = cores[ids[rng.randrange(i)]] if i and rng.random() < 0.7 else None
        branch = rng.randint(0, h) if parent else -1
        for sv in state_vars:
            pbits, pstab = parent.traces[sv] if parent else ((), 0)
            bits = tuple(pbits[t] if t <= branch else rng.randint(0, 1)
                         for t in range(h + 1))
            stab = pstab if parent and branch >= h else rng.randint(0, 1)
            core.traces[sv] = (bits, stab)
        for s in flex_syms:
            tbl = {}
            if parent:
                tbl.update({(iv, args): val
                            for (iv, args), val in parent.flex.get(s.name, {}).items()
                            if iv[1] <= branch})
            late = [iv for iv in canon if iv[1] > branch]
            for _ in range(rng.randint(0, 3)):
                iv = rng.choice(late)
                args = tuple(rng.choice(dur_args) if t == Sort.DUR
                             else rng.choice(prob_pool) for t in s.arg_sorts)
                if s.kind == SymbolKind.FLEX_REL:
                    tbl[(iv, args)] = True
                else:
                    val = (rng.choice(dur_args) if s.sort == Sort.DUR
                           else rng.choice(prob_pool))
                    if val != 0:
                        tbl[(iv, args)] = val
            if tbl:
                core.flex[s.name] = tbl
        cores[wid] = core

    parts = [rng.randint(1, 9) for _ in ids]
    total = sum(parts)
    global_weights = {wid: Fraction(p, total) for wid, p in zip(ids, parts)}
    family = build_conditional_family(cores.values(), global_weights,
                                      frame.time_points(), h)
    probs = set(prob_pool) | {Fraction(0), Fraction(1)}
    for wmap in family.values():
        probs.update(wmap.values())
    from .semantics import INFTY
    carrier = {Sort.DUR: tuple(dur_args) + (INFTY,),
               Sort.PROB: tuple(sorted(probs))}
    return DiscreteModel(frame=frame, vocab=v, cores=cores, family=family,
                         carrier=carrier)
