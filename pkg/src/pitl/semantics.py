"""Exact evaluation over finitely presented discrete interval models.

Time is the discrete line {0, 1, 2, ...} plus infinity.  A model presents
its content up to a horizon H and stabilizes beyond it: state traces keep
their stabilization bit, flexible tables fall back to zero/false off their
listed entries, and weight maps at finite times past H equal the map at
infinity.  Probabilities are exact rationals, so every operation below is
an exact finite computation: chop split search is truncated at a bound
past which truth is provably constant (all atoms are either stabilized or
compare the interval length against values the formula can no longer
reach).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .syntax import (
    Bottom, Chop, Const, DiaL, DiaR, DurationOf, Exists, Forall, Formula,
    FunApp, Implies, Mu, Node, Prob, RelApp, SImplies, SVar, SZero, Sort,
    StateExpr, StateHolds, Symbol, SymbolKind, Term, Var, Vocabulary,
    desugar, free_vars, is_core, walk,
)
from .parser import ParseError, parse_vocabulary

INFTY = float("inf")

Dur = Union[int, float]
Value = Union[int, float, Fraction, bool]
Interval = tuple[int, Dur]
Assignment = Mapping[str, Value]
WeightMap = Mapping[str, Fraction]
ProbabilityFamily = dict[tuple[str, Dur], dict[str, Fraction]]


class SemanticsError(Exception):
    pass


class UnboundVariable(SemanticsError):
    pass


class OutOfCarrier(SemanticsError):
    pass


class MissingWeightMap(SemanticsError):
    pass


class WindowExceeded(SemanticsError):
    pass


class NLFragmentError(SemanticsError):
    pass


class ModelFormatError(SemanticsError):
    pass


# ---------------------------------------------------------------------------
# Frames, cores, models
# ---------------------------------------------------------------------------


def measure(sigma: Interval) -> Dur:
    a, b = sigma
    return INFTY if b == INFTY else b - a


@dataclass(frozen=True)
class DiscreteFrame:
    horizon: int

    def time_points(self) -> list[Dur]:
        return list(range(self.horizon + 1)) + [INFTY]

    def canonical_intervals(self) -> list[Interval]:
        h = self.horizon
        out: list[Interval] = [(i, j) for i in range(h + 1) for j in range(i, h + 1)]
        out += [(i, INFTY) for i in range(h + 1)]
        return out


@dataclass
class WorldCore:
    """One behaviour: flexible tables, state traces, and a rigid table.

    Flexible tables map (interval, argument tuple) to a value; entries equal
    to the sort default (0 / false) are redundant.  Traces give one bit per
    time point up to the horizon plus a stabilization bit for later times.
    The rigid table must be shared verbatim across the cores of a model.
    """

    id: str
    flex: dict[str, dict[tuple[Interval, tuple[Value, ...]], Value]] = field(
        default_factory=dict)
    traces: dict[str, tuple[tuple[int, ...], int]] = field(default_factory=dict)
    rigid_consts: dict[str, Value] = field(default_factory=dict)
    rigid_funs: dict[str, dict[tuple[Value, ...], Value]] = field(default_factory=dict)
    rigid_rels: dict[str, frozenset] = field(default_factory=dict)


def _default_value(sort: Sort) -> Value:
    return 0 if sort == Sort.DUR else Fraction(0)


def _is_default(v: Value) -> bool:
    return v == 0 or v is False


def _sort_key(x):
    return (x == INFTY, x if x != INFTY else 0)


def _sort_key_v(x):
    if isinstance(x, bool):
        return ("b", x)
    if x == INFTY:
        return ("i", 0)
    return ("n", Fraction(x))


def _v_sig(v):
    return _sort_key_v(v)


def _rigid_sig(core: WorldCore):
    return (
        tuple(sorted((n, _v_sig(v)) for n, v in core.rigid_consts.items())),
        tuple(sorted((n, tuple(sorted((tuple(map(_sort_key_v, a)), _v_sig(v))
                                      for a, v in t.items())))
                     for n, t in core.rigid_funs.items())),
        tuple(sorted((n, tuple(sorted(map(lambda a: tuple(map(_sort_key_v, a)), t))))
                     for n, t in core.rigid_rels.items())),
    )


def _flex_sig(core: WorldCore, tau: Dur):
    """Non-default flexible entries on intervals with right endpoint <= tau."""
    items = []
    for name, tbl in core.flex.items():
        for (iv, args), v in tbl.items():
            if _is_default(v):
                continue
            if iv[1] <= tau:
                items.append((name, (iv[0], _sort_key(iv[1])),
                              tuple(map(_sort_key_v, args)), _v_sig(v)))
    return tuple(sorted(items))


def _trace_sig(core: WorldCore, tau: Dur, horizon: int):
    upto = horizon if tau > horizon else int(tau)
    items = []
    for name, (bits, stab) in sorted(core.traces.items()):
        prefix = bits[:upto + 1]
        items.append((name, prefix, stab if tau > horizon else None))
    return tuple(items)


def content_signature(core: WorldCore, tau: Dur, horizon: int):
    """Everything ≡_tau compares except the weight maps themselves."""
    return (_rigid_sig(core), _flex_sig(core, tau), _trace_sig(core, tau, horizon))


def core_content_key(core: WorldCore, horizon: int):
    """A hashable key identifying the core's full content."""
    return content_signature(core, INFTY, horizon)


@dataclass
class DiscreteModel:
    frame: DiscreteFrame
    vocab: Vocabulary
    cores: dict[str, WorldCore]
    family: ProbabilityFamily
    carrier: dict[Sort, tuple[Value, ...]]


def default_carriers(horizon: int,
                     family: Optional[ProbabilityFamily] = None
                     ) -> dict[Sort, tuple[Value, ...]]:
    dur: tuple[Value, ...] = tuple(range(horizon + 2)) + (INFTY,)
    probs = {Fraction(0), Fraction(1)}
    for wmap in (family or {}).values():
        probs.update(wmap.values())
    return {Sort.DUR: dur, Sort.PROB: tuple(sorted(probs))}


# ---------------------------------------------------------------------------
# Equivalence of cores at a time point
# ---------------------------------------------------------------------------


def _grid_taus(model: DiscreteModel) -> list[Dur]:
    return model.frame.time_points()


def equiv_at(model: DiscreteModel, w: str, v: str, tau: Dur) -> bool:
    """Cores indistinguishable by behaviour up to time tau.

    Compares the rigid tables, flexible entries on intervals ending by tau,
    trace prefixes (plus stabilization bits once tau passes the horizon),
    and the weight maps at all grid times <= tau (stabilized maps included
    when tau lies past the horizon).
    """
    return _ev(model).equiv(w, v, tau)


def content_equiv_at(model_or_horizon, w: WorldCore, v: WorldCore, tau: Dur) -> bool:
    horizon = (model_or_horizon.frame.horizon
               if isinstance(model_or_horizon, DiscreteModel) else model_or_horizon)
    return (content_signature(w, tau, horizon) == content_signature(v, tau, horizon))


# ---------------------------------------------------------------------------
# The evaluator
# ---------------------------------------------------------------------------


def _solve_plus(offset: Value, target: Value, sort: Sort) -> Optional[Value]:
    """The unique z with offset + z = target, or None if there is none."""
    if sort == Sort.DUR:
        if target == INFTY:
            return INFTY
        if offset == INFTY or offset > target:
            return None
        return target - offset
    diff = target - offset
    return diff if diff >= 0 else None


class _Evaluator:
    def __init__(self, model: DiscreteModel):
        self.m = model
        self.h = model.frame.horizon
        self.finite_dur_carrier = [x for x in model.carrier[Sort.DUR] if x != INFTY]
        self.xmax = max([self.h + 1] + list(self.finite_dur_carrier))
        self._holds_memo: dict = {}
        self._prob_memo: dict = {}
        self._equiv_memo: dict = {}
        self._fv: dict = {}
        self._budget_memo: dict = {}
        # Largest finite duration a declared symbol can contribute to a term.
        self._sym_bound: dict[str, int] = {}
        some_core = next(iter(model.cores.values()), None)
        if some_core is not None:
            for name, tbl in some_core.rigid_funs.items():
                vals = [v for v in tbl.values() if isinstance(v, int) and v != INFTY]
                self._sym_bound[name] = max(vals, default=0)
        for core in model.cores.values():
            for name, tbl in core.flex.items():
                vals = [v for v in tbl.values()
                        if not isinstance(v, (bool, Fraction)) and v != INFTY]
                cur = self._sym_bound.get(name, 0)
                self._sym_bound[name] = max([cur] + [int(v) for v in vals])

    # -- bookkeeping ------------------------------------------------------

    def fv_names(self, n: Node) -> frozenset:
        got = self._fv.get(n)
        if got is None:
            got = frozenset(s.name for s in free_vars(n))
            self._fv[n] = got
        return got

    def core(self, w: str) -> WorldCore:
        try:
            return self.m.cores[w]
        except KeyError:
            raise SemanticsError(f"unknown core {w!r}") from None

    def weight_map(self, w: str, tau: Dur) -> dict[str, Fraction]:
        if tau != INFTY and tau > self.h:
            tau = INFTY  # weight maps stabilize past the horizon
        wmap = self.m.family.get((w, tau))
        if wmap is None:
            raise MissingWeightMap(f"no weight map for core {w!r} at {format_dur(tau)}")
        return wmap

    def equiv(self, w: str, v: str, tau: Dur) -> bool:
        if w == v:
            return True
        if tau != INFTY:
            tau = min(tau, self.h) if tau <= self.h else self.h + 1
        key = (w, v, tau) if w < v else (v, w, tau)
        got = self._equiv_memo.get(key)
        if got is None:
            got = self._equiv_raw(*key)
            self._equiv_memo[key] = got
        return got

    def _equiv_raw(self, w: str, v: str, tau: Dur) -> bool:
        cw, cv = self.core(w), self.core(v)
        if content_signature(cw, tau, self.h) != content_signature(cv, tau, self.h):
            return False
        for t in _grid_taus(self.m):
            if t <= tau or (tau > self.h and t != INFTY) or tau == INFTY:
                if self.m.family.get((w, t)) != self.m.family.get((v, t)):
                    return False
        if tau > self.h:  # stabilized maps at finite times past the horizon
            if self.m.family.get((w, INFTY)) != self.m.family.get((v, INFTY)):
                return False
        return True

    # -- duration budget: bound past which chop-split truth is constant ----

    def dur_budget(self, n: Node, a: Assignment) -> int:
        """Total drift the formula's atoms allow before truth goes constant.

        On an interval [start, k] every term is affine in k once k passes
        the horizon: lengths grow at rate one, durations at their
        stabilization rate with an offset at most H+1, and variables and
        constants are fixed.  An equation between such terms either holds
        on a tail of k or pins k near start, displaced by at most the sum
        of the finite leaf values and one H+2 allowance per duration term.
        """
        total = 0
        for sub in walk(n):
            if isinstance(sub, Var) and sub.sort == Sort.DUR:
                val = a.get(sub.name)
                if val is None:
                    total += self.xmax
                elif val != INFTY:
                    total += int(val)
            elif isinstance(sub, Const) and sub.sort == Sort.DUR:
                if sub.name in ("0", "l", "inf"):
                    continue
                val = self._rigid_const(sub.name, Sort.DUR)
                if val != INFTY:
                    total += int(val)
                total += self._sym_bound.get(sub.name, 0)
            elif isinstance(sub, FunApp):
                total += self._sym_bound.get(sub.name, 0)
            elif isinstance(sub, DurationOf):
                total += self.h + 2
        return total

    def split_bound(self, start: int, n: Node, a: Assignment) -> int:
        # the +2 margin reaches the first split whose left part contains a
        # stabilized time point (k = H+2 when the budget is empty)
        return max(self.h, start) + self.dur_budget(n, a) + 2

    # -- terms --------------------------------------------------------------

    def _rigid_const(self, name: str, sort: Sort) -> Value:
        some = next(iter(self.m.cores.values()), None)
        if some is not None and name in some.rigid_consts:
            return some.rigid_consts[name]
        return _default_value(sort)

    def _carrier_check(self, name: str, sym: Symbol, args: tuple) -> None:
        for val, sort in zip(args, sym.arg_sorts):
            pool = self.m.carrier[sort]
            if sort == Sort.DUR and val == INFTY:
                continue
            if val not in pool:
                raise OutOfCarrier(
                    f"{name}: argument {format_value(val)} outside the "
                    f"declared {sort.value} carrier")

    def term(self, w: str, a: Assignment, sigma: Interval, t: Term) -> Value:
        if isinstance(t, Var):
            try:
                return a[t.name]
            except KeyError:
                raise UnboundVariable(t.name) from None
        if isinstance(t, Const):
            if t.name == "l":
                return measure(sigma)
            if t.name == "inf":
                return INFTY
            if t.name == "0":
                return _default_value(t.sort or Sort.DUR)
            if t.name == "1":
                return Fraction(1)
            decl = self.m.vocab.lookup(t.name)
            if decl and decl[0].kind == SymbolKind.FLEX_CONST:
                tbl = self.core(w).flex.get(t.name, {})
                return tbl.get((sigma, ()), _default_value(decl[0].sort))
            return self._rigid_const(t.name, t.sort or Sort.DUR)
        if isinstance(t, FunApp):
            if t.name == "+":
                u, v = (self.term(w, a, sigma, x) for x in t.args)
                if u == INFTY or v == INFTY:
                    return INFTY
                return u + v
            if t.name == "*":
                u, v = (self.term(w, a, sigma, x) for x in t.args)
                return u * v
            args = tuple(self.term(w, a, sigma, x) for x in t.args)
            decl = self.m.vocab.lookup(t.name)[0]
            if decl.kind == SymbolKind.FLEX_FUN:
                self._carrier_check(t.name, decl, args)
                tbl = self.core(w).flex.get(t.name, {})
                return tbl.get((sigma, args), _default_value(decl.sort))
            tbl = self.core(w).rigid_funs.get(t.name, {})
            return tbl.get(args, _default_value(decl.sort))
        if isinstance(t, DurationOf):
            return self._duration(w, t.state, sigma)
        if isinstance(t, Prob):
            return self.prob(w, a, sigma, t.body)
        if isinstance(t, Mu):
            return self.term(w, a, sigma, desugar(t))
        raise SemanticsError(f"cannot evaluate term {t!r}")

    def state_val(self, w: str, s: StateExpr, tau: int) -> int:
        if isinstance(s, SZero):
            return 0
        if isinstance(s, SVar):
            bits, stab = self.core(w).traces.get(s.name, ((0,) * (self.h + 1), 0))
            return bits[tau] if tau <= self.h else stab
        if isinstance(s, SImplies):
            return 1 if self.state_val(w, s.lhs, tau) == 0 else self.state_val(w, s.rhs, tau)
        raise SemanticsError(f"cannot evaluate state expression {s!r}")

    def _duration(self, w: str, s: StateExpr, sigma: Interval) -> Dur:
        a, b = sigma
        if b == INFTY:
            if self.state_val(w, s, self.h + 1):
                return INFTY
            return sum(self.state_val(w, s, t) for t in range(a, self.h + 1))
        return sum(self.state_val(w, s, t) for t in range(a, int(b)))

    # -- witness pools for the existential quantifier -----------------------

    def _exists_pool(self, w: str, a: Assignment, sigma: Interval,
                     phi: Exists) -> list[Value]:
        """Carrier values plus solved witnesses for ``exists z . body``.

        Atoms of the shape ``t + z = t'`` (with ``z`` not occurring in the
        rest of the equation) pin the only value of ``z`` that can satisfy
        them, so the comparison expansion ``ex z . t + z = t'`` is decided
        exactly rather than up to the declared carrier.  Two values beyond
        everything mentioned stand in for "any sufficiently fresh witness".
        Solved or fresh values outside the carrier are skipped when the body
        feeds ``z`` into a flexible symbol, whose table only covers the
        carrier.
        """
        zname, zsort = phi.var.name, phi.var.sort
        pool: list[Value] = list(self.m.carrier[zsort])
        if zsort == Sort.DUR and INFTY not in pool:
            pool.append(INFTY)
        if any(isinstance(s, (Exists, Forall)) and s.var.name == zname
               for s in walk(phi.body)):
            return pool  # shadowed binder: keep the plain carrier sweep
        sols = self._linear_solutions(w, a, sigma, phi.body, zname, zsort)
        finite = [v for v in pool + sols if v != INFTY]
        top = max(finite, default=0)
        fresh = [top + 1, top + 2]
        guarded = self._feeds_flexible(phi.body, zname)
        base = set(pool)
        for val in sols + fresh:
            if val in base:
                continue
            if guarded and val not in base:
                continue
            base.add(val)
            pool.append(val)
        return pool

    def _linear_solutions(self, w: str, a: Assignment, sigma: Interval,
                          body: Formula, zname: str, zsort: Sort) -> list[Value]:
        out: list[Value] = []
        for sub in walk(body):
            if not (isinstance(sub, RelApp) and sub.name == "="):
                continue
            lhs, rhs = sub.args
            for side, other in ((lhs, rhs), (rhs, lhs)):
                if zname in self.fv_names(other):
                    continue
                if isinstance(side, Var) and side.name == zname:
                    got = self._try_term(w, a, sigma, other)
                    if got is not None:
                        out.append(got)
                elif isinstance(side, FunApp) and side.name == "+":
                    p, q = side.args
                    for zpart, rest in ((p, q), (q, p)):
                        if not (isinstance(zpart, Var) and zpart.name == zname):
                            continue
                        if zname in self.fv_names(rest):
                            continue
                        target = self._try_term(w, a, sigma, other)
                        offset = self._try_term(w, a, sigma, rest)
                        if target is None or offset is None:
                            continue
                        diff = _solve_plus(offset, target, zsort)
                        if diff is not None:
                            out.append(diff)
        return out

    def _try_term(self, w: str, a: Assignment, sigma: Interval,
                  t: Term) -> Optional[Value]:
        try:
            return self.term(w, a, sigma, t)
        except SemanticsError:
            return None

    def _feeds_flexible(self, body: Formula, zname: str) -> bool:
        for sub in walk(body):
            if isinstance(sub, (FunApp, RelApp)) and sub.name not in ("+", "*", "="):
                decls = self.m.vocab.lookup(sub.name)
                if decls and decls[0].kind in (SymbolKind.FLEX_FUN,
                                               SymbolKind.FLEX_REL):
                    for arg in sub.args:
                        if zname in self.fv_names(arg):
                            return True
        return False

    # -- formulas -----------------------------------------------------------

    def holds(self, w: str, a: Assignment, sigma: Interval, phi: Formula) -> bool:
        names = self.fv_names(phi)
        key = (phi, w, sigma, tuple(sorted((x, a[x]) for x in names if x in a)))
        got = self._holds_memo.get(key)
        if got is None:
            got = self._holds_raw(w, a, sigma, phi)
            self._holds_memo[key] = got
        return got

    def _holds_raw(self, w: str, a: Assignment, sigma: Interval, phi: Formula) -> bool:
        if isinstance(phi, Bottom):
            return False
        if isinstance(phi, Implies):
            return (not self.holds(w, a, sigma, phi.lhs)) or self.holds(w, a, sigma, phi.rhs)
        if isinstance(phi, RelApp):
            vals = tuple(self.term(w, a, sigma, x) for x in phi.args)
            if phi.name == "=":
                return vals[0] == vals[1]
            decl = self.m.vocab.lookup(phi.name)[0]
            if decl.kind == SymbolKind.FLEX_REL:
                self._carrier_check(phi.name, decl, vals)
                tbl = self.core(w).flex.get(phi.name, {})
                return bool(tbl.get((sigma, vals), False))
            return vals in self.core(w).rigid_rels.get(phi.name, frozenset())
        if isinstance(phi, Chop):
            start, end = sigma
            if end != INFTY:
                ks: Iterable[int] = range(start, int(end) + 1)
                return any(self.holds(w, a, (start, k), phi.lhs)
                           and self.holds(w, a, (k, end), phi.rhs) for k in ks)
            bound = self.split_bound(start, phi.lhs, a)
            return any(self.holds(w, a, (start, k), phi.lhs)
                       and self.holds(w, a, (k, INFTY), phi.rhs)
                       for k in range(start, bound + 1))
        if isinstance(phi, Exists):
            over = dict(a)
            for val in self._exists_pool(w, a, sigma, phi):
                over[phi.var.name] = val
                if self.holds(w, over, sigma, phi.body):
                    return True
            return False
        if isinstance(phi, DiaR):
            start, end = sigma
            if end == INFTY:
                return False  # no interval starts at infinity
            bound = self.split_bound(int(end), phi.body, a)
            if any(self.holds(w, a, (int(end), k), phi.body)
                   for k in range(int(end), bound + 1)):
                return True
            return self.holds(w, a, (int(end), INFTY), phi.body)
        if isinstance(phi, DiaL):
            start = sigma[0]
            return any(self.holds(w, a, (k, start), phi.body)
                       for k in range(0, start + 1))
        if isinstance(phi, (StateHolds,)) or not is_core(phi):
            return self.holds(w, a, sigma, desugar(phi))
        raise SemanticsError(f"cannot evaluate formula {phi!r}")

    # -- probability ---------------------------------------------------------

    def prob(self, w: str, a: Assignment, sigma: Interval, psi: Formula) -> Fraction:
        names = self.fv_names(psi)
        sub = {x: a[x] for x in names if x in a}
        key = (psi, w, sigma, tuple(sorted(sub.items())))
        got = self._prob_memo.get(key)
        if got is None:
            tau = sigma[1]
            wmap = self.weight_map(w, tau)
            total = Fraction(0)
            for v in self.m.cores:
                weight = wmap.get(v, Fraction(0))
                if weight == 0 or not self.equiv(w, v, tau):
                    continue
                if self.holds(v, sub, (sigma[0], INFTY), psi):
                    total += weight
            got = total
            self._prob_memo[key] = got
        return got


def _ev(model: DiscreteModel) -> _Evaluator:
    ev = model.__dict__.get("_ev")
    if ev is None:
        ev = _Evaluator(model)
        model.__dict__["_ev"] = ev
    return ev


def eval_term(model: DiscreteModel, w: str, a: Assignment, sigma: Interval,
              t: Term) -> Value:
    return _ev(model).term(w, a, sigma, desugar(t))


def holds(model: DiscreteModel, w: str, a: Assignment, sigma: Interval,
          phi: Formula) -> bool:
    return _ev(model).holds(w, a, sigma, desugar(phi))


def eval_prob(model: DiscreteModel, w: str, a: Assignment, sigma: Interval,
              psi: Formula) -> Fraction:
    return _ev(model).prob(w, a, sigma, desugar(psi))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    path: str
    detail: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"{self.kind} {self.path} {self.detail}"


def _errors_only(report: Iterable[Violation]) -> list[Violation]:
    return [v for v in report if v.severity == "error"]


def validate_model(model: DiscreteModel) -> list[Violation]:
    """Structural and frame-axiom checks; returns one finding per line.

    Severity "note" marks boundary observations (split points past the
    horizon) that do not make the model invalid.
    """
    out: list[Violation] = []
    h = model.frame.horizon
    taus = _grid_taus(model)
    dur_carrier = model.carrier[Sort.DUR]
    prob_carrier = model.carrier[Sort.PROB]

    # declared-symbol conformance of the tables
    canonical = set(model.frame.canonical_intervals())
    for wid, core in model.cores.items():
        for name, tbl in core.flex.items():
            decls = [d for d in model.vocab.lookup(name) if
                     d.kind in (SymbolKind.FLEX_CONST, SymbolKind.FLEX_FUN,
                                SymbolKind.FLEX_REL)]
            if not decls:
                out.append(Violation("UndeclaredSymbol", f"core[{wid}].flex[{name}]",
                                     "not a flexible symbol of the vocabulary"))
                continue
            decl = decls[0]
            for (iv, args), val in tbl.items():
                path = f"core[{wid}].flex[{name}]{list(iv)}"
                if iv not in canonical:
                    out.append(Violation("TableInterval", path, "not canonical"))
                if len(args) != len(decl.arg_sorts):
                    out.append(Violation("TableArity", path,
                                         f"expected {len(decl.arg_sorts)} args"))
                    continue
                for x, srt in zip(args, decl.arg_sorts):
                    pool = model.carrier[srt]
                    if x != INFTY and x not in pool:
                        out.append(Violation("CarrierViolation", path,
                                             f"argument {format_value(x)}"))
        for name, (bits, stab) in core.traces.items():
            decls = model.vocab.lookup(name)
            if not decls or decls[0].kind != SymbolKind.STATE_VAR:
                out.append(Violation("UndeclaredSymbol", f"core[{wid}].trace[{name}]",
                                     "not a state variable"))
            if len(bits) != h + 1:
                out.append(Violation("TraceLength", f"core[{wid}].trace[{name}]",
                                     f"{len(bits)} bits for horizon {h}"))
            if stab not in (0, 1) or any(b not in (0, 1) for b in bits):
                out.append(Violation("TraceValue", f"core[{wid}].trace[{name}]",
                                     "bits must be 0/1"))

    # rigid tables shared
    cores = list(model.cores.values())
    for other in cores[1:]:
        if _rigid_sig(other) != _rigid_sig(cores[0]):
            out.append(Violation("RigidMismatch", f"core[{other.id}]",
                                 f"rigid table differs from core[{cores[0].id}]"))

    # weight maps: grid coverage, mass, concentration
    for (wid, tau), wmap in model.family.items():
        path = f"prob[{wid}@{format_dur(tau)}]"
        if wid not in model.cores:
            out.append(Violation("UnknownCore", path, "owner not a core"))
            continue
        for v in wmap:
            if v not in model.cores:
                out.append(Violation("UnknownCore", path, f"weight on {v}"))
        total = sum(wmap.values(), Fraction(0))
        if total != 1:
            out.append(Violation("TotalMass", path, f"sums to {total}"))
        for v, weight in wmap.items():
            if weight < 0:
                out.append(Violation("NegativeWeight", path, f"{v}={weight}"))
            if weight > 0 and v in model.cores and not equiv_at(model, wid, v, tau):
                out.append(Violation("Concentration", path,
                                     f"positive weight on non-equivalent {v}"))
    for wid in model.cores:
        for tau in taus:
            if (wid, tau) not in model.family:
                out.append(Violation("GridGap", f"prob[{wid}@{format_dur(tau)}]",
                                     "missing weight map"))

    # refinement: equivalence at a later time implies it at an earlier one
    ids = list(model.cores)
    levels = taus
    for i, w in enumerate(ids):
        for v in ids[i + 1:]:
            for t1, t2 in zip(levels[1:], levels[:-1]):
                if equiv_at(model, w, v, t1) and not equiv_at(model, w, v, t2):
                    out.append(Violation("Refinement", f"equiv[{w},{v}]",
                                         f"holds at {format_dur(t1)} "
                                         f"but not at {format_dur(t2)}"))

    out.extend(_frame_axiom_checks(model.frame, dur_carrier, prob_carrier))
    return out


def _frame_axiom_checks(frame: DiscreteFrame, dur_carrier, prob_carrier
                        ) -> list[Violation]:
    out: list[Violation] = []
    rng = random.Random(12345)
    h = frame.horizon

    def dplus(x, y):
        return INFTY if INFTY in (x, y) else x + y

    ds = list(dur_carrier)
    if INFTY not in ds:
        ds.append(INFTY)
    triples = [(rng.choice(ds), rng.choice(ds), rng.choice(ds)) for _ in range(200)]
    for x, y, z in triples:
        if dplus(x, dplus(y, z)) != dplus(dplus(x, y), z):
            out.append(Violation("FrameAxiom", "D1", f"{x},{y},{z}"))
        if dplus(x, 0) != x or dplus(0, x) != x:
            out.append(Violation("FrameAxiom", "D2", f"{x}"))
        if dplus(x, y) == dplus(x, z) and not (x == INFTY or y == z):
            out.append(Violation("FrameAxiom", "D3'", f"{x},{y},{z}"))
        if dplus(x, z) == dplus(y, z) and not (z == INFTY or x == y):
            out.append(Violation("FrameAxiom", "D3'", f"{x},{y},{z}"))
        if dplus(x, y) == 0 and not (x == 0 and y == 0):
            out.append(Violation("FrameAxiom", "D4", f"{x},{y}"))
        if not (x <= y or y <= x):
            out.append(Violation("FrameAxiom", "D5", f"{x},{y}"))
        if (dplus(x, y) == INFTY) != (x == INFTY or y == INFTY):
            out.append(Violation("FrameAxiom", "D6", f"{x},{y}"))

    us = list(prob_carrier)
    utriples = [(rng.choice(us), rng.choice(us), rng.choice(us)) for _ in range(200)]
    for x, y, z in utriples:
        if x + (y + z) != (x + y) + z:
            out.append(Violation("FrameAxiom", "U1", f"{x},{y},{z}"))
        if x + y != y + x:
            out.append(Violation("FrameAxiom", "U2", f"{x},{y}"))
        if x + 0 != x:
            out.append(Violation("FrameAxiom", "U3", f"{x}"))
        if x + y == x + z and y != z:
            out.append(Violation("FrameAxiom", "U4", f"{x},{y},{z}"))
        if x + y == 0 and not (x == 0 and y == 0):
            out.append(Violation("FrameAxiom", "U5", f"{x},{y}"))
        if not (x <= y or y <= x):
            out.append(Violation("FrameAxiom", "U6", f"{x},{y}"))
        if (x * y) * z != x * (y * z):
            out.append(Violation("FrameAxiom", "U8", f"{x},{y},{z}"))
        if x * y != y * x:
            out.append(Violation("FrameAxiom", "U9", f"{x},{y}"))
        if (x + y) * z != x * z + y * z:
            out.append(Violation("FrameAxiom", "U10", f"{x},{y},{z}"))
        if x * 1 != x:
            out.append(Violation("FrameAxiom", "U11", f"{x}"))
        if x * y == x * z and not (x == 0 or y == z):
            out.append(Violation("FrameAxiom", "U12", f"{x},{y},{z}"))
        if x != 0 and (z / x) * x != z:
            out.append(Violation("FrameAxiom", "U13", f"{x},{z}"))
    if Fraction(0) == Fraction(1):
        out.append(Violation("FrameAxiom", "U7", "0=1"))

    intervals = frame.canonical_intervals()
    for iv in intervals:
        a, b = iv
        if (measure(iv) == INFTY) != (b == INFTY):
            out.append(Violation("FrameAxiom", "M4", f"{list(iv)}"))
        top = h if b == INFTY else int(b)
        for k in range(a, top + 1):
            if dplus(measure((a, k)), measure((k, b))) != measure(iv):
                out.append(Violation("FrameAxiom", "M2", f"{list(iv)} at {k}"))
        for jv in intervals:
            if jv[0] == a and measure(jv) == measure(iv) and jv != iv:
                out.append(Violation("FrameAxiom", "M1", f"{list(iv)} vs {list(jv)}"))
        for x in dur_carrier:
            m = measure(iv)
            if x == INFTY:
                solvable = m == INFTY
                witness_ok = solvable  # the split point is infinity itself
            else:
                solvable = m == INFTY or x <= m
                witness_ok = solvable and a + x <= h
            if solvable and not witness_ok:
                out.append(Violation("Boundary", "M3",
                                     f"split of {list(iv)} at {format_value(x)} "
                                     "lies past the horizon", severity="note"))
    return out


# ---------------------------------------------------------------------------
# Conditional families and the law of total probability
# ---------------------------------------------------------------------------


def build_conditional_family(cores: Iterable[WorldCore],
                             global_weights: Mapping[str, Fraction],
                             taus: Iterable[Dur],
                             horizon: int) -> ProbabilityFamily:
    """Condition one global measure on behaviour equivalence at each time.

    At (w, tau) the weights are the global ones restricted to the class of
    cores content-equivalent to w at tau, renormalized; a class of global
    mass zero receives the uniform distribution instead.
    """
    cores = list(cores)
    family: ProbabilityFamily = {}
    for tau in taus:
        classes: dict = {}
        for core in cores:
            classes.setdefault(content_signature(core, tau, horizon), []).append(core)
        for members in classes.values():
            mass = sum((global_weights.get(c.id, Fraction(0)) for c in members),
                       Fraction(0))
            if mass > 0:
                wmap = {c.id: Fraction(global_weights.get(c.id, Fraction(0))) / mass
                        for c in members}
            else:
                wmap = {c.id: Fraction(1, len(members)) for c in members}
            wmap = {k: v for k, v in wmap.items() if v != 0}
            for c in members:
                family[(c.id, tau)] = dict(wmap)
    return family


def check_total_probability(model: DiscreteModel, w0: str, phi: Formula,
                            tau: Dur, tau_p: Dur) -> tuple[bool, Fraction]:
    """Exact two-stage averaging check for the weight family.

    Measures the set of cores satisfying phi (over their whole behaviour,
    interval [0, infinity]) directly under (w0, tau), and again by first
    distributing over cores at tau and then measuring under each at tau_p.
    Returns (equal, residual); a family conditioned from one global measure
    gives residual exactly 0.
    """
    if not (tau <= tau_p):
        raise SemanticsError("check_total_probability needs tau <= tau'")
    ev = _ev(model)
    sat = {v for v in model.cores if holds(model, v, {}, (0, INFTY), phi)}
    outer = ev.weight_map(w0, tau)
    lhs = sum((wt for v, wt in outer.items() if v in sat), Fraction(0))
    rhs = Fraction(0)
    for v, wt in outer.items():
        inner = ev.weight_map(v, tau_p)
        rhs += wt * sum((q for u, q in inner.items() if u in sat), Fraction(0))
    return lhs == rhs, lhs - rhs


# ---------------------------------------------------------------------------
# Neighbourhood-logic models
# ---------------------------------------------------------------------------


@dataclass
class NLModel:
    """A single behaviour over a finite window [0, window] of time points."""

    window: int
    vocab: Vocabulary
    flex: dict[str, dict[tuple[Interval, tuple[Value, ...]], Value]] = field(
        default_factory=dict)
    traces: dict[str, tuple[int, ...]] = field(default_factory=dict)
    rigid_consts: dict[str, Value] = field(default_factory=dict)
    rigid_funs: dict[str, dict[tuple[Value, ...], Value]] = field(default_factory=dict)
    rigid_rels: dict[str, frozenset] = field(default_factory=dict)
    carrier: dict[Sort, tuple[Value, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.carrier:
            self.carrier = {Sort.DUR: tuple(range(self.window + 1)),
                            Sort.PROB: (Fraction(0), Fraction(1))}


def nl_twin(model: DiscreteModel, w: str, window: Optional[int] = None) -> NLModel:
    """Present one core of a discrete model as a neighbourhood-logic model.

    Traces are unrolled through their stabilization bits up to the window;
    flexible entries on infinite intervals are dropped (the neighbourhood
    fragment never reads them).
    """
    h = model.frame.horizon
    xmax = max([h + 1] + [x for x in model.carrier[Sort.DUR] if x != INFTY])
    wplus = window if window is not None else h + xmax + 2
    core = model.cores[w]
    flex = {name: {(iv, args): val for (iv, args), val in tbl.items()
                   if iv[1] != INFTY}
            for name, tbl in core.flex.items()}
    traces = {}
    for name, (bits, stab) in core.traces.items():
        traces[name] = tuple(bits[t] if t <= h else stab for t in range(wplus + 1))
    return NLModel(window=wplus, vocab=model.vocab, flex=flex, traces=traces,
                   rigid_consts=dict(core.rigid_consts),
                   rigid_funs={k: dict(v) for k, v in core.rigid_funs.items()},
                   rigid_rels=dict(core.rigid_rels),
                   carrier={Sort.DUR: tuple(range(wplus + 1)),
                            Sort.PROB: model.carrier[Sort.PROB]})


def holds_nl(nlm: NLModel, a: Assignment, sigma: Interval, phi: Formula) -> bool:
    phi = desugar(phi)
    _nl_fragment_check(phi)
    return _nl_holds(nlm, a, sigma, phi)


def _nl_fragment_check(phi: Formula) -> None:
    for sub in walk(phi):
        if isinstance(sub, Chop):
            raise NLFragmentError("chop is outside the neighbourhood fragment")
        if isinstance(sub, Const) and sub.name == "inf":
            raise NLFragmentError("the infinity constant is outside the "
                                  "neighbourhood fragment")


def _nl_check_window(nlm: NLModel, sigma: Interval) -> tuple[int, int]:
    a, b = sigma
    if b == INFTY or a < 0 or b > nlm.window:
        raise WindowExceeded(f"interval {list(sigma)} outside window "
                             f"[0,{nlm.window}]")
    return a, int(b)


def _nl_holds(nlm: NLModel, a: Assignment, sigma: Interval, phi: Formula) -> bool:
    i, j = _nl_check_window(nlm, sigma)
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, Implies):
        return (not _nl_holds(nlm, a, sigma, phi.lhs)) or _nl_holds(nlm, a, sigma, phi.rhs)
    if isinstance(phi, RelApp):
        vals = tuple(_nl_term(nlm, a, sigma, x) for x in phi.args)
        if phi.name == "=":
            return vals[0] == vals[1]
        decl = nlm.vocab.lookup(phi.name)[0]
        if decl.kind == SymbolKind.FLEX_REL:
            return bool(nlm.flex.get(phi.name, {}).get((sigma, vals), False))
        return vals in nlm.rigid_rels.get(phi.name, frozenset())
    if isinstance(phi, DiaL):
        return any(_nl_holds(nlm, a, (k, i), phi.body) for k in range(0, i + 1))
    if isinstance(phi, DiaR):
        return any(_nl_holds(nlm, a, (j, k), phi.body)
                   for k in range(j, nlm.window + 1))
    if isinstance(phi, Exists):
        pool = _nl_exists_pool(nlm, a, sigma, phi)
        over = dict(a)
        for val in pool:
            over[phi.var.name] = val
            if _nl_holds(nlm, over, sigma, phi.body):
                return True
        return False
    raise NLFragmentError(f"cannot evaluate {type(phi).__name__} in the "
                          "neighbourhood fragment")


def _nl_try_term(nlm: NLModel, a: Assignment, sigma: Interval,
                 t: Term) -> Optional[Value]:
    try:
        return _nl_term(nlm, a, sigma, t)
    except SemanticsError:
        return None


def _nl_exists_pool(nlm: NLModel, a: Assignment, sigma: Interval,
                    phi: Exists) -> list[Value]:
    """Carrier values plus solved witnesses, as for the interval evaluator."""
    zname, zsort = phi.var.name, phi.var.sort
    pool: list[Value] = list(nlm.carrier[zsort])
    if any(isinstance(s, (Exists, Forall)) and s.var.name == zname
           for s in walk(phi.body)):
        return pool
    seen = set(pool)
    for sub in walk(phi.body):
        if not (isinstance(sub, RelApp) and sub.name == "="):
            continue
        lhs, rhs = sub.args
        for side, other in ((lhs, rhs), (rhs, lhs)):
            if zname in {s.name for s in free_vars(other)}:
                continue
            got: Optional[Value] = None
            if isinstance(side, Var) and side.name == zname:
                got = _nl_try_term(nlm, a, sigma, other)
            elif isinstance(side, FunApp) and side.name == "+":
                for zpart, rest in ((side.args[0], side.args[1]),
                                    (side.args[1], side.args[0])):
                    if not (isinstance(zpart, Var) and zpart.name == zname):
                        continue
                    if zname in {s.name for s in free_vars(rest)}:
                        continue
                    target = _nl_try_term(nlm, a, sigma, other)
                    offset = _nl_try_term(nlm, a, sigma, rest)
                    if target is not None and offset is not None:
                        got = _solve_plus(offset, target, zsort)
            if got is not None and got != INFTY and got not in seen:
                seen.add(got)
                pool.append(got)
    finite = [v for v in pool if v != INFTY]
    top = max(finite, default=0)
    for fresh in (top + 1, top + 2):
        if fresh not in seen:
            seen.add(fresh)
            pool.append(fresh)
    return pool


def _nl_term(nlm: NLModel, a: Assignment, sigma: Interval, t: Term) -> Value:
    if isinstance(t, Var):
        try:
            return a[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    if isinstance(t, Const):
        if t.name == "l":
            return measure(sigma)
        if t.name == "0":
            return _default_value(t.sort or Sort.DUR)
        if t.name == "1":
            return Fraction(1)
        decl = nlm.vocab.lookup(t.name)
        if decl and decl[0].kind == SymbolKind.FLEX_CONST:
            return nlm.flex.get(t.name, {}).get((sigma, ()),
                                                _default_value(decl[0].sort))
        if t.name in nlm.rigid_consts:
            return nlm.rigid_consts[t.name]
        return _default_value(t.sort or Sort.DUR)
    if isinstance(t, FunApp):
        if t.name == "+":
            u, v = (_nl_term(nlm, a, sigma, x) for x in t.args)
            return u + v
        if t.name == "*":
            u, v = (_nl_term(nlm, a, sigma, x) for x in t.args)
            return u * v
        args = tuple(_nl_term(nlm, a, sigma, x) for x in t.args)
        decl = nlm.vocab.lookup(t.name)[0]
        if decl.kind == SymbolKind.FLEX_FUN:
            return nlm.flex.get(t.name, {}).get((sigma, args),
                                                _default_value(decl.sort))
        return nlm.rigid_funs.get(t.name, {}).get(args, _default_value(decl.sort))
    if isinstance(t, DurationOf):
        i, j = _nl_check_window(nlm, sigma)
        return sum(_nl_state(nlm, t.state, tau) for tau in range(i, j))
    if isinstance(t, Prob):
        # A single behaviour: the probability of a formula is its indicator.
        return Fraction(1) if _nl_holds(nlm, a, sigma, t.body) else Fraction(0)
    raise NLFragmentError(f"cannot evaluate term {t!r} in the neighbourhood fragment")


def _nl_state(nlm: NLModel, s: StateExpr, tau: int) -> int:
    if isinstance(s, SZero):
        return 0
    if isinstance(s, SVar):
        bits = nlm.traces.get(s.name)
        if bits is None:
            return 0
        return bits[tau]
    if isinstance(s, SImplies):
        return 1 if _nl_state(nlm, s.lhs, tau) == 0 else _nl_state(nlm, s.rhs, tau)
    raise NLFragmentError(f"cannot evaluate state expression {s!r}")


# ---------------------------------------------------------------------------
# Value formatting and model files
# ---------------------------------------------------------------------------


def format_dur(x: Dur) -> str:
    return "inf" if x == INFTY else str(int(x))


def format_value(v: Value) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v == INFTY:
        return "inf"
    return str(v)


def parse_dur_value(text: str) -> Dur:
    text = text.strip()
    if text == "inf":
        return INFTY
    if not re.fullmatch(r"\d+", text):
        raise ModelFormatError(f"bad duration value {text!r}")
    return int(text)


def parse_prob_value(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"\d+(/\d+)?", text):
        raise ModelFormatError(f"bad probability value {text!r}")
    f = Fraction(text)
    return f


def parse_value(text: str, sort: Sort) -> Value:
    return parse_dur_value(text) if sort == Sort.DUR else parse_prob_value(text)


def parse_bool_value(text: str) -> bool:
    text = text.strip()
    if text in ("true", "1"):
        return True
    if text in ("false", "0"):
        return False
    raise ModelFormatError(f"bad truth value {text!r}")


def _strip_comment(line: str) -> str:
    if line.lstrip().startswith("#"):
        return ""
    for idx, ch in enumerate(line):
        if ch == "#" and idx > 0 and line[idx - 1] in " \t":
            return line[:idx]
    return line


_SECTION_RE = re.compile(r"\[([a-z]+)(?:\s+([^\]]+?))?\s*\]$")
_FLEX_RE = re.compile(r"flex\s+(\S+)\s*\[\s*(\d+)\s*,\s*(\d+|inf)\s*\]\s*"
                      r"\(([^)]*)\)\s*=\s*(.+)$")
_TRACE_RE = re.compile(r"trace\s+(\S+)\s*=\s*0b([01]+)\s+stab\s*=\s*([01])$")
_RIGID_RE = re.compile(r"(\S+?)\s*(?:\(([^)]*)\))?\s*=\s*(.+)$")


def parse_model(text: str) -> DiscreteModel:
    """Read the sectioned text format for discrete models.

    Sections: [vocab] (declaration lines), [frame] horizon=H,
    [carrier dur] / [carrier prob] (value lists), [rigid] (shared table),
    [core ID] with `flex`, `trace` lines, [global] (one measure, the weight
    family is built by conditioning), and [prob ID @ TAU] overrides.
    """
    sections: list[tuple[str, Optional[str], list[str]]] = []
    current: Optional[tuple[str, Optional[str], list[str]]] = None
    for raw in text.splitlines():
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = _SECTION_RE.fullmatch(line)
        if m:
            current = (m.group(1), m.group(2), [])
            sections.append(current)
            continue
        if current is None:
            raise ModelFormatError(f"content before first section: {line!r}")
        current[2].append(line)

    vocab_lines = [line for k, _, b in sections if k == "vocab" for line in b]
    if not vocab_lines:
        raise ModelFormatError("missing [vocab] section")
    try:
        vocab = parse_vocabulary("\n".join(vocab_lines))
    except ParseError as exc:
        raise ModelFormatError(f"vocabulary: {exc}") from exc

    horizon: Optional[int] = None
    for kind, arg, body in sections:
        if kind == "frame":
            for line in body:
                key, _, val = line.partition("=")
                if key.strip() != "horizon":
                    raise ModelFormatError(f"unknown frame field {key.strip()!r}")
                horizon = int(val.strip())
    if horizon is None:
        raise ModelFormatError("missing [frame] horizon")
    frame = DiscreteFrame(horizon)

    carrier: dict[Sort, tuple[Value, ...]] = {}
    for kind, arg, body in sections:
        if kind == "carrier":
            if arg not in ("dur", "prob"):
                raise ModelFormatError(f"unknown carrier sort {arg!r}")
            srt = Sort.DUR if arg == "dur" else Sort.PROB
            vals = []
            for line in body:
                vals.extend(parse_value(p, srt) for p in line.split())
            carrier[srt] = tuple(vals)

    rigid_consts: dict[str, Value] = {}
    rigid_funs: dict[str, dict] = {}
    rigid_rels_raw: dict[str, set] = {}

    def rigid_line(line: str) -> None:
        m = _RIGID_RE.fullmatch(line)
        if not m:
            raise ModelFormatError(f"bad rigid entry {line!r}")
        name, argtext, valtext = m.group(1), m.group(2), m.group(3)
        decls = vocab.lookup(name)
        if not decls:
            raise ModelFormatError(f"rigid entry for undeclared {name!r}")
        decl = decls[0]
        if decl.kind == SymbolKind.RIGID_CONST:
            rigid_consts[name] = parse_value(valtext, decl.sort)
        elif decl.kind in (SymbolKind.RIGID_FUN, SymbolKind.RIGID_REL):
            parts = [p for p in (argtext or "").split(",") if p.strip()]
            if len(parts) != len(decl.arg_sorts):
                raise ModelFormatError(f"{name!r}: expected "
                                       f"{len(decl.arg_sorts)} arguments")
            args = tuple(parse_value(p, s) for p, s in zip(parts, decl.arg_sorts))
            if decl.kind == SymbolKind.RIGID_FUN:
                rigid_funs.setdefault(name, {})[args] = parse_value(valtext, decl.sort)
            elif parse_bool_value(valtext):
                rigid_rels_raw.setdefault(name, set()).add(args)
        else:
            raise ModelFormatError(f"{name!r} is not rigid")

    for kind, arg, body in sections:
        if kind == "rigid":
            for line in body:
                rigid_line(line)
    rigid_rels = {k: frozenset(v) for k, v in rigid_rels_raw.items()}

    cores: dict[str, WorldCore] = {}
    for kind, arg, body in sections:
        if kind != "core":
            continue
        if not arg:
            raise ModelFormatError("core section without an id")
        wid = arg.strip()
        if wid in cores:
            raise ModelFormatError(f"duplicate core {wid!r}")
        core = WorldCore(id=wid, rigid_consts=rigid_consts,
                         rigid_funs=rigid_funs, rigid_rels=rigid_rels)
        for line in body:
            m = _FLEX_RE.fullmatch(line)
            if m:
                name, lo, hi, argtext, valtext = m.groups()
                decls = [d for d in vocab.lookup(name)
                         if d.kind in (SymbolKind.FLEX_CONST, SymbolKind.FLEX_FUN,
                                       SymbolKind.FLEX_REL)]
                if not decls:
                    raise ModelFormatError(f"flex entry for non-flexible {name!r}")
                decl = decls[0]
                iv = (int(lo), parse_dur_value(hi))
                parts = [p for p in argtext.split(",") if p.strip()]
                if len(parts) != len(decl.arg_sorts):
                    raise ModelFormatError(f"{name!r}: expected "
                                           f"{len(decl.arg_sorts)} arguments")
                args = tuple(parse_value(p, s) for p, s in zip(parts, decl.arg_sorts))
                if decl.kind == SymbolKind.FLEX_REL:
                    val: Value = parse_bool_value(valtext)
                else:
                    val = parse_value(valtext, decl.sort)
                if not _is_default(val):
                    core.flex.setdefault(name, {})[(iv, args)] = val
                continue
            m = _TRACE_RE.fullmatch(line)
            if m:
                name, bits, stab = m.groups()
                core.traces[name] = (tuple(int(b) for b in bits), int(stab))
                continue
            raise ModelFormatError(f"bad core line {line!r}")
        cores[wid] = core

    global_weights: Optional[dict[str, Fraction]] = None
    overrides: ProbabilityFamily = {}
    for kind, arg, body in sections:
        if kind == "global":
            global_weights = {}
            for line in body:
                name, _, val = line.partition("=")
                global_weights[name.strip()] = parse_prob_value(val)
        elif kind == "prob":
            if not arg or "@" not in arg:
                raise ModelFormatError("prob section needs `core @ tau`")
            wid, _, taut = arg.partition("@")
            key = (wid.strip(), parse_dur_value(taut))
            wmap = {}
            for line in body:
                name, _, val = line.partition("=")
                wmap[name.strip()] = parse_prob_value(val)
            overrides[key] = wmap

    family: ProbabilityFamily = {}
    if global_weights is not None:
        for name in global_weights:
            if name not in cores:
                raise ModelFormatError(f"global weight on unknown core {name!r}")
        family = build_conditional_family(cores.values(), global_weights,
                                          frame.time_points(), horizon)
    family.update(overrides)

    if not carrier:
        carrier = default_carriers(horizon, family)
    else:
        carrier.setdefault(Sort.DUR, default_carriers(horizon, family)[Sort.DUR])
        carrier.setdefault(Sort.PROB, default_carriers(horizon, family)[Sort.PROB])

    return DiscreteModel(frame=frame, vocab=vocab, cores=cores,
                         family=family, carrier=carrier)


def load_model(path: str) -> DiscreteModel:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model(fh.read())
