"""Builders that assemble the bundled proof scripts line by line.

Every derived theorem and rule in the checker's registry is backed by a
plain-text proof script under ``scripts/``; this module constructs those
scripts programmatically, so each one can be regenerated, checked, and
kept in sync with the registry records.  :class:`ProofBuilder` collects
formula/justification pairs, renders them in the proof-file format, and
runs the checker over the result; :func:`write_scripts` regenerates the
whole directory, refusing to write any script the checker rejects.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Optional

from .parser import parse_vocabulary, pretty
from .proofsys import ProofVerdict, check_proof, parse_proof_file
from .syntax import (
    INF, L, ONE_P, ZERO_D, ZERO_P,
    And, Bottom, Chop, Cmp, Exists, Formula, Iff, Implies, Node, Not, Or,
    Prob, RelApp, Sort, Term, Top, Var, Vocabulary, add, eq, mul, var_symbol,
)

__all__ = ["COMMON_VOCAB", "ProofBuilder", "SCRIPT_BUILDERS",
           "common_vocabulary", "write_scripts"]

#: Vocabulary shared by all bundled scripts (written to ``common.vocab``).
COMMON_VOCAB = """\
# Shared vocabulary for the bundled proof scripts.
var x : prob
var y : prob
var u : prob
var v : prob
var w : prob
var g : prob
var x0 : prob
var x1 : prob
var x2 : prob
var a : dur
var b : dur
var yd : dur
flexrel A :
flexrel B :
flexrel C :
rigidrel RA :
"""


def common_vocabulary() -> Vocabulary:
    return parse_vocabulary(COMMON_VOCAB)


_TOP = Top()
_BOT = Bottom()


def _le(a: Term, b: Term) -> Formula:
    return Cmp("<=", a, b)


def _lt(a: Term, b: Term) -> Formula:
    return Cmp("<", a, b)


def _ge(a: Term, b: Term) -> Formula:
    return Cmp(">=", a, b)


def _gt(a: Term, b: Term) -> Formula:
    return Cmp(">", a, b)


def _ne(a: Term, b: Term) -> Formula:
    return Cmp("!=", a, b)


@dataclass
class _Line:
    formula: Formula
    by: str
    note: str


class ProofBuilder:
    """Accumulate proof lines and render/check the resulting script."""

    def __init__(self, name: str, vocab: Optional[Vocabulary] = None,
                 vocab_ref: str = "common.vocab") -> None:
        self.name = name
        self.vocab = common_vocabulary() if vocab is None else vocab
        self.vocab_ref = vocab_ref
        self._lines: list[_Line] = []
        self._hyps: list[tuple[str, Formula]] = []
        self._goal: Optional[Formula] = None

    # -- raw line entry -----------------------------------------------------

    def add(self, formula: Formula, by: str, note: str = "") -> int:
        self._lines.append(_Line(formula, by, note))
        return len(self._lines)

    # -- justification shorthands -------------------------------------------

    def taut(self, f: Formula, note: str = "") -> int:
        return self.add(f, "TAUT", note)

    def prop(self, f: Formula, *refs: int, note: str = "") -> int:
        return self.add(f, "PROP " + " ".join(str(r) for r in refs), note)

    def ax(self, f: Formula, schema: str, note: str = "") -> int:
        return self.add(f, f"AX {schema}", note)

    def mp(self, f: Formula, i: int, j: int, note: str = "") -> int:
        return self.add(f, f"MP {i} {j}", note)

    def thm(self, f: Formula, name: str,
            bindings: Optional[Mapping[str, Node]] = None,
            note: str = "") -> int:
        by = f"THM {name}"
        if bindings:
            inner = ", ".join(f"{k} := {pretty(v)}" for k, v in bindings.items())
            by += " {" + inner + "}"
        return self.add(f, by, note)

    def rule(self, f: Formula, name: str, *refs: int, note: str = "") -> int:
        return self.add(f, f"RULE {name} " + " ".join(str(r) for r in refs),
                        note)

    def hyp(self, name: str, f: Formula, note: str = "") -> int:
        self._hyps.append((name, f))
        return self.add(f, f"HYP {name}", note)

    def pleq(self, f: Formula, i: int, note: str = "") -> int:
        return self.add(f, f"PLEQ {i}", note)

    def pitl1(self, f: Formula, i: int, note: str = "") -> int:
        return self.add(f, f"PITL1 {i}", note)

    def mono_left(self, f: Formula, i: int, note: str = "") -> int:
        return self.add(f, f"MONO-LEFT {i}", note)

    def mono_right(self, f: Formula, i: int, note: str = "") -> int:
        return self.add(f, f"MONO-RIGHT {i}", note)

    def exr(self, f: Formula, binder: str, witness: Term,
            note: str = "") -> int:
        return self.add(f, f"EXR {{{binder} := {pretty(witness)}}}", note)

    def exl(self, i: int, var: str, sort: Sort, note: str = "") -> int:
        """Close the antecedent of line ``i`` under an existential."""
        cited = self._lines[i - 1].formula
        f = Implies(Exists(var_symbol(var, sort), cited.lhs), cited.rhs)
        return self.add(f, f"EXL {i} {var}", note)

    # -- equality steps (formula supplied implicitly) ------------------------

    def eqrefl(self, t: Term, note: str = "") -> int:
        return self.add(eq(t, t), "EQREFL", note)

    def eqsym(self, s: Term, t: Term, note: str = "") -> int:
        return self.add(Implies(eq(s, t), eq(t, s)), "EQSYM", note)

    def eqtrans(self, s: Term, t: Term, u: Term, note: str = "") -> int:
        return self.add(Implies(eq(s, t), Implies(eq(t, u), eq(s, u))),
                        "EQTRANS", note)

    def eqcongf(self, s: Term, t: Term, a: Term, b: Term,
                note: str = "") -> int:
        return self.add(Implies(eq(s, t), eq(a, b)), "EQCONGF", note)

    # -- derived multi-line blocks -------------------------------------------

    def chop_or_dist(self, f: Formula, g: Formula, suffix: Formula,
                     note: str = "") -> int:
        """Distribute a disjunctive left chop operand over the chop."""
        both = Or(f, g)
        d1 = self.ax(Implies(And(Chop(both, suffix), Not(Chop(g, suffix))),
                             Chop(And(both, Not(g)), suffix)), "A1")
        d2 = self.taut(Implies(And(both, Not(g)), f))
        d3 = self.mono_left(Implies(Chop(And(both, Not(g)), suffix),
                                    Chop(f, suffix)), d2)
        return self.prop(Implies(Chop(both, suffix),
                                 Or(Chop(f, suffix), Chop(g, suffix))),
                         d1, d3, note=note)

    def rigid_import(self, chi: Formula, alpha: Formula, suffix: Formula,
                     r_line: int, note: str = "") -> int:
        """Push a rigid conjunct into a chop's left operand.

        ``r_line`` must establish ``(!chi ; suffix) => !chi``.
        """
        split = Or(And(chi, alpha), And(Not(chi), alpha))
        r2 = self.taut(Implies(alpha, split))
        r3 = self.mono_left(Implies(Chop(alpha, suffix), Chop(split, suffix)),
                            r2)
        r4 = self.chop_or_dist(And(chi, alpha), And(Not(chi), alpha), suffix)
        r5t = self.taut(Implies(And(Not(chi), alpha), Not(chi)))
        r5 = self.mono_left(Implies(Chop(And(Not(chi), alpha), suffix),
                                    Chop(Not(chi), suffix)), r5t)
        return self.prop(Implies(And(chi, Chop(alpha, suffix)),
                                 Chop(And(chi, alpha), suffix)),
                         r_line, r3, r4, r5, note=note)

    # -- output ---------------------------------------------------------------

    def goal(self, f: Formula) -> None:
        self._goal = f

    def render(self, vocab_line: bool = True) -> str:
        if self._goal is None:
            raise ValueError(f"{self.name}: no goal set")
        parts: list[str] = []
        if vocab_line:
            parts += [f"vocab {self.vocab_ref}", ""]
        if self._hyps:
            parts.append("hypotheses:")
            parts += [f"  {n}: {pretty(f)}" for n, f in self._hyps]
            parts.append("")
        parts += [f"goal: {pretty(self._goal)}", ""]
        for no, ln in enumerate(self._lines, 1):
            text = f"{no}. {pretty(ln.formula)}  BY {ln.by}"
            if ln.note:
                text += f"  # {ln.note}"
            parts.append(text)
        return "\n".join(parts) + "\n"

    def check(self) -> ProofVerdict:
        proof = parse_proof_file(self.render(vocab_line=False),
                                 vocab=self.vocab, source=self.name)
        return check_proof(proof)

    def checked(self) -> "ProofBuilder":
        verdict = self.check()
        if not verdict.ok:
            no, msg = verdict.error
            ln = self._lines[no - 1] if no <= len(self._lines) else None
            detail = f"  {no}. {pretty(ln.formula)}  BY {ln.by}" if ln else ""
            raise RuntimeError(f"{self.name}: line {no}: {msg}\n{detail}")
        return self


# ---------------------------------------------------------------------------
# Probability-domain order lemmas
# ---------------------------------------------------------------------------


def build_arith() -> ProofBuilder:
    """Order lemmas for the probability and duration domains.

    ``s <= t`` abbreviates ``ex z . s + z = t``; every lemma below unfolds
    that definition with the domain axioms, eliminating the introduced
    existentials through spare variables ``w``, ``g`` and ``b``.
    """
    b = ProofBuilder("arith.prf")
    x, y, u, v, w, g = (Var(n, Sort.PROB) for n in "xyuvwg")
    a = Var("a", Sort.DUR)
    bd = Var("b", Sort.DUR)

    # ADD0L: 0 + x = x
    u3 = b.ax(eq(add(x, ZERO_P), x), "U3")
    c = b.ax(eq(add(ZERO_P, x), add(x, ZERO_P)), "U2")
    t = b.eqtrans(add(ZERO_P, x), add(x, ZERO_P), x)
    s = b.mp(Implies(eq(add(x, ZERO_P), x), eq(add(ZERO_P, x), x)), c, t)
    add0l = b.mp(eq(add(ZERO_P, x), x), u3, s, note="ADD0L")

    # SUM1R: y = 0 => x + y = x
    cg = b.eqcongf(y, ZERO_P, add(x, y), add(x, ZERO_P))
    tr = b.eqtrans(add(x, y), add(x, ZERO_P), x)
    b.prop(Implies(eq(y, ZERO_P), eq(add(x, y), x)), cg, tr, u3, note="SUM1R")

    # LE-REFL: x <= x
    e = b.exr(Implies(eq(add(x, ZERO_P), x), _le(x, x)), "z", ZERO_P)
    b.mp(_le(x, x), u3, e, note="LE-REFL")

    # LE-ZERO: 0 <= x
    e = b.exr(Implies(eq(add(ZERO_P, x), x), _le(ZERO_P, x)), "z", x)
    b.mp(_le(ZERO_P, x), add0l, e, note="LE-ZERO")

    # LE-TRANS: x <= y => (y <= u => x <= u)
    c1 = b.eqcongf(add(x, w), y, add(add(x, w), g), add(y, g))
    t1 = b.eqtrans(add(add(x, w), g), add(y, g), u)
    u1 = b.ax(eq(add(x, add(w, g)), add(add(x, w), g)), "U1")
    t2 = b.eqtrans(add(x, add(w, g)), add(add(x, w), g), u)
    e1 = b.exr(Implies(eq(add(x, add(w, g)), u), _le(x, u)), "z", add(w, g))
    p1 = b.prop(Implies(eq(add(x, w), y), Implies(eq(add(y, g), u), _le(x, u))),
                c1, t1, u1, t2, e1)
    x1 = b.exl(p1, "w", Sort.PROB)
    p2 = b.prop(Implies(eq(add(y, g), u), Implies(_le(x, y), _le(x, u))), x1)
    x2 = b.exl(p2, "g", Sort.PROB)
    b.prop(Implies(_le(x, y), Implies(_le(y, u), _le(x, u))), x2,
           note="LE-TRANS")

    # LE-ANTISYM: x <= y => (y <= x => x = y)
    c1 = b.eqcongf(add(x, w), y, add(add(x, w), g), add(y, g))
    t1 = b.eqtrans(add(add(x, w), g), add(y, g), x)
    t2 = b.eqtrans(add(x, add(w, g)), add(add(x, w), g), x)
    t3 = b.eqtrans(add(x, add(w, g)), x, add(x, ZERO_P))
    s1 = b.eqsym(add(x, ZERO_P), x)
    u4 = b.ax(Implies(eq(add(x, add(w, g)), add(x, ZERO_P)),
                      eq(add(w, g), ZERO_P)), "U4")
    u5 = b.ax(Implies(eq(add(w, g), ZERO_P),
                      And(eq(w, ZERO_P), eq(g, ZERO_P))), "U5")
    c2 = b.eqcongf(w, ZERO_P, add(x, w), add(x, ZERO_P))
    t4 = b.eqtrans(add(x, w), add(x, ZERO_P), x)
    s2 = b.eqsym(add(x, w), x)
    t5 = b.eqtrans(x, add(x, w), y)
    p1 = b.prop(Implies(eq(add(x, w), y), Implies(eq(add(y, g), x), eq(x, y))),
                c1, t1, u1, t2, t3, s1, u4, u5, c2, t4, s2, t5, u3)
    x1 = b.exl(p1, "w", Sort.PROB)
    p2 = b.prop(Implies(eq(add(y, g), x), Implies(_le(x, y), eq(x, y))), x1)
    x2 = b.exl(p2, "g", Sort.PROB)
    b.prop(Implies(_le(x, y), Implies(_le(y, x), eq(x, y))), x2,
           note="LE-ANTISYM")

    # LE-SUBST-L: x = y => (x <= u => y <= u)
    c1 = b.eqcongf(x, y, add(x, w), add(y, w))
    s1 = b.eqsym(add(x, w), add(y, w))
    t1 = b.eqtrans(add(y, w), add(x, w), u)
    e1 = b.exr(Implies(eq(add(y, w), u), _le(y, u)), "z", w)
    p1 = b.prop(Implies(eq(x, y), Implies(eq(add(x, w), u), _le(y, u))),
                c1, s1, t1, e1)
    p2 = b.prop(Implies(eq(add(x, w), u), Implies(eq(x, y), _le(y, u))), p1)
    x1 = b.exl(p2, "w", Sort.PROB)
    b.prop(Implies(eq(x, y), Implies(_le(x, u), _le(y, u))), x1,
           note="LE-SUBST-L")

    # LE-SUBST-R: x = y => (u <= x => u <= y)
    t1 = b.eqtrans(add(u, w), x, y)
    e1 = b.exr(Implies(eq(add(u, w), y), _le(u, y)), "z", w)
    p1 = b.prop(Implies(eq(add(u, w), x), Implies(eq(x, y), _le(u, y))),
                t1, e1)
    x1 = b.exl(p1, "w", Sort.PROB)
    b.prop(Implies(eq(x, y), Implies(_le(u, x), _le(u, y))), x1,
           note="LE-SUBST-R")

    # LE-ADD: x <= y => (u <= v => x + u <= y + v)
    a1 = b.ax(eq(add(u, add(w, g)), add(add(u, w), g)), "U1")
    a2 = b.ax(eq(add(u, w), add(w, u)), "U2")
    a3 = b.eqcongf(add(u, w), add(w, u), add(add(u, w), g), add(add(w, u), g))
    a4 = b.ax(eq(add(w, add(u, g)), add(add(w, u), g)), "U1")
    a5 = b.eqsym(add(w, add(u, g)), add(add(w, u), g))
    a6 = b.ax(eq(add(x, add(u, add(w, g))), add(add(x, u), add(w, g))), "U1")
    a7 = b.eqsym(add(x, add(u, add(w, g))), add(add(x, u), add(w, g)))
    a8 = b.eqcongf(add(u, add(w, g)), add(w, add(u, g)),
                   add(x, add(u, add(w, g))), add(x, add(w, add(u, g))))
    a9 = b.ax(eq(add(x, add(w, add(u, g))), add(add(x, w), add(u, g))), "U1")
    a10 = b.eqcongf(add(x, w), y, add(add(x, w), add(u, g)), add(y, add(u, g)))
    a11 = b.eqcongf(add(u, g), v, add(y, add(u, g)), add(y, v))
    b1 = b.eqtrans(add(u, add(w, g)), add(add(u, w), g), add(add(w, u), g))
    b2 = b.eqtrans(add(u, add(w, g)), add(add(w, u), g), add(w, add(u, g)))
    b3 = b.eqtrans(add(add(x, u), add(w, g)), add(x, add(u, add(w, g))),
                   add(x, add(w, add(u, g))))
    b4 = b.eqtrans(add(add(x, u), add(w, g)), add(x, add(w, add(u, g))),
                   add(add(x, w), add(u, g)))
    b5 = b.eqtrans(add(add(x, u), add(w, g)), add(add(x, w), add(u, g)),
                   add(y, add(u, g)))
    b6 = b.eqtrans(add(add(x, u), add(w, g)), add(y, add(u, g)), add(y, v))
    e1 = b.exr(Implies(eq(add(add(x, u), add(w, g)), add(y, v)),
                       _le(add(x, u), add(y, v))), "z", add(w, g))
    p1 = b.prop(Implies(eq(add(x, w), y),
                        Implies(eq(add(u, g), v), _le(add(x, u), add(y, v)))),
                a1, a2, a3, a4, a5, a6, a7, a8, a9, a10, a11,
                b1, b2, b3, b4, b5, b6, e1)
    p2 = b.prop(Implies(eq(add(u, g), v),
                        Implies(eq(add(x, w), y), _le(add(x, u), add(y, v)))),
                p1)
    x1 = b.exl(p2, "g", Sort.PROB)
    p3 = b.prop(Implies(eq(add(x, w), y),
                        Implies(_le(u, v), _le(add(x, u), add(y, v)))), x1)
    x2 = b.exl(p3, "w", Sort.PROB)
    b.prop(Implies(_le(x, y), Implies(_le(u, v), _le(add(x, u), add(y, v)))),
           x2, note="LE-ADD")

    # LT-LE-TRANS: x < y => (y <= u => x < u)
    lt = b.thm(Implies(_le(y, u), Implies(_le(u, x), _le(y, x))), "LE-TRANS",
               {"x": y, "y": u, "u": x})
    b.prop(Implies(_lt(x, y), Implies(_le(y, u), _lt(x, u))), lt,
           note="LT-LE-TRANS")

    # LE-INF: a <= inf
    d6 = b.ax(Iff(eq(add(a, INF), INF), Or(eq(a, INF), eq(INF, INF))), "D6")
    rf = b.eqrefl(INF)
    m = b.prop(eq(add(a, INF), INF), d6, rf)
    e = b.exr(Implies(eq(add(a, INF), INF), _le(a, INF)), "z", INF)
    b.mp(_le(a, INF), m, e, note="LE-INF")

    # NEQ-INF-LT: a != inf => a < inf
    d6 = b.ax(Iff(eq(add(INF, bd), INF), Or(eq(INF, INF), eq(bd, INF))), "D6")
    m = b.prop(eq(add(INF, bd), INF), d6, rf)
    s = b.eqsym(add(INF, bd), a)
    t = b.eqtrans(a, add(INF, bd), INF)
    p = b.prop(Implies(eq(add(INF, bd), a), Implies(_ne(a, INF), _BOT)),
               m, s, t)
    x1 = b.exl(p, "b", Sort.DUR)
    b.prop(Implies(_ne(a, INF), _lt(a, INF)), x1, note="NEQ-INF-LT")

    # LT-INF-NEQ: a < inf => a != inf
    d2 = b.ax(eq(add(INF, ZERO_D), INF), "D2")
    s = b.eqsym(a, INF)
    t = b.eqtrans(add(INF, ZERO_D), INF, a)
    e = b.exr(Implies(eq(add(INF, ZERO_D), a), _le(INF, a)), "z", ZERO_D)
    p = b.prop(Implies(eq(a, INF), _le(INF, a)), d2, s, t, e)
    goal = Implies(_lt(a, INF), _ne(a, INF))
    b.prop(goal, p, note="LT-INF-NEQ")
    b.goal(goal)
    return b


# ---------------------------------------------------------------------------
# Complement: p(phi) + p(!phi) = 1
# ---------------------------------------------------------------------------


def build_pitl2() -> ProofBuilder:
    b = ProofBuilder("pitl2.prf")
    A = RelApp("A", ())
    pA, pnA = Prob(A), Prob(Not(A))
    pco, pci = Prob(Or(A, Not(A))), Prob(And(A, Not(A)))
    pb, pt = Prob(_BOT), Prob(_TOP)

    l1 = b.taut(Iff(And(A, Not(A)), _BOT))
    l2 = b.pitl1(eq(pci, pb), l1)
    l3 = b.ax(eq(pb, ZERO_P), "PBOT")
    l4 = b.eqtrans(pci, pb, ZERO_P)
    l5 = b.prop(eq(pci, ZERO_P), l2, l3, l4, note="contradiction has mass 0")
    l6 = b.taut(Iff(Or(A, Not(A)), _TOP))
    l7 = b.pitl1(eq(pco, pt), l6)
    l8 = b.ax(eq(pt, ONE_P), "PTOP")
    l9 = b.eqtrans(pco, pt, ONE_P)
    l10 = b.prop(eq(pco, ONE_P), l7, l8, l9, note="excluded middle has mass 1")
    l11 = b.ax(eq(add(pA, pnA), add(pco, pci)), "PPLUS")
    l12 = b.eqcongf(pco, ONE_P, add(pco, pci), add(ONE_P, pci))
    l13 = b.eqcongf(pci, ZERO_P, add(ONE_P, pci), add(ONE_P, ZERO_P))
    l14 = b.ax(eq(add(ONE_P, ZERO_P), ONE_P), "U3")
    l15 = b.eqtrans(add(pA, pnA), add(pco, pci), add(ONE_P, pci))
    l16 = b.eqtrans(add(pA, pnA), add(ONE_P, pci), add(ONE_P, ZERO_P))
    l17 = b.eqtrans(add(pA, pnA), add(ONE_P, ZERO_P), ONE_P)
    goal = eq(add(pA, pnA), ONE_P)
    b.prop(goal, l5, l10, l11, l12, l13, l14, l15, l16, l17)
    b.goal(goal)
    return b


# ---------------------------------------------------------------------------
# Rule: from ((phi;l=inf) | (phi & l=inf)) => (psi => chi)
# conclude phi => p(psi) <= p(chi)
# ---------------------------------------------------------------------------


def _mass_zero_block(b: ProofBuilder, X: Formula) -> tuple[int, int]:
    """Lines for ``l=inf => (X => p(X)=1)`` and ``l=inf => (!X => p(X)=0)``."""
    pX, pnX = Prob(X), Prob(Not(X))
    pos = b.ax(Implies(eq(L, INF), Iff(X, eq(pX, ONE_P))), "PINF")
    neg = b.ax(Implies(eq(L, INF), Iff(Not(X), eq(pnX, ONE_P))), "PINF")
    tot = b.thm(eq(add(pX, pnX), ONE_P), "PITL2", {"phi": X})
    g1 = b.eqcongf(pnX, ONE_P, add(pX, pnX), add(pX, ONE_P))
    g2 = b.eqsym(add(pX, pnX), add(pX, ONE_P))
    g3 = b.eqtrans(add(pX, ONE_P), add(pX, pnX), ONE_P)
    g4 = b.ax(eq(add(ONE_P, pX), add(pX, ONE_P)), "U2")
    g5 = b.eqtrans(add(ONE_P, pX), add(pX, ONE_P), ONE_P)
    g6 = b.ax(eq(add(ONE_P, ZERO_P), ONE_P), "U3")
    g7 = b.eqsym(add(ONE_P, ZERO_P), ONE_P)
    g8 = b.eqtrans(add(ONE_P, pX), ONE_P, add(ONE_P, ZERO_P))
    g9 = b.ax(Implies(eq(add(ONE_P, pX), add(ONE_P, ZERO_P)),
                      eq(pX, ZERO_P)), "U4")
    zer = b.prop(Implies(eq(L, INF), Implies(Not(X), eq(pX, ZERO_P))),
                 neg, tot, g1, g2, g3, g4, g5, g6, g7, g8, g9)
    one = b.prop(Implies(eq(L, INF), Implies(X, eq(pX, ONE_P))), pos)
    return one, zer


def build_pleqinf() -> ProofBuilder:
    b = ProofBuilder("pleqinf.prf")
    A, B, C = (RelApp(n, ()) for n in "ABC")
    pB, pC = Prob(B), Prob(C)
    a = Var("a", Sort.DUR)
    linf = eq(L, INF)

    h0 = b.hyp("h0", Implies(Or(Chop(A, linf), And(A, linf)),
                             Implies(B, C)))
    fin_prem = b.prop(Implies(Chop(A, linf), Implies(B, C)), h0)
    fin = b.pleq(Implies(And(A, _lt(L, INF)), _le(pB, pC)), fin_prem,
                 note="finite-interval case")

    b_one, b_zer = _mass_zero_block(b, B)
    c_one, c_zer = _mass_zero_block(b, C)
    table = b.prop(
        Implies(And(linf, A),
                Or(Or(And(eq(pB, ZERO_P), eq(pC, ZERO_P)),
                      And(eq(pB, ZERO_P), eq(pC, ONE_P))),
                   And(eq(pB, ONE_P), eq(pC, ONE_P)))),
        h0, b_one, b_zer, c_one, c_zer,
        note="on an infinite interval both masses are 0 or 1")

    t1 = b.thm(_le(ZERO_P, pC), "LE-ZERO", {"x": pC})
    t2 = b.eqsym(pB, ZERO_P)
    t3 = b.thm(Implies(eq(ZERO_P, pB), Implies(_le(ZERO_P, pC), _le(pB, pC))),
               "LE-SUBST-L", {"x": ZERO_P, "y": pB, "u": pC})
    t4 = b.eqtrans(pB, ONE_P, pC)
    t5 = b.eqsym(pC, ONE_P)
    t6 = b.eqsym(pB, pC)
    t7 = b.thm(_le(pC, pC), "LE-REFL", {"x": pC})
    t8 = b.thm(Implies(eq(pC, pB), Implies(_le(pC, pC), _le(pB, pC))),
               "LE-SUBST-L", {"x": pC, "y": pB, "u": pC})
    infc = b.prop(Implies(And(A, linf), _le(pB, pC)),
                  table, t1, t2, t3, t4, t5, t6, t7, t8,
                  note="infinite-interval case")

    d6 = b.ax(Iff(eq(add(INF, a), INF), Or(eq(INF, INF), eq(a, INF))), "D6")
    rf = b.eqrefl(INF)
    s = b.eqsym(add(INF, a), L)
    t = b.eqtrans(L, add(INF, a), INF)
    p = b.prop(Implies(eq(add(INF, a), L), eq(L, INF)), d6, rf, s, t)
    x1 = b.exl(p, "a", Sort.DUR)
    split = b.prop(Or(_lt(L, INF), eq(L, INF)), x1,
                   note="every interval is finite or infinite")

    goal = Implies(A, _le(pB, pC))
    b.prop(goal, fin, infc, split)
    b.goal(goal)
    return b


# ---------------------------------------------------------------------------
# Rule: from phi => (psi => bot), phi rigid, conclude phi => p(psi) = 0
# ---------------------------------------------------------------------------


def build_condzero() -> ProofBuilder:
    b = ProofBuilder("condzero.prf")
    RA, B = RelApp("RA", ()), RelApp("B", ())
    pB, pbot = Prob(B), Prob(_BOT)
    linf = eq(L, INF)

    h0 = b.hyp("h0", Implies(RA, Implies(B, _BOT)))
    r = b.ax(Implies(Chop(RA, linf), RA), "R")
    up = b.prop(Implies(Or(Chop(RA, linf), And(RA, linf)),
                        Implies(B, _BOT)), h0, r)
    le1 = b.rule(Implies(RA, _le(pB, pbot)), "PLEQINF", up)
    dn = b.taut(Implies(Or(Chop(RA, linf), And(RA, linf)),
                        Implies(_BOT, B)))
    le2 = b.rule(Implies(RA, _le(pbot, pB)), "PLEQINF", dn)
    anti = b.thm(Implies(_le(pB, pbot), Implies(_le(pbot, pB), eq(pB, pbot))),
                 "LE-ANTISYM", {"x": pB, "y": pbot})
    z = b.ax(eq(pbot, ZERO_P), "PBOT")
    t = b.eqtrans(pB, pbot, ZERO_P)
    goal = Implies(RA, eq(pB, ZERO_P))
    b.prop(goal, le1, le2, anti, z, t)
    b.goal(goal)
    return b


# ---------------------------------------------------------------------------
# p(phi) = p(phi & l = inf)
# ---------------------------------------------------------------------------


def build_pitl4() -> ProofBuilder:
    b = ProofBuilder("pitl4.prf")
    A = RelApp("A", ())
    linf = eq(L, INF)
    AI = And(A, linf)
    pA, pAI = Prob(A), Prob(AI)
    shell = Or(Chop(_TOP, linf), And(_TOP, linf))

    p2 = b.ax(Implies(Chop(_TOP, linf), linf), "P2")
    up = b.prop(Implies(shell, Implies(A, AI)), p2)
    le1 = b.rule(_le(pA, pAI), "PLEQINF", up)
    dn = b.taut(Implies(shell, Implies(AI, A)))
    le2 = b.rule(_le(pAI, pA), "PLEQINF", dn)
    anti = b.thm(Implies(_le(pA, pAI), Implies(_le(pAI, pA), eq(pA, pAI))),
                 "LE-ANTISYM", {"x": pA, "y": pAI})
    goal = eq(pA, pAI)
    b.prop(goal, le1, le2, anti)
    b.goal(goal)
    return b


# ---------------------------------------------------------------------------
# p(phi) < p(psi) => p(psi & !phi) != 0
# ---------------------------------------------------------------------------


def build_pitl3() -> ProofBuilder:
    b = ProofBuilder("pitl3.prf")
    A, B = RelApp("A", ()), RelApp("B", ())
    rest = And(B, Not(A))
    pA, pB, pR = Prob(A), Prob(B), Prob(rest)
    pAB = Prob(Or(A, B))
    pun = Prob(Or(A, rest))
    pin = Prob(And(A, rest))
    linf = eq(L, INF)
    shell = Or(Chop(_TOP, linf), And(_TOP, linf))

    mono = b.taut(Implies(shell, Implies(B, Or(A, B))))
    le1 = b.rule(_le(pB, pAB), "PLEQINF", mono,
                 note="a disjunct is at most the disjunction")
    plus = b.ax(eq(add(pA, pR), add(pun, pin)), "PPLUS")
    or_eq = b.taut(Iff(Or(A, rest), Or(A, B)))
    p_or = b.pitl1(eq(pun, pAB), or_eq)
    and_eq = b.taut(Iff(And(A, rest), _BOT))
    p_and = b.pitl1(eq(pin, Prob(_BOT)), and_eq)
    z = b.ax(eq(Prob(_BOT), ZERO_P), "PBOT")
    tz = b.eqtrans(pin, Prob(_BOT), ZERO_P)
    pin0 = b.prop(eq(pin, ZERO_P), p_and, z, tz)
    c1 = b.eqcongf(pun, pAB, add(pun, pin), add(pAB, pin))
    c2 = b.eqcongf(pin, ZERO_P, add(pAB, pin), add(pAB, ZERO_P))
    u3 = b.ax(eq(add(pAB, ZERO_P), pAB), "U3")
    t1 = b.eqtrans(add(pA, pR), add(pun, pin), add(pAB, pin))
    t2 = b.eqtrans(add(pA, pR), add(pAB, pin), add(pAB, ZERO_P))
    t3 = b.eqtrans(add(pA, pR), add(pAB, ZERO_P), pAB)
    split = b.prop(eq(add(pA, pR), pAB),
                   plus, p_or, pin0, c1, c2, u3, t1, t2, t3,
                   note="the remainder tops up p(A) to p(A|B)")
    ltle = b.thm(Implies(_lt(pA, pB), Implies(_le(pB, pAB), _lt(pA, pAB))),
                 "LT-LE-TRANS", {"x": pA, "y": pB, "u": pAB})
    strict = b.prop(Implies(_lt(pA, pB), _lt(pA, pAB)), ltle, le1)
    c3 = b.eqcongf(pR, ZERO_P, add(pA, pR), add(pA, ZERO_P))
    u3a = b.ax(eq(add(pA, ZERO_P), pA), "U3")
    s1 = b.eqsym(add(pA, pR), add(pA, ZERO_P))
    t4 = b.eqtrans(add(pA, ZERO_P), add(pA, pR), pAB)
    s2 = b.eqsym(add(pA, ZERO_P), pA)
    t5 = b.eqtrans(pA, add(pA, ZERO_P), pAB)
    s3 = b.eqsym(pA, pAB)
    refl = b.thm(_le(pAB, pAB), "LE-REFL", {"x": pAB})
    subst = b.thm(Implies(eq(pAB, pA), Implies(_le(pAB, pAB), _le(pAB, pA))),
                  "LE-SUBST-R", {"x": pAB, "y": pA, "u": pAB})
    goal = Implies(_lt(pA, pB), _ne(pR, ZERO_P))
    b.prop(goal, split, strict, c3, u3a, s1, t4, s2, t5, s3, refl, subst)
    b.goal(goal)
    return b


# ---------------------------------------------------------------------------
# Two-cell approximation bounds for p(phi)
# ---------------------------------------------------------------------------


def build_papprox2() -> ProofBuilder:
    """Bound ``p(A)`` by cell probabilities of a three-way partition.

    The cells ``T_i`` chop the interval at ``yd`` and record which band
    ``(x_{i-1}, x_i]`` the prefix-conditional ``p(A)`` falls into; the
    conditional-bound axioms turn the cells into weighted bounds, and a
    partition argument sums them.
    """
    b = ProofBuilder("papprox2.prf")
    A = RelApp("A", ())
    x0, x1, x2 = (Var(n, Sort.PROB) for n in ("x0", "x1", "x2"))
    yd = Var("yd", Sort.DUR)
    pA = Prob(A)
    linf = eq(L, INF)
    lyd = eq(L, yd)

    th = [_le(pA, x0),
          And(_lt(x0, pA), _le(pA, x1)),
          And(_lt(x1, pA), _le(pA, x2))]
    xs = [x0, x1, x2]
    T = [Chop(And(t, lyd), _TOP) for t in th]
    TA = [And(t, A) for t in T]
    pT = [Prob(t) for t in T]
    pTA = [Prob(ta) for ta in TA]
    chi = And(And(And(And(_lt(yd, INF), eq(x0, ZERO_P)), eq(x2, ONE_P)),
                  _le(x0, x1)), _le(x1, x2))

    def zero_block(theta: Formula, guard: Formula) -> int:
        """mass 0 for the cell whose stated band contradicts ``guard``."""
        F = And(And(lyd, theta), guard)
        z1 = b.taut(Implies(F, _BOT))
        z2 = b.mono_left(Implies(Chop(F, _TOP), Chop(_BOT, _TOP)), z1)
        z3 = b.ax(Implies(Chop(_BOT, _TOP), _BOT), "R")
        z4 = b.prop(Implies(_TOP, Implies(Chop(F, _TOP), _BOT)), z2, z3)
        return b.rule(Implies(_TOP, eq(Prob(Chop(F, _TOP)), ZERO_P)),
                      "CONDZERO", z4)

    # Upper bounds: p(T_i & A) <= x_i * p(T_i)
    ub = []
    for i in range(3):
        z5 = zero_block(th[i], _gt(pA, xs[i]))
        bar = b.ax(Implies(And(_le(L, yd),
                               eq(Prob(Chop(And(And(lyd, th[i]),
                                                _gt(pA, xs[i])), _TOP)),
                                  ZERO_P)),
                           _le(pTA[i], mul(xs[i], pT[i]))), "PBAR")
        ub.append(b.prop(Implies(_le(L, yd), _le(pTA[i], mul(xs[i], pT[i]))),
                         z5, bar, note=f"upper cell bound {i}"))

    # Lower bounds: p(T_i & A) >= x_{i-1} * p(T_i), i = 1, 2
    lo = []
    for i in (1, 2):
        z5 = zero_block(th[i], _le(pA, xs[i - 1]))
        low = b.ax(Implies(And(_le(L, yd),
                               eq(Prob(Chop(And(And(lyd, th[i]),
                                                _le(pA, xs[i - 1])), _TOP)),
                                  ZERO_P)),
                           _ge(pTA[i], mul(xs[i - 1], pT[i]))), "PLOW")
        lo.append(b.prop(Implies(_le(L, yd), _ge(pTA[i], mul(xs[i - 1], pT[i]))),
                         z5, low, note=f"lower cell bound {i}"))

    # The cells cover everything: chi => th0 | th1 | th2
    k1 = b.thm(eq(add(pA, Prob(Not(A))), ONE_P), "PITL2", {"phi": A})
    k2 = b.exr(Implies(eq(add(pA, Prob(Not(A))), ONE_P), _le(pA, ONE_P)),
               "z", Prob(Not(A)))
    k3 = b.mp(_le(pA, ONE_P), k1, k2)
    k4 = b.eqsym(x2, ONE_P)
    k5 = b.thm(Implies(eq(ONE_P, x2), Implies(_le(pA, ONE_P), _le(pA, x2))),
               "LE-SUBST-R", {"x": ONE_P, "y": x2, "u": pA})
    cover = b.prop(Implies(chi, Or(Or(th[0], th[1]), th[2])), k3, k4, k5,
                   note="the bands cover [0, x2]")

    # chi & l=inf admits a prefix of length yd
    d6 = b.ax(Iff(eq(add(yd, INF), INF), Or(eq(yd, INF), eq(INF, INF))), "D6")
    rf = b.eqrefl(INF)
    sy = b.eqsym(add(yd, INF), INF)
    tr = b.eqtrans(L, INF, add(yd, INF))
    ne = b.thm(Implies(_lt(yd, INF), _ne(yd, INF)), "LT-INF-NEQ", {"x": yd})
    l2 = b.ax(Iff(And(eq(L, add(yd, INF)), _ne(yd, INF)),
                  Chop(lyd, linf)), "L2")
    tt = b.taut(Implies(linf, _TOP))
    mr = b.mono_right(Implies(Chop(lyd, linf), Chop(lyd, _TOP)), tt)
    prefix = b.prop(Implies(And(chi, linf), Chop(lyd, linf)),
                    d6, rf, sy, tr, ne, l2,
                    note="an infinite interval splits at yd")

    # Rigid import scaffolding
    rR = b.ax(Implies(Chop(Not(chi), _TOP), Not(chi)), "R")
    ri_yd = b.rigid_import(chi, lyd, _TOP, rR,
                           note="import chi into the prefix")

    # Distribute the covering cells over the chop
    cells = Or(Or(And(th[0], lyd), And(th[1], lyd)), And(th[2], lyd))
    cv1 = b.prop(Implies(And(chi, lyd), cells), cover)
    cv2 = b.mono_left(Implies(Chop(And(chi, lyd), _TOP), Chop(cells, _TOP)),
                      cv1)
    cv3 = b.chop_or_dist(Or(And(th[0], lyd), And(th[1], lyd)),
                         And(th[2], lyd), _TOP)
    cv4 = b.chop_or_dist(And(th[0], lyd), And(th[1], lyd), _TOP)
    coverT = b.prop(Implies(And(chi, linf), Or(Or(T[0], T[1]), T[2])),
                    prefix, mr, ri_yd, cv2, cv3, cv4,
                    note="some cell holds on every infinite interval")

    # chi => p(A & l=inf) = p(Dis & l=inf) where Dis lists the cells with A
    D01 = Or(TA[0], TA[1])
    Dis = Or(D01, TA[2])
    AI, DI = And(A, linf), And(Dis, linf)
    pAI, pDI = Prob(AI), Prob(DI)
    ci1 = b.prop(Implies(chi, Implies(AI, DI)), coverT)
    cp1 = b.ax(Implies(Chop(chi, linf), chi), "R")
    cp2 = b.prop(Implies(Or(Chop(chi, linf), And(chi, linf)),
                         Implies(AI, DI)), cp1, ci1)
    cp3 = b.rule(Implies(chi, _le(pAI, pDI)), "PLEQINF", cp2)
    cp4 = b.taut(Implies(Or(Chop(chi, linf), And(chi, linf)),
                         Implies(DI, AI)))
    cp5 = b.rule(Implies(chi, _le(pDI, pAI)), "PLEQINF", cp4)
    cp6 = b.thm(Implies(_le(pAI, pDI), Implies(_le(pDI, pAI), eq(pAI, pDI))),
                "LE-ANTISYM", {"x": pAI, "y": pDI})
    cp7 = b.prop(Implies(chi, eq(pAI, pDI)), cp3, cp5, cp6)
    cp8 = b.thm(eq(pA, pAI), "PITL4", {"phi": A})
    cp9 = b.thm(eq(Prob(Dis), pDI), "PITL4", {"phi": Dis})
    cp10 = b.eqtrans(pA, pAI, pDI)
    cp11 = b.eqsym(Prob(Dis), pDI)
    cp12 = b.eqtrans(pA, pDI, Prob(Dis))
    cp13 = b.prop(Implies(chi, eq(pA, Prob(Dis))),
                  cp7, cp8, cp9, cp10, cp11, cp12,
                  note="p(A) equals the mass of the cell cover")

    # Pairwise disjointness of the cells (same split point)
    def comm(theta: Formula) -> Formula:
        return Chop(And(lyd, theta), _TOP)

    dzA = b.taut(Implies(And(th[0], lyd), And(lyd, th[0])))
    dzB = b.mono_left(Implies(T[0], comm(th[0])), dzA)
    dzC = b.ax(Implies(comm(th[0]),
                       Not(Chop(And(lyd, Not(th[0])), _TOP))), "S1")
    dzD = b.taut(Implies(And(th[1], lyd), And(lyd, Not(th[0]))))
    dzE = b.mono_left(Implies(T[1], Chop(And(lyd, Not(th[0])), _TOP)), dzD)
    dz1 = b.prop(Implies(chi, Implies(And(TA[0], TA[1]), _BOT)),
                 dzB, dzC, dzE, note="cells 0 and 1 exclude each other")
    dz2 = b.rule(Implies(chi, eq(Prob(And(TA[0], TA[1])), ZERO_P)),
                 "CONDZERO", dz1)

    dzF = b.taut(Implies(And(th[1], lyd), And(lyd, th[1])))
    dzG = b.mono_left(Implies(T[1], comm(th[1])), dzF)
    dzH = b.ax(Implies(comm(th[1]),
                       Not(Chop(And(lyd, Not(th[1])), _TOP))), "S1")
    dzI = b.taut(Implies(And(th[2], lyd), And(lyd, Not(th[1]))))
    dzJ = b.mono_left(Implies(T[2], Chop(And(lyd, Not(th[1])), _TOP)), dzI)
    dzK = b.thm(Implies(_le(pA, x0), Implies(_le(x0, x1), _le(pA, x1))),
                "LE-TRANS", {"x": pA, "y": x0, "u": x1})
    dzL = b.prop(Implies(And(chi, And(th[2], lyd)), And(lyd, Not(th[0]))),
                 dzK)
    dzM = b.mono_left(Implies(Chop(And(chi, And(th[2], lyd)), _TOP),
                              Chop(And(lyd, Not(th[0])), _TOP)), dzL)
    ri_t2 = b.rigid_import(chi, And(th[2], lyd), _TOP, rR)
    dz3 = b.prop(Implies(chi, Implies(And(D01, TA[2]), _BOT)),
                 dzG, dzH, dzJ, dzB, dzC, dzM, ri_t2,
                 note="cell 2 excludes cells 0 and 1")
    dz4 = b.rule(Implies(chi, eq(Prob(And(D01, TA[2])), ZERO_P)),
                 "CONDZERO", dz3)

    # chi => p(Dis) = (p(T0&A) + p(T1&A)) + p(T2&A)
    pD01, pDis = Prob(D01), Prob(Dis)
    z01 = Prob(And(TA[0], TA[1]))
    z012 = Prob(And(D01, TA[2]))
    S0 = add(pTA[0], pTA[1])
    S12 = add(pTA[1], pTA[2])
    Sig = add(S0, pTA[2])
    sd1 = b.ax(eq(S0, add(pD01, z01)), "PPLUS")
    eg1 = b.eqcongf(z01, ZERO_P, add(pD01, z01), add(pD01, ZERO_P))
    eg2 = b.ax(eq(add(pD01, ZERO_P), pD01), "U3")
    eg3 = b.eqtrans(S0, add(pD01, z01), add(pD01, ZERO_P))
    eg4 = b.eqtrans(S0, add(pD01, ZERO_P), pD01)
    egA = b.prop(Implies(chi, eq(S0, pD01)), sd1, dz2, eg1, eg2, eg3, eg4)
    sd2 = b.ax(eq(add(pD01, pTA[2]), add(pDis, z012)), "PPLUS")
    eg5 = b.eqcongf(z012, ZERO_P, add(pDis, z012), add(pDis, ZERO_P))
    eg6 = b.ax(eq(add(pDis, ZERO_P), pDis), "U3")
    eg7 = b.eqtrans(add(pD01, pTA[2]), add(pDis, z012), add(pDis, ZERO_P))
    eg8 = b.eqtrans(add(pD01, pTA[2]), add(pDis, ZERO_P), pDis)
    egB = b.prop(Implies(chi, eq(add(pD01, pTA[2]), pDis)),
                 sd2, dz4, eg5, eg6, eg7, eg8)
    eg9 = b.eqcongf(S0, pD01, Sig, add(pD01, pTA[2]))
    eg10 = b.eqtrans(Sig, add(pD01, pTA[2]), pDis)
    eg11 = b.eqsym(Sig, pDis)
    egC = b.prop(Implies(chi, eq(pDis, Sig)), egA, egB, eg9, eg10, eg11)
    fe1 = b.eqtrans(pA, pDis, Sig)
    fe2 = b.prop(Implies(chi, eq(pA, Sig)), cp13, egC, fe1,
                 note="p(A) splits over the three cells")

    # Upper bound assembly
    U01 = add(mul(x0, pT[0]), mul(x1, pT[1]))
    upper = add(U01, mul(x2, pT[2]))
    ub1 = b.thm(Implies(_le(pTA[0], mul(x0, pT[0])),
                        Implies(_le(pTA[1], mul(x1, pT[1])),
                                _le(S0, U01))), "LE-ADD",
                {"x": pTA[0], "y": mul(x0, pT[0]),
                 "u": pTA[1], "v": mul(x1, pT[1])})
    ub2 = b.thm(Implies(_le(S0, U01),
                        Implies(_le(pTA[2], mul(x2, pT[2])),
                                _le(Sig, upper))), "LE-ADD",
                {"x": S0, "y": U01, "u": pTA[2], "v": mul(x2, pT[2])})
    ub3 = b.eqsym(pA, Sig)
    ub4 = b.thm(Implies(eq(Sig, pA), Implies(_le(Sig, upper), _le(pA, upper))),
                "LE-SUBST-L", {"x": Sig, "y": pA, "u": upper})
    ub5 = b.prop(Implies(And(chi, _le(L, yd)), _le(pA, upper)),
                 ub[0], ub[1], ub[2], ub1, ub2, ub3, ub4, fe2,
                 note="upper approximation")

    # Lower bound assembly
    lower = add(mul(x0, pT[1]), mul(x1, pT[2]))
    lb1 = b.thm(Implies(_le(mul(x0, pT[1]), pTA[1]),
                        Implies(_le(mul(x1, pT[2]), pTA[2]),
                                _le(lower, S12))), "LE-ADD",
                {"x": mul(x0, pT[1]), "y": pTA[1],
                 "u": mul(x1, pT[2]), "v": pTA[2]})
    lb2 = b.thm(_le(ZERO_P, pTA[0]), "LE-ZERO", {"x": pTA[0]})
    lb3 = b.thm(Implies(_le(ZERO_P, pTA[0]),
                        Implies(_le(S12, S12),
                                _le(add(ZERO_P, S12), add(pTA[0], S12)))),
                "LE-ADD", {"x": ZERO_P, "y": pTA[0], "u": S12, "v": S12})
    lb4 = b.thm(_le(S12, S12), "LE-REFL", {"x": S12})
    lb5 = b.thm(eq(add(ZERO_P, S12), S12), "ADD0L", {"x": S12})
    lb6 = b.thm(Implies(eq(add(ZERO_P, S12), S12),
                        Implies(_le(add(ZERO_P, S12), add(pTA[0], S12)),
                                _le(S12, add(pTA[0], S12)))),
                "LE-SUBST-L",
                {"x": add(ZERO_P, S12), "y": S12, "u": add(pTA[0], S12)})
    lb7 = b.ax(eq(add(pTA[0], S12), Sig), "U1")
    lb8 = b.thm(Implies(eq(add(pTA[0], S12), Sig),
                        Implies(_le(S12, add(pTA[0], S12)), _le(S12, Sig))),
                "LE-SUBST-R", {"x": add(pTA[0], S12), "y": Sig, "u": S12})
    lb9 = b.thm(Implies(eq(Sig, pA), Implies(_le(S12, Sig), _le(S12, pA))),
                "LE-SUBST-R", {"x": Sig, "y": pA, "u": S12})
    lbH = b.prop(Implies(chi, _le(S12, pA)),
                 lb2, lb3, lb4, lb5, lb6, lb7, lb8, ub3, lb9, fe2)
    lb10 = b.thm(Implies(_le(lower, S12), Implies(_le(S12, pA),
                                                  _le(lower, pA))),
                 "LE-TRANS", {"x": lower, "y": S12, "u": pA})
    lbF = b.prop(Implies(And(chi, _le(L, yd)), _le(lower, pA)),
                 lo[0], lo[1], lb1, lbH, lb10, note="lower approximation")

    goal = Implies(And(chi, _le(L, yd)),
                   And(_le(lower, pA), _le(pA, upper)))
    b.prop(goal, lbF, ub5)
    b.goal(goal)
    return b


#: Script file name -> builder, in registry dependency order.
SCRIPT_BUILDERS: dict[str, Callable[[], ProofBuilder]] = {
    "arith.prf": build_arith,
    "pitl2.prf": build_pitl2,
    "pleqinf.prf": build_pleqinf,
    "condzero.prf": build_condzero,
    "pitl4.prf": build_pitl4,
    "pitl3.prf": build_pitl3,
    "papprox2.prf": build_papprox2,
}


def write_scripts(dest: Path) -> list[str]:
    """Regenerate ``common.vocab`` and every bundled proof script.

    Each script is checked before it is written; a failing builder raises
    and leaves the destination untouched.  Returns the file names written.
    """
    dest = Path(dest)
    rendered: dict[str, str] = {}
    for name, build in SCRIPT_BUILDERS.items():
        rendered[name] = build().checked().render()
    dest.mkdir(parents=True, exist_ok=True)
    (dest / "common.vocab").write_text(COMMON_VOCAB)
    for name, text in rendered.items():
        (dest / name).write_text(text)
    return ["common.vocab", *rendered]
