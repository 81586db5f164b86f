"""Concrete syntax: tokenizer, recursive-descent parser and pretty printer.

The surface language is plain ASCII: ``bot top => <=> & | ! ;`` for the
connectives, ``dia/box`` for eventually/always, ``dia_l dia_r box_l box_r``
for the neighbourhood modalities, ``dur(S)`` and ``[[S]]`` for durations and
state atoms, ``p(...)`` and ``mu(...)(...)`` for probability terms, ``ex
x:dur . phi`` / ``all x:prob . phi`` for quantifiers, and ``l``/``inf`` for
the interval length and the infinite duration.  Chop groups are printed
n-ary in parentheses: ``(a ; b ; c)``.

Numerals: only ``0`` and ``1`` exist; ``1`` is probability-sorted, while a
bare ``0`` takes its sort from the first sort-determined subterm of the
enclosing atom (defaulting to duration) and can be forced with ``0:dur`` /
``0:prob``.  The printer emits annotations only where re-parsing needs them,
so ``parse(pretty(e, vocab), vocab) == e`` holds structurally.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .syntax import (
    And, Box, BoxL, BoxR, Bottom, Chop, Cmp, Const, DiaL, DiaR, Diamond,
    DurationOf, Exists, Forall, Formula, FunApp, Iff, Implies, Mu, Node, Not,
    Or, Prob, RelApp, SImplies, SVar, SZero, Sort, StateExpr, StateHolds,
    Symbol, SymbolKind, Term, Top, Var, Vocabulary, s_and, s_not, s_one,
    s_or, term_sort, var_symbol,
)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int = -1):
        super().__init__(f"{message} (at offset {pos})" if pos >= 0 else message)
        self.pos = pos


class _Fail(Exception):
    """Soft failure used for backtracking between term and formula parses."""


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*(?:\#[0-9]+)?)
  | (?P<num>[0-9]+)
  | (?P<op><=>|=>|<=|>=|!=|\[\[|\]\]|->|[()\[\],.:;=<>&|!+*])
    """,
    re.VERBOSE,
)

_KEYWORDS = frozenset(
    {"bot", "top", "dia", "box", "dia_l", "dia_r", "box_l", "box_r",
     "dur", "p", "mu", "ex", "all", "inf", "l"}
)


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT | NUM | KW | OP | EOF
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        i = m.end()
        if m.lastgroup in ("ws", "comment"):
            continue
        value = m.group()
        if m.lastgroup == "ident":
            kind = "KW" if value in _KEYWORDS else "IDENT"
        elif m.lastgroup == "num":
            kind = "NUM"
        else:
            kind = "OP"
        out.append(Token(kind, value, m.start()))
    out.append(Token("EOF", "", len(text)))
    return out


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_CMP_TOKENS = ("<=", ">=", "!=", "<", ">", "=")


class _Parser:
    def __init__(self, tokens: list[Token], vocab: Vocabulary):
        self.toks = tokens
        self.i = 0
        self.vocab = vocab
        self.env: list[tuple[str, Sort]] = []  # binder stack, innermost last

    # -- token plumbing -----------------------------------------------------

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at_op(self, *values: str) -> bool:
        tok = self.peek()
        return tok.kind == "OP" and tok.value in values

    def expect_op(self, value: str) -> Token:
        tok = self.peek()
        if tok.kind != "OP" or tok.value != value:
            raise ParseError(f"expected {value!r}, found {tok.value or 'end of input'!r}",
                             tok.pos)
        return self.next()

    def _lookup_env(self, name: str) -> Optional[Sort]:
        for n, s in reversed(self.env):
            if n == name:
                return s
        return None

    # -- formulas -----------------------------------------------------------

    def formula(self) -> Formula:
        first = self.iff()
        if not self.at_op(";"):
            return first
        parts = [first]
        while self.at_op(";"):
            self.next()
            parts.append(self.iff())
        out = parts[-1]
        for part in reversed(parts[:-1]):
            out = Chop(part, out)
        return out

    def iff(self) -> Formula:
        out = self.imp()
        while self.at_op("<=>"):
            self.next()
            out = Iff(out, self.imp())
        return out

    def imp(self) -> Formula:
        lhs = self.disj()
        if self.at_op("=>"):
            self.next()
            return Implies(lhs, self.imp())
        return lhs

    def disj(self) -> Formula:
        out = self.conj()
        while self.at_op("|"):
            self.next()
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.prefix()
        while self.at_op("&"):
            self.next()
            out = And(out, self.prefix())
        return out

    _PREFIX = {
        "dia": Diamond, "box": Box,
        "dia_l": DiaL, "dia_r": DiaR, "box_l": BoxL, "box_r": BoxR,
    }

    def prefix(self) -> Formula:
        tok = self.peek()
        if tok.kind == "OP" and tok.value == "!":
            self.next()
            return Not(self.prefix())
        if tok.kind == "KW" and tok.value in self._PREFIX:
            self.next()
            return self._PREFIX[tok.value](self.prefix())
        if tok.kind == "KW" and tok.value in ("ex", "all"):
            return self.quantifier()
        return self.atom_formula()

    def sort_name(self) -> Sort:
        tok = self.next()
        if tok.kind == "KW" and tok.value == "dur":
            return Sort.DUR
        if tok.kind == "IDENT" and tok.value == "prob":
            return Sort.PROB
        raise ParseError("expected sort 'dur' or 'prob'", tok.pos)

    def quantifier(self) -> Formula:
        kw = self.next()
        name_tok = self.next()
        if name_tok.kind != "IDENT":
            raise ParseError("expected a variable name after quantifier", name_tok.pos)
        if self.at_op(":"):
            self.next()
            sort = self.sort_name()
        else:
            env_sort = self._lookup_env(name_tok.value)
            decls = [d for d in self.vocab.lookup(name_tok.value)
                     if d.kind == SymbolKind.VAR]
            if env_sort is not None:
                sort = env_sort
            elif decls:
                sort = decls[0].sort
            else:
                raise ParseError(
                    f"binder {name_tok.value!r} needs a sort annotation or declaration",
                    name_tok.pos,
                )
        self.expect_op(".")
        self.env.append((name_tok.value, sort))
        try:
            body = self.iff()
        finally:
            self.env.pop()
        sym = var_symbol(name_tok.value, sort)
        return Exists(sym, body) if kw.value == "ex" else Forall(sym, body)

    def atom_formula(self) -> Formula:
        tok = self.peek()
        if tok.kind == "KW" and tok.value == "bot":
            self.next()
            return Bottom()
        if tok.kind == "KW" and tok.value == "top":
            self.next()
            return Top()
        if tok.kind == "OP" and tok.value == "[[":
            self.next()
            s = self.state()
            self.expect_op("]]")
            return StateHolds(s)
        # try <term cmp term>, backtracking to the formula grammar on failure
        mark = self.i
        try:
            lhs = self.term()
            op_tok = self.peek()
            if op_tok.kind == "OP" and op_tok.value in _CMP_TOKENS:
                self.next()
                rhs = self.term()
                if op_tok.value == "=":
                    return RelApp("=", (lhs, rhs))
                return Cmp(op_tok.value, lhs, rhs)
            raise _Fail()
        except _Fail:
            self.i = mark
        if tok.kind == "OP" and tok.value == "(":
            self.next()
            f = self.formula()
            self.expect_op(")")
            return f
        if tok.kind == "IDENT":
            decls = [d for d in self.vocab.lookup(tok.value)
                     if d.kind in (SymbolKind.RIGID_REL, SymbolKind.FLEX_REL)]
            if decls:
                self.next()
                args: tuple[Term, ...] = ()
                if self.at_op("("):
                    self.next()
                    if not self.at_op(")"):
                        parts = [self.term()]
                        while self.at_op(","):
                            self.next()
                            parts.append(self.term())
                        args = tuple(parts)
                    self.expect_op(")")
                if not any(len(d.arg_sorts) == len(args) for d in decls):
                    raise ParseError(
                        f"{tok.value!r} takes {len(decls[0].arg_sorts)} argument(s), "
                        f"got {len(args)}", tok.pos)
                return RelApp(tok.value, args)
            raise ParseError(f"{tok.value!r} is not a declared relation", tok.pos)
        raise ParseError(f"expected a formula, found {tok.value or 'end of input'!r}",
                         tok.pos)

    # -- state expressions ----------------------------------------------------

    def state(self) -> StateExpr:
        lhs = self.state_or()
        if self.at_op("=>"):
            self.next()
            return SImplies(lhs, self.state())
        return lhs

    def state_or(self) -> StateExpr:
        out = self.state_and()
        while self.at_op("|"):
            self.next()
            out = s_or(out, self.state_and())
        return out

    def state_and(self) -> StateExpr:
        out = self.state_prefix()
        while self.at_op("&"):
            self.next()
            out = s_and(out, self.state_prefix())
        return out

    def state_prefix(self) -> StateExpr:
        if self.at_op("!"):
            self.next()
            return s_not(self.state_prefix())
        tok = self.peek()
        if tok.kind == "NUM" and tok.value == "0":
            self.next()
            return SZero()
        if tok.kind == "NUM" and tok.value == "1":
            self.next()
            return s_one()
        if tok.kind == "OP" and tok.value == "(":
            self.next()
            s = self.state()
            self.expect_op(")")
            return s
        if tok.kind == "IDENT":
            if not any(d.kind == SymbolKind.STATE_VAR
                       for d in self.vocab.lookup(tok.value)):
                raise ParseError(f"{tok.value!r} is not a declared state variable", tok.pos)
            self.next()
            return SVar(tok.value)
        raise ParseError(f"expected a state expression, found {tok.value!r}", tok.pos)

    # -- terms ----------------------------------------------------------------

    def term(self) -> Term:
        out = self.term_mul()
        while self.at_op("+"):
            self.next()
            rhs = self.term_mul()
            out = FunApp("+", (out, rhs), None)
        return out

    def term_mul(self) -> Term:
        out = self.term_atom()
        while self.at_op("*"):
            self.next()
            rhs = self.term_atom()
            out = FunApp("*", (out, rhs), Sort.PROB)
        return out

    def term_atom(self) -> Term:
        tok = self.peek()
        if tok.kind == "NUM":
            self.next()
            if tok.value not in ("0", "1"):
                raise ParseError(
                    f"numeral {tok.value} does not exist; declare a constant", tok.pos)
            sort: Optional[Sort] = Sort.PROB if tok.value == "1" else None
            if self.at_op(":"):
                self.next()
                sort = self.sort_name()
            return Const(tok.value, sort)
        if tok.kind == "KW" and tok.value == "inf":
            self.next()
            return Const("inf", Sort.DUR)
        if tok.kind == "KW" and tok.value == "l":
            self.next()
            return Const("l", Sort.DUR)
        if tok.kind == "KW" and tok.value == "dur":
            self.next()
            self.expect_op("(")
            s = self.state()
            self.expect_op(")")
            return DurationOf(s)
        if tok.kind == "KW" and tok.value == "p":
            self.next()
            self.expect_op("(")
            body = self.formula()
            self.expect_op(")")
            return Prob(body)
        if tok.kind == "KW" and tok.value == "mu":
            self.next()
            self.expect_op("(")
            body = self.formula()
            self.expect_op(")")
            self.expect_op("(")
            bound = self.term()
            self.expect_op(")")
            return Mu(body, bound)
        if tok.kind == "OP" and tok.value == "(":
            mark = self.i
            self.next()
            try:
                inner = self.term()
                if not self.at_op(")"):
                    raise _Fail()
            except (_Fail, ParseError):
                self.i = mark
                raise _Fail()
            self.next()
            return inner
        if tok.kind == "IDENT":
            env_sort = self._lookup_env(tok.value)
            if env_sort is not None:
                self.next()
                return Var(tok.value, env_sort)
            decls = self.vocab.lookup(tok.value)
            if not decls:
                raise _Fail()
            decl = decls[0]
            if decl.kind == SymbolKind.VAR:
                self.next()
                return Var(tok.value, decl.sort)
            if decl.kind in (SymbolKind.RIGID_CONST, SymbolKind.FLEX_CONST):
                self.next()
                return Const(tok.value, decl.sort)
            if decl.kind in (SymbolKind.RIGID_FUN, SymbolKind.FLEX_FUN):
                self.next()
                self.expect_op("(")
                args = [self.term()]
                while self.at_op(","):
                    self.next()
                    args.append(self.term())
                self.expect_op(")")
                match = next((d for d in decls if len(d.arg_sorts) == len(args)), None)
                if match is None:
                    raise ParseError(
                        f"{tok.value!r} takes {len(decl.arg_sorts)} argument(s), "
                        f"got {len(args)}", tok.pos)
                return FunApp(tok.value, tuple(args), match.sort)
            raise _Fail()
        raise _Fail()


# ---------------------------------------------------------------------------
# Numeral sort resolution
# ---------------------------------------------------------------------------
#
# Only the numeral 0 is sort-ambiguous.  An atom resolves its unannotated
# zeros from its "primary" sort: the first subterm (left-to-right, not
# descending below anything but +) whose sort is already visible, defaulting
# to duration.  Declared relation/function argument positions force their
# signature sorts instead.


def _anchor_sorts(t: Term) -> Iterator[Optional[Sort]]:
    if isinstance(t, FunApp) and t.name == "+":
        for a in t.args:
            yield from _anchor_sorts(a)
    else:
        yield term_sort(t)


def _fun_signature(vocab: Vocabulary, name: str, arity: int) -> Optional[tuple[Sort, ...]]:
    for d in vocab.lookup(name):
        if d.kind in (SymbolKind.RIGID_FUN, SymbolKind.FLEX_FUN) and len(d.arg_sorts) == arity:
            return d.arg_sorts
    return None


def _rel_signature(vocab: Vocabulary, name: str, arity: int) -> Optional[tuple[Sort, ...]]:
    if name == "=":
        return None
    for d in vocab.lookup(name):
        if d.kind in (SymbolKind.RIGID_REL, SymbolKind.FLEX_REL) and len(d.arg_sorts) == arity:
            return d.arg_sorts
    return None


def _assign(t: Term, sort: Optional[Sort], vocab: Vocabulary,
            resolve: Callable[[Formula], Formula]) -> Term:
    """Push a context sort down through + chains, filling unresolved zeros."""
    if isinstance(t, Const):
        return Const(t.name, sort) if t.sort is None and sort is not None else t
    if isinstance(t, FunApp):
        if t.name == "+":
            return FunApp("+", tuple(_assign(a, sort, vocab, resolve) for a in t.args), sort)
        if t.name == "*":
            return FunApp("*", tuple(_assign(a, Sort.PROB, vocab, resolve) for a in t.args),
                          Sort.PROB)
        sig = _fun_signature(vocab, t.name, len(t.args))
        return FunApp(
            t.name,
            tuple(_assign(a, sig[i] if sig else None, vocab, resolve)
                  for i, a in enumerate(t.args)),
            t.sort,
        )
    if isinstance(t, Prob):
        return Prob(resolve(t.body))
    if isinstance(t, Mu):
        return Mu(resolve(t.body), _assign(t.duration, Sort.DUR, vocab, resolve))
    return t


def _primary_sort(args: tuple[Term, ...]) -> Sort:
    for a in args:
        for s in _anchor_sorts(a):
            if s is not None:
                return s
    return Sort.DUR


def resolve_numerals(f: Formula, vocab: Vocabulary) -> Formula:
    """Fill in the sorts of unannotated zeros, atom by atom."""

    def resolve(g: Formula) -> Formula:
        if isinstance(g, RelApp):
            sig = _rel_signature(vocab, g.name, len(g.args))
            if sig is None:
                primary = _primary_sort(g.args)
                return RelApp(g.name, tuple(_assign(a, primary, vocab, resolve)
                                            for a in g.args))
            return RelApp(g.name, tuple(_assign(a, s, vocab, resolve)
                                        for a, s in zip(g.args, sig)))
        if isinstance(g, Cmp):
            primary = _primary_sort((g.lhs, g.rhs))
            return Cmp(g.op, _assign(g.lhs, primary, vocab, resolve),
                       _assign(g.rhs, primary, vocab, resolve))
        if isinstance(g, (Implies, Chop, And, Or, Iff)):
            return type(g)(resolve(g.lhs), resolve(g.rhs))
        if isinstance(g, (Not, Diamond, Box, DiaL, DiaR, BoxL, BoxR)):
            return type(g)(resolve(g.body))
        if isinstance(g, (Exists, Forall)):
            return type(g)(g.var, resolve(g.body))
        return g

    return resolve(f)


def resolve_term_numerals(t: Term, vocab: Vocabulary) -> Term:
    def resolve(g: Formula) -> Formula:
        return resolve_numerals(g, vocab)

    return _assign(t, _primary_sort((t,)), vocab, resolve)


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def parse_formula(text: str, vocab: Vocabulary) -> Formula:
    parser = _Parser(tokenize(text), vocab)
    try:
        f = parser.formula()
    except _Fail:
        raise ParseError("malformed formula", parser.peek().pos)
    tok = parser.peek()
    if tok.kind != "EOF":
        raise ParseError(f"unexpected trailing input {tok.value!r}", tok.pos)
    return resolve_numerals(f, vocab)


def parse_term(text: str, vocab: Vocabulary) -> Term:
    parser = _Parser(tokenize(text), vocab)
    try:
        t = parser.term()
    except _Fail:
        raise ParseError("malformed term", parser.peek().pos)
    tok = parser.peek()
    if tok.kind != "EOF":
        raise ParseError(f"unexpected trailing input {tok.value!r}", tok.pos)
    return resolve_term_numerals(t, vocab)


# ---------------------------------------------------------------------------
# Pretty printer
# ---------------------------------------------------------------------------

_IFF, _IMP, _OR, _AND, _PREFIX, _ATOM = 1, 2, 3, 4, 5, 6
_T_ADD, _T_MUL, _T_ATOM = 1, 2, 3

_Path = tuple


def _zero_slots(args: tuple[Term, ...], ctxs: list[Optional[Sort]],
                vocab: Optional[Vocabulary]) -> list[tuple[_Path, Const, Optional[Sort]]]:
    """All zero occurrences with their re-parse-predicted sorts."""
    out: list[tuple[_Path, Const, Optional[Sort]]] = []

    def go(t: Term, ctx: Optional[Sort], path: _Path) -> None:
        if isinstance(t, Const) and t.name == "0":
            out.append((path, t, ctx))
        elif isinstance(t, FunApp):
            if t.name == "+":
                for k, a in enumerate(t.args):
                    go(a, ctx, path + (k,))
            elif t.name == "*":
                for k, a in enumerate(t.args):
                    go(a, Sort.PROB, path + (k,))
            else:
                sig = _fun_signature(vocab, t.name, len(t.args)) if vocab else None
                for k, a in enumerate(t.args):
                    go(a, sig[k] if sig else None, path + (k,))
        elif isinstance(t, Mu):
            go(t.duration, Sort.DUR, path + ("d",))
        # Var, other Consts, Prob, DurationOf: no zeros at this scope

    for i, a in enumerate(args):
        go(a, ctxs[i], (i,))
    return out


def _visible_primary(args: tuple[Term, ...], ann: set[_Path]) -> Sort:
    """The primary sort a re-parse would see, given annotated zero paths."""

    def anchors(t: Term, path: _Path) -> Iterator[Optional[Sort]]:
        if isinstance(t, FunApp) and t.name == "+":
            for k, a in enumerate(t.args):
                yield from anchors(a, path + (k,))
        elif isinstance(t, Const) and t.name == "0":
            yield t.sort if path in ann else None
        else:
            yield term_sort(t)

    for i, a in enumerate(args):
        for s in anchors(a, (i,)):
            if s is not None:
                return s
    return Sort.DUR


def _needed_annotations(args: tuple[Term, ...], signature: Optional[tuple[Sort, ...]],
                        vocab: Optional[Vocabulary]) -> set[_Path]:
    """Zero paths that must carry annotations for a faithful re-parse."""
    ann: set[_Path] = set()
    zeros = _zero_slots(args, [None] * len(args), vocab)
    for _ in range(len(zeros) + 1):
        if signature is not None:
            ctxs: list[Optional[Sort]] = list(signature)
        else:
            primary = _visible_primary(args, ann)
            ctxs = [primary] * len(args)
        slots = _zero_slots(args, ctxs, vocab)
        mismatch = None
        for path, const, predicted in slots:
            if path in ann:
                continue
            if const.sort is not None and predicted != const.sort:
                mismatch = path
                break
        if mismatch is None:
            return ann
        ann.add(mismatch)
    return ann


class _Printer:
    def __init__(self, vocab: Optional[Vocabulary]):
        self.vocab = vocab

    # -- terms ----------------------------------------------------------------

    def atom_args(self, args: tuple[Term, ...],
                  signature: Optional[tuple[Sort, ...]]) -> list[str]:
        ann = _needed_annotations(args, signature, self.vocab)
        return [self.term(a, _T_ADD, (i,), ann) for i, a in enumerate(args)]

    def term(self, t: Term, prec: int, path: _Path, ann: set[_Path]) -> str:
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Const):
            if t.name == "0" and path in ann:
                return f"0:{t.sort.value}"
            return t.name
        if isinstance(t, FunApp):
            if t.name == "+":
                text = (f"{self.term(t.args[0], _T_ADD, path + (0,), ann)} + "
                        f"{self.term(t.args[1], _T_MUL, path + (1,), ann)}")
                return f"({text})" if prec > _T_ADD else text
            if t.name == "*":
                text = (f"{self.term(t.args[0], _T_MUL, path + (0,), ann)} * "
                        f"{self.term(t.args[1], _T_ATOM, path + (1,), ann)}")
                return f"({text})" if prec > _T_MUL else text
            inner = ", ".join(self.term(a, _T_ADD, path + (k,), ann)
                              for k, a in enumerate(t.args))
            return f"{t.name}({inner})"
        if isinstance(t, DurationOf):
            return f"dur({self.state(t.state)})"
        if isinstance(t, Prob):
            return f"p({self.formula(t.body, _IFF)})"
        if isinstance(t, Mu):
            return (f"mu({self.formula(t.body, _IFF)})"
                    f"({self.term(t.duration, _T_ADD, path + ('d',), ann)})")
        raise TypeError(f"not a term: {t!r}")

    # -- state expressions ------------------------------------------------------

    def state(self, s: StateExpr, tight: bool = False) -> str:
        if isinstance(s, SZero):
            return "0"
        if isinstance(s, SVar):
            return s.name
        if isinstance(s, SImplies):
            text = f"{self.state(s.lhs, tight=True)} => {self.state(s.rhs)}"
            return f"({text})" if tight else text
        raise TypeError(f"not a state expression: {s!r}")

    # -- formulas ----------------------------------------------------------------

    def formula(self, f: Formula, prec: int) -> str:
        if isinstance(f, Bottom):
            return "bot"
        if isinstance(f, Top):
            return "top"
        if isinstance(f, RelApp):
            if f.name == "=":
                a, b = self.atom_args(f.args, None)
                return self._wrap(f"{a} = {b}", _ATOM, prec)
            if not f.args:
                return f.name
            sig = _rel_signature(self.vocab, f.name, len(f.args)) if self.vocab else None
            return f"{f.name}({', '.join(self.atom_args(f.args, sig))})"
        if isinstance(f, Cmp):
            a, b = self.atom_args((f.lhs, f.rhs), None)
            return self._wrap(f"{a} {f.op} {b}", _ATOM, prec)
        if isinstance(f, Iff):
            text = f"{self.formula(f.lhs, _IFF)} <=> {self.formula(f.rhs, _IMP)}"
            return self._wrap(text, _IFF, prec)
        if isinstance(f, Implies):
            text = f"{self.formula(f.lhs, _OR)} => {self.formula(f.rhs, _IMP)}"
            return self._wrap(text, _IMP, prec)
        if isinstance(f, Or):
            text = f"{self.formula(f.lhs, _OR)} | {self.formula(f.rhs, _AND)}"
            return self._wrap(text, _OR, prec)
        if isinstance(f, And):
            text = f"{self.formula(f.lhs, _AND)} & {self.formula(f.rhs, _PREFIX)}"
            return self._wrap(text, _AND, prec)
        if isinstance(f, Not):
            return f"!{self.formula(f.body, _PREFIX)}"
        if isinstance(f, (Diamond, Box, DiaL, DiaR, BoxL, BoxR)):
            kw = {Diamond: "dia", Box: "box", DiaL: "dia_l",
                  DiaR: "dia_r", BoxL: "box_l", BoxR: "box_r"}[type(f)]
            return f"{kw} {self.formula(f.body, _PREFIX)}"
        if isinstance(f, Chop):
            parts = []
            g: Formula = f
            while isinstance(g, Chop):
                parts.append(self.formula(g.lhs, _IFF))
                g = g.rhs
            parts.append(self.formula(g, _IFF))
            return "(" + " ; ".join(parts) + ")"
        if isinstance(f, (Exists, Forall)):
            kw = "ex" if isinstance(f, Exists) else "all"
            body = self.formula(f.body, _IFF)
            return f"({kw} {f.var.name}:{f.var.sort.value} . {body})"
        if isinstance(f, StateHolds):
            return f"[[{self.state(f.state)}]]"
        raise TypeError(f"not a formula: {f!r}")

    @staticmethod
    def _wrap(text: str, own: int, ctx: int) -> str:
        return f"({text})" if own < ctx else text


def pretty(node: Node, vocab: Optional[Vocabulary] = None) -> str:
    """Render a formula or term; inverse of parsing on well-formed input."""
    printer = _Printer(vocab)
    if isinstance(node, Formula):
        return printer.formula(node, _IFF)
    if isinstance(node, Term):
        return printer.atom_args((node,), None)[0]
    if isinstance(node, StateExpr):
        return printer.state(node)
    raise TypeError(f"cannot print {type(node).__name__}")


# ---------------------------------------------------------------------------
# Vocabulary files
# ---------------------------------------------------------------------------

_KIND_WORDS = {
    "var": SymbolKind.VAR,
    "rigidconst": SymbolKind.RIGID_CONST,
    "flexconst": SymbolKind.FLEX_CONST,
    "rigidfun": SymbolKind.RIGID_FUN,
    "flexfun": SymbolKind.FLEX_FUN,
    "rigidrel": SymbolKind.RIGID_REL,
    "flexrel": SymbolKind.FLEX_REL,
    "statevar": SymbolKind.STATE_VAR,
}

_SORT_WORDS = {"dur": Sort.DUR, "prob": Sort.PROB}


def parse_vocabulary(text: str) -> Vocabulary:
    """Read declarations, one per line.

    Lines look like ``var x : dur``, ``rigidconst c : prob``, ``flexrel R :
    dur dur``, ``rigidfun f : dur dur -> dur`` or ``statevar P``; a 0-ary
    relation is ``flexrel phi :`` (or no colon at all); ``#`` starts a
    comment.
    """
    vocab = Vocabulary()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind_word = parts[0]
        if kind_word not in _KIND_WORDS:
            raise ParseError(f"line {lineno}: unknown declaration kind {kind_word!r}")
        kind = _KIND_WORDS[kind_word]
        if len(parts) < 2:
            raise ParseError(f"line {lineno}: missing name")
        name = parts[1]
        rest = parts[2:]
        if rest and rest[0] == ":":
            rest = rest[1:]
        try:
            if kind == SymbolKind.STATE_VAR:
                if rest:
                    raise ParseError(f"line {lineno}: state variables take no signature")
                vocab.declare(Symbol(name, kind))
            elif kind in (SymbolKind.VAR, SymbolKind.RIGID_CONST, SymbolKind.FLEX_CONST):
                if len(rest) != 1 or rest[0] not in _SORT_WORDS:
                    raise ParseError(f"line {lineno}: expected a single sort")
                vocab.declare(Symbol(name, kind, (), _SORT_WORDS[rest[0]]))
            elif kind in (SymbolKind.RIGID_FUN, SymbolKind.FLEX_FUN):
                if "->" not in rest:
                    raise ParseError(f"line {lineno}: function needs '-> <sort>'")
                arrow = rest.index("->")
                arg_words, res_words = rest[:arrow], rest[arrow + 1:]
                if len(res_words) != 1 or res_words[0] not in _SORT_WORDS or not all(
                        w in _SORT_WORDS for w in arg_words):
                    raise ParseError(f"line {lineno}: malformed function signature")
                vocab.declare(Symbol(name, kind, tuple(_SORT_WORDS[w] for w in arg_words),
                                     _SORT_WORDS[res_words[0]]))
            else:  # relations
                if not all(w in _SORT_WORDS for w in rest):
                    raise ParseError(f"line {lineno}: malformed relation signature")
                vocab.declare(Symbol(name, kind, tuple(_SORT_WORDS[w] for w in rest), None))
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}")
    return vocab


def parse_formula_file(text: str, vocab: Vocabulary) -> list[tuple[int, Formula]]:
    """Formulas one per line; blank lines and comment lines are skipped."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        out.append((lineno, parse_formula(stripped, vocab)))
    return out
