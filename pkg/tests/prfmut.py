"""Deterministic mutation generator for proof-script robustness tests.

Each mutant makes one small, meaning-changing edit to a proof script —
negating a line, swapping the sides of an equality or implication,
flipping a numeral, corrupting a citation, axiom name, or binding, or
tampering with the goal or a hypothesis.  A sound checker must reject
every one of them.
"""

from __future__ import annotations

import dataclasses
import re
from typing import Callable, Iterator, Optional

from pitl.parser import ParseError, parse_formula, pretty
from pitl.proofsys import ProofFormatError, check_proof, parse_proof_file
from pitl.syntax import (
    Const, Formula, Implies, Node, Not, RelApp, Sort, SortError, Vocabulary,
    VocabularyError,
)

_STEP = re.compile(r"^(\d+)\. (.*?)  BY (.+)$")
_GOAL = re.compile(r"^goal: (.+)$")
_HYP = re.compile(r"^(  \w+): (.+)$")

_NEGATE_CAP = 12
_SWAP_CAP = 4
_FLIP_CAP = 3
_REF_CAP = 6
_AXNAME_CAP = 4


def _rewrite_first(node: Node, pred: Callable[[Node], bool],
                   fn: Callable[[Node], Node]) -> tuple[Node, bool]:
    """Rebuild ``node`` with ``fn`` applied to the first match of ``pred``."""
    if pred(node):
        return fn(node), True
    for f in dataclasses.fields(node):
        if f.name == "span":
            continue
        val = getattr(node, f.name)
        if isinstance(val, Node):
            new, hit = _rewrite_first(val, pred, fn)
            if hit:
                return dataclasses.replace(node, **{f.name: new}), True
        elif isinstance(val, tuple):
            out, hit = [], False
            for item in val:
                if not hit and isinstance(item, Node):
                    new, h = _rewrite_first(item, pred, fn)
                    if h:
                        out.append(new)
                        hit = True
                        continue
                out.append(item)
            if hit:
                return dataclasses.replace(node, **{f.name: tuple(out)}), True
    return node, False


def _flip_const(f: Formula) -> tuple[Formula, bool]:
    def is_num(n: Node) -> bool:
        return (isinstance(n, Const) and n.sort == Sort.PROB
                and n.name in ("0", "1"))

    def flip(n: Const) -> Const:
        return dataclasses.replace(n, name="1" if n.name == "0" else "0")

    return _rewrite_first(f, is_num, flip)


def _steps(lines: list[str]) -> list[tuple[int, int, str, str]]:
    """(line index, step number, formula text, justification text) tuples."""
    out = []
    for i, ln in enumerate(lines):
        m = _STEP.match(ln)
        if m:
            out.append((i, int(m.group(1)), m.group(2), m.group(3)))
    return out


def generate_mutants(text: str, vocab: Vocabulary
                     ) -> Iterator[tuple[str, str]]:
    """Yield ``(description, mutated script text)`` pairs."""
    lines = text.splitlines()
    steps = _steps(lines)

    def emit(idx: int, newline: str, desc: str) -> tuple[str, str]:
        patched = lines[:idx] + [newline] + lines[idx + 1:]
        return desc, "\n".join(patched) + "\n"

    def parse(ftext: str) -> Formula:
        return parse_formula(ftext, vocab)

    # Negate the formula of evenly spread steps.
    stride = max(1, len(steps) // _NEGATE_CAP)
    for idx, no, ftext, by in steps[::stride][:_NEGATE_CAP]:
        f = Not(parse(ftext))
        yield emit(idx, f"{no}. {pretty(f)}  BY {by}", f"negate line {no}")

    # Swap the sides of a top-level equality.
    count = 0
    for idx, no, ftext, by in steps:
        if count >= _SWAP_CAP:
            break
        f = parse(ftext)
        if isinstance(f, RelApp) and f.name == "=" and len(f.args) == 2:
            g = dataclasses.replace(f, args=(f.args[1], f.args[0]))
            if g == f:
                continue
            count += 1
            yield emit(idx, f"{no}. {pretty(g)}  BY {by}",
                       f"swap equality on line {no}")

    # Swap the sides of a top-level implication on shape-checked lines.
    count = 0
    for idx, no, ftext, by in steps:
        if count >= _SWAP_CAP:
            break
        head = by.split()[0]
        if head not in ("AX", "THM", "EQTRANS", "EQCONGF", "MP",
                        "MONO-LEFT", "MONO-RIGHT", "PLEQ", "RULE"):
            continue
        f = parse(ftext)
        if isinstance(f, Implies):
            g = Implies(f.rhs, f.lhs)
            if g == f:
                continue
            count += 1
            yield emit(idx, f"{no}. {pretty(g)}  BY {by}",
                       f"swap implication on line {no}")

    # Flip a numeral 0 <-> 1.
    count = 0
    for idx, no, ftext, by in steps:
        if count >= _FLIP_CAP:
            break
        g, hit = _flip_const(parse(ftext))
        if hit:
            count += 1
            yield emit(idx, f"{no}. {pretty(g)}  BY {by}",
                       f"flip numeral on line {no}")

    # Point the first citation one line back.
    count = 0
    for idx, no, ftext, by in steps:
        if count >= _REF_CAP:
            break
        m = re.search(r"\b(\d+)\b", by)
        if not m:
            continue
        count += 1
        patched_by = by[:m.start()] + str(int(m.group(1)) - 1) + by[m.end():]
        yield emit(idx, f"{no}. {ftext}  BY {patched_by}",
                   f"shift citation on line {no}")

    # Replace an axiom name with an unrelated one.
    count = 0
    for idx, no, ftext, by in steps:
        if count >= _AXNAME_CAP:
            break
        m = re.match(r"AX (\S+)(.*)$", by)
        if not m:
            continue
        count += 1
        other = "A2" if m.group(1) != "A2" else "A1"
        yield emit(idx, f"{no}. {ftext}  BY AX {other}{m.group(2)}",
                   f"swap axiom name on line {no}")

    # Swap the first two binding values of a THM citation.
    count = 0
    for idx, no, ftext, by in steps:
        if count >= 2:
            break
        m = re.match(r"(THM \S+ )\{(.+)\}$", by)
        if not m:
            continue
        parts = m.group(2).split(", ")
        if len(parts) < 2:
            continue
        k1, v1 = parts[0].split(" := ", 1)
        k2, v2 = parts[1].split(" := ", 1)
        if v1 == v2:
            continue
        parts[0], parts[1] = f"{k1} := {v2}", f"{k2} := {v1}"
        count += 1
        yield emit(idx, f"{no}. {ftext}  BY {m.group(1)}{{{', '.join(parts)}}}",
                   f"swap theorem bindings on line {no}")

    # Cite the other derived rule.
    count = 0
    for idx, no, ftext, by in steps:
        if count >= 2:
            break
        m = re.match(r"RULE (\S+)( .*)$", by)
        if not m:
            continue
        other = "CONDZERO" if m.group(1) != "CONDZERO" else "PLEQINF"
        count += 1
        yield emit(idx, f"{no}. {ftext}  BY RULE {other}{m.group(2)}",
                   f"swap rule name on line {no}")

    # Tamper with the goal and any hypotheses.
    for i, ln in enumerate(lines):
        m = _GOAL.match(ln)
        if m:
            f = Not(parse(m.group(1)))
            yield emit(i, f"goal: {pretty(f)}", "negate the goal")
            yield emit(i, "goal: bot", "replace the goal")
        m = _HYP.match(ln)
        if m and not _STEP.match(ln):
            f = Not(parse(m.group(2)))
            yield emit(i, f"{m.group(1)}: {pretty(f)}",
                       f"negate hypothesis{m.group(1)}")


def run_mutant(text: str, base_dir: str) -> Optional[str]:
    """Check one mutated script; return None if rejected, else a complaint."""
    try:
        proof = parse_proof_file(text, base_dir=base_dir)
    except (ProofFormatError, ParseError, SortError, VocabularyError):
        return None
    verdict = check_proof(proof)
    if verdict.ok:
        return "mutant was accepted"
    return None
