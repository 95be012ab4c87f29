"""Text form of move scripts.

One statement per line, ``#`` starts a comment::

    blowup (+1|-1) as IDENT
    blowdown IDENT
    slide IDENT (+|-) IDENT          # first <- first +- second
    macro blowup-across IDENT x INT (+1|-1) as IDENT
    macro remove-torus IDENT n INT
    assert char
    assert empty-char
    assert b2 INT
    assert sigma INT
    assert c = {IDENT,...}

:func:`format_move` prints the canonical form, and parsing it back gives the
same move.
"""

from __future__ import annotations

import re

from .moves import Assert, BlowDown, BlowUp, BlowUpAcross, Move, RemoveTorus, Slide

IDENT = r"[A-Za-z_][A-Za-z0-9_.]*"
SIGN = r"[+-]1"
INT = r"[+-]?\d+"

_STATEMENTS = [
    (re.compile(rf"blowup\s+({SIGN})\s+as\s+({IDENT})"), lambda m: BlowUp(int(m[1]), m[2])),
    (re.compile(rf"blowdown\s+({IDENT})"), lambda m: BlowDown(m[1])),
    (
        re.compile(rf"slide\s+({IDENT})\s*([+-])\s*({IDENT})"),
        lambda m: Slide(m[1], 1 if m[2] == "+" else -1, m[3]),
    ),
    (
        re.compile(rf"macro\s+blowup-across\s+({IDENT})\s+x\s+({INT})\s+({SIGN})\s+as\s+({IDENT})"),
        lambda m: BlowUpAcross(m[1], int(m[2]), int(m[3]), m[4]),
    ),
    (
        re.compile(rf"macro\s+remove-torus\s+({IDENT})\s+n\s+({INT})"),
        lambda m: RemoveTorus(m[1], int(m[2])),
    ),
    (re.compile(r"assert\s+char"), lambda m: Assert("char")),
    (re.compile(r"assert\s+empty-char"), lambda m: Assert("empty-char")),
    (re.compile(rf"assert\s+b2\s+({INT})"), lambda m: Assert("b2", int(m[1]))),
    (re.compile(rf"assert\s+sigma\s+({INT})"), lambda m: Assert("sigma", int(m[1]))),
    (
        re.compile(rf"assert\s+c\s*=\s*\{{\s*((?:{IDENT}\s*(?:,\s*{IDENT}\s*)*)?)\}}"),
        lambda m: Assert("c", frozenset(x.strip() for x in m[1].split(",") if x.strip())),
    ),
]


class ScriptSyntaxError(ValueError):
    def __init__(self, lineno: int, line: str, message: str = "unrecognized statement"):
        super().__init__(f"line {lineno}: {message}: {line.strip()!r}")
        self.lineno = lineno


def parse_move(line: str) -> Move:
    text = line.split("#", 1)[0].strip()
    for pattern, build in _STATEMENTS:
        m = pattern.fullmatch(text)
        if m:
            return build(m)
    raise ScriptSyntaxError(1, line)


def parse_script(text: str) -> list[Move]:
    moves = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.split("#", 1)[0].strip():
            continue
        try:
            moves.append(parse_move(line))
        except ScriptSyntaxError:
            raise ScriptSyntaxError(lineno, line) from None
    return moves


def _sign(s: int) -> str:
    return "+1" if s > 0 else "-1"


def format_move(move: Move) -> str:
    if isinstance(move, BlowUp):
        return f"blowup {_sign(move.sign)} as {move.name}"
    if isinstance(move, BlowDown):
        return f"blowdown {move.component}"
    if isinstance(move, Slide):
        return f"slide {move.moving} {'+' if move.sign > 0 else '-'} {move.over}"
    if isinstance(move, BlowUpAcross):
        return (
            f"macro blowup-across {move.target} x {move.multiplicity} "
            f"{_sign(move.sign)} as {move.name}"
        )
    if isinstance(move, RemoveTorus):
        return f"macro remove-torus {move.component} n {move.n}"
    if isinstance(move, Assert):
        if move.kind in ("char", "empty-char"):
            return f"assert {move.kind}"
        if move.kind in ("b2", "sigma"):
            return f"assert {move.kind} {move.value}"
        if move.kind == "c":
            return "assert c = {" + ",".join(sorted(move.value)) + "}"
    raise TypeError(f"cannot format {move!r}")


def format_script(moves: list[Move]) -> str:
    return "".join(format_move(m) + "\n" for m in moves)
