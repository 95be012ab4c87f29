"""``kirby-spin`` command line.

Exit codes: 0 success (or "obstructed"), 1 negative mathematical verdict,
2 usage, parse or assertion errors.  Data goes to stdout (or ``--emit``),
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .core_link import FramedLink, LinkFormatError, inertia
from .homology import smith_normal_form
from .lens import chain_link, even_chain
from .moves import CalculusState, InvariantError, MoveError, ScriptError, run_script
from .obstruct import min_odd_n, obstruct_knot_surgery
from .script import ScriptSyntaxError, parse_script
from .spin import EnumerationCapExceeded, characteristic_sublinks, count_characteristic_sublinks

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2


class CliError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON: {exc}") from None


def _load_link(path: str) -> FramedLink:
    try:
        return FramedLink.from_json(_read_json(path))
    except LinkFormatError as exc:
        raise CliError(f"{path}: {exc}") from None


def _emit(payload: dict, target: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if target:
        Path(target).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_snf(args) -> int:
    link = _load_link(args.link)
    _emit(smith_normal_form(link).to_json(), args.emit)
    return EXIT_OK


def cmd_char_sublinks(args) -> int:
    link = _load_link(args.link)
    try:
        found = characteristic_sublinks(link)
    except EnumerationCapExceeded as exc:
        print(f"warning: {exc}; reporting the count only", file=sys.stderr)
        _emit({"count": exc.count, "enumerated": False}, args.emit)
        return EXIT_OK
    payload = {
        "count": len(found),
        "enumerated": True,
        "sublinks": [{"bits": list(c.bits), "members": list(c.members(link))} for c in found],
    }
    if payload["count"] != count_characteristic_sublinks(link):
        raise InvariantError("enumeration and rank count disagree")
    _emit(payload, args.emit)
    return EXIT_OK


def cmd_even_chain(args) -> int:
    chain = even_chain(args.t, args.s)
    link = chain_link(chain)
    form = inertia(link)
    value = chain.value()
    payload = {
        "t": args.t,
        "s": args.s,
        "coefficients": list(chain.coefficients),
        "b2": link.b2,
        "sigma": form.signature,
        "fraction": f"{value.numerator}/{value.denominator}",
        "verified": value == Fraction(args.t, args.s),
    }
    _emit(payload, args.emit)
    return EXIT_OK


def cmd_run(args) -> int:
    data = _read_json(args.link)
    char = None
    if args.char is not None:
        char = [name for item in args.char for name in item.split(",") if name]
    try:
        state = CalculusState.from_json(data, char=char)
    except (LinkFormatError, ScriptSyntaxError) as exc:
        raise CliError(f"{args.link}: {exc}") from None
    try:
        script_text = Path(args.script).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {args.script}: {exc.strerror}") from None
    script = parse_script(script_text)
    final = run_script(state, script, verify=args.verify)
    if args.emit_state:
        Path(args.emit_state).write_text(json.dumps(final.to_json(), indent=2) + "\n", encoding="utf-8")
    summary = final.to_json()
    summary["b2"] = final.link.b2
    summary["sigma"] = inertia(final.link).signature
    _emit(summary, args.emit)
    return EXIT_OK


def cmd_obstruct(args) -> int:
    cert = obstruct_knot_surgery(args.p, args.q, args.n)
    _emit(cert.to_json(), args.emit)
    print(f"verdict: {cert.verdict}", file=sys.stderr)
    return EXIT_OK if cert.obstructed else EXIT_NEGATIVE


def cmd_min_n(args) -> int:
    n = min_odd_n(args.p, args.q, args.cap)
    _emit({"p": args.p, "q": args.q, "cap": args.cap, "min_n": n}, args.emit)
    if n is None:
        print(f"no obstructed odd n <= {args.cap}", file=sys.stderr)
        return EXIT_NEGATIVE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kirby-spin",
        description="Linking-matrix Kirby calculus, spin fillings and 10/8 obstructions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--emit", metavar="FILE", help="write JSON output to FILE instead of stdout")
        p.set_defaults(func=func)
        return p

    p = add("snf", cmd_snf, "Smith normal form of the linking matrix (H_1 of the boundary)")
    p.add_argument("link", help="link JSON file")

    p = add("char-sublinks", cmd_char_sublinks, "list characteristic sublinks (spin structures)")
    p.add_argument("link", help="link JSON file")

    p = add("even-chain", cmd_even_chain, "even continued-fraction chain for L(T, S)")
    p.add_argument("t", type=int, metavar="T")
    p.add_argument("s", type=int, metavar="S")

    p = add("run", cmd_run, "run a move script")
    p.add_argument("link", help="link or state JSON file")
    p.add_argument("--char", action="append", metavar="NAMES",
                   help="characteristic sublink, comma separated; may repeat")
    p.add_argument("--script", required=True, metavar="FILE", help="move script")
    p.add_argument("--emit-state", metavar="FILE", help="write the final state JSON to FILE")
    p.add_argument("--verify", choices=("each", "final"), default="each",
                   help="recompute invariants after every move (default) or only at the end")

    p = add("obstruct", cmd_obstruct, "10/8 obstruction certificate for S^3_{P,Q}(L_N)")
    p.add_argument("p", type=int, metavar="P")
    p.add_argument("q", type=int, metavar="Q")
    p.add_argument("n", type=int, metavar="N")

    p = add("min-n", cmd_min_n, "smallest odd N with an obstruction")
    p.add_argument("p", type=int, metavar="P")
    p.add_argument("q", type=int, metavar="Q")
    p.add_argument("--cap", type=int, required=True, metavar="N")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScriptError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (CliError, ScriptSyntaxError, MoveError, InvariantError, LinkFormatError,
            ValueError, KeyError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


dispatch = main


if __name__ == "__main__":
    sys.exit(main())
