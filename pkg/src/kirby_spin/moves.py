"""Characteristic-sublink calculus on linking matrices.

A :class:`CalculusState` pairs a framed link with a characteristic sublink
(a spin structure on the boundary) and a tally of blow-ups and blow-downs.
Every move returns a new state; the boundary 3-manifold and its spin
structure are unchanged, while the 4-manifold changes only by blow-ups.

Matrix effects:

* blow-up: Q -> Q + (+-1), the new split unknot joins the sublink (forced).
* blow-down: the inverse, on a split +-1 component of the sublink.
* slide i over j with sign s: congruence by the transvection
  b_i -> b_i + s b_j.  In the old basis the characteristic class is
  sum x_k b_k; rewriting it in the new basis gives x_j -> x_j + x_i mod 2.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Iterator, Sequence, Union

from .core_link import FramedLink, LinkFormatError, inertia, signature
from .homology import HomologyProfile, boundary_fingerprint
from .spin import CharSublink, count_characteristic_sublinks, is_characteristic


class MoveError(ValueError):
    """A move's precondition does not hold."""


class InvariantError(AssertionError):
    """A conserved quantity changed; indicates an engine defect."""


class ScriptAssertionError(MoveError):
    """An ``assert`` statement in a script evaluated false."""


class ScriptError(Exception):
    """A script failed; ``index`` is the 0-based position of the failing move."""

    def __init__(self, index: int, move: "Move | None", cause: Exception):
        where = f"move {index}" + (f" ({format_move(move)})" if move is not None else "")
        super().__init__(f"{where}: {cause}")
        self.index = index
        self.move = move
        self.cause = cause


def _check_sign(sign: int) -> None:
    if sign not in (1, -1):
        raise MoveError(f"sign must be +1 or -1, got {sign!r}")


@dataclass(frozen=True)
class BlowUp:
    sign: int
    name: str


@dataclass(frozen=True)
class BlowDown:
    component: str


@dataclass(frozen=True)
class Slide:
    """Band-sum ``moving`` with ``sign`` times ``over``."""

    moving: str
    sign: int
    over: str


@dataclass(frozen=True)
class BlowUpAcross:
    target: str
    multiplicity: int
    sign: int
    name: str


@dataclass(frozen=True)
class RemoveTorus:
    component: str
    n: int


@dataclass(frozen=True)
class Assert:
    """``kind`` is one of char, b2, sigma, c, empty-char."""

    kind: str
    value: int | frozenset[str] | None = None


Move = Union[BlowUp, BlowDown, Slide, BlowUpAcross, RemoveTorus, Assert]
PRIMITIVES = (BlowUp, BlowDown, Slide)


@dataclass(frozen=True)
class Tally:
    up_pos: int = 0
    up_neg: int = 0
    down_pos: int = 0
    down_neg: int = 0

    @property
    def sigma_delta(self) -> int:
        return (self.up_pos - self.up_neg) - (self.down_pos - self.down_neg)

    @property
    def b2_delta(self) -> int:
        return (self.up_pos + self.up_neg) - (self.down_pos + self.down_neg)

    def after_blow_up(self, sign: int) -> "Tally":
        if sign > 0:
            return replace(self, up_pos=self.up_pos + 1)
        return replace(self, up_neg=self.up_neg + 1)

    def after_blow_down(self, sign: int) -> "Tally":
        if sign > 0:
            return replace(self, down_pos=self.down_pos + 1)
        return replace(self, down_neg=self.down_neg + 1)

    def to_json(self) -> dict:
        return {
            "up_pos": self.up_pos,
            "up_neg": self.up_neg,
            "down_pos": self.down_pos,
            "down_neg": self.down_neg,
        }


@dataclass(frozen=True)
class CalculusState:
    link: FramedLink
    char: CharSublink
    tally: Tally = field(default_factory=Tally)
    history: tuple[Move, ...] = ()

    @classmethod
    def start(cls, link: FramedLink, char: Iterable[str] = ()) -> "CalculusState":
        """Initial state; ``char`` names the sublink, which must be characteristic."""
        c = CharSublink.from_names(link, char)
        if not is_characteristic(link, c):
            raise MoveError(f"sublink {sorted(set(char))} is not characteristic")
        return cls(link, c)

    @property
    def members(self) -> tuple[str, ...]:
        return self.char.members(self.link)

    def in_char(self, name: str) -> bool:
        return bool(self.char.bits[self.link.index(name)])

    def to_json(self) -> dict:
        data = self.link.to_json()
        data["version"] = 1
        data["char"] = list(self.members)
        data["tally"] = self.tally.to_json()
        data["history"] = [format_move(m) for m in self.history]
        return data

    @classmethod
    def from_json(cls, data: dict, char: Iterable[str] | None = None) -> "CalculusState":
        """Load a link or an emitted state; ``char`` overrides any stored sublink."""
        link = FramedLink.from_json(data)
        if char is None:
            char = data.get("char", [])
        if not isinstance(char, (list, tuple, set, frozenset)):
            raise LinkFormatError("'char' must be a list of component names")
        state = cls.start(link, char)
        tally = data.get("tally")
        if tally is not None:
            try:
                state = replace(state, tally=Tally(**{k: int(v) for k, v in tally.items()}))
            except (TypeError, AttributeError, ValueError) as exc:
                raise LinkFormatError(f"bad 'tally': {exc}") from None
        history = data.get("history")
        if history:
            from .script import parse_script

            state = replace(state, history=tuple(parse_script("\n".join(history))))
        return state


def _assert_characteristic(state: CalculusState, move: Move) -> None:
    if not is_characteristic(state.link, state.char):
        raise InvariantError(f"sublink {list(state.members)} not characteristic after {format_move(move)}")


def _record(state: CalculusState, move: Move, **changes) -> CalculusState:
    new = replace(state, history=state.history + (move,), **changes)
    _assert_characteristic(new, move)
    return new


def blow_up(state: CalculusState, sign: int, name: str) -> CalculusState:
    """Add a split unknot with framing ``sign``; it joins the sublink."""
    _check_sign(sign)
    if name in state.link.names:
        raise MoveError(f"component name {name!r} already in use")
    link = state.link
    rows = tuple(r + (0,) for r in link.matrix) + ((0,) * link.size + (sign,),)
    new_link = FramedLink._trusted(link.names + (name,), rows)
    return _record(
        state,
        BlowUp(sign, name),
        link=new_link,
        char=CharSublink._from_trusted(state.char.bits + (1,)),
        tally=state.tally.after_blow_up(sign),
    )


def blow_down(state: CalculusState, component: str) -> CalculusState:
    """Remove a split +-1 framed component of the sublink."""
    link = state.link
    k = link.index(component)
    row = link.matrix[k]
    sign = row[k]
    if any(a for j, a in enumerate(row) if j != k):
        raise MoveError(f"{component} is linked with other components; slide it off first")
    if sign not in (1, -1):
        raise MoveError(f"{component} has framing {sign}, blow-down needs +1 or -1")
    if not state.char.bits[k]:
        raise MoveError(f"{component} is not in the characteristic sublink")
    rows = tuple(r[:k] + r[k + 1:] for i, r in enumerate(link.matrix) if i != k)
    bits = state.char.bits
    return _record(
        state,
        BlowDown(component),
        link=FramedLink._trusted(link.names[:k] + link.names[k + 1:], rows),
        char=CharSublink._from_trusted(bits[:k] + bits[k + 1:]),
        tally=state.tally.after_blow_down(sign),
    )


def slide(state: CalculusState, i: str, sign: int, j: str) -> CalculusState:
    """Slide component ``i`` over ``j``: b_i -> b_i + sign * b_j."""
    _check_sign(sign)
    if i == j:
        raise MoveError(f"cannot slide {i} over itself")
    link = state.link
    a, b = link.index(i), link.index(j)
    q = link.matrix
    row_a, row_b = q[a], q[b]
    if sign > 0:
        new_row = [x + y for x, y in zip(row_a, row_b)]
    else:
        new_row = [x - y for x, y in zip(row_a, row_b)]
    new_row[a] = row_a[a] + 2 * sign * row_a[b] + row_b[b]
    new_row_t = tuple(new_row)
    rows = tuple(
        new_row_t if k == a else r[:a] + (new_row[k],) + r[a + 1:] for k, r in enumerate(q)
    )
    bits = list(state.char.bits)
    bits[b] ^= bits[a]
    return _record(
        state,
        Slide(i, sign, j),
        link=FramedLink._trusted(link.names, rows),
        char=CharSublink._from_trusted(tuple(bits)),
    )


Step = Callable[[CalculusState], None]


def _apply_primitive(state: CalculusState, move: Move, on_step: Step | None) -> CalculusState:
    if isinstance(move, BlowUp):
        state = blow_up(state, move.sign, move.name)
    elif isinstance(move, BlowDown):
        state = blow_down(state, move.component)
    elif isinstance(move, Slide):
        state = slide(state, move.moving, move.sign, move.over)
    else:
        raise TypeError(f"not a primitive move: {move!r}")
    if on_step is not None:
        on_step(state)
    return state


def blow_up_across(
    state: CalculusState,
    target: str,
    multiplicity: int,
    sign: int,
    name: str,
    on_step: Step | None = None,
) -> CalculusState:
    """Blow up a ``sign`` unknot and slide ``target`` over it |multiplicity| times.

    Equivalent to blowing up across |multiplicity| parallel strands of the
    target: its framing changes by ``sign * multiplicity**2`` and its linking
    with the new curve becomes ``sign * multiplicity``.  When the target is
    in the sublink the multiplicity must be odd so the new curve leaves it.
    """
    _check_sign(sign)
    link = state.link
    link.index(target)
    if multiplicity == 0:
        raise MoveError("multiplicity must be nonzero")
    direction = 1 if multiplicity > 0 else -1
    target_in_char = state.in_char(target)
    state = _apply_primitive(state, BlowUp(sign, name), on_step)
    for _ in range(abs(multiplicity)):
        state = _apply_primitive(state, Slide(target, direction, name), on_step)
    if target_in_char and state.in_char(name):
        raise MoveError(
            f"parity: {target} is in the characteristic sublink, so blowing up across "
            f"{multiplicity} strands (even) leaves {name} in the sublink; "
            "the multiplicity must be odd"
        )
    return state


def fresh_names(state: CalculusState, prefix: str = "e") -> Iterator[str]:
    used = set(state.link.names)
    j = 0
    while True:
        name = f"{prefix}{j}"
        if name not in used:
            used.add(name)
            yield name
        j += 1


def remove_torus_component(
    state: CalculusState, component: str, n: int, on_step: Step | None = None
) -> CalculusState:
    """Remove an odd-framed T(n, n+1) component of the sublink.

    Steps, for framing f:

    1. blow up a -1 unknot across n strands (framing f - n^2);
    2. n^2 - f - 1 times: blow up an unknot and slide the component over it,
       each changing its framing by one until it is -1 (the count is odd, so
       never zero; for n^2 < f + 1 the blow-ups are -1 instead of +1);
    3. slide every component still linked with it over it, in lexicographic
       order of names, until its row is split;
    4. blow it down.

    Only the linking matrix is tracked; that these blow-ups unknot the torus
    knot is taken from the diagrammatic argument.  The b2 change is
    1 + |n^2 - f - 1| - 1 and the signature change n^2 - f - 1.
    """
    link = state.link
    link.index(component)
    if n < 1 or n % 2 == 0:
        raise MoveError(f"n must be a positive odd integer, got {n}")
    if not state.in_char(component):
        raise MoveError(f"{component} is not in the characteristic sublink")
    f = link.framing(component)
    if f % 2 == 0:
        raise MoveError(f"{component} has even framing {f}; expected an odd framing")

    names = fresh_names(state)
    state = blow_up_across(state, component, n, -1, next(names), on_step=on_step)

    steps = n * n - f - 1
    sign = 1 if steps > 0 else -1
    for _ in range(abs(steps)):
        e = next(names)
        state = _apply_primitive(state, BlowUp(sign, e), on_step)
        state = _apply_primitive(state, Slide(component, 1, e), on_step)
    if state.link.framing(component) != -1:
        raise InvariantError(f"{component} framing is {state.link.framing(component)}, expected -1")

    k = state.link.index(component)
    for other in sorted(state.link.names):
        if other == component:
            continue
        lk = state.link.matrix[state.link.index(other)][k]
        direction = 1 if lk > 0 else -1
        for _ in range(abs(lk)):
            state = _apply_primitive(state, Slide(other, direction, component), on_step)
    return _apply_primitive(state, BlowDown(component), on_step)


@dataclass(frozen=True)
class Conserved:
    """Quantities fixed by every move, measured on a reference state."""

    fingerprint: HomologyProfile
    abs_det: int
    char_count: int
    sigma_base: int
    b2_base: int

    @classmethod
    def of(cls, state: CalculusState) -> "Conserved":
        link = state.link
        form = inertia(link)
        return cls(
            fingerprint=boundary_fingerprint(link),
            abs_det=abs(form.determinant),
            char_count=count_characteristic_sublinks(link),
            sigma_base=form.signature - state.tally.sigma_delta,
            b2_base=link.b2 - state.tally.b2_delta,
        )


def check_invariants(state: CalculusState, ref: Conserved) -> None:
    """Recompute every conserved quantity from the matrix and compare."""
    link = state.link
    if not is_characteristic(link, state.char):
        raise InvariantError(f"sublink {list(state.members)} is not characteristic")
    if link.b2 != ref.b2_base + state.tally.b2_delta:
        raise InvariantError(f"b2 = {link.b2} disagrees with the blow-up tally")
    form = inertia(link)
    if form.signature != ref.sigma_base + state.tally.sigma_delta:
        raise InvariantError(
            f"signature {form.signature} != {ref.sigma_base} + tally {state.tally.sigma_delta}"
        )
    det = abs(form.determinant)
    if det != ref.abs_det:
        raise InvariantError(f"|det| changed from {ref.abs_det} to {det}")
    fp = boundary_fingerprint(link)
    if fp != ref.fingerprint:
        raise InvariantError(f"boundary homology changed from {ref.fingerprint} to {fp}")
    count = count_characteristic_sublinks(link)
    if count != ref.char_count:
        raise InvariantError(f"spin structure count changed from {ref.char_count} to {count}")


def _evaluate_assert(state: CalculusState, move: Assert) -> None:
    kind, value = move.kind, move.value
    if kind == "char":
        ok = is_characteristic(state.link, state.char)
        detail = f"sublink {list(state.members)} is not characteristic"
    elif kind == "empty-char":
        ok = state.char.is_empty()
        detail = f"sublink is {sorted(state.members)}, not empty"
    elif kind == "c":
        ok = frozenset(state.members) == value
        detail = f"sublink is {sorted(state.members)}, expected {sorted(value)}"
    elif kind == "b2":
        ok = state.link.b2 == value
        detail = f"b2 is {state.link.b2}, expected {value}"
    elif kind == "sigma":
        sigma = signature(state.link)
        ok = sigma == value
        detail = f"sigma is {sigma}, expected {value}"
    else:
        raise MoveError(f"unknown assertion {kind!r}")
    if not ok:
        raise ScriptAssertionError(f"assertion failed: {detail}")


def apply_move(state: CalculusState, move: Move, on_step: Step | None = None) -> CalculusState:
    if isinstance(move, PRIMITIVES):
        return _apply_primitive(state, move, on_step)
    if isinstance(move, BlowUpAcross):
        return blow_up_across(state, move.target, move.multiplicity, move.sign, move.name, on_step)
    if isinstance(move, RemoveTorus):
        return remove_torus_component(state, move.component, move.n, on_step)
    if isinstance(move, Assert):
        _evaluate_assert(state, move)
        return state
    raise TypeError(f"unknown move {move!r}")


def run_script(
    initial: CalculusState, script: Sequence[Move], verify: str = "each"
) -> CalculusState:
    """Apply ``script`` to ``initial``, checking invariants as it goes.

    ``verify="each"`` recomputes signature, |det|, boundary homology and the
    spin-structure count from scratch after every primitive move, including
    those inside macros.  ``verify="final"`` checks characteristicity after
    every move (always done) and recomputes the rest once at the end; use it
    for scripts on hundreds of components, where per-move recomputation is
    cubic in the size.
    """
    if verify not in ("each", "final"):
        raise ValueError(f"verify must be 'each' or 'final', got {verify!r}")
    ref = Conserved.of(initial)
    on_step = (lambda s: check_invariants(s, ref)) if verify == "each" else None
    state = initial
    for index, move in enumerate(script):
        try:
            state = apply_move(state, move, on_step)
        except (MoveError, InvariantError, KeyError) as exc:
            raise ScriptError(index, move, exc) from exc
    if verify == "final":
        try:
            check_invariants(state, ref)
        except InvariantError as exc:
            raise ScriptError(len(script), None, exc) from exc
    return state


def format_move(move: Move) -> str:
    from .script import format_move as _fmt

    return _fmt(move)


def history_script(state: CalculusState) -> str:
    return "".join(format_move(m) + "\n" for m in state.history)


def history_sha256(state: CalculusState) -> str:
    return hashlib.sha256(history_script(state).encode("utf-8")).hexdigest()
