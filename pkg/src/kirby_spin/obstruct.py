"""Furuta 10/8 obstructions to knot-surgery descriptions of S^3_{p,q}(L_n).

If S^3_{p,q}(L_n) were s/t surgery on a knot K, then gluing a spin filling
built from the link to the reversed (integral) trace of K or of its cable
gives a closed spin 4-manifold Y.  Furuta's inequality

    4 b2(Y) >= 5 |sigma(Y)| + 8      (Y closed, spin, indefinite, b2 > 0)

fails once the filling has |sigma| close to b2, which the torus-knot removal
script provides for large odd n.

With s = pq - 1 (up to sign):

* s = 0: the knot surgery is 0-surgery and its trace has (b2, sigma) = (1, 0).
* s != 0: s/t surgery on K, summed with L(t, s), is st surgery on the
  (t, s)-cable, whose trace is spin (st is even) with sigma = sign(st).
  L(t, s) has a spin filling with b2, |sigma| <= |s| for every t, so the
  check runs on the worst case over all t at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

from .core_link import FillingInvariants, inertia, l_n_trace
from .lens import lens_filling_invariants
from .moves import CalculusState, RemoveTorus, history_script, history_sha256, run_script
from .script import format_move
from .spin import empty_is_characteristic

CERTIFICATE_VERSION = 1
OBSTRUCTED = "obstructed"
NOT_OBSTRUCTED = "not obstructed"
INCONCLUSIVE = "inconclusive"


class FurutaInapplicable(ValueError):
    """The 10/8 theorem needs b2 > 0 and an indefinite form."""


@dataclass(frozen=True)
class GluedInvariants:
    b2: int
    sigma: int

    @property
    def indefinite(self) -> bool:
        return self.b2 > 0 and abs(self.sigma) < self.b2

    @property
    def lhs(self) -> int:
        return 4 * self.b2

    @property
    def rhs(self) -> int:
        return 5 * abs(self.sigma) + 8


def furuta_violated(y: GluedInvariants) -> bool:
    """True iff no closed spin manifold can have these invariants.

    Raises :class:`FurutaInapplicable` for b2 = 0 or a definite form rather
    than returning a verdict the theorem does not support.
    """
    if y.b2 <= 0:
        raise FurutaInapplicable(f"b2 = {y.b2}; the inequality needs b2 > 0")
    if not y.indefinite:
        raise FurutaInapplicable(f"(b2, sigma) = ({y.b2}, {y.sigma}) is definite")
    return y.lhs < y.rhs


def glue_to_trace(filling: FillingInvariants, trace_sigma: int) -> GluedInvariants:
    """Glue a filling to the reversed trace of a knot (b2 = 1)."""
    if abs(trace_sigma) > 1:
        raise ValueError(f"a knot trace has |sigma| <= 1, got {trace_sigma}")
    return GluedInvariants(filling.b2 + 1, filling.sigma - trace_sigma)


def boundary_sum(a: FillingInvariants, b: FillingInvariants) -> FillingInvariants:
    """Invariants of a boundary connected sum: both add."""
    return FillingInvariants(a.b2 + b.b2, a.sigma + b.sigma)


@dataclass(frozen=True)
class CableDecomposition:
    """s/t surgery on K, summed with L(t, s), is st surgery on the (t, s)-cable."""

    lens_t: int
    lens_s: int
    framing: int
    trace_sigma: int

    @property
    def trace_spin(self) -> bool:
        return self.framing % 2 == 0


def cable_decomposition(s: int, t: int) -> CableDecomposition:
    if s == 0:
        raise ValueError("s must be nonzero")
    if t < 1:
        raise ValueError(f"t must be a positive integer, got {t}")
    if gcd(s, t) != 1:
        raise ValueError(f"s and t must be coprime, got gcd({s}, {t}) = {gcd(s, t)}")
    framing = s * t
    return CableDecomposition(t, s, framing, 1 if framing > 0 else -1)


@dataclass(frozen=True)
class TorusFilling:
    """Spin filling of S^3_{p,q}(L_n) obtained by removing one torus component.

    The sublink starts as ``{component}`` (one of the two spin structures)
    and ends empty, so the trace of the final link is a spin filling.
    """

    component: str
    invariants: FillingInvariants
    script: str
    script_sha: str
    moves: int

    def to_json(self) -> dict:
        return {
            "char": [self.component],
            "b2": self.invariants.b2,
            "sigma": self.invariants.sigma,
            "script": self.script,
            "script_sha": self.script_sha,
            "moves": self.moves,
        }


@lru_cache(maxsize=512)
def torus_filling(p: int, q: int, n: int, component: str) -> TorusFilling:
    """Run the torus-removal script on L_n with sublink ``{component}``."""
    start = CalculusState.start(l_n_trace(p, q), [component])
    macro = RemoveTorus(component, n)
    final = run_script(start, [macro], verify="final")
    if not final.char.is_empty() or not empty_is_characteristic(final.link):
        raise ArithmeticError(f"sublink {list(final.members)} left after removing {component}")
    form = inertia(final.link)
    invariants = FillingInvariants(final.link.b2, form.signature)
    return TorusFilling(
        component,
        invariants,
        format_move(macro),
        history_sha256(final),
        len(final.history),
    )


def combined_filling(p: int, q: int, n: int, component: str, s: int, t: int) -> FillingInvariants:
    """Spin filling of S^3_{p,q}(L_n) # L(t, s): lens filling boundary-summed in."""
    cable = cable_decomposition(s, t)
    lens = lens_filling_invariants(cable.lens_t, cable.lens_s)
    return boundary_sum(lens, torus_filling(p, q, n, component).invariants)


def worst_case_glue(filling: FillingInvariants, lens_bound: int, trace_sigma: int) -> GluedInvariants:
    """Least favourable Y over every lens filling with b2, |sigma| <= lens_bound.

    b2 is taken at its largest and |sigma| at its smallest.  With
    ``lens_bound = 0`` this is exactly :func:`glue_to_trace`.
    """
    centre = filling.sigma - trace_sigma
    magnitude = max(0, abs(centre) - lens_bound)
    sigma = magnitude if centre >= 0 else -magnitude
    return GluedInvariants(filling.b2 + lens_bound + 1, sigma)


@dataclass(frozen=True)
class GlueBranch:
    component: str
    s: int
    trace_sigma: int
    glued: GluedInvariants

    @property
    def applicable(self) -> bool:
        return self.glued.indefinite

    @property
    def violated(self) -> bool:
        return self.applicable and furuta_violated(self.glued)

    def to_json(self) -> dict:
        return {
            "char": [self.component],
            "s": self.s,
            "trace_sigma": self.trace_sigma,
            "b2": self.glued.b2,
            "sigma": self.glued.sigma,
            "lhs": self.glued.lhs,
            "rhs": self.glued.rhs,
            "indefinite": self.glued.indefinite,
            "violated": self.violated,
        }


@dataclass(frozen=True)
class ObstructionCertificate:
    p: int
    q: int
    n: int
    s_values: tuple[int, ...]
    lens_bound: int
    trace_sigmas: tuple[int, ...]
    fillings: tuple[TorusFilling, ...]
    glued: tuple[GlueBranch, ...] = field(default=())
    verdict: str = INCONCLUSIVE

    @property
    def obstructed(self) -> bool:
        return self.verdict == OBSTRUCTED

    def to_json(self) -> dict:
        return {
            "version": CERTIFICATE_VERSION,
            "inputs": {"p": self.p, "q": self.q, "n": self.n},
            "s": list(self.s_values),
            "fillings": [f.to_json() for f in self.fillings],
            "lens_bound": self.lens_bound,
            "trace_sigmas": list(self.trace_sigmas),
            "glued": [g.to_json() for g in self.glued],
            "verdict": self.verdict,
        }


def _check_inputs(p: int, q: int, n: int) -> None:
    if p % 2 == 0 or q % 2 == 0:
        raise ValueError(f"p and q must be odd, got p={p}, q={q}")
    if n < 1 or n % 2 == 0:
        raise ValueError(f"n must be a positive odd integer, got {n}")


def obstruct_knot_surgery(p: int, q: int, n: int) -> ObstructionCertificate:
    """Decide whether the 10/8 argument rules out S^3_{p,q}(L_n) = S^3_{s/t}(K).

    Both spin structures are handled, since it is not known which one the
    knot trace induces.  The verdict is "obstructed" only when every branch
    (each spin structure, each sign of s) strictly violates the inequality.
    """
    _check_inputs(p, q, n)
    fillings = (torus_filling(p, q, n, "K1"), torus_filling(p, q, n, "K2"))
    s_abs = abs(p * q - 1)
    if s_abs == 0:
        s_values: tuple[int, ...] = (0,)
        trace_sigmas: tuple[int, ...] = (0,)
        if fillings[0].invariants != fillings[1].invariants:
            raise ArithmeticError(
                f"the two spin structures of S^3_{{{p},{q}}}(L_{n}) gave different fillings "
                f"{fillings[0].invariants} and {fillings[1].invariants}"
            )
        branches = tuple(
            GlueBranch(f.component, 0, 0, glue_to_trace(f.invariants, 0)) for f in fillings
        )
    else:
        s_values = (s_abs, -s_abs)
        trace_sigmas = tuple(cable_decomposition(s, 1).trace_sigma for s in s_values)
        if not all(cable_decomposition(s, 1).trace_spin for s in s_values):
            raise ArithmeticError("cable trace is not spin")
        branches = tuple(
            GlueBranch(f.component, s, sig, worst_case_glue(f.invariants, s_abs, sig))
            for f in fillings
            for s, sig in zip(s_values, trace_sigmas)
        )
    if not all(b.applicable for b in branches):
        verdict = INCONCLUSIVE
    elif all(b.violated for b in branches):
        verdict = OBSTRUCTED
    else:
        verdict = NOT_OBSTRUCTED
    return ObstructionCertificate(
        p, q, n, s_values, s_abs, trace_sigmas, fillings, branches, verdict
    )


def min_odd_n(p: int, q: int, cap: int) -> int | None:
    """Smallest odd n <= cap whose certificate is "obstructed", else None.

    The next odd n is checked too, as a guard on monotonicity.
    """
    if p % 2 == 0 or q % 2 == 0:
        raise ValueError(f"p and q must be odd, got p={p}, q={q}")
    for n in range(1, cap + 1, 2):
        if obstruct_knot_surgery(p, q, n).obstructed:
            if not obstruct_knot_surgery(p, q, n + 2).obstructed:
                raise ArithmeticError(f"verdict is not monotone: n={n} obstructed, n={n + 2} not")
            return n
    return None


def verify_certificate(data: dict) -> bool:
    """Re-check a certificate's arithmetic from its JSON alone.

    Recomputes every glued branch from the recorded fillings, lens bound and
    trace signatures, then the inequality on each, then the verdict.
    """
    if data.get("version") != CERTIFICATE_VERSION:
        return False
    bound = data["lens_bound"]
    fillings = {tuple(f["char"]): FillingInvariants(f["b2"], f["sigma"]) for f in data["fillings"]}
    expected = []
    for key, filling in fillings.items():
        for s, sig in zip(data["s"], data["trace_sigmas"]):
            y = worst_case_glue(filling, bound, sig)
            expected.append(
                {
                    "char": list(key),
                    "s": s,
                    "trace_sigma": sig,
                    "b2": y.b2,
                    "sigma": y.sigma,
                    "lhs": 4 * y.b2,
                    "rhs": 5 * abs(y.sigma) + 8,
                    "indefinite": y.b2 > 0 and abs(y.sigma) < y.b2,
                    "violated": y.b2 > 0 and abs(y.sigma) < y.b2 and 4 * y.b2 < 5 * abs(y.sigma) + 8,
                }
            )
    if expected != data["glued"]:
        return False
    if not all(g["indefinite"] for g in expected):
        verdict = INCONCLUSIVE
    elif all(g["violated"] for g in expected):
        verdict = OBSTRUCTED
    else:
        verdict = NOT_OBSTRUCTED
    return verdict == data["verdict"]


def history_of(p: int, q: int, n: int, component: str) -> str:
    """Expanded primitive script behind :func:`torus_filling`, for auditing."""
    start = CalculusState.start(l_n_trace(p, q), [component])
    final = run_script(start, [RemoveTorus(component, n)], verify="final")
    return history_script(final)
