"""Even continued-fraction chains for lens spaces.

For s even and nonzero and t coprime to s, L(t, s) = t/s surgery on the
unknot is also surgery on a linear chain of unknots whose framings
a_1, ..., a_k are all even, with

    t/s = a_1 - 1/(a_2 - 1/(... - 1/a_k))    and    k <= |s|.

With even framings the empty sublink is characteristic, so the trace of the
chain is a spin filling of L(t, s) with b2 = k <= |s|.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .core_link import FillingInvariants, FramedLink, inertia
from .spin import empty_is_characteristic


@dataclass(frozen=True)
class EvenChain:
    coefficients: tuple[int, ...]
    t: int
    s: int

    def value(self) -> Fraction:
        """Exact value of a_1 - 1/(a_2 - 1/(... - 1/a_k))."""
        acc = Fraction(self.coefficients[-1])
        for a in reversed(self.coefficients[:-1]):
            acc = a - 1 / acc
        return acc

    def to_json(self) -> dict:
        return {"t": self.t, "s": self.s, "coefficients": list(self.coefficients)}


def _check_lens_args(t: int, s: int) -> None:
    if s == 0 or s % 2:
        raise ValueError(f"s must be even and nonzero, got {s}")
    if gcd(t, s) != 1:
        raise ValueError(f"t and s must be coprime, got gcd({t}, {s}) = {gcd(t, s)}")


def _even_quotient(a: int, b: int) -> int:
    """The even integer m with |a/b - m| < 1, for a/b not an integer."""
    m = a // b
    if m % 2:
        # a/b lies strictly between m and m + 1
        m += 1
    return m


def even_chain(t: int, s: int) -> EvenChain:
    """Even chain for L(t, s), following the constructive recursion.

    Starting from t/s, write the current fraction a/b as m + l/b with m even
    and 0 < |l| < |b|, then continue with -b/l.  Remainders alternate odd,
    even, odd, ...; the recursion stops at an odd remainder l = +-1, whose
    last coefficient -b/l is even because b is then even.
    """
    _check_lens_args(t, s)
    coefficients: list[int] = []
    a, b = t, s
    while True:
        # b is even on even steps, odd on odd steps
        m = _even_quotient(a, b)
        l = a - m * b
        if not 0 < abs(l) < abs(b):
            raise ArithmeticError(f"remainder {l} out of range for {a}/{b}")
        expected_parity = 1 if len(coefficients) % 2 == 0 else 0
        if l % 2 != expected_parity:
            raise ArithmeticError(f"remainder {l} has the wrong parity at step {len(coefficients)}")
        coefficients.append(m)
        if abs(l) == 1:
            coefficients.append(-b // l)
            break
        a, b = -b, l
    chain = EvenChain(tuple(coefficients), t, s)
    k = len(coefficients)
    if k > abs(s):
        raise ArithmeticError(f"chain length {k} exceeds |s| = {abs(s)}")
    if any(c % 2 for c in coefficients):
        raise ArithmeticError(f"odd coefficient in {coefficients}")
    if chain.value() != Fraction(t, s):
        raise ArithmeticError(f"chain {coefficients} evaluates to {chain.value()}, not {t}/{s}")
    return chain


def chain_link(chain: EvenChain) -> FramedLink:
    """Linking matrix of the chain: framings on the diagonal, 1 between neighbours."""
    k = len(chain.coefficients)
    if k == 0:
        raise ValueError("empty chain")
    rows = [[0] * k for _ in range(k)]
    for i, a in enumerate(chain.coefficients):
        rows[i][i] = a
        if i + 1 < k:
            rows[i][i + 1] = rows[i + 1][i] = 1
    return FramedLink.from_matrix(rows, [f"U{i + 1}" for i in range(k)])


def lens_filling_invariants(t: int, s: int) -> FillingInvariants:
    """(b2, sigma) of the spin filling of L(t, s) given by its even chain."""
    link = chain_link(even_chain(t, s))
    if not empty_is_characteristic(link):
        raise ArithmeticError("even chain has an odd framing")
    filling = FillingInvariants(link.b2, inertia(link).signature)
    if filling.b2 > abs(s):
        raise ArithmeticError(f"b2 = {filling.b2} exceeds |s| = {abs(s)}")
    return filling
