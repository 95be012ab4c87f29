"""Characteristic sublinks, i.e. spin structures on the surgery boundary.

A sublink with membership vector x is characteristic when

    Q x = diag(Q)  (mod 2),

where the self-term Q[i][i] x_i is included on the left.  By Kaplan's
correspondence these are in bijection with spin structures on the boundary
3-manifold, and the trace itself is spin exactly when the empty sublink is
characteristic, i.e. all framings are even.

Rows of Q mod 2 are packed into Python integers (bit i = component i), so
elimination runs on whole words.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core_link import FramedLink, _as_matrix

DEFAULT_MAX_ENUM = 2**20
MAX_ENUM_ENV = "KIRBY_SPIN_MAX_ENUM"


class EnumerationCapExceeded(RuntimeError):
    """The coset of characteristic sublinks is too large to list."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"{count} characteristic sublinks exceed the enumeration cap {cap}")
        self.count = count
        self.cap = cap


def enumeration_cap() -> int:
    value = os.environ.get(MAX_ENUM_ENV)
    if value is None:
        return DEFAULT_MAX_ENUM
    try:
        cap = int(value)
    except ValueError:
        raise ValueError(f"{MAX_ENUM_ENV} must be an integer, got {value!r}") from None
    if cap < 1:
        raise ValueError(f"{MAX_ENUM_ENV} must be positive, got {cap}")
    return cap


@dataclass(frozen=True)
class CharSublink:
    """Membership bit-vector over the components of a framed link."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"membership bits must be 0 or 1, got {self.bits}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def _from_trusted(cls, bits: tuple[int, ...]) -> "CharSublink":
        c = object.__new__(cls)
        object.__setattr__(c, "bits", bits)
        return c

    @classmethod
    def empty(cls, n: int) -> "CharSublink":
        return cls((0,) * n)

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "CharSublink":
        return cls(tuple((mask >> i) & 1 for i in range(n)))

    @classmethod
    def from_names(cls, link: FramedLink, names: Iterable[str]) -> "CharSublink":
        chosen = set(names)
        unknown = chosen - set(link.names)
        if unknown:
            raise KeyError(f"unknown components {sorted(unknown)}")
        return cls(tuple(int(name in chosen) for name in link.names))

    @property
    def mask(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    @property
    def size(self) -> int:
        return len(self.bits)

    def members(self, link: FramedLink) -> tuple[str, ...]:
        return tuple(name for name, b in zip(link.names, self.bits) if b)

    def is_empty(self) -> bool:
        return not any(self.bits)


def _mod2_rows(matrix: Sequence[Sequence[int]]) -> list[int]:
    return [sum((a & 1) << j for j, a in enumerate(row)) for row in matrix]


def is_characteristic(link: FramedLink | Sequence[Sequence[int]], c: CharSublink) -> bool:
    """True iff ``Q x = diag(Q) (mod 2)`` for the membership vector x."""
    matrix = _as_matrix(link)
    n = len(matrix)
    if c.size != n:
        raise ValueError(f"sublink has {c.size} bits but the link has {n} components")
    chosen = [matrix[i] for i, b in enumerate(c.bits) if b]
    if not chosen:
        return all(matrix[i][i] % 2 == 0 for i in range(n))
    # Q x as the sum of the chosen rows (Q is symmetric)
    for i, total in enumerate(map(sum, zip(*chosen))):
        if (total - matrix[i][i]) % 2:
            return False
    return True


def empty_is_characteristic(link: FramedLink | Sequence[Sequence[int]]) -> bool:
    """True iff every framing is even, so the trace is a spin filling."""
    matrix = _as_matrix(link)
    return all(matrix[i][i] % 2 == 0 for i in range(len(matrix)))


def _solve(matrix: Sequence[Sequence[int]]) -> tuple[int, list[int]]:
    """Particular solution and kernel basis of ``Q x = diag(Q)`` over GF(2)."""
    n = len(matrix)
    rows = [r | ((matrix[i][i] & 1) << n) for i, r in enumerate(_mod2_rows(matrix))]
    pivots: list[int] = []
    rank = 0
    for col in range(n):
        bit = 1 << col
        for i in range(rank, n):
            if rows[i] & bit:
                break
        else:
            continue
        rows[rank], rows[i] = rows[i], rows[rank]
        pivot = rows[rank]
        for i in range(n):
            if i != rank and rows[i] & bit:
                rows[i] ^= pivot
        pivots.append(col)
        rank += 1
    coeff_mask = (1 << n) - 1
    for r in rows[rank:]:
        if r & ~coeff_mask:
            # impossible for a symmetric matrix: diag(Q) lies in its column space mod 2
            raise ArithmeticError("characteristic equation is inconsistent")
    particular = 0
    for row, col in zip(rows, pivots):
        if row >> n & 1:
            particular |= 1 << col
    pivot_set = set(pivots)
    kernel = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = 1 << free
        for row, col in zip(rows, pivots):
            if row >> free & 1:
                v |= 1 << col
        kernel.append(v)
    return particular, kernel


def gf2_rank(link: FramedLink | Sequence[Sequence[int]]) -> int:
    matrix = _as_matrix(link)
    return len(matrix) - len(_solve(matrix)[1])


def count_characteristic_sublinks(link: FramedLink | Sequence[Sequence[int]]) -> int:
    """Number of spin structures on the boundary: 2 ** (n - rank_2 Q)."""
    return 2 ** len(_solve(_as_matrix(link))[1])


def characteristic_sublinks(
    link: FramedLink | Sequence[Sequence[int]], cap: int | None = None
) -> list[CharSublink]:
    """All characteristic sublinks, sorted by membership mask.

    Raises :class:`EnumerationCapExceeded` (carrying the count) when there
    are more than ``cap`` of them; the default cap is 2**20, overridable
    through the ``KIRBY_SPIN_MAX_ENUM`` environment variable.
    """
    matrix = _as_matrix(link)
    n = len(matrix)
    cap = enumeration_cap() if cap is None else cap
    particular, kernel = _solve(matrix)
    count = 2 ** len(kernel)
    if count > cap:
        raise EnumerationCapExceeded(count, cap)
    masks = [particular]
    x = particular
    # Gray-code walk over the kernel coset
    for step in range(1, count):
        x ^= kernel[(step & -step).bit_length() - 1]
        masks.append(x)
    return [CharSublink.from_mask(m, n) for m in sorted(masks)]


def characteristic_sublinks_brute(link: FramedLink | Sequence[Sequence[int]]) -> list[CharSublink]:
    """Reference enumeration: test every one of the 2**n subsets directly."""
    rows = _as_matrix(link)
    n = len(rows)
    if n == 0:
        return [CharSublink(())]
    matrix = np.array(rows, dtype=object)
    q = (matrix % 2).astype(np.int64)
    diag = np.diag(q)
    subsets = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64)[:, ::-1]
    ok = np.all((subsets @ q) % 2 == diag, axis=1)
    found = [CharSublink(tuple(int(b) for b in row)) for row in subsets[ok]]
    return sorted(found, key=lambda c: c.mask)
