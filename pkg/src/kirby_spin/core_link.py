"""Framed links stored as linking matrices.

A framed link is recorded only through the data the surgery arguments use:
component names and the symmetric integer matrix whose diagonal holds the
framings and whose off-diagonal entries are pairwise linking numbers.  The
trace of the link (the 4-manifold obtained by attaching 2-handles) has
intersection form equal to this matrix, so its second Betti number is the
number of components and its signature is the signature of the matrix.

All arithmetic is exact on Python integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

Matrix = tuple[tuple[int, ...], ...]


class LinkFormatError(ValueError):
    """Raised when a linking matrix or its JSON encoding is malformed."""


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _validate(names: Sequence[str], matrix: Sequence[Sequence[int]]) -> None:
    n = len(matrix)
    if len(names) != n:
        raise LinkFormatError(f"{len(names)} names for a {n}x{n} matrix")
    if len(set(names)) != len(names):
        seen = set()
        for name in names:
            if name in seen:
                raise LinkFormatError(f"duplicate component name {name!r}")
            seen.add(name)
    for name in names:
        if not isinstance(name, str) or not name:
            raise LinkFormatError(f"component names must be non-empty strings, got {name!r}")
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise LinkFormatError(f"row {i} has length {len(row)}, expected {n}")
        for j, value in enumerate(row):
            if not _is_int(value):
                raise LinkFormatError(f"matrix[{i}][{j}] = {value!r} is not an integer")
    for i in range(n):
        for j in range(i + 1, n):
            if matrix[i][j] != matrix[j][i]:
                raise LinkFormatError(
                    f"matrix is not symmetric: matrix[{i}][{j}] = {matrix[i][j]} "
                    f"but matrix[{j}][{i}] = {matrix[j][i]}"
                )


@dataclass(frozen=True)
class FramedLink:
    """A framed link in the 3-sphere, up to its linking matrix.

    ``matrix[i][i]`` is the framing of component ``names[i]`` and
    ``matrix[i][j]`` the linking number of components ``i`` and ``j``.
    """

    names: tuple[str, ...]
    matrix: Matrix

    def __post_init__(self) -> None:
        names = tuple(self.names)
        matrix = tuple(tuple(row) for row in self.matrix)
        _validate(names, matrix)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def _trusted(cls, names: tuple[str, ...], matrix: Matrix) -> "FramedLink":
        # The move engine builds links whose symmetry holds by construction;
        # re-validating an n x n matrix on every move would dominate runtime.
        link = object.__new__(cls)
        object.__setattr__(link, "names", names)
        object.__setattr__(link, "matrix", matrix)
        return link

    @classmethod
    def from_matrix(
        cls, matrix: Sequence[Sequence[int]], names: Iterable[str] | None = None
    ) -> "FramedLink":
        """Build a link from a matrix, naming components K1, K2, ... by default."""
        rows = [list(r) for r in matrix]
        if names is None:
            names = [f"K{i + 1}" for i in range(len(rows))]
        return cls(tuple(names), tuple(tuple(r) for r in rows))

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def b2(self) -> int:
        """Second Betti number of the trace: one 2-handle per component."""
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown component {name!r}") from None

    def framing(self, name: str) -> int:
        i = self.index(name)
        return self.matrix[i][i]

    def linking(self, a: str, b: str) -> int:
        return self.matrix[self.index(a)][self.index(b)]

    def to_json(self) -> dict:
        return {"names": list(self.names), "matrix": [list(r) for r in self.matrix]}

    @classmethod
    def from_json(cls, data: Any) -> "FramedLink":
        """Parse the ``{"names": [...], "matrix": [[...]]}`` encoding.

        ``names`` may be omitted, in which case K1, K2, ... are used.
        """
        if not isinstance(data, dict):
            raise LinkFormatError("link JSON must be an object")
        if "matrix" not in data:
            raise LinkFormatError("link JSON is missing 'matrix'")
        matrix = data["matrix"]
        if not isinstance(matrix, list) or not all(isinstance(r, list) for r in matrix):
            raise LinkFormatError("'matrix' must be a list of lists")
        names = data.get("names")
        if names is not None and not isinstance(names, list):
            raise LinkFormatError("'names' must be a list of strings")
        return cls.from_matrix(matrix, names)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class FillingInvariants:
    """Second Betti number and signature of a compact 4-manifold."""

    b2: int
    sigma: int

    def __post_init__(self) -> None:
        if self.b2 < 0:
            raise ValueError(f"b2 must be nonnegative, got {self.b2}")
        if abs(self.sigma) > self.b2:
            raise ValueError(f"|sigma| = {abs(self.sigma)} exceeds b2 = {self.b2}")

    def to_json(self) -> dict:
        return {"b2": self.b2, "sigma": self.sigma}


def _as_matrix(obj: FramedLink | Sequence[Sequence[int]]) -> Matrix:
    if isinstance(obj, FramedLink):
        return obj.matrix
    return tuple(tuple(r) for r in obj)


@dataclass(frozen=True)
class Inertia:
    positive: int
    negative: int
    nullity: int
    determinant: int

    @property
    def signature(self) -> int:
        return self.positive - self.negative


# Below this size the pure-Python loops beat numpy's per-call overhead.
DENSE_THRESHOLD = 32
# int64 is used only while every entry is below this bound, which keeps the
# products formed in one elimination step below 2**63.
INT64_SAFE = 2**30


def work_array(rows: Sequence[Sequence[int]]) -> np.ndarray:
    """Copy ``rows`` into an int64 array when safe, else a Python-int array."""
    a = np.array(rows, dtype=object).reshape(len(rows), -1)
    if a.size == 0 or max(abs(x) for x in a.flat) < INT64_SAFE:
        return a.astype(np.int64)
    return a


def widen_if_needed(a: np.ndarray) -> np.ndarray:
    if a.dtype != object and a.size and int(np.abs(a).max()) >= INT64_SAFE:
        return a.astype(object)
    return a


def _inertia_lists(rows: list[list[int]]) -> tuple[int, int, int]:
    positive = negative = 0
    prev = 1
    while rows:
        m = len(rows)
        k = -1
        best = 0
        for i in range(m):
            a = rows[i][i]
            if a and (k < 0 or abs(a) < best):
                k, best = i, abs(a)
                if best == 1:
                    break
        if k < 0:
            pair = next(
                ((i, j) for i in range(m) for j in range(i + 1, m) if rows[i][j]), None
            )
            if pair is None:
                break
            i, j = pair
            ri, rj = rows[i], rows[j]
            rows[i] = [x + y for x, y in zip(ri, rj)]
            for r in rows:
                r[i] += r[j]
            k = i
        pivot_row = rows.pop(k)
        piv = pivot_row.pop(k)
        for r in rows:
            r.pop(k)
        if (piv > 0) == (prev > 0):
            positive += 1
        else:
            negative += 1
        # column k equals pivot_row by symmetry
        rows = [
            [(piv * x - a * y) // prev for x, y in zip(r, pivot_row)]
            for r, a in zip(rows, pivot_row)
        ]
        prev = piv
    return positive, negative, prev


def _inertia_array(a: np.ndarray) -> tuple[int, int, int]:
    positive = negative = 0
    prev = 1
    while a.shape[0]:
        a = widen_if_needed(a)
        m = a.shape[0]
        d = np.abs(np.diagonal(a)).astype(object)
        nonzero = np.flatnonzero(d)
        if nonzero.size:
            k = int(nonzero[np.argmin(d[nonzero])])
        else:
            off = np.argwhere(a != 0)
            if off.size == 0:
                break
            i, j = (int(x) for x in off[0])
            a[i, :] += a[j, :]
            a[:, i] += a[:, j]
            k = i
        piv = a[k, k]
        rest = np.arange(m) != k
        col = a[rest, k]
        sub = a[np.ix_(rest, rest)]
        if (piv > 0) == (prev > 0):
            positive += 1
        else:
            negative += 1
        a = (piv * sub - np.multiply.outer(col, col)) // prev
        prev = piv
    return positive, negative, int(prev)


def inertia(obj: FramedLink | Sequence[Sequence[int]]) -> Inertia:
    """Exact inertia and determinant of a symmetric integer matrix.

    Symmetric Gaussian elimination carried out fraction-free (Bareiss).
    After each pivot the working matrix equals the previous pivot times the
    rational Schur complement, so the sign of each rational diagonal pivot is
    ``sign(pivot) * sign(previous pivot)``.  When every remaining diagonal
    entry vanishes but an off-diagonal entry ``a_ij`` does not, the congruence
    ``row/col i += row/col j`` creates the pivot ``2 a_ij``; the pair then
    contributes one positive and one negative square, as a hyperbolic block.
    """
    matrix = _as_matrix(obj)
    n = len(matrix)
    if n >= DENSE_THRESHOLD:
        positive, negative, last = _inertia_array(work_array(matrix))
    else:
        positive, negative, last = _inertia_lists([list(r) for r in matrix])
    nullity = n - positive - negative
    det = 0 if nullity else (last if n else 1)
    return Inertia(positive, negative, nullity, det)


def signature(obj: FramedLink | Sequence[Sequence[int]]) -> int:
    """Signature (positive minus negative squares) of a linking matrix."""
    return inertia(obj).signature


def determinant(obj: FramedLink | Sequence[Sequence[int]]) -> int:
    """Exact determinant of a symmetric integer matrix."""
    return inertia(obj).determinant


def nullity(obj: FramedLink | Sequence[Sequence[int]]) -> int:
    return inertia(obj).nullity


def trace_invariants(link: FramedLink) -> FillingInvariants:
    """(b2, sigma) of the trace of ``link``."""
    return FillingInvariants(link.b2, signature(link))


def l_n_trace(p: int, q: int) -> FramedLink:
    """Linking matrix of the two-component link L_n with framings (p, q).

    Both components are T(n, n+1) torus knots linking once, so the matrix
    does not depend on n.  The framings must be odd.
    """
    if p % 2 == 0 or q % 2 == 0:
        raise ValueError(f"framings must be odd, got p={p}, q={q}")
    return FramedLink(("K1", "K2"), ((p, 1), (1, q)))
