"""First homology of the surgery 3-manifold.

For integral surgery on a framed link with linking matrix Q, the boundary of
the trace has H_1 = coker Q.  Its invariant factors come from the Smith
normal form of Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod
from typing import Sequence

import numpy as np

from .core_link import DENSE_THRESHOLD, INT64_SAFE, FramedLink, _as_matrix, work_array


@dataclass(frozen=True)
class HomologyProfile:
    """Invariant factors d_1 | d_2 | ... of coker Q, zeros listed last."""

    invariant_factors: tuple[int, ...]
    b1: int
    order: int

    def to_json(self) -> dict:
        return {
            "invariant_factors": list(self.invariant_factors),
            "b1": self.b1,
            "order": self.order,
        }


def _diagonalize(rows: list[list[int]]) -> list[int]:
    """Reduce an integer matrix to diagonal form by unimodular row/column ops.

    The diagonal need not satisfy the divisibility chain; see
    :func:`_normalize`.
    """
    m = len(rows)
    n = len(rows[0]) if rows else 0
    diag: list[int] = []
    for k in range(min(m, n)):
        while True:
            # smallest nonzero pivot in the remaining block; stop at a unit
            pi = pj = -1
            best = 0
            for i in range(k, m):
                row = rows[i]
                for j in range(k, n):
                    a = row[j]
                    if a and (pi < 0 or abs(a) < best):
                        pi, pj, best = i, j, abs(a)
                        if best == 1:
                            break
                if best == 1:
                    break
            if pi < 0:
                return diag + [0] * (min(m, n) - k)
            rows[k], rows[pi] = rows[pi], rows[k]
            if pj != k:
                for row in rows:
                    row[k], row[pj] = row[pj], row[k]
            pivot_row = rows[k]
            piv = pivot_row[k]
            clean = True
            for i in range(k + 1, m):
                row = rows[i]
                a = row[k]
                if a:
                    f = a // piv
                    if f:
                        rows[i] = row = row[:k] + [x - f * y for x, y in zip(row[k:], pivot_row[k:])]
                    if row[k]:
                        clean = False
            for j in range(k + 1, n):
                a = pivot_row[j]
                if a:
                    f = a // piv
                    if f:
                        for row in rows[k:]:
                            row[j] -= f * row[k]
                    if pivot_row[j]:
                        clean = False
            if clean:
                diag.append(piv)
                break
    return diag


def _diagonalize_array(a: np.ndarray) -> list[int]:
    """Vectorized :func:`_diagonalize`; int64 only while entries stay small."""
    m, n = a.shape
    diag: list[int] = []
    for k in range(min(m, n)):
        while True:
            sub = a[k:, k:]
            mag = np.abs(sub)
            if a.dtype != object and int(mag.max(initial=0)) >= INT64_SAFE // 2:
                a = a.astype(object)
                continue
            nonzero = np.flatnonzero(sub)
            if nonzero.size == 0:
                return diag + [0] * (min(m, n) - k)
            flat = mag.ravel()[nonzero]
            if a.dtype == object:
                flat = flat.astype(object)
            pi, pj = divmod(int(nonzero[int(np.argmin(flat))]), n - k)
            pi += k
            pj += k
            if pi != k:
                a[[k, pi]] = a[[pi, k]]
            if pj != k:
                a[:, [k, pj]] = a[:, [pj, k]]
            piv = a[k, k]
            f = a[k + 1:, k] // piv
            a[k + 1:, k:] -= np.multiply.outer(f, a[k, k:])
            g = a[k, k + 1:] // piv
            a[k:, k + 1:] -= np.multiply.outer(a[k:, k], g)
            if not a[k + 1:, k].any() and not a[k, k + 1:].any():
                diag.append(int(piv))
                break
    return diag


def _normalize(diag: Sequence[int]) -> list[int]:
    """Turn a diagonal into Smith form using diag(a, b) ~ diag(gcd, lcm)."""
    d = [abs(x) for x in diag]
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            a, b = d[i], d[j]
            if a == 0 and b == 0:
                continue
            g = gcd(a, b)
            if g != a:
                d[i], d[j] = g, a * b // g
    return d


def smith_normal_form(obj: FramedLink | Sequence[Sequence[int]]) -> HomologyProfile:
    """Invariant factors of the linking matrix, i.e. of H_1 of the boundary."""
    matrix = _as_matrix(obj)
    if not matrix:
        factors = []
    elif len(matrix) >= DENSE_THRESHOLD:
        factors = _normalize(_diagonalize_array(work_array(matrix)))
    else:
        factors = _normalize(_diagonalize([list(r) for r in matrix]))
    b1 = sum(1 for d in factors if d == 0)
    order = 0 if b1 else prod(factors)
    return HomologyProfile(tuple(factors), b1, order)


def boundary_fingerprint(obj: FramedLink | Sequence[Sequence[int]]) -> HomologyProfile:
    """Isomorphism type of H_1 of the boundary: torsion factors > 1 and b1.

    Unit factors are dropped, so adding split +-1 components leaves the
    fingerprint unchanged.  This is the quantity every Kirby move conserves.
    """
    snf = smith_normal_form(obj)
    torsion = tuple(d for d in snf.invariant_factors if d > 1)
    return HomologyProfile(torsion, snf.b1, snf.order)
