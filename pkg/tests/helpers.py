"""Shared helpers: random matrices and slow, independent reference code."""

from __future__ import annotations

import random
from fractions import Fraction


def random_symmetric(rng: random.Random, n: int, lo: int = -9, hi: int = 9) -> list[list[int]]:
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = rng.randint(lo, hi)
    return m


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def random_unimodular(rng: random.Random, n: int, steps: int = 12) -> list[list[int]]:
    """Product of random elementary integer matrices (det = +-1)."""
    e = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        kind = rng.randrange(3)
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if kind == 0 and n > 1:
            c = rng.choice([-2, -1, 1, 2])
            for row in e:
                row[j] += c * row[i]
        elif kind == 1 and n > 1:
            for row in e:
                row[i], row[j] = row[j], row[i]
        else:
            for row in e:
                row[i] = -row[i]
    return e


def charpoly(m) -> list[int]:
    """Coefficients c_0 = 1, c_1, ..., c_n of det(xI - M), by Faddeev-LeVerrier."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    coeffs = [Fraction(1)]
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k) / k
        prod = [[sum(a[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        mk = [[prod[i][j] + (coeffs[-1] if i == j else 0) for j in range(n)] for i in range(n)]
        am = [[sum(a[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs.append(-sum(am[i][i] for i in range(n)) / k)
    assert all(c.denominator == 1 for c in coeffs)
    return [int(c) for c in coeffs]


def _sign_changes(seq) -> int:
    nz = [c for c in seq if c]
    return sum(1 for x, y in zip(nz, nz[1:]) if (x > 0) != (y > 0))


def descartes_signature(m) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts from the characteristic polynomial.

    Descartes' rule of signs is exact when every root is real, which holds
    for symmetric matrices.
    """
    c = charpoly(m)
    n = len(m)
    zeros = 0
    while zeros < n and c[n - zeros] == 0:
        zeros += 1
    pos = _sign_changes(c)
    # p(-x): coefficient of x^(n-k) picks up (-1)^(n-k)
    neg = _sign_changes([ck * (-1) ** (n - k) for k, ck in enumerate(c)])
    return pos, neg, zeros


def det_fraction(m) -> int:
    """Plain rational Gaussian elimination determinant."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k]), None)
        if p is None:
            return 0
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return int(det)


def snf_by_minors(m) -> list[int]:
    """Invariant factors via determinantal divisors: d_k = gcd of k x k minors."""
    from itertools import combinations
    from math import gcd

    rows, cols = len(m), len(m[0]) if m else 0
    divisors = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in combinations(range(rows), k):
            for ci in combinations(range(cols), k):
                g = gcd(g, det_fraction([[m[i][j] for j in ci] for i in ri]))
        divisors.append(g)
    factors = []
    for k in range(1, len(divisors)):
        factors.append(divisors[k] // divisors[k - 1] if divisors[k] else 0)
    return factors


def random_state(rng: random.Random, max_size: int = 6):
    """Random link with a randomly chosen characteristic sublink."""
    from kirby_spin.core_link import FramedLink
    from kirby_spin.moves import CalculusState
    from kirby_spin.spin import characteristic_sublinks

    n = rng.randint(1, max_size)
    link = FramedLink.from_matrix(random_symmetric(rng, n, -4, 4))
    c = rng.choice(characteristic_sublinks(link))
    return CalculusState.start(link, c.members(link))


def random_legal_move(rng: random.Random, state, max_size: int = 10):
    """A primitive move whose preconditions hold in ``state``."""
    from kirby_spin.moves import BlowDown, BlowUp, Slide

    link = state.link
    names = link.names
    n = link.size
    splittable = [
        k for k in range(n)
        if abs(link.matrix[k][k]) == 1 and state.char.bits[k]
    ]
    downable = [k for k in splittable if not any(a for j, a in enumerate(link.matrix[k]) if j != k)]
    options = []
    if n < max_size:
        options.append("up")
    if downable and n > 1:
        options += ["down"] * 2
    if n >= 2:
        options += ["slide"] * 3
    if splittable and n >= 2:
        options += ["unlink"] * 3
    kind = rng.choice(options)
    if kind == "up":
        j = n
        while f"u{j}" in names:
            j += 1
        return BlowUp(rng.choice([1, -1]), f"u{j}")
    if kind == "down":
        return BlowDown(names[rng.choice(downable)])
    if kind == "unlink":
        k = rng.choice(splittable)
        linked = [i for i in range(n) if i != k and link.matrix[i][k]]
        if linked:
            i = rng.choice(linked)
            # slide i over the +-1 curve k so |lk(i, k)| drops by one
            lk, f = link.matrix[i][k], link.matrix[k][k]
            return Slide(names[i], -1 if lk * f > 0 else 1, names[k])
    i, j = rng.sample(range(n), 2)
    sign = rng.choice([1, -1])
    # keep entries from growing without bound: prefer the sign that shrinks the framing
    qi = link.matrix[i][i] + 2 * sign * link.matrix[i][j] + link.matrix[j][j]
    qo = link.matrix[i][i] - 2 * sign * link.matrix[i][j] + link.matrix[j][j]
    if abs(qo) < abs(qi) and rng.random() < 0.7:
        sign = -sign
    return Slide(names[i], sign, names[j])
