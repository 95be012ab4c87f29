import random
from math import prod

import pytest

from helpers import matmul, random_symmetric, random_unimodular, snf_by_minors, transpose
from kirby_spin.core_link import DENSE_THRESHOLD, determinant, l_n_trace, work_array
from kirby_spin.homology import (
    _diagonalize,
    _diagonalize_array,
    _normalize,
    boundary_fingerprint,
    smith_normal_form,
)


def test_examples():
    h = smith_normal_form([[1, 1], [1, 1]])
    assert (h.invariant_factors, h.b1, h.order) == ((1, 0), 1, 0)
    h = smith_normal_form(l_n_trace(3, 1))
    assert (h.invariant_factors, h.order) == ((1, 2), 2)
    assert smith_normal_form([[0, 1], [1, 0]]).invariant_factors == (1, 1)
    assert smith_normal_form([[0, 1], [1, 0]]).order == 1


def test_fingerprint_examples():
    fp = boundary_fingerprint([[1, 1], [1, 1]])
    assert (fp.invariant_factors, fp.b1) == ((), 1)
    blown = boundary_fingerprint([[1, 1, 0], [1, 1, 0], [0, 0, -1]])
    assert blown == fp
    assert boundary_fingerprint([[1, 0], [0, 1]]).invariant_factors == ()
    assert boundary_fingerprint([[1, 0], [0, 1]]).b1 == 0


def test_divisibility_and_zero_ordering():
    h = smith_normal_form([[0, 0, 0], [0, 4, 0], [0, 0, 6]])
    assert h.invariant_factors == (2, 12, 0)
    assert h.b1 == 1
    assert smith_normal_form([[0]]).invariant_factors == (0,)
    assert smith_normal_form([]).invariant_factors == ()


@pytest.mark.parametrize("seed", range(60))
def test_matches_determinantal_divisors(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    m = random_symmetric(rng, n, -6, 6)
    assert list(smith_normal_form(m).invariant_factors) == snf_by_minors(m)


@pytest.mark.parametrize("seed", range(40))
def test_product_is_abs_det(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 10)
    m = random_symmetric(rng, n)
    h = smith_normal_form(m)
    assert len(h.invariant_factors) == n
    assert prod(h.invariant_factors) == abs(determinant(m))
    if h.b1 == 0:
        assert h.order == abs(determinant(m))
    nonzero = [d for d in h.invariant_factors if d]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))


@pytest.mark.parametrize("seed", range(40))
def test_equivalence_invariance(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 8)
    m = random_symmetric(rng, n)
    u, v = random_unimodular(rng, n), random_unimodular(rng, n)
    assert smith_normal_form(matmul(matmul(transpose(u), m), v)) == smith_normal_form(m)


@pytest.mark.parametrize("p", range(-9, 10, 2))
def test_l_n_order_is_pq_minus_one(p):
    for q in range(-9, 10, 2):
        assert smith_normal_form(l_n_trace(p, q)).order == abs(p * q - 1)


@pytest.mark.parametrize("seed", range(6))
def test_array_path_agrees(seed):
    rng = random.Random(seed)
    n = DENSE_THRESHOLD + seed
    big = 10**11 if seed % 2 else 5
    m = random_symmetric(rng, n, -big, big)
    if seed % 3 == 0:
        # force torsion and a kernel
        for row in m:
            row[0] = 0
        m[0] = [0] * n
        m = [[6 * x for x in row] for row in m]
    assert _normalize(_diagonalize_array(work_array(m))) == _normalize(_diagonalize([list(r) for r in m]))


def test_rectangular_input():
    assert _normalize(_diagonalize([[2, 4, 4], [-6, 6, 12]])) == [2, 6]
