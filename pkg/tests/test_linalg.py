"""Exact linear algebra: rref, nullspace, determinant, inverse."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from eymsym.exact import RatFunc, rf
from eymsym.linalg import (FieldMatrix, NonSquare, Singular, det, inverse,
                           nullspace, rank, rref, solve_linear)

A, B, C, D = (RatFunc.var(x) for x in "abcd")
Z = rf(0)


def metric_1_1_1() -> FieldMatrix:
    return FieldMatrix.from_rows([[Z, Z, A, Z], [Z, B, Z, C],
                                  [A, Z, Z, Z], [Z, C, Z, D]])


def test_rref_identity():
    m = FieldMatrix.identity(4)
    red, pivots = rref(m)
    assert red == m and pivots == [0, 1, 2, 3]


def test_rref_zero_matrix():
    m = FieldMatrix.zeros(2, 3)
    red, pivots = rref(m)
    assert red == m and pivots == []


def test_nullspace_identity_empty():
    assert nullspace(FieldMatrix.identity(3)) == []


def test_nullspace_one_relation():
    basis = nullspace(FieldMatrix.from_rows([[1, -1]]))
    assert basis == [[rf(1), rf(1)]]


def test_nullspace_vectors_in_kernel():
    rng = random.Random(3)
    for _ in range(25):
        rows = rng.randint(2, 5)
        cols = rng.randint(2, 5)
        m = FieldMatrix.from_rows(
            [[rng.randint(-4, 4) for _ in range(cols)] for _ in range(rows)])
        for v in nullspace(m):
            assert all(x.is_zero() for x in m.apply(v))
        assert rank(m) + len(nullspace(m)) == cols


def test_det_metric_families():
    assert det(metric_1_1_1()) == A * A * (C * C - B * D)
    diag = FieldMatrix.from_rows([[A, Z, Z, Z], [Z, A, Z, Z],
                                  [Z, Z, A, Z], [Z, Z, Z, B]])
    assert det(diag) == A * A * A * B
    assert det(FieldMatrix.identity(4)) == rf(1)


def test_det_nonsquare():
    with pytest.raises(NonSquare):
        det(FieldMatrix.zeros(2, 3))


def test_inverse_diagonal():
    m = FieldMatrix.from_rows([[A, Z, Z, Z], [Z, A, Z, Z],
                               [Z, Z, A, Z], [Z, Z, Z, B]])
    inv = inverse(m)
    one = rf(1)
    assert inv[0, 0] == one / A and inv[3, 3] == one / B
    assert m * inv == FieldMatrix.identity(4)


def test_inverse_block_entries():
    inv = inverse(metric_1_1_1())
    one = rf(1)
    assert inv[0, 2] == one / A
    denom = B * D - C * C
    assert inv[1, 1] == D / denom
    assert inv[1, 3] == -C / denom
    assert inv[3, 3] == B / denom


def test_inverse_singular():
    with pytest.raises(Singular):
        inverse(FieldMatrix.zeros(3, 3))


def test_inverse_random_exact():
    rng = random.Random(17)
    found = 0
    while found < 15:
        m = FieldMatrix.from_rows(
            [[rng.randint(-3, 3) for _ in range(4)] for _ in range(4)])
        if det(m).is_zero():
            continue
        assert m * inverse(m) == FieldMatrix.identity(4)
        found += 1


def test_det_matches_numeric_elimination():
    """Symbolic Bareiss det equals a plain Fraction Gauss det at samples."""
    rng = random.Random(29)
    names = "abcd"
    for _ in range(10):
        m = FieldMatrix.from_rows(
            [[rand_entry(rng) for _ in range(4)] for _ in range(4)])
        point = {n: Fraction(rng.randint(1, 7)) for n in names}
        numeric = [[x.evaluate(point) for x in row] for row in m.entries]
        assert det(m).evaluate(point) == fraction_det(numeric)


def rand_entry(rng: random.Random) -> RatFunc:
    name = rng.choice("abcd")
    c = rng.randint(-3, 3)
    return RatFunc.var(name) * rf(c) if rng.random() < 0.7 else rf(c)


def fraction_det(m: list) -> Fraction:
    n = len(m)
    m = [list(r) for r in m]
    sign = 1
    out = Fraction(1)
    for k in range(n):
        pr = next((i for i in range(k, n) if m[i][k]), None)
        if pr is None:
            return Fraction(0)
        if pr != k:
            m[k], m[pr] = m[pr], m[k]
            sign = -sign
        out *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return sign * out


def test_solve_linear_consistent_and_not():
    a = FieldMatrix.from_rows([[1, 1], [1, -1]])
    x, _ = solve_linear(a, [rf(2), rf(0)])
    assert x == [rf(1), rf(1)]
    bad = FieldMatrix.from_rows([[1, 1], [1, 1]])
    x, _ = solve_linear(bad, [rf(0), rf(1)])
    assert x is None
