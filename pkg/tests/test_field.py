"""Field arithmetic: axioms, exact linear algebra, parsing."""

import random

import numpy as np
import pytest

from cartan_forge.field import Field, FieldError, make_field

ALL_FIELDS = [make_field(p, k) for p in (2, 3, 5, 7) for k in (1, 2)]


def test_supported_parameters():
    for F in ALL_FIELDS:
        assert F.q == F.p**F.k <= 256
    with pytest.raises(FieldError):
        Field(11)
    with pytest.raises(FieldError):
        Field(3, 3)
    with pytest.raises(FieldError):
        Field(4)


def test_axioms_random_sample():
    # commutativity, associativity, distributivity, inverses; > 10^4 triples
    rng = random.Random(20260824)
    for F in ALL_FIELDS:
        q = F.q
        for _ in range(1300):
            a, b, c = rng.randrange(q), rng.randrange(q), rng.randrange(q)
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
            assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
            assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
            assert F.add(a, 0) == a
            assert F.mul(a, 1) == a
            assert F.add(a, F.neg(a)) == 0
            assert F.sub(a, b) == F.add(a, F.neg(b))
            if b != 0:
                assert F.mul(b, F.inv(b)) == 1
                assert F.mul(F.div(a, b), b) == a


def test_lift_respects_negation():
    for F in ALL_FIELDS:
        for z in range(-16, 17):
            assert F.add(F.lift(z), F.lift(-z)) == 0


def test_modulus_is_irreducible():
    for F in ALL_FIELDS:
        if F.k == 1:
            assert F.modulus is None
            continue
        c1, c0 = F.modulus
        assert all((x * x + c1 * x + c0) % F.p != 0 for x in range(F.p))
        w = F.p  # code of the generator
        # w^2 + c1 w + c0 = 0
        lhs = F.add(F.mul(w, w), F.add(F.mul(F.lift(c1), w), F.lift(c0)))
        assert lhs == 0


def test_rank_equals_transpose_rank():
    rng = np.random.default_rng(7)
    for F in ALL_FIELDS:
        for _ in range(12):
            r = int(rng.integers(1, 33))
            c = int(rng.integers(1, 33))
            M = rng.integers(0, F.q, size=(r, c)).astype(np.uint8)
            assert F.rank(M) == F.rank(M.T)


def test_rref_and_nullspace():
    rng = np.random.default_rng(11)
    for F in ALL_FIELDS:
        for _ in range(8):
            M = rng.integers(0, F.q, size=(6, 9)).astype(np.uint8)
            rank = F.rank(M)
            ker = F.nullspace(M)
            assert ker.shape == (9 - rank, 9)
            if ker.size:
                prod = F.matmul(M, ker.T)
                assert not prod.any()
            assert F.rank(ker) == ker.shape[0]


def test_solve_rows():
    F = make_field(5)
    basis = F.mat([[1, 2, 0], [0, 1, 4]])
    X = F.mat([[3, 1], [0, 2]])
    rows = F.matmul(X, basis)
    got = F.solve_rows(basis, rows)
    assert (got == X).all()
    with pytest.raises(FieldError):
        F.solve_rows(basis, F.mat([[0, 0, 1]]))


def test_parse_and_fmt():
    F = make_field(3)
    assert F.parse("-1") == 2
    assert F.fmt(2) == "2"
    with pytest.raises(FieldError):
        F.parse("a")
    with pytest.raises(FieldError):
        F.parse("x+1")
    G = make_field(3, 2)
    w = G.parse("a")
    assert G.fmt(w) == "1*w+0"
    assert G.coeffs(w) == (1, 0)


def test_division_by_zero():
    for F in ALL_FIELDS:
        with pytest.raises(FieldError):
            F.inv(0)


def test_make_field_cached():
    assert make_field(5) is make_field(5)
    assert make_field(5) == Field(5)
    assert make_field(5) != make_field(5, 2)
