"""Algebra construction: small closed-form cases, defining relations,
height limits, and characteristic-2 squaring."""

import pytest

from cartan_forge.analysis import root_report
from cartan_forge.builder import (
    NEG,
    POS,
    BuildLimitError,
    bracket,
    build,
    cartan_dims,
    weight_parity,
)
from cartan_forge.catalog import ConcreteCartan
from cartan_forge.field import make_field

from conftest import model_for, report_for


def concrete(p, rows, par, k=1):
    F = make_field(p, k)
    return ConcreteCartan(F, F.mat(rows), tuple(par), "test")


def test_rank_two_even_case():
    # Cartan matrix of type A2: positive roots a1, a2, a1+a2; dim 8
    r = root_report(build(concrete(5, [[2, -1], [-1, 2]], (0, 0))))
    assert [e.weight for e in r.entries] == [(0, 1), (1, 0), (1, 1)]
    assert r.sdim == (8, 0) and r.derived is None
    assert all(e.multiplicity == 1 and e.isotropic == 0 for e in r.entries)


def test_rank_two_super_case():
    # one even, one odd isotropic simple root; sdim 4|4
    r = root_report(build(concrete(5, [[2, -1], [-1, 0]], (0, 1))))
    got = [(e.weight, e.parity, e.isotropic) for e in r.entries]
    assert got == [((0, 1), 1, 1), ((1, 0), 0, 0), ((1, 1), 1, 1)]
    assert r.sdim == (4, 4)


def test_defining_relations():
    model = model_for("brj(2;5)#1")
    F, n = model.field, model.n
    unit = lambda i: tuple(1 if t == i else 0 for t in range(n))
    for i in range(n):
        for j in range(n):
            out = bracket(model, ("pos", unit(i), 0), ("neg", unit(j), 0))
            if i == j:
                assert out[0] == (0,) * n  # lands in the Cartan part
                coords = [int(c) for c in out[1]]
                assert coords == [1 if t == i else 0 for t in range(n)]
            else:
                assert out == (None, None)
    for i in range(n):
        for j in range(n):
            h = [1 if t == i else 0 for t in range(n)]
            out = bracket(model, ("h", h), ("pos", unit(j), 0))
            a = int(model.cc.A[i, j])
            if a == 0:
                assert out == (None, None)
            else:
                assert out[0] == unit(j) and int(out[1][0]) == a


def test_negative_side_mirrors_positive():
    # negative root spaces are keyed by the mirrored (nonnegative) weight
    model = model_for("g(2,3)#2")
    for w in model.roots:
        assert model.mult(w, POS) == model.mult(w, NEG) > 0


def test_height_limit_raise_and_truncate():
    # corank-1 doubled matrix grows without bound
    cc = concrete(5, [[2, -2], [-2, 2]], (0, 0))
    with pytest.raises(BuildLimitError):
        build(cc, max_height=12)
    model = build(cc, max_height=12, on_limit="truncate")
    assert model.truncated
    assert max(sum(w) for w in model.roots) == 12


def test_char_two_squaring():
    # a single odd generator with nonzero diagonal squares to an even root
    r = root_report(build(concrete(2, [[1]], (1,))))
    assert [(e.weight, e.parity) for e in r.entries] == [((1,), 1), ((2,), 0)]
    assert r.sdim == (3, 2)
    # with zero diagonal the square dies in the radical
    r0 = root_report(build(concrete(2, [[0]], (1,))))
    assert [e.weight for e in r0.entries] == [(1,)]


def test_cartan_dims():
    cc = concrete(5, [[2, -2], [-2, 2]], (0, 0))
    assert cartan_dims(cc) == (2, 1, 3, 1)
    cc2 = concrete(5, [[2, -1], [-1, 2]], (0, 0))
    assert cartan_dims(cc2) == (2, 2, 2, 0)


def test_weight_parity():
    assert weight_parity((1, 2), (1, 1)) == 1
    assert weight_parity((2, 2), (1, 1)) == 0
    assert weight_parity((3, 0), (1, 0)) == 1


def test_largest_entry_builds_quickly():
    import time

    t0 = time.perf_counter()
    report = report_for("e(8,8)#cat")
    assert time.perf_counter() - t0 < 5.0
    assert report.n_positive == 120
    assert max(e.height for e in report.entries) == 29
