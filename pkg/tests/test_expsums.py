import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import exp_sum_direct, exp_sum_residues, geometric_direct
from weylbound.expsums import (
    ExpSumTable,
    exp_sum,
    exp_sum_table,
    geometric_sum,
    orthogonality_indicator,
    pairwise_sum,
    parseval_value,
    rational_period,
)
from weylbound.sequences import RationalSequence, SequencePoints, generate


def test_exp_sum_examples():
    assert exp_sum(SequencePoints([0] * 5), 1) == 5
    assert abs(exp_sum(SequencePoints([0, 0.5]), 1)) < 1e-15
    assert abs(exp_sum(SequencePoints([0, 0.25, 0.5, 0.75]), 4) - 4) < 1e-12


def test_table_examples():
    assert exp_sum_table(SequencePoints([0, 0]), 3).magnitudes.tolist() == [2, 2, 2]
    full = RationalSequence(4, [0, 1, 2, 3]).to_points()
    np.testing.assert_allclose(exp_sum_table(full, 4).magnitudes, [0, 0, 0, 4], atol=1e-12)
    kr = generate("kronecker:alpha=0.5", 4)
    np.testing.assert_allclose(exp_sum_table(kr, 2).magnitudes, [0, 4], atol=1e-12)


def test_table_rejects_zero_hmax():
    with pytest.raises(ValueError):
        exp_sum_table(SequencePoints([0.1]), 0)


def test_kronecker_fast_path_matches_direct():
    pts = generate("kronecker:alpha=golden", 700)
    plain = SequencePoints(pts.values)
    fast = exp_sum_table(pts, 200).complex_values
    slow = exp_sum_table(plain, 200).complex_values
    assert np.max(np.abs(fast - slow)) <= 1e-9 * pts.N
    for h in (1, 17, 199):
        assert abs(fast[h - 1] - exp_sum_direct(pts.values.tolist(), h)) <= 1e-9 * pts.N


@pytest.mark.parametrize("alpha", [0.5, 0.25, 0.375, 1 / 1024])
def test_kronecker_dyadic_alpha_hits_integer_phases(alpha):
    pts = generate(f"kronecker:alpha={alpha!r}", 37)
    fast = exp_sum_table(pts, 2100).complex_values
    for h in (1, 2, 4, 8, 1024, 2048):
        assert abs(fast[h - 1] - exp_sum_direct(pts.values.tolist(), h)) <= 1e-9 * pts.N


def test_rational_paths_match_oracle():
    rng = np.random.default_rng(3)
    rseq = RationalSequence(997, rng.integers(0, 997, 400))
    pts = rseq.to_points()
    table = exp_sum_table(pts, 1500).complex_values        # long enough for the FFT path
    short = exp_sum_table(pts, 5).complex_values            # direct residue path
    res = rseq.residues.tolist()
    for h in (1, 2, 5, 996, 997, 998, 1500):
        assert abs(table[h - 1] - exp_sum_residues(res, 997, h)) <= 1e-9 * rseq.N
    np.testing.assert_allclose(short, table[:5], atol=1e-9 * rseq.N)
    period = rational_period(rseq)
    assert abs(period[0] - rseq.N) < 1e-9


def test_csv_columns():
    text = exp_sum_table(SequencePoints([0.0, 0.25]), 2).to_csv().splitlines()
    assert text[0] == "h,re,im,abs"
    h, re, im, a = text[2].split(",")
    assert h == "2" and float(a) == pytest.approx(0.0, abs=1e-15)


def test_table_validation_and_padding():
    with pytest.raises(ValueError):
        ExpSumTable.from_magnitudes(2, [3.0])
    t = ExpSumTable.from_magnitudes(3, [1.0, 2.0]).padded(4)
    assert t.magnitudes.tolist() == [1.0, 2.0, 3.0, 3.0]


def test_pairwise_sum_accuracy():
    x = np.full(2**20, 0.1)
    assert abs(pairwise_sum(x) - 0.1 * 2**20) < 1e-8
    assert pairwise_sum(np.array([1.0, 2.0, 3.0])) == 6.0


points_st = st.lists(st.floats(0, 1, exclude_max=True, allow_nan=False), min_size=1, max_size=60)


@settings(max_examples=80)
@given(points_st, st.integers(-10**6, 10**6))
def test_exp_sum_invariants(values, h):
    p = SequencePoints(values)
    s = exp_sum(p, h)
    assert abs(s) <= p.N * (1 + 1e-12)
    assert exp_sum(p, 0) == p.N
    assert abs(exp_sum(p, -h) - s.conjugate()) <= 1e-12 * p.N


@settings(max_examples=60)
@given(st.integers(1, 500), st.lists(st.integers(0, 10**6), min_size=1, max_size=80), st.integers(1, 2000))
def test_rational_periodicity(m, raw, h):
    pts = RationalSequence(m, [r % m for r in raw]).to_points()
    assert abs(exp_sum(pts, h + m) - exp_sum(pts, h)) <= 1e-9 * pts.N


def test_geometric_examples():
    assert abs(geometric_sum(0, 8, 1, 8)) < 1e-15
    assert abs(geometric_sum(0, 1, 1, 8) - cmath.exp(2j * math.pi / 8)) < 1e-15
    g = geometric_sum(3, 5, 2, 12)
    assert abs(g - geometric_direct(3, 5, 2, 12)) <= 1e-10 * 5
    assert abs(g) <= 12 / (2 * 2)


@pytest.mark.parametrize("h, m", [(0, 8), (5, 8), (-1, 8)])
def test_geometric_rejects_h(h, m):
    with pytest.raises(ValueError):
        geometric_sum(0, 1, h, m)


@settings(max_examples=100)
@given(st.integers(2, 3000), st.data())
def test_geometric_fuzz(m, data):
    h = data.draw(st.integers(1, m // 2))
    L = data.draw(st.integers(-10**6, 10**6))
    M = data.draw(st.integers(1, 2 * m))
    g = geometric_sum(L, M, h, m)
    assert abs(g) <= m / (2 * h) + 1e-9
    assert abs(g - geometric_direct(L, M, h, m)) <= 1e-10 * M


@pytest.mark.parametrize("u, m, want", [(0, 7, 1.0), (3, 7, 0.0), (14, 7, 1.0), (-7, 7, 1.0)])
def test_orthogonality_examples(u, m, want):
    assert orthogonality_indicator(u, m) == want


@pytest.mark.parametrize("X, m, want", [({0}, 5, 1), ({0, 1, 2, 3}, 4, 4), ({0, 2}, 4, 2)])
def test_parseval_examples(X, m, want):
    assert abs(parseval_value(X, m) - want) <= 1e-9 * m * want


def test_parseval_rejects_bad_sets():
    with pytest.raises(ValueError):
        parseval_value([1, 1], 4)
    with pytest.raises(ValueError):
        parseval_value({4}, 4)
    with pytest.raises(ValueError):
        parseval_value(set(), 4)


@settings(max_examples=50)
@given(st.integers(1, 300), st.data())
def test_parseval_property(m, data):
    X = data.draw(st.sets(st.integers(0, m - 1), min_size=1))
    assert abs(parseval_value(X, m) - len(X)) <= 1e-9 * m * len(X)
