from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import discrepancy_exact
from weylbound.discrepancy import (
    Interval,
    count_in_interval,
    deviation,
    extreme_discrepancy,
    float_ceil,
    star_discrepancy,
)
from weylbound.sequences import SequencePoints, fractional_shift, generate


def P(values):
    return SequencePoints(values)


def test_count_examples():
    assert count_in_interval(P([0.1, 0.2, 0.3]), Interval(0.15, 0.35)) == 2
    assert count_in_interval(P([0.9, 0.0, 0.5]), Interval(0, 1)) == 3
    assert count_in_interval(P([0.2, 0.2, 0.2]), Interval(0.2, 0.3)) == 3


def test_interval_validation():
    for a, b in [(0.5, 0.5), (-0.1, 0.5), (0.2, 1.1), (0.6, 0.4)]:
        with pytest.raises(ValueError):
            Interval(a, b)


def test_fraction_endpoints():
    iv = Interval(Fraction(1, 10), Fraction(1, 5))
    # 0.1 as a double is just above 1/10; 0.2 just above 1/5
    assert count_in_interval(P([0.1, 0.2]), iv) == 1
    assert float_ceil(Fraction(1, 3)) >= 1 / 3 and Fraction(float_ceil(Fraction(1, 3))) >= Fraction(1, 3)


@pytest.mark.parametrize("method", ["fast", "bruteforce"])
def test_discrepancy_examples(method):
    assert extreme_discrepancy(P([0, 0, 0, 0]), method).value == 1.0
    assert extreme_discrepancy(P([0, 0.25, 0.5, 0.75]), method).value == 0.25


def test_discrepancy_examples_against_exact_oracle():
    assert discrepancy_exact([0, 0, 0, 0]) == 1
    assert discrepancy_exact([0, 0.25, 0.5, 0.75]) == Fraction(1, 4)


def test_vdc16_fast_equals_bruteforce():
    pts = generate("vdc:base=2", 16)
    a, b = extreme_discrepancy(pts), extreme_discrepancy(pts, "bruteforce")
    assert a.value == b.value and a.witness == b.witness
    assert Fraction(a.value) == discrepancy_exact(pts.values.tolist())


def test_star_examples():
    assert star_discrepancy(P([0, 0, 0, 0])) == 1.0
    assert star_discrepancy(P([0.125, 0.375, 0.625, 0.875])) == 0.125


def test_unknown_method():
    with pytest.raises(ValueError):
        extreme_discrepancy(P([0.5]), "exact")


def test_equally_spaced_small_exact():
    for N in range(1, 9):
        assert discrepancy_exact([Fraction(j - 1, N) for j in range(1, N + 1)]) == Fraction(1, N)


small_sets = st.lists(
    st.one_of(st.sampled_from([0.0, 0.25, 0.5, 0.75]), st.floats(0, 1, exclude_max=True, allow_nan=False)),
    min_size=1, max_size=14,
)


@settings(max_examples=150, deadline=None)
@given(small_sets)
def test_discrepancy_matches_rational_oracle(values):
    pts = P(values)
    fast = extreme_discrepancy(pts)
    brute = extreme_discrepancy(pts, "bruteforce")
    exact = float(discrepancy_exact(values))
    assert fast.value == brute.value
    assert abs(fast.value - exact) <= 1e-12
    assert abs(deviation(pts, fast.witness) - fast.value) <= 1e-12
    assert fast.witness == brute.witness
    assert 1 / (2 * pts.N) - 1e-12 <= fast.value <= 1


@settings(max_examples=100)
@given(small_sets)
def test_star_bounds(values):
    pts = P(values)
    s, d = star_discrepancy(pts), extreme_discrepancy(pts).value
    assert s <= d + 1e-12 and d <= 2 * s + 1e-12


@settings(max_examples=100)
@given(
    st.lists(st.floats(0, 1, exclude_max=True, allow_nan=False), min_size=1, max_size=50),
    st.floats(0, 1), st.floats(0, 1), st.floats(0, 1),
)
def test_count_monotone_and_additive(values, x, y, z):
    a, b, c = sorted([x, y, z])
    pts = P(values)
    if a < b < c:
        whole = count_in_interval(pts, Interval(a, c))
        assert whole == count_in_interval(pts, Interval(a, b)) + count_in_interval(pts, Interval(b, c))
        assert count_in_interval(pts, Interval(a, b)) <= whole


dyadic = st.integers(0, 2**20 - 1).map(lambda k: k / 2**20)


@settings(max_examples=150)
@given(st.lists(dyadic, min_size=1, max_size=50), dyadic, dyadic)
def test_reflection_identity(values, a, b):
    # dyadic grid: the shift and b - a are exact in doubles
    if not a < b:
        return
    pts = P(values)
    shifted = fractional_shift(pts, a)
    assert count_in_interval(pts, Interval(a, b)) + count_in_interval(shifted, Interval(b - a, 1.0)) == pts.N


def test_reflection_identity_random_doubles():
    rng = np.random.default_rng(5)
    for _ in range(200):
        pts = P(rng.random(int(rng.integers(1, 300))))
        a, b = np.sort(rng.random(2))
        shifted = fractional_shift(pts, a)
        assert count_in_interval(pts, Interval(a, b)) + count_in_interval(shifted, Interval(b - a, 1.0)) == pts.N


def test_seeded_random_sets_fast_vs_bruteforce():
    rng = np.random.default_rng(11)
    for _ in range(40):
        N = int(rng.integers(1, 400))
        vals = rng.random(N)
        if rng.random() < 0.3:
            vals = np.round(vals * 16) / 16 % 1.0     # force ties
        pts = P(vals)
        a, b = extreme_discrepancy(pts), extreme_discrepancy(pts, "bruteforce")
        assert a.value == b.value and a.witness == b.witness


def test_equally_spaced_large():
    for N in (10, 100, 1024, 10**4):
        pts = P(np.arange(N) / N)
        d = extreme_discrepancy(pts).value
        if N & (N - 1) == 0:
            assert d == 1 / N
        else:
            assert abs(d - 1 / N) <= 1e-12


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 60).flatmap(lambda m: st.tuples(st.just(m), st.lists(st.integers(0, m - 1), min_size=1, max_size=40))))
def test_rational_points_are_exact(case):
    from weylbound.sequences import RationalSequence

    m, res = case
    pts = RationalSequence(m, res).to_points()
    want = discrepancy_exact([Fraction(r, m) for r in res])
    fast, brute = extreme_discrepancy(pts), extreme_discrepancy(pts, "bruteforce")
    assert fast.value == brute.value == float(want)
    assert fast.witness == brute.witness


def test_rational_points_huge_modulus():
    from weylbound.sequences import RationalSequence

    m = 2**61
    pts = RationalSequence(m, [0, 2**60, 5]).to_points()
    want = discrepancy_exact([Fraction(r, m) for r in (0, 2**60, 5)])
    assert extreme_discrepancy(pts).value == extreme_discrepancy(pts, "bruteforce").value == float(want)
