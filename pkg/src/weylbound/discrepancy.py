"""Interval counts and exact extreme discrepancy of a finite point set.

Write ``g(t) = #{x < t}/N - t``.  For ``[alpha, beta)`` the local deviation is
``g(beta) - g(alpha)``, and the supremum over semi-open intervals is reached in
the limit at the closures of intervals whose endpoints lie in
``E = {0} U {x_n} U {1}``:

* overcount: closed ``[a, b]`` with ``a <= b``: ``gR(b) - gL(a)``
* undercount: open ``(a, b)`` with ``a < b``:   ``gR(a) - gL(b)``

where ``gL(e) = #{x < e}/N - e`` and ``gR(e) = #{x <= e}/N - e``.
Both methods evaluate exactly these differences with the same kernel, so
their results agree bit for bit.  Points built from residues ``s_n / m`` are
scanned in integers scaled by ``N m`` and the value is the double nearest the
exact rational; other points use doubles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

import numpy as np

from .sequences import SequencePoints

METHODS = ("fast", "bruteforce")


def float_ceil(x) -> float:
    """Smallest double ``>= x``; the identity on floats.

    For a double ``v``: ``v >= x`` iff ``v >= float_ceil(x)``, and
    ``v < x`` iff ``v < float_ceil(x)``.
    """
    if isinstance(x, float):
        return x
    f = float(x)
    if Fraction(f) < x:
        f = math.nextafter(f, math.inf)
    return f


@dataclass(frozen=True)
class Interval:
    """Half-open ``[alpha, beta)`` with ``0 <= alpha < beta <= 1``.

    Endpoints may be floats or exact rationals (``fractions.Fraction``).
    """

    alpha: Real
    beta: Real

    def __post_init__(self):
        a, b = self.alpha, self.beta
        if isinstance(a, int):
            object.__setattr__(self, "alpha", float(a))
        if isinstance(b, int):
            object.__setattr__(self, "beta", float(b))
        if not (0 <= self.alpha < self.beta <= 1):
            raise ValueError(f"need 0 <= alpha < beta <= 1, got [{a}, {b})")

    @property
    def length(self):
        return self.beta - self.alpha

    def as_floats(self):
        """Float bounds giving the same membership test for double points."""
        return float_ceil(self.alpha), float_ceil(self.beta)


@dataclass(frozen=True)
class DiscrepancyReport:
    value: float
    witness: Interval
    method: str


def count_in_interval(points: SequencePoints, iv: Interval) -> int:
    """``#{n : alpha <= x_n < beta}``."""
    lo, hi = iv.as_floats()
    v = points.values
    return int(np.count_nonzero((v >= lo) & (v < hi)))


def deviation(points: SequencePoints, iv: Interval) -> float:
    """``|F/N - (beta - alpha)|`` for one interval."""
    F = count_in_interval(points, iv)
    return abs(F / points.N - float(iv.length))


# -- candidate endpoints --------------------------------------------------------


def _endpoints_fast(values, one):
    N = values.size
    e, counts = np.unique(values, return_counts=True)
    upto = np.cumsum(counts)
    below = upto - counts
    if e[0] > 0:
        e = np.concatenate([[0], e])
        below = np.concatenate([[0], below])
        upto = np.concatenate([[0], upto])
    return np.concatenate([e, [one]]), np.append(below, N), np.append(upto, N)


def _endpoints_brute(values, one):
    e = np.array(sorted(set(values.tolist()) | {0, one}), dtype=values.dtype)
    below = np.array([np.count_nonzero(values < t) for t in e])
    upto = np.array([np.count_nonzero(values <= t) for t in e])
    return e, below, upto


class _Scale:
    """How endpoints and ``g`` values are represented."""

    def __init__(self, points: SequencePoints):
        rseq = points.rational
        self.exact = rseq is not None
        if self.exact:
            self.m, N = rseq.m, rseq.N
            self.values = np.asarray(rseq.residues)
            self.one = self.m
            # gR, gL in units of 1/(N m); object dtype once products can overflow
            if N * self.m >= 2**62:
                self.values = self.values.astype(object)
        else:
            self.values = np.asarray(points.values)
            self.one = 1.0

    def g(self, e, below, upto):
        N = self.values.size
        if self.exact:
            e = e.astype(object) if self.values.dtype == object else e
            return e, below * self.m - N * e, upto * self.m - N * e
        return e, below / N - e, upto / N - e

    def at(self, x):
        """A candidate endpoint; exact ones are kept in units of ``1/(2m)``."""
        return 2 * int(x) if self.exact else x

    def up(self, x):
        """A right endpoint just past ``x`` that admits no further point."""
        if self.exact:
            return min(2 * int(x) + 1, 2 * self.m)
        return x if x >= 1.0 else math.nextafter(x, 2.0)

    def first_starts(self, run, ends, best, js):
        """Smallest ``i <= j`` with ``ends - run[i] >= best``, per ``j``."""
        if self.exact:
            # exact arithmetic: the condition is monotone in run[i] itself
            return np.searchsorted(-run, best - ends, side="left")
        return [_first_start(run, end, best, j) for end, j in zip(ends, js)]

    def value(self, best):
        if self.exact:
            return float(Fraction(int(best), self.values.size * self.m))
        return float(best)

    def interval(self, a, b):
        if self.exact:
            return Interval(Fraction(a, 2 * self.m), Fraction(b, 2 * self.m))
        return Interval(float(a), float(b))


def _pick(cands, sc):
    """Lexicographically smallest valid witness among maximizers."""
    valid = [c for c in cands if c[0] < c[1]]
    return sc.interval(*min(valid or cands))


def _first_start(run, end_value, best, j):
    """Smallest ``i <= j`` with ``fl(end_value - run[i]) == best``.

    ``run`` is a running extremum, so ``fl(end_value - run[i])`` is monotone
    in ``i`` and the first hit can be found by bisection.
    """
    lo, hi = 0, j
    while lo < hi:
        mid = (lo + hi) // 2
        if end_value - run[mid] >= best:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _fast(sc):
    e, gL, gR = sc.g(*_endpoints_fast(sc.values, sc.one))
    # overcount: closed [e_i, e_j], i <= j
    run_min = np.minimum.accumulate(gL)
    over = gR - run_min
    # undercount: open (e_i, e_j), i < j
    run_max = np.maximum.accumulate(gR)
    under = np.empty_like(over)
    under[0] = over[0]                # no open interval ends at 0
    under[1:] = run_max[:-1] - gL[1:]
    best = max(over.max(), under.max())
    # float rounding can tie non-extremal starts, so search for the earliest one
    js = np.flatnonzero(over == best)
    cands = [(sc.at(e[i]), sc.up(e[j])) for i, j in zip(sc.first_starts(run_min, gR[js], best, js), js)]
    js = np.flatnonzero(under == best)
    js = js[js > 0]
    cands += [(sc.up(e[i]), sc.at(e[j])) for i, j in zip(sc.first_starts(-run_max, -gL[js], best, js - 1), js)]
    return best, cands


def _bruteforce(sc):
    e, gL, gR = sc.g(*_endpoints_brute(sc.values, sc.one))
    best, cands = None, []
    for j in range(e.size):
        over = gR[j] - gL[: j + 1]
        under = gR[:j] - gL[j]
        top = max(over.max(), under.max()) if j else over.max()
        if best is not None and top < best:
            continue
        if best is None or top > best:
            best, cands = top, []
        if over.max() == top:
            cands.append((sc.at(e[int(np.argmax(over == top))]), sc.up(e[j])))
        if j and under.max() == top:
            cands.append((sc.up(e[int(np.argmax(under == top))]), sc.at(e[j])))
    return best, cands


def extreme_discrepancy(points: SequencePoints, method: str = "fast") -> DiscrepancyReport:
    """``sup_{0 <= alpha < beta <= 1} |F/N - (beta - alpha)|``, exactly.

    ``fast`` scans the sorted distinct values with running extrema
    (O(N log N)); ``bruteforce`` counts every endpoint directly and then
    evaluates all endpoint pairs (O(N^2)).
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    sc = _Scale(points)
    best, cands = (_fast if method == "fast" else _bruteforce)(sc)
    return DiscrepancyReport(sc.value(best), _pick(cands, sc), method)


def star_discrepancy(points: SequencePoints) -> float:
    """``sup_{0 < beta <= 1} |F(0, beta)/N - beta|``."""
    sc = _Scale(points)
    _, gL, gR = sc.g(*_endpoints_fast(sc.values, sc.one))
    return sc.value(max(gR.max(), (-gL).max()))
