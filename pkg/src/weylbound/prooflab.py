"""Finite instances of the smoothing argument, checked exactly where possible.

Everything here works on a :class:`RationalSequence` ``s_n / m``.  Interval
windows follow the integer convention ``alpha*m <= y < beta*m`` evaluated
exactly (endpoints are converted to ``Fraction``), so
``lo = ceil(alpha*m)`` and ``hi = ceil(beta*m)``.

The smoothed counts are

    J_minus = #{(n, y, y_1..y_k) : s_n = y - y_1 - ... - y_k (mod m),
                lo <= y < hi + kT, 1 <= y_i <= T}
    J_plus  = #{(n, y, y_1..y_k) : s_n = y + y_1 + ... + y_k (mod m),
                lo <= y < hi - kT, 1 <= y_i <= T}

and satisfy ``J_plus <= T^k F <= J_minus``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

from .bounds import GaraevParams, floor_power, inner_sum, truncation_point
from .discrepancy import Interval, count_in_interval
from .expsums import exp_sum_table, geometric_sum, rational_period, sinpi_ratio
from .sequences import MAX_MODULUS, RationalSequence, SequencePoints, fractional_shift

__all__ = [
    "RationalSequence", "SmoothingParams", "TrivialRegime", "window", "rational_count",
    "rationalize", "scale_modulus", "side_conditions", "scale_for_side_conditions",
    "choose_smoothing", "smoothing_from_R", "count_J", "sandwich_check",
    "h0_decomposition_check", "s3_interpolation_check", "holder_step_check",
    "simplified_weyl_verify", "aggregation_check", "interval_reduction", "s3_energy",
    "naive_feasible", "Reduction", "WeylReport",
]

NAIVE_LIMIT = 10**7
SLACK = 1e-9


class TrivialRegime(ValueError):
    """``R^o >= 1/10``: the discrepancy bound holds trivially, no smoothing needed."""


def window(alpha, beta, m: int):
    """Integer bounds ``(lo, hi)`` with ``alpha*m <= y < beta*m  <=>  lo <= y < hi``."""
    return math.ceil(Fraction(alpha) * m), math.ceil(Fraction(beta) * m)


def _exact_length(iv: Interval) -> Fraction:
    return Fraction(iv.beta) - Fraction(iv.alpha)


def rational_count(rseq: RationalSequence, iv: Interval) -> int:
    """``F(N, s_n/m; alpha, beta)`` via ``s_n = y (mod m)``, ``alpha*m <= y < beta*m``."""
    lo, hi = window(iv.alpha, iv.beta, rseq.m)
    s = rseq.residues
    return int(np.count_nonzero((s >= lo) & (s < hi)))


# -- rationalization and scaling ---------------------------------------------------


def rationalize(points: SequencePoints, denominator: int, iv: Interval) -> RationalSequence:
    """Move each point to a multiple of ``1/m`` without changing membership in ``iv``.

    Rounds up (``x <= s/m < x + 1/m``) unless that crosses an endpoint of
    ``iv`` or reaches 1, in which case it rounds down.
    """
    m = int(denominator)
    if m < 1:
        raise ValueError("denominator must be >= 1")
    lo, hi = window(iv.alpha, iv.beta, m)
    a_lo, a_hi = iv.as_floats()
    out = np.empty(points.N, dtype=np.int64)
    for i, x in enumerate(points.values.tolist()):
        inside = a_lo <= x < a_hi
        exact = Fraction(x) * m
        up, down = math.ceil(exact), math.floor(exact)
        for s in (up, down):
            if s < m and (lo <= s < hi) == inside:
                out[i] = s
                break
        else:
            raise ValueError(f"denominator {m} too small: point {x!r} cannot keep its side of {iv}")
    return RationalSequence(m, out)


def scale_modulus(rseq: RationalSequence, factor: int) -> RationalSequence:
    """Replace ``s_n/m`` by ``(factor*s_n)/(factor*m)``; the real points are unchanged."""
    factor = int(factor)
    if factor < 1:
        raise ValueError("factor must be >= 1")
    if rseq.m * factor > MAX_MODULUS:
        raise OverflowError(f"scaled modulus {rseq.m * factor} exceeds 2**62")
    return RationalSequence(rseq.m * factor, rseq.residues * factor)


def _W(rseq, params, inner_tol):
    L, _ = truncation_point(params, inner_tol)
    s = inner_sum(exp_sum_table(rseq.to_points(), L), params, L)
    return s ** float(params.exponents().outer), s


def side_conditions(rseq: RationalSequence, params: GaraevParams, inner_tol: float = 1e-6) -> dict:
    """The side conditions ``m > (a+1)^2`` and ``sqrt(m) W > 10`` (reported, not enforced)."""
    W, _ = _W(rseq, params, inner_tol)
    return {
        "m_exceeds_(a+1)^2": rseq.m > (float(params.a) + 1) ** 2,
        "sqrt_m_W_exceeds_10": math.sqrt(rseq.m) * W > 10,
        "W": W,
    }


def scale_for_side_conditions(rseq: RationalSequence, params: GaraevParams,
                              inner_tol: float = 1e-6) -> RationalSequence:
    """Smallest integer rescaling meeting both side conditions (W is scale invariant)."""
    W, _ = _W(rseq, params, inner_tol)
    if W <= 0:
        raise ValueError("W vanishes at this truncation; sqrt(m) W > 10 is unreachable")
    need = max((float(params.a) + 1) ** 2, (10.0 / W) ** 2)
    factor = math.floor(need / rseq.m) + 1
    return scale_modulus(rseq, max(factor, 1))


# -- smoothing parameters -------------------------------------------------------------


@dataclass(frozen=True)
class SmoothingParams:
    k: int
    T: int
    m: int
    R: float | None = None

    @property
    def is_valid(self) -> bool:
        """``10 k T < m`` and ``T >= 10``."""
        return 10 * self.k * self.T < self.m and self.T >= 10


def smoothing_from_R(params: GaraevParams, m: int, R: float) -> SmoothingParams:
    rho = R ** float(params.exponents().outer)
    if rho >= 0.1:
        raise TrivialRegime(f"R^(o) = {rho:.6g} >= 1/10")
    k = math.floor(params.a) + 1
    T = math.floor(m * rho / k)
    if T < 10:
        raise ValueError(f"T = {T} < 10: modulus {m} too small, scale it up first")
    sp = SmoothingParams(k, T, m, R)
    if not sp.is_valid:
        raise ValueError(f"kT = {k * T} is not below m/10 = {m / 10}")
    return sp


def choose_smoothing(params: GaraevParams, rseq: RationalSequence, inner_tol: float) -> SmoothingParams:
    """``k = [a] + 1`` and ``T = [m R^o / k]`` with ``R`` the truncated inner series."""
    params.check()
    _, R = _W(rseq, params, inner_tol)
    return smoothing_from_R(params, rseq.m, R)


# -- smoothed congruence counts ---------------------------------------------------------


def _y_window(rseq, iv, sp, sign):
    m, kT = rseq.m, sp.k * sp.T
    lo, hi = window(iv.alpha, iv.beta, m)
    length = _exact_length(iv)
    if sign == "minus":
        if not length * m + kT < m:
            raise ValueError("window too long: need (beta-alpha)m + kT < m")
        return lo, hi + kT
    if sign == "plus":
        if not Fraction(iv.alpha) * m < Fraction(iv.beta) * m - kT:
            raise ValueError("window empty: need alpha*m < beta*m - kT")
        return lo, hi - kT
    raise ValueError("sign must be 'minus' or 'plus'")


def _box(c, T, forward):
    """Circular ``sum_{t=1}^T c[r -/+ t]``."""
    m = c.size
    q, rem = divmod(T, m)
    out = q * c.sum() * np.ones(m, dtype=c.dtype)
    if rem:
        ext = np.concatenate([c[m - rem:], c]) if forward else np.concatenate([c, c[:rem]])
        cs = np.concatenate([np.zeros(1, dtype=c.dtype), np.cumsum(ext)])
        r = np.arange(m)
        out = out + (cs[r + rem] - cs[r] if forward else cs[r + rem + 1] - cs[r + 1])
    return out


def _class_multiplicity(lo, hi, m):
    """Number of integers ``y`` in ``[lo, hi)`` with ``y = r (mod m)``, for every ``r``."""
    r = np.arange(m, dtype=object if hi > 2**62 else np.int64)
    return (hi - 1 - r) // m - (lo - 1 - r) // m


def _count_convolution(rseq, lo, hi, k, T, forward):
    big = rseq.N * T**k >= 2**62
    c = rseq.histogram().astype(object if big else np.int64)
    for _ in range(k):
        c = _box(c, T, forward)
    return int(np.dot(c, _class_multiplicity(lo, hi, rseq.m)))


def _count_naive(rseq, lo, hi, k, T, forward):
    if rseq.N * T**k > NAIVE_LIMIT:
        raise ValueError(f"naive count needs N*T^k <= {NAIVE_LIMIT}")
    m = rseq.m
    ys = np.arange(1, T + 1, dtype=np.int64)
    shifts = reduce(np.add.outer, [ys] * k).ravel()
    if not forward:
        shifts = -shifts
    total = 0
    for s in rseq.residues.tolist():
        target = np.mod(s + shifts, m)           # y = s -/+ (y_1 + ... + y_k)
        y0 = lo + np.mod(target - lo, m)         # least y >= lo in the class
        total += int(np.where(y0 < hi, 1 + (hi - 1 - y0) // m, 0).sum())
    return total


def count_J(rseq: RationalSequence, iv: Interval, sp: SmoothingParams, sign: str,
            method: str = "convolution") -> int:
    """Exact smoothed count; ``sign='minus'`` is the upper count, ``'plus'`` the lower."""
    lo, hi = _y_window(rseq, iv, sp, sign)
    forward = sign == "minus"
    if method == "convolution":
        return _count_convolution(rseq, lo, hi, sp.k, sp.T, forward)
    if method == "naive":
        return _count_naive(rseq, lo, hi, sp.k, sp.T, forward)
    raise ValueError("method must be 'convolution' or 'naive'")


def naive_feasible(rseq: RationalSequence, sp: SmoothingParams) -> bool:
    return rseq.N * sp.T**sp.k <= NAIVE_LIMIT


@dataclass(frozen=True)
class SandwichResult:
    J2: int
    F_scaled: int
    J1: int
    holds: bool
    F: int


def sandwich_check(rseq: RationalSequence, iv: Interval, sp: SmoothingParams) -> SandwichResult:
    """``J_plus <= T^k F <= J_minus`` in integer arithmetic."""
    J1 = count_J(rseq, iv, sp, "minus")
    J2 = count_J(rseq, iv, sp, "plus")
    F = rational_count(rseq, iv)
    Fs = F * sp.T**sp.k
    return SandwichResult(J2, Fs, J1, J2 <= Fs <= J1, F)


# -- analytic steps ------------------------------------------------------------------------------


@dataclass(frozen=True)
class InequalityResult:
    lhs: float
    rhs: float
    holds: bool
    extra: dict = field(default_factory=dict)


def _S1_abs(rseq, h_top):
    if h_top < 1:
        return np.zeros(0)
    return exp_sum_table(rseq.to_points(), h_top).magnitudes


def _S3_abs(T, hs, m):
    return np.abs(geometric_sum(0, T, hs, m))


def h0_decomposition_check(rseq: RationalSequence, iv: Interval, sp: SmoothingParams,
                           sign: str) -> InequalityResult:
    """``|J/T^k - (beta-alpha)N| <= 2kTN/m + (2/(m T^k)) sum_{h<=m/2} |S_1||S_2||S_3|^k``."""
    m, N, k, T = rseq.m, rseq.N, sp.k, sp.T
    lo, hi = _y_window(rseq, iv, sp, sign)
    J = count_J(rseq, iv, sp, sign)
    lhs = abs(Fraction(J, T**k) - _exact_length(iv) * N)
    hs = np.arange(1, m // 2 + 1, dtype=np.int64)
    tail = 0.0
    if hs.size:
        s1 = _S1_abs(rseq, hs.size)
        s2 = np.abs(geometric_sum(lo - 1, hi - lo, hs, m))
        s3 = _S3_abs(T, hs, m) / T
        tail = 2.0 / m * math.fsum((s1 * s2 * s3**k).tolist())
    rhs = 2.0 * k * T * N / m + tail
    lhs = float(lhs)
    return InequalityResult(lhs, rhs, lhs <= rhs * (1 + SLACK), {"J": J, "window": [lo, hi]})


def s3_interpolation_check(sp: SmoothingParams, params: GaraevParams, m: int) -> bool:
    """Pointwise, for ``1 <= h <= m/2``:
    ``|S_3|^k <= T^(k-a/2) |S_3|^(a/2) <= T^(k-a/2) (m/h)^(a/2-b) |S_3|^b``.
    """
    a, b = float(params.a), float(params.b)
    k, T = sp.k, sp.T
    if k < a / 2:
        raise ValueError("need k >= a/2")
    hs = np.arange(1, m // 2 + 1, dtype=np.int64)
    if hs.size == 0:
        return True
    s3 = _S3_abs(T, hs, m)
    h = hs.astype(float)
    ok_bounds = np.all(s3 <= T * (1 + 1e-12)) and np.all(s3 <= m / (2 * h) * (1 + SLACK))
    far = T ** (k - a / 2)
    left = s3**k
    mid = far * s3 ** (a / 2)
    right = far * (m / h) ** (a / 2 - b) * s3**b
    return bool(ok_bounds and np.all(left <= mid * (1 + SLACK)) and np.all(mid <= right * (1 + SLACK)))


@dataclass(frozen=True)
class HolderResult:
    lhs: float
    rhs: float
    holds: bool
    s3_energy: float
    parseval_ok: bool


def s3_energy(T: int, m: int) -> float:
    """``sum_{h=0}^{m-1} |S_3(h)|^2`` from the closed-form moduli."""
    h = np.arange(1, m, dtype=np.int64)
    mods = sinpi_ratio(h * T % (2 * m), m) / sinpi_ratio(h, m)
    return math.fsum([float(T) ** 2] + (mods**2).tolist())


def holder_step_check(rseq: RationalSequence, params: GaraevParams, sp: SmoothingParams) -> HolderResult:
    """Hoelder with exponents ``2/(2-b)`` and ``2/b`` on the ``h <= m/2`` sum."""
    a, b = float(params.a), float(params.b)
    m, T = rseq.m, sp.T
    if T > m:
        raise ValueError("need T <= m")
    ex = params.as_float().exponents()
    hs = np.arange(1, m // 2 + 1, dtype=np.int64)
    h = hs.astype(float)
    s1 = _S1_abs(rseq, hs.size)
    s3 = _S3_abs(T, hs, m) if hs.size else np.zeros(0)
    lhs = math.fsum((h ** (-1 - a / 2 + b) * s1 * s3**b).tolist())
    first = math.fsum((h ** (-ex.h_exponent) * s1**ex.inner_power).tolist()) ** ((2 - b) / 2)
    energy = s3_energy(T, m)
    rhs = first * energy ** (b / 2)
    parseval_ok = abs(energy - m * T) <= SLACK * m * T
    return HolderResult(lhs, rhs, bool(lhs <= rhs * (1 + SLACK) and parseval_ok), energy, parseval_ok)


# -- the simplified criterion -----------------------------------------------------------------


def aggregation_check(eps: float) -> tuple[float, bool]:
    """``2 eps^3 sum_{h<=H} h^-2 + sum_{h>H} h^-2 <= 5 eps^3`` with ``H = [eps^-3]``.

    Returns the left side divided by ``eps^3`` and the verdict.
    """
    H = floor_power(eps**-3)
    if H <= 10**6:
        head = math.fsum((1.0 / np.arange(1, H + 1, dtype=float) ** 2).tolist())
        tail = math.pi**2 / 6 - head
    else:
        # Euler-Maclaurin; the next term is below H^-7
        tail = 1 / H - 1 / (2 * H**2) + 1 / (6 * H**3) - 1 / (30 * H**5)
        head = math.pi**2 / 6 - tail
    value = (2 * eps**3 * head + tail) / eps**3
    return value, value <= 5.0


@dataclass(frozen=True)
class WeylReport:
    condition_i: bool
    worst_dev: float
    internal_checks: bool
    conclusion_asserted: bool
    conclusion_holds: bool | None
    aggregation_ok: bool
    T: int
    H: int
    intervals: list = field(default_factory=list)

    def to_dict(self):
        return {
            "condition_i": self.condition_i,
            "worst_dev": self.worst_dev,
            "internal_checks": self.internal_checks,
            "conclusion_asserted": self.conclusion_asserted,
            "conclusion_holds": self.conclusion_holds,
            "aggregation_ok": self.aggregation_ok,
            "T": self.T,
            "H": self.H,
            "intervals": self.intervals,
        }


def simplified_weyl_verify(rseq: RationalSequence, eps: float, intervals,
                           h_ceiling: int = 10**7) -> WeylReport:
    """Condition (i), the deviation over the admissible intervals, and the two
    unconditional bounds on ``J_1/T`` and ``J_2/T`` with ``k = 1``, ``T = [eps m/10]``.
    """
    m, N = rseq.m, rseq.N
    if not 0 < eps < 1:
        raise ValueError("need 0 < eps < 1")
    if not m * eps > 100:
        raise ValueError(f"need m > 100/eps = {100 / eps:g}, got m = {m}")
    H = floor_power(eps**-3)
    if H > h_ceiling:
        raise ValueError(f"eps^-3 = {H} exceeds the ceiling {h_ceiling}")
    period = np.abs(rational_period(rseq))
    if H >= m:
        condition_i = False          # h = m gives |S| = N
    else:
        condition_i = bool(np.all(period[1:H + 1] <= eps**3 * N))
    T = floor_power(eps * m / 10)
    sp = SmoothingParams(1, T, m)
    hs = np.arange(1, m // 2 + 1, dtype=float)
    weighted = math.fsum((period[1:m // 2 + 1] / hs**2).tolist())
    rhs = 2.0 * T * N / m + 2.0 * m / T * weighted
    worst, ok_all, rows = 0.0, True, []
    for iv in intervals:
        length = _exact_length(iv)
        if not Fraction(1, 4) <= length <= Fraction(1, 2):
            continue
        F = rational_count(rseq, iv)
        dev = float(abs(Fraction(F, N) - length))
        worst = max(worst, dev)
        l1 = float(abs(Fraction(count_J(rseq, iv, sp, "minus"), T) - length * N))
        l2 = float(abs(Fraction(count_J(rseq, iv, sp, "plus"), T) - length * N))
        ok = l1 <= rhs * (1 + SLACK) and l2 <= rhs * (1 + SLACK)
        ok_all &= ok
        rows.append({"alpha": float(iv.alpha), "beta": float(iv.beta), "dev": dev,
                     "lhs_J1": l1, "lhs_J2": l2, "rhs": rhs, "holds": ok})
    asserted = condition_i and eps < 1e-3
    _, agg_ok = aggregation_check(eps)
    return WeylReport(condition_i, worst, ok_all, asserted,
                      (worst <= eps) if asserted else None, agg_ok, T, H, rows)


# -- interval reduction ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Reduction:
    """``F = sum(parts)`` or, with ``complement``, ``F = N - sum(parts)``."""

    parts: list
    complement: bool
    N: int

    def count(self) -> int:
        total = sum(count_in_interval(p, iv) for p, iv in self.parts)
        return self.N - total if self.complement else total


def _halves(points, a, b):
    mid = a + (b - a) / 2
    return [(points, Interval(a, mid)), (points, Interval(mid, b))]


def interval_reduction(points: SequencePoints, iv: Interval) -> Reduction:
    """Reduce an interval to sub-problems of length in [1/4, 1/2].

    Long intervals are halved; short ones are traded for the complement
    ``[beta-alpha, 1)`` of the shifted sequence ``{x_n - alpha}``, which is
    then halved.
    """
    a, b = iv.as_floats()
    length = b - a
    if 0.25 <= length <= 0.5:
        return Reduction([(points, Interval(a, b))], False, points.N)
    if length > 0.5:
        return Reduction(_halves(points, a, b), False, points.N)
    return Reduction(_halves(fractional_shift(points, a), length, 1.0), True, points.N)
