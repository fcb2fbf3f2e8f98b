"""Exponential-sum bounds for discrepancy, as raw right-hand sides.

No implied constants are applied anywhere; ratios such as ``D / W`` are left
to the caller (see ``weylbound compare``).

For exponents ``(a, b)`` with ``a >= 2b``, ``0 <= b < 2`` and ``(a, b) != (0, 0)``
the main functional is

    W = ( sum_h h^(-p) (|S(h)|/N)^r )^o,
    p = (2+a-2b)/(2-b),  r = 2/(2-b),  o = (2-b)/(2+a-b).

Since ``|S(h)|/N <= 1`` the tail past ``L`` is at most
``sum_{h>L} h^(-p) <= L^(-q)/q`` with ``q = p - 1 = (a-b)/(2-b)``; for
``q >= 1`` the simpler ``L^(-q)`` is already a bound and is what we report.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real

import numpy as np

from .discrepancy import Interval, count_in_interval
from .expsums import ExpSumTable, exp_sum_table
from .sequences import SequencePoints

VARIANTS = ("b1", "symmetric_c", "asymmetric_c")
BOUND_KINDS = ("garaev", "leveque", "erdos_turan", "montgomery", "remark")


class InadmissibleParams(ValueError):
    pass


class TableTooShort(ValueError):
    pass


@dataclass(frozen=True)
class Exponents:
    """Exponents induced by ``(a, b)``; exact when ``a, b`` are Fractions."""

    h_exponent: Real     # p
    inner_power: Real    # r
    outer: Real          # o
    tail: Real           # q = p - 1

    def triple(self):
        return (self.h_exponent, self.inner_power, self.outer)


def _exact(*xs):
    return all(isinstance(x, (int, Fraction)) for x in xs)


def garaev_exponents(a, b) -> Exponents:
    if _exact(a, b):
        a, b, two = Fraction(a), Fraction(b), Fraction(2)
    else:
        a, b, two = float(a), float(b), 2.0
    p = (two + a - 2 * b) / (two - b)
    return Exponents(p, two / (two - b), (two - b) / (two + a - b), (a - b) / (two - b))


@dataclass(frozen=True)
class GaraevParams:
    a: Real
    b: Real

    @property
    def admissible(self) -> bool:
        a, b = self.a, self.b
        return a >= 2 * b and 0 <= b < 2 and a > b

    def check(self) -> "GaraevParams":
        if not self.admissible:
            raise InadmissibleParams(
                f"(a, b) = ({self.a}, {self.b}) needs a >= 2b, 0 <= b < 2 and a > b"
            )
        return self

    def exponents(self) -> Exponents:
        return garaev_exponents(self.a, self.b)

    def as_float(self) -> "GaraevParams":
        return GaraevParams(float(self.a), float(self.b))


def corollary_params(variant: str, a_or_c, check: bool = True) -> GaraevParams:
    """The three one-parameter families.

    ``b1``: ``(a, 1)``; ``symmetric_c``: ``(4(1-1/c), 2(1-1/c))``;
    ``asymmetric_c``: ``(2, 2(1-1/c))``.  The asymmetric family satisfies
    ``a >= 2b`` only for ``c <= 2``; with ``check=False`` the pair is
    returned anyway so its exponents can be inspected.
    """
    x = a_or_c
    one = Fraction(1) if _exact(x) else 1.0
    if variant == "b1":
        if x < 2:
            raise InadmissibleParams("b1 family needs a >= 2")
        params = GaraevParams(x, one)
    elif variant in ("symmetric_c", "asymmetric_c"):
        if x <= 1:
            raise InadmissibleParams("c must exceed 1")
        b = 2 * (one - one / x)
        params = GaraevParams(2 * b, b) if variant == "symmetric_c" else GaraevParams(2 * one, b)
    else:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    return params.check() if check else params


@dataclass(frozen=True)
class BoundReport:
    name: str
    value: float
    params: dict = field(default_factory=dict)
    truncation_L: int = 0
    tail_bound: float = 0.0
    inner_sum: float | None = None

    def to_dict(self):
        d = {
            "name": self.name,
            "value": self.value,
            "params": self.params,
            "truncation_L": self.truncation_L,
            "tail_bound": self.tail_bound,
        }
        if self.inner_sum is not None:
            d["inner_sum"] = self.inner_sum
        return d


def tail_bound(params: GaraevParams, L: int) -> float:
    """Upper bound on the omitted inner terms ``h > L`` (using ``|S|/N <= 1``)."""
    q = float(params.exponents().tail)
    return L ** (-q) / min(q, 1.0)


def truncation_point(params: GaraevParams, inner_tol: float):
    """Smallest ``L > 10`` whose tail bound is ``<= inner_tol``; returns ``(L, tail)``."""
    params.check()
    if not inner_tol > 0:
        raise ValueError("inner_tol must be positive")
    q = float(params.exponents().tail)
    guess = (inner_tol * min(q, 1.0)) ** (-1.0 / q)
    if not math.isfinite(guess) or guess > 2**53:
        raise TableTooShort(f"truncation point for q={q:g}, tol={inner_tol:g} is out of reach")
    L = max(11, math.ceil(guess))
    while L > 11 and tail_bound(params, L - 1) <= inner_tol:
        L -= 1
    while tail_bound(params, L) > inner_tol:
        L += 1
    return L, tail_bound(params, L)


def inner_sum(table: ExpSumTable, params: GaraevParams, L: int) -> float:
    """``sum_{h<=L} h^(-p) (|S(h)|/N)^r``."""
    if L > table.h_max:
        raise TableTooShort(f"table has h_max={table.h_max}, need {L}")
    ex = params.as_float().exponents()
    h = np.arange(1, L + 1, dtype=float)
    terms = h ** (-ex.h_exponent) * (table.magnitudes[:L] / table.N) ** ex.inner_power
    return math.fsum(terms.tolist())


def garaev_W(table: ExpSumTable, params: GaraevParams, inner_tol: float, name: str = "garaev") -> BoundReport:
    params.check()
    L, tail = truncation_point(params, inner_tol)
    s = inner_sum(table, params, L)
    value = s ** float(params.exponents().outer)
    return BoundReport(name, value, {"a": float(params.a), "b": float(params.b), "tol": inner_tol},
                       L, tail, s)


def leveque_bound(table: ExpSumTable, inner_tol: float) -> BoundReport:
    return garaev_W(table, GaraevParams(2.0, 1.0), inner_tol, name="leveque")


def _check_H(table, H):
    H = int(H)
    if H < 1:
        raise ValueError("H must be >= 1")
    if H > table.h_max:
        raise TableTooShort(f"H={H} exceeds table h_max={table.h_max}")
    return H


def erdos_turan_rhs(table: ExpSumTable, H: int) -> float:
    """``1/H + (1/N) sum_{h<=H} |S(h)|/h``."""
    H = _check_H(table, H)
    h = np.arange(1, H + 1, dtype=float)
    return 1.0 / H + math.fsum((table.magnitudes[:H] / h).tolist()) / table.N


def montgomery_rhs(table: ExpSumTable, iv: Interval, H: int) -> float:
    """``1/H + (1/N) sum_{h<=H} min(beta-alpha, 1/h) |S(h)|`` for one interval."""
    H = _check_H(table, H)
    h = np.arange(1, H + 1, dtype=float)
    w = np.minimum(float(iv.length), 1.0 / h)
    return 1.0 / H + math.fsum((w * table.magnitudes[:H]).tolist()) / table.N


def floor_power(x: float) -> int:
    """``floor(x)`` that does not lose integers to rounding in ``x``."""
    n = round(x)
    return int(n) if abs(x - n) <= 1e-9 * max(1.0, abs(x)) else math.floor(x)


@dataclass(frozen=True)
class RemarkResult:
    hypothesis_ok: bool
    ratio: float
    h_limit: int
    count: int


def remark_ratio(points: SequencePoints, Delta: float, eps: float, iv: Interval,
                 h_ceiling: int = 10**7) -> RemarkResult:
    """Empirical constant in ``F = (beta-alpha)N + O(Delta N log((beta-alpha)/Delta))``.

    The hypothesis is ``|S(h)| <= Delta N`` for ``1 <= h <= Delta^(-1-eps)``.
    """
    if not (0 < Delta <= 1 and 0 < eps <= 1):
        raise ValueError("need 0 < Delta <= 1 and 0 < eps <= 1")
    length = float(iv.length)
    if length < 2 * Delta / eps:
        raise ValueError(f"interval length {length} is below 2*Delta/eps = {2 * Delta / eps}")
    H = floor_power(Delta ** (-1.0 - eps))
    if H > h_ceiling:
        raise TableTooShort(f"hypothesis range h <= {H} exceeds the ceiling {h_ceiling}")
    N = points.N
    ok = True
    if H >= 1:
        mags = exp_sum_table(points, H).magnitudes
        ok = bool(np.all(mags <= Delta * N))
    F = count_in_interval(points, iv)
    ratio = abs(F - length * N) / (Delta * N * math.log(length / Delta))
    return RemarkResult(ok, ratio, H, F)


def optimize_params(table: ExpSumTable, grid, inner_tol: float):
    """Grid point with the smallest ``W``; ties go to the earliest entry."""
    grid = list(grid)
    if not grid:
        raise ValueError("empty parameter grid")
    for p in grid:
        p.check()
    best = None
    for p in grid:
        rep = garaev_W(table, p, inner_tol)
        if best is None or rep.value < best[1].value:
            best = (p, rep)
    return best
