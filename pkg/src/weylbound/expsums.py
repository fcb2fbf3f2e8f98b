"""Weyl sums ``S(h) = sum_n e(h x_n)`` with ``e(t) = exp(2 pi i t)``.

Evaluation paths, chosen by the structure a :class:`SequencePoints` carries:

* rational backing: phases ``h s mod m`` reduced in integers, summed over
  residue classes weighted by their counts; whole periods via one FFT of the
  residue histogram when that is cheaper;
* Kronecker backing: the geometric-series closed form, with all phases
  reduced exactly in integer arithmetic;
* anything else: direct summation over distinct point values.

All floating sums go through :func:`pairwise_sum`.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .sequences import SequencePoints

TWO_PI = 2.0 * math.pi
_BLOCK = 1 << 20  # complex entries per evaluation block


def pairwise_sum(a, axis=-1):
    """Tree summation along ``axis``: error grows like log(n), not n.

    The reduction order depends only on the length, so results are
    reproducible regardless of how callers split work across ``h``.
    """
    a = np.moveaxis(np.asarray(a), axis, -1)
    if a.shape[-1] == 0:
        return np.zeros(a.shape[:-1], dtype=a.dtype)
    while a.shape[-1] > 1:
        if a.shape[-1] % 2:
            pad = np.zeros(a.shape[:-1] + (1,), dtype=a.dtype)
            a = np.concatenate([a, pad], axis=-1)
        a = a[..., 0::2] + a[..., 1::2]
    return a[..., 0]


def sinpi_ratio(k, q):
    """``sin(pi k / q)`` for integer ``k``, reduced exactly before the float step."""
    k = np.asarray(k, dtype=np.int64)
    q = int(q)
    r = np.mod(k, 2 * q)
    sign = np.where(r >= q, -1.0, 1.0)
    s = np.where(r >= q, r - q, r)
    t = np.minimum(s, q - s)
    return sign * np.sin(math.pi * (t.astype(float) / q))


def expi_ratio(k, q):
    """``exp(i pi k / q)`` for integer ``k``."""
    k = np.asarray(k, dtype=np.int64)
    q = int(q)
    r = np.mod(k, 2 * q)
    r = np.where(r > q, r - 2 * q, r)
    return np.exp(1j * math.pi * (r.astype(float) / q))


# -- evaluation paths --------------------------------------------------------


def _direct(values, weights, hs):
    out = np.empty(hs.size, dtype=complex)
    rows = max(1, _BLOCK // values.size)
    for start in range(0, hs.size, rows):
        h = hs[start:start + rows].astype(float)
        t = np.multiply.outer(h, values)
        t -= np.floor(t)
        out[start:start + rows] = pairwise_sum(weights * np.exp(TWO_PI * 1j * t))
    return out


def _rational_direct(rseq, hs):
    m = rseq.m
    r, c = np.unique(rseq.residues, return_counts=True)
    c = c.astype(float)
    out = np.empty(hs.size, dtype=complex)
    rows = max(1, _BLOCK // r.size)
    for start in range(0, hs.size, rows):
        h = np.mod(hs[start:start + rows], m)
        k = np.mod(np.multiply.outer(h, r), m)
        out[start:start + rows] = pairwise_sum(c * np.exp(TWO_PI * 1j * (k / m)))
    return out


def rational_period(rseq) -> np.ndarray:
    """``S(h)`` for ``h = 0..m-1`` from one FFT of the residue histogram."""
    hist = rseq.histogram().astype(float)
    # numpy's forward FFT uses e(-hr/m); S(h) uses e(+hr/m)
    return np.conj(np.fft.fft(hist))


def _kronecker(alpha, N, hs):
    P, Q = float(alpha).as_integer_ratio()
    two_q = 2 * Q
    P %= two_q
    mask = np.uint64(two_q - 1)
    h = hs.astype(np.uint64)
    b = h * np.uint64(P)            # wraps mod 2**64; 2Q divides 2**64
    k1 = b & mask
    k2 = (b * np.uint64(N)) & mask
    k3 = (b * np.uint64(N + 1)) & mask

    def _sinpi(k):
        big = k >= np.uint64(Q)
        s = np.where(big, k - np.uint64(Q), k)
        t = np.minimum(s, np.uint64(Q) - s)
        return np.where(big, -1.0, 1.0) * np.sin(math.pi * (t.astype(float) / Q))

    k3f = k3.astype(float) / Q
    phase = np.exp(1j * math.pi * np.where(k3f > 1.0, k3f - 2.0, k3f))
    den = _sinpi(k1)
    num = _sinpi(k2)
    out = np.empty(hs.size, dtype=complex)
    ok = np.abs(den) >= 1e-12
    out[ok] = phase[ok] * (num[ok] / den[ok])
    if not np.all(ok):
        # h*alpha (numerically) an integer: every term is ~1
        n = np.arange(1, N + 1, dtype=np.uint64)
        for i in np.flatnonzero(~ok):
            kk = (n * np.uint64(2 * int(hs[i]) * P % two_q)) & mask
            out[i] = pairwise_sum(np.exp(1j * math.pi * (kk.astype(float) / Q)))
    return out


def _sums(points: SequencePoints, hs: np.ndarray) -> np.ndarray:
    """``S(h)`` for non-negative integer ``hs``."""
    N = points.N
    rseq = points.rational
    if rseq is not None and rseq.m < 2**31:
        m = rseq.m
        n_classes = np.unique(rseq.residues).size
        if m <= 1 << 26 and hs.size * n_classes > 4 * m * (math.log2(m) + 1):
            return rational_period(rseq)[np.mod(hs, m)]
        return _rational_direct(rseq, hs)
    if points.kronecker is not None:
        return _kronecker(points.kronecker, N, hs)
    values, counts = np.unique(points.values, return_counts=True)
    return _direct(values, counts.astype(float), hs)


def exp_sum(points: SequencePoints, h: int) -> complex:
    """``sum_{n<=N} e(h x_n)``; exactly ``N`` at ``h = 0``."""
    h = int(h)
    if h == 0:
        return complex(points.N)
    value = complex(_sums(points, np.array([abs(h)], dtype=np.int64))[0])
    return value if h > 0 else value.conjugate()


@dataclass(frozen=True)
class ExpSumTable:
    """``S(h)`` for ``h = 1..h_max``; index ``h - 1`` in the arrays."""

    N: int
    complex_values: np.ndarray
    magnitudes: np.ndarray

    def __post_init__(self):
        if int(self.N) < 1:
            raise ValueError("N must be >= 1")
        cv = np.array(self.complex_values, dtype=complex).reshape(-1)
        mags = np.array(self.magnitudes, dtype=float).reshape(-1)
        if cv.size == 0:
            raise ValueError("table needs h_max >= 1")
        if cv.shape != mags.shape:
            raise ValueError("complex values and magnitudes differ in length")
        if mags.min() < 0 or mags.max() > self.N * (1 + 1e-12):
            raise ValueError("magnitudes must lie in [0, N]")
        for arr in (cv, mags):
            arr.setflags(write=False)
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "complex_values", cv)
        object.__setattr__(self, "magnitudes", mags)

    @classmethod
    def from_complex(cls, N, values):
        values = np.asarray(values, dtype=complex)
        return cls(N, values, np.abs(values))

    @classmethod
    def from_magnitudes(cls, N, mags):
        """Table with real non-negative entries; bounds only read magnitudes."""
        mags = np.asarray(mags, dtype=float)
        return cls(N, mags.astype(complex), mags)

    @property
    def h_max(self) -> int:
        return int(self.magnitudes.size)

    def padded(self, h_max: int) -> "ExpSumTable":
        """Extend to ``h_max`` with the worst case ``|S(h)| = N``."""
        extra = h_max - self.h_max
        if extra <= 0:
            return self
        vals = np.concatenate([self.complex_values, np.full(extra, float(self.N), dtype=complex)])
        return ExpSumTable.from_complex(self.N, vals)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["h", "re", "im", "abs"])
        for h, (z, a) in enumerate(zip(self.complex_values, self.magnitudes), start=1):
            w.writerow([h, repr(float(z.real)), repr(float(z.imag)), repr(float(a))])
        return buf.getvalue()


def exp_sum_table(points: SequencePoints, h_max: int) -> ExpSumTable:
    h_max = int(h_max)
    if h_max < 1:
        raise ValueError("h_max must be >= 1")
    hs = np.arange(1, h_max + 1, dtype=np.int64)
    return ExpSumTable.from_complex(points.N, _sums(points, hs))


# -- section-one identities ---------------------------------------------------


_TABLE_LIMIT = 1 << 22


@lru_cache(maxsize=8)
def _half_roots(m):
    """``exp(i pi k / m)`` for ``k = 0..2m-1``."""
    table = expi_ratio(np.arange(2 * m, dtype=np.int64), m)
    table.setflags(write=False)
    return table


def geometric_sum(L, M, h, m):
    """``sum_{u=L+1}^{L+M} e(h u / m)`` in closed form.

    Uses ``e(h(2L+M+1)/(2m)) sin(pi h M/m) / sin(pi h/m)``, so the modulus
    is ``|sin(pi h M/m)| / |sin(pi h/m)| <= m / (2h)``.  Accepts broadcastable
    integer arrays.
    """
    L, M, h = (np.asarray(x, dtype=np.int64) for x in (L, M, h))
    m = int(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    if np.any(M < 1):
        raise ValueError("M must be >= 1")
    if np.any(h < 1) or np.any(2 * h > m):
        raise ValueError("h must satisfy 1 <= h <= m/2")
    two_m = 2 * m
    hr = np.mod(h, two_m)
    k_phase = np.mod(hr * np.mod(2 * L + M + 1, two_m), two_m)
    num = sinpi_ratio(np.mod(hr * np.mod(M, two_m), two_m), m)
    den = sinpi_ratio(h, m)
    if two_m <= _TABLE_LIMIT:
        phase = _half_roots(m)[k_phase]
    else:
        phase = expi_ratio(k_phase, m)
    out = phase * (num / den)
    # |1 - e(h/m)| = 2 sin(pi h/m); the ratio form loses accuracy near 0
    bad = 2.0 * np.abs(den) < 1e-12
    if np.any(bad):
        out = np.array(out, dtype=complex)
        Lb, Mb, hb = np.broadcast_arrays(L, M, h)
        for idx in zip(*np.nonzero(np.broadcast_to(bad, out.shape))):
            u = np.arange(int(Lb[idx]) + 1, int(Lb[idx]) + int(Mb[idx]) + 1, dtype=np.int64)
            out[idx] = pairwise_sum(np.exp(TWO_PI * 1j * (np.mod(int(hb[idx]) * u, m) / m)))
    return out[()] if out.ndim == 0 else out


def orthogonality_indicator(u: int, m: int) -> float:
    """``(1/m) sum_{h<m} e(h u / m)``: 1 if ``m | u`` else 0.

    The exponential sum is also evaluated numerically and must agree with
    the exact value to 1e-10.
    """
    u, m = int(u), int(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    exact = 1.0 if u % m == 0 else 0.0
    h = np.arange(m, dtype=np.int64)
    k = np.mod(h * (u % m), m)
    numeric = pairwise_sum(np.exp(TWO_PI * 1j * (k / m))) / m
    if abs(numeric - exact) > 1e-10:
        raise ArithmeticError(f"orthogonality sum {numeric} disagrees with {exact} at u={u}, m={m}")
    return exact


def parseval_value(X, m: int) -> float:
    """``(1/m) sum_{h<m} |sum_{x in X} e(h x/m)|^2``, which equals ``|X|``."""
    m = int(m)
    xs = np.array(sorted(X), dtype=np.int64) if not isinstance(X, np.ndarray) else np.sort(X.astype(np.int64))
    if m < 1 or xs.size == 0:
        raise ValueError("need m >= 1 and a non-empty set")
    if np.any(np.diff(xs) == 0):
        raise ValueError("set elements must be distinct")
    if xs[0] < 0 or xs[-1] >= m:
        raise ValueError("set elements must lie in [0, m)")
    h = np.arange(m, dtype=np.int64)
    inner = pairwise_sum(np.exp(TWO_PI * 1j * (np.mod(np.multiply.outer(h, xs), m) / m)))
    return float(pairwise_sum(np.abs(inner) ** 2) / m)
