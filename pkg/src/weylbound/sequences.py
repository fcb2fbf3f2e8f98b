"""Finite sequences modulo one.

A :class:`SequencePoints` holds the fractional parts ``{x_1}, ..., {x_N}`` as
doubles.  Two generators attach extra structure that the exponential-sum code
can exploit:

* ``rational`` -- the exact residues ``s_n`` and modulus ``m`` with
  ``x_n = s_n / m``;
* ``kronecker`` -- the step ``alpha`` with ``x_n = {n * alpha}``, where
  ``alpha`` is the exact binary value of the float.

Sequence specs use the string form ``kind:key=value,key=value``; list values
are separated by ``;``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

KINDS = ("kronecker", "vandercorput", "polynomial", "explicit", "rational", "constant")
_ALIASES = {"vdc": "vandercorput", "const": "constant", "poly": "polynomial"}

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

# widest modulus for which residue products stay inside int64
MAX_MODULUS = 2**62


class SpecError(ValueError):
    """Malformed or inconsistent sequence spec."""


def frac(x):
    """Fractional part ``x - floor(x)``, always in [0, 1).

    ``x - floor(x)`` can round up to exactly 1.0 for tiny negative inputs;
    those are mapped to 0.0.
    """
    x = np.asarray(x, dtype=float)
    f = x - np.floor(x)
    return np.where(f >= 1.0, 0.0, f)


@dataclass(frozen=True)
class RationalSequence:
    """Residues ``s_n`` in ``[0, m)`` standing for the points ``s_n / m``."""

    m: int
    residues: np.ndarray

    def __post_init__(self):
        m = int(self.m)
        if m < 1:
            raise ValueError(f"modulus must be >= 1, got {self.m}")
        if m > MAX_MODULUS:
            raise OverflowError(f"modulus {m} exceeds 2**62")
        r = np.array(self.residues, dtype=np.int64).reshape(-1)
        if r.size == 0:
            raise ValueError("need at least one residue")
        if r.min() < 0 or r.max() >= m:
            raise ValueError("residues must lie in [0, m)")
        r.setflags(write=False)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "residues", r)

    @property
    def N(self) -> int:
        return int(self.residues.size)

    def histogram(self) -> np.ndarray:
        """Counts ``c_r`` of each residue class, length ``m``."""
        return np.bincount(self.residues, minlength=self.m).astype(np.int64)

    def to_points(self) -> "SequencePoints":
        values = frac(self.residues.astype(float) / float(self.m))
        return SequencePoints(values, rational=self)


@dataclass(frozen=True)
class SequencePoints:
    """Fractional parts ``{x_n}``, ``n = 1..N``, stored as read-only doubles."""

    values: np.ndarray
    rational: RationalSequence | None = field(default=None, compare=False)
    kronecker: float | None = field(default=None, compare=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(-1)
        if v.size == 0:
            raise ValueError("a sequence needs N >= 1 points")
        if not np.all(np.isfinite(v)) or v.min() < 0.0 or v.max() >= 1.0:
            raise ValueError("point values must lie in [0, 1)")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.rational is not None and self.rational.N != v.size:
            raise ValueError("rational backing has the wrong length")

    @property
    def N(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.N


def fractional_shift(points: SequencePoints, alpha) -> SequencePoints:
    """Return ``{{x_n} - alpha}`` elementwise."""
    return SequencePoints(frac(points.values - float(alpha)))


# -- specs -----------------------------------------------------------------


@dataclass(frozen=True)
class SequenceSpec:
    kind: str
    params: dict

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise SpecError(f"unknown sequence kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", dict(self.params))
        _validate(self)

    @classmethod
    def parse(cls, text: str) -> "SequenceSpec":
        """Parse ``kind:key=value,...``."""
        kind, _, rest = text.strip().partition(":")
        params = {}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, eq, value = item.partition("=")
            if not eq or not key.strip():
                raise SpecError(f"expected key=value, got {item!r}")
            params[key.strip()] = value.strip()
        return cls(kind.strip(), params)

    def __str__(self):
        body = ",".join(f"{k}={_fmt(v)}" for k, v in self.params.items())
        return f"{self.kind}:{body}" if body else self.kind


def _fmt(v):
    if isinstance(v, (list, tuple)):
        return ";".join(_fmt(x) for x in v)
    return repr(v) if isinstance(v, float) else str(v)


def _real(params, key, required=True, default=None):
    if key not in params:
        if required:
            raise SpecError(f"missing parameter {key!r}")
        return default
    raw = params[key]
    if isinstance(raw, str) and raw.lower() == "golden":
        return GOLDEN
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise SpecError(f"parameter {key!r} must be real, got {raw!r}") from None
    if not math.isfinite(value):
        raise SpecError(f"parameter {key!r} must be finite")
    return value


def _int(params, key, required=True, default=None):
    if key not in params:
        if required:
            raise SpecError(f"missing parameter {key!r}")
        return default
    raw = params[key]
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise SpecError(f"parameter {key!r} must be an integer, got {raw!r}") from None
    if isinstance(raw, float) and raw != value:
        raise SpecError(f"parameter {key!r} must be an integer, got {raw!r}")
    return value


def _list(params, key, conv):
    raw = params[key]
    if isinstance(raw, str):
        raw = [s for s in raw.replace(" ", "").split(";") if s]
    try:
        return [conv(x) for x in raw]
    except (TypeError, ValueError):
        raise SpecError(f"parameter {key!r} has a malformed entry") from None


def _read_file(path, conv):
    try:
        lines = Path(path).read_text().split()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from None
    try:
        return [conv(s) for s in lines]
    except ValueError:
        raise SpecError(f"malformed entry in {path}") from None


def _validate(spec: SequenceSpec):
    p, kind = spec.params, spec.kind
    if kind == "kronecker":
        _real(p, "alpha")
    elif kind == "vandercorput":
        if _int(p, "base", required=False, default=2) < 2:
            raise SpecError("van der Corput base must be >= 2")
    elif kind == "polynomial":
        key = "coefficients" if "coefficients" in p else "coeffs"
        if key not in p:
            raise SpecError("missing parameter 'coefficients'")
        if not _list(p, key, float):
            raise SpecError("need at least one coefficient")
    elif kind == "explicit":
        if "values" not in p and "file" not in p:
            raise SpecError("explicit sequence needs values= or file=")
        if "values" in p:
            _list(p, "values", float)
    elif kind == "rational":
        m = _int(p, "m")
        if m < 1:
            raise SpecError("modulus must be >= 1")
        if "residues" in p:
            res = _list(p, "residues", int)
            if any(r < 0 or r >= m for r in res):
                raise SpecError("residues must lie in [0, m)")
        elif "file" not in p:
            _int(p, "mult", required=False, default=1)
            _int(p, "shift", required=False, default=0)
    elif kind == "constant":
        _real(p, "value")


def _radical_inverse(n: np.ndarray, base: int) -> np.ndarray:
    n = n.astype(np.int64).copy()
    out = np.zeros(n.shape, dtype=float)
    scale = 1.0 / base
    while np.any(n):
        out += (n % base) * scale
        n //= base
        scale /= base
    return out


def kronecker_values(alpha: float, N: int) -> np.ndarray:
    """``{n * alpha}`` for n = 1..N, exact up to the final rounding."""
    P, Q = float(alpha).as_integer_ratio()
    P %= Q
    n = np.arange(1, N + 1, dtype=np.uint64)
    if Q <= 2**63:
        # Q divides 2**64, so wrapping uint64 arithmetic is exact modulo Q
        num = (n * np.uint64(P)) & np.uint64(Q - 1)
        return frac(num.astype(float) / float(Q))
    return frac(np.array([float((int(k) * P % Q) / Q) for k in n]))


def generate(spec: SequenceSpec | str, N: int) -> SequencePoints:
    """Generate ``N`` points of the sequence described by ``spec``."""
    if isinstance(spec, str):
        spec = SequenceSpec.parse(spec)
    N = int(N)
    if N < 1:
        raise SpecError("N must be >= 1")
    p, kind = spec.params, spec.kind
    if kind == "constant":
        return SequencePoints(np.full(N, float(frac(_real(p, "value")))))
    if kind == "kronecker":
        alpha = _real(p, "alpha")
        values = kronecker_values(alpha, N)
        _, Q = alpha.as_integer_ratio()
        return SequencePoints(values, kronecker=alpha if Q <= 2**63 else None)
    if kind == "vandercorput":
        base = _int(p, "base", required=False, default=2)
        return SequencePoints(_radical_inverse(np.arange(1, N + 1), base))
    if kind == "polynomial":
        key = "coefficients" if "coefficients" in p else "coeffs"
        coeffs = _list(p, key, float)
        n = np.arange(1, N + 1, dtype=float)
        # ascending powers: c0 + c1 n + c2 n^2 + ...
        acc = np.zeros(N)
        for c in reversed(coeffs):
            acc = acc * n + c
        return SequencePoints(frac(acc))
    if kind == "explicit":
        vals = _list(p, "values", float) if "values" in p else _read_file(p["file"], float)
        if len(vals) < N:
            raise SpecError(f"explicit sequence has {len(vals)} values, need {N}")
        return SequencePoints(frac(np.array(vals[:N])))
    # rational
    m = _int(p, "m")
    if "residues" in p or "file" in p:
        res = _list(p, "residues", int) if "residues" in p else _read_file(p["file"], int)
        if len(res) < N:
            raise SpecError(f"rational sequence has {len(res)} residues, need {N}")
        if any(r < 0 or r >= m for r in res):
            raise SpecError("residues must lie in [0, m)")
        res = res[:N]
    else:
        mult = _int(p, "mult", required=False, default=1)
        shift = _int(p, "shift", required=False, default=0)
        res = [(mult * n + shift) % m for n in range(1, N + 1)]
    return RationalSequence(m, np.array(res, dtype=np.int64)).to_points()


def reconstruct_residues(points: SequencePoints, m: int) -> np.ndarray:
    """Recover integer residues from points that are multiples of ``1/m``."""
    return np.rint(points.values * m).astype(np.int64) % m
