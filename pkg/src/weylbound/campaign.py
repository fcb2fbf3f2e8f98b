"""Seeded random configurations for the prooflab checks.

Instance ``i`` of a campaign with seed ``s`` draws from
``numpy.random.default_rng([s, i])``, so any instance can be reproduced
on its own and the report order never depends on execution order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import GaraevParams
from .discrepancy import Interval
from .prooflab import (
    RationalSequence,
    SmoothingParams,
    count_J,
    h0_decomposition_check,
    holder_step_check,
    naive_feasible,
    s3_interpolation_check,
    sandwich_check,
    simplified_weyl_verify,
)

VERBS = ("sandwich", "decomp", "holder", "weyl3")
RESIDUE_SHAPES = ("uniform", "cluster", "progression", "full", "constant")


@dataclass(frozen=True)
class Config:
    rseq: RationalSequence
    iv: Interval
    sp: SmoothingParams
    params: GaraevParams
    shape: str

    def describe(self) -> dict:
        return {
            "m": self.rseq.m, "N": self.rseq.N, "shape": self.shape,
            "k": self.sp.k, "T": self.sp.T,
            "alpha": float(self.iv.alpha), "beta": float(self.iv.beta),
            "a": float(self.params.a), "b": float(self.params.b),
        }


def random_residues(rng, m: int, N: int, shape: str) -> np.ndarray:
    if shape == "uniform":
        return rng.integers(0, m, N)
    if shape == "cluster":
        centre = rng.integers(0, m)
        spread = max(1, int(m * rng.uniform(0.005, 0.1)))
        return np.mod(centre + np.rint(rng.normal(0, spread, N)).astype(np.int64), m)
    if shape == "progression":
        step, start = rng.integers(1, m), rng.integers(0, m)
        return np.mod(start + step * np.arange(N, dtype=np.int64), m)
    if shape in ("full", "full_system"):
        return np.arange(N, dtype=np.int64) % m
    if shape == "constant":
        return np.full(N, rng.integers(0, m), dtype=np.int64)
    raise ValueError(f"unknown residue shape {shape!r}")


def random_interval(rng, lo=0.25, hi=0.5) -> Interval:
    length = rng.uniform(lo, hi)
    alpha = rng.uniform(0.0, 1.0 - length)
    beta = min(alpha + length, 1.0)
    return Interval(alpha, beta)


def random_config(rng) -> Config:
    """``m in [400, 5000]``, ``N <= 1000``, ``k in {1,2,3}``, ``10 <= T``, ``10kT < m``.

    ``(a, b)`` is drawn so that ``[a] + 1 = k``; half of the draws keep ``T``
    small enough for the naive counter.
    """
    m = int(rng.integers(400, 5001))
    N = int(rng.integers(1, 1001))
    k = int(rng.integers(1, 4))
    t_max = (m - 1) // (10 * k)
    if rng.random() < 0.5:
        t_max = min(t_max, 20)
    T = int(rng.integers(10, t_max + 1))
    a = (k - 1) + rng.uniform(0.05, 0.95)
    b = rng.uniform(0.0, a / 2) if rng.random() < 0.8 else a / 2
    shape = str(rng.choice(RESIDUE_SHAPES))
    rseq = RationalSequence(m, random_residues(rng, m, N, shape))
    return Config(rseq, random_interval(rng), SmoothingParams(k, T, m), GaraevParams(a, b), shape)


def weyl3_config(rng):
    m = int(rng.integers(10**4, 2 * 10**5 + 1))
    eps = float(rng.choice([0.02, 0.05]))
    N = int(rng.integers(1, 5001)) if rng.random() < 0.7 else m
    shape = "full_system" if N == m else str(rng.choice(RESIDUE_SHAPES))
    rseq = RationalSequence(m, random_residues(rng, m, N, shape))
    intervals = [Interval(0.0, 0.5)] + [random_interval(rng) for _ in range(4)]
    return rseq, eps, intervals, shape


def _sandwich(cfg: Config) -> dict:
    res = sandwich_check(cfg.rseq, cfg.iv, cfg.sp)
    out = {"lhs": res.J2, "mid": res.F_scaled, "rhs": res.J1, "holds": res.holds}
    if naive_feasible(cfg.rseq, cfg.sp):
        agree = all(
            count_J(cfg.rseq, cfg.iv, cfg.sp, s, "naive") == v
            for s, v in (("minus", res.J1), ("plus", res.J2))
        )
        out["naive_agrees"] = agree
        out["holds"] = out["holds"] and agree
    return out


def _decomp(cfg: Config) -> dict:
    rows = {s: h0_decomposition_check(cfg.rseq, cfg.iv, cfg.sp, s) for s in ("minus", "plus")}
    return {
        "lhs": max(r.lhs for r in rows.values()),
        "rhs": min(r.rhs for r in rows.values()),
        "by_sign": {s: {"lhs": r.lhs, "rhs": r.rhs, "holds": r.holds} for s, r in rows.items()},
        "holds": all(r.holds for r in rows.values()),
    }


def _holder(cfg: Config) -> dict:
    h = holder_step_check(cfg.rseq, cfg.params, cfg.sp)
    s3 = s3_interpolation_check(cfg.sp, cfg.params, cfg.rseq.m)
    return {
        "lhs": h.lhs, "rhs": h.rhs, "s3_energy": h.s3_energy,
        "parseval_ok": h.parseval_ok, "s3_interpolation": s3,
        "holds": h.holds and s3,
    }


def run_instance(verb: str, seed: int, index: int) -> dict:
    rng = np.random.default_rng([seed, index])
    if verb == "weyl3":
        rseq, eps, intervals, shape = weyl3_config(rng)
        rep = simplified_weyl_verify(rseq, eps, intervals)
        verdict = rep.to_dict()
        verdict["holds"] = rep.internal_checks and rep.aggregation_ok and rep.conclusion_holds is not False
        if shape == "full_system":
            verdict["full_residue_bound"] = rep.worst_dev <= 2 / rseq.m <= eps
            verdict["holds"] = verdict["holds"] and verdict["full_residue_bound"]
        return {"index": index, "params": {"m": rseq.m, "N": rseq.N, "eps": eps, "shape": shape},
                **verdict}
    cfg = random_config(rng)
    check = {"sandwich": _sandwich, "decomp": _decomp, "holder": _holder}.get(verb)
    if check is None:
        raise ValueError(f"unknown verb {verb!r}; expected one of {VERBS}")
    return {"index": index, "params": cfg.describe(), **check(cfg)}


def run_campaign(verb: str, seed: int, count: int) -> list[dict]:
    if count < 1:
        raise ValueError("count must be >= 1")
    return [run_instance(verb, seed, i) for i in range(count)]


def all_hold(verdicts) -> bool:
    return all(v["holds"] for v in verdicts)
