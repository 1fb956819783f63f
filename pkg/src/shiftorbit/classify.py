"""Finite-horizon diagnostics for orbits of weighted shifts.

Every verdict here is evidence at a stated horizon, not a statement about limits.
"""
from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .operators import ShiftOperator, apply, iterate_norms, right_inverse_apply
from .orbitstats import cesaro_series
from .seqcore import (BILATERAL, ConfigError, DomainError, DyadicLog, block_bounds,
                      product_range)
from .vectors import SpaceTag, SupportedVector, basis, combine, lp, norm, sample_vector

__all__ = ["Verdict", "TrichotomyReport", "classify_orbit", "classify_operator",
           "OperatorReport", "CesaroBound", "abs_cesaro_bound_estimate", "CriterionWitness",
           "CriterionResult", "hypercyclicity_criterion_check", "default_powers",
           "KitaiReport", "kitai_witness_check", "mean_liyorke_stat", "HORIZON_CAVEAT"]

DEFAULT_TOL_ZERO = 1e-3
DEFAULT_TOL_INF = 1e3

HORIZON_CAVEAT = ("finite-horizon diagnostic: tail-window extrema of the Cesaro averages "
                  "at the stated horizon; no limit is certified")


class Verdict(str, enum.Enum):
    MEAN_TO_ZERO = "MeanToZero"
    MEAN_IRREGULAR = "MeanIrregular"
    MEAN_DIVERGENT = "MeanDivergent"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TrichotomyReport:
    verdict: Verdict
    horizon: int
    window: int
    cesaro_avg: float
    tail_window_min: float
    tail_window_max: float
    growth_ratio: float
    tol_zero: float
    tol_inf: float
    caveat: str = HORIZON_CAVEAT

    def to_record(self, operator: str = "", vector: str = "") -> dict:
        return {
            "operator": operator, "vector": vector, "N": self.horizon, "W": self.window,
            "thresholds": {"tol_zero": self.tol_zero, "tol_inf": self.tol_inf},
            "verdict": self.verdict.value,
            "evidence": {"A_N": self.cesaro_avg, "tail_window_min": self.tail_window_min,
                         "tail_window_max": self.tail_window_max,
                         "growth_ratio": self.growth_ratio},
            "caveat": self.caveat,
        }


def _verdict(a_n, a_half, tmin, tmax, tol_zero, tol_inf) -> Verdict:
    if tmax < tol_zero and a_n <= a_half:
        return Verdict.MEAN_TO_ZERO
    if tmin > tol_inf and a_n >= a_half:
        return Verdict.MEAN_DIVERGENT
    if tmin < tol_zero and tmax > tol_inf:
        return Verdict.MEAN_IRREGULAR
    return Verdict.INCONCLUSIVE


def _check_classify_args(N, W, tol_zero, tol_inf):
    if not 0 < tol_zero < tol_inf:
        raise ConfigError(f"need 0 < tol_zero < tol_inf, got {tol_zero}, {tol_inf}")
    if not N >= W >= 2:
        raise ConfigError(f"need N >= W >= 2, got N={N}, W={W}")


def report_from_series(series, tol_zero=DEFAULT_TOL_ZERO, tol_inf=DEFAULT_TOL_INF):
    N = series.horizon
    a_n = series.average(N)
    a_half = series.average(max(1, N // 2))
    if a_half > 0:
        ratio = a_n / a_half
    else:
        ratio = math.nan if a_n == 0 else math.inf
    v = _verdict(a_n, a_half, series.tail_window_min, series.tail_window_max, tol_zero, tol_inf)
    return TrichotomyReport(v, N, series.window, a_n, series.tail_window_min,
                            series.tail_window_max, ratio, tol_zero, tol_inf)


def classify_orbit(T: ShiftOperator, x: SupportedVector, space: SpaceTag, N: int,
                   W: int | None = None, tol_zero: float = DEFAULT_TOL_ZERO,
                   tol_inf: float = DEFAULT_TOL_INF) -> TrichotomyReport:
    """Trichotomy verdict for one orbit from the Cesàro averages up to ``N``.

    MeanToZero when the tail window stays below ``tol_zero`` and ``A_N <= A_{N/2}``;
    MeanDivergent when it stays above ``tol_inf`` and ``A_N >= A_{N/2}``;
    MeanIrregular when it reaches below ``tol_zero`` and above ``tol_inf``;
    Inconclusive otherwise.
    """
    W = max(2, N // 2) if W is None else W
    _check_classify_args(N, W, tol_zero, tol_inf)
    return report_from_series(cesaro_series(T, x, space, N, W), tol_zero, tol_inf)


@dataclass(frozen=True)
class OperatorReport:
    """Majority verdict over a deterministic vector sample (sampled evidence only)."""

    majority: Verdict
    counts: dict
    reports: list
    label: str = "sampled evidence"


def classify_operator(T: ShiftOperator, space: SpaceTag, N: int, W: int | None = None,
                      tol_zero=DEFAULT_TOL_ZERO, tol_inf=DEFAULT_TOL_INF, basis_radius=3,
                      n_random=4, seed=0) -> OperatorReport:
    """Classify basis vectors near the origin plus seeded random vectors.

    Ties in the majority go to the verdict listed first in :class:`Verdict`.
    """
    if T.side == BILATERAL:
        idx = range(-basis_radius, basis_radius + 1)
    else:
        idx = range(1, 2 * basis_radius + 2)
    samples = [basis(j, T.side) for j in idx]
    samples += [sample_vector(seed + s, T.side, 8) for s in range(n_random)]
    reports = [classify_orbit(T, x, space, N, W, tol_zero, tol_inf) for x in samples]
    counts = Counter(r.verdict for r in reports)
    order = list(Verdict)
    majority = max(order, key=lambda v: (counts.get(v, 0), -order.index(v)))
    return OperatorReport(majority, {v.value: counts.get(v, 0) for v in order}, reports)


@dataclass(frozen=True)
class CesaroBound:
    c_hat: float
    witness: SupportedVector
    witness_n: int
    cap: float

    @property
    def exceeds_cap(self) -> bool:
        return self.c_hat > self.cap


def abs_cesaro_bound_estimate(T: ShiftOperator, space: SpaceTag, samples, N: int,
                              cap: float = 1e6) -> CesaroBound:
    """Lower bound ``max_{x, n <= N} A_n(x) / ||x||`` for the absolute Cesàro constant.

    A value above ``cap`` is reported as evidence that no finite constant exists.
    """
    best = (-1.0, None, 0)
    for x in samples:
        nx = norm(x, space)
        if nx == 0:
            raise DomainError("zero vector in samples")
        s = cesaro_series(T, x, space, N)
        n = int(np.argmax(s.averages)) + 1
        val = float(s.averages[n - 1]) / nx
        if val > best[0]:
            best = (val, x, n)
    if best[1] is None:
        raise DomainError("no samples")
    return CesaroBound(best[0], best[1], best[2], cap)


@dataclass(frozen=True)
class CriterionWitness:
    """Products ``prod_{j=k-n}^{k} w_j`` (backward) and ``prod_{j=k+1}^{k+n} w_j`` (forward)."""

    k: int
    n: int
    backward_product: DyadicLog
    forward_product: DyadicLog


@dataclass(frozen=True)
class CriterionResult:
    passed: bool
    witnesses: dict  # k -> CriterionWitness, or None when no power works
    eps: float
    big: float

    @property
    def failing(self) -> list:
        return [k for k, w in self.witnesses.items() if w is None]


def default_powers(T: ShiftOperator, count: int = 18) -> list:
    """``b_1..b_count`` for the paper-blocks weight, ``2, 4, ..., 2**count`` otherwise."""
    if T.weights.kind == "paper_blocks":
        return [block_bounds(i).b for i in range(1, count + 1)]
    return [1 << m for m in range(1, count + 1)]


def hypercyclicity_criterion_check(T: ShiftOperator, K: int, powers, eps: float,
                                   big: float) -> CriterionResult:
    """For each ``|k| <= K`` look for a power ``n`` with backward product below
    ``eps`` and forward product above ``big`` at the same time."""
    if T.side != BILATERAL:
        raise DomainError("the product criterion is for bilateral shifts")
    powers = list(powers)
    if not powers or min(powers) < 1:
        raise DomainError("powers must be nonempty and >= 1")
    lg_eps, lg_big = math.log2(eps), math.log2(big)
    witnesses = {}
    for k in range(-K, K + 1):
        found = None
        for n in powers:
            back = product_range(T.weights, k - n, k)
            fwd = product_range(T.weights, k + 1, k + n)
            if back.log2 < lg_eps and fwd.log2 > lg_big:
                found = CriterionWitness(k, n, back, fwd)
                break
        witnesses[k] = found
    return CriterionResult(all(w is not None for w in witnesses.values()), witnesses, eps, big)


@dataclass(frozen=True)
class KitaiReport:
    inverse_law_ok: bool
    forward_decay: list  # per x sample: array of ||T^k x||, k = 1..k_max
    backward_decay: list  # per y sample: array of ||S^k y||, k = 1..k_max
    forward_flags: list
    backward_flags: list
    periodic_point: tuple | None = None  # (vector, period, residual norm)

    @property
    def forward_ok(self) -> bool:
        return all(self.forward_flags)

    @property
    def backward_ok(self) -> bool:
        return all(self.backward_flags)


def _decays(seq: np.ndarray) -> bool:
    # last quarter strictly below the max of the first quarter
    q = max(1, seq.size // 4)
    return bool(seq[-q:].max() < seq[:q].max())


def kitai_witness_check(T: ShiftOperator, x_samples, y_samples, k_max: int,
                        space: SpaceTag | None = None, periodic=None) -> KitaiReport:
    """Check ``T S y = y`` on samples and tabulate ``||T^k x||`` and ``||S^k y||``.

    ``periodic`` is an optional ``(vector, period)`` candidate whose residual
    ``||T^period x - x||`` is attached to the report.
    """
    space = space or lp(2)
    law = True
    fwd, bwd = [], []
    for y in y_samples:
        seq, prev = [], y
        for _ in range(k_max):
            z = right_inverse_apply(T, prev)
            law = law and apply(T, z) == prev
            seq.append(z)
            prev = z
        bwd.append(np.array([norm(z, space) for z in seq]))
    for x in x_samples:
        fwd.append(iterate_norms(T, x, space, k_max))
    pp = None
    if periodic is not None:
        v, period = periodic
        z = v
        for _ in range(period):
            z = apply(T, z)
        pp = (v, period, norm(combine(z, v, 1.0, -1.0), space))
    return KitaiReport(law, fwd, bwd, [_decays(s) for s in fwd], [_decays(s) for s in bwd], pp)


def mean_liyorke_stat(T: ShiftOperator, x: SupportedVector, y: SupportedVector,
                      space: SpaceTag, N: int, W: int | None = None):
    """Tail-window extrema of ``D_n = (1/n) sum_{i<=n} ||T^i x - T^i y||``.

    By linearity ``D_n(x, y) = A_n(x - y)``.
    """
    if x.side != y.side:
        raise DomainError(f"side mismatch: {x.side} vs {y.side}")
    s = cesaro_series(T, combine(x, y, 1.0, -1.0), space, N, W)
    return s.tail_window_min, s.tail_window_max
