"""Cesàro averages of orbit norms and densities of integer sets.

Limits are never certified here: ``liminf``/``limsup`` are reported as extrema
over a tail window ``[N - W + 1, N]`` of the horizon ``N``.
"""
from __future__ import annotations

import io
import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .operators import ShiftOperator, apply, iterate_norms
from .seqcore import CapacityError, DomainError, compensated_cumsum
from .vectors import SpaceTag, SupportedVector

__all__ = ["CesaroSeries", "DensityEstimate", "cesaro_series", "cesaro_from_norms",
           "tail_shift_identity_check", "density", "exceedance_density", "write_series_csv",
           "read_series_csv", "dyadic_blocks_set"]

# exact integer accumulation is abandoned above this many bits
EXACT_SUM_MAX_BITS = 4096


def _pow2_exponents(norms: np.ndarray):
    """Integer exponents when every nonzero norm is a power of two, else None."""
    nz = norms[norms > 0]
    if nz.size == 0:
        return np.zeros(0, dtype=np.int64)
    m, e = np.frexp(nz)
    if not np.all(m == 0.5):
        return None
    return e.astype(np.int64) - 1


@dataclass(frozen=True)
class CesaroSeries:
    """Running sums ``S_n`` and averages ``A_n = S_n / n`` for ``n = 1..N``.

    Arrays are 0-based: ``averages[n - 1]`` is ``A_n``. ``exact`` is set when
    every ``S_n`` is the exact sum of the (power-of-two) norms.
    """

    horizon: int
    window: int
    norms: np.ndarray
    partial_sums: np.ndarray
    averages: np.ndarray
    tail_window_min: float
    tail_window_max: float
    argmin: int
    argmax: int
    exact: bool
    # exact S_n as (numerators, shift) with S_n = numerators[n-1] / 2**shift
    exact_sums: tuple | None = None

    def average(self, n: int) -> float:
        return float(self.averages[n - 1])

    def exact_sum(self, n: int) -> Fraction:
        if self.exact_sums is not None:
            nums, shift = self.exact_sums
            return Fraction(nums[n - 1], 1 << shift)
        if self.exact:
            return Fraction(float(self.partial_sums[n - 1]))
        raise ValueError("series was accumulated in floating point")


def _prefix_sums(norms: np.ndarray):
    """Return ``(sums, exact, exact_sums)`` for the prefix sums of ``norms``."""
    N = norms.size
    exps = _pow2_exponents(norms)
    if exps is not None:
        if exps.size == 0:
            return np.zeros(N), True, None
        lo, hi = int(exps.min()), int(exps.max())
        # every partial sum is a multiple of 2**lo below 2**(hi + bits(N)): fits 53 bits
        if hi - lo + N.bit_length() <= 53 and hi + N.bit_length() < 1000:
            return np.cumsum(norms), True, None
        if hi - lo + N.bit_length() <= EXACT_SUM_MAX_BITS:
            shift = max(0, -lo)
            nums = []
            acc = 0
            full = np.zeros(N, dtype=np.int64)
            full[:] = np.iinfo(np.int64).min
            full[norms > 0] = exps
            for e in full.tolist():
                if e != np.iinfo(np.int64).min:
                    acc += 1 << (e + shift)
                nums.append(acc)
            sums = np.array([k / (1 << shift) for k in nums])
            return sums, True, (nums, shift)
    return compensated_cumsum(norms), False, None


def cesaro_from_norms(norms, W: int | None = None) -> CesaroSeries:
    norms = np.asarray(norms, dtype=np.float64)
    N = norms.size
    if N < 1:
        raise DomainError("empty norm sequence")
    W = max(1, N // 2) if W is None else W
    if not 1 <= W <= N:
        raise DomainError(f"need N >= W >= 1, got N={N}, W={W}")
    sums, exact, exact_sums = _prefix_sums(norms)
    if not np.all(np.isfinite(sums)):
        raise CapacityError("partial sum overflows a float", int(np.argmax(~np.isfinite(sums))) + 1)
    avgs = sums / np.arange(1, N + 1)
    tail = avgs[N - W:]
    amin = int(np.argmin(tail)) + N - W + 1
    amax = int(np.argmax(tail)) + N - W + 1
    return CesaroSeries(N, W, norms, sums, avgs, float(avgs[amin - 1]), float(avgs[amax - 1]),
                        amin, amax, exact, exact_sums)


def cesaro_series(T: ShiftOperator, x: SupportedVector, space: SpaceTag, N: int,
                  W: int | None = None) -> CesaroSeries:
    """Cesàro averages of ``||T^i x||`` up to horizon ``N`` (window defaults to ``N // 2``)."""
    if W is not None and not 1 <= W <= N:
        raise DomainError(f"need N >= W >= 1, got N={N}, W={W}")
    return cesaro_from_norms(iterate_norms(T, x, space, N), W)


def tail_shift_identity_check(T: ShiftOperator, x: SupportedVector, space: SpaceTag,
                              q: int, N: int) -> float:
    """Largest relative gap in ``S_{n+q}(x) = S_q(x) + S_n(T^q x)`` over ``n <= N - q``."""
    if not 1 <= q < N:
        raise DomainError(f"need 1 <= q < N, got q={q}, N={N}")
    full = cesaro_series(T, x, space, N)
    y = x
    for _ in range(q):
        y = apply(T, y)
    shifted = cesaro_series(T, y, space, N - q)
    n = np.arange(1, N - q + 1)
    if full.exact and shifted.exact:
        if full.exact_sums is None and shifted.exact_sums is None:
            lhs = full.partial_sums[n + q - 1] - full.partial_sums[q - 1]
            gap = np.abs(lhs - shifted.partial_sums[n - 1])
            return float(np.max(gap / np.maximum(1.0, full.partial_sums[n + q - 1])))
        worst = Fraction(0)
        sq = full.exact_sum(q)
        for m in n.tolist():
            s = full.exact_sum(m + q)
            gap = abs(s - sq - shifted.exact_sum(m)) / max(Fraction(1), s)
            worst = max(worst, gap)
        return float(worst)
    lhs = full.partial_sums[n + q - 1] - full.partial_sums[q - 1]
    gap = np.abs(lhs - shifted.partial_sums[n - 1])
    return float(np.max(gap / np.maximum(1.0, full.partial_sums[n + q - 1])))


@dataclass(frozen=True)
class DensityEstimate:
    """Counts ``#(A ∩ [1, n])`` for ``n <= N`` and windowed density extrema."""

    horizon: int
    window: int
    count_prefix: np.ndarray
    udens_estimate: float
    ldens_estimate: float

    def ratio(self, n: int) -> Fraction:
        return Fraction(int(self.count_prefix[n - 1]), n)

    def prefix_ratios(self) -> np.ndarray:
        return self.count_prefix / np.arange(1, self.horizon + 1)

    def complement(self) -> "DensityEstimate":
        counts = np.arange(1, self.horizon + 1) - self.count_prefix
        return _estimate_from_counts(counts, self.window)


def _estimate_from_counts(counts: np.ndarray, W: int) -> DensityEstimate:
    N = counts.size
    tail = counts[N - W:] / np.arange(N - W + 1, N + 1)
    return DensityEstimate(N, W, counts, float(tail.max()), float(tail.min()))


def density(members, N: int, W: int | None = None) -> DensityEstimate:
    """Density estimate of ``A ⊆ {1, 2, ...}`` at horizon ``N``.

    ``members`` is a predicate on positive integers (tried vectorized on a numpy
    array first) or an iterable of members.
    """
    W = max(1, N // 2) if W is None else W
    if not 1 <= W <= N:
        raise DomainError(f"need N >= W >= 1, got N={N}, W={W}")
    n = np.arange(1, N + 1, dtype=np.int64)
    if callable(members):
        try:
            ind = np.asarray(members(n), dtype=bool)
            if ind.shape != n.shape:
                raise TypeError
        except (TypeError, ValueError):
            ind = np.fromiter((bool(members(int(k))) for k in n), dtype=bool, count=N)
    else:
        ind = np.zeros(N, dtype=bool)
        idx = np.fromiter((int(k) for k in members), dtype=np.int64)
        idx = idx[(idx >= 1) & (idx <= N)]
        ind[idx - 1] = True
    return _estimate_from_counts(np.cumsum(ind, dtype=np.int64), W)


def dyadic_blocks_set(n):
    """Indicator of ``∪_i [4**i, 2 * 4**i)``: numbers whose bit length is odd."""
    n = np.asarray(n, dtype=np.int64)
    _, e = np.frexp(n.astype(np.float64))
    return (e % 2) == 1


def exceedance_density(T: ShiftOperator, x: SupportedVector, space: SpaceTag, eps: float,
                       N: int, W: int | None = None):
    """Density of ``{n <= N : ||T^n x|| >= eps}`` and the lower bound ``eps * ldens``
    it implies on the tail of the Cesàro averages."""
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    norms = iterate_norms(T, x, space, N)
    hits = norms >= eps
    est = density(np.flatnonzero(hits) + 1, N, W)
    return est, eps * est.ldens_estimate


def _g17(x) -> str:
    return format(float(x), ".17g")


def write_series_csv(series: CesaroSeries, fh=None, stride: int = 1, exponent_column=False):
    """CSV rows ``n, norm, partial_sum, cesaro_avg`` (plus ``norm_log2`` when exact).

    Every row with ``n % stride == 0`` is written, as is the final row.
    """
    out = fh if fh is not None else io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    header = ["n", "norm", "partial_sum", "cesaro_avg"]
    if exponent_column:
        header.append("norm_log2")
    w.writerow(header)
    N = series.horizon
    rows = list(range(stride, N + 1, stride))
    if not rows or rows[-1] != N:
        rows.append(N)
    for n in rows:
        nrm = series.norms[n - 1]
        row = [n, _g17(nrm), _g17(series.partial_sums[n - 1]), _g17(series.averages[n - 1])]
        if exponent_column:
            row.append(str(int(math.frexp(nrm)[1] - 1)) if nrm > 0 else "")
        w.writerow(row)
    return out.getvalue() if fh is None else None


def read_series_csv(text: str) -> dict:
    """Parse CSV written by :func:`write_series_csv` into column arrays."""
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    cols = {}
    for t, name in enumerate(header):
        if name == "n":
            cols[name] = np.array([int(r[t]) for r in body])
        elif name == "norm_log2":
            cols[name] = [int(r[t]) if r[t] else None for r in body]
        else:
            cols[name] = np.array([float(r[t]) for r in body])
    return cols
