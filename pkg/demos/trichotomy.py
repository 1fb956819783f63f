"""Finite-horizon verdicts for three shifts.

The verdict reads the Cesaro averages over a tail window; it is evidence at
the horizon, never a statement about the limit.
"""
from shiftorbit import ShiftOperator, WeightSpec
from shiftorbit.classify import classify_orbit, classify_operator
from shiftorbit.seqcore import block_bounds
from shiftorbit.vectors import basis, lp, sample_vector

cases = [
    ("block-dyadic, e_0", ShiftOperator(WeightSpec.paper_blocks()), basis(0), block_bounds(16).c, {}),
    ("rolewicz 2, e_7", ShiftOperator(WeightSpec.rolewicz(2.0)), basis(7, "unilateral"), 10000,
     {"tol_zero": 0.1}),
    ("ratio-power 2, random", ShiftOperator(WeightSpec.ratio_power(2.0)),
     sample_vector(3, "unilateral", 20), 10000, {}),
]
for name, T, x, N, kw in cases:
    r = classify_orbit(T, x, lp(2), N, **kw)
    print(f"{name:24s} N={N:<8d} {r.verdict!s:14s} tail=[{r.tail_window_min:.4g}, {r.tail_window_max:.4g}]")

# ratio-power averages do shrink, but slowly: at this horizon the tail is still
# above the default tol_zero, so the honest answer is Inconclusive

# operator level: majority over basis and random vectors
rep = classify_operator(ShiftOperator(WeightSpec.paper_blocks()), lp(2), block_bounds(16).c)
print("\nblock-dyadic majority:", rep.majority, rep.counts, "-", rep.label)
