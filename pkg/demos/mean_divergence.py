"""Cesaro averages of ||T^n e_0|| grow without bound for the block-dyadic shift."""
import numpy as np

from shiftorbit import ShiftOperator, WeightSpec
from shiftorbit.orbitstats import cesaro_series
from shiftorbit.seqcore import block_bounds
from shiftorbit.vectors import basis, lp

T = ShiftOperator(WeightSpec.paper_blocks())
N = block_bounds(14).c
s = cesaro_series(T, basis(0), lp(2), N)
print("horizon", N, "exact sums:", s.exact)

# the minimum over each block cycle keeps rising
for i in range(2, 14):
    lo, hi = block_bounds(i).c, block_bounds(i + 1).c
    seg = s.averages[lo - 1:hi]
    print(f"cycle {i:2d}: min A_n = {seg.min():12.4f}   max A_n = {seg.max():14.4f}")

print("tail window min/max:", s.tail_window_min, s.tail_window_max)
print("norms are powers of two:", bool(np.all(np.frexp(s.norms)[0] == 0.5)))
