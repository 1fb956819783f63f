"""Mean Li-Yorke statistic D_n(x, y) = A_n(x - y) for a pair of basis vectors."""
from shiftorbit import ShiftOperator, WeightSpec
from shiftorbit.classify import mean_liyorke_stat
from shiftorbit.vectors import basis, lp

T = ShiftOperator(WeightSpec.paper_blocks())
for N in (2 ** 12, 2 ** 15, 2 ** 18):
    lo, hi = mean_liyorke_stat(T, basis(0), basis(1), lp(2), N)
    print(f"N = {N:7d}: tail min {lo:12.2f}  tail max {hi:14.2f}")
