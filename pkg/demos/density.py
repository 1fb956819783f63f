"""Upper and lower density estimates from prefix counts."""
from shiftorbit import ShiftOperator, WeightSpec
from shiftorbit.orbitstats import density, dyadic_blocks_set, exceedance_density
from shiftorbit.vectors import basis, lp

N = 2 ** 20
evens = density(lambda n: n % 2 == 0, N)
print("evens:        udens ~", evens.udens_estimate, " ldens ~", evens.ldens_estimate)

# union of [4^i, 2*4^i): oscillates between 1/3 and 2/3
blocks = density(dyadic_blocks_set, N, N // 2)
print("dyadic blocks: udens ~", round(blocks.udens_estimate, 4), " ldens ~", round(blocks.ldens_estimate, 4))

T = ShiftOperator(WeightSpec.paper_blocks())
est, bound = exceedance_density(T, basis(0), lp(2), 1.0, 100000)
print("times with ||T^n e_0|| >= 1: ldens ~", round(est.ldens_estimate, 4), " -> A_n tail >=", round(bound, 4))
