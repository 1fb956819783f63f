"""Orbit statistics of weighted backward shifts on sequence spaces.

Cesàro averages of orbit norms, finite-horizon trichotomy diagnostics
(mean to zero / absolutely mean irregular / mean divergent), product
criteria for hypercyclicity, Kitai witnesses and mean Li-Yorke pair
statistics, with exact power-of-two arithmetic for dyadic weights.
"""
from .seqcore import (BILATERAL, UNILATERAL, BlockBounds, CapacityError, ConfigError,
                      DomainError, DyadicLog, ProductCursor, TruncationError, WeightSpec,
                      block_bounds, load_weight_spec, product_range, weight_at)
from .vectors import C0, SpaceTag, SupportedVector, basis, combine, lp, norm, sample_vector
from .operators import (RightInverse, ShiftOperator, apply, iterate_norms, parse_operator,
                        right_inverse_apply, truncated_matrix_apply_power)
from .orbitstats import (CesaroSeries, DensityEstimate, cesaro_series, density,
                         exceedance_density, tail_shift_identity_check)
from .classify import (Verdict, abs_cesaro_bound_estimate, classify_operator, classify_orbit,
                       hypercyclicity_criterion_check, kitai_witness_check, mean_liyorke_stat)

__version__ = "0.1.0"
