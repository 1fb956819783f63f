"""Product-criterion witnesses and Kitai data.

For each k, a power n is a witness when the backward product over [k-n, k]
is tiny and the forward product over [k+1, k+n] is huge.
"""
from shiftorbit import ShiftOperator, WeightSpec
from shiftorbit.classify import (default_powers, hypercyclicity_criterion_check,
                                 kitai_witness_check)
from shiftorbit.vectors import SupportedVector, basis, lp

T = ShiftOperator(WeightSpec.paper_blocks())
for count in (18, 26):
    res = hypercyclicity_criterion_check(T, 8, default_powers(T, count), 1e-3, 1e6)
    print(f"powers b_1..b_{count}: passed={res.passed} failing k={res.failing}")

res = hypercyclicity_criterion_check(T, 8, default_powers(T, 26), 1e-3, 1e6)
for k in (-8, 0, 8):
    w = res.witnesses[k]
    print(f"  k={k:2d}: n={w.n}  back=2**{w.backward_product.exponent}  fwd=2**{w.forward_product.exponent}")

# rolewicz: T^k x -> 0 on finite supports, S^k y -> 0, and a near-periodic point
R = ShiftOperator(WeightSpec.rolewicz(2.0))
x = SupportedVector.from_dict({k: 2.0 ** -k for k in range(1, 61)}, "unilateral")
rep = kitai_witness_check(R, [basis(5, "unilateral")], [basis(1, "unilateral")], 30, lp(2), (x, 1))
print("\ninverse law exact:", rep.inverse_law_ok)
print("||S^k e_1|| for k=1..5:", rep.backward_decay[0][:5])
print("||T x - x|| =", rep.periodic_point[2])
