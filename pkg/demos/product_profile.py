"""Weight products of the block-dyadic shift, computed exactly.

Each block of weights 1/2 followed by an equal-length run of 2 pulls the
product prod_{j=-n}^{0} w_j down to 2**-i and back up to 2**i.
"""
from shiftorbit import WeightSpec
from shiftorbit.seqcore import block_bounds, product_range

w = WeightSpec.paper_blocks()

print(" i        a_i        b_i        c_i   exp@b_i   exp@c_i")
for i in range(1, 19):
    bb = block_bounds(i)
    at_b = product_range(w, -bb.b, 0)
    at_c = product_range(w, -bb.c, 0)
    print(f"{i:2d} {bb.a:10d} {bb.b:10d} {bb.c:10d} {at_b.exponent:9d} {at_c.exponent:9d}")

# products this large overflow a float; the exponent stays exact
p = product_range(w, 1, 5000)
print("\nprod_{j=1}^{5000} w_j = 2 **", p.exponent, "(exact:", p.exact, ")")
