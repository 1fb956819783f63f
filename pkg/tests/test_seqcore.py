import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import blocks_product, blocks_weight
from shiftorbit.seqcore import (BILATERAL, UNILATERAL, CapacityError, DomainError, DyadicLog,
                                ProductCursor, WeightSpec, block_bounds, block_index,
                                compensated_cumsum, log2_weights, paper_blocks_prefix_exponent,
                                product_range, weight_at, weight_log2, weight_spec_from_dict,
                                weight_spec_to_dict)

PB = WeightSpec.paper_blocks()


@pytest.mark.parametrize("j, w", [(5, 2.0), (-9, 0.5), (-12, 1.0), (0, 1.0), (-10, 2.0),
                                  (-11, 2.0), (-8, 1.0), (-17, 0.5), (-19, 0.5), (-20, 2.0)])
def test_paper_blocks_weight_table(j, w):
    assert weight_at(PB, j) == w


def test_weights_match_scanning_oracle():
    for j in range(-3000, 50):
        assert Fraction(weight_at(PB, j)) == blocks_weight(j), j


def test_rolewicz_weight():
    assert weight_at(WeightSpec.rolewicz(2.0), 7) == 2.0


@pytest.mark.parametrize("i, abc", [(1, (8, 9, 11)), (2, (16, 19, 23)), (3, (32, 37, 43))])
def test_block_bounds(i, abc):
    bb = block_bounds(i)
    assert (bb.a, bb.b, bb.c) == abc


def test_block_bounds_never_overlap():
    for i in range(1, 40):
        bb = block_bounds(i)
        assert bb.c <= block_bounds(i + 1).a
        assert bb.a == 2 ** (2 + i) and bb.b == bb.a + 2 * i - 1 and bb.c == bb.b + 2 * i


def test_block_bounds_errors():
    with pytest.raises(DomainError):
        block_bounds(0)
    with pytest.raises(CapacityError):
        block_bounds(41)


def test_block_index_inverts_a():
    for i in range(1, 30):
        bb = block_bounds(i)
        assert block_index(bb.a + 1) == i
        assert block_index(bb.c) == i
        assert block_index(2 * bb.a) == i
    assert block_index(8) is None


def test_unilateral_domain():
    with pytest.raises(DomainError):
        weight_at(WeightSpec.rolewicz(2.0), 0)


@pytest.mark.parametrize("lo, e", [(-9, -1), (-16, 1), (-23, 2)])
def test_product_range_examples(lo, e):
    p = product_range(PB, lo, 0)
    assert p.exact and p.exponent == e


def test_empty_product():
    for spec in (PB, WeightSpec.ratio_power(3.0), WeightSpec.rolewicz(5.0)):
        assert product_range(spec, 5, 4).value == 1.0


def test_product_closed_form_against_oracle():
    for lo in range(-140, 3):
        for hi in range(lo - 1, 4):
            assert Fraction(product_range(PB, lo, hi).value) == blocks_product(lo, hi)


def test_prefix_exponent_profile():
    for i in range(1, 19):
        bb = block_bounds(i)
        assert paper_blocks_prefix_exponent(bb.b) == -i
        assert paper_blocks_prefix_exponent(bb.c) == i
        assert paper_blocks_prefix_exponent(block_bounds(i + 1).a) == i


def test_paper_blocks_weight_bounds():
    lg = log2_weights(PB, -5000, 100)
    assert lg.dtype.kind == "i"
    assert set(np.unique(lg).tolist()) <= {-1, 0, 1}


@settings(max_examples=200, deadline=None)
@given(st.integers(-3000, 200), st.integers(0, 400), st.integers(0, 400))
def test_product_splits_exactly(a, d1, d2):
    b, c = a + d1, a + d1 + d2 + 1
    whole = product_range(PB, a, c)
    parts = product_range(PB, a, b) * product_range(PB, b + 1, c)
    assert whole == parts


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5000), st.integers(0, 300), st.integers(0, 300))
def test_product_splits_float(a, d1, d2):
    spec = WeightSpec.ratio_power(2.5)
    b, c = a + d1, a + d1 + d2 + 1
    whole = product_range(spec, a, c).value
    parts = (product_range(spec, a, b) * product_range(spec, b + 1, c)).value
    assert abs(whole - parts) <= 1e-12 * whole
    # telescoping closed form
    assert math.isclose(whole, ((c + 1) / a) ** (1 / 2.5), rel_tol=1e-12)


@pytest.mark.parametrize("spec", [PB, WeightSpec.rolewicz(2.0), WeightSpec.ratio_power(2.0),
                                  WeightSpec.constant(3.0, UNILATERAL),
                                  WeightSpec.table({-3: 0.5, 2: 4.0}, 1.0)])
def test_single_index_product_is_weight(spec):
    js = range(1, 60) if spec.side == UNILATERAL else range(-60, 60)
    for j in js:
        assert math.isclose(product_range(spec, j, j).value, weight_at(spec, j), rel_tol=1e-15)


def test_cursor_matches_product_range():
    cur = ProductCursor(PB, 0)
    for n in range(1, 200):
        assert cur.extend_down() == product_range(PB, -n + 1, 0)
    spec = WeightSpec.ratio_power(2.0)
    cur = ProductCursor(spec, 0)
    for n in range(1, 300):
        v = cur.extend_up().value
        assert math.isclose(v, (n + 1) ** 0.5, rel_tol=1e-13)


def test_monotone_block_shape():
    for i in range(1, 13):
        bb, nxt = block_bounds(i), block_bounds(i + 1)
        e = [paper_blocks_prefix_exponent(n) for n in range(bb.a, nxt.a + 1)]
        off = bb.a
        assert all(e[n - off] > e[n + 1 - off] for n in range(bb.a, bb.b))
        assert all(e[n - off] < e[n + 1 - off] for n in range(bb.b, bb.c))
        assert len({e[n - off] for n in range(bb.c, nxt.a + 1)}) == 1


def test_dyadic_log_arithmetic():
    a, b = DyadicLog.exact_pow2(-3), DyadicLog.exact_pow2(40)
    assert (a * b).exponent == 37 and (a * b).exact
    assert (b / a).exponent == 43
    f = DyadicLog.from_log2(0.5)
    assert not (a * f).exact and (a * f).log2 == -2.5
    assert DyadicLog.exact_pow2(5).float_log2 == 5.0
    with pytest.raises(CapacityError):
        DyadicLog.exact_pow2(2000).value


def test_dyadic_detection():
    assert PB.is_dyadic
    assert WeightSpec.rolewicz(4.0).is_dyadic
    assert not WeightSpec.rolewicz(3.0).is_dyadic
    assert WeightSpec.table({1: 0.25}, 2.0).is_dyadic
    assert not WeightSpec.ratio_power(2.0).is_dyadic


@pytest.mark.parametrize("bad", [
    lambda: WeightSpec.rolewicz(1.0),
    lambda: WeightSpec.rolewicz(-2.0),
    lambda: WeightSpec.ratio_power(1.0),
    lambda: WeightSpec.constant(0.0),
    lambda: WeightSpec.table({0: -1.0}),
    lambda: WeightSpec("paper_blocks", UNILATERAL),
])
def test_invalid_specs(bad):
    with pytest.raises(DomainError):
        bad()


def test_capacity_past_block_cap():
    spec = WeightSpec.paper_blocks(max_block=3)
    with pytest.raises(CapacityError):
        weight_at(spec, -(1 << 7))


def test_compensated_cumsum():
    x = np.full(10 ** 5, 0.1)
    assert abs(compensated_cumsum(x)[-1] - 10 ** 4) < 1e-9
    assert compensated_cumsum([1e16, 1.0, -1e16])[-1] == 1.0


@pytest.mark.parametrize("d", [
    {"kind": "paper_blocks"},
    {"kind": "rolewicz", "lambda": 2.0},
    {"kind": "constant", "lambda": 1.0, "side": "bilateral"},
    {"kind": "ratio_power", "p": 2.0},
    {"kind": "table", "entries": {"-3": 0.5, "4": 2.0}, "default": 1.0, "side": "bilateral"},
])
def test_weight_spec_file_round_trip(d, tmp_path):
    spec = weight_spec_from_dict(d)
    back = weight_spec_from_dict(json.loads(json.dumps(weight_spec_to_dict(spec))))
    assert back == spec


def test_weight_spec_unknown_keys_rejected():
    with pytest.raises(DomainError):
        weight_spec_from_dict({"kind": "rolewicz", "lambda": 2.0, "colour": 1})
    with pytest.raises(DomainError):
        weight_spec_from_dict({"kind": "spline"})


def test_table_weights():
    spec = WeightSpec.table({-3: 0.5, 2: 3.0}, 1.0, BILATERAL)
    assert weight_at(spec, -3) == 0.5 and weight_at(spec, 2) == 3.0 and weight_at(spec, 7) == 1.0
    assert weight_log2(spec, 2).log2 == pytest.approx(math.log2(3.0))
