from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import blocks_orbit_norms, cesaro_exact, count_members
from shiftorbit.operators import iterate_norms, truncated_matrix_apply_power
from shiftorbit.orbitstats import (cesaro_from_norms, cesaro_series, density, dyadic_blocks_set,
                                   exceedance_density, read_series_csv,
                                   tail_shift_identity_check, write_series_csv)
from shiftorbit.seqcore import DomainError, block_bounds
from shiftorbit.vectors import SupportedVector, basis, combine, lp, norm, sample_vector

U = "unilateral"

# exact A_23(e_0) for the paper-blocks shift (Fraction oracle; see test below)
A23_BLOCKS = Fraction(111, 92)


def test_rolewicz_dying_orbit(rolewicz2):
    # 2 e_3 -> 2 e_2 -> 4 e_1 -> 0: two nonzero iterates
    s = cesaro_series(rolewicz2, basis(3, U), lp(2), 100)
    assert s.norms[:3].tolist() == [2.0, 4.0, 0.0]
    assert s.average(100) == 0.06
    assert all(s.average(n) == 6 / n for n in range(2, 101))


def test_blocks_a23_frozen(blocks):
    assert cesaro_exact(blocks_orbit_norms(0, 23))[-1] == A23_BLOCKS
    s = cesaro_series(blocks, basis(0), lp(2), 23)
    assert s.exact and s.exact_sum(23) / 23 == A23_BLOCKS
    assert A23_BLOCKS >= Fraction(10, 23)
    # same value through the dense-matrix oracle
    via_matrix = sum(Fraction(norm(truncated_matrix_apply_power(blocks, basis(0), i, 32), lp(2)))
                     for i in range(1, 24)) / 23
    assert via_matrix == A23_BLOCKS


def test_empty_vector(blocks):
    s = cesaro_series(blocks, SupportedVector.empty(), lp(2), 50)
    assert np.all(s.averages == 0)


def test_series_invariants(ratio2):
    s = cesaro_series(ratio2, sample_vector(3, U, 50), lp(2), 2000, 300)
    assert np.all(np.diff(s.partial_sums) >= 0) and np.all(s.averages >= 0)
    n = np.arange(1, 2001)
    np.testing.assert_allclose(n * s.averages, s.partial_sums, rtol=1e-12)
    tail = s.averages[-300:]
    assert s.tail_window_min == tail.min() and s.tail_window_max == tail.max()
    assert 1701 <= s.argmin <= 2000 and s.averages[s.argmax - 1] == tail.max()


def test_window_validation(blocks):
    with pytest.raises(DomainError):
        cesaro_series(blocks, basis(0), lp(2), 10, 11)


def test_exact_integer_path_matches_fractions():
    exps = [-60, 10, -3, 0, 25, -60, 7] * 30
    norms = np.ldexp(1.0, np.array(exps))
    s = cesaro_from_norms(norms)
    assert s.exact and s.exact_sums is not None
    acc = Fraction(0)
    for n, e in enumerate(exps, 1):
        acc += Fraction(2) ** e
        assert s.exact_sum(n) == acc


def test_tail_shift_identity_dyadic(blocks):
    assert tail_shift_identity_check(blocks, basis(0), lp(2), 5, 1000) == 0.0


def test_tail_shift_identity_float(rolewicz2, ratio2):
    x = sample_vector(11, U, 40)
    assert tail_shift_identity_check(rolewicz2, x, lp(2), 10, 10 ** 4) <= 1e-10
    assert tail_shift_identity_check(ratio2, x, lp(2), 10, 5000) <= 1e-10
    assert tail_shift_identity_check(ratio2, x, lp(2), 99, 100) <= 1e-12


def test_tail_shift_identity_exact_int_path():
    from shiftorbit import ShiftOperator, WeightSpec
    T = ShiftOperator(WeightSpec.dyadic_profile({-k: (-70 if k % 3 else 40) for k in range(1, 60)}))
    assert tail_shift_identity_check(T, basis(0), lp(2), 7, 200) == 0.0


def test_density_evens():
    N = 10 ** 6
    d = density(lambda n: n % 2 == 0, N)
    assert abs(d.udens_estimate - 0.5) <= 1 / N and abs(d.ldens_estimate - 0.5) <= 1 / N


def test_density_naturals():
    d = density(lambda n: n >= 1, 1000)
    assert d.udens_estimate == d.ldens_estimate == 1.0


def test_density_blocky_set():
    N, W = 2 ** 20, 2 ** 19
    d = density(dyadic_blocks_set, N, W)
    assert 0.616 <= d.udens_estimate <= 0.667
    assert 0.333 <= d.ldens_estimate <= 0.384


def test_density_blocky_prefix_counts_brute_force():
    N = 5000
    pred = lambda n: any(4 ** i <= n < 2 * 4 ** i for i in range(12))
    d = density(dyadic_blocks_set, N, 100)
    assert d.count_prefix.tolist() == count_members(pred, N)
    scalar = density(lambda n: pred(n) if isinstance(n, int) else (_ for _ in ()).throw(TypeError), N, 100)
    assert scalar.count_prefix.tolist() == d.count_prefix.tolist()


def test_density_from_list_and_ratio():
    d = density([3, 1, 4, 15, 9, 26], 10, 5)
    assert d.count_prefix.tolist() == [1, 1, 2, 3, 3, 3, 3, 3, 4, 4]
    assert d.ratio(9) == Fraction(4, 9)


def test_density_complement_prefix_identity():
    d = density(dyadic_blocks_set, 4096, 1000)
    c = d.complement()
    # upper density of A plus lower density of the complement, on prefix ratios
    np.testing.assert_array_equal(d.count_prefix + c.count_prefix, np.arange(1, 4097))
    assert d.udens_estimate + c.ldens_estimate == pytest.approx(1.0, abs=1e-15)
    assert 0 <= d.ldens_estimate <= d.udens_estimate <= 1


def test_exceedance_examples(blocks, rolewicz2):
    est, bound = exceedance_density(blocks, basis(0), lp(2), 1.0, 2 ** 18)
    hits = [x >= 1 for x in blocks_orbit_norms(0, 3000)]
    assert est.count_prefix[:3000].tolist() == np.cumsum(hits).tolist()
    assert est.ldens_estimate > 0 and bound == est.ldens_estimate
    est, _ = exceedance_density(rolewicz2, basis(3, U), lp(2), 1.0, 10 ** 4)
    assert est.ldens_estimate <= 3 / 10 ** 4
    est, bound = exceedance_density(rolewicz2, basis(3, U), lp(2), 100.0, 10 ** 4)
    assert est.udens_estimate == est.ldens_estimate == bound == 0.0


def test_exceedance_bound_every_n(blocks):
    eps = 2.0
    norms = iterate_norms(blocks, basis(-5), lp(2), 20000)
    s = cesaro_from_norms(norms)
    est, _ = exceedance_density(blocks, basis(-5), lp(2), eps, 20000)
    n = np.arange(1, 20001)
    assert np.all(s.averages >= eps * est.count_prefix / n)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.floats(0.01, 100))
def test_homogeneity_and_subadditivity(s1, s2, alpha):
    from shiftorbit import ShiftOperator, WeightSpec
    T = ShiftOperator(WeightSpec.paper_blocks())
    x, y = sample_vector(s1, "bilateral", 6), sample_vector(s2, "bilateral", 6)
    ax = cesaro_series(T, x, lp(2), 500).averages
    scaled = cesaro_series(T, combine(x, x, alpha, 0.0), lp(2), 500).averages
    np.testing.assert_allclose(scaled, alpha * ax, rtol=1e-12)
    ay = cesaro_series(T, y, lp(2), 500).averages
    axy = cesaro_series(T, combine(x, y, 1, 1), lp(2), 500).averages
    assert np.all(axy <= (ax + ay) * (1 + 1e-12))


def test_blocks_divergence_bounds(blocks):
    N = block_bounds(16).c
    s = cesaro_series(blocks, basis(0), lp(2), N)
    assert s.exact
    for i in range(2, 17):
        bi, prev = block_bounds(i), block_bounds(i - 1)
        bound = Fraction(2 ** (i - 1) * (bi.a - prev.c), bi.c)
        assert s.exact_sum(bi.c) / bi.c >= bound
    mins = [s.averages[block_bounds(i).c - 1:block_bounds(i + 1).c].min() for i in range(2, 15)]
    assert all(a < b for a, b in zip(mins, mins[1:]))


def test_csv_round_trip(blocks):
    s = cesaro_series(blocks, basis(0), lp(2), 1000)
    text = write_series_csv(s, stride=7, exponent_column=True)
    assert text.splitlines()[0] == "n,norm,partial_sum,cesaro_avg,norm_log2"
    cols = read_series_csv(text)
    idx = cols["n"] - 1
    assert cols["n"][-1] == 1000
    np.testing.assert_array_equal(cols["cesaro_avg"], s.averages[idx])
    np.testing.assert_array_equal(cols["partial_sum"], s.partial_sums[idx])
    assert [2.0 ** e for e in cols["norm_log2"]] == cols["norm"].tolist()
