import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothlab.dyadic import (
    DyadicDecomposition,
    WeightedSeq,
    default_decomposition,
    frequency_masks,
    make_bump,
    mask_resolution_audit,
    mixed_seq_norm,
    seq_norm,
    spatial_masks,
)
from smoothlab.grid import Grid


class TestBumpProfile:
    def test_peak_value(self):
        bump = make_bump()
        assert bump(1.0) == 1.0

    def test_support_endpoints(self):
        bump = make_bump()
        assert bump(0.5) == 0.0
        assert bump(2.0) == 0.0

    def test_nonnegative_and_supported(self):
        bump = make_bump()
        s = np.linspace(1e-3, 4.0, 2000)
        vals = bump(s)
        assert np.all(vals >= 0)
        outside = (s <= 0.5) | (s >= 2.0)
        assert np.all(vals[outside] == 0)

    def test_partition_telescopes(self):
        # direct summation oracle at 1000 random points in (2^-6, 2^6)
        rng = np.random.default_rng(0)
        s = np.exp(rng.uniform(np.log(2.0**-6), np.log(2.0**6), size=1000))
        decomp = default_decomposition(-8, 8)
        assert np.abs(decomp.partition_sum(s) - 1.0).max() < 1e-12

    def test_smoothness_bounded_fourth_differences(self):
        # refinement sweep: 4th finite differences stay bounded as h shrinks
        bump = make_bump()
        sups = []
        for h in (2e-3, 1e-3, 5e-4):
            s = np.arange(0.4, 2.2, h)
            d4 = np.diff(bump(s), 4) / h**4
            sups.append(np.abs(d4).max())
        assert all(np.isfinite(v) for v in sups)
        assert sups[-1] < 2.0 * sups[0] + 1e3


class TestMasks:
    def test_partition_on_grid_point(self):
        grid = Grid(1, 8.0, 256)
        decomp = default_decomposition(-2, 2)
        masks = spatial_masks(decomp, grid)
        total = masks.sum_array()
        i = int(np.argmin(np.abs(grid.axis - 1.3)))
        assert abs(total[i] - 1.0) < 1e-12

    def test_mask_support_and_center(self):
        grid = Grid(1, 8.0, 256)
        masks = spatial_masks(default_decomposition(-2, 2), grid)
        at = lambda x: int(np.argmin(np.abs(grid.axis - x)))
        assert masks[0][at(3.0)] == 0.0
        assert masks[1][at(2.0)] == 1.0

    def test_partition_identity_random_points(self):
        decomp = default_decomposition(-3, 4)
        rng = np.random.default_rng(1)
        lo, hi = decomp.covered_interval
        r = np.exp(rng.uniform(np.log(lo), np.log(hi), 1000))
        assert np.abs(decomp.partition_sum(r) - 1).max() < 1e-10

    def test_support_discipline(self):
        grid = Grid(2, 8.0, 64)
        masks = spatial_masks(default_decomposition(-2, 2), grid, strict=False)
        shells = sorted(masks.masks)
        for i, k in enumerate(shells):
            for m in shells[i + 2 :]:
                assert np.max(masks[k] * masks[m]) == 0.0

    def test_range_error_names_bound(self):
        grid = Grid(1, 8.0, 32)  # spacing 0.5
        decomp = default_decomposition(-2, 2)
        with pytest.raises(ValueError, match="spacing"):
            spatial_masks(decomp, grid)
        with pytest.raises(ValueError, match="half-width"):
            spatial_masks(DyadicDecomposition(make_bump(), 1, 3), Grid(1, 8.0, 256))

    def test_frequency_masks(self):
        # half-width 4 pi puts |xi| = 1 on the lattice with spacing 1/4
        grid = Grid(1, 4 * np.pi, 256)
        decomp = default_decomposition(-1, 3)
        masks = frequency_masks(decomp, grid)
        for k in decomp.shells:
            assert masks[k].flat[0] == 0.0  # zero frequency below all shells
        idx = int(np.argmin(np.abs(grid.freq_axis - 1.0)))
        assert masks[0][idx] == 1.0
        mid = int(np.argmin(np.abs(grid.freq_axis - 1.25)))
        assert abs(masks.sum_array()[mid] - 1.0) < 1e-12

    def test_resolution_audit(self):
        grid = Grid(3, 8.0, 64)
        masks = spatial_masks(default_decomposition(-3, 3), grid, strict=False)
        audit = mask_resolution_audit(masks)
        assert not audit[-3].resolved()  # below grid spacing
        assert audit[1].resolved()
        assert 0.5 < audit[1].mass_ratio < 2.0


class TestWeightedSeq:
    def test_impulse_norms(self):
        a = WeightedSeq.impulse(3)
        assert math.isclose(seq_norm(a, 2, 0.5), 2.0**1.5)
        assert math.isclose(seq_norm(a, math.inf, -0.5), 2.0**-1.5)

    def test_flat_l1_weighted(self):
        a = WeightedSeq.ones([0, 1, 2])
        assert seq_norm(a, 1, 1.0) == 7.0

    def test_exponent_domain(self):
        with pytest.raises(ValueError):
            seq_norm(WeightedSeq.impulse(0), 0.5, 0.0)

    @given(
        q1=st.sampled_from([1.0, 1.5, 2.0, 3.0]),
        q2=st.sampled_from([2.0, 3.0, 4.0, math.inf]),
        alpha=st.floats(-1.0, 1.0),
    )
    @settings(max_examples=50, deadline=None)
    def test_monotone_in_q(self, q1, q2, alpha):
        if q1 > q2:
            q1, q2 = q2, q1
        a = WeightedSeq({-2: 0.3, 0: 1.0, 1: -0.7 + 0.2j, 3: 0.05})
        assert seq_norm(a, q1, alpha) >= seq_norm(a, q2, alpha) - 1e-12

    @given(alpha=st.floats(-1.5, 1.5), q=st.sampled_from([1.0, 2.0, math.inf]))
    @settings(max_examples=50, deadline=None)
    def test_shift_scaling_covariance(self, alpha, q):
        a = WeightedSeq({-1: 0.4, 0: 1.0, 2: -0.3j})
        shifted = WeightedSeq({k + 1: v for k, v in a.entries.items()})
        lhs = seq_norm(shifted, q, alpha)
        rhs = 2.0**alpha * seq_norm(a, q, alpha)
        assert math.isclose(lhs, rhs, rel_tol=1e-12)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            a = WeightedSeq({int(k): complex(*rng.standard_normal(2))
                             for k in rng.integers(-5, 6, size=4)})
            b = WeightedSeq({int(k): complex(*rng.standard_normal(2))
                             for k in rng.integers(-5, 6, size=4)})
            for q in (1, 2, math.inf):
                assert seq_norm(a + b, q, 0.25) <= seq_norm(a, q, 0.25) + seq_norm(b, q, 0.25) + 1e-12

    def test_mixed_norm_orderings_differ(self):
        a = WeightedSeq({(0, 0): 1.0, (0, 1): 1.0, (1, 2): 1.0})
        n1 = mixed_seq_norm(a, 1, 0.0, 2, 0.0, outer_axis=0)
        n2 = mixed_seq_norm(a, 1, 0.0, 2, 0.0, outer_axis=1)
        assert math.isclose(n1, 1 + math.sqrt(2))
        assert math.isclose(n2, 3.0)  # the two iterated orders differ
