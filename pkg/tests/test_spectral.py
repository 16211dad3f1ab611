import math

import numpy as np
import pytest

from smoothlab.grid import Field, Grid, gaussian, plane_wave
from smoothlab.spectral import (
    fractional_laplacian,
    gradient,
    l2_norm,
    lp_norm,
    mean_zero,
    riesz_transform,
    sobolev_norm,
)


@pytest.fixture(scope="module")
def grid3():
    return Grid(3, 8.0, 32)


def random_field(grid, seed=0):
    rng = np.random.default_rng(seed)
    return mean_zero(Field(grid, rng.standard_normal(grid.shape)
                           + 1j * rng.standard_normal(grid.shape)))


class TestGrid:
    def test_power_of_two_contract(self):
        with pytest.raises(ValueError):
            Grid(1, 8.0, 48)

    def test_roundtrip(self, grid3):
        f = random_field(grid3)
        from smoothlab.grid import _fftn, _ifftn

        back = _ifftn(_fftn(f.values))
        assert np.abs(back - f.values).max() < 1e-12 * np.abs(f.values).max()


class TestFractionalLaplacian:
    def test_plane_wave_eigenfunction(self, grid3):
        pw = plane_wave(grid3, (1, 2, 0))
        xi = np.pi / 8 * np.sqrt(5)
        out = fractional_laplacian(pw, 1.0)
        assert np.abs(out.values - xi * pw.values).max() < 1e-12

    def test_s_zero_subtracts_mean(self, grid3):
        f = Field(grid3, random_field(grid3).values + 2.5)
        out = fractional_laplacian(f, 0.0)
        assert np.abs(out.values - (f.values - f.values.mean())).max() < 1e-12

    def test_composition_inverts(self, grid3):
        f = random_field(grid3)
        out = fractional_laplacian(fractional_laplacian(f, -0.5), 0.5)
        assert np.abs(out.values - f.values).max() < 1e-10

    def test_order_domain(self, grid3):
        with pytest.raises(ValueError):
            fractional_laplacian(random_field(grid3), 1.5)

    def test_multiplier_composition_law(self, grid3):
        f = random_field(grid3)
        a = fractional_laplacian(fractional_laplacian(f, 0.4), 0.3)
        b = fractional_laplacian(f, 0.7)
        assert np.abs(a.values - b.values).max() < 1e-10


class TestRiesz:
    def test_eigenfunction(self, grid3):
        pw = plane_wave(grid3, (1, 2, 0))
        xi = np.array([1.0, 2.0, 0.0]) * np.pi / 8
        out = riesz_transform(pw, 1)
        assert np.abs(out.values - xi[1] / np.linalg.norm(xi) * pw.values).max() < 1e-12

    def test_squares_sum_to_identity(self, grid3):
        # real-symbol convention: sum_j R_j R_j = identity minus mean
        f = random_field(grid3)
        acc = np.zeros(grid3.shape, dtype=complex)
        for j in range(3):
            acc += riesz_transform(riesz_transform(f, j), j).values
        assert np.abs(acc - f.values).max() < 1e-10

    def test_contraction(self, grid3):
        f = random_field(grid3, 3)
        for j in range(3):
            assert l2_norm(riesz_transform(f, j)) <= l2_norm(f) + 1e-12

    def test_axis_domain(self, grid3):
        with pytest.raises(ValueError):
            riesz_transform(random_field(grid3), 3)


class TestNorms:
    def test_plancherel_plane_wave(self, grid3):
        pw = plane_wave(grid3, (1, 0, 0))
        assert math.isclose(sobolev_norm(pw, 0.0), 16.0**1.5, rel_tol=1e-12)

    def test_constant_shift_invariance(self, grid3):
        f = random_field(grid3)
        g = Field(grid3, f.values + 1.7)
        assert math.isclose(sobolev_norm(f, 0.5), sobolev_norm(g, 0.5), rel_tol=1e-12)

    def test_gaussian_gradient_closed_form(self):
        # ||grad exp(-|x|^2/2)||_{L^2} = (3/2)^(1/2) pi^(3/4) in dimension 3
        grid = Grid(3, 10.0, 64)
        f = gaussian(grid)
        expected = math.sqrt(1.5) * math.pi**0.75
        assert abs(sobolev_norm(f, 1.0) - expected) / expected < 0.01

    def test_gradient_matches_sobolev(self, grid3):
        f = random_field(grid3, 5)
        grad2 = sum(l2_norm(g) ** 2 for g in gradient(f))
        assert math.isclose(math.sqrt(grad2), sobolev_norm(f, 1.0), rel_tol=1e-10)

    def test_lp_constant_volume(self, grid3):
        one = Field(grid3, np.ones(grid3.shape, dtype=complex))
        assert math.isclose(lp_norm(one, 1), 16.0**3, rel_tol=1e-12)

    def test_lp_domain(self, grid3):
        with pytest.raises(ValueError):
            lp_norm(random_field(grid3), 0.5)

    def test_derivative_eigenfunction(self, grid3):
        from smoothlab.spectral import derivative

        pw = plane_wave(grid3, (2, 0, 1))
        out = derivative(pw, 0)
        assert np.abs(out.values - 1j * (2 * np.pi / 8) * pw.values).max() < 1e-12

    def test_boundary_decay_diagnostic(self, grid3):
        from smoothlab.grid import gaussian
        from smoothlab.spectral import boundary_decay_fraction

        centered = gaussian(grid3, width=0.8)
        assert boundary_decay_fraction(centered) < 1e-10
        # a bump parked on the box boundary is flagged
        shifted = Field(grid3, np.exp(
            -((grid3.coord(0) + grid3.half_width) ** 2
              + grid3.coord(1) ** 2 + grid3.coord(2) ** 2) / 2.0
        ).astype(complex) + np.zeros(grid3.shape))
        assert boundary_decay_fraction(shifted) > 0.1

    def test_plancherel_random(self, grid3):
        from smoothlab.grid import _fftn

        f = random_field(grid3, 9)
        phys = l2_norm(f)
        spec = np.sqrt(np.sum(np.abs(_fftn(f.values)) ** 2) / grid3.size
                       * grid3.cell_volume)
        assert math.isclose(phys, spec, rel_tol=1e-10)
