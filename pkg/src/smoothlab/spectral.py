"""Fourier calculus on the periodic box.

Homogeneous multipliers (|D|^s, Riesz transforms) are singular at xi = 0;
the zero mode is always annihilated.  Mean-zero periodic data is the
desk-scale surrogate for Schwartz data on R^n, so this convention is used
by every norm and operator built on top of these routines.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .grid import Field, Grid, _fftn, _ifftn

#: boundary fluctuation above this fraction of the field scale triggers a
#: wrap-around warning in the propagators
BOUNDARY_DECAY_TOL = 1e-8


def boundary_decay_fraction(f: Field) -> float:
    """Largest fluctuation on the outermost grid layer, relative to the
    field scale.  The layer's own mean is subtracted first: constants are
    exactly periodic and cause no wrap-around, only variation across the
    seam does."""
    vals = f.values
    scale = float(np.abs(vals - vals.mean()).max())
    if scale == 0:
        return 0.0
    layer_mask = np.zeros(f.grid.shape, dtype=bool)
    for ax in range(f.grid.dim):
        idx = [slice(None)] * f.grid.dim
        idx[ax] = 0
        layer_mask[tuple(idx)] = True
    layer = vals[layer_mask]
    return float(np.abs(layer - layer.mean()).max() / scale)


def warn_if_boundary_heavy(f: Field, context: str) -> None:
    frac = boundary_decay_fraction(f)
    if frac > BOUNDARY_DECAY_TOL:
        warnings.warn(
            f"{context}: data carries {frac:.1e} of its scale on the box "
            "boundary; wrap-around error is not controlled",
            RuntimeWarning,
            stacklevel=3,
        )


def apply_multiplier(f: Field, symbol: np.ndarray) -> Field:
    return Field(f.grid, _ifftn(symbol * _fftn(f.values)))


def _abs_freq_power(grid: Grid, s: float) -> np.ndarray:
    """|xi|^s on the lattice with the zero mode set to 0."""
    r = grid.freq_radius
    out = np.zeros(grid.shape)
    nz = r > 0
    out[nz] = r[nz] ** s
    return out


def fractional_laplacian(f: Field, s: float) -> Field:
    """|D|^s f: Fourier coefficients scaled by |xi|^s, zero mode dropped.

    Orders outside [-1, 1] are rejected; nothing here needs them and the
    operator-norm bounds certified downstream hold only on that range.
    """
    if abs(s) > 1:
        raise ValueError(f"smoothness order s={s} outside [-1, 1]")
    return apply_multiplier(f, _abs_freq_power(f.grid, s))


def riesz_transform(f: Field, axis: int) -> Field:
    """Multiplier xi_axis / |xi| with the zero mode dropped.

    Sign convention: the symbol is real, so sum_j R_j(R_j f) = f minus its
    mean (no minus sign).
    """
    grid = f.grid
    if not 0 <= axis < grid.dim:
        raise ValueError(f"axis {axis} out of range for dim {grid.dim}")
    r = grid.freq_radius
    sym = np.zeros(grid.shape)
    nz = r > 0
    sym[nz] = (np.broadcast_to(grid.freq_coord(axis), grid.shape)[nz]) / r[nz]
    return apply_multiplier(f, sym)


def derivative(f: Field, axis: int) -> Field:
    """Spectral partial derivative i xi_axis."""
    grid = f.grid
    if not 0 <= axis < grid.dim:
        raise ValueError(f"axis {axis} out of range for dim {grid.dim}")
    return apply_multiplier(f, 1j * grid.freq_coord(axis))


def gradient(f: Field) -> tuple[Field, ...]:
    return tuple(derivative(f, j) for j in range(f.grid.dim))


def gradient_magnitude(f: Field) -> Field:
    mag2 = np.zeros(f.grid.shape)
    for g in gradient(f):
        mag2 = mag2 + np.abs(g.values) ** 2
    return Field(f.grid, np.sqrt(mag2).astype(complex))


def laplacian(f: Field) -> Field:
    return apply_multiplier(f, -f.grid.freq_radius**2)


def mean_zero(f: Field) -> Field:
    return Field(f.grid, f.values - f.values.mean())


def lp_norm(f: Field, p: float) -> float:
    """Riemann-sum L^p norm, max at p = inf."""
    if p < 1:
        raise ValueError(f"Lebesgue exponent p must be >= 1, got {p}")
    a = np.abs(f.values)
    if math.isinf(p):
        return float(a.max())
    return float((np.sum(a**p) * f.grid.cell_volume) ** (1.0 / p))


def l2_norm(f: Field) -> float:
    return float(np.sqrt(np.sum(np.abs(f.values) ** 2) * f.grid.cell_volume))


def inner_product(f: Field, g: Field) -> complex:
    return complex(np.sum(f.values * np.conj(g.values)) * f.grid.cell_volume)


def sobolev_norm(f: Field, s: float) -> float:
    """Homogeneous Sobolev norm: L^2 norm of |D|^s f."""
    return l2_norm(fractional_laplacian(f, s))
