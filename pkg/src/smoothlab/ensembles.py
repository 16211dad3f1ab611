"""Randomized test ensembles: band-limited fields with support biased to
the mid shells, and their space-time extensions.

Coefficients are drawn on a fixed small frequency cube independent of the
grid size, so the same (seed, member) pair denotes the same continuum
field at every refinement level; refinement drift then measures
discretization, not ensemble churn.  Seeds are recorded in every report.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .dyadic import smooth_cutoff
from .grid import Field, Grid, SpaceTimeField

def member_rng(seed: int, *indices: int) -> np.random.Generator:
    return np.random.default_rng([seed, *indices])


def radial_window(grid: Grid, r_inner: float, r_outer: float) -> np.ndarray:
    """Smooth window: 0 inside r_inner/2, 1 on [r_inner, r_outer], 0 beyond
    2 r_outer (keeps data away from the origin and the box boundary)."""
    r = grid.radius
    return (1.0 - smooth_cutoff(2.0 * r / r_inner)) * smooth_cutoff(r / r_outer)


def band_limited_field(
    grid: Grid,
    rng: np.random.Generator,
    mode_radius: tuple[float, float] = (1.0, 6.0),
    window: tuple[float, float] | None = (0.7, 3.0),
    mean_zero: bool = True,
    mode_scale: int = 1,
) -> Field:
    """Random field with lattice modes in an |mode| annulus, spatially
    windowed to the mid shells.

    The coefficient draw covers the fixed cube |mode_j| <= ceil(hi) in a
    canonical order, so the realization is independent of the grid size.
    ``mode_scale`` dilates the same realization in frequency (f(x) becomes
    f(scale x), with the window shrunk along), used by the rescaling
    probes.
    """
    lo, hi = mode_radius
    kmax = math.ceil(hi)
    n = grid.dim
    cube = (2 * kmax + 1,) * n
    re = rng.standard_normal(cube)
    im = rng.standard_normal(cube)
    if (2 * kmax * mode_scale + 2) > grid.points_per_axis:
        raise ValueError("grid too coarse for the requested mode band")
    spectrum = np.zeros(grid.shape, dtype=np.complex128)
    N = grid.points_per_axis
    for flat in range(np.prod(cube)):
        idx = np.unravel_index(flat, cube)
        kvec = np.array(idx) - kmax
        r = np.linalg.norm(kvec)
        if r < lo or r > hi:
            continue
        spectrum[tuple((kvec * mode_scale) % N)] = re[idx] + 1j * im[idx]
    # unnormalized inverse transform scaled so samples are sums of unit plane waves
    from .grid import _ifftn

    values = _ifftn(spectrum) * (N**n)
    if window is not None:
        values = values * radial_window(
            grid, window[0] / mode_scale, window[1] / mode_scale
        )
    if mean_zero:
        values = values - values.mean()
    return Field(grid, values)


def band_limited_spacetime(
    grid: Grid,
    times: Sequence[float],
    rng: np.random.Generator,
    n_modes: int = 3,
    mode_radius: tuple[float, float] = (1.0, 6.0),
    window: tuple[float, float] | None = (0.7, 3.0),
    omega_base: float | None = None,
    mode_scale: int = 1,
    time_scale: float = 1.0,
    amplitude: float = 1.0,
) -> SpaceTimeField:
    """sum_j exp(i omega_j t + i theta_j) f_j(x) with random spatial
    profiles; every slice is mean-zero and windowed away from the origin.

    With the same rng stream, ``(mode_scale, time_scale, amplitude)``
    produce the exactly dilated realization ``amplitude *
    F(time_scale * t, mode_scale * x)`` of the undilated member.
    """
    times = np.asarray(times, dtype=float)
    span = (times[-1] - times[0]) * time_scale
    if omega_base is None:
        omega_base = 4.0 * np.pi / span if span > 0 else 1.0
    omegas = rng.uniform(-omega_base, omega_base, size=n_modes) * time_scale
    thetas = rng.uniform(0, 2 * np.pi, size=n_modes)
    profiles = [
        band_limited_field(grid, rng, mode_radius, window, mean_zero=True,
                           mode_scale=mode_scale)
        for _ in range(n_modes)
    ]
    vals = np.zeros((len(times),) + grid.shape, dtype=np.complex128)
    for om, th, prof in zip(omegas, thetas, profiles):
        envelope = np.exp(1j * (om * times + th))
        vals += envelope[(...,) + (None,) * grid.dim] * prof.values
    return SpaceTimeField(grid, times, amplitude * vals)
