"""Periodic-box grids and the complex fields sampled on them.

Everything in this package lives on a uniform grid over the box
``[-L, L)^n`` with an even, power-of-two number of points per axis.  The
matching frequency lattice is ``(pi/L) * {-N/2, ..., N/2 - 1}^n`` (stored
in FFT order).  Fourier transforms use the unnormalised forward /
``1/N^n`` inverse convention of ``scipy.fft``; every quadrature weight
needed to turn lattice sums into integrals is applied explicitly by the
norm routines.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy import fft as _fft

#: worker count handed to scipy.fft; raised by the CLI --parallel flag.
fft_workers: int = 1


def _fftn(values: np.ndarray) -> np.ndarray:
    return _fft.fftn(values, workers=fft_workers)


def _ifftn(values: np.ndarray) -> np.ndarray:
    return _fft.ifftn(values, workers=fft_workers)


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on ``[-half_width, half_width)^dim``."""

    dim: int
    half_width: float
    points_per_axis: int

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        n = self.points_per_axis
        if n < 2 or n & (n - 1):
            raise ValueError(f"points_per_axis must be a power of two, got {n}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points_per_axis

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def size(self) -> int:
        return self.points_per_axis**self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def box_volume(self) -> float:
        return (2.0 * self.half_width) ** self.dim

    @property
    def freq_spacing(self) -> float:
        return np.pi / self.half_width

    @property
    def freq_max(self) -> float:
        return self.freq_spacing * (self.points_per_axis // 2)

    @cached_property
    def axis(self) -> np.ndarray:
        """Physical coordinates along one axis."""
        return -self.half_width + self.spacing * np.arange(self.points_per_axis)

    @cached_property
    def freq_axis(self) -> np.ndarray:
        """Frequency coordinates along one axis, in FFT order."""
        return 2.0 * np.pi * _fft.fftfreq(self.points_per_axis, d=self.spacing)

    def coord(self, axis: int) -> np.ndarray:
        """Coordinate ``x_axis`` broadcastable over the grid shape."""
        shape = [1] * self.dim
        shape[axis] = -1
        return self.axis.reshape(shape)

    def freq_coord(self, axis: int) -> np.ndarray:
        shape = [1] * self.dim
        shape[axis] = -1
        return self.freq_axis.reshape(shape)

    @cached_property
    def radius(self) -> np.ndarray:
        """|x| at every grid point."""
        r2 = np.zeros(self.shape)
        for j in range(self.dim):
            r2 = r2 + self.coord(j) ** 2
        return np.sqrt(r2)

    @cached_property
    def freq_radius(self) -> np.ndarray:
        """|xi| at every frequency-lattice point (FFT order)."""
        r2 = np.zeros(self.shape)
        for j in range(self.dim):
            r2 = r2 + self.freq_coord(j) ** 2
        return np.sqrt(r2)

    def refine(self, factor: int = 2) -> "Grid":
        return Grid(self.dim, self.half_width, self.points_per_axis * factor)

    def meta(self) -> dict:
        return {
            "dim": self.dim,
            "half_width": self.half_width,
            "points_per_axis": self.points_per_axis,
        }


@dataclass
class Field:
    """Complex scalar samples on a Grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"sample shape {self.values.shape} does not match grid {self.grid.shape}"
            )

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())

    def __add__(self, other: "Field") -> "Field":
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        return Field(self.grid, self.values - other.values)

    def __mul__(self, factor) -> "Field":
        if isinstance(factor, Field):
            return Field(self.grid, self.values * factor.values)
        return Field(self.grid, self.values * factor)

    __rmul__ = __mul__

    def __neg__(self) -> "Field":
        return Field(self.grid, -self.values)


@dataclass
class SpaceTimeField:
    """Time-indexed family of fields on one grid."""

    grid: Grid
    times: np.ndarray
    values: np.ndarray  # shape (len(times), *grid.shape)

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.times.ndim != 1:
            raise ValueError("times must be one-dimensional")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        if self.values.shape != (len(self.times),) + self.grid.shape:
            raise ValueError(
                f"values shape {self.values.shape} does not match "
                f"({len(self.times)},) + {self.grid.shape}"
            )

    @property
    def n_times(self) -> int:
        return len(self.times)

    def slice(self, j: int) -> Field:
        return Field(self.grid, self.values[j])

    def slices(self):
        for j in range(self.n_times):
            yield self.slice(j)

    def copy(self) -> "SpaceTimeField":
        return SpaceTimeField(self.grid, self.times.copy(), self.values.copy())

    def __add__(self, other: "SpaceTimeField") -> "SpaceTimeField":
        return SpaceTimeField(self.grid, self.times, self.values + other.values)

    def __sub__(self, other: "SpaceTimeField") -> "SpaceTimeField":
        return SpaceTimeField(self.grid, self.times, self.values - other.values)

    def __mul__(self, factor) -> "SpaceTimeField":
        return SpaceTimeField(self.grid, self.times, self.values * factor)

    __rmul__ = __mul__


def plane_wave(grid: Grid, mode: Sequence[int]) -> Field:
    """``exp(i xi . x)`` for the lattice frequency ``xi = (pi/L) * mode``."""
    if len(mode) != grid.dim:
        raise ValueError(f"mode needs {grid.dim} integers, got {len(mode)}")
    phase = np.zeros(grid.shape)
    for j, m in enumerate(mode):
        phase = phase + (np.pi / grid.half_width) * m * grid.coord(j)
    return Field(grid, np.exp(1j * phase))


def gaussian(grid: Grid, width: float = 1.0, center: float = 0.0) -> Field:
    """Radial Gaussian ``exp(-(|x| - center)^2 / (2 width^2))`` (center=0 gives
    the standard ``exp(-|x|^2 / (2 width^2))``)."""
    r = grid.radius
    return Field(grid, np.exp(-((r - center) ** 2) / (2.0 * width**2)).astype(complex))
