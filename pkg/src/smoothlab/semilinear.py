"""Picard iteration for the semilinear magnetic Schrodinger equation.

The recurrence starts from the zero guess, so the first iterate is the
linear solution, and each step feeds the nonlinearity ``V u |u|^(p-1)``
of the previous iterate back through the magnetic solver.  Contraction is
certified in the intersection norm (max of sup-in-time L^2 and the
smoothing norm), and a bisection locates the empirical radius of initial
data sizes for which every contraction ratio stays below 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dyadic import DyadicDecomposition
from .grid import Field, Grid, SpaceTimeField
from .norms import _annulus_mask, smoothing_norm, sup_l2_norm
from .schrodinger import MagneticPotential, magnetic_solve
from .spectral import l2_norm


def critical_exponent(n: int, a) -> Fraction:
    """p = (n + 4) / (n + 2a), the L^2-critical power for shell weight a."""
    if n < 3:
        raise ValueError(f"dimension must be >= 3, got {n}")
    a = Fraction(a)
    if not (1 <= a < 2):
        raise ValueError(f"weight a must lie in [1, 2), got {a}")
    return Fraction(n + 4, 1) / (n + 2 * a)


@dataclass
class SemilinearPotential:
    """Measurable potential V with its weighted shell sup audit."""

    grid: Grid
    values: np.ndarray
    a: float

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError("potential shape does not match grid")

    def audit(self, decomp: DyadicDecomposition) -> float:
        """sum_k 2^(k a) sup_{annulus k} |V|."""
        total = 0.0
        for k in decomp.shells:
            mask = _annulus_mask(self.grid, k) > 0
            if mask.any():
                total += 2.0 ** (k * self.a) * float(np.abs(self.values[mask]).max())
        return total

    def is_zero(self) -> bool:
        return bool(np.max(np.abs(self.values)) == 0.0)


def shell_potential(grid: Grid, amplitude: float, shell: int = 0, a: float = 1.0) -> SemilinearPotential:
    from .dyadic import make_bump

    prof = make_bump()
    return SemilinearPotential(grid, amplitude * prof(grid.radius / 2.0**shell), a)


def nonlinearity(u: SpaceTimeField, V: SemilinearPotential, p: float) -> SpaceTimeField:
    """Pointwise V u |u|^(p-1); the power is extended by 0 at u = 0."""
    if not p > 1:
        raise ValueError(f"power p must exceed 1, got {p}")
    p = float(p)
    mag = np.abs(u.values)
    with np.errstate(divide="ignore", invalid="ignore"):
        amp = np.where(mag > 0, mag ** (p - 1.0), 0.0)
    return SpaceTimeField(u.grid, u.times, V.values * u.values * amp)


def contraction_norm(u: SpaceTimeField, decomp: DyadicDecomposition) -> float:
    """Norm of the iteration space: max of sup-in-time L^2 and the
    smoothing norm (equivalent to their sum up to a factor 2)."""
    return max(sup_l2_norm(u), smoothing_norm(u, decomp))


@dataclass
class BoundReport:
    lhs: float
    rhs: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else math.nan

    @property
    def degenerate(self) -> bool:
        return self.rhs == 0.0


def nonlinearity_forcing_bound(
    u: SpaceTimeField, V: SemilinearPotential, p: float, decomp: DyadicDecomposition
) -> BoundReport:
    """Data-side norm of the nonlinearity against the p-th power of the
    iteration norm (the chain endpoint actually used by the recurrence)."""
    from .norms import forcing_norm

    lhs = forcing_norm(nonlinearity(u, V, p), decomp)
    rhs = contraction_norm(u, decomp) ** p
    return BoundReport(lhs, rhs)


@dataclass
class PicardState:
    index: int
    z_norm: float
    diff_z: float | None  # ||u_k - u_{k-1}||_Z, None for the first iterate
    contraction_ratio: float | None  # diff_z ratio, defined from the second diff


@dataclass
class PicardRun:
    states: list[PicardState]
    converged: bool
    diverged: bool
    final: SpaceTimeField | None
    fixed_point_residual: float | None = None
    meta: dict = field(default_factory=dict)

    @property
    def contraction_ratios(self) -> list[float]:
        return [s.contraction_ratio for s in self.states if s.contraction_ratio is not None]

    @property
    def contracting(self) -> bool:
        ratios = self.contraction_ratios
        return bool(ratios) and all(r < 1.0 for r in ratios) and not self.diverged


def picard_solve(
    f: Field,
    V: SemilinearPotential,
    A: MagneticPotential,
    p: float,
    times: Sequence[float],
    decomp: DyadicDecomposition,
    max_iter: int = 12,
    tol: float = 1e-8,
    dt: float | None = None,
) -> PicardRun:
    """Iterate the recurrence u_{k+1} = solve(f, forcing = V u_k |u_k|^(p-1)).

    Stops when the successive difference in the iteration norm drops below
    ``tol`` or after ``max_iter`` steps.  Divergence (iteration-norm
    doubling within three steps, or three consecutive growing differences)
    is a returned signal, not an exception.
    """
    times = np.asarray(times, dtype=float)
    u = magnetic_solve(f, A, None, times, dt=dt)
    z = contraction_norm(u, decomp)
    states = [PicardState(0, z, None, None)]
    z_hist = [z]
    diffs: list[float] = []
    converged = diverged = False
    if V.is_zero():
        # recurrence degenerates: the linear solution is already the fixed point
        return PicardRun(states, True, False, u, 0.0, {"linear": True})
    for k in range(1, max_iter + 1):
        forcing = nonlinearity(u, V, p)
        u_next = magnetic_solve(f, A, forcing, times, dt=dt)
        diff = contraction_norm(u_next - u, decomp)
        z = contraction_norm(u_next, decomp)
        ratio = diff / diffs[-1] if diffs and diffs[-1] > 0 else None
        states.append(PicardState(k, z, diff, ratio))
        diffs.append(diff)
        z_hist.append(z)
        u = u_next
        if len(z_hist) > 3 and z_hist[-1] > 2.0 * z_hist[-4]:
            diverged = True
            break
        if len(diffs) >= 3 and diffs[-1] > diffs[-2] > diffs[-3]:
            diverged = True
            break
        if diff < tol:
            converged = True
            break
    residual = None
    if converged:
        # residual of the discrete fixed-point map: one more solver pass
        again = magnetic_solve(f, A, nonlinearity(u, V, p), times, dt=dt)
        residual = contraction_norm(again - u, decomp)
    return PicardRun(states, converged, diverged, u, residual)


def finite_difference_residual(
    run_field: SpaceTimeField,
    f: Field,
    V: SemilinearPotential,
    A: MagneticPotential,
    p: float,
) -> float:
    """Direct discrete residual ||d/dt u - i Lap_A u - V u |u|^(p-1)||,
    centered differences in t, relative to ||d/dt u||.  Diagnostic only:
    it is dominated by the time-sampling error of the stored slices."""
    from .grid import _fftn, _ifftn
    from .schrodinger import effective_scalar_potential

    grid = run_field.grid
    comps = A.at(0.0)
    w = effective_scalar_potential(A).field.values
    t = run_field.times
    vals = run_field.values
    num = 0.0
    den = 0.0
    mag = np.abs(vals)
    with np.errstate(divide="ignore", invalid="ignore"):
        amp = np.where(mag > 0, mag ** (p - 1.0), 0.0)
    nl = V.values * vals * amp
    for j in range(1, len(t) - 1):
        dtv = (vals[j + 1] - vals[j - 1]) / (t[j + 1] - t[j - 1])
        u = vals[j]
        lap = _ifftn(-(grid.freq_radius**2) * _fftn(u))
        div = np.zeros(grid.shape, dtype=np.complex128)
        for ax, c in enumerate(comps):
            div += _ifftn(1j * grid.freq_coord(ax) * _fftn(c * u))
        lap_a = lap - 2j * div - w * u
        res = dtv - 1j * lap_a - nl[j]
        num += float(np.sum(np.abs(res) ** 2))
        den += float(np.sum(np.abs(dtv) ** 2))
    return math.sqrt(num / den) if den > 0 else 0.0


@dataclass
class ThresholdReport:
    threshold: float
    trace: list[dict]
    contracting_at_threshold: bool


def contraction_threshold(
    f_profile: Field,
    V: SemilinearPotential,
    A: MagneticPotential,
    p: float,
    times: Sequence[float],
    decomp: DyadicDecomposition,
    delta_lo: float = 1e-3,
    delta_hi: float = 4.0,
    bisect_steps: int = 6,
    **picard_kw,
) -> ThresholdReport:
    """Bisect the initial-data size delta = ||f||_{L^2} for contraction.

    Returns the largest tested delta with every contraction ratio below 1;
    `trace` records each probe.
    """
    base = l2_norm(f_profile)
    if base == 0:
        raise ValueError("profile must be nonzero")

    def probe(delta: float) -> PicardRun:
        f = f_profile * (delta / base)
        return picard_solve(f, V, A, p, times, decomp, **picard_kw)

    trace = []
    lo_run = probe(delta_lo)
    trace.append({"delta": delta_lo, "contracting": lo_run.contracting})
    if not lo_run.contracting:
        return ThresholdReport(0.0, trace, False)
    hi_run = probe(delta_hi)
    trace.append({"delta": delta_hi, "contracting": hi_run.contracting})
    if hi_run.contracting:
        return ThresholdReport(delta_hi, trace, True)
    lo, hi = delta_lo, delta_hi
    for _ in range(bisect_steps):
        mid = math.sqrt(lo * hi)
        run = probe(mid)
        trace.append({"delta": mid, "contracting": run.contracting})
        if run.contracting:
            lo = mid
        else:
            hi = mid
    return ThresholdReport(lo, trace, True)
