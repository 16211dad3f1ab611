"""Composite shell norms: weighted Sobolev sums, local-energy functionals,
space-time smoothing norms, and the three-way equivalence report.

Shell sums run over the finite range of a DyadicDecomposition; the share
of the two boundary shells is reported as ``tail_fraction`` so experiments
can enforce the < 1% truncation discipline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from .dyadic import DyadicDecomposition, MaskFamily, frequency_masks, spatial_masks
from .grid import Field, Grid, SpaceTimeField
from .spectral import fractional_laplacian, l2_norm, lp_norm

VARIANTS = ("mask_then_D", "D_then_mask", "weight_product")


@dataclass(frozen=True)
class NormSpec:
    """Exponent triple (q, a, s) of a weighted shell-Sobolev norm."""

    q: float
    a: float
    s: float

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if abs(self.s) > 1:
            raise ValueError(f"s must lie in [-1, 1], got {self.s}")

    def equivalence_admissible(self, dim: int) -> bool:
        return abs(self.a) + abs(self.s) < dim / 2


def _shells(shells: DyadicDecomposition | Iterable[int]) -> list[int]:
    if isinstance(shells, DyadicDecomposition):
        return list(shells.shells)
    return sorted(shells)


@lru_cache(maxsize=512)
def _annulus_mask(grid: Grid, k: int) -> np.ndarray:
    """Indicator of the closed annulus 2^(k-1) <= |x| <= 2^(k+1)."""
    r = grid.radius
    return ((r >= 2.0 ** (k - 1)) & (r <= 2.0 ** (k + 1))).astype(float)


def annulus_l2(f: Field, k: int) -> float:
    """L^2 norm of f over the dyadic annulus of shell k."""
    m = _annulus_mask(f.grid, k)
    return float(np.sqrt(np.sum(m * np.abs(f.values) ** 2) * f.grid.cell_volume))


def annulus_sum_norm(f: Field, shells: DyadicDecomposition | Iterable[int]) -> float:
    """sum_k 2^(k/2) ||f||_{L^2(annulus k)} over the truncated shell range."""
    return sum(2.0 ** (k / 2) * annulus_l2(f, k) for k in _shells(shells))


def annulus_sup_norm(f: Field, shells: DyadicDecomposition | Iterable[int]) -> float:
    """sup_k 2^(-k/2) ||f||_{L^2(annulus k)} over the truncated shell range."""
    return max(2.0 ** (-k / 2) * annulus_l2(f, k) for k in _shells(shells))


def morrey_campanato(f: Field, radii: Iterable[float] | None = None) -> float:
    """Scale-invariant local energy: sup_R (R^-1 int_{|x|<=R} |f|^2)^(1/2).

    The sup over all R > 0 is evaluated on a dyadic ladder (with arithmetic
    midpoints) spanning grid spacing to box half-width; the integrand is
    monotone in R between ladder points up to quadrature error.
    """
    grid = f.grid
    if radii is None:
        k_lo = math.ceil(math.log2(grid.spacing))
        k_hi = math.floor(math.log2(grid.half_width))
        ladder = [2.0**k for k in range(k_lo, k_hi + 1)]
        radii = sorted(ladder + [1.5 * R for R in ladder[:-1]])
    r = grid.radius
    a2 = np.abs(f.values) ** 2
    best = 0.0
    for R in radii:
        val = np.sum(a2[r <= R]) * grid.cell_volume / R
        best = max(best, float(val))
    return math.sqrt(best)


# ---------------------------------------------------------------------------
# weighted shell-Sobolev norms (the three equivalent forms)
# ---------------------------------------------------------------------------


def _weight_product_mask(masks: MaskFamily, k: int, a: float) -> np.ndarray:
    """|x|^a Q_k(x), with the value forced to 0 off the mask support."""
    grid = masks.grid
    q = masks[k]
    out = np.zeros(grid.shape)
    supp = q > 0
    out[supp] = grid.radius[supp] ** a * q[supp]
    return out


def lqa_shell_terms(
    f: Field,
    decomp: DyadicDecomposition,
    spec: NormSpec,
    variant: str = "D_then_mask",
    p: float = 2,
    strict: bool = False,
) -> dict[int, float]:
    """Unweighted per-shell B-norm values of the selected variant.

    mask_then_D    :  || Q_k |D|^s f ||_{L^p}
    D_then_mask    :  || |D|^s (Q_k f) ||_{L^p}
    weight_product :  || |D|^s (|x|^a Q_k f) ||_{L^p}
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    masks = spatial_masks(decomp, f.grid, strict=strict)
    terms: dict[int, float] = {}
    if variant == "mask_then_D":
        df = fractional_laplacian(f, spec.s)
        for k in decomp.shells:
            terms[k] = lp_norm(Field(f.grid, masks[k] * df.values), p)
    elif variant == "D_then_mask":
        for k in decomp.shells:
            loc = Field(f.grid, masks[k] * f.values)
            terms[k] = lp_norm(fractional_laplacian(loc, spec.s), p)
    else:
        for k in decomp.shells:
            w = _weight_product_mask(masks, k, spec.a)
            loc = Field(f.grid, w * f.values)
            terms[k] = lp_norm(fractional_laplacian(loc, spec.s), p)
    return terms


def _assemble(terms: dict[int, float], q: float, a: float) -> float:
    if math.isinf(q):
        return max(2.0 ** (k * a) * v for k, v in terms.items())
    return sum(2.0 ** (k * q * a) * v**q for k, v in terms.items()) ** (1.0 / q)


def lqa_sobolev_norm(
    f: Field,
    decomp: DyadicDecomposition,
    spec: NormSpec,
    variant: str = "D_then_mask",
    p: float = 2,
    strict: bool = False,
) -> float:
    """Weighted shell-Sobolev norm in one of its three equivalent forms.

    The first two variants carry the dyadic weight 2^(k a) explicitly; the
    weight_product form carries it inside the |x|^a factor and is summed
    unweighted.
    """
    terms = lqa_shell_terms(f, decomp, spec, variant, p, strict)
    if not terms:
        raise ValueError("empty shell range")
    weight_a = 0.0 if variant == "weight_product" else spec.a
    return _assemble(terms, spec.q, weight_a)


def norm_record(
    f: Field,
    decomp: DyadicDecomposition,
    spec: NormSpec,
    variant: str = "D_then_mask",
    name: str = "lqa_sobolev",
) -> dict:
    """JSON-ready record of one norm evaluation with its truncation tail."""
    return {
        "norm_name": name,
        "variant": variant,
        "spec": {"q": spec.q, "a": spec.a, "s": spec.s},
        "value": lqa_sobolev_norm(f, decomp, spec, variant),
        "tail_fraction": lqa_tail_fraction(f, decomp, spec, variant),
        "grid": f.grid.meta(),
    }


def lqa_tail_fraction(
    f: Field,
    decomp: DyadicDecomposition,
    spec: NormSpec,
    variant: str = "D_then_mask",
    p: float = 2,
) -> float:
    """Share of the two boundary shells in the assembled norm (q-power mass;
    at q = inf the boundary max relative to the global max)."""
    terms = lqa_shell_terms(f, decomp, spec, variant, p)
    weight_a = 0.0 if variant == "weight_product" else spec.a
    edge = {decomp.k_min, decomp.k_max}
    if math.isinf(spec.q):
        total = max(2.0 ** (k * weight_a) * v for k, v in terms.items())
        boundary = max(2.0 ** (k * weight_a) * terms[k] for k in edge)
        return boundary / total if total > 0 else 0.0
    total = sum(2.0 ** (k * spec.q * weight_a) * v**spec.q for k, v in terms.items())
    boundary = sum(2.0 ** (k * spec.q * weight_a) * terms[k] ** spec.q for k in edge)
    return boundary / total if total > 0 else 0.0


# ---------------------------------------------------------------------------
# space-time norms
# ---------------------------------------------------------------------------


def time_l2(values: np.ndarray, times: np.ndarray) -> float:
    """(int g(t)^2 dt)^(1/2) by the trapezoid rule."""
    return float(np.sqrt(np.trapezoid(np.asarray(values, float) ** 2, times)))


def time_l1(values: np.ndarray, times: np.ndarray) -> float:
    return float(np.trapezoid(np.abs(np.asarray(values, float)), times))


def _require_slices(u: SpaceTimeField) -> None:
    if u.n_times < 2:
        raise ValueError("need at least 2 time slices")


def forcing_norm(F: SpaceTimeField, decomp: DyadicDecomposition) -> float:
    """Time-L^2 of the l^{1,1/2} H^{-1/2} spatial norm (the data-side norm)."""
    _require_slices(F)
    spec = NormSpec(1, 0.5, -0.5)
    vals = [lqa_sobolev_norm(f, decomp, spec) for f in F.slices()]
    return time_l2(np.array(vals), F.times)


def smoothing_norm(u: SpaceTimeField, decomp: DyadicDecomposition) -> float:
    """Time-L^2 of the l^{inf,-1/2} H^{1/2} spatial norm (the solution-side norm)."""
    _require_slices(u)
    spec = NormSpec(math.inf, -0.5, 0.5)
    vals = [lqa_sobolev_norm(f, decomp, spec) for f in u.slices()]
    return time_l2(np.array(vals), u.times)


def sup_l2_norm(u: SpaceTimeField) -> float:
    """L^inf in time of the spatial L^2 norm."""
    return max(l2_norm(f) for f in u.slices())


def l1t_l2x_norm(F: SpaceTimeField) -> float:
    """L^1 in time of the spatial L^2 norm."""
    return time_l1(np.array([l2_norm(f) for f in F.slices()]), F.times)


# ---------------------------------------------------------------------------
# phase localization
# ---------------------------------------------------------------------------


def frequency_localize(f: Field, freq_masks: MaskFamily, k: int) -> Field:
    from .spectral import apply_multiplier

    return apply_multiplier(f, freq_masks[k])


def phase_localized_norm(
    f: Field,
    space_decomp: DyadicDecomposition,
    freq_decomp: DyadicDecomposition,
    spec: NormSpec,
    r: float = 2,
    r_weight: float = 0.0,
    ordering: str = "frequency_outer",
) -> float:
    """Outer l^{r, r_weight} sum over frequency shells of the inner weighted
    spatial norm (default r=2, weight 0).

    ``ordering`` names which index is summed last; the two mixed orders are
    genuinely different norms and every report records the one used.
    """
    pk = frequency_masks(freq_decomp, f.grid, strict=False)
    if ordering == "frequency_outer":
        outer_terms = {
            k2: lqa_sobolev_norm(frequency_localize(f, pk, k2), space_decomp, spec)
            for k2 in freq_decomp.shells
        }
        return _assemble(outer_terms, r, r_weight)
    if ordering == "space_outer":
        # inner l^r over frequency shells of the per-(k1,k2) localized B-norm,
        # assembled by the spatial l^{q,a} rule last
        per_k1: dict[int, float] = {}
        qk = spatial_masks(space_decomp, f.grid, strict=False)
        for k1 in space_decomp.shells:
            inner = {}
            for k2 in freq_decomp.shells:
                loc = Field(f.grid, qk[k1] * frequency_localize(f, pk, k2).values)
                inner[k2] = l2_norm(fractional_laplacian(loc, spec.s))
            per_k1[k1] = _assemble(inner, r, r_weight)
        return _assemble(per_k1, spec.q, spec.a)
    raise ValueError(f"unknown ordering {ordering!r}")


# ---------------------------------------------------------------------------
# equivalence report
# ---------------------------------------------------------------------------


@dataclass
class EquivalenceReport:
    """Three equivalent-norm values for one field plus their pairwise ratios."""

    spec: NormSpec
    values: dict[str, float]
    ratios: dict[str, float] = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)
    grid_meta: dict = field(default_factory=dict)
    shell_range: tuple[int, int] = (0, 0)

    @property
    def max_ratio(self) -> float:
        return max(self.ratios.values()) if self.ratios else math.nan

    @property
    def degenerate(self) -> bool:
        return "degenerate" in self.flags


def equivalence_report(
    f: Field,
    decomp: DyadicDecomposition,
    spec: NormSpec,
    ratio_ceiling: float = 100.0,
) -> EquivalenceReport:
    """Compute all three norm forms and their pairwise (max/min) ratios."""
    if not spec.equivalence_admissible(f.grid.dim):
        raise ValueError(
            f"|a|+|s| = {abs(spec.a) + abs(spec.s)} must be < n/2 = {f.grid.dim / 2}"
        )
    values = {
        v: lqa_sobolev_norm(f, decomp, spec, variant=v) for v in VARIANTS
    }
    report = EquivalenceReport(
        spec=spec,
        values=values,
        grid_meta=f.grid.meta(),
        shell_range=(decomp.k_min, decomp.k_max),
    )
    if any(val == 0.0 for val in values.values()):
        report.flags.append("degenerate")
        report.ratios = {f"{a}/{b}": 0.0 for a in VARIANTS for b in VARIANTS if a < b}
        return report
    for i, a in enumerate(VARIANTS):
        for b in VARIANTS[i + 1 :]:
            hi, lo = max(values[a], values[b]), min(values[a], values[b])
            report.ratios[f"{a}/{b}"] = hi / lo
    if report.max_ratio > ratio_ceiling:
        report.flags.append(f"ratio-ceiling-{ratio_ceiling}-exceeded")
    return report
