"""Nonlocal overlap integrals of the left/right basis and regime selection.

The twelve integrals eta0..eta11 are double integrals
    eta = Int g(x) R(x - x') f(x') dx' dx
computed as quadrature(g * convolve(R, f)). eta0..eta3 pair with the cubic
kernel, eta4..eta11 with the quintic one. Which of them survive in the
reduced two-mode model depends on the kernel range sigma:

  case 1 (narrow):        keep eta0, eta4
  case 2 (intermediate):  keep eta0, eta1, eta4
  case 3 (wide):          keep eta0, eta1 and drop the quintic eta4

The boundaries are where the relevance measure eta_i - max(|eta2|, |eta3|)
crosses 0.01: sigma_b for eta1 (crossing upward) and sigma_c for eta4
(crossing downward).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .discretization import DELTA, EXPONENTIAL, GAUSSIAN, ConvolutionPlan, Kernel
from .spectrum import LinearBasis

CASE1 = "case1"
CASE2 = "case2"
CASE3 = "case3"
REGIMES = (CASE1, CASE2, CASE3)

RELEVANCE_CUTOFF = 0.01

ETA_LABELS = tuple(f"eta{i}" for i in range(12))

# Reference regime boundaries for the default double well (half_width 20,
# dx 0.1); recompute_thresholds reproduces them from scratch.
REFERENCE_THRESHOLDS = {
    GAUSSIAN: (2.96, 9.15),
    EXPONENTIAL: (1.56, 7.01),
}


@dataclass(frozen=True)
class RegimeThresholds:
    kernel_family: str
    sigma_b: float
    sigma_c: float

    def __post_init__(self):
        if not (0 < self.sigma_b < self.sigma_c):
            raise ValueError(
                f"need 0 < sigma_b < sigma_c, got {self.sigma_b}, {self.sigma_c}"
            )


@dataclass(frozen=True)
class OverlapSet:
    """The twelve overlap integrals for one (cubic, quintic) kernel pair."""

    values: np.ndarray
    kernel_cubic: Kernel
    kernel_quintic: Kernel
    regime: str

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (12,):
            raise ValueError(f"expected 12 overlap values, got shape {v.shape}")
        object.__setattr__(self, "values", v)

    def __getitem__(self, i: int) -> float:
        return float(self.values[i])

    @property
    def eta0(self) -> float:
        return float(self.values[0])

    @property
    def eta1(self) -> float:
        return float(self.values[1])

    @property
    def eta4(self) -> float:
        return float(self.values[4])

    @property
    def sigma(self) -> float:
        return self.kernel_cubic.range_

    @property
    def kernel_family(self) -> str:
        return self.kernel_cubic.family


def _factor_pairs(basis: LinearBasis):
    """(f, g) integrand factors for eta0..eta11: eta = Int g * (R * f)."""
    pl, pr = basis.phi_left, basis.phi_right
    ll = pl * pl
    rr = pr * pr
    lr = pl * pr
    return (
        (ll, ll),  # eta0   cubic self
        (ll, rr),  # eta1   cubic cross
        (ll, lr),  # eta2   cubic one-mode exchange
        (lr, lr),  # eta3   cubic two-mode exchange
        (ll * ll, ll),  # eta4   quintic self
        (ll * ll, rr),  # eta5
        (ll * ll, lr),  # eta6
        (ll * rr, ll),  # eta7
        (ll * rr, lr),  # eta8
        (ll * lr, ll),  # eta9
        (ll * lr, rr),  # eta10
        (ll * lr, lr),  # eta11
    )


def compute_overlaps(
    basis: LinearBasis, kernel_cubic: Kernel, kernel_quintic: Kernel
) -> OverlapSet:
    """All twelve integrals; eta0..eta3 with the cubic kernel, the rest quintic.

    The regime tag is decided directly from the computed values by the
    relevance criterion, so it stays meaningful even for mixed kernel pairs.
    """
    grid = basis.grid
    plan_c = ConvolutionPlan(kernel_cubic, grid)
    plan_q = ConvolutionPlan(kernel_quintic, grid)
    pairs = _factor_pairs(basis)
    values = np.empty(12)
    for i, (f, g) in enumerate(pairs):
        plan = plan_c if i < 4 else plan_q
        values[i] = grid.integrate(g * plan.apply(f))
    exchange = max(abs(values[2]), abs(values[3]))
    cross_relevant = values[1] - exchange >= RELEVANCE_CUTOFF
    quintic_relevant = values[4] - exchange >= RELEVANCE_CUTOFF
    if cross_relevant and quintic_relevant:
        regime = CASE2
    elif cross_relevant:
        regime = CASE3
    else:
        regime = CASE1
    return OverlapSet(
        values=values,
        kernel_cubic=kernel_cubic,
        kernel_quintic=kernel_quintic,
        regime=regime,
    )


def eta_rel(overlaps: OverlapSet, which: str) -> float:
    """Relevance measure eta_i - max(|eta2|, |eta3|) for which in {eta1, eta4}."""
    exchange = max(abs(overlaps[2]), abs(overlaps[3]))
    if which == "eta1":
        return overlaps.eta1 - exchange
    if which == "eta4":
        return overlaps.eta4 - exchange
    raise ValueError(f"which must be 'eta1' or 'eta4', got {which!r}")


def classify_regime(sigma: float, thresholds: RegimeThresholds) -> str:
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if sigma < thresholds.sigma_b:
        return CASE1
    if sigma < thresholds.sigma_c:
        return CASE2
    return CASE3


def shared_kernel_overlaps(basis: LinearBasis, family: str, sigma: float) -> OverlapSet:
    """Overlaps with one kernel used for both the cubic and quintic terms."""
    k = Kernel(family, sigma)
    return compute_overlaps(basis, k, k)


def find_threshold(
    basis: LinearBasis,
    family: str,
    which: str,
    bracket: tuple[float, float] = (0.05, 25.0),
    cutoff: float = RELEVANCE_CUTOFF,
) -> float:
    """Kernel range where eta_rel(which) crosses the cutoff, by bisection.

    eta1's measure increases with sigma (crossing gives sigma_b); eta4's
    decreases (crossing gives sigma_c).
    """

    def g(sigma: float) -> float:
        return eta_rel(shared_kernel_overlaps(basis, family, sigma), which) - cutoff

    lo, hi = bracket
    glo, ghi = g(lo), g(hi)
    if glo * ghi > 0:
        raise ValueError(
            f"eta_rel({which}) - {cutoff} does not change sign on {bracket}: "
            f"{glo:.3e}, {ghi:.3e}"
        )
    return float(brentq(g, lo, hi, xtol=1e-6))


def recompute_thresholds(basis: LinearBasis, family: str) -> RegimeThresholds:
    """Bisect both regime boundaries for one kernel family."""
    sigma_b = find_threshold(basis, family, "eta1")
    sigma_c = find_threshold(basis, family, "eta4")
    return RegimeThresholds(kernel_family=family, sigma_b=sigma_b, sigma_c=sigma_c)


def overlap_sweep(basis: LinearBasis, family: str, sigmas: np.ndarray) -> np.ndarray:
    """eta0..eta11 stacked over a sigma sweep; shape (len(sigmas), 12)."""
    if family == DELTA:
        raise ValueError("sweep needs a finite-range kernel family")
    out = np.empty((len(sigmas), 12))
    for i, s in enumerate(sigmas):
        out[i] = shared_kernel_overlaps(basis, family, float(s)).values
    return out
