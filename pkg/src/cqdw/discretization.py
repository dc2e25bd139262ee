"""Uniform grid, double-well potential, and nonlocal interaction kernels.

Everything downstream (eigenmodes, overlap integrals, Newton continuation,
time propagation) lives on one uniform symmetric grid. Convolutions are
zero-padded linear convolutions: the parabolic trap makes the problem
non-periodic, so periodic wrap-around is never allowed. With zero padding the
trapezoid rule on the whole line reduces to a plain dx-weighted sum, which is
what the FFT route computes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import fft as _fft

GAUSSIAN = "gaussian"
EXPONENTIAL = "exponential"
DELTA = "delta"
KERNEL_FAMILIES = (GAUSSIAN, EXPONENTIAL, DELTA)


class DiscretizationError(ValueError):
    """Raised for invalid grid, potential, or kernel parameters."""


@dataclass(frozen=True)
class Grid:
    """Uniform symmetric grid on [-half_width, half_width], always containing 0."""

    half_width: float
    spacing: float

    @property
    def n_points(self) -> int:
        return 2 * int(round(self.half_width / self.spacing)) + 1

    @property
    def points(self) -> np.ndarray:
        m = int(round(self.half_width / self.spacing))
        return self.spacing * np.arange(-m, m + 1)

    @property
    def center_index(self) -> int:
        return self.n_points // 2

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid quadrature weights for integrals over the box."""
        w = np.full(self.n_points, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w

    def integrate(self, values: np.ndarray) -> float | complex:
        return np.trapezoid(values, dx=self.spacing, axis=-1)

    def inner(self, f: np.ndarray, g: np.ndarray) -> float | complex:
        """L2 inner product <f, g> with the quadrature weights."""
        return self.integrate(np.conj(f) * g)

    def norm_sq(self, f: np.ndarray) -> float:
        return float(np.real(self.integrate(np.abs(f) ** 2)))


def build_grid(half_width: float, spacing: float) -> Grid:
    """Validate and build the symmetric uniform grid.

    half_width must be a whole multiple of spacing so that x = 0 is a grid
    point (the parity machinery relies on it).
    """
    if not (half_width > 0.0) or not (spacing > 0.0):
        raise DiscretizationError(
            f"half_width and spacing must be positive, got {half_width}, {spacing}"
        )
    ratio = half_width / spacing
    if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
        raise DiscretizationError(
            f"half_width {half_width} is not a whole multiple of spacing {spacing}"
        )
    grid = Grid(half_width=float(half_width), spacing=float(spacing))
    if grid.n_points < 3:
        raise DiscretizationError(f"grid needs at least 3 points, got {grid.n_points}")
    return grid


@dataclass(frozen=True)
class GridFunction:
    """Values of a scalar field sampled on a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != (self.grid.n_points,):
            raise DiscretizationError(
                f"values have shape {values.shape}, expected ({self.grid.n_points},)"
            )
        object.__setattr__(self, "values", values)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    def norm_sq(self) -> float:
        return self.grid.norm_sq(self.values)


# --- potential ---------------------------------------------------------------


@dataclass(frozen=True)
class PotentialParams:
    """Double well: parabolic trap of frequency `trap_frequency` plus a
    sech^2 barrier of height `barrier_height` and width `barrier_width`."""

    trap_frequency: float = 0.1
    barrier_height: float = 1.0
    barrier_width: float = 0.5

    def validate(self) -> None:
        if self.barrier_width <= 0.0:
            raise DiscretizationError(
                f"barrier_width must be positive, got {self.barrier_width}"
            )
        if self.trap_frequency < 0.0:
            raise DiscretizationError(
                f"trap_frequency must be non-negative, got {self.trap_frequency}"
            )
        if self.barrier_height < 0.0:
            raise DiscretizationError(
                f"barrier_height must be non-negative, got {self.barrier_height}"
            )


def potential_profile(grid: Grid, params: PotentialParams) -> np.ndarray:
    """V(x) = (1/2) trap_frequency^2 x^2 + barrier_height sech^2(x / barrier_width)."""
    params.validate()
    x = grid.points
    barrier = params.barrier_height / np.cosh(x / params.barrier_width) ** 2
    return 0.5 * params.trap_frequency**2 * x**2 + barrier


# --- kernels ------------------------------------------------------------------


@dataclass(frozen=True)
class Kernel:
    """Unit-mass even interaction kernel.

    family is one of "gaussian", "exponential", "delta". `range_` is the width
    parameter sigma (unused for the delta kernel, which acts as the identity
    under convolution and has no pointwise density).
    """

    family: str
    range_: float = 0.0

    def __post_init__(self):
        if self.family not in KERNEL_FAMILIES:
            raise DiscretizationError(
                f"unknown kernel family {self.family!r}, expected one of {KERNEL_FAMILIES}"
            )
        if self.family != DELTA and not (self.range_ > 0.0):
            raise DiscretizationError(
                f"kernel range must be positive for family {self.family!r}, got {self.range_}"
            )

    @property
    def is_delta(self) -> bool:
        return self.family == DELTA


def kernel_eval(kernel: Kernel, x: np.ndarray) -> np.ndarray:
    """Pointwise kernel density. Rejected for the delta kernel."""
    x = np.asarray(x, dtype=float)
    s = kernel.range_
    if kernel.family == GAUSSIAN:
        return np.exp(-((x / s) ** 2)) / (s * math.sqrt(math.pi))
    if kernel.family == EXPONENTIAL:
        return np.exp(-np.abs(x) / s) / (2.0 * s)
    raise DiscretizationError("delta kernel has no pointwise density")


_SAMPLE_CACHE: dict[tuple, np.ndarray] = {}
_MATRIX_CACHE: dict[tuple, np.ndarray] = {}


def _cache_key(kernel: Kernel, grid: Grid) -> tuple:
    return (kernel.family, kernel.range_, grid.half_width, grid.spacing)


def kernel_samples(kernel: Kernel, grid: Grid) -> np.ndarray:
    """Kernel sampled on all pairwise offsets m*dx, m = -(n-1)..(n-1)."""
    key = _cache_key(kernel, grid)
    if key not in _SAMPLE_CACHE:
        n = grid.n_points
        offsets = grid.spacing * np.arange(-(n - 1), n)
        _SAMPLE_CACHE[key] = kernel_eval(kernel, offsets)
    return _SAMPLE_CACHE[key]


def kernel_matrix(kernel: Kernel, grid: Grid) -> np.ndarray:
    """Dense quadrature matrix K[i, j] = R(x_i - x_j) dx (identity for delta).

    Applying K to sampled values is the same zero-padded discrete convolution
    the FFT route computes; the matrix form is what the Newton and BdG
    Jacobians need.
    """
    key = _cache_key(kernel, grid)
    if key not in _MATRIX_CACHE:
        n = grid.n_points
        if kernel.is_delta:
            _MATRIX_CACHE[key] = np.eye(n)
        else:
            samples = kernel_samples(kernel, grid)
            idx = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
            _MATRIX_CACHE[key] = samples[n - 1 :][idx] * grid.spacing
    return _MATRIX_CACHE[key]


class ConvolutionPlan:
    """Cached FFT plan for repeated convolutions with one kernel on one grid."""

    def __init__(self, kernel: Kernel, grid: Grid):
        self.kernel = kernel
        self.grid = grid
        self.n = grid.n_points
        if kernel.is_delta:
            self._kernel_hat = None
        else:
            full = 3 * self.n - 2
            self._size = _fft.next_fast_len(full)
            samples = kernel_samples(kernel, grid)
            self._kernel_hat = _fft.rfft(samples, self._size)

    def apply(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values)
        if self._kernel_hat is None:
            return values.copy()
        if np.iscomplexobj(values):
            return self.apply(values.real) + 1j * self.apply(values.imag)
        fhat = _fft.rfft(values, self._size)
        full = _fft.irfft(fhat * self._kernel_hat, self._size)
        return full[self.n - 1 : 2 * self.n - 1] * self.grid.spacing


def convolve(kernel: Kernel, f, grid: Grid | None = None):
    """Zero-padded convolution (R * f)(x_i) = dx * sum_j R(x_i - x_j) f(x_j).

    `f` may be a GridFunction (grid taken from it) or an ndarray with an
    explicit grid. The delta kernel returns a copy of f. No periodic
    wrap-around: the trap breaks periodicity, so the field is extended by
    zero outside the box.
    """
    if isinstance(f, GridFunction):
        out = convolve(kernel, f.values, f.grid)
        return GridFunction(f.grid, out)
    if grid is None:
        raise DiscretizationError("convolve needs a grid when given a bare array")
    return ConvolutionPlan(kernel, grid).apply(np.asarray(f))


# --- parity helpers -----------------------------------------------------------


def reflect(values: np.ndarray) -> np.ndarray:
    """Parity image f(-x) on the symmetric grid."""
    return values[::-1]


def parity_residuals(grid: Grid, values: np.ndarray) -> tuple[float, float]:
    """Relative distances to the even and odd subspaces: (r_even, r_odd)."""
    scale = math.sqrt(grid.norm_sq(values))
    if scale == 0.0:
        return 0.0, 0.0
    mirrored = reflect(values)
    r_even = math.sqrt(grid.norm_sq(values - mirrored)) / (2.0 * scale)
    r_odd = math.sqrt(grid.norm_sq(values + mirrored)) / (2.0 * scale)
    return r_even, r_odd


# --- serialization ------------------------------------------------------------


def grid_function_to_csv(gf: GridFunction, path) -> None:
    """Write x, re, im columns. Floats use repr, so the roundtrip is lossless."""
    lines = ["x,re,im"]
    values = np.asarray(gf.values, dtype=complex)
    for x, v in zip(gf.grid.points, values):
        lines.append(f"{float(x)!r},{float(v.real)!r},{float(v.imag)!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def grid_function_from_csv(path) -> GridFunction:
    rows = Path(path).read_text().strip().splitlines()
    if not rows or rows[0] != "x,re,im":
        raise DiscretizationError(f"{path}: expected header 'x,re,im'")
    data = np.array([[float(c) for c in row.split(",")] for row in rows[1:]])
    x = data[:, 0]
    grid = _grid_from_points(x)
    values = data[:, 1] + 1j * data[:, 2]
    if np.all(data[:, 2] == 0.0):
        values = data[:, 1]
    return GridFunction(grid, values)


def grid_function_to_json(gf: GridFunction) -> str:
    values = np.asarray(gf.values, dtype=complex)
    payload = {
        "half_width": gf.grid.half_width,
        "spacing": gf.grid.spacing,
        "n_points": gf.grid.n_points,
        "values_re": values.real.tolist(),
        "values_im": values.imag.tolist(),
    }
    return json.dumps(payload)


def grid_function_from_json(text: str) -> GridFunction:
    payload = json.loads(text)
    grid = build_grid(payload["half_width"], payload["spacing"])
    if grid.n_points != payload["n_points"]:
        raise DiscretizationError("n_points inconsistent with half_width/spacing")
    re = np.asarray(payload["values_re"], dtype=float)
    im = np.asarray(payload["values_im"], dtype=float)
    values = re if not im.any() else re + 1j * im
    return GridFunction(grid, values)


def _grid_from_points(x: np.ndarray) -> Grid:
    if len(x) < 3:
        raise DiscretizationError("need at least 3 points to reconstruct a grid")
    # full-span quotient, not adjacent differences: x was synthesized as
    # spacing * arange, so neighbours differ by up to an ulp of the endpoint
    spacing = (x[-1] - x[0]) / (len(x) - 1)
    if not np.allclose(np.diff(x), spacing, rtol=0, atol=1e-9 * abs(spacing)):
        raise DiscretizationError("points are not uniformly spaced")
    if abs(x[0] + x[-1]) > 1e-9 * max(1.0, abs(x[-1])):
        raise DiscretizationError("points are not symmetric about 0")
    return build_grid(float(x[-1]), float(spacing))
