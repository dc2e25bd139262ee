"""Linear spectrum of the single-particle operator and the left/right basis.

The operator -(1/2) d^2/dx^2 + V(x) is discretized with the standard 3-point
stencil and homogeneous Dirichlet values outside the box. The two lowest
eigenmodes u0 (even) and u1 (odd) of the double well are near-degenerate; the
rotated combinations phi_left = (u0 - u1)/sqrt(2), phi_right = (u0 + u1)/sqrt(2)
localize in the two wells and carry the tunneling parameters
Omega = (omega0 + omega1)/2 and omega = (omega1 - omega0)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .discretization import (
    DiscretizationError,
    Grid,
    PotentialParams,
    potential_profile,
    reflect,
)


class SpectrumError(ValueError):
    """Raised for invalid eigensolver requests or degenerate spectra."""


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal FD form of -(1/2) d^2/dx^2 + V with Dirichlet ends."""

    grid: Grid
    diagonal: np.ndarray
    off_diagonal: np.ndarray

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diagonal * v
        out[:-1] += self.off_diagonal * v[1:]
        out[1:] += self.off_diagonal * v[:-1]
        return out

    def to_dense(self) -> np.ndarray:
        return (
            np.diag(self.diagonal)
            + np.diag(self.off_diagonal, 1)
            + np.diag(self.off_diagonal, -1)
        )


def discretize_operator(grid: Grid, potential) -> TridiagonalOperator:
    """Build the tridiagonal operator from PotentialParams or sampled values."""
    if isinstance(potential, PotentialParams):
        v = potential_profile(grid, potential)
    else:
        v = np.asarray(potential, dtype=float)
        if v.shape != (grid.n_points,):
            raise DiscretizationError(
                f"potential values have shape {v.shape}, expected ({grid.n_points},)"
            )
    dx2 = grid.spacing**2
    diagonal = 1.0 / dx2 + v
    off_diagonal = np.full(grid.n_points - 1, -0.5 / dx2)
    return TridiagonalOperator(grid=grid, diagonal=diagonal, off_diagonal=off_diagonal)


def lowest_eigenpairs(
    op: TridiagonalOperator, count: int = 2
) -> tuple[np.ndarray, np.ndarray]:
    """Lowest `count` eigenvalues and quadrature-normalized eigenvectors.

    Returns (omegas, modes) with modes[:, k] the k-th eigenvector. Eigenvalues
    above the potential floor at the box edge belong to the artificial
    Dirichlet box rather than the trap, so requesting them is an error.
    """
    if count < 1 or count > op.grid.n_points:
        raise SpectrumError(f"count {count} out of range for n={op.grid.n_points}")
    omegas, vecs = eigh_tridiagonal(
        op.diagonal, op.off_diagonal, select="i", select_range=(0, count - 1)
    )
    v_edge = min(op.diagonal[0], op.diagonal[-1]) - 1.0 / op.grid.spacing ** 2
    if np.any(omegas >= v_edge):
        raise SpectrumError(
            f"requested {count} modes but only trap-bound modes below the box edge "
            f"value {v_edge:.6g} are physical (eigenvalues {omegas})"
        )
    for k in range(count):
        norm = math.sqrt(op.grid.norm_sq(vecs[:, k]))
        vecs[:, k] /= norm
    return omegas, vecs


def eigen_residual(op: TridiagonalOperator, omega: float, mode: np.ndarray) -> float:
    """Quadrature-norm residual || A u - omega u ||."""
    r = op.matvec(mode.copy()) - omega * mode
    return math.sqrt(op.grid.norm_sq(r))


@dataclass(frozen=True)
class LinearBasis:
    """Two lowest modes plus the rotated left/right well basis."""

    grid: Grid
    omega0: float
    omega1: float
    u0: np.ndarray
    u1: np.ndarray
    phi_left: np.ndarray
    phi_right: np.ndarray

    @property
    def Omega(self) -> float:
        """Mean of the doublet."""
        return 0.5 * (self.omega0 + self.omega1)

    @property
    def omega(self) -> float:
        """Half-splitting of the doublet (tunneling rate)."""
        return 0.5 * (self.omega1 - self.omega0)

    def left_mass_fraction(self) -> float:
        x = self.grid.points
        mass = self.phi_left**2 * self.grid.weights
        return float(mass[x < 0].sum() + 0.5 * mass[x == 0].sum())


def rotated_basis(
    grid: Grid,
    omegas: np.ndarray,
    modes: np.ndarray,
    min_left_mass: float = 0.9,
) -> LinearBasis:
    """Fix mode signs and build the left/right basis.

    Sign conventions: u0 positive at x = 0, u1 with positive slope at x = 0.
    With these, (u0 - u1)/sqrt(2) is the left-well function. Degenerate or
    misordered eigenvalues are rejected; so is a basis that fails to localize
    (left mass fraction below `min_left_mass`), which signals that the
    potential is not an adequate double well.
    """
    omega0, omega1 = float(omegas[0]), float(omegas[1])
    if not omega1 > omega0 + 1e-12 * max(1.0, abs(omega0)):
        raise SpectrumError(
            f"doublet is degenerate or misordered: omega0={omega0}, omega1={omega1}"
        )
    u0 = modes[:, 0].copy()
    u1 = modes[:, 1].copy()
    c = grid.center_index
    if u0[c] < 0:
        u0 = -u0
    if u1[c + 1] - u1[c - 1] < 0:
        u1 = -u1
    phi_left = (u0 - u1) / math.sqrt(2.0)
    phi_right = (u0 + u1) / math.sqrt(2.0)
    basis = LinearBasis(
        grid=grid,
        omega0=omega0,
        omega1=omega1,
        u0=u0,
        u1=u1,
        phi_left=phi_left,
        phi_right=phi_right,
    )
    lm = basis.left_mass_fraction()
    if lm < min_left_mass:
        raise SpectrumError(
            f"left-well function is not localized: left mass fraction {lm:.3f} < {min_left_mass}"
        )
    mirror_err = math.sqrt(grid.norm_sq(basis.phi_right - reflect(basis.phi_left)))
    if mirror_err > 1e-6:
        raise SpectrumError(
            f"phi_right is not the mirror of phi_left (error {mirror_err:.2e}); "
            "potential appears asymmetric"
        )
    return basis


def default_basis(grid: Grid, params: PotentialParams | None = None) -> LinearBasis:
    """Convenience: operator + lowest doublet + rotation in one call."""
    params = params or PotentialParams()
    op = discretize_operator(grid, params)
    omegas, modes = lowest_eigenpairs(op, 2)
    return rotated_basis(grid, omegas, modes)
