"""Reduced two-mode model of the double well.

Projecting the field onto the left/right basis and keeping the
regime-relevant overlaps gives a planar Hamiltonian system for the
population imbalance z and relative phase theta:

    dz/dt     = 2 omega sqrt(1 - z^2) sin(theta)
    dtheta/dt = -2 omega z cos(theta)/sqrt(1 - z^2) - f(N) z
    f(N)      = s eta_z N + delta eta4 N^2

with eta_z = eta0 (case 1) or eta0 - eta1 (cases 2, 3). Everything
derivable from this system lives here: fixed points, the four critical
norms where asymmetric states appear or vanish, linearized stability,
branch chemical potentials, the asymmetric-branch norm quartic, and
phase-plane orbit integration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"
ASYMMETRIC = "asymmetric"
FAMILIES = (SYMMETRIC, ANTISYMMETRIC, ASYMMETRIC)

CENTER = "center"
SADDLE = "saddle"

SSB = "ssb"
RESTORING = "restoring"

# A state is only accepted as a fixed point if the vector field there is
# this small; asymmetric_z and the z=0 points satisfy it exactly.
FIXED_POINT_RESIDUAL_TOL = 1e-10

_HAMILTONIAN_DRIFT_TOL = 1e-8
_MAX_STEP_HALVINGS = 8


class TwoModeError(Exception):
    """Invalid two-mode parameters, states, or a failed orbit integration."""


@dataclass(frozen=True)
class ModeParams:
    """Coefficients of the reduced system.

    eta0, eta1, eta4 are stored already filtered by regime: case 1 sets
    eta1 = 0, case 3 sets eta4 = 0, so every formula below is uniform in
    the three cases. s and delta are the cubic/quintic signs, N the total
    norm, omega the tunneling half-splitting, Omega the mean mode energy.
    mu is optional and only consumed by the amplitude-level operations.
    """

    s: int
    delta: int
    N: float
    eta0: float
    eta1: float
    eta4: float
    omega: float
    Omega: float
    mu: float | None = None

    def __post_init__(self):
        if self.s not in (-1, 1) or self.delta not in (-1, 1):
            raise TwoModeError(f"signs must be +-1, got s={self.s}, delta={self.delta}")
        if not self.N > 0:
            raise TwoModeError(f"norm must be positive, got {self.N}")
        if not self.omega > 0:
            raise TwoModeError(f"omega must be positive, got {self.omega}")

    @property
    def eta_z(self) -> float:
        """Cubic coefficient of the imbalance dynamics (eta0 - eta1)."""
        return self.eta0 - self.eta1

    @property
    def eta_amp(self) -> float:
        """Cubic coefficient of the equal-amplitude branches (eta0 + eta1)."""
        return self.eta0 + self.eta1

    @property
    def omega0(self) -> float:
        return self.Omega - self.omega

    @property
    def omega1(self) -> float:
        return self.Omega + self.omega

    def coupling(self, N: float | None = None) -> float:
        """f(N) = s eta_z N + delta eta4 N^2, the nonlinear imbalance force."""
        n = self.N if N is None else N
        return self.s * self.eta_z * n + self.delta * self.eta4 * n * n

    def with_norm(self, N: float) -> "ModeParams":
        return replace(self, N=N)

    def with_mu(self, mu: float) -> "ModeParams":
        return replace(self, mu=mu)

    @classmethod
    def from_overlaps(cls, overlaps, basis, s: int, delta: int, N: float,
                      mu: float | None = None) -> "ModeParams":
        """Build params from an OverlapSet and LinearBasis, applying the
        regime filter (case 1 drops eta1, case 3 drops eta4)."""
        regime = overlaps.regime
        eta1 = 0.0 if regime == "case1" else overlaps.eta1
        eta4 = 0.0 if regime == "case3" else overlaps.eta4
        return cls(s=s, delta=delta, N=N, eta0=overlaps.eta0, eta1=eta1,
                   eta4=eta4, omega=basis.omega, Omega=basis.Omega, mu=mu)


@dataclass(frozen=True)
class TwoModeState:
    z: float
    theta: float

    def __post_init__(self):
        if abs(self.z) > 1:
            raise TwoModeError(f"|z| <= 1 required, got z={self.z}")


@dataclass(frozen=True)
class FixedPoint:
    state: TwoModeState
    family: str
    stability: str
    lambda_sq: float


@dataclass(frozen=True)
class CriticalNorms:
    """Norms where asymmetric fixed points appear or disappear.

    {n0, n1} are the symmetric-parent events (f = -2 omega) and {n2, n3}
    the antisymmetric-parent events (f = +2 omega), each sorted ascending;
    complex or non-positive roots are reported as None.
    """

    n0: float | None
    n1: float | None
    n2: float | None
    n3: float | None

    def __post_init__(self):
        for lo, hi in ((self.n0, self.n1), (self.n2, self.n3)):
            if lo is not None and hi is not None and lo > hi:
                raise TwoModeError("critical norm pairs must be ascending")

    def present(self) -> dict[str, float]:
        labels = ("n0", "n1", "n2", "n3")
        return {k: v for k, v in zip(labels, (self.n0, self.n1, self.n2, self.n3))
                if v is not None}


@dataclass(frozen=True)
class BifurcationPrediction:
    """One predicted pitchfork: parent family, event kind, norm, and the
    parent-branch chemical potential at that norm."""

    family: str
    kind: str
    norm: float
    mu: float


@dataclass(frozen=True)
class Orbit:
    t: np.ndarray
    z: np.ndarray
    theta: np.ndarray
    momentum: np.ndarray
    hamiltonian: np.ndarray
    dt: float


def reduced_rhs(state: TwoModeState, p: ModeParams) -> tuple[float, float]:
    """(dz/dt, dtheta/dt) of the reduced system."""
    z, theta = state.z, state.theta
    if abs(z) >= 1:
        raise TwoModeError(f"theta equation is singular at |z| = 1 (z = {z})")
    root = math.sqrt(1 - z * z)
    dz = 2 * p.omega * root * math.sin(theta)
    dtheta = -2 * p.omega * z * math.cos(theta) / root - p.coupling() * z
    return dz, dtheta


def hamiltonian(state: TwoModeState, p: ModeParams) -> float:
    """H = 2 omega sqrt(1-z^2) cos(theta) - (1/2) f(N) z^2."""
    z, theta = state.z, state.theta
    return 2 * p.omega * math.sqrt(1 - z * z) * math.cos(theta) \
        - 0.5 * p.coupling() * z * z


def momentum(state: TwoModeState, p: ModeParams) -> float:
    """p = dz/dt, the conjugate variable of the second-order form."""
    return 2 * p.omega * math.sqrt(1 - state.z ** 2) * math.sin(state.theta)


def phase_plane_rhs(z: float, mom: float, p: ModeParams,
                    cos_branch: int = 1) -> tuple[float, float]:
    """(dz/dt, dp/dt) of the second-order form.

    The square root stands for 2 omega sqrt(1-z^2) cos(theta), so it is
    valid on one sign branch of cos(theta) at a time; cos_branch supplies
    that sign.
    """
    if cos_branch not in (-1, 1):
        raise TwoModeError("cos_branch must be +-1")
    radicand = 4 * p.omega ** 2 * (1 - z * z) - mom * mom
    if radicand < -1e-12:
        raise TwoModeError("momentum outside the energy shell")
    root = math.sqrt(max(radicand, 0.0))
    return mom, -4 * p.omega ** 2 * z - p.coupling() * z * cos_branch * root


def asymmetric_z(p: ModeParams) -> list[TwoModeState]:
    """The pair of asymmetric fixed points, empty when z^2 < 0.

    z^2 = 1 - 4 omega^2 / f(N)^2; the states sit at theta = pi when
    f > 0 (antisymmetric parent) and theta = 0 when f < 0 (symmetric
    parent), which is the attachment consistent with the lambda^2 signs.
    """
    f = p.coupling()
    if f == 0 or abs(f) < 2 * p.omega:
        return []
    z_sq = 1 - 4 * p.omega ** 2 / (f * f)
    z = math.sqrt(max(z_sq, 0.0))
    theta = math.pi if f > 0 else 0.0
    return [TwoModeState(z, theta), TwoModeState(-z, theta)]


def _ascending_pair(quad: tuple[float, float, float]) -> tuple[float | None, float | None]:
    a, b, c = quad
    if a == 0.0:
        if b == 0.0:
            return None, None
        root = -c / b
        return (root if root > 0 else None), None
    roots = np.roots([a, b, c])
    cleaned = []
    for r in roots:
        if abs(r.imag) > 1e-12 * max(1.0, abs(r.real)):
            return None, None
        cleaned.append(float(r.real))
    lo, hi = sorted(cleaned)
    return (lo if lo > 0 else None), (hi if hi > 0 else None)


def critical_norms(p: ModeParams) -> CriticalNorms:
    """Solve f(N) = -2 omega for {n0, n1} and f(N) = +2 omega for {n2, n3}.

    Keeps the sign bookkeeping out of callers: negative and complex roots
    come back as None. In case 3 (eta4 = 0) each quadratic degenerates to
    the single root N = -+2 omega/(s eta_z).
    """
    a = p.delta * p.eta4
    b = p.s * p.eta_z
    sym_lo, sym_hi = _ascending_pair((a, b, 2 * p.omega))
    anti_lo, anti_hi = _ascending_pair((a, b, -2 * p.omega))
    # a negative root is absent, not clipped; _ascending_pair already drops it
    return CriticalNorms(n0=sym_lo, n1=sym_hi, n2=anti_lo, n3=anti_hi)


def _classify_state(state: TwoModeState) -> str:
    if state.z == 0.0:
        phase = math.cos(state.theta)
        if phase > 0.5:
            return SYMMETRIC
        if phase < -0.5:
            return ANTISYMMETRIC
        raise TwoModeError(f"z = 0 fixed point needs theta near 0 or pi, got {state.theta}")
    return ASYMMETRIC


def fixed_point_stability(state: TwoModeState, p: ModeParams) -> FixedPoint:
    """Linearized eigenvalue-squared of a fixed point and its type.

    symmetric:      lambda^2 = -4 omega^2 - 2 omega f(N)
    antisymmetric:  lambda^2 = +2 omega f(N) - 4 omega^2
    asymmetric:     lambda^2 = 4 omega^2 - f(N)^2  (= -f^2 z0^2 <= 0)
    """
    res = reduced_rhs(state, p)
    if max(abs(res[0]), abs(res[1])) > FIXED_POINT_RESIDUAL_TOL:
        raise TwoModeError(
            f"not a fixed point: |rhs| = {max(abs(res[0]), abs(res[1])):.3e}")
    family = _classify_state(state)
    f = p.coupling()
    if family == SYMMETRIC:
        lam_sq = -4 * p.omega ** 2 - 2 * p.omega * f
    elif family == ANTISYMMETRIC:
        lam_sq = 2 * p.omega * f - 4 * p.omega ** 2
    else:
        lam_sq = 4 * p.omega ** 2 - f * f
    stability = SADDLE if lam_sq > 0 else CENTER
    return FixedPoint(state=state, family=family, stability=stability,
                      lambda_sq=lam_sq)


def fixed_point_census(p: ModeParams) -> list[FixedPoint]:
    """All fixed points on the theta = 0, pi sections at this norm."""
    points = [TwoModeState(0.0, 0.0), TwoModeState(0.0, math.pi)]
    points.extend(asymmetric_z(p))
    return [fixed_point_stability(s, p) for s in points]


def parent_mu(p: ModeParams, family: str, N: float | None = None) -> float:
    """Chemical potential of an equal-amplitude parent branch at norm N:
    mu = omega_parent + s eta_amp N/2 + delta eta4 N^2/4."""
    if family not in (SYMMETRIC, ANTISYMMETRIC):
        raise TwoModeError(f"parent family must be symmetric or antisymmetric, got {family}")
    n = p.N if N is None else N
    base = p.omega0 if family == SYMMETRIC else p.omega1
    return base + p.s * p.eta_amp * n / 2 + p.delta * p.eta4 * n * n / 4


def asymmetric_mu(p: ModeParams, N: float | None = None) -> float:
    """Chemical potential of the asymmetric branch at norm N:
    mu = Omega + s eta0 N + delta eta4 N^2 - delta eta4 omega^2 / D^2 with
    D = s eta_z + delta eta4 N. Only meaningful where |f(N)| >= 2 omega."""
    n = p.N if N is None else N
    d = p.s * p.eta_z + p.delta * p.eta4 * n
    if d == 0:
        raise TwoModeError("asymmetric branch relation is singular at s eta_z + delta eta4 N = 0")
    return p.Omega + p.s * p.eta0 * n + p.delta * p.eta4 * n * n \
        - p.delta * p.eta4 * p.omega ** 2 / (d * d)


def amplitude_existence_bound(p: ModeParams, family: str) -> float:
    """Fold chemical potential of an equal-amplitude branch: the mu at which
    its two rho^2 roots merge, omega_parent + s_delta eta_amp^2/(4 eta4)."""
    if p.eta4 == 0.0:
        raise TwoModeError("no amplitude fold without a quintic term")
    base = p.omega0 if family == SYMMETRIC else p.omega1
    return base - p.eta_amp ** 2 / (4 * p.delta * p.eta4)


def stationary_amplitudes(p: ModeParams, family: str) -> list[tuple[float, float]]:
    """Equal-amplitude stationary solutions (rho_L^2, rho_R^2) at p.mu.

    Solves delta eta4 r^2 + s eta_amp r - (mu - omega_parent) = 0 for
    r = rho^2 and keeps the real non-negative roots.
    """
    if p.mu is None:
        raise TwoModeError("stationary_amplitudes needs mu set on ModeParams")
    if family not in (SYMMETRIC, ANTISYMMETRIC):
        raise TwoModeError(f"family must be symmetric or antisymmetric, got {family}")
    base = p.omega0 if family == SYMMETRIC else p.omega1
    rhs = p.mu - base
    if p.eta4 == 0.0:
        if p.eta_amp == 0.0:
            return []
        roots = [rhs / (p.s * p.eta_amp)]
    else:
        disc = p.eta_amp ** 2 + 4 * p.delta * p.eta4 * rhs
        if disc < 0:
            return []
        sq = math.sqrt(disc)
        roots = [(-p.s * p.eta_amp + sq) / (2 * p.delta * p.eta4),
                 (-p.s * p.eta_amp - sq) / (2 * p.delta * p.eta4)]
    out = [(r, r) for r in sorted(roots) if r >= 0]
    return out


@dataclass(frozen=True)
class QuarticResult:
    coefficients: np.ndarray
    roots: tuple[float, ...]
    discarded: dict[str, int]


def asymmetric_norm_coefficients(p: ModeParams, mu: float | None = None) -> np.ndarray:
    """Descending coefficients of the asymmetric-branch norm polynomial,
    the elimination of z from the stationary projected equations:
    D^2 [(Omega - mu) + s eta0 N + delta eta4 N^2] = delta eta4 omega^2."""
    m = p.mu if mu is None else mu
    if m is None:
        raise TwoModeError("asymmetric norm polynomial needs mu")
    big_m = m - p.Omega
    e = p.eta_z
    s, d, e0, e4 = p.s, p.delta, p.eta0, p.eta4
    return np.array([
        d * e4 ** 3,
        s * e4 ** 2 * (e0 + 2 * e),
        -e4 ** 2 * big_m + 2 * d * e0 * e * e4 + d * e4 * e ** 2,
        -2 * s * d * e * e4 * big_m + s * e0 * e ** 2,
        -big_m * e ** 2 - d * e4 * p.omega ** 2,
    ])


def asymmetric_norm_polynomial(p: ModeParams, mu: float | None = None) -> QuarticResult:
    """Real positive roots of the asymmetric norm polynomial that survive
    back-substitution (|f(N)| >= 2 omega so z^2 >= 0). Discarded roots are
    counted, not returned."""
    coeffs = asymmetric_norm_coefficients(p, mu)
    lead = np.flatnonzero(np.abs(coeffs) > 0)
    if lead.size == 0:
        return QuarticResult(coeffs, (), {"complex": 0, "nonpositive": 0, "invalid_z": 0})
    trimmed = coeffs[lead[0]:]
    discarded = {"complex": 0, "nonpositive": 0, "invalid_z": 0}
    kept = []
    for root in np.roots(trimmed) if trimmed.size > 1 else []:
        if abs(root.imag) > 1e-9 * max(1.0, abs(root.real)):
            discarded["complex"] += 1
            continue
        n = float(root.real)
        if n <= 0:
            discarded["nonpositive"] += 1
            continue
        if abs(p.coupling(n)) < 2 * p.omega:
            discarded["invalid_z"] += 1
            continue
        kept.append(n)
    return QuarticResult(coeffs, tuple(sorted(kept)), discarded)


def predicted_bifurcations(p: ModeParams) -> list[BifurcationPrediction]:
    """Pitchforks of the parent branches implied by the critical norms,
    each mapped to the parent-branch chemical potential."""
    norms = critical_norms(p)
    out = []
    for pair, family in (((norms.n0, norms.n1), SYMMETRIC),
                         ((norms.n2, norms.n3), ANTISYMMETRIC)):
        lo, hi = pair
        if lo is not None and hi is not None:
            out.append(BifurcationPrediction(family, SSB, lo, parent_mu(p, family, lo)))
            out.append(BifurcationPrediction(family, RESTORING, hi, parent_mu(p, family, hi)))
        elif (lo is None) != (hi is None):
            n = lo if lo is not None else hi
            out.append(BifurcationPrediction(family, SSB, n, parent_mu(p, family, n)))
    return sorted(out, key=lambda b: b.norm)


def _rk4_step(z: float, theta: float, dt: float, p: ModeParams) -> tuple[float, float]:
    def rhs(zz, tt):
        return reduced_rhs(TwoModeState(zz, tt), p)

    k1 = rhs(z, theta)
    k2 = rhs(z + 0.5 * dt * k1[0], theta + 0.5 * dt * k1[1])
    k3 = rhs(z + 0.5 * dt * k2[0], theta + 0.5 * dt * k2[1])
    k4 = rhs(z + dt * k3[0], theta + dt * k3[1])
    z_new = z + dt * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]) / 6
    theta_new = theta + dt * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]) / 6
    return z_new, theta_new


def integrate_orbit(initial: TwoModeState, p: ModeParams, t_end: float,
                    dt: float = 1e-2) -> Orbit:
    """Fixed-step RK4 orbit with a Hamiltonian drift monitor.

    The step is halved and the run restarted whenever the relative drift
    exceeds 1e-8; hitting the |z| = 1 singularity aborts with a diagnostic.
    """
    if abs(initial.z) >= 1:
        raise TwoModeError("orbit must start with |z| < 1")
    if dt <= 0 or t_end <= 0:
        raise TwoModeError("dt and t_end must be positive")
    h_ref = hamiltonian(initial, p)
    scale = max(abs(h_ref), 2 * p.omega)
    step = dt
    for _ in range(_MAX_STEP_HALVINGS + 1):
        n_steps = max(1, int(round(t_end / step)))
        ts = np.linspace(0.0, n_steps * step, n_steps + 1)
        zs = np.empty(n_steps + 1)
        thetas = np.empty(n_steps + 1)
        zs[0], thetas[0] = initial.z, initial.theta
        ok = True
        for i in range(n_steps):
            try:
                zs[i + 1], thetas[i + 1] = _rk4_step(zs[i], thetas[i], step, p)
            except TwoModeError as exc:
                raise TwoModeError(
                    f"orbit reached the |z| = 1 singularity near t = {ts[i]:.4g}: {exc}"
                ) from exc
            if abs(zs[i + 1]) >= 1:
                raise TwoModeError(
                    f"orbit reached |z| = 1 at t = {ts[i + 1]:.4g}")
            h_now = hamiltonian(TwoModeState(zs[i + 1], thetas[i + 1]), p)
            if abs(h_now - h_ref) > _HAMILTONIAN_DRIFT_TOL * scale:
                ok = False
                break
        if ok:
            hs = np.array([hamiltonian(TwoModeState(z, th), p)
                           for z, th in zip(zs, thetas)])
            moms = np.array([momentum(TwoModeState(z, th), p)
                             for z, th in zip(zs, thetas)])
            return Orbit(t=ts, z=zs, theta=thetas, momentum=moms,
                         hamiltonian=hs, dt=step)
        step *= 0.5
    raise TwoModeError(
        f"Hamiltonian drift above {_HAMILTONIAN_DRIFT_TOL} even at dt = {step}")
