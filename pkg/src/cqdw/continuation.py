"""Stationary states and branch tracing for the nonlocal cubic-quintic model.

A stationary state solves L psi - mu psi + s (R1 * psi^2) psi
+ delta (R2 * psi^4) psi = 0 with L the linear double-well operator. States
can be taken real; Newton's method with the exact dense Jacobian (including
the nonlocal Frechet terms) converges quadratically from nearby guesses.
Branches are traced in (psi, mu) with pseudo-arclength steps so folds are
crossed without parameter switching, and pitchforks are located by a sign
change of the Jacobian determinant restricted to the parity subspace that
the daughter branch breaks into.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .discretization import (
    ConvolutionPlan,
    Grid,
    GridFunction,
    Kernel,
    PotentialParams,
    kernel_matrix,
    parity_residuals,
    reflect,
)
from .spectrum import discretize_operator
from .twomode import ANTISYMMETRIC, ASYMMETRIC, SYMMETRIC

PITCHFORK = "pitchfork"
FOLD = "fold"
MERGE = "merge"

# Converged states satisfy max|F| <= this bound.
RESIDUAL_TOL = 1e-10
# Reflection residual below which a state counts as even or odd.
PARENT_PARITY_TOL = 1e-6
# Newton iterates whose norm falls below this are the trivial solution.
TRIVIAL_NORM = 1e-8

_GROW = 1.4
_SHRINK = 0.5
_FAST_ITERS = 4


class ContinuationError(RuntimeError):
    """Raised for invalid stationary problems or failed branch operations."""


class NewtonError(ContinuationError):
    """Newton failure diagnostic carrying the residual history.

    `trivial` marks divergence to the zero solution rather than
    non-convergence; callers seeding from linear modes use it to distinguish
    a bad amplitude guess from a genuinely stuck iteration.
    """

    def __init__(self, message: str, residual_history: list[float], trivial: bool = False):
        super().__init__(message)
        self.residual_history = residual_history
        self.trivial = trivial


class StationaryProblem:
    """Grid, potential, kernels and signs with cached dense operators.

    The tridiagonal linear operator and the quadrature kernel matrices are
    built once; residuals use the FFT convolution plans and Jacobians use the
    dense matrices.
    """

    def __init__(
        self,
        grid: Grid,
        potential: PotentialParams,
        kernel_cubic: Kernel,
        kernel_quintic: Kernel,
        s: int,
        delta: int,
    ):
        if s not in (-1, 1) or delta not in (-1, 1):
            raise ContinuationError(f"signs must be +-1, got s={s}, delta={delta}")
        self.grid = grid
        self.potential = potential
        self.kernel_cubic = kernel_cubic
        self.kernel_quintic = kernel_quintic
        self.s = s
        self.delta = delta
        self.operator = discretize_operator(grid, potential)
        self._dense_l = self.operator.to_dense()
        self._k1 = kernel_matrix(kernel_cubic, grid)
        self._k2 = kernel_matrix(kernel_quintic, grid)
        self._plan1 = ConvolutionPlan(kernel_cubic, grid)
        self._plan2 = ConvolutionPlan(kernel_quintic, grid)

    def nonlinear_potential(self, psi: np.ndarray) -> np.ndarray:
        """Pointwise s (R1 * psi^2) + delta (R2 * psi^4) for a real profile."""
        return self.nonlinear_potential_density(psi**2)

    def nonlinear_potential_density(self, density: np.ndarray) -> np.ndarray:
        """Same contraction from |psi|^2, usable for complex fields."""
        return self.s * self._plan1.apply(density) + self.delta * self._plan2.apply(density**2)

    def residual(self, psi: np.ndarray, mu: float) -> np.ndarray:
        psi = np.asarray(psi, dtype=float)
        return self.operator.matvec(psi.copy()) - mu * psi + self.nonlinear_potential(psi) * psi

    def jacobian(self, psi: np.ndarray, mu: float) -> np.ndarray:
        """Dense Frechet derivative of the residual at a real state.

        Besides the local diagonal, differentiating through the convolutions
        gives 2 s psi_i K1[i,j] psi_j + 4 delta psi_i K2[i,j] psi_j^3, which
        is not symmetric; downstream eigen/determinant logic must not assume
        symmetry.
        """
        psi = np.asarray(psi, dtype=float)
        jac = self._dense_l - mu * np.eye(self.grid.n_points)
        jac += np.diag(self.nonlinear_potential(psi))
        jac += 2.0 * self.s * (psi[:, None] * self._k1 * psi[None, :])
        jac += 4.0 * self.delta * (psi[:, None] * self._k2 * (psi**3)[None, :])
        return jac

    def norm(self, psi: np.ndarray) -> float:
        return self.grid.norm_sq(np.asarray(psi))


def make_problem(
    grid: Grid,
    potential: PotentialParams,
    kernel_cubic: Kernel,
    kernel_quintic: Kernel,
    s: int,
    delta: int,
) -> StationaryProblem:
    return StationaryProblem(grid, potential, kernel_cubic, kernel_quintic, s, delta)


def stationary_residual(problem: StationaryProblem, psi, mu: float) -> np.ndarray:
    """Residual of the stationary equation; zero field maps to zero."""
    if isinstance(psi, GridFunction):
        psi = psi.values
    return problem.residual(np.real(np.asarray(psi, dtype=complex)), mu)


def classify_symmetry(grid: Grid, psi: np.ndarray) -> str:
    """Label by reflection residual: even, odd, or neither.

    Residuals at most 1e-6 count as the parent parity; anything measurably
    off both parities is asymmetric. Converged daughter states sit well above
    1e-3 except in the immediate vicinity of their birth.
    """
    r_even, r_odd = parity_residuals(grid, np.asarray(psi))
    if r_even <= PARENT_PARITY_TOL:
        return SYMMETRIC
    if r_odd <= PARENT_PARITY_TOL:
        return ANTISYMMETRIC
    return ASYMMETRIC


@dataclass(frozen=True)
class StationaryState:
    """Converged real stationary profile with its labels."""

    psi: GridFunction
    mu: float
    norm: float
    symmetry: str
    residual: float

    def reflected(self) -> np.ndarray:
        return reflect(self.psi.values)


@dataclass(frozen=True)
class BranchEvent:
    kind: str
    mu: float
    norm: float

    def __post_init__(self):
        if self.kind not in (PITCHFORK, FOLD, MERGE):
            raise ContinuationError(f"unknown event kind {self.kind!r}")


@dataclass
class Branch:
    """Ordered states plus the events met while tracing.

    `termination` records why tracing stopped: mu_range, norm_cap, max_steps,
    merge, or newton_failure (partial results are still returned).
    """

    states: list[StationaryState] = field(default_factory=list)
    events: list[BranchEvent] = field(default_factory=list)
    termination: str = ""

    def mu_values(self) -> np.ndarray:
        return np.array([s.mu for s in self.states])

    def norms(self) -> np.ndarray:
        return np.array([s.norm for s in self.states])

    def symmetry(self) -> str:
        return self.states[0].symmetry if self.states else ""


@dataclass(frozen=True)
class NewtonSettings:
    tol: float = RESIDUAL_TOL
    max_iter: int = 40
    trivial_norm: float = TRIVIAL_NORM

    def __post_init__(self):
        if self.tol <= 0 or self.max_iter < 1:
            raise ContinuationError("Newton tolerance and iteration cap must be positive")


@dataclass(frozen=True)
class ContinuationSettings:
    """Trace window and arclength bounds for continue_branch."""

    mu_min: float
    mu_max: float
    norm_cap: float = 12.0
    ds_min: float = 1e-3
    ds_max: float = 5e-2
    ds_init: float = 1e-2
    max_steps: int = 3000
    direction: int = 1
    newton: NewtonSettings = field(default_factory=NewtonSettings)

    def __post_init__(self):
        if not (self.mu_min < self.mu_max):
            raise ContinuationError(f"empty mu range [{self.mu_min}, {self.mu_max}]")
        if not (0 < self.ds_min <= self.ds_init <= self.ds_max):
            raise ContinuationError(
                f"need 0 < ds_min <= ds_init <= ds_max, got "
                f"({self.ds_min}, {self.ds_init}, {self.ds_max})"
            )
        if self.direction not in (-1, 1):
            raise ContinuationError(f"direction must be +-1, got {self.direction}")
        if self.norm_cap <= 0 or self.max_steps < 1:
            raise ContinuationError("norm cap and step cap must be positive")


def make_state(problem: StationaryProblem, psi: np.ndarray, mu: float) -> StationaryState:
    psi = np.asarray(psi, dtype=float)
    res = float(np.max(np.abs(problem.residual(psi, mu))))
    return StationaryState(
        psi=GridFunction(problem.grid, psi),
        mu=float(mu),
        norm=problem.norm(psi),
        symmetry=classify_symmetry(problem.grid, psi),
        residual=res,
    )


def newton_solve(
    problem: StationaryProblem,
    guess,
    mu: float,
    settings: NewtonSettings | None = None,
) -> StationaryState:
    """Solve the stationary equation at fixed mu by damped-free Newton.

    Raises NewtonError with the residual history on non-convergence, and with
    trivial=True when the iteration lands on the zero solution.
    """
    settings = settings or NewtonSettings()
    if isinstance(guess, GridFunction):
        guess = guess.values
    psi = np.real(np.asarray(guess, dtype=complex)).copy()
    if psi.shape != (problem.grid.n_points,):
        raise ContinuationError(
            f"guess has shape {psi.shape}, expected ({problem.grid.n_points},)"
        )
    history: list[float] = []
    for _ in range(settings.max_iter + 1):
        r = problem.residual(psi, mu)
        rn = float(np.max(np.abs(r)))
        history.append(rn)
        if not math.isfinite(rn):
            raise NewtonError("Newton residual is not finite", history)
        if rn <= settings.tol:
            if problem.norm(psi) < settings.trivial_norm:
                raise NewtonError(
                    f"Newton converged to the trivial zero state at mu={mu:.6g}",
                    history,
                    trivial=True,
                )
            return make_state(problem, psi, mu)
        if len(history) > settings.max_iter:
            break
        psi += np.linalg.solve(problem.jacobian(psi, mu), -r)
    raise NewtonError(
        f"Newton did not reach {settings.tol:g} within {settings.max_iter} iterations "
        f"at mu={mu:.6g} (residuals {history[0]:.3g} -> {history[-1]:.3g})",
        history,
    )


def seed_from_mode(
    problem: StationaryProblem,
    mode: np.ndarray,
    omega_k: float,
    delta_mu: float | None = None,
    seed_norm: float = 1e-3,
    settings: NewtonSettings | None = None,
) -> StationaryState:
    """Converge the small-amplitude state branching from a linear mode.

    Near the linear limit mu = omega_k + s c N with c the self-overlap of the
    mode density through the cubic kernel, so the guess amplitude is matched
    to the requested mu offset (or, when delta_mu is omitted, to a norm of
    about seed_norm). A mismatched side lands in the trivial basin, hence the
    sign check.
    """
    mode = np.asarray(mode, dtype=float)
    density = mode**2
    c = float(problem.grid.integrate(density * problem._plan1.apply(density)))
    c /= problem.norm(mode) ** 2
    if delta_mu is None:
        delta_mu = problem.s * c * seed_norm
    if problem.s * delta_mu <= 0:
        raise ContinuationError(
            f"mu offset {delta_mu:.3g} is on the trivial side of the linear "
            f"eigenvalue for s={problem.s}"
        )
    amp_sq = delta_mu / (problem.s * c) / problem.norm(mode)
    guess = math.sqrt(amp_sq) * mode
    return newton_solve(problem, guess, omega_k + delta_mu, settings)


def _weighted_dot(grid: Grid, f: np.ndarray, g: np.ndarray) -> float:
    return float(grid.integrate(f * g))


def _tangent_from_jacobian(
    problem: StationaryProblem, state: StationaryState, direction: int
) -> tuple[np.ndarray, float]:
    """Unit tangent (t_psi, t_mu) of the solution curve, oriented by dmu sign."""
    psi = state.psi.values.real
    # dF/dmu = -psi, so the mu-derivative of the profile solves J dpsi = psi.
    dpsi = np.linalg.solve(problem.jacobian(psi, state.mu), psi)
    scale = math.sqrt(problem.grid.norm_sq(dpsi) + 1.0)
    t_psi, t_mu = dpsi / scale, 1.0 / scale
    if direction * t_mu < 0:
        t_psi, t_mu = -t_psi, -t_mu
    return t_psi, t_mu


def _corrector(
    problem: StationaryProblem,
    psi: np.ndarray,
    mu: float,
    t_psi: np.ndarray,
    t_mu: float,
    settings: NewtonSettings,
) -> tuple[np.ndarray, float, int]:
    """Newton on the bordered system: residual plus the tangent hyperplane.

    The constraint <t_psi, psi - psi_pred> + t_mu (mu - mu_pred) = 0 is
    anchored at the predictor passed in via (psi, mu), so its initial value is
    zero and stays in the hyperplane through the predictor.
    """
    grid = problem.grid
    n = grid.n_points
    psi_pred, mu_pred = psi.copy(), mu
    bordered = np.empty((n + 1, n + 1))
    rhs = np.empty(n + 1)
    for iteration in range(settings.max_iter + 1):
        r = problem.residual(psi, mu)
        g = _weighted_dot(grid, t_psi, psi - psi_pred) + t_mu * (mu - mu_pred)
        rn = float(np.max(np.abs(r)))
        if not math.isfinite(rn):
            raise NewtonError("corrector residual is not finite", [])
        if rn <= settings.tol and abs(g) <= settings.tol:
            return psi, mu, iteration
        if iteration == settings.max_iter:
            break
        bordered[:n, :n] = problem.jacobian(psi, mu)
        bordered[:n, n] = -psi
        bordered[n, :n] = t_psi * grid.weights
        bordered[n, n] = t_mu
        rhs[:n] = -r
        rhs[n] = -g
        step = np.linalg.solve(bordered, rhs)
        psi = psi + step[:n]
        mu = mu + step[n]
    raise NewtonError(
        f"arclength corrector stalled at mu={mu:.6g} (last residual {rn:.3g})", []
    )


def _asymmetry_part(psi: np.ndarray, parent_parity: str) -> np.ndarray:
    """Component of psi with the parity the parent branch does not have."""
    mirrored = reflect(psi)
    if parent_parity == "even":
        return 0.5 * (psi - mirrored)
    return 0.5 * (psi + mirrored)


class _MergeTracker:
    """Detects an asymmetric branch rejoining its parent-parity branch.

    The asymmetry component is projected on the seed's own asymmetry shape;
    a sign change of that projection means the trace passed through the
    parent onto the mirror daughter, and the crossing is the merge point.
    A direct landing (parity residual at the parent tolerance) also counts.
    """

    def __init__(self, grid: Grid, seed: StationaryState):
        r_even, r_odd = parity_residuals(grid, seed.psi.values.real)
        self.grid = grid
        self.parent_parity = "even" if r_even < r_odd else "odd"
        witness = _asymmetry_part(seed.psi.values.real, self.parent_parity)
        self.witness = witness / math.sqrt(grid.norm_sq(witness))
        self.last_sign = 1.0

    def projection(self, psi: np.ndarray) -> float:
        return _weighted_dot(self.grid, _asymmetry_part(psi, self.parent_parity), self.witness)

    def crossed(self, state: StationaryState) -> bool:
        s = self.projection(state.psi.values.real)
        flipped = s * self.last_sign < 0
        if s != 0.0:
            self.last_sign = math.copysign(1.0, s)
        return flipped or state.symmetry != ASYMMETRIC


def _refine_merge(
    problem: StationaryProblem,
    tracker: _MergeTracker,
    a: StationaryState,
    b: StationaryState,
    settings: NewtonSettings,
) -> StationaryState:
    """Bisect the asymmetry-projection crossing down to the merge point.

    The bracket width is measured in the profile norm, not in mu: the branch
    meets its parent at a quadratic mu extremum, so the two bracket ends can
    share mu to 1e-4 while still sitting far apart on either side.
    """
    sign_a = math.copysign(1.0, tracker.projection(a.psi.values.real))
    for _ in range(60):
        gap = math.sqrt(problem.grid.norm_sq(b.psi.values.real - a.psi.values.real))
        if gap <= 1e-4 * (1.0 + math.sqrt(max(a.norm, b.norm))):
            break
        mid = _segment_state(problem, a, b, 0.5, settings)
        if math.copysign(1.0, tracker.projection(mid.psi.values.real)) == sign_a:
            a = mid
        else:
            b = mid
    return _segment_state(problem, a, b, 0.5, settings)


def continue_branch(
    problem: StationaryProblem,
    seed: StationaryState,
    settings: ContinuationSettings,
) -> Branch:
    """Trace the branch through folds by pseudo-arclength continuation.

    Steps adapt inside [ds_min, ds_max]: fast Newton convergence grows the
    step, failure shrinks and retries, and shrinking below ds_min aborts with
    the partial branch. Tracing stops at the mu window, the norm cap, a merge
    back onto a parent-parity branch, or the step budget. Fold events are
    recorded where the mu direction reverses; pitchfork events are found
    separately by detect_pitchfork.
    """
    branch = Branch(states=[seed])
    merges = _MergeTracker(problem.grid, seed) if seed.symmetry == ASYMMETRIC else None
    t_psi, t_mu = _tangent_from_jacobian(problem, seed, settings.direction)
    ds = settings.ds_init
    mu_dir = 0
    while len(branch.states) <= settings.max_steps:
        last = branch.states[-1]
        psi_last = last.psi.values.real
        stepped = None
        while True:
            try:
                stepped = _corrector(
                    problem,
                    psi_last + ds * t_psi,
                    last.mu + ds * t_mu,
                    t_psi,
                    t_mu,
                    settings.newton,
                )
                break
            except NewtonError:
                ds *= _SHRINK
                if ds < settings.ds_min:
                    branch.termination = "newton_failure"
                    return branch
        psi_new, mu_new, iters = stepped
        state = make_state(problem, psi_new, mu_new)
        branch.states.append(state)

        new_dir = int(math.copysign(1.0, state.mu - last.mu)) if state.mu != last.mu else mu_dir
        folded = mu_dir != 0 and new_dir != 0 and new_dir != mu_dir
        if folded:
            branch.events.append(BranchEvent(FOLD, last.mu, last.norm))
        mu_dir = new_dir

        if merges is not None and merges.crossed(state):
            # A mu reversal in the same step is the merge tangency itself,
            # not a separate fold.
            if folded:
                branch.events.pop()
            merged = _refine_merge(problem, merges, last, state, settings.newton)
            branch.states[-1] = merged
            branch.events.append(BranchEvent(MERGE, merged.mu, merged.norm))
            branch.termination = "merge"
            return branch
        if not (settings.mu_min <= state.mu <= settings.mu_max):
            branch.termination = "mu_range"
            return branch
        if state.norm > settings.norm_cap:
            branch.termination = "norm_cap"
            return branch

        # Secant tangent follows the curve through folds without re-solving.
        d_psi = state.psi.values.real - psi_last
        d_mu = state.mu - last.mu
        scale = math.sqrt(problem.grid.norm_sq(d_psi) + d_mu**2)
        t_psi, t_mu = d_psi / scale, d_mu / scale
        if iters <= _FAST_ITERS:
            ds = min(ds * _GROW, settings.ds_max)
    branch.termination = "max_steps"
    return branch


# --- pitchfork detection --------------------------------------------------------


def _parity_basis(grid: Grid, parity: str) -> np.ndarray:
    """Orthonormal coordinate basis of the even or odd reflection subspace."""
    n = grid.n_points
    m = n // 2
    inv = math.sqrt(0.5)
    cols = []
    if parity == "even":
        for i in range(m):
            col = np.zeros(n)
            col[i] = col[n - 1 - i] = inv
            cols.append(col)
        center = np.zeros(n)
        center[m] = 1.0
        cols.append(center)
    else:
        for i in range(m):
            col = np.zeros(n)
            col[i], col[n - 1 - i] = inv, -inv
            cols.append(col)
    return np.column_stack(cols)


def _breaking_parity(symmetry: str) -> str:
    # A pitchfork adds a component of the parity the parent does not have.
    if symmetry == SYMMETRIC:
        return "odd"
    if symmetry == ANTISYMMETRIC:
        return "even"
    raise ContinuationError("pitchfork detection needs an even or odd parent branch")


def _restricted_detsign(
    problem: StationaryProblem, state: StationaryState, basis: np.ndarray
) -> float:
    jac = problem.jacobian(state.psi.values.real, state.mu)
    block = basis.T @ jac @ basis
    sign, _ = np.linalg.slogdet(block)
    return sign


@dataclass(frozen=True)
class PitchforkEvent:
    """Refined bifurcation point with the critical direction for seeding."""

    event: BranchEvent
    state: StationaryState
    direction: np.ndarray


def _segment_state(
    problem: StationaryProblem,
    a: StationaryState,
    b: StationaryState,
    t: float,
    settings: NewtonSettings,
) -> StationaryState:
    """On-branch state near the convex combination of two neighbours.

    The corrector constraint uses the secant of the segment, so the result is
    the branch point closest to the interpolant even where mu is not monotone.
    """
    pa, pb = a.psi.values.real, b.psi.values.real
    d_psi, d_mu = pb - pa, b.mu - a.mu
    scale = math.sqrt(problem.grid.norm_sq(d_psi) + d_mu**2)
    psi, mu, _ = _corrector(
        problem,
        (1 - t) * pa + t * pb,
        (1 - t) * a.mu + t * b.mu,
        d_psi / scale,
        d_mu / scale,
        settings,
    )
    return make_state(problem, psi, mu)


def detect_pitchfork(
    problem: StationaryProblem,
    branch: Branch,
    settings: NewtonSettings | None = None,
    mu_resolution: float = 1e-4,
) -> list[PitchforkEvent]:
    """Locate parity-breaking bifurcations along an even or odd branch.

    The indicator is the determinant sign of the Jacobian restricted to the
    parity subspace complementary to the parent (the Jacobian block-
    diagonalizes over reflection parity at a definite-parity state). Each sign
    change between neighbouring states is refined by bisection along the
    branch segment until the bracket is below mu_resolution, and the critical
    eigenvector is returned as the daughter seeding direction.
    """
    settings = settings or NewtonSettings()
    if len(branch.states) < 2:
        return []
    basis = _parity_basis(problem.grid, _breaking_parity(branch.symmetry()))
    signs = [_restricted_detsign(problem, s, basis) for s in branch.states]
    found: list[PitchforkEvent] = []
    for k in range(len(branch.states) - 1):
        if signs[k] == 0.0 or signs[k] * signs[k + 1] >= 0:
            continue
        lo_state, hi_state = branch.states[k], branch.states[k + 1]
        lo_sign = signs[k]
        for _ in range(64):
            if abs(hi_state.mu - lo_state.mu) <= mu_resolution:
                break
            mid = _segment_state(problem, lo_state, hi_state, 0.5, settings)
            if _restricted_detsign(problem, mid, basis) == lo_sign:
                lo_state = mid
            else:
                hi_state = mid
        critical = _segment_state(problem, lo_state, hi_state, 0.5, settings)
        jac = problem.jacobian(critical.psi.values.real, critical.mu)
        block = basis.T @ jac @ basis
        eigvals, eigvecs = np.linalg.eig(block)
        idx = int(np.argmin(np.abs(eigvals)))
        direction = basis @ np.real(eigvecs[:, idx])
        direction /= math.sqrt(problem.grid.norm_sq(direction))
        found.append(
            PitchforkEvent(
                event=BranchEvent(PITCHFORK, critical.mu, critical.norm),
                state=critical,
                direction=direction,
            )
        )
    return found


def seed_daughter(
    problem: StationaryProblem,
    pitchfork: PitchforkEvent,
    settings: NewtonSettings | None = None,
    kick: float = 1e-3,
    retries: int = 10,
    mu_offset: float = 5e-3,
) -> StationaryState:
    """Converge an asymmetric state just off a pitchfork.

    The parent profile is nudged along the critical eigenvector with an
    amplitude of kick * ||psi||; if Newton falls back onto the parent (or the
    trivial state), the kick is doubled and retried. The solve runs at
    mu_offset to either side of the bifurcation because daughters only exist
    off the critical point, and states whose reflection residual is still in
    the parent band are rejected: a daughter that close to its birth cannot
    be traced reliably.
    """
    settings = settings or NewtonSettings()
    parent = pitchfork.state
    psi0 = parent.psi.values.real
    amp0 = kick * math.sqrt(parent.norm)
    for attempt in range(retries):
        amp = amp0 * 2.0**attempt
        for mu_off in (mu_offset, -mu_offset):
            try:
                state = newton_solve(problem, psi0 + amp * pitchfork.direction,
                                     parent.mu + mu_off, settings)
            except NewtonError:
                continue
            if state.symmetry != ASYMMETRIC:
                continue
            r_even, r_odd = parity_residuals(problem.grid, state.psi.values.real)
            if min(r_even, r_odd) > 1e-3:
                return state
    raise ContinuationError(
        f"no asymmetric daughter found near mu={parent.mu:.6g} after {retries} kicks"
    )


def mirror_state(problem: StationaryProblem, state: StationaryState,
                 settings: NewtonSettings | None = None) -> StationaryState:
    """Newton from the reflected profile; closes the mirror-pair orbit."""
    return newton_solve(problem, reflect(state.psi.values.real), state.mu, settings)
