import time
import numpy as np

from cqdw.discretization import GAUSSIAN, Kernel, PotentialParams, build_grid
from cqdw.continuation import (
    ContinuationSettings, NewtonSettings, StationaryProblem, continue_branch,
    newton_solve, seed_from_mode, stationary_residual,
)
from cqdw.spectrum import default_basis
from cqdw.stability import build_bdg, solve_bdg, dominant_unstable_mode
from cqdw.dynamics import (
    evolve, perturb_state, imbalance_series, onset_time, growth_rate,
    project_phase_plane,
)

grid = build_grid(20.0, 0.1)
basis = default_basis(grid)
pot = PotentialParams()
kernel = Kernel(GAUSSIAN, 1.0)
problem = StationaryProblem(grid, pot, kernel, kernel, s=1, delta=-1)
settings = ContinuationSettings(mu_min=0.10, mu_max=0.45, norm_cap=6.0, direction=1)

seed = seed_from_mode(problem, basis.u1, basis.omega1, delta_mu=0.005)
branch = continue_branch(problem, seed, settings)
print("anti branch:", len(branch.states), "states, N range",
      branch.states[0].norm, "..", branch.states[-1].norm)


def state_at_mu(target):
    # nearest branch state, then Newton at the exact mu
    best = min(branch.states, key=lambda s: abs(s.mu - target))
    st = newton_solve(problem, best.psi.values.real, target)
    print(f"  state at mu={target}: N={st.norm:.4f} residual={np.sqrt(grid.norm_sq(stationary_residual(problem, st.psi.values, st.mu))):.2e}")
    return st


for mu in (0.19, 0.25):
    st = state_at_mu(mu)
    op = build_bdg(problem, st)
    spec = solve_bdg(op)
    print(f"  mu={mu}: max Re lambda = {spec.max_real_part:.6f}, unstable={spec.unstable_count}")

# (b) equilibrium: stable state low on branch (N ~ 0.05, stable per earlier sweeps)
st_stable = branch.states[2]
print("stable state N:", st_stable.norm, "mu:", st_stable.mu)
t0 = time.perf_counter()
run = evolve(problem, st_stable.psi.values.astype(complex), st_stable.mu, 100.0)
print(f"equilibrium run took {time.perf_counter()-t0:.1f}s")
dev = [np.sqrt(grid.norm_sq(s.values - run.snapshots[0].values)) for s in run.snapshots]
scale = np.sqrt(grid.norm_sq(run.snapshots[0].values))
print("max rel deviation over [0,100]:", max(dev) / scale)
print("norm drift:", np.max(np.abs(run.norm_series - run.norm_series[0]) / run.norm_series[0]))
