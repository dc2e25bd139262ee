import time
import numpy as np

from cqdw.discretization import GAUSSIAN, Kernel, PotentialParams, build_grid
from cqdw.continuation import (
    ContinuationSettings, StationaryProblem, continue_branch, newton_solve,
    seed_from_mode,
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

states = {}
rates = {}
for mu in (0.19, 0.25):
    best = min(branch.states, key=lambda s: abs(s.mu - mu))
    st = newton_solve(problem, best.psi.values.real, mu)
    states[mu] = st
    op = build_bdg(problem, st)
    spec = solve_bdg(op)
    mode = dominant_unstable_mode(op)
    rates[mu] = (spec.max_real_part, mode)
    print(f"mu={mu}: N={st.norm:.4f} rate={spec.max_real_part:.6f} freq={mode.frequency:.2e}")

# onset with random 1e-3 kick (default seed)
for mu, t_end in ((0.19, 300.0), (0.25, 150.0)):
    st = states[mu]
    init = perturb_state(st)  # random, seed 0
    t0 = time.perf_counter()
    run = evolve(problem, init, mu, t_end)
    t_on = onset_time(run)
    print(f"mu={mu}: onset(|z|>=0.5) = {t_on}  ({time.perf_counter()-t0:.1f}s)")
    # a few more seeds to see spread
    for seedval in (1, 2, 3, 4):
        init = perturb_state(st, rng=np.random.default_rng(seedval))
        run2 = evolve(problem, init, mu, t_end)
        print(f"   seed {seedval}: onset = {onset_time(run2)}")

# growth rate with eigenvector kick, amplitude 1e-4 for a long linear window
for mu in (0.19, 0.25):
    st = states[mu]
    lam, mode = rates[mu]
    init = perturb_state(st, amplitude=1e-4, direction=mode.direction)
    t_end = 260.0 if mu == 0.19 else 140.0
    run = evolve(problem, init, mu, t_end)
    a = np.abs(imbalance_series(run))
    print(f"mu={mu}: z0={a[0]:.2e}, z spans {a.min():.2e}..{a.max():.2e}")
    g = growth_rate(run)
    print(f"   fit={g:.6f} vs bdg={lam:.6f}  rel={(g-lam)/lam:+.3%}")
