import time
import numpy as np

from cqdw.discretization import GAUSSIAN, Kernel, PotentialParams, build_grid
from cqdw.continuation import (
    ContinuationSettings, StationaryProblem, continue_branch, newton_solve,
    seed_from_mode, seed_daughter, detect_pitchfork,
)
from cqdw.spectrum import default_basis
from cqdw.stability import build_bdg, solve_bdg, dominant_unstable_mode
from cqdw.dynamics import (
    evolve, perturb_state, imbalance_series, onset_time, density_imbalance,
)

grid = build_grid(20.0, 0.1)
basis = default_basis(grid)
pot = PotentialParams()
kernel = Kernel(GAUSSIAN, 1.0)
problem = StationaryProblem(grid, pot, kernel, kernel, s=1, delta=-1)
settings = ContinuationSettings(mu_min=0.10, mu_max=0.45, norm_cap=6.0, direction=1)

seed = seed_from_mode(problem, basis.u1, basis.omega1, delta_mu=0.005)
branch = continue_branch(problem, seed, settings)
pfs = detect_pitchfork(problem, branch)
print("sigma1 anti pitchforks:", [(p.state.norm, p.state.mu) for p in pfs])
daughter0 = seed_daughter(problem, pfs[0])
for mu in (0.19,):
    dstate = newton_solve(problem, daughter0.psi.values.real, mu)
    print(f"daughter at mu={mu}: N={dstate.norm:.4f} z={density_imbalance(grid, dstate.psi.values):+.4f}")

states = {}
for mu in (0.19, 0.25):
    best = min(branch.states, key=lambda s: abs(s.mu - mu))
    states[mu] = newton_solve(problem, best.psi.values.real, mu)

def report(run, label):
    a = imbalance_series(run)
    amax = np.max(np.abs(a))
    print(f"{label}: max|z|={amax:.3f}", end="")
    for thr in (0.15, 0.2, 0.25, 0.3, 0.4, 0.5):
        hits = np.flatnonzero(np.abs(a) >= thr)
        t = run.times[hits[0]] if hits.size else None
        print(f"  t({thr})={t}", end="")
    print()
    # coarse trajectory
    idx = np.arange(0, len(run.times), max(1, len(run.times)//15))
    print("   z(t):", " ".join(f"{run.times[i]:.0f}:{a[i]:+.2f}" for i in idx))

st = states[0.19]
op = build_bdg(problem, st)
mode = dominant_unstable_mode(op)
t0 = time.perf_counter()
run = evolve(problem, perturb_state(st, amplitude=1e-3, direction=mode.direction), 0.19, 500.0)
print(f"[eigen 1e-3, mu=0.19, t=500] ({time.perf_counter()-t0:.0f}s)")
report(run, "eigen mu=0.19")

run = evolve(problem, perturb_state(st), 0.19, 600.0)
report(run, "random mu=0.19 seed0 t=600")

st = states[0.25]
op = build_bdg(problem, st)
mode25 = dominant_unstable_mode(op)
run = evolve(problem, perturb_state(st, amplitude=1e-3, direction=mode25.direction), 0.25, 250.0)
report(run, "eigen mu=0.25 t=250")
run = evolve(problem, perturb_state(st), 0.25, 300.0)
report(run, "random mu=0.25 seed0 t=300")
