import time
import numpy as np

from cqdw.discretization import GAUSSIAN, Kernel, PotentialParams, build_grid, reflect
from cqdw.continuation import (
    ContinuationSettings, StationaryProblem, continue_branch, newton_solve,
    seed_from_mode,
)
from cqdw.spectrum import default_basis
from cqdw.stability import build_bdg, dominant_unstable_mode
from cqdw.dynamics import (
    evolve, perturb_state, onset_time, project_phase_plane, imbalance_series,
)

grid = build_grid(20.0, 0.1)
basis = default_basis(grid)
pot = PotentialParams()
kernel = Kernel(GAUSSIAN, 1.0)
problem = StationaryProblem(grid, pot, kernel, kernel, s=1, delta=-1)
settings = ContinuationSettings(mu_min=0.10, mu_max=0.45, norm_cap=6.0, direction=1)
seed = seed_from_mode(problem, basis.u1, basis.omega1, delta_mu=0.005)
branch = continue_branch(problem, seed, settings)

def state_at(mu):
    best = min(branch.states, key=lambda s: abs(s.mu - mu))
    return newton_solve(problem, best.psi.values.real, mu)

st25 = state_at(0.25)
mode25 = dominant_unstable_mode(build_bdg(problem, st25))
init25 = perturb_state(st25, amplitude=1e-3, direction=mode25.direction)

t0 = time.perf_counter()
run_a = evolve(problem, init25, 0.25, 150.0, dt=5e-3)
run_b = evolve(problem, init25, 0.25, 150.0, dt=2.5e-3)
ta, tb = onset_time(run_a), onset_time(run_b)
print(f"dt halving: onset {ta} vs {tb}  shift {abs(tb-ta)/ta:.3%}  ({time.perf_counter()-t0:.0f}s)")

# quarter dt as well to see convergence direction
run_c = evolve(problem, init25, 0.25, 150.0, dt=1.25e-3)
print("dt=1.25e-3 onset:", onset_time(run_c))

# mirror equivariance
st19 = state_at(0.19)
mode19 = dominant_unstable_mode(build_bdg(problem, st19))
init19 = perturb_state(st19, amplitude=1e-3, direction=mode19.direction)
run_f = evolve(problem, init19.values, 0.19, 30.0)
run_m = evolve(problem, reflect(init19.values), 0.19, 30.0)
diff = max(
    np.max(np.abs(reflect(run_f.snapshots[k].values) - run_m.snapshots[k].values))
    for k in range(len(run_f.snapshots))
)
print("mirror equivariance max|diff|:", diff)

# phase plane on a full 0.19 run
run19 = evolve(problem, init19, 0.19, 300.0)
ph = project_phase_plane(run19, basis)
a = imbalance_series(run19)
print("onset19:", onset_time(run19))
print("defined fraction:", ph.defined.mean())
iz = np.argmax(np.abs(a))
print(f"theta[0]={ph.theta[0]:+.4f} z[0]={ph.z[0]:+.2e} resid[0]={ph.residual_fraction[0]:.3e}")
for t_probe in (50, 150, 200, 210, 230, 260, 300):
    k = np.searchsorted(run19.times, t_probe)
    print(f"  t={t_probe}: z={ph.z[k]:+.3f} th={ph.theta[k]:+.3f} resid={ph.residual_fraction[k]:+.4f} zdens={a[k]:+.3f} def={ph.defined[k]}")
print("max residual fraction:", np.nanmax(ph.residual_fraction))
print("projection z vs density z, max|diff| while |z|<0.3:",
      np.nanmax(np.abs(ph.z - a)[np.abs(a) < 0.3]))

# theta/z of pure stationary projections
for name, st in (("sym", None), ("anti", None)):
    pass
run_sym_seed = seed_from_mode(problem, basis.u0, basis.omega0, delta_mu=0.005)
st_sym = run_sym_seed
rs = evolve(problem, st_sym.psi.values.astype(complex), st_sym.mu, 5.0)
ps = project_phase_plane(rs, basis)
print("sym: max|z|", np.nanmax(np.abs(ps.z)), "max|theta|", np.nanmax(np.abs(ps.theta)))
st_anti = seed
ra = evolve(problem, st_anti.psi.values.astype(complex), st_anti.mu, 5.0)
pa = project_phase_plane(ra, basis)
print("anti: max|z|", np.nanmax(np.abs(pa.z)), "max|theta-pi|", np.nanmax(np.abs(np.abs(pa.theta) - np.pi)))

# vacuum run: flagged samples
rv = evolve(problem, np.zeros(grid.n_points, dtype=complex), 0.2, 3.0)
pv = project_phase_plane(rv, basis)
print("vacuum: defined any:", pv.defined.any(), "norm series max:", rv.norm_series.max())

# fixed-point stall probe: huge amplitude
try:
    evolve(problem, (1e6 * st19.psi.values).astype(complex), 0.19, 1.0)
    print("huge amplitude: no error!?")
except Exception as e:
    print("huge amplitude:", type(e).__name__, str(e)[:80])
