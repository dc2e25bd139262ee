import numpy as np

from cqdw.continuation import (ContinuationSettings, StationaryProblem,
                               continue_branch, detect_pitchfork,
                               seed_daughter, seed_from_mode)
from cqdw.discretization import GAUSSIAN, Grid, Kernel
from cqdw.overlaps import shared_kernel_overlaps
from cqdw.spectrum import (PotentialParams, default_basis, discretize_operator,
                           lowest_eigenpairs)
from cqdw.stability import build_bdg, solve_bdg, sweep_branch, two_mode_lambda_check
from cqdw.twomode import ANTISYMMETRIC, ModeParams, TwoModeState, fixed_point_stability

grid = Grid(20.0, 0.1)
pot = PotentialParams()
op = discretize_operator(grid, pot)
omegas, modes = lowest_eigenpairs(op, 2)
w0, w1 = omegas
u0, u1 = modes[:, 0], modes[:, 1]
basis = default_basis(grid)

kernel = Kernel(GAUSSIAN, 0.1)
problem = StationaryProblem(grid, pot, kernel, kernel, s=1, delta=-1)
settings = ContinuationSettings(mu_min=0.10, mu_max=0.45, norm_cap=6.0)

anti = continue_branch(problem, seed_from_mode(problem, u1, w1, delta_mu=0.005), settings)
pf = detect_pitchfork(problem, anti)

# --- daughter sweep ---
dseed = seed_daughter(problem, pf[0])
daughter = continue_branch(problem, dseed, settings)
spectra = sweep_branch(problem, daughter.states)
counts = [sp.unstable_count for sp in spectra]
print(f"daughter: {len(daughter.states)} states term={daughter.termination} "
      f"counts: {sorted(set(counts))} maxre max: {max(sp.max_real_part for sp in spectra):.3e}")
print("  events:", [f"{e.kind}@{e.mu:.6f}/N={e.norm:.4f}" for e in daughter.events])

# --- two-mode growth comparison ---
table = shared_kernel_overlaps(basis, GAUSSIAN, 0.1)
norms = np.array([st.norm for st in anti.states])
print("\ntwo-mode vs PDE growth rates (sigma=0.1 antisym):")
for nval in (0.05, 0.10, 0.2, 0.3, 0.4, 0.5, 0.8):
    st = anti.states[int(np.argmin(np.abs(norms - nval)))]
    sp = solve_bdg(build_bdg(problem, st))
    p = ModeParams.from_overlaps(table, basis, 1, -1, st.norm)
    fp = fixed_point_stability(TwoModeState(z=0.0, theta=np.pi), p)
    cmp = two_mode_lambda_check(sp, fp.lambda_sq)
    print(f"  N={st.norm:.4f}: pde={cmp.pde_rate:.6f} red={cmp.reduced_rate:.6f} "
          f"rel={cmp.relative_difference if cmp.relative_difference is None else round(cmp.relative_difference, 4)} "
          f"agree={cmp.agree_on_stability}")

# --- rate at the detected SSB point ---
st = pf[0].state
sp = solve_bdg(build_bdg(problem, st))
print(f"\nrate at detected SSB state (mu={st.mu:.6f}, N={st.norm:.4f}): {sp.max_real_part:.3e}")
p = ModeParams.from_overlaps(table, basis, 1, -1, st.norm)
fp = fixed_point_stability(TwoModeState(z=0.0, theta=np.pi), p)
print(f"two-mode lambda^2 at same N: {fp.lambda_sq:.3e}")
