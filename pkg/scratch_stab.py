import time

import numpy as np

from cqdw.continuation import (ContinuationSettings, StationaryProblem,
                               classify_symmetry, continue_branch,
                               detect_pitchfork, make_state, mirror_state,
                               newton_solve, seed_daughter, seed_from_mode)
from cqdw.discretization import GAUSSIAN, Grid, Kernel
from cqdw.spectrum import PotentialParams, discretize_operator, lowest_eigenpairs
from cqdw.stability import (build_bdg, dominant_unstable_mode, quartet_defect,
                            solve_bdg, sweep_branch, two_mode_lambda_check)

grid = Grid(20.0, 0.1)
pot = PotentialParams()
omegas, modes = lowest_eigenpairs(discretize_operator(grid, pot), 2)
w0, w1 = omegas
u0, u1 = modes[:, 0], modes[:, 1]

kernel = Kernel(GAUSSIAN, 0.1)
problem = StationaryProblem(grid, pot, kernel, kernel, s=1, delta=-1)
settings = ContinuationSettings(mu_min=0.10, mu_max=0.45, norm_cap=6.0)

# --- vacuum ---
vac = make_state(problem, np.zeros(grid.n_points), 0.1)
op = build_bdg(problem, vac)
spec = solve_bdg(op)
for wk in (w0, w1):
    tgt = 1j * (wk - 0.1)
    print(f"vacuum: min|eig - i(w-mu)| = {np.abs(spec.eigenvalues - tgt).min():.3e}")
print("vacuum unstable:", spec.unstable_count, "maxre", spec.max_real_part)

# --- converged antisym state, zero mode + routes ---
seed = seed_from_mode(problem, u1, w1, delta_mu=0.005)
anti = continue_branch(problem, seed, settings)
print("anti branch:", len(anti.states), anti.termination,
      [f"{e.kind}@{e.mu:.6f}/N={e.norm:.4f}" for e in anti.events])

norms = np.array([st.norm for st in anti.states])
mus = np.array([st.mu for st in anti.states])

# pick states: N ~ 0.05 (below SSB), 1.0 (mid), 5.0 (near restoring), last
def pick(nval):
    return anti.states[int(np.argmin(np.abs(norms - nval)))]

for nval in (0.05, 0.3, 1.0, 3.0, 5.0, 5.5):
    st = pick(nval)
    t0 = time.time()
    opn = build_bdg(problem, st)
    sb = solve_bdg(opn)
    tb = time.time() - t0
    t0 = time.time()
    sp = solve_bdg(opn, method="product")
    tp = time.time() - t0
    zero = np.abs(sb.eigenvalues).min()
    zero_p = np.abs(sp.eigenvalues).min()
    # route agreement away from zero
    far = sb.eigenvalues[np.abs(sb.eigenvalues) > 1e-3]
    gap = max(np.abs(sp.eigenvalues - lam).min() for lam in far)
    print(f"N={st.norm:.3f} mu={st.mu:.5f}: block cnt={sb.unstable_count} "
          f"maxre={sb.max_real_part:.3e} zero={zero:.2e} ({tb:.2f}s) | "
          f"product cnt={sp.unstable_count} maxre={sp.max_real_part:.3e} "
          f"zero={zero_p:.2e} ({tp:.2f}s) | gap={gap:.2e} "
          f"quartet={quartet_defect(sb.eigenvalues):.2e}")
    # jacobian cross-check
    jac = problem.jacobian(np.asarray(st.psi.values), st.mu)
    print("   |Lplus - J|max:", np.abs(opn.l_plus - jac).max(),
          " X asym:", np.abs(opn.exchange - opn.exchange.T).max())
