import numpy as np

from cqdw.continuation import (ContinuationSettings, NewtonSettings,
                               StationaryProblem, continue_branch,
                               detect_pitchfork, newton_solve, seed_daughter,
                               seed_from_mode)
from cqdw.discretization import GAUSSIAN, Grid, Kernel
from cqdw.spectrum import PotentialParams, discretize_operator, lowest_eigenpairs
from cqdw.stability import build_bdg, solve_bdg

grid = Grid(20.0, 0.1)
pot = PotentialParams()
omegas, modes = lowest_eigenpairs(discretize_operator(grid, pot), 2)
w1 = omegas[1]
u1 = modes[:, 1]

kernel = Kernel(GAUSSIAN, 0.1)
problem = StationaryProblem(grid, pot, kernel, kernel, s=1, delta=-1)
settings = ContinuationSettings(mu_min=0.10, mu_max=0.45, norm_cap=6.0)

anti = continue_branch(problem, seed_from_mode(problem, u1, w1, delta_mu=0.005), settings)
pf = detect_pitchfork(problem, anti)
daughter = continue_branch(problem, seed_daughter(problem, pf[0]), settings)

st = daughter.states[31]
print(f"state[31]: N={st.norm:.4f} mu={st.mu:.6f} residual={st.residual:.3e}")
sp = solve_bdg(build_bdg(problem, st))
print(f"  zero mode as stored: {np.abs(sp.eigenvalues).min():.3e}")

deep = newton_solve(problem, st.psi.values.real, st.mu,
                    NewtonSettings(tol=1e-13))
print(f"  polished residual: {deep.residual:.3e}")
sp2 = solve_bdg(build_bdg(problem, deep))
print(f"  zero mode polished: {np.abs(sp2.eigenvalues).min():.3e}")

# how big is the raw phase-mode defect vector for both?
for label, state in (("stored", st), ("polished", deep)):
    op = build_bdg(problem, state)
    psi = state.psi.values.real
    vec = np.concatenate([psi, -psi])
    defect = np.abs(op.block() @ vec).max() / np.abs(psi).max()
    print(f"  {label}: block zero-vector defect {defect:.3e}")
