import numpy as np

from cqdw.continuation import (ContinuationSettings, StationaryProblem,
                               continue_branch, detect_pitchfork,
                               seed_daughter, seed_from_mode)
from cqdw.discretization import GAUSSIAN, Grid, Kernel
from cqdw.spectrum import PotentialParams, default_basis, discretize_operator, lowest_eigenpairs
from cqdw.stability import build_bdg, solve_bdg, sweep_branch

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
spectra = sweep_branch(problem, daughter.states)

print("daughter events:", [f"{e.kind}@{e.mu:.6f}/N={e.norm:.4f}" for e in daughter.events])
prev = None
for i, (st, sp) in enumerate(zip(daughter.states, spectra)):
    if prev is None or sp.unstable_count != prev:
        top = sp.eigenvalues[np.argsort(-sp.eigenvalues.real)][:3]
        print(f"  [{i}] N={st.norm:.4f} mu={st.mu:.6f}: {prev} -> {sp.unstable_count}  "
              + "  ".join(f"{l.real:+.2e}{l.imag:+.2e}j" for l in top))
        prev = sp.unstable_count
