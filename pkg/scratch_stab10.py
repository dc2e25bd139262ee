import numpy as np

from cqdw.continuation import (ContinuationSettings, StationaryProblem,
                               continue_branch, detect_pitchfork,
                               seed_daughter, seed_from_mode)
from cqdw.discretization import GAUSSIAN, Grid, Kernel
from cqdw.spectrum import PotentialParams, discretize_operator, lowest_eigenpairs
from cqdw.stability import build_bdg, dominant_unstable_mode, solve_bdg, sweep_branch
from cqdw.discretization import parity_residuals

grid = Grid(20.0, 0.1)
pot = PotentialParams()
omegas, modes = lowest_eigenpairs(discretize_operator(grid, pot), 2)
w0, w1 = omegas
u0, u1 = modes[:, 0], modes[:, 1]

kernel = Kernel(GAUSSIAN, 0.1)
problem = StationaryProblem(grid, pot, kernel, kernel, s=1, delta=-1)
settings = ContinuationSettings(mu_min=0.10, mu_max=0.45, norm_cap=6.0)

anti = continue_branch(problem, seed_from_mode(problem, u1, w1, delta_mu=0.005), settings)
sym = continue_branch(problem, seed_from_mode(problem, u0, w0, delta_mu=0.005), settings)
pf = detect_pitchfork(problem, anti)
daughter = continue_branch(problem, seed_daughter(problem, pf[0]), settings)

worst = 0.0
for label, branch in (("anti", anti), ("sym", sym), ("daughter", daughter)):
    zs = []
    for st in branch.states:
        sp = solve_bdg(build_bdg(problem, st))
        zs.append(np.abs(sp.eigenvalues).min())
    zs = np.array(zs)
    print(f"{label}: zero-mode max {zs.max():.3e} median {np.median(zs):.3e}")
    worst = max(worst, zs.max())
print("worst overall:", worst)

# dominant unstable mode details at N ~ 1
norms = np.array([st.norm for st in anti.states])
st = anti.states[int(np.argmin(np.abs(norms - 1.0)))]
op = build_bdg(problem, st)
mode = dominant_unstable_mode(op)
blk = solve_bdg(op)
print(f"\nmode rate={mode.rate:.8f} vs block {blk.max_real_part:.8f} "
      f"diff={abs(mode.rate - blk.max_real_part):.2e} freq={mode.frequency:.2e}")
print("unit norm:", np.sqrt(grid.integrate(np.abs(mode.direction) ** 2)))
print("re parity:", parity_residuals(grid, mode.direction.real))
print("im parity:", parity_residuals(grid, mode.direction.imag))
print("im scale:", np.abs(mode.direction.imag).max() / np.abs(mode.direction.real).max())
