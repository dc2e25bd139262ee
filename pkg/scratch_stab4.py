import numpy as np

from cqdw.continuation import (ContinuationSettings, StationaryProblem,
                               continue_branch, seed_from_mode)
from cqdw.discretization import GAUSSIAN, Grid, Kernel
from cqdw.spectrum import PotentialParams, discretize_operator, lowest_eigenpairs
from cqdw.stability import build_bdg, solve_bdg

grid = Grid(20.0, 0.1)
pot = PotentialParams()
omegas, modes = lowest_eigenpairs(discretize_operator(grid, pot), 2)
w0, w1 = omegas
u0, u1 = modes[:, 0], modes[:, 1]

kernel = Kernel(GAUSSIAN, 0.1)
problem = StationaryProblem(grid, pot, kernel, kernel, s=1, delta=-1)

for cap in (6.0, 9.0):
    settings = ContinuationSettings(mu_min=0.10, mu_max=0.45, norm_cap=cap)
    anti = continue_branch(problem, seed_from_mode(problem, u1, w1, delta_mu=0.005), settings)
    print(f"cap={cap}: {len(anti.states)} states term={anti.termination}")
    print("  tail (block route):")
    for st in anti.states[-8:]:
        sp = solve_bdg(build_bdg(problem, st))
        top = sp.eigenvalues[np.argsort(-sp.eigenvalues.real)][:2]
        print(f"    N={st.norm:.4f} mu={st.mu:.6f} cnt={sp.unstable_count} "
              + "  ".join(f"{l.real:+.3e}{l.imag:+.3e}j" for l in top))
    if cap > 6.5:
        break
