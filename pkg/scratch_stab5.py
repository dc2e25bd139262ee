import numpy as np

from cqdw.continuation import (ContinuationSettings, StationaryProblem,
                               _segment_state, continue_branch, seed_from_mode)
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

a, b = anti.states[-2], anti.states[-1]
print(f"bracket: N={a.norm:.4f} (stable) .. N={b.norm:.4f} (quartet)")

def rate(state):
    sp = solve_bdg(build_bdg(problem, state))
    return sp.max_real_part

lo, hi = 0.0, 1.0
for _ in range(20):
    mid = 0.5 * (lo + hi)
    st = _segment_state(problem, a, b, mid, settings.newton)
    if rate(st) > 1e-6:
        hi = mid
        hs = st
    else:
        lo = mid
        ls = st
print(f"onset: N in ({ls.norm:.5f}, {hs.norm:.5f}), mu in ({ls.mu:.6f}, {hs.mu:.6f})")
print(f"rate at hi: {rate(hs):.3e}")
