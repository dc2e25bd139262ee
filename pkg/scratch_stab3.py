import numpy as np

from cqdw.continuation import (ContinuationSettings, StationaryProblem,
                               continue_branch, detect_pitchfork,
                               seed_daughter, seed_from_mode)
from cqdw.discretization import GAUSSIAN, Grid, Kernel
from cqdw.spectrum import PotentialParams, discretize_operator, lowest_eigenpairs
from cqdw.stability import build_bdg, solve_bdg, sweep_branch

grid = Grid(20.0, 0.1)
pot = PotentialParams()
omegas, modes = lowest_eigenpairs(discretize_operator(grid, pot), 2)
w0, w1 = omegas
u0, u1 = modes[:, 0], modes[:, 1]

kernel = Kernel(GAUSSIAN, 0.1)
problem = StationaryProblem(grid, pot, kernel, kernel, s=1, delta=-1)
settings = ContinuationSettings(mu_min=0.10, mu_max=0.45, norm_cap=6.0)

anti = continue_branch(problem, seed_from_mode(problem, u1, w1, delta_mu=0.005), settings)
norms = np.array([st.norm for st in anti.states])

# adjudicate the flicker windows and terminal state with the block route
for nval in (0.80, 2.40, 3.20, 6.10):
    st = anti.states[int(np.argmin(np.abs(norms - nval)))]
    op = build_bdg(problem, st)
    for method in ("block", "product"):
        sp = solve_bdg(op, method=method)
        top = sp.eigenvalues[np.argsort(-sp.eigenvalues.real)][:4]
        print(f"N={st.norm:.4f} {method:7s} cnt={sp.unstable_count} "
              + "  ".join(f"{l.real:+.3e}{l.imag:+.3e}j" for l in top))
    print()

sym = continue_branch(problem, seed_from_mode(problem, u0, w0, delta_mu=0.005), settings)
snorms = np.array([st.norm for st in sym.states])
for nval in (2.1,):
    st = sym.states[int(np.argmin(np.abs(snorms - nval)))]
    op = build_bdg(problem, st)
    for method in ("block", "product"):
        sp = solve_bdg(op, method=method)
        top = sp.eigenvalues[np.argsort(-sp.eigenvalues.real)][:3]
        print(f"sym N={st.norm:.4f} {method:7s} cnt={sp.unstable_count} "
              + "  ".join(f"{l.real:+.3e}{l.imag:+.3e}j" for l in top))

# bracket around sym fold vs pitchfork: states sorted along branch near there
print("\nsym branch tail (N, mu, product count):")
spectra = sweep_branch(problem, sym.states[-12:])
for st, sp in zip(sym.states[-12:], spectra):
    print(f"  N={st.norm:.4f} mu={st.mu:.6f} cnt={sp.unstable_count} maxre={sp.max_real_part:.3e}")
