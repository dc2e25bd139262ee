import numpy as np

from cqdw.continuation import (ContinuationSettings, StationaryProblem,
                               continue_branch, detect_pitchfork,
                               seed_daughter, seed_from_mode)
from cqdw.discretization import GAUSSIAN, Grid, Kernel
from cqdw.spectrum import PotentialParams, discretize_operator, lowest_eigenpairs
from cqdw.stability import build_bdg, dominant_unstable_mode, solve_bdg, sweep_branch

grid = Grid(20.0, 0.1)
pot = PotentialParams()
omegas, modes = lowest_eigenpairs(discretize_operator(grid, pot), 2)
w0, w1 = omegas
u0, u1 = modes[:, 0], modes[:, 1]

kernel = Kernel(GAUSSIAN, 0.1)
problem = StationaryProblem(grid, pot, kernel, kernel, s=1, delta=-1)
settings = ContinuationSettings(mu_min=0.10, mu_max=0.45, norm_cap=6.0)

def story(name, branch, spectra):
    print(f"--- {name}: {len(branch.states)} states, term={branch.termination}")
    print("    events:", [f"{e.kind}@{e.mu:.6f}/N={e.norm:.4f}" for e in branch.events])
    prev = None
    for st, sp in zip(branch.states, spectra):
        if prev is None or sp.unstable_count != prev:
            print(f"    N={st.norm:.4f} mu={st.mu:.6f}: count {prev} -> {sp.unstable_count} "
                  f"maxre={sp.max_real_part:.3e}")
            prev = sp.unstable_count

# symmetric parent branch
sym_seed = seed_from_mode(problem, u0, w0, delta_mu=0.005)
sym = continue_branch(problem, sym_seed, settings)
sym_spec = sweep_branch(problem, sym.states)
story("sym sigma=0.1", sym, sym_spec)
pf_sym = detect_pitchfork(problem, sym)
print("    pitchforks:", [f"{p.event.mu:.6f}/N={p.event.norm:.4f}" for p in pf_sym])

# antisym parent + daughter
anti_seed = seed_from_mode(problem, u1, w1, delta_mu=0.005)
anti = continue_branch(problem, anti_seed, settings)
anti_spec = sweep_branch(problem, anti.states)
story("anti sigma=0.1", anti, anti_spec)
pf_anti = detect_pitchfork(problem, anti)
print("    pitchforks:", [f"{p.event.mu:.6f}/N={p.event.norm:.4f}" for p in pf_anti])

daughter_seed = seed_daughter(problem, pf_anti[0], settings)
daughter = continue_branch(problem, daughter_seed, settings)
d_spec = sweep_branch(problem, daughter.states)
story("daughter sigma=0.1", daughter, d_spec)

# dominant unstable mode on a mid-branch antisym state
norms = np.array([st.norm for st in anti.states])
st = anti.states[int(np.argmin(np.abs(norms - 1.0)))]
op = build_bdg(problem, st)
mode = dominant_unstable_mode(op)
blk = solve_bdg(op)
print(f"dominant mode: rate={mode.rate:.6f} freq={mode.frequency:.2e} "
      f"block maxre={blk.max_real_part:.6f}")
from cqdw.discretization import parity_residuals
u = mode.direction
print("  direction parity residuals:", parity_residuals(grid, u.real),
      "imag fraction:", np.abs(u.imag).max() / np.abs(u.real).max())
print("  grid norm:", np.sqrt(grid.integrate(np.abs(u) ** 2)))
