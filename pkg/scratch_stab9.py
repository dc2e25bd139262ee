import time

import numpy as np

from cqdw.continuation import (ContinuationSettings, StationaryProblem,
                               continue_branch, detect_pitchfork, seed_from_mode)
from cqdw.discretization import GAUSSIAN, Grid, Kernel
from cqdw.spectrum import PotentialParams, discretize_operator, lowest_eigenpairs
from cqdw.stability import sweep_branch

grid = Grid(20.0, 0.1)
pot = PotentialParams()
omegas, modes = lowest_eigenpairs(discretize_operator(grid, pot), 2)
w0, w1 = omegas
u0, u1 = modes[:, 0], modes[:, 1]

SCENARIOS = {
    "sigma01": dict(sigma=0.1, s=1, delta=-1, mu_min=0.10, mu_max=0.45, direction=1),
    "sigma1": dict(sigma=1.0, s=1, delta=-1, mu_min=0.10, mu_max=0.45, direction=1),
    "sigma8": dict(sigma=8.0, s=1, delta=-1, mu_min=0.10, mu_max=0.45, direction=1),
    "dual1": dict(sigma=1.0, s=-1, delta=1, mu_min=-0.15, mu_max=0.16, direction=-1),
}

for name, sc in SCENARIOS.items():
    kernel = Kernel(GAUSSIAN, sc["sigma"])
    problem = StationaryProblem(grid, pot, kernel, kernel, s=sc["s"], delta=sc["delta"])
    settings = ContinuationSettings(mu_min=sc["mu_min"], mu_max=sc["mu_max"],
                                    norm_cap=6.0, direction=sc["direction"])
    for family, (mode, om) in (("sym", (u0, w0)), ("anti", (u1, w1))):
        t0 = time.time()
        seed = seed_from_mode(problem, mode, om, delta_mu=sc["s"] * 0.005)
        branch = continue_branch(problem, seed, settings)
        pf = detect_pitchfork(problem, branch)
        spectra = sweep_branch(problem, branch.states)
        dt = time.time() - t0
        transitions = []
        for i in range(1, len(branch.states)):
            a, b = spectra[i - 1], spectra[i]
            if a.unstable_count != b.unstable_count:
                transitions.append((branch.states[i - 1], branch.states[i],
                                    a.unstable_count, b.unstable_count))
        print(f"{name}/{family}: {len(branch.states)} states {dt:.0f}s "
              f"term={branch.termination}")
        print("   folds:", [f"{e.mu:.6f}/N={e.norm:.4f}" for e in branch.events])
        print("   pfs:  ", [f"{p.event.mu:.6f}/N={p.event.norm:.4f}" for p in pf])
        for a, b, ca, cb in transitions:
            inside = [p for p in pf
                      if min(a.norm, b.norm) <= p.event.norm <= max(a.norm, b.norm)]
            print(f"   {ca}->{cb} bracket N=({a.norm:.4f},{b.norm:.4f}) "
                  f"mu=({a.mu:.6f},{b.mu:.6f}) pf_in_bracket={len(inside)}")
