import time

import numpy as np

from cqdw.continuation import (
    ContinuationSettings,
    StationaryProblem,
    continue_branch,
    detect_pitchfork,
    seed_daughter,
    seed_from_mode,
)
from cqdw.discretization import GAUSSIAN, Kernel, PotentialParams, build_grid
from cqdw.spectrum import default_basis

grid = build_grid(20.0, 0.1)
pot = PotentialParams()
basis = default_basis(grid)


def run(sigma, s, delta, mu_min, mu_max, direction, cap=9.0):
    print(f"=== sigma={sigma} s={s} delta={delta} window=[{mu_min},{mu_max}] dir={direction}")
    ker = Kernel(GAUSSIAN, sigma)
    prob = StationaryProblem(grid, pot, ker, ker, s=s, delta=delta)
    cfg = ContinuationSettings(mu_min=mu_min, mu_max=mu_max, norm_cap=cap, direction=direction)
    t0 = time.time()
    for name, mode, om in (("sym", basis.u0, basis.omega0), ("anti", basis.u1, basis.omega1)):
        seed = seed_from_mode(prob, mode, om, delta_mu=s * 0.005)
        br = continue_branch(prob, seed, cfg)
        pfs = detect_pitchfork(prob, br)
        print(f"  {name}: {len(br.states)} states term={br.termination} "
              f"mu=[{br.mu_values().min():.4f},{br.mu_values().max():.4f}] "
              f"N=[{br.norms().min():.4f},{br.norms().max():.4f}]")
        for e in br.events:
            print(f"    event {e.kind} mu={e.mu:.6f} N={e.norm:.6f}")
        for pf in pfs:
            print(f"    pitchfork mu={pf.event.mu:.6f} N={pf.event.norm:.6f}")
        if pfs:
            try:
                d = seed_daughter(prob, pfs[0])
                brd = continue_branch(prob, d, cfg)
                print(f"    daughter from {pfs[0].event.mu:.4f}: {len(brd.states)} states "
                      f"term={brd.termination} N_max={brd.norms().max():.4f}")
                for e in brd.events:
                    print(f"      event {e.kind} mu={e.mu:.6f} N={e.norm:.6f}")
            except Exception as exc:
                print(f"    daughter seeding failed: {exc}")
    print(f"  t={time.time() - t0:.2f}s")


run(1.0, 1, -1, 0.10, 0.45, 1)
run(8.0, 1, -1, 0.10, 0.45, 1)
run(1.0, -1, 1, -0.15, 0.16, -1)
