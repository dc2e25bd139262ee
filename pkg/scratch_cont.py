import time

import numpy as np

from cqdw.continuation import (
    ContinuationSettings,
    NewtonSettings,
    StationaryProblem,
    continue_branch,
    detect_pitchfork,
    newton_solve,
    seed_daughter,
    seed_from_mode,
)
from cqdw.discretization import GAUSSIAN, Kernel, PotentialParams, build_grid
from cqdw.spectrum import default_basis

t0 = time.time()
grid = build_grid(20.0, 0.1)
pot = PotentialParams()
basis = default_basis(grid)
print("doublet", basis.omega0, basis.omega1, "t=%.2f" % (time.time() - t0))

ker = Kernel(GAUSSIAN, 0.1)
prob = StationaryProblem(grid, pot, ker, ker, s=1, delta=-1)

# seed symmetric and antisymmetric branches
s_sym = seed_from_mode(prob, basis.u0, basis.omega0, delta_mu=0.005)
print("sym seed: mu=%.6f N=%.6f sym=%s res=%.2e" % (s_sym.mu, s_sym.norm, s_sym.symmetry, s_sym.residual))
s_anti = seed_from_mode(prob, basis.u1, basis.omega1, delta_mu=0.005)
print("anti seed: mu=%.6f N=%.6f sym=%s res=%.2e" % (s_anti.mu, s_anti.norm, s_anti.symmetry, s_anti.residual))

cfg = ContinuationSettings(mu_min=0.10, mu_max=0.45, norm_cap=9.0)
t0 = time.time()
br_anti = continue_branch(prob, s_anti, cfg)
print("anti branch: %d states, term=%s, events=%s, t=%.2f" % (
    len(br_anti.states), br_anti.termination, br_anti.events, time.time() - t0))
print("  mu range %.4f..%.4f, N range %.4f..%.4f" % (
    br_anti.mu_values().min(), br_anti.mu_values().max(), br_anti.norms().min(), br_anti.norms().max()))

t0 = time.time()
br_sym = continue_branch(prob, s_sym, cfg)
print("sym branch: %d states, term=%s, events=%s, t=%.2f" % (
    len(br_sym.states), br_sym.termination, br_sym.events, time.time() - t0))
print("  mu range %.4f..%.4f, N range %.4f..%.4f" % (
    br_sym.mu_values().min(), br_sym.mu_values().max(), br_sym.norms().min(), br_sym.norms().max()))

t0 = time.time()
pf_anti = detect_pitchfork(prob, br_anti)
print("anti pitchforks:", [(e.event.mu, e.event.norm) for e in pf_anti], "t=%.2f" % (time.time() - t0))
t0 = time.time()
pf_sym = detect_pitchfork(prob, br_sym)
print("sym pitchforks:", [(e.event.mu, e.event.norm) for e in pf_sym], "t=%.2f" % (time.time() - t0))

if pf_anti:
    t0 = time.time()
    d = seed_daughter(prob, pf_anti[0])
    print("daughter: mu=%.6f N=%.6f sym=%s, t=%.2f" % (d.mu, d.norm, d.symmetry, time.time() - t0))
    t0 = time.time()
    br_d = continue_branch(prob, d, cfg)
    print("daughter branch: %d states, term=%s, t=%.2f" % (len(br_d.states), br_d.termination, time.time() - t0))
    for e in br_d.events:
        print("  event", e.kind, "mu=%.6f N=%.6f" % (e.mu, e.norm))
