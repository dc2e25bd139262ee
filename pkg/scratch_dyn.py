import time
import numpy as np

from cqdw.discretization import (
    Grid, GridFunction, Kernel, ConvolutionPlan, build_grid, PotentialParams,
)
from cqdw.continuation import StationaryProblem, stationary_residual
from cqdw.dynamics import (
    evolve, solve_screened_poisson, perturb_state, density_imbalance,
    imbalance_series, project_phase_plane,
)

grid = build_grid(20.0, 0.1)

# (a) screened-Poisson vs convolution, random sources
rng = np.random.default_rng(7)
for trial in range(5):
    intensity = rng.uniform(0.0, 1.0, grid.n_points)
    d = float(rng.uniform(0.05, 2.0))
    s0 = float(rng.uniform(0.2, 3.0))
    m = solve_screened_poisson(GridFunction(grid, intensity), d, s0)
    kern = Kernel("exponential", math_range := float(np.sqrt(d)))
    plan = ConvolutionPlan(kern, grid)
    ref = plan.apply(s0 * (intensity - intensity**2))
    print(f"trial {trial}: d={d:.3f} max|diff|={np.max(np.abs(m.values - ref)):.3e}")

# localized source
x = grid.points
u = np.exp(-x**2) * 0.8
I = u**2
m = solve_screened_poisson(GridFunction(grid, I), 0.25, 1.5)
plan = ConvolutionPlan(Kernel("exponential", 0.5), grid)
ref = plan.apply(1.5 * (I - I**2))
print("localized:", np.max(np.abs(m.values - ref)))

# constant source
S = 1e-3
m = solve_screened_poisson(GridFunction(grid, np.full(grid.n_points, S)), 0.25, 1.0)
interior = np.abs(x) <= 10.0
print("constant: max|m/S - 1| interior:", np.max(np.abs(m.values[interior] / S - 1.0)))

# zero source
m = solve_screened_poisson(GridFunction(grid, np.zeros(grid.n_points)), 0.3, 2.0)
print("zero:", np.max(np.abs(m.values)))

# (b) short evolve sanity + timing: linear mode rotation test
pot = PotentialParams(0.1, 1.0, 0.5)
prob = StationaryProblem(grid, pot, Kernel("gaussian", 1.0), Kernel("gaussian", 1.0), 1.0, -1.0)
from cqdw.spectrum import discretize_operator, lowest_eigenpairs
op = discretize_operator(grid, pot)
om, modes = lowest_eigenpairs(op, 2)
u0 = modes[:, 0]
mu = 0.19
eps = 1e-6
psi0 = (eps * u0).astype(complex)
t0 = time.perf_counter()
run = evolve(prob, psi0, mu, 10.0, dt=5e-3)
t1 = time.perf_counter()
print(f"evolve t=10 took {t1-t0:.2f}s ({(t1-t0)/2000*1e6:.0f} us/step)")
# expected: psi(t) = eps u0 exp(-i (om0 - mu) t)
T = run.times[-1]
expected = eps * np.exp(-1j * (om[0] - mu) * T)
got = grid.inner(u0, run.snapshots[-1].values)
print("linear phase error:", abs(got - expected), " rel:", abs(got - expected) / eps)
print("norm drift:", np.max(np.abs(run.norm_series - run.norm_series[0])) / run.norm_series[0])
