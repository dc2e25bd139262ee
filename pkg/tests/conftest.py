import pytest

from cqdw.continuation import (
    ContinuationSettings,
    StationaryProblem,
    continue_branch,
    detect_pitchfork,
    newton_solve,
    seed_daughter,
    seed_from_mode,
)
from cqdw.discretization import GAUSSIAN, Kernel, PotentialParams, build_grid
from cqdw.dynamics import evolve, perturb_state
from cqdw.overlaps import shared_kernel_overlaps
from cqdw.spectrum import default_basis
from cqdw.stability import build_bdg, dominant_unstable_mode, solve_bdg, sweep_branch
from cqdw.twomode import ModeParams

# One branch scan per sign/range scenario, shared by the continuation,
# stability and acceptance tests. Window and norm cap are the bifurcation-
# diagram scale; every event of interest sits below N = 6.
SCAN_SCENARIOS = {
    "sigma01": dict(sigma=0.1, s=1, delta=-1, mu_min=0.10, mu_max=0.45, direction=1),
    "sigma1": dict(sigma=1.0, s=1, delta=-1, mu_min=0.10, mu_max=0.45, direction=1),
    "sigma8": dict(sigma=8.0, s=1, delta=-1, mu_min=0.10, mu_max=0.45, direction=1),
    "dual1": dict(sigma=1.0, s=-1, delta=1, mu_min=-0.15, mu_max=0.16, direction=-1),
}


@pytest.fixture(scope="session")
def grid():
    return build_grid(20.0, 0.1)


@pytest.fixture(scope="session")
def basis(grid):
    return default_basis(grid)


@pytest.fixture(scope="session")
def overlaps_sigma01(basis):
    return shared_kernel_overlaps(basis, GAUSSIAN, 0.1)


@pytest.fixture(scope="session")
def overlaps_sigma1(basis):
    return shared_kernel_overlaps(basis, GAUSSIAN, 1.0)


@pytest.fixture(scope="session")
def overlaps_sigma8(basis):
    return shared_kernel_overlaps(basis, GAUSSIAN, 8.0)


@pytest.fixture
def make_params(basis, overlaps_sigma01, overlaps_sigma1, overlaps_sigma8):
    """Factory for regime-filtered ModeParams at the three reference ranges."""
    table = {0.1: overlaps_sigma01, 1.0: overlaps_sigma1, 8.0: overlaps_sigma8}

    def make(sigma=1.0, s=1, delta=-1, N=1.0, mu=None):
        return ModeParams.from_overlaps(table[sigma], basis, s, delta, N, mu)

    return make


@pytest.fixture(scope="session")
def branch_suite(grid, basis):
    """Symmetric/antisymmetric branch scans with pitchfork detection.

    For each scenario: the stationary problem, the scan settings, both parent
    branches seeded from the linear modes, and their detected pitchforks.
    """
    suite = {}
    pot = PotentialParams()
    for key, sc in SCAN_SCENARIOS.items():
        kernel = Kernel(GAUSSIAN, sc["sigma"])
        problem = StationaryProblem(grid, pot, kernel, kernel, s=sc["s"], delta=sc["delta"])
        settings = ContinuationSettings(
            mu_min=sc["mu_min"],
            mu_max=sc["mu_max"],
            norm_cap=6.0,
            direction=sc["direction"],
        )
        entry = {"problem": problem, "settings": settings}
        for name, mode, omega_k in (("sym", basis.u0, basis.omega0), ("anti", basis.u1, basis.omega1)):
            seed = seed_from_mode(problem, mode, omega_k, delta_mu=sc["s"] * 0.005)
            branch = continue_branch(problem, seed, settings)
            entry[name] = branch
            entry[f"{name}_pitchforks"] = detect_pitchfork(problem, branch)
        suite[key] = entry
    return suite


@pytest.fixture(scope="session")
def ssb_daughter(branch_suite):
    """Asymmetric branch grown from the first antisymmetric pitchfork (sigma=0.1)."""
    entry = branch_suite["sigma01"]
    pf = entry["anti_pitchforks"][0]
    daughter = seed_daughter(entry["problem"], pf)
    branch = continue_branch(entry["problem"], daughter, entry["settings"])
    return entry, pf, branch


@pytest.fixture(scope="session")
def breaking_runs(branch_suite):
    """Eigenvector-kicked evolutions of sigma=1 antisymmetric states.

    One run per chemical potential of the dynamics story; each entry carries
    the refined state, its strongest growth rate, the kicked mode and the run.
    """
    entry = branch_suite["sigma1"]
    problem = entry["problem"]
    runs = {}
    for mu, t_end in ((0.19, 300.0), (0.25, 150.0)):
        nearest = min(entry["anti"].states, key=lambda s: abs(s.mu - mu))
        state = newton_solve(problem, nearest.psi.values.real, mu)
        op = build_bdg(problem, state)
        mode = dominant_unstable_mode(op)
        init = perturb_state(state, amplitude=1e-3, direction=mode.direction)
        runs[mu] = {
            "state": state,
            "rate": solve_bdg(op).max_real_part,
            "mode": mode,
            "run": evolve(problem, init, mu, t_end),
        }
    return entry, runs


@pytest.fixture(scope="session")
def parent_sweeps(branch_suite):
    """Linearization spectra along the sigma=0.1 and sigma=1 parent branches."""
    sweeps = {}
    for key in ("sigma01", "sigma1"):
        entry = branch_suite[key]
        sweeps[key] = {
            family: sweep_branch(entry["problem"], entry[family].states)
            for family in ("sym", "anti")
        }
    return sweeps
