"""Command-line pipeline: one JSON config in, CSV/JSON artifacts out.

Every subcommand writes into its own output directory: the resolved config
(config.json), the declared artifacts, and a manifest.json naming each file
alongside the sha256 config hash and any headline quantities the run
produced. Nothing written contains timestamps or machine state, so a repeated
run with the same config and seed is byte-identical. Failures are reported as
one JSON object on stderr (machine-readable) with a nonzero exit status;
configuration problems arrive all at once in the `fields` list.

Fan-out: independent scenario runs (the per-mu evolutions) are distributed
over a thread pool capped by the CQDW_WORKERS environment variable
(default 1); per-run seeds derive from the config seed and the scenario
index, not the scheduling order.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import (
    ConfigError,
    RunConfig,
    config_hash,
    config_to_json,
    load_config,
)
from .continuation import (
    ContinuationSettings,
    StationaryProblem,
    continue_branch,
    detect_pitchfork,
    make_state,
    newton_solve,
    seed_daughter,
    seed_from_mode,
)
from .discretization import (
    ConvolutionPlan,
    GridFunction,
    Kernel,
    PotentialParams,
    build_grid,
    grid_function_from_json,
    grid_function_to_json,
)
from .dynamics import (
    DynamicsError,
    evolve,
    growth_rate,
    imbalance_series,
    onset_time,
    perturb_state,
    project_phase_plane,
    solve_screened_poisson,
)
from .overlaps import (
    REFERENCE_THRESHOLDS,
    ETA_LABELS,
    RegimeThresholds,
    classify_regime,
    overlap_sweep,
    recompute_thresholds,
    shared_kernel_overlaps,
)
from .presets import PRESETS, PresetError, get_preset
from .spectrum import discretize_operator, lowest_eigenpairs, rotated_basis
from .stability import build_bdg, dominant_unstable_mode, solve_bdg, sweep_branch
from .twomode import (
    ModeParams,
    TwoModeState,
    critical_norms,
    fixed_point_census,
    integrate_orbit,
)

WORKER_ENV = "CQDW_WORKERS"
SUBCOMMANDS = (
    "spectrum",
    "overlaps",
    "twomode",
    "continue",
    "stability",
    "evolve",
    "thermal",
    "regress",
)


class CliError(RuntimeError):
    """Subcommand-level failure with a user-addressable message."""


def worker_count() -> int:
    raw = os.environ.get(WORKER_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise CliError(f"{WORKER_ENV} must be an integer, got {raw!r}") from None


# --- deterministic artifact writing -------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".17g")
    return str(value)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --- shared pipeline builders --------------------------------------------------


def _build_grid(config: RunConfig):
    return build_grid(config.grid.half_width, config.grid.spacing)


def _build_potential(config: RunConfig) -> PotentialParams:
    p = config.potential
    return PotentialParams(p.trap_frequency, p.barrier_height, p.barrier_width)


def _build_basis(grid, potential: PotentialParams):
    op = discretize_operator(grid, potential)
    omegas, modes = lowest_eigenpairs(op, 2)
    return rotated_basis(grid, omegas, modes)


def _build_problem(config: RunConfig) -> StationaryProblem:
    grid = _build_grid(config)
    kernel = Kernel(config.interaction.family, config.interaction.sigma)
    return StationaryProblem(
        grid,
        _build_potential(config),
        kernel,
        kernel,
        s=config.interaction.s,
        delta=config.interaction.delta,
    )


def _family_mode(basis, family: str):
    if family == "sym":
        return basis.u0, basis.omega0
    return basis.u1, basis.omega1


def _state_at_mu(problem, basis, family: str, mu_target: float, delta_mu: float):
    """Walk the parent branch from the linear limit to the requested mu."""
    mode, omega = _family_mode(basis, family)
    state = seed_from_mode(problem, mode, omega, delta_mu=problem.s * delta_mu)
    while abs(state.mu - mu_target) > 1e-12:
        step = math.copysign(
            min(delta_mu, abs(mu_target - state.mu)), mu_target - state.mu
        )
        state = newton_solve(problem, state.psi.values.real, state.mu + step)
        if state.norm < 1e-8:
            raise CliError(
                f"{family} branch ran into the vacuum before mu={mu_target}; "
                "the state does not exist there"
            )
    return state


def _trace_branches(problem, basis, config: RunConfig):
    """(family, branch, pitchforks) per requested family, daughters appended."""
    sc = config.scan
    settings = ContinuationSettings(
        mu_min=sc.mu_min, mu_max=sc.mu_max, norm_cap=sc.norm_cap, direction=sc.direction
    )
    traced = []
    for family in sc.families:
        mode, omega = _family_mode(basis, family)
        seed = seed_from_mode(
            problem, mode, omega, delta_mu=problem.s * sc.seed_delta_mu
        )
        branch = continue_branch(problem, seed, settings)
        pitchforks = detect_pitchfork(problem, branch)
        traced.append((family, branch, pitchforks))
        if sc.trace_daughters and pitchforks:
            daughter_seed = seed_daughter(problem, pitchforks[0])
            daughter = continue_branch(problem, daughter_seed, settings)
            traced.append((f"asym-{family}", daughter, []))
    return traced


def _state_payload(state, family: str) -> dict:
    return {
        "mu": state.mu,
        "norm": state.norm,
        "family": family,
        "field": json.loads(grid_function_to_json(state.psi)),
    }


# --- subcommand runners --------------------------------------------------------


def run_spectrum(config: RunConfig, out: Path, seed: int):
    grid = _build_grid(config)
    basis = _build_basis(grid, _build_potential(config))
    _write_json(
        out / "eigenvalues.json",
        {
            "omega0": basis.omega0,
            "omega1": basis.omega1,
            "mean_Omega": basis.Omega,
            "half_splitting_omega": basis.omega,
        },
    )
    _write_csv(
        out / "modes.csv",
        ["x", "u0", "u1", "phi_left", "phi_right"],
        zip(grid.points, basis.u0, basis.u1, basis.phi_left, basis.phi_right),
    )
    return ["eigenvalues.json", "modes.csv"], {
        "omega0": basis.omega0,
        "omega1": basis.omega1,
    }


def run_overlaps(config: RunConfig, out: Path, seed: int):
    grid = _build_grid(config)
    basis = _build_basis(grid, _build_potential(config))
    ov = config.overlaps
    family = config.interaction.family
    if ov.log_spaced:
        sigmas = np.geomspace(ov.sigma_min, ov.sigma_max, ov.count)
    else:
        sigmas = np.linspace(ov.sigma_min, ov.sigma_max, ov.count)
    table = overlap_sweep(basis, family, sigmas)
    if ov.recompute_thresholds:
        thresholds = recompute_thresholds(basis, family)
    else:
        ref_b, ref_c = REFERENCE_THRESHOLDS[family]
        thresholds = RegimeThresholds(kernel_family=family, sigma_b=ref_b, sigma_c=ref_c)
    rows = [
        [sigma, *values, classify_regime(float(sigma), thresholds)]
        for sigma, values in zip(sigmas, table)
    ]
    _write_csv(out / "overlaps.csv", ["sigma", *ETA_LABELS, "regime"], rows)
    _write_json(
        out / "thresholds.json",
        {
            "kernel_family": family,
            "sigma_b": thresholds.sigma_b,
            "sigma_c": thresholds.sigma_c,
            "recomputed": ov.recompute_thresholds,
        },
    )
    return ["overlaps.csv", "thresholds.json"], {
        "sigma_b": thresholds.sigma_b,
        "sigma_c": thresholds.sigma_c,
    }


def _coalescence_sigma(basis, family, s, delta, lo, hi):
    """Largest-range boundary where the antisym critical pair {n2, n3} ceases."""

    def pair_exists(sigma: float) -> bool:
        ov = shared_kernel_overlaps(basis, family, sigma)
        params = ModeParams.from_overlaps(ov, basis, s, delta, 1.0)
        crit = critical_norms(params)
        return crit.n2 is not None and crit.n3 is not None

    if not pair_exists(lo) or pair_exists(hi):
        return None
    a, b = lo, hi
    while b - a > 1e-4:
        mid = 0.5 * (a + b)
        if pair_exists(mid):
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def run_twomode(config: RunConfig, out: Path, seed: int):
    grid = _build_grid(config)
    basis = _build_basis(grid, _build_potential(config))
    inter = config.interaction
    tm = config.twomode
    ov = shared_kernel_overlaps(basis, inter.family, inter.sigma)

    def params_at(norm: float) -> ModeParams:
        return ModeParams.from_overlaps(ov, basis, inter.s, inter.delta, norm)

    fp_rows = []
    for norm in np.linspace(tm.n_min, tm.n_max, tm.n_count):
        for fp in fixed_point_census(params_at(float(norm))):
            fp_rows.append(
                [norm, fp.family, fp.state.z, fp.state.theta, fp.lambda_sq, fp.stability]
            )
    _write_csv(
        out / "fixed_points.csv",
        ["N", "family", "z", "theta", "lambda_sq", "type"],
        fp_rows,
    )

    crit_rows = []
    for sigma in np.geomspace(tm.sigma_min, tm.sigma_max, tm.sigma_count):
        co = shared_kernel_overlaps(basis, inter.family, float(sigma))
        crit = critical_norms(
            ModeParams.from_overlaps(co, basis, inter.s, inter.delta, 1.0)
        )
        crit_rows.append([sigma, crit.n0, crit.n1, crit.n2, crit.n3])
    _write_csv(
        out / "critical_norms.csv", ["sigma", "n0", "n1", "n2", "n3"], crit_rows
    )

    max_drift = 0.0
    portrait_files = []
    for norm in tm.portrait_norms:
        params = params_at(norm)
        orbit_rows = []
        orbit_id = 0
        for z0 in np.linspace(-0.75, 0.75, 7):
            for theta0 in (0.0, math.pi):
                orbit = integrate_orbit(
                    TwoModeState(float(z0), theta0), params, tm.portrait_t_end
                )
                href = orbit.hamiltonian[0]
                drift = np.max(np.abs(orbit.hamiltonian - href)) / max(abs(href), 1e-12)
                max_drift = max(max_drift, float(drift))
                stride = max(1, orbit.t.size // 2000)
                for k in range(0, orbit.t.size, stride):
                    orbit_rows.append(
                        [orbit_id, orbit.t[k], orbit.z[k], orbit.theta[k], orbit.hamiltonian[k]]
                    )
                orbit_id += 1
        name = f"portrait_N{norm:g}.csv"
        _write_csv(out / name, ["orbit", "t", "z", "theta", "hamiltonian"], orbit_rows)
        portrait_files.append(name)

    crit_here = critical_norms(params_at(1.0))
    quantities = {}
    for label, value in crit_here.present().items():
        quantities[f"{label}_critical"] = value
    coalescence = _coalescence_sigma(
        basis, inter.family, inter.s, inter.delta, tm.sigma_min, tm.sigma_max
    )
    if coalescence is not None:
        quantities["n23_coalescence_sigma"] = coalescence
    _write_json(
        out / "twomode_summary.json",
        {
            "sigma": inter.sigma,
            "critical_norms": {k: crit_here.present().get(k) for k in ("n0", "n1", "n2", "n3")},
            "n23_coalescence_sigma": coalescence,
            "max_hamiltonian_drift": max_drift,
        },
    )
    artifacts = ["fixed_points.csv", "critical_norms.csv", "twomode_summary.json"]
    artifacts.extend(portrait_files)
    return artifacts, quantities


def run_continue(config: RunConfig, out: Path, seed: int):
    problem = _build_problem(config)
    basis = _build_basis(problem.grid, _build_potential(config))
    traced = _trace_branches(problem, basis, config)

    rows = []
    events = []
    pitchfork_entries = []
    termination = {}
    quantities = {}
    artifacts = ["branches.csv", "events.json"]
    for family, branch, pitchforks in traced:
        spectra = sweep_branch(problem, branch.states)
        for state, spec in zip(branch.states, spectra):
            rows.append([state.mu, state.norm, family, spec.unstable_count])
        for event in branch.events:
            events.append(
                {"family": family, "kind": event.kind, "mu": event.mu, "norm": event.norm}
            )
        termination[family] = branch.termination
        for k, pf in enumerate(pitchforks):
            pitchfork_entries.append(
                {"family": family, "mu": pf.state.mu, "norm": pf.state.norm}
            )
            key = "ssb" if k == 0 else ("restore" if k == 1 else f"pitchfork{k + 1}")
            quantities[f"{family}_{key}_mu"] = pf.state.mu
        if config.scan.dump_profiles:
            states_dir = out / "states"
            states_dir.mkdir(exist_ok=True)
            for k, state in enumerate(branch.states):
                name = f"states/{family}_{k:04d}.json"
                _write_json(out / name, _state_payload(state, family))
                artifacts.append(name)

    _write_csv(out / "branches.csv", ["mu", "N", "symmetry", "n_unstable"], rows)
    _write_json(
        out / "events.json",
        {"events": events, "pitchforks": pitchfork_entries, "termination": termination},
    )
    return artifacts, quantities


def _load_states(path: Path, problem):
    """Stored state payloads from a file or directory, shape-checked."""
    if path.is_dir():
        files = sorted(path.glob("*.json"))
        if not files:
            raise CliError(f"no state files (*.json) found in {path}")
    else:
        if not path.exists():
            raise FileNotFoundError(None, "state file not found", str(path))
        files = [path]
    states = []
    for file in files:
        with open(file, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        gf = grid_function_from_json(json.dumps(payload["field"]))
        if gf.grid.n_points != problem.grid.n_points or not math.isclose(
            gf.grid.spacing, problem.grid.spacing
        ):
            raise CliError(f"{file}: stored grid does not match the configured grid")
        states.append(make_state(problem, np.real(gf.values), float(payload["mu"])))
    return states


def run_stability(config: RunConfig, out: Path, seed: int):
    problem = _build_problem(config)
    if config.stability.states_path:
        states = _load_states(Path(config.stability.states_path), problem)
    else:
        basis = _build_basis(problem.grid, _build_potential(config))
        states = []
        for _, branch, _ in _trace_branches(problem, basis, config):
            states.extend(branch.states)
    rows = []
    spectra_payload = []
    for state in states:
        spectrum = solve_bdg(build_bdg(problem, state))
        rows.append([state.mu, state.norm, spectrum.max_real_part, spectrum.unstable_count])
        if config.stability.full_spectra:
            spectra_payload.append(
                {
                    "mu": state.mu,
                    "norm": state.norm,
                    "eigenvalues_re": list(np.real(spectrum.eigenvalues)),
                    "eigenvalues_im": list(np.imag(spectrum.eigenvalues)),
                }
            )
    _write_csv(
        out / "stability.csv", ["mu", "N", "max_re_lambda", "unstable_count"], rows
    )
    artifacts = ["stability.csv"]
    if config.stability.full_spectra:
        _write_json(out / "spectra.json", spectra_payload)
        artifacts.append("spectra.json")
    quantities = {}
    if rows:
        quantities["max_re_lambda"] = max(row[2] for row in rows)
    return artifacts, quantities


def run_evolve(config: RunConfig, out: Path, seed: int):
    problem = _build_problem(config)
    basis = _build_basis(problem.grid, _build_potential(config))
    dy = config.dynamics
    density_stride = max(1, int(round(dy.snapshot_dt / dy.phase_dt)))

    def one_run(index_mu):
        index, mu = index_mu
        state = _state_at_mu(problem, basis, dy.family, mu, config.scan.seed_delta_mu)
        if dy.perturbation == "eigenvector":
            mode = dominant_unstable_mode(build_bdg(problem, state))
            initial = perturb_state(state, dy.amplitude, direction=mode.direction)
        elif dy.perturbation == "random":
            initial = perturb_state(
                state, dy.amplitude, rng=np.random.default_rng(seed + index)
            )
        else:
            initial = GridFunction(problem.grid, state.psi.values.astype(complex))
        run = evolve(problem, initial, mu, dy.t_end, dt=dy.dt, snapshot_dt=dy.phase_dt)
        tag = format(mu, "g")

        density_name = f"density_mu{tag}.csv"
        header = ["t", *[format(x, ".17g") for x in problem.grid.points]]
        density_rows = [
            [run.times[k], *np.abs(run.snapshots[k].values) ** 2]
            for k in range(0, len(run.snapshots), density_stride)
        ]
        _write_csv(out / density_name, header, density_rows)

        phase_name = f"phase_mu{tag}.csv"
        series = project_phase_plane(run, basis)
        _write_csv(
            out / phase_name,
            ["t", "z", "theta", "residual_fraction", "theta_defined", "N"],
            zip(
                series.times,
                series.z,
                series.theta,
                series.residual_fraction,
                series.defined,
                run.norm_series,
            ),
        )

        quantities = {}
        onset = onset_time(run)
        if onset is not None:
            quantities[f"onset_mu{tag}"] = onset
        try:
            quantities[f"growth_rate_mu{tag}"] = growth_rate(run)
        except DynamicsError:
            pass
        drift = float(
            np.max(np.abs(run.norm_series - run.norm_series[0]))
            / max(run.norm_series[0], 1e-300)
        )
        return [density_name, phase_name], quantities, drift

    jobs = list(enumerate(dy.mu_list))
    cap = worker_count()
    if cap > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=cap) as pool:
            results = list(pool.map(one_run, jobs))
    else:
        results = [one_run(job) for job in jobs]

    artifacts = []
    quantities = {}
    for names, q, drift in results:
        artifacts.extend(names)
        quantities.update(q)
        quantities["max_norm_drift"] = max(quantities.get("max_norm_drift", 0.0), drift)
    return artifacts, quantities


def run_thermal(config: RunConfig, out: Path, seed: int):
    grid = _build_grid(config)
    th = config.thermal
    x = grid.points
    beam = th.beam_amplitude * np.exp(-((x / th.beam_width) ** 2))
    intensity = beam**2
    solved = solve_screened_poisson(GridFunction(grid, intensity), th.d, th.sigma0)
    plan = ConvolutionPlan(Kernel("exponential", math.sqrt(th.d)), grid)
    convolved = plan.apply(th.sigma0 * (intensity - intensity**2))
    beam_diff = float(np.max(np.abs(solved.values - convolved)))

    rng = np.random.default_rng(seed)
    random_diff = 0.0
    for _ in range(th.random_sources):
        source = rng.uniform(0.0, 1.0, grid.n_points)
        m = solve_screened_poisson(GridFunction(grid, source), th.d, th.sigma0)
        ref = plan.apply(th.sigma0 * (source - source**2))
        random_diff = max(random_diff, float(np.max(np.abs(m.values - ref))))

    _write_csv(
        out / "absorption.csv",
        ["x", "intensity", "m", "m_convolution"],
        zip(x, intensity, solved.values, convolved),
    )
    worst = max(beam_diff, random_diff)
    _write_json(
        out / "thermal_check.json",
        {
            "d": th.d,
            "sigma0": th.sigma0,
            "max_diff_beam": beam_diff,
            "max_diff_random": random_diff,
            "tolerance": 1e-6,
            "equivalent": worst <= 1e-6,
        },
    )
    return ["absorption.csv", "thermal_check.json"], {
        "screened_poisson_max_diff": worst
    }


RUNNERS = {
    "spectrum": run_spectrum,
    "overlaps": run_overlaps,
    "twomode": run_twomode,
    "continue": run_continue,
    "stability": run_stability,
    "evolve": run_evolve,
    "thermal": run_thermal,
}


# --- regression ----------------------------------------------------------------


def run_regress(preset_name: str, out: Path, seed_override):
    preset = get_preset(preset_name)
    config = preset.config
    if seed_override is not None:
        config = replace(config, seed=seed_override)
    artifacts_dir = out / "artifacts"
    artifacts_dir.mkdir(parents=True, exist_ok=True)

    pipeline_error = None
    quantities = {}
    sub_artifacts = []
    try:
        sub_artifacts, quantities = RUNNERS[preset.subcommand](
            config, artifacts_dir, config.seed
        )
    except Exception as exc:  # pipeline failure -> ERROR rows, not FAIL
        pipeline_error = f"{type(exc).__name__}: {exc}"

    rows = []
    for target in preset.expected:
        if pipeline_error is not None:
            status, measured = "ERROR", None
        elif target.quantity not in quantities:
            status, measured = "ERROR", None
        else:
            measured = quantities[target.quantity]
            status = (
                "PASS" if abs(measured - target.value) <= target.tolerance else "FAIL"
            )
        rows.append(
            {
                "quantity": target.quantity,
                "expected": target.value,
                "measured": measured,
                "tolerance": target.tolerance,
                "status": status,
                "provenance": target.provenance,
            }
        )

    vacuous = not preset.expected
    statuses = {row["status"] for row in rows}
    if pipeline_error is not None:
        overall = "ERROR"
    elif "ERROR" in statuses:
        overall = "ERROR"
    elif "FAIL" in statuses:
        overall = "FAIL"
    else:
        overall = "PASS"

    report = {
        "preset": preset.name,
        "subcommand": preset.subcommand,
        "status": overall,
        "rows": rows,
        "pipeline_error": pipeline_error,
    }
    if vacuous:
        report["warning"] = "preset has no regression targets; result is vacuous"
    _write_json(out / "report.json", report)
    _write_csv(
        out / "report.csv",
        ["quantity", "expected", "measured", "tolerance", "status", "provenance"],
        [
            [r["quantity"], r["expected"], r["measured"], r["tolerance"], r["status"], r["provenance"]]
            for r in rows
        ],
    )

    print(f"preset {preset.name} ({preset.subcommand})")
    for r in rows:
        measured = "-" if r["measured"] is None else format(r["measured"], ".6g")
        print(
            f"  {r['quantity']:<26} expected {r['expected']:>10.6g} +- {r['tolerance']:<8.3g}"
            f" measured {measured:>10} {r['status']:<5} [{r['provenance']}]"
        )
    if vacuous:
        print("  WARNING: preset has no regression targets; result is vacuous")
    if pipeline_error is not None:
        print(f"  pipeline error: {pipeline_error}")
    print(f"result: {overall}")

    artifacts = ["report.json", "report.csv"]
    artifacts.extend(f"artifacts/{name}" for name in sub_artifacts)
    _finish_run(out, "regress", config, config.seed, artifacts, quantities, preset.name)
    return 0 if overall == "PASS" else 1


# --- entry point ----------------------------------------------------------------


def _finish_run(out, subcommand, config, seed, artifacts, quantities, preset=None):
    with open(out / "config.json", "w", encoding="utf-8") as fh:
        fh.write(config_to_json(config))
        fh.write("\n")
    manifest = {
        "subcommand": subcommand,
        "preset": preset,
        "seed": seed,
        "config_hash": config_hash(config),
        "artifacts": sorted(artifacts + ["config.json"]),
        "quantities": quantities,
    }
    _write_json(out / "manifest.json", manifest)


def _resolve_config(args) -> RunConfig:
    if args.config and args.preset:
        raise CliError("pass either --config or --preset, not both")
    if args.preset:
        preset = get_preset(args.preset)
        if preset.subcommand != args.subcommand:
            raise CliError(
                f"preset {preset.name!r} belongs to subcommand {preset.subcommand!r}"
            )
        config = preset.config
    elif args.config:
        config = load_config(args.config)
    else:
        config = RunConfig()
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cqdw",
        description="Double-well states of a cubic-quintic nonlocal Schrodinger equation.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="path to a JSON run configuration")
        p.add_argument("--out", help="output directory (default runs/<subcommand>)")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--preset", help="named scenario preset")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.subcommand == "regress":
            if not args.preset:
                raise CliError("regress requires --preset")
            out = Path(args.out or f"runs/regress-{args.preset}")
            out.mkdir(parents=True, exist_ok=True)
            return run_regress(args.preset, out, args.seed)
        config = _resolve_config(args)
        out = Path(args.out or f"runs/{args.subcommand}")
        out.mkdir(parents=True, exist_ok=True)
        artifacts, quantities = RUNNERS[args.subcommand](config, out, config.seed)
        _finish_run(
            out, args.subcommand, config, config.seed, artifacts, quantities, args.preset
        )
        return 0
    except ConfigError as exc:
        _emit_error({"error": "ConfigError", "message": str(exc), "fields": exc.problems})
        return 2
    except PresetError as exc:
        _emit_error({"error": "PresetError", "message": str(exc.args[0])})
        return 2
    except FileNotFoundError as exc:
        _emit_error(
            {
                "error": "FileNotFoundError",
                "message": str(exc),
                "path": exc.filename or getattr(exc, "filename2", None),
            }
        )
        return 2
    except CliError as exc:
        _emit_error({"error": "CliError", "message": str(exc)})
        return 2
    except Exception as exc:
        _emit_error({"error": type(exc).__name__, "message": str(exc)})
        return 1


def _emit_error(payload) -> None:
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
