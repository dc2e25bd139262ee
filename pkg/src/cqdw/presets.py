"""Named scenario presets: figure-data runs and regression targets.

Each of the twelve figures has a preset whose artifacts carry the data needed
to re-plot it; two more presets pin the headline symmetry-breaking points for
regression, and one wraps the absorption-model cross-check. Expected values
follow the source text; each carries its provenance note. Anchors that the
rebuilt pipeline reproduces only approximately (the Fig. 5 caption numbers,
see the acceptance suite) are deliberately not duplicated here: `regress`
targets are the quantities this pipeline is expected to hit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .config import (
    DynamicsConfig,
    InteractionConfig,
    OverlapsConfig,
    RunConfig,
    ScanConfig,
    TwoModeConfig,
)


class PresetError(KeyError):
    """Unknown preset name; the message lists the catalogue."""


@dataclass(frozen=True)
class RegressionTarget:
    """One expected quantity with tolerance and paper location."""

    quantity: str
    value: float
    tolerance: float
    provenance: str

    def __post_init__(self):
        if not self.provenance.strip():
            raise ValueError(f"target {self.quantity} is missing its provenance note")
        if not self.tolerance > 0:
            raise ValueError(f"target {self.quantity} needs a positive tolerance")


@dataclass(frozen=True)
class ScenarioPreset:
    name: str
    subcommand: str
    config: RunConfig
    expected: tuple[RegressionTarget, ...] = ()
    note: str = ""


_SCAN_DUAL = ScanConfig(mu_min=-0.15, mu_max=0.16, direction=-1)


def _interaction(sigma=1.0, s=1, delta=-1, family="gaussian"):
    return InteractionConfig(family=family, sigma=sigma, s=s, delta=delta)


def _catalogue() -> dict[str, ScenarioPreset]:
    base = RunConfig()
    presets = [
        ScenarioPreset(
            name="fig01-linear-modes",
            subcommand="spectrum",
            config=base,
            expected=(
                RegressionTarget("omega0", 0.13282, 5e-4, "Sec. II.A, lowest doublet"),
                RegressionTarget("omega1", 0.15571, 5e-4, "Sec. II.A, lowest doublet"),
            ),
            note="double-well potential and its lowest mode pair",
        ),
        ScenarioPreset(
            name="fig02-overlaps-gaussian",
            subcommand="overlaps",
            config=replace(base, overlaps=OverlapsConfig(recompute_thresholds=True)),
            expected=(
                RegressionTarget("sigma_b", 2.96, 0.05, "Sec. II.A, Gaussian regime boundary"),
                RegressionTarget("sigma_c", 9.15, 0.15, "Sec. II.A, Gaussian regime boundary"),
            ),
            note="overlap integrals vs kernel range, Gaussian kernel",
        ),
        ScenarioPreset(
            name="fig03-overlaps-exponential",
            subcommand="overlaps",
            config=replace(
                base,
                interaction=_interaction(family="exponential"),
                overlaps=OverlapsConfig(recompute_thresholds=True),
            ),
            expected=(
                RegressionTarget("sigma_b", 1.56, 0.05, "Sec. II.A, exponential regime boundary"),
                RegressionTarget("sigma_c", 7.01, 0.15, "Sec. II.A, exponential regime boundary"),
            ),
            note="overlap integrals vs kernel range, exponential kernel",
        ),
        ScenarioPreset(
            name="fig04-critical-norms",
            subcommand="twomode",
            config=base,
            expected=(
                RegressionTarget(
                    "n23_coalescence_sigma", 7.52, 0.1, "Sec. II.B, N2/N3 coalescence"
                ),
            ),
            note="critical norms of the reduction vs kernel range",
        ),
        ScenarioPreset(
            name="fig05-phase-portrait",
            subcommand="twomode",
            config=replace(base, twomode=TwoModeConfig(portrait_norms=(5.0,))),
            note="two-mode phase portraits at sigma=1, N=5",
        ),
        ScenarioPreset(
            name="fig06-twomode-stability",
            subcommand="twomode",
            config=replace(base, interaction=_interaction(sigma=0.1)),
            expected=(
                RegressionTarget(
                    "n2_critical", 0.14, 0.02, "Sec. II.B Fig. 6, antisym lambda^2 crossing"
                ),
                RegressionTarget(
                    "n3_critical", 4.63, 0.05, "Sec. II.B Fig. 6, antisym lambda^2 crossing"
                ),
            ),
            note="reduction stability windows at sigma=0.1",
        ),
        ScenarioPreset(
            name="fig07-branches-sigma01",
            subcommand="continue",
            config=replace(base, interaction=_interaction(sigma=0.1)),
            expected=(
                RegressionTarget("anti_ssb_mu", 0.1686, 0.002, "Sec. III.A, sigma=0.1 SSB"),
                RegressionTarget(
                    "anti_restore_mu", 0.381, 0.005, "Sec. III.A, sigma=0.1 restoring merge"
                ),
                RegressionTarget(
                    "sym_ssb_mu", 0.359, 0.005, "Sec. III.A, sigma=0.1 symmetric pitchfork"
                ),
            ),
            note="bifurcation diagram, sigma=0.1",
        ),
        ScenarioPreset(
            name="fig08-branches-sigma1",
            subcommand="continue",
            config=base,
            expected=(
                RegressionTarget("anti_ssb_mu", 0.168, 0.002, "Sec. III.A, sigma=1 SSB"),
                RegressionTarget(
                    "anti_restore_mu", 0.374, 0.005, "Sec. III.A, sigma=1 restoring merge"
                ),
                RegressionTarget(
                    "sym_ssb_mu", 0.355, 0.005, "Sec. III.A, sigma=1 symmetric pitchfork"
                ),
            ),
            note="bifurcation diagram, sigma=1",
        ),
        ScenarioPreset(
            name="fig09-branches-sigma8",
            subcommand="continue",
            config=replace(base, interaction=_interaction(sigma=8.0)),
            expected=(
                RegressionTarget("anti_ssb_mu", 0.195, 0.003, "Sec. III.A, sigma=8 SSB"),
            ),
            note="bifurcation diagram, sigma=8 (restoring merge reported in events)",
        ),
        ScenarioPreset(
            name="fig10-branches-defocusing",
            subcommand="continue",
            config=replace(base, interaction=_interaction(s=-1, delta=1), scan=_SCAN_DUAL),
            expected=(
                RegressionTarget(
                    "sym_ssb_mu", 0.1212, 0.002, "Sec. III.A, (s,delta)=(-1,1) SSB"
                ),
                RegressionTarget(
                    "sym_restore_mu", -0.0727, 0.003, "Sec. III.A, (s,delta)=(-1,1) restoring"
                ),
                RegressionTarget(
                    "anti_ssb_mu", -0.0465, 0.003, "Sec. III.A, (s,delta)=(-1,1) antisym event"
                ),
            ),
            note="bifurcation diagram, defocusing cubic / focusing quintic",
        ),
        ScenarioPreset(
            name="fig11-breaking-density",
            subcommand="evolve",
            config=base,
            note="space-time density of the symmetry-breaking runs (mu=0.19, 0.25)",
        ),
        ScenarioPreset(
            name="fig12-phase-plane",
            subcommand="evolve",
            config=base,
            note="phase-plane projections of the symmetry-breaking runs",
        ),
        ScenarioPreset(
            name="sigma01-antisym",
            subcommand="continue",
            config=replace(
                base,
                interaction=_interaction(sigma=0.1),
                scan=ScanConfig(families=("anti",)),
            ),
            expected=(
                RegressionTarget("anti_ssb_mu", 0.1686, 0.002, "Sec. III.A, sigma=0.1 SSB"),
                RegressionTarget(
                    "anti_restore_mu", 0.381, 0.005, "Sec. III.A, sigma=0.1 restoring merge"
                ),
            ),
            note="headline antisymmetric symmetry-breaking regression",
        ),
        ScenarioPreset(
            name="sigma1-focusing",
            subcommand="continue",
            config=replace(
                base,
                interaction=_interaction(s=-1, delta=1),
                scan=replace(_SCAN_DUAL, families=("sym",)),
            ),
            expected=(
                RegressionTarget(
                    "sym_ssb_mu", 0.1212, 0.002, "Sec. III.A, symmetry breaking at mu=0.1212"
                ),
                RegressionTarget(
                    "sym_restore_mu", -0.0727, 0.003, "Sec. III.A, symmetric branch restoring"
                ),
            ),
            note="focusing-quintic symmetric symmetry-breaking regression",
        ),
        ScenarioPreset(
            name="thermal-check",
            subcommand="thermal",
            config=base,
            expected=(
                RegressionTarget(
                    "screened_poisson_max_diff",
                    0.0,
                    1e-6,
                    "Appendix, saturable absorption model",
                ),
            ),
            note="screened-Poisson vs exponential-kernel equivalence",
        ),
    ]
    return {p.name: p for p in presets}


PRESETS = _catalogue()


def get_preset(name: str) -> ScenarioPreset:
    if name not in PRESETS:
        known = ", ".join(sorted(PRESETS))
        raise PresetError(f"unknown preset {name!r}; available: {known}")
    return PRESETS[name]
