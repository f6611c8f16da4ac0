"""Built-in simulation scenarios and the scenario runner.

Six bundled scenarios cover the benchmark parameter sets: the human-free
pair (d1 = d2 = 1 stable, 0.01 margin-rule-unstable), the uniform-human
pair (d1 = d2 = 1 stable, 0.001), and the coexistence pair driven by the
sech^2 human profile at r = 1.001 and r = 100.

Each run writes, under ``<out>/<name>/``:

    trajectory.csv   long-format (t, z, x1, x2)
    snapshots.dat    gnuplot-style whitespace blocks
    stability.csv    per-mode eigenvalue table of the reference equilibrium
    energy.csv       energy series (bound column when the decay rate applies)
    summary.txt      one-page report incl. check outcomes
    *.png            figures (unless disabled)

A scenario passes (exit status 0) when all its requested checks pass.
The margin-rule stability verdict and the measured nonlinear outcome are
both reported; for parameter sets where the two disagree the summary
says so explicitly, and the disagreement is not itself a failing check.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import attractor, energy, equilibria
from .dynamics import StateP, Trajectory, integrate, stable_dt, trajectory_to_csv, trajectory_to_gnuplot
from .elliptic import sech2_profile, solve_fisher_steady
from .errors import Blowup, HypothesisFailed, WetlandError
from .grid import Field, build_grid, constant_field
from .params import ModelParams

__all__ = ["Scenario", "ScenarioResult", "builtin_scenarios", "run_scenario"]

RETURN_TOL = 1e-3
SETTLE_TOL = 1e-3
TAIL_FRACTION = 0.1
DEFAULT_GRID_N = 200
DEFAULT_T_END = 200.0
DEFAULT_RECORD_DT = 1.0


@dataclass(frozen=True)
class Scenario:
    """One reproducible experiment configuration."""

    name: str
    params: ModelParams
    x3_mode: str                       # zero | one | profile | sech2
    ic_amplitude: float = 0.05
    ic_mode: int = 1
    t_end: float = DEFAULT_T_END
    dt: float | None = None            # None: largest stable step
    record_dt: float = DEFAULT_RECORD_DT
    checks: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ("trajectory", "snapshots", "stability", "energy", "summary", "figures")
    description: str = ""


@dataclass(eq=False)
class ScenarioResult:
    scenario: Scenario
    trajectory: Trajectory | None
    report: "equilibria.StabilityReport | None"
    region: attractor.AbsorbingRegion
    series: energy.EnergySeries | None
    check_results: dict
    outcome: dict
    failure: str | None = None

    @property
    def passed(self) -> bool:
        return self.failure is None and all(self.check_results.values())


_PARAMS_51 = ModelParams(d1=1.0, d2=1.0, c=1.0, alpha=0.5, m=1.0, d=0.9, h1=0.0, h2=0.0, r=1.0)
_PARAMS_52 = _PARAMS_51.replace(h1=0.1, h2=0.01)
_PARAMS_53 = ModelParams(d1=0.01, d2=0.01, c=1.0, alpha=0.5, m=1.0, d=0.3, h1=0.01, h2=0.3, r=1.001)


def builtin_scenarios() -> dict[str, Scenario]:
    """The six bundled scenarios, keyed by name."""
    scenarios = [
        Scenario(
            name="human-free-stable",
            params=_PARAMS_51,
            x3_mode="zero",
            checks=("return", "settle", "absorb_upper", "energy_bound"),
            description="human-free set with d1 = d2 = 1; perturbation decays back to e1",
        ),
        Scenario(
            name="human-free-unstable",
            params=_PARAMS_51.replace(d1=0.01, d2=0.01),
            x3_mode="zero",
            checks=("settle", "absorb_upper"),
            description=(
                "human-free set with d1 = d2 = 0.01; the margin rule classifies e1 "
                "unstable here while the mode eigenvalues (and the run) say stable"
            ),
        ),
        Scenario(
            name="overdev-stable",
            params=_PARAMS_52,
            x3_mode="one",
            checks=("return", "settle", "absorb_upper", "energy_bound"),
            description="uniform human density one with d1 = d2 = 1; decays back to e2",
        ),
        Scenario(
            name="overdev-unstable",
            params=_PARAMS_52.replace(d1=0.001, d2=0.001),
            x3_mode="one",
            checks=("settle", "absorb_upper"),
            description="uniform human density one with d1 = d2 = 0.001",
        ),
        Scenario(
            name="coexist-stable",
            params=_PARAMS_53,
            x3_mode="sech2",
            checks=("settle", "absorb_upper"),
            description="sech^2 human profile at r = 1.001",
        ),
        Scenario(
            name="coexist-unstable",
            params=_PARAMS_53.replace(r=100.0),
            x3_mode="sech2",
            checks=("depart", "absorb_upper"),
            description="sech^2 human profile at r = 100; departure from the reference state",
        ),
    ]
    return {s.name: s for s in scenarios}


def _x3_field(s: Scenario, grid) -> Field:
    if s.x3_mode == "zero":
        return constant_field(grid, 0.0)
    if s.x3_mode == "one":
        return constant_field(grid, 1.0)
    if s.x3_mode == "sech2":
        return sech2_profile(s.params.r, grid)
    if s.x3_mode == "profile":
        sol = solve_fisher_steady(s.params.r, grid, sech2_profile(s.params.r, grid))
        return sol.profile
    raise WetlandError(f"unknown x3 mode {s.x3_mode!r}")


def _reference_equilibrium(s: Scenario):
    """Constant reference state the initial perturbation is applied to.

    The human-free mode perturbs e1; the other modes perturb e2 (for the
    varying-profile modes this is the uniform-density-one reference, the
    natural constant anchor)."""
    if s.x3_mode == "zero":
        return equilibria.equilibrium_e1(s.params)
    return equilibria.equilibrium_e2(s.params)


def _classification(s: Scenario):
    if s.x3_mode == "zero":
        return equilibria.classify_e1(s.params)
    return equilibria.classify_e2(s.params)


def run_scenario(
    s: Scenario,
    out_dir,
    grid_n: int = DEFAULT_GRID_N,
    figures: bool = True,
) -> ScenarioResult:
    """Run one scenario and write its artifacts under ``out_dir``/name."""
    out = Path(out_dir) / s.name
    out.mkdir(parents=True, exist_ok=True)

    grid = build_grid(grid_n)
    x3 = _x3_field(s, grid)
    eq = _reference_equilibrium(s)
    report = _classification(s)
    region = attractor.absorbing_region(s.params)

    amp = s.ic_amplitude
    bump = amp * np.cos(s.ic_mode * grid.nodes)
    ic = StateP(Field(grid, eq.u + bump), Field(grid, eq.v + bump), t=0.0)
    dt = s.dt if s.dt is not None else stable_dt(grid, s.params)

    failure = None
    traj = None
    try:
        traj = integrate(ic, x3, s.params, t_end=s.t_end, dt=dt, record_dt=s.record_dt)
    except Blowup as exc:
        failure = f"blow-up: {exc}"

    checks: dict[str, bool] = {}
    outcome: dict = {"reference": (eq.u, eq.v), "dt": dt, "grid_n": grid_n}

    delta = q = None
    series = None
    if traj is not None:
        final = traj.final()
        dev_final = max(
            float(np.max(np.abs(final.x1.values - eq.u))),
            float(np.max(np.abs(final.x2.values - eq.v))),
        )
        tail = traj.tail(TAIL_FRACTION)
        drift = max(
            float(np.max(np.abs(tail[-1].x1.values - tail[0].x1.values))),
            float(np.max(np.abs(tail[-1].x2.values - tail[0].x2.values))),
        )
        outcome["final_deviation"] = dev_final
        outcome["tail_drift"] = drift
        outcome["returned"] = dev_final <= RETURN_TOL
        outcome["departed"] = dev_final > amp

        rho = equilibria.spectral_radius(
            equilibria.reaction_jacobian(eq.u, eq.v, report.x3_const, s.params)
        )
        try:
            delta, q = energy.decay_constants(s.params, rho, mu1=1.0, x3=x3)
        except HypothesisFailed:
            delta = q = None
        series = energy.energy_series(traj, delta, q)

        for name in s.checks:
            if name == "return":
                checks[name] = dev_final <= RETURN_TOL
            elif name == "settle":
                checks[name] = drift <= SETTLE_TOL
            elif name == "depart":
                checks[name] = dev_final > amp
            elif name == "absorb_upper":
                checks[name] = attractor.check_absorption(traj, region, TAIL_FRACTION)
            elif name == "energy_bound":
                if delta is None:
                    checks[name] = False
                    outcome["energy_bound_note"] = "decay rate not positive"
                else:
                    holds, _ = energy.verify_energy_bound(traj, delta, q)
                    checks[name] = holds
            else:
                raise WetlandError(f"unknown check {name!r}")
    else:
        checks = {name: False for name in s.checks}

    result = ScenarioResult(
        scenario=s,
        trajectory=traj,
        report=report,
        region=region,
        series=series,
        check_results=checks,
        outcome=outcome,
        failure=failure,
    )

    if traj is not None:
        (out / "trajectory.csv").write_text(trajectory_to_csv(traj))
        (out / "snapshots.dat").write_text(trajectory_to_gnuplot(traj))
        (out / "energy.csv").write_text(energy.energy_series_to_csv(series))
    (out / "stability.csv").write_text(report.to_csv())
    (out / "summary.txt").write_text(_summary_text(result, delta, q))
    if figures and traj is not None:
        from . import plots

        plots.trajectory_heatmaps(traj, out / "trajectory.png")
        plots.spatial_profiles(traj, out / "profiles.png")
        plots.energy_decay(series, out / "energy.png")
    return result


def _summary_text(res: ScenarioResult, delta, q) -> str:
    s = res.scenario
    lines = [f"scenario: {s.name}", s.description, ""]
    lines.append("parameters:")
    for name, value in s.params.as_dict().items():
        lines.append(f"  {name} = {value:g}")
    lines.append(f"x3 mode: {s.x3_mode}")
    lines.append(
        f"grid n = {res.outcome.get('grid_n')}, dt = {res.outcome.get('dt'):.6g}, "
        f"t_end = {s.t_end:g}, ic = reference + {s.ic_amplitude:g} cos({s.ic_mode} z)"
    )
    lines.append("")
    lines.append("linear analysis at the reference equilibrium:")
    lines.extend("  " + ln for ln in res.report.summary().splitlines())
    lines.append("")
    lines.append(f"absorbing region: {res.region.describe()}")
    if res.failure is not None:
        lines.append(f"RUN FAILED: {res.failure}")
    else:
        o = res.outcome
        lines.append(
            f"nonlinear outcome: final deviation from reference {o['final_deviation']:.3e}, "
            f"tail drift {o['tail_drift']:.3e} "
            f"({'returned' if o['returned'] else 'departed' if o['departed'] else 'neither'})"
        )
        nonlinear = "stable" if o["returned"] else "unstable" if o["departed"] else "undecided"
        agrees = nonlinear == res.report.verdict
        lines.append(
            f"classification verdict {res.report.verdict!r} vs nonlinear outcome {nonlinear!r}: "
            + ("AGREE" if agrees else "DISAGREE (the run follows the mode eigenvalues)")
        )
        if delta is not None:
            lines.append(f"energy decay rate delta = {delta:.6f}, offset q = {q:.6g}")
        else:
            lines.append("energy bound not applicable (decay rate not positive)")
    lines.append("")
    lines.append("checks:")
    for name, ok in res.check_results.items():
        lines.append(f"  {name}: {'PASS' if ok else 'FAIL'}")
    lines.append(f"status: {'PASS' if res.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"
