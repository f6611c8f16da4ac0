"""Command-line interface.

Verbs:
    list-scenarios            show the bundled scenario names
    scenario NAME [NAME...]   run bundled scenarios (--all for every one)
    simulate                  time integration from a parameter config
    stability                 equilibrium classification and mode scan
    energy                    simulate, then energy series and decay bound
    fit                       parameter estimation against observation CSVs

All report paths write delimited data plus rendered figures; pass
--no-figures to skip the figures.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import attractor, energy, equilibria, fitting, scenarios
from .dynamics import StateP, integrate, stable_dt, trajectory_to_csv, trajectory_to_gnuplot
from .elliptic import sech2_profile, solve_fisher_steady
from .errors import WetlandError
from .grid import Field, build_grid, constant_field
from .params import load_params

DEFAULT_GRID_N = 200
DEFAULT_T_END = 200.0


def _add_common(p):
    p.add_argument("--out", default="out", help="output directory (default: ./out)")
    p.add_argument("--grid-n", type=int, default=DEFAULT_GRID_N, help="interior grid nodes")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")


def _add_run_opts(p):
    p.add_argument("--config", required=True, help="model parameter file (name = value lines)")
    p.add_argument("--t-end", type=float, default=DEFAULT_T_END)
    p.add_argument("--dt", type=float, default=None, help="time step (default: stability bound)")
    p.add_argument("--record-dt", type=float, default=1.0)
    p.add_argument(
        "--x3", choices=("zero", "one", "sech2", "profile"), default="zero",
        help="human distribution: constant 0/1, closed-form sech2, or Newton profile",
    )
    p.add_argument("--perturb-amplitude", type=float, default=0.05)
    p.add_argument("--perturb-mode", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wetlandsim", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("list-scenarios", help="list bundled scenario names")

    p = sub.add_parser("scenario", help="run bundled scenarios")
    p.add_argument("names", nargs="*", help="scenario names (see list-scenarios)")
    p.add_argument("--all", action="store_true", help="run every bundled scenario")
    p.add_argument("--parallel", action="store_true", help="run independent scenarios concurrently")
    p.add_argument("--t-end", type=float, default=None, help="override the scenario horizon")
    p.add_argument("--dt", type=float, default=None, help="override the time step")
    _add_common(p)

    p = sub.add_parser("simulate", help="integrate the two-species dynamics")
    _add_run_opts(p)
    _add_common(p)

    p = sub.add_parser("stability", help="classify equilibria and scan modes")
    p.add_argument("--config", required=True)
    p.add_argument("--n-max", type=int, default=equilibria.DEFAULT_N_MAX)
    _add_common(p)

    p = sub.add_parser("energy", help="simulate and verify the energy decay bound")
    _add_run_opts(p)
    _add_common(p)

    p = sub.add_parser("fit", help="estimate parameters from observation CSVs")
    p.add_argument("--x1", required=True, help="fish observation CSV")
    p.add_argument("--x2", required=True, help="boyciana observation CSV")
    p.add_argument("--config", default=None, help="initial parameter file (default: built-in start)")
    p.add_argument("--budget", type=int, default=5000, help="objective evaluation budget")
    p.add_argument("--fit-grid-n", type=int, default=fitting.SimConfig().grid_n,
                   help="forward-model grid for the objective")
    _add_common(p)
    return ap


def _x3_for(args, grid, p):
    if args.x3 == "zero":
        return constant_field(grid, 0.0)
    if args.x3 == "one":
        return constant_field(grid, 1.0)
    if args.x3 == "sech2":
        return sech2_profile(p.r, grid)
    sol = solve_fisher_steady(p.r, grid, sech2_profile(p.r, grid))
    print(sol.describe())
    return sol.profile


def _reference(p, x3_mode):
    if x3_mode == "zero":
        return equilibria.equilibrium_e1(p)
    return equilibria.equilibrium_e2(p)


def _run_simulation(args, p, out: Path):
    grid = build_grid(args.grid_n)
    x3 = _x3_for(args, grid, p)
    eq = _reference(p, args.x3)
    bump = args.perturb_amplitude * np.cos(args.perturb_mode * grid.nodes)
    ic = StateP(Field(grid, eq.u + bump), Field(grid, eq.v + bump), t=0.0)
    dt = args.dt if args.dt is not None else stable_dt(grid, p)
    traj = integrate(ic, x3, p, t_end=args.t_end, dt=dt, record_dt=args.record_dt)
    out.mkdir(parents=True, exist_ok=True)
    (out / "trajectory.csv").write_text(trajectory_to_csv(traj))
    (out / "snapshots.dat").write_text(trajectory_to_gnuplot(traj))
    return traj, x3, eq, dt


def cmd_list_scenarios(_args) -> int:
    for name, s in scenarios.builtin_scenarios().items():
        print(f"{name}: {s.description}")
    return 0


def cmd_scenario(args) -> int:
    available = scenarios.builtin_scenarios()
    names = list(available) if args.all else args.names
    if not names:
        print("no scenario names given (use --all or list-scenarios)", file=sys.stderr)
        return 2
    unknown = [n for n in names if n not in available]
    if unknown:
        print(f"unknown scenario(s): {', '.join(unknown)}", file=sys.stderr)
        return 2
    chosen = []
    for n in names:
        s = available[n]
        if args.t_end is not None:
            s = replace(s, t_end=args.t_end)
        if args.dt is not None:
            s = replace(s, dt=args.dt)
        chosen.append(s)

    def run_one(s):
        return scenarios.run_scenario(s, args.out, grid_n=args.grid_n, figures=not args.no_figures)

    if args.parallel and len(chosen) > 1:
        with ThreadPoolExecutor(max_workers=min(4, len(chosen))) as pool:
            results = list(pool.map(run_one, chosen))
    else:
        results = [run_one(s) for s in chosen]

    status = 0
    for res in results:
        verdictline = "PASS" if res.passed else "FAIL"
        print(f"{res.scenario.name}: {verdictline}  -> {Path(args.out) / res.scenario.name}")
        if not res.passed:
            failed = [k for k, ok in res.check_results.items() if not ok]
            first = res.failure or (f"check {failed[0]!r} failed" if failed else "unknown failure")
            print(f"  first failure: {first}", file=sys.stderr)
            status = 1
    return status


def cmd_simulate(args) -> int:
    p = load_params(args.config)
    out = Path(args.out)
    traj, x3, eq, dt = _run_simulation(args, p, out)
    final = traj.final()
    dev = max(
        float(np.max(np.abs(final.x1.values - eq.u))),
        float(np.max(np.abs(final.x2.values - eq.v))),
    )
    region = attractor.absorbing_region(p)
    absorbed = attractor.check_absorption(traj, region)
    print(f"integrated to t = {traj.times[-1]:g} with dt = {dt:.6g}")
    print(f"final max deviation from ({eq.u:.4f}, {eq.v:.4f}): {dev:.3e}")
    print(f"absorbing region {region.describe()}: tail containment {'OK' if absorbed else 'VIOLATED'}")
    if not args.no_figures:
        from . import plots

        plots.trajectory_heatmaps(traj, out / "trajectory.png")
        plots.spatial_profiles(traj, out / "profiles.png")
    return 0


def cmd_stability(args) -> int:
    p = load_params(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    wrote = []
    for label, classify in (("e1", equilibria.classify_e1), ("e2", equilibria.classify_e2)):
        try:
            report = classify(p, n_max=args.n_max)
        except WetlandError as exc:
            print(f"{label}: not classified ({exc})")
            continue
        (out / f"stability_{label}.csv").write_text(report.to_csv())
        wrote.append(label)
        print(f"--- {label} ---")
        print(report.summary(), end="")
    if not wrote:
        print("no equilibrium exists for these parameters", file=sys.stderr)
        return 1
    return 0


def cmd_energy(args) -> int:
    p = load_params(args.config)
    out = Path(args.out)
    traj, x3, eq, _dt = _run_simulation(args, p, out)
    x3_const = 0.0 if args.x3 == "zero" else 1.0
    rho = equilibria.spectral_radius(equilibria.reaction_jacobian(eq.u, eq.v, x3_const, p))
    try:
        delta, q = energy.decay_constants(p, rho, mu1=1.0, x3=x3)
        holds, _margins = energy.verify_energy_bound(traj, delta, q)
        print(f"delta = {delta:.6f}, q = {q:.6g}: bound {'holds' if holds else 'VIOLATED'}")
    except WetlandError as exc:
        delta = q = None
        holds = None
        print(f"energy bound not applicable: {exc}")
    series = energy.energy_series(traj, delta, q)
    (out / "energy.csv").write_text(energy.energy_series_to_csv(series))
    if not args.no_figures:
        from . import plots

        plots.energy_decay(series, out / "energy.png")
    return 0 if holds in (True, None) else 1


def cmd_fit(args) -> int:
    obs = fitting.load_observations(args.x1, args.x2)
    initial = load_params(args.config) if args.config else fitting.PAPER_STYLE_INITIAL
    config = fitting.SimConfig(grid_n=args.fit_grid_n)
    result = fitting.fit(obs, initial, budget=args.budget, sim_config=config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trace_lines = ["evaluation,best_objective"] + [
        f"{i + 1},{float(v)!r}" for i, v in enumerate(result.trace)
    ]
    (out / "fit_trace.csv").write_text("\n".join(trace_lines) + "\n")
    (out / "fit_summary.txt").write_text(result.summary())
    print(result.summary(), end="")
    if not args.no_figures:
        from . import plots

        sim = fitting.forward_samples(result.params, obs, config)
        plots.fit_report(result, obs, sim, out / "fit.png")
    return 0


_COMMANDS = {
    "list-scenarios": cmd_list_scenarios,
    "scenario": cmd_scenario,
    "simulate": cmd_simulate,
    "stability": cmd_stability,
    "energy": cmd_energy,
    "fit": cmd_fit,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except WetlandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
