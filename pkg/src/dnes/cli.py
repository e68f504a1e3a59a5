"""Command line entry point: analyze, simulate and sweep scenarios.

Exit codes: 0 success, 2 scenario parse error, 3 violated analysis or
simulation precondition, 4 unstable simulation.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import aggregative as agg
from . import deception as dc
from . import stability as st
from .games import (AggregativeGame, GameError, QuadraticGame, cost,
                    monotonicity_margins, nash_equilibrium)
from .intervals import IntervalSet
from .report import render_report
from .scenarios import (Scenario, ScenarioError, FixedDelta, load_bundled,
                        parse_scenario, serialize_scenario)
from .simulator import Oblivious, period_average, simulate

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_UNSTABLE = 0, 2, 3, 4


def _load(ref: str, overrides: list[str]) -> Scenario:
    path = Path(ref)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
    else:
        text = serialize_scenario(load_bundled(ref))
    if overrides:
        text = _apply_overrides(text, overrides)
    return parse_scenario(text)


def _apply_overrides(text: str, overrides: list[str]) -> str:
    """Apply --set section.key=value pairs on top of the scenario text."""
    lines = text.splitlines()
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ScenarioError(f"--set expects section.key=value, "
                                f"got {item!r}")
        target, _, value = item.partition("=")
        section, _, key = target.partition(".")
        section, key, value = section.strip(), key.strip(), value.strip()
        out = []
        in_section = False
        placed = False
        for line in lines:
            stripped = line.strip()
            if stripped.startswith("[") and stripped.endswith("]"):
                if in_section and not placed:
                    out.append(f"{key} = {value}")
                    placed = True
                in_section = stripped[1:-1].strip() == section
            elif in_section and stripped.partition("=")[0].strip() == key:
                out.append(f"{key} = {value}")
                placed = True
                continue
            out.append(line)
        if not placed:
            if not in_section:
                out.append(f"[{section}]")
            out.append(f"{key} = {value}")
        lines = out
    return "\n".join(lines) + "\n"


def _threads() -> int:
    env = os.environ.get("DNES_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def _analyze_quadratic(sc: Scenario) -> dict:
    game: QuadraticGame = sc.game
    ana = sc.analysis
    rep: dict = {"scenario": sc.name, "game": "quadratic",
                 "players": game.N}
    xstar = nash_equilibrium(game)
    rep["ne"] = xstar
    rep["cost_ne"] = [cost(game, i, xstar) for i in range(game.N)]
    ds = sc.ds
    if ds is None:
        return rep

    dsets = {}
    if ana.get("delta_slice", True):
        for ipos, dec in enumerate(ds.deceivers):
            fixed = np.zeros(ds.n)
            dset = dc.delta_interval(game, ds, axis=ipos, fixed=fixed,
                                     box=tuple(ana["delta_box"]))
            dsets[ipos] = dset
            rep[f"delta_set_{dec + 1}"] = dset

    for ipos, (dec, targets) in enumerate(zip(ds.deceivers, ds.targets)):
        for tgt in targets:
            Qt, bt = game.Q[tgt], game.b[tgt]
            rep[f"rc_base_{tgt + 1}"] = np.append(Qt[tgt, :], bt[tgt])
            rep[f"rc_inject_{tgt + 1}_{dec + 1}"] = np.append(Qt[dec, :],
                                                              bt[dec])

    sdso = None
    if ds.n == 1 and len(ds.targets[0]) == 1:
        dec, tgt = ds.deceivers[0], ds.targets[0][0]
        sdso = dc.sdso_analyze(game, dec, tgt)
        rep["phi"] = sdso.Phi
        rep["f_coeffs"] = [sdso.q1, sdso.q2, sdso.q3]
        rep["r1"] = sdso.r1
        rep["r2"] = sdso.r2
        eps1 = ds.eps[0]
        dset = dsets.get(0)
        if dset is not None and ana.get("omega_set", False):
            rep[f"omega_{dec + 1}"] = dc.omega_set(sdso, eps1, dset)
        if dset is not None and ana.get("benevolence") is not None:
            ok, window = dc.benevolence(sdso, eps1, ana["benevolence"],
                                        dset)
            rep["benevolent"] = ok
            if ok:
                rep["benevolent_window"] = window
        if ana.get("solve_ref") is not None:
            dstar = dc.solve_delta_for_ref(sdso, ana["solve_ref"], eps1)
            g = dc.dne(game, ds, [dstar])
            rep["delta_star"] = dstar
            rep["dne"] = g
            rep["cost_dne"] = [cost(game, i, g) for i in range(game.N)]

    if ana.get("immunity", False):
        for i in range(game.N):
            deceivers = ds.deceivers_of(i)
            if deceivers:
                rep[f"immune_{i + 1}"] = dc.immunity_check(game, i,
                                                           deceivers)
    if ana.get("rc", False):
        for dec, targets in zip(ds.deceivers, ds.targets):
            for tgt in targets:
                rc = dc.rc_classify(game, tgt, dec)
                rep[f"rc_kind_{tgt + 1}_{dec + 1}"] = rc.kind
                if rc.center is not None:
                    rep[f"rc_center_{tgt + 1}_{dec + 1}"] = rc.center

    if ana.get("linearization_eps") is not None:
        if "delta_star" in rep:
            dstar = rep["delta_star"]
        else:
            pol = sc.policies.get(ds.deceivers[0])
            if not isinstance(pol, FixedDelta):
                raise dc.DeceptionError(
                    "linearization needs solve_ref or a fixed delta policy")
            dstar = pol.delta
        jac = st.build_jacobian(game, ds, dstar, ana["linearization_eps"],
                                variant=ana["linearization_variant"])
        rep["lin_delta_star"] = dstar
        rep["lin_charpoly"] = jac.charpoly
        rep["lin_pq"] = list(jac.pq)
        rep["lin_pstar"] = list(jac.pstar)
        rep["lin_hurwitz"] = jac.hurwitz
        try:
            rep["lin_eps_star"] = st.epsilon_star(*jac.pq, *jac.pstar)
        except dc.DeceptionError:
            pass

    if ana.get("mutual_delta") is not None:
        mut = dc.mutual_attainability(game, ds, ds.jref,
                                      ana["mutual_delta"])
        rep["mutual_stable"] = mut.stable
        if mut.dne is not None:
            rep["mutual_dne"] = mut.dne
            rep["mutual_costs"] = mut.costs
            rep["mutual_refs_match"] = mut.refs_match
            rep["mutual_jacobian"] = mut.xi_jacobian
            rep["mutual_jacobian_stable"] = mut.jacobian_stable
        rep["mutual_attainable"] = mut.attainable
    return rep


def _analyze_aggregative(sc: Scenario) -> dict:
    game: AggregativeGame = sc.game
    rep: dict = {"scenario": sc.name, "game": "aggregative",
                 "players": game.N}
    rep["margins"] = monotonicity_margins(game)
    dec = sc.agg_dec
    xstar = agg.dne_agg(game, dec, 0.0) if dec is not None else None
    if xstar is None:
        return rep
    rep["ne"] = xstar
    rep["cost_ne"] = [cost(game, i, xstar) for i in range(game.N)]
    d = dec.deceiver
    rep[f"delta_set_{d + 1}"] = agg.delta_bounds(game, dec)
    eps_d = sc.ds.eps[0]
    ok, direction = agg.benefit_condition(game, dec, eps_d)
    rep["benefit"] = ok
    rep["benefit_direction"] = direction
    if game.N == 2:
        rep["tuning_hint"] = agg.monotone_tuning_hint(game, dec)
    pol = sc.policies.get(d)
    if isinstance(pol, FixedDelta):
        g = agg.dne_agg(game, dec, pol.delta, x0=xstar)
        rep["delta"] = pol.delta
        rep["dne"] = g
        rep["cost_dne"] = [cost(game, i, g) for i in range(game.N)]
    return rep


def analyze(sc: Scenario) -> dict:
    """Analysis report for a parsed scenario as an ordered mapping."""
    if isinstance(sc.game, QuadraticGame):
        return _analyze_quadratic(sc)
    return _analyze_aggregative(sc)


def _run_simulation(sc: Scenario, delta_override: float | None = None):
    if sc.probe is None:
        raise GameError("scenario has no probe section to simulate")
    policies = dict(sc.policies)
    if delta_override is not None:
        for d in sc.ds.deceivers:
            policies[d] = FixedDelta(delta_override)
    return simulate(sc.game, sc.probe, sc.ds, policies, u0=sc.u0,
                    delta0=sc.delta0, T=sc.t_final,
                    samples_per_period=sc.samples_per_period)


def _simulate_cmd(sc: Scenario, out_dir: Path) -> int:
    traj = _run_simulation(sc)
    csv_path = out_dir / f"{sc.name}.csv"
    traj.to_csv(csv_path)
    summary: dict = {"scenario": sc.name, "t_final": traj.t[-1],
                     "unstable": traj.unstable}
    if not traj.unstable and len(traj.t) * traj.stride * traj.h > traj.period:
        summary["u_bar"] = period_average(traj, traj.u)
        summary["j_bar"] = period_average(traj, traj.J)
        if traj.delta.size:
            summary["delta_bar"] = period_average(traj, traj.delta)
    text = render_report(summary)
    (out_dir / f"{sc.name}-summary.txt").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_UNSTABLE if traj.unstable else EXIT_OK


def _sweep_point(sc: Scenario, delta: float):
    """Steady state (stable, x, J) at one sweep grid point."""
    game = sc.game
    if sc.sweep["mode"] == "simulate":
        traj = _run_simulation(sc, delta_override=delta)
        if traj.unstable or len(traj.t) * traj.stride * traj.h <= traj.period:
            return False, None, None
        return True, period_average(traj, traj.u), period_average(traj,
                                                                  traj.J)
    if isinstance(game, QuadraticGame):
        dvec = np.full(sc.ds.n, delta)
        if not dc.in_delta_set(game, sc.ds, dvec):
            return False, None, None
        x = dc.dne(game, sc.ds, dvec, check=False)
    else:
        if delta not in agg.delta_bounds(game, sc.agg_dec):
            return False, None, None
        x = agg.dne_agg(game, sc.agg_dec, delta)
    return True, x, np.array([cost(game, i, x) for i in range(game.N)])


def _sweep_cmd(sc: Scenario, out_dir: Path) -> int:
    if not sc.sweep:
        raise GameError("scenario has no sweep section")
    if sc.ds is None:
        raise GameError("sweep requires a deception structure")
    sw = sc.sweep
    nsteps = math.floor((sw["stop"] - sw["start"]) / sw["step"] + 1e-9)
    grid = [sw["start"] + q * sw["step"] for q in range(nsteps + 1)]
    if not grid:
        raise GameError("empty sweep grid")

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(lambda d: _sweep_point(sc, d), grid))

    n = sc.game.N
    header = ["delta", "stable"]
    header += [f"x{i + 1}" for i in range(n)]
    header += [f"J{i + 1}" for i in range(n)]
    path = out_dir / f"{sc.name}-sweep.csv"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for d, (stable, x, J) in zip(grid, results):
            row = [format(d, ".17g"), "1" if stable else "0"]
            if stable:
                row += [format(v, ".17g") for v in x]
                row += [format(v, ".17g") for v in J]
            else:
                row += ["nan"] * (2 * n)
            fh.write(",".join(row) + "\n")
    sys.stdout.write(f"wrote {path} ({len(grid)} points, "
                     f"{sum(1 for s, _, _ in results if s)} stable)\n")
    return EXIT_OK


def run(command: str, sc: Scenario, out_dir: Path) -> int:
    """Dispatch one command on a parsed scenario; returns the exit code."""
    out_dir.mkdir(parents=True, exist_ok=True)
    if command == "analyze":
        text = render_report(analyze(sc))
        (out_dir / f"{sc.name}-report.txt").write_text(text,
                                                       encoding="utf-8")
        sys.stdout.write(text)
        return EXIT_OK
    if command == "simulate":
        return _simulate_cmd(sc, out_dir)
    if command == "sweep":
        return _sweep_cmd(sc, out_dir)
    raise ScenarioError(f"unknown command {command!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dnes",
        description="Analyze and simulate Nash-seeking games with "
                    "deceptive players.")
    parser.add_argument("command", choices=("analyze", "simulate", "sweep"))
    parser.add_argument("scenario",
                        help="path to a scenario file or a bundled name")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--set", action="append", default=[],
                        metavar="SECTION.KEY=VALUE", dest="overrides",
                        help="override a scenario value")
    args = parser.parse_args(argv)

    try:
        sc = _load(args.scenario, args.overrides)
    except ScenarioError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    try:
        return run(args.command, sc, Path(args.out))
    except ScenarioError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except (GameError, dc.DeceptionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
