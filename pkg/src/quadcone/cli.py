"""Command-line front end: ``quadcone {simulate,hover,ft-hover,psd,tradeoff}``.

Exit codes: 0 success, 2 bad input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, analysis, simulator, tradeoff
from .params import ConfigError, VehicleParams, load_params

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


class InputError(Exception):
    pass


def parse_angle(text: str) -> float:
    """Radians, or degrees with a ``deg`` suffix (``18deg``)."""
    s = str(text).strip().lower()
    try:
        if s.endswith("deg"):
            return math.radians(float(s[:-3]))
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def _phis(args) -> list[float]:
    if args.phi is not None:
        return [args.phi]
    start, stop, n = args.phi_range
    n = int(n)
    if n < 1 or stop < start:
        raise InputError(f"empty cone-angle range {start}..{stop} in {n} steps")
    return list(np.linspace(start, stop, n))


def _params(args) -> VehicleParams:
    if getattr(args, "params", None):
        return load_params(args.params)
    return VehicleParams()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)


def _manifest(command: str, params: VehicleParams, arguments: dict, outputs: list[str]) -> dict:
    return {
        "command": command,
        "version": __version__,
        "params": params.to_dict(),
        "arguments": arguments,
        "outputs": outputs,
    }


def _write_manifest(out: str | None, manifest: dict) -> None:
    if out:
        Path(out + ".json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


# --- commands ----------------------------------------------------------------


def cmd_simulate(args) -> int:
    params = _params(args)
    if args.scenario:
        if args.phi is None:
            raise InputError("--scenario needs --phi")
        try:
            if args.scenario == "symmetric-hover":
                config, schedule = simulator.symmetric_hover_scenario(
                    args.phi, params, duration=args.duration or 2.0, step_size=args.step,
                    record_decimation=args.decimation)
            else:
                config, schedule = simulator.ft_hover_scenario(
                    args.phi, params, periods=args.periods, step_size=args.step,
                    record_decimation=args.decimation)
        except (simulator.InfeasibleScenario, ValueError) as exc:
            raise InputError(str(exc)) from exc
        settings = {"scenario": args.scenario, "phi": args.phi}
    else:
        if not args.schedule:
            raise InputError("give --schedule FILE or --scenario")
        try:
            data = json.loads(Path(args.schedule).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read schedule {args.schedule}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("schedule file must be a JSON object")
        schedule = simulator.InputSchedule.from_dict(data)
        sim = dict(data.get("simulation", {}))
        if args.duration:
            sim["duration"] = args.duration
        config = simulator.SimConfig.from_dict(sim, params)
        settings = {"schedule_file": str(args.schedule)}

    meta = simulator.run_metadata(config, schedule, command="simulate", arguments=settings,
                                  outputs=[args.out])
    try:
        trace = simulator.run(config, schedule)
    except simulator.SimulationAborted as exc:
        meta["aborted_at"] = exc.time
        simulator.write_trace(exc.trace, args.out, meta)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    simulator.write_trace(trace, args.out, meta)
    return EXIT_OK


def cmd_hover(args) -> int:
    params = _params(args)
    rows = ["phi_rad,omega_13,omega_24,feasible"]
    for phi in _phis(args):
        sol = analysis.symmetric_hover_rates(phi, params)
        if sol.feasible:
            rows.append(f"{phi:.17g},{sol.omega_13:.17g},{sol.omega_24:.17g},1")
        else:
            rows.append(f"{phi:.17g},nan,nan,0")
    _emit("\n".join(rows) + "\n", args.out)
    _write_manifest(args.out, _manifest("hover", params, {"phis": _phis(args)}, [args.out]))
    return EXIT_OK


def cmd_ft_hover(args) -> int:
    params = _params(args)
    phis = _phis(args)
    for phi in phis:
        if not 0.0 < phi <= math.pi / 4:
            raise InputError(
                f"fault-tolerant hover needs 0 < phi <= pi/4 (got {phi}); "
                "at phi = 0 stopped rotors leave no thrust direction to spin")
    header = "phi_rad,theta_dot_c,amp_mss"
    if args.simulate:
        header += ",dominant_freq_hz,dominant_power"
    rows = [header]
    for phi in phis:
        sol = analysis.ft_hover_rate(phi, params)
        row = f"{phi:.17g},{sol.theta_dot_c:.17g},{sol.amplitude:.17g}"
        if args.simulate:
            _, _, spectrum = analysis.simulate_ft_oscillation(
                phi, params, periods=args.periods, step_size=args.step)
            f_hz, power = spectrum.dominant()
            row += f",{f_hz:.17g},{power:.17g}"
        rows.append(row)
    _emit("\n".join(rows) + "\n", args.out)
    _write_manifest(args.out, _manifest("ft-hover", params,
                                        {"phis": phis, "simulate": args.simulate,
                                         "periods": args.periods, "step": args.step}, [args.out]))
    return EXIT_OK


def _read_columns(path: str) -> dict[str, np.ndarray]:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            values = np.array([[float(v) for v in row] for row in reader if row], dtype=float)
    except (OSError, StopIteration, ValueError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    values = values.reshape(-1, len(header))
    return {name: values[:, k] for k, name in enumerate(header)}


def cmd_psd(args) -> int:
    cols = _read_columns(args.trace)
    if args.column not in cols:
        raise InputError(f"column {args.column!r} not in {args.trace}")
    if "t" not in cols:
        raise InputError(f"{args.trace} has no time column 't'")
    try:
        spectrum = analysis.periodogram(cols[args.column], times=cols["t"])
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(spectrum.to_csv(), args.out)
    f_hz, power = spectrum.dominant()
    print(f"dominant_freq_hz={f_hz:.17g} power={power:.17g}", file=sys.stderr)
    _write_manifest(args.out, _manifest("psd", VehicleParams(),
                                        {"trace": args.trace, "column": args.column}, [args.out]))
    return EXIT_OK


def cmd_tradeoff(args) -> int:
    if args.mu_points < 2:
        raise InputError("--mu-points must be at least 2")
    params = _params(args)
    points = tradeoff.pareto_frontier(params, n=args.mu_points)
    _emit(tradeoff.frontier_csv(points), args.out)
    _write_manifest(args.out, _manifest("tradeoff", params, {"mu_points": args.mu_points},
                                        [args.out]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadcone", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def phi_args(p, required=True):
        g = p.add_mutually_exclusive_group(required=required)
        g.add_argument("--phi", type=parse_angle, help="cone angle (rad, or e.g. 18deg)")
        g.add_argument("--phi-range", nargs=3, type=parse_angle, metavar=("START", "STOP", "N"),
                       help="inclusive sweep of N cone angles")

    p = sub.add_parser("simulate", help="integrate a schedule or a built-in scenario")
    p.add_argument("--params", "--config", dest="params",
                   help="vehicle JSON file (defaults: the reference vehicle)")
    p.add_argument("--schedule", help="schedule JSON file")
    p.add_argument("--scenario", choices=["symmetric-hover", "ft-hover"])
    p.add_argument("--phi", type=parse_angle)
    p.add_argument("--duration", type=float, help="override run length (s)")
    p.add_argument("--periods", type=float, default=10, help="ft-hover revolutions")
    p.add_argument("--step", type=float, default=simulator.DEFAULT_STEP)
    p.add_argument("--decimation", type=int, default=1)
    p.add_argument("--out", required=True, help="trace CSV; metadata goes to OUT.json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("hover", help="healthy symmetric-hover rotor rates")
    p.add_argument("--params")
    phi_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_hover)

    p = sub.add_parser("ft-hover", help="fault-tolerant hover cone rate and oscillation")
    p.add_argument("--params")
    phi_args(p)
    p.add_argument("--simulate", action="store_true", help="also measure the dominant frequency")
    p.add_argument("--periods", type=int, default=16)
    p.add_argument("--step", type=float, default=simulator.DEFAULT_STEP)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ft_hover)

    p = sub.add_parser("psd", help="one-sided power spectrum of a trace column")
    p.add_argument("trace")
    p.add_argument("--column", default="az")
    p.add_argument("--out")
    p.set_defaults(func=cmd_psd)

    p = sub.add_parser("tradeoff", help="cone-angle Pareto frontier")
    p.add_argument("--params")
    p.add_argument("--mu-points", type=int, default=64)
    p.add_argument("--out")
    p.set_defaults(func=cmd_tradeoff)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (analysis.NoBracket, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
