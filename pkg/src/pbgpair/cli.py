"""Command-line interface.

Verbs: ``run`` (key-value config file), ``preset`` (named scenario),
``poles`` (dressed-state table), ``sweep`` (parameter ladder).  Exit
codes: 0 success, 2 usage/validation, 3 I/O, 4 numerical failure (the
message names the failing operation).  THREADS caps sweep workers.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from . import csvio, sweep as sweep_mod
from .config import parse_run_file, RunSpec
from .errors import ConfigError, NumericalError, PbgpairError
from .pipeline import DEFAULT_MODES, run_spec
from .poles import find_poles
from .presets import PRESET_NAMES, get_preset

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4


def _parser():
    p = argparse.ArgumentParser(
        prog="pbgpair",
        description="Entanglement dynamics of two V-type atoms near a photonic band edge",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, engine=True):
        sp.add_argument("-o", "--output", required=True, help="output CSV path")
        if engine:
            sp.add_argument("--engine", choices=("analytic", "oracle", "both"),
                            help="trajectory engine (default from config/preset)")
            sp.add_argument("--tmax", type=float, help="override horizon (units 1/beta)")
            sp.add_argument("--dt", type=float, help="override output spacing")
            sp.add_argument("--modes", type=int, default=DEFAULT_MODES,
                            help="oracle bath size (default 4000)")
            sp.add_argument("--amplitudes", metavar="PATH",
                            help="also dump the raw amplitude trajectory CSV")

    sp = sub.add_parser("run", help="run a key-value config file")
    sp.add_argument("config", help="path to the run file")
    common(sp)

    sp = sub.add_parser("preset", help=f"run a named scenario ({', '.join(PRESET_NAMES)})")
    sp.add_argument("name")
    common(sp)

    sp = sub.add_parser("poles", help="emit the dressed-state pole table of a config file")
    sp.add_argument("config")
    common(sp, engine=False)

    sp = sub.add_parser("sweep", help="sweep one parameter over a list of values")
    sp.add_argument("config", help="template run file")
    sp.add_argument("--param", required=True, choices=sweep_mod.SWEEP_PARAMS)
    sp.add_argument("--values", required=True,
                    help="comma list (pairs: 'w1c:w2c;w1c:w2c'); eta in degrees")
    sp.add_argument("-o", "--output", required=True, help="output directory")
    sp.add_argument("--engine", choices=("analytic", "oracle", "both"))
    sp.add_argument("--tmax", type=float)
    sp.add_argument("--dt", type=float)
    sp.add_argument("--modes", type=int, default=DEFAULT_MODES)
    return p


def _apply_overrides(spec: RunSpec, args) -> RunSpec:
    if getattr(args, "engine", None):
        spec = replace(spec, engine=args.engine)
    if getattr(args, "tmax", None) is not None:
        spec = replace(spec, t_max=args.tmax)
    if getattr(args, "dt", None) is not None:
        spec = replace(spec, dt_out=args.dt)
    return spec


def _emit_series(spec: RunSpec, path, n_modes, amplitudes_path=None):
    series, traj, _ = run_spec(spec, n_modes=n_modes)
    csvio.write_atomic(path, csvio.entanglement_csv(series, traj))
    if amplitudes_path:
        csvio.write_atomic(amplitudes_path, csvio.trajectory_csv(traj))


def _cmd_run(args) -> int:
    spec = _apply_overrides(parse_run_file(args.config), args)
    _emit_series(spec, args.output, args.modes, args.amplitudes)
    return EXIT_OK


def _cmd_preset(args) -> int:
    preset = get_preset(args.name)
    if preset.kind == "poles":
        csvio.write_atomic(args.output, csvio.poles_csv(find_poles(preset.config)))
        return EXIT_OK
    spec = RunSpec(config=preset.config, init=preset.init, t_max=preset.t_max,
                   dt_out=preset.dt_out, engine=preset.engine)
    spec = _apply_overrides(spec, args)
    _emit_series(spec, args.output, args.modes, args.amplitudes)
    return EXIT_OK


def _cmd_poles(args) -> int:
    spec = parse_run_file(args.config)
    csvio.write_atomic(args.output, csvio.poles_csv(find_poles(spec.config)))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    spec = _apply_overrides(parse_run_file(args.config), args)
    values = sweep_mod.parse_values(args.param, args.values)
    sweep_mod.run_sweep(spec, args.param, values, args.output)
    return EXIT_OK


_COMMANDS = {"run": _cmd_run, "preset": _cmd_preset, "poles": _cmd_poles,
             "sweep": _cmd_sweep}


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="pbgpair: %(message)s")
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    command = args.command
    try:
        return _COMMANDS[command](args)
    except ConfigError as exc:
        print(f"pbgpair {command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"pbgpair {command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NumericalError as exc:
        print(f"pbgpair {command}: numerical failure in {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return EXIT_NUMERIC
    except PbgpairError as exc:
        print(f"pbgpair {command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
