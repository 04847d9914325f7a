"""Command-line front end: sweep, analyze, validate.

Configuration resolution for `sweep`: built-in defaults, then the preset
(if any), then the config file (flat `key = value` lines), then explicit
command-line flags. Flags always win. SNR is given in dB on every external
surface and converted to linear internally.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.
"""

import argparse
import csv
import json
import sys
import time

from . import __version__
from .asymptotic import analytic_curves
from .diagnostics import run_all_checks
from .exceptions import PrecodingError
from .precoding import PrecoderKind
from .sim import SweepSpec, run_sweep

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_IO = 3

SWEEP_COLUMNS = (
    "beta",
    "kind",
    "mean_sum_rate",
    "std_err",
    "analytic_sum_rate",
    "n_ok_trials",
    "n_infeasible",
)

PRESETS = {
    "fig3": {
        "n_antennas": 100,
        "snr_db": 20.0,
        "beta_grid": "0.25:0.05:1.9",
        "kinds": "mmse,zf,bf,wl_mmse,wl_zf",
        "trials": 500,
    },
    "fig4": {
        "n_antennas": 50,
        "snr_db": 15.0,
        "beta_grid": "0.25:0.05:1.9",
        "kinds": "bf,wl_mmse,pe:1,pe:2,pe:3,pe:4",
        "trials": 500,
    },
}

_SWEEP_KEYS = {
    "n_antennas": int,
    "beta_grid": str,
    "snr_db": float,
    "kinds": str,
    "trials": int,
    "seed": int,
    "threads": int,
    "noise_variance": float,
    "out": str,
    "format": str,
    "preset": str,
}


class UsageError(Exception):
    pass


def parse_beta_grid(text: str) -> tuple:
    """Parse `start:step:stop` into an inclusive grid of load factors."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"beta-grid must be start:step:stop, got {text!r}")
    try:
        start, step, stop = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"beta-grid has non-numeric fields: {text!r}") from None
    if step <= 0 or start <= 0 or stop < start:
        raise UsageError(f"beta-grid must satisfy 0 < start <= stop, step > 0: {text!r}")
    grid = []
    k = 0
    while True:
        value = start + k * step
        if value > stop + 1e-9:
            break
        grid.append(round(value, 10))
        k += 1
    return tuple(grid)


def parse_kinds(text: str) -> tuple:
    try:
        return tuple(PrecoderKind.parse(tok) for tok in text.split(",") if tok.strip())
    except PrecodingError as exc:
        raise UsageError(str(exc)) from None


def load_config_file(path: str) -> dict:
    """Flat `key = value` config; unknown keys are usage errors."""
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected `key = value`")
                key, value = (part.strip() for part in line.split("=", 1))
                if key not in _SWEEP_KEYS:
                    raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
                try:
                    values[key] = _SWEEP_KEYS[key](value)
                except ValueError:
                    raise UsageError(
                        f"{path}:{lineno}: bad value for {key!r}: {value!r}"
                    ) from None
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    return values


def _resolve_sweep_settings(args) -> dict:
    settings = {
        "seed": 0,
        "threads": 1,
        "trials": 500,
        "noise_variance": 1.0,
        "format": "csv",
    }
    preset = args.preset
    file_values = load_config_file(args.config) if args.config else {}
    if preset is None:
        preset = file_values.pop("preset", None)
    if preset is not None:
        if preset not in PRESETS:
            raise UsageError(f"unknown preset {preset!r}")
        settings.update(PRESETS[preset])
    settings.update(file_values)
    for key in ("n_antennas", "beta_grid", "snr_db", "kinds", "trials", "seed",
                "threads", "noise_variance", "out", "format"):
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = flag
    for required in ("n_antennas", "beta_grid", "snr_db", "kinds", "out"):
        if required not in settings or settings[required] is None:
            raise UsageError(f"missing required setting {required!r}")
    if settings["format"] not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {settings['format']!r}")
    return settings


def _format_number(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and (value != value):  # NaN: point had no feasible trial
        return ""
    return f"{value:.9g}"


def _write_sweep_output(result, settings) -> None:
    rows = [
        {
            "beta": _format_number(point.beta),
            "kind": point.kind.label,
            "mean_sum_rate": _format_number(point.mean_sum_rate),
            "std_err": _format_number(point.std_err),
            "analytic_sum_rate": _format_number(point.analytic_sum_rate),
            "n_ok_trials": str(point.n_ok),
            "n_infeasible": str(point.n_infeasible),
        }
        for point in result.points
    ]
    path = settings["out"]
    if settings["format"] == "csv":
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=SWEEP_COLUMNS)
            writer.writeheader()
            writer.writerows(rows)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump({"metadata": result.metadata, "rows": rows}, handle, indent=2)
            handle.write("\n")


def _write_manifest(path: str, command: str, settings: dict, extra: dict) -> None:
    manifest = {
        "tool": "wlprecode",
        "version": __version__,
        "command": command,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "config": settings,
        **extra,
    }
    with open(f"{path}.manifest", "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, default=str)
        handle.write("\n")


def cmd_sweep(args) -> int:
    settings = _resolve_sweep_settings(args)
    beta_grid = parse_beta_grid(settings["beta_grid"])
    kinds = parse_kinds(settings["kinds"])
    if not kinds:
        raise UsageError("kinds list is empty")
    spec = SweepSpec(
        n_antennas=settings["n_antennas"],
        beta_grid=beta_grid,
        snr_db=settings["snr_db"],
        kinds=kinds,
        n_trials=settings["trials"],
        master_seed=settings["seed"],
        noise_variance=settings["noise_variance"],
    )
    result = run_sweep(spec, threads=settings["threads"])
    try:
        _write_sweep_output(result, settings)
        _write_manifest(
            settings["out"],
            "sweep",
            dict(settings),
            {"master_seed": settings["seed"], "infeasible": result.metadata["infeasible"]},
        )
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(result.points)} rows to {settings['out']}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    beta_grid = parse_beta_grid(args.beta_grid)
    snr = 10.0 ** (args.snr_db / 10.0)
    try:
        curves = analytic_curves(sorted(beta_grid), args.n_antennas, snr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    columns = (
        "beta",
        "gamma",
        "sinr_mmse",
        "sinr_wl_mmse",
        "sum_rate_mmse",
        "sum_rate_wl_mmse",
    )
    rows = [
        {col: _format_number(float(curves[col][i])) for col in columns}
        for i in range(len(curves["beta"]))
    ]
    settings = {
        "n_antennas": args.n_antennas,
        "snr_db": args.snr_db,
        "beta_grid": args.beta_grid,
        "out": args.out,
        "format": args.format,
    }
    try:
        if args.format == "csv":
            with open(args.out, "w", encoding="utf-8", newline="") as handle:
                writer = csv.DictWriter(handle, fieldnames=columns)
                writer.writeheader()
                writer.writerows(rows)
        else:
            with open(args.out, "w", encoding="utf-8") as handle:
                json.dump({"metadata": settings, "rows": rows}, handle, indent=2)
                handle.write("\n")
        _write_manifest(args.out, "analyze", settings, {})
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def cmd_validate(args) -> int:
    results = run_all_checks(
        seed=args.seed,
        n_antennas=args.n_antennas,
        quick=args.quick,
        inject_fault=args.inject_fault,
    )
    failures = 0
    for result in results:
        print(result.line())
        failures += 0 if result.passed else 1
    print(f"{len(results)} checks, {failures} failures")
    return EXIT_OK if failures == 0 else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wlprecode",
        description="Widely-linear MMSE precoding simulator and analysis engine",
    )
    parser.add_argument("--version", action="version", version=f"wlprecode {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="Monte-Carlo sum-rate sweep over a beta grid")
    sweep.add_argument("--config", help="flat key=value config file")
    sweep.add_argument("--preset", choices=sorted(PRESETS), help="named experiment preset")
    sweep.add_argument("--n-antennas", dest="n_antennas", type=int)
    sweep.add_argument("--beta-grid", dest="beta_grid", help="start:step:stop")
    sweep.add_argument("--snr-db", dest="snr_db", type=float)
    sweep.add_argument(
        "--kinds", help="comma list: mmse,zf,bf,wl_mmse,wl_zf,pe:L"
    )
    sweep.add_argument("--trials", type=int)
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--threads", type=int)
    sweep.add_argument("--noise-variance", dest="noise_variance", type=float)
    sweep.add_argument("--out", help="output data file (manifest written alongside)")
    sweep.add_argument("--format", choices=("csv", "json"))
    sweep.set_defaults(func=cmd_sweep)

    analyze = sub.add_parser("analyze", help="tabulate closed-form SINR and sum rate")
    analyze.add_argument("--beta-grid", dest="beta_grid", required=True)
    analyze.add_argument("--snr-db", dest="snr_db", type=float, required=True)
    analyze.add_argument("--n-antennas", dest="n_antennas", type=int, required=True)
    analyze.add_argument("--out", required=True)
    analyze.add_argument("--format", choices=("csv", "json"), default="csv")
    analyze.set_defaults(func=cmd_analyze)

    validate = sub.add_parser("validate", help="run the invariant check suite")
    validate.add_argument("--seed", type=int, default=0)
    validate.add_argument("--n-antennas", dest="n_antennas", type=int, default=16)
    validate.add_argument("--quick", action="store_true", help="smaller sizes, looser tolerances")
    validate.add_argument(
        "--inject-fault",
        choices=("duality-sign",),
        default=None,
        help="test hook: corrupt the duality allocation so the check must fail",
    )
    validate.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecodingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
