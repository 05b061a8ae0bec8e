"""Command-line driver.

Exit codes: 0 success, 1 usage or config error, 2 some sweep points
failed, 3 validation failure.
"""
import argparse
import logging
import sys

import numpy as np

from .figures import SweepConfig, log_grid, run
from .records import write_records

EXIT_OK, EXIT_USAGE, EXIT_PARTIAL, EXIT_VALIDATION = 0, 1, 2, 3

log = logging.getLogger("rubin")

# flag name -> (SweepConfig field, parser)
_SCALARS = {
    "mass-system": ("M", float),
    "mass-bath": ("m", float),
    "omega-s": ("omega_S", float),
    "omega-b": ("omega_B", float),
    "bath-size": ("N", int),
    "t-min": ("t_min", float),
    "t-max": ("t_max", float),
    "samples": ("n_samples", int),
    "stability-tol": ("stability_tol", float),
    "workers": ("workers", int),
    "perturb-cubic": ("cubic_perturbation", float),
}
_OTHER_KEYS = {"gamma", "temps", "out", "format", "mode"}


class UsageError(Exception):
    pass


def parse_temps(text):
    """``min:max:count`` (log-spaced) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"bad temperature range {text!r}, expected min:max:count")
        try:
            return log_grid(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return _float_list(text)


def parse_gammas(text):
    """``start:stop:count`` (linear) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"bad gamma range {text!r}, expected start:stop:count")
        return [float(x) for x in np.linspace(float(parts[0]), float(parts[1]), int(parts[2]))]
    return _float_list(text)


def _float_list(text):
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"not a list of numbers: {text!r}") from None
    if not values:
        raise UsageError("empty list")
    return values


def read_config_file(path):
    """Flat ``key = value`` file; ``#`` starts a comment.  Keys are flag names."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("_", "-")
        if key not in _SCALARS and key not in _OTHER_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rubin",
        description="System-bath entanglement and Clausius deviation in the Rubin model.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key = value file; command-line flags win")
        p.add_argument("--gamma", help="list a,b,c or range start:stop:count")
        p.add_argument("--temps", help="log range min:max:count or list a,b,c")
        for flag, (_, typ) in _SCALARS.items():
            kwargs = {"type": typ}
            if flag == "perturb-cubic":
                kwargs["help"] = argparse.SUPPRESS
            p.add_argument(f"--{flag}", **kwargs)
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"))
        return p

    common(sub.add_parser("fig1", help="Clausius deviation vs T for several gamma"))
    common(sub.add_parser("fig2", help="negativity vs gamma for several T"))
    common(sub.add_parser("fig3", help="negativity vs T for several gamma, with T_c"))
    common(sub.add_parser("fig4", help="Clausius deviation and negativity vs T"))
    sweep = common(sub.add_parser("sweep", help="custom thermo or negativity sweep"))
    sweep.add_argument("--mode", choices=("thermo", "negativity"))
    common(sub.add_parser("validate", help="run the oracle and invariant suite"))
    return parser


def resolve_config(args):
    """Merge flags over the config file over defaults."""
    merged = read_config_file(args.config) if args.config else {}
    for key in list(_SCALARS) + sorted(_OTHER_KEYS):
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            merged[key] = value

    if args.command == "sweep":
        sweep_mode = merged.get("mode", "thermo")
        if sweep_mode not in ("thermo", "negativity"):
            raise UsageError(f"sweep mode must be thermo or negativity, got {sweep_mode!r}")
        mode = f"{sweep_mode}-sweep"
    else:
        mode = args.command
    kwargs = {"mode": mode}
    for flag, (name, typ) in _SCALARS.items():
        if flag in merged:
            try:
                kwargs[name] = typ(merged[flag])
            except ValueError:
                raise UsageError(f"--{flag}: cannot parse {merged[flag]!r}") from None
    if "gamma" in merged:
        kwargs["gammas"] = parse_gammas(str(merged["gamma"]))
    if "temps" in merged:
        kwargs["temps"] = parse_temps(str(merged["temps"]))
    try:
        config = SweepConfig(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    fmt = merged.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise UsageError(f"unknown format {fmt!r}")
    return config, merged.get("out"), fmt


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config, out, fmt = resolve_config(args)
    except UsageError as exc:
        print(f"rubin: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if config.mode == "validate":
        from .validate import run_validate

        report = run_validate(config)
        _emit(report.text(), out)
        return EXIT_OK if report.passed else EXIT_VALIDATION

    records, wall = run(config)
    _emit(write_records(records, fmt), out)
    failed = sum(r.failed for r in records)
    # timing stays out of the data so reruns are byte-identical
    log.info("%s: %d points in %.2f s, %d failed", config.mode, len(records), wall, failed)
    if failed:
        print(f"rubin: {failed} of {len(records)} points failed", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
