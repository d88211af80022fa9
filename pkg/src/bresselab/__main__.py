"""Entry point for bresselab."""

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from bresselab.errors import BadAssignment, BresseLabError, ConfigError
from bresselab.experiments import run
from bresselab.models.config import ExperimentConfig
from bresselab.models.parameters import PARAMETER_NAMES, validate
from bresselab.output import configure_logging
from bresselab.reconstruction.profiles import InitialProfile
from bresselab.spectral.generator import Coupling

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

# Keys that hold comma-separated lists
LIST_KEYS = ("slots", "xi_values")
# Keys that are not configurable from files or flags
INTERNAL_KEYS = ("experiment", "parameters")

# flag -> (config key, type, help)
OPTIONS: dict[str, tuple[str, type, str]] = {
    "--out": ("out", str, "output directory"),
    "--threads": ("threads", int, "worker threads over frequencies, physical cores by default"),
    "--seed": ("seed", int, "seed of the random initial states"),
    "--kind": ("kind", str, "heat law: type1 or type3"),
    "--profile": ("profile", str, "initial profile: gaussian, box, band or dgauss"),
    "--slots": ("slots", str, "comma-separated state components carrying the profile"),
    "--sigma": ("sigma", float, "width of the gaussian profiles"),
    "--halfwidth": ("halfwidth", float, "half width of the box profile"),
    "--band-lo": ("band_lo", float, "lower edge of the band profile"),
    "--band-hi": ("band_hi", float, "upper edge of the band profile"),
    "--order": ("order", int, "derivative order of the dgauss profile"),
    "--xi": ("xi_values", str, "comma-separated frequencies for simulate and verify"),
    "--xi-min": ("xi_min", float, "smallest grid frequency"),
    "--xi-max": ("xi_max", float, "largest grid frequency"),
    "--n-modes": ("n_modes", int, "modes of the envelope sweep"),
    "--n-states": ("n_states", int, "random initial states per frequency"),
    "--n-times": ("n_times", int, "time samples per trajectory"),
    "--t-max": ("t_max", float, "last sample time of simulate and verify"),
    "--window-min": ("window_min", float, "start of the rate fitting window (default 1e3)"),
    "--window-max": ("window_max", float, "end of the rate fitting window (default 1e6)"),
    "-k": ("deriv_order", int, "derivative order of the norm"),
    "-l": ("reg_order", int, "extra derivatives traded for decay"),
    "--flip-coupling": ("flip_coupling", str, "sign-flip one generator coupling term"),
}

SUBCOMMANDS = {
    "bounds": "check the two-sided bounds of the decay envelopes",
    "simulate": "evolve the initial profile at the listed frequencies",
    "envelope": "fit the pointwise energy envelope over a frequency sweep",
    "verify": "check the energy balance, the inequality ladder and the Lyapunov constants",
    "rates": "fit norm decay rates and compare them with the predicted exponents",
}


def config_keys() -> set[str]:
    fields = set(ExperimentConfig.model_fields) - set(INTERNAL_KEYS)
    return fields | set(PARAMETER_NAMES)


def load_key_value_file(path: Path) -> dict[str, str]:
    """Parse ``key = value`` lines; blank lines and ``#`` comments are skipped."""
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    known = config_keys()
    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"{path}:{number}: expected 'key = value'")
        if key not in known:
            raise ConfigError(f"{path}:{number}: unknown key {key!r}")
        values[key] = value
    return values


def build_config(experiment: str, values: dict[str, Any]) -> ExperimentConfig:
    """ExperimentConfig from flat key/value pairs, validated for the run."""
    unknown = set(values) - config_keys()
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}")
    fields: dict[str, Any] = {"experiment": experiment}
    parameters: dict[str, Any] = {}
    for key, value in values.items():
        if key in LIST_KEYS and isinstance(value, str):
            value = tuple(item.strip() for item in value.split(",") if item.strip())
        if key in PARAMETER_NAMES:
            parameters[key] = value
        else:
            fields[key] = value
    fields["parameters"] = parameters
    try:
        cfg = ExperimentConfig.model_validate(fields)
    except ValidationError as e:
        raise ConfigError(str(e).replace("\n", "; ")) from e

    validate(cfg.parameters, cfg.kind, cfg.allow_degenerate)
    if cfg.flip_coupling is not None and cfg.flip_coupling not in set(Coupling):
        raise ConfigError(
            f"unknown coupling {cfg.flip_coupling!r}; choose from {', '.join(Coupling)}"
        )
    InitialProfile.from_config(cfg).check(cfg.kind)
    return cfg


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value configuration file")
    for flag, (key, kind, text) in OPTIONS.items():
        common.add_argument(flag, dest=key, type=kind, default=None, help=text)
    for name in PARAMETER_NAMES:
        common.add_argument(
            f"--{name}", dest=name, type=float, default=None, help=argparse.SUPPRESS
        )
    common.add_argument(
        "--allow-degenerate",
        dest="allow_degenerate",
        action="store_const",
        const=True,
        default=None,
        help="accept gamma = 0 (undamped system)",
    )
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings only")

    parser = argparse.ArgumentParser(
        prog="bresselab",
        description="Fourier-space laboratory for the thermoelastic Bresse systems",
        epilog="Physical coefficients are set with --rho1, --rho2, --b, --k, --k0, --k1, "
        "--k2, --l, --gamma, --m1, --m2, --alpha1 and --alpha2.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name, text in SUBCOMMANDS.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def _fail(error: Exception) -> None:
    message = str(error).replace("\n", " ")
    print(f"error={type(error).__name__} message={message}", file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    """Run one experiment; 0 when every verdict passes, 1 otherwise, 2 on bad input."""
    args = build_parser().parse_args(argv)
    configure_logging(1 if args.verbose else -1 if args.quiet else 0)

    try:
        values: dict[str, Any] = load_key_value_file(args.config) if args.config else {}
        # Flags override the file
        for key in config_keys():
            flag_value = getattr(args, key, None)
            if flag_value is not None:
                values[key] = flag_value
        cfg = build_config(args.experiment, values)
    except (ConfigError, BadAssignment) as e:
        _fail(e)
        return EXIT_CONFIG

    try:
        passed = run(cfg)
    except BresseLabError as e:
        _fail(e)
        return EXIT_FAILED
    return EXIT_OK if passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
