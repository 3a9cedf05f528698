"""Command-line front end: spectrum sweeps, benchmark presets, verification.

Exit codes: 0 success, 1 failed verification check, 2 configuration error,
3 unstable model, 4 numerical failure (offending frequency on stderr).
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Mapping

import numpy as np

from . import noise, presets, verify
from .errors import (
    InvalidConfig,
    ParametricDivergence,
    SingularAtFrequency,
    UnstableModel,
    ZeroResponse,
)
from .schemes import VARIANTS, DetectorParams, SchemeConfig
from .spectra import squeeze_spectrum, vacuum

MAX_POINTS = 10**7

_SCHEME_DEFAULTS: dict[str, object] = {
    "variant": "standard",
    "Omega": 0.01,
    "Gamma": 0.01,
    "gamma": 3.0,
    "Delta": 0.0,
    "g": -10.0,
    "phi": 0.0,
    "eta": 1.0,
    "squeeze": 0.0,
    "squeeze_angle": 0.0,
    "n_th": 0.0,
}

_GRID_DEFAULTS: dict[str, object] = {
    "omega_min": 1e-3,
    "omega_max": 1e1,
    "points": 400,
    "spacing": "log",
}


def fmt12(value: float) -> str:
    """12 significant digits; scientific notation once |exponent| reaches 6."""
    if value == 0.0:
        return "0"
    exponent = math.floor(math.log10(abs(value)))
    if abs(exponent) >= 6:
        return f"{value:.11e}"
    return f"{value:.{11 - exponent}f}"


@dataclass(frozen=True)
class GridSpec:
    omega_min: float
    omega_max: float
    points: int
    spacing: str

    def __post_init__(self):
        if not self.omega_min > 0.0:
            raise InvalidConfig("omega_min must be positive")
        if not self.omega_max > self.omega_min:
            raise InvalidConfig("omega_max must exceed omega_min")
        if not 2 <= self.points <= MAX_POINTS:
            raise InvalidConfig(f"points must lie in [2, {MAX_POINTS}]")
        if self.spacing not in ("linear", "log"):
            raise InvalidConfig("spacing must be 'linear' or 'log'")

    def frequencies(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.omega_min, self.omega_max, self.points)
        return np.linspace(self.omega_min, self.omega_max, self.points)


def _merge(flag_values: dict, file_values: dict, defaults: dict) -> dict:
    merged = dict(defaults)
    merged.update({k: v for k, v in file_values.items() if v is not None})
    merged.update({k: v for k, v in flag_values.items() if v is not None})
    return merged


def _config_parser() -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    # keys are case sensitive: Gamma (mechanical) and gamma (cavity) differ
    parser.optionxform = str
    return parser


def _read_config_file(path: str) -> tuple[dict, dict]:
    parser = _config_parser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise InvalidConfig(f"cannot read config file {path!r}: {exc}") from exc

    scheme: dict[str, object] = {}
    grid: dict[str, object] = {}
    try:
        if parser.has_section("scheme"):
            for key in parser.options("scheme"):
                if key not in _SCHEME_DEFAULTS:
                    raise InvalidConfig(f"unknown scheme key {key!r}")
                if key == "variant":
                    scheme[key] = parser.get("scheme", key).strip()
                else:
                    scheme[key] = parser.getfloat("scheme", key)
        if parser.has_section("grid"):
            for key in parser.options("grid"):
                if key == "spacing":
                    grid[key] = parser.get("grid", key).strip()
                elif key == "points":
                    grid[key] = parser.getint("grid", key)
                elif key in ("omega_min", "omega_max"):
                    grid[key] = parser.getfloat("grid", key)
                else:
                    raise InvalidConfig(f"unknown grid key {key!r}")
    except (ValueError, configparser.Error) as exc:
        raise InvalidConfig(f"bad value in config file {path!r}: {exc}") from exc
    return scheme, grid


def _dump_config(path: str, scheme: Mapping[str, object], grid: Mapping[str, object]):
    parser = _config_parser()
    parser["scheme"] = {k: str(v) for k, v in scheme.items()}
    parser["grid"] = {k: str(v) for k, v in grid.items()}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        parser.write(fh)


def _scheme_config(values: Mapping[str, object]) -> SchemeConfig:
    variant = str(values["variant"]).lower()
    if variant not in VARIANTS:
        raise InvalidConfig(f"unknown scheme variant {variant!r}")
    params = DetectorParams(
        Omega=float(values["Omega"]),
        Gamma=float(values["Gamma"]),
        gamma=float(values["gamma"]),
        Delta=float(values["Delta"]),
        g=float(values["g"]),
        n_th=float(values["n_th"]),
    )
    s = float(values["squeeze"])
    if s != 0.0:
        spectrum = squeeze_spectrum(s, float(values["squeeze_angle"]))
    else:
        spectrum = vacuum()
    return SchemeConfig(
        variant=variant,
        params=params,
        readout_angle=float(values["phi"]),
        input_spectrum=spectrum,
        eta=float(values["eta"]),
    )


def write_spectrum_csv(
    spectrum: noise.SensitivitySpectrum, fh: IO[str], metadata: Mapping[str, object]
):
    for key, value in metadata.items():
        fh.write(f"# {key} = {value}\n")
    fh.write(",".join(spectrum.columns) + "\n")
    for row in spectrum.rows():
        fh.write(",".join(fmt12(float(x)) for x in row) + "\n")


def _spectrum_metadata(values: Mapping[str, object], grid: Mapping[str, object]) -> dict:
    meta = {k: values[k] for k in _SCHEME_DEFAULTS}
    meta.update({k: grid[k] for k in _GRID_DEFAULTS})
    return meta


def cmd_spectrum(args: argparse.Namespace) -> int:
    flag_scheme = {k: getattr(args, k) for k in _SCHEME_DEFAULTS}
    flag_grid = {k: getattr(args, k) for k in _GRID_DEFAULTS}
    file_scheme: dict = {}
    file_grid: dict = {}
    if args.config:
        file_scheme, file_grid = _read_config_file(args.config)

    scheme_values = _merge(flag_scheme, file_scheme, _SCHEME_DEFAULTS)
    grid_values = _merge(flag_grid, file_grid, _GRID_DEFAULTS)

    if args.dump_config:
        _dump_config(args.dump_config, scheme_values, grid_values)

    config = _scheme_config(scheme_values)
    grid = GridSpec(
        omega_min=float(grid_values["omega_min"]),
        omega_max=float(grid_values["omega_max"]),
        points=int(grid_values["points"]),
        spacing=str(grid_values["spacing"]),
    )
    spectrum = noise.sensitivity_spectrum(config, grid.frequencies())
    metadata = _spectrum_metadata(scheme_values, grid_values)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            write_spectrum_csv(spectrum, fh, metadata)
    else:
        write_spectrum_csv(spectrum, sys.stdout, metadata)
    return 0


def _write_preset(
    config: SchemeConfig, grid: np.ndarray, path: Path, extra: Mapping[str, object]
):
    spectrum = noise.sensitivity_spectrum(config, grid)
    p = config.params
    metadata = {
        "variant": config.variant,
        "Omega": p.Omega, "Gamma": p.Gamma, "gamma": p.gamma,
        "Delta": p.Delta, "g": p.g, "phi": config.readout_angle,
        "omega_min": grid[0], "omega_max": grid[-1], "points": len(grid),
        "spacing": "log",
    }
    metadata.update(extra)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_spectrum_csv(spectrum, fh, metadata)


def cmd_fig2a(args: argparse.Namespace) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = presets.fig2a_grid()
    for name, config in presets.fig2a_configs().items():
        _write_preset(config, grid, outdir / f"fig2a_{name}.csv", {"curve": name})
        print(f"wrote {outdir / f'fig2a_{name}.csv'}")
    return 0


def cmd_fig2b(args: argparse.Namespace) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    config = presets.fig2b_config()
    path = outdir / "fig2b_toy.csv"
    _write_preset(config, presets.fig2b_grid(), path, {"curve": "toy", "eta": config.eta})
    print(f"wrote {path}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    import time

    start = time.perf_counter()
    results = verify.run_suite(args.suite, seed=args.seed)
    for result in results:
        print(result.line())
    elapsed = time.perf_counter() - start
    failed = [r for r in results if not r.passed]
    print(
        f"{len(results) - len(failed)}/{len(results)} checks passed "
        f"in {elapsed:.1f} s (seed = {args.seed})"
    )
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forcelimits",
        description="Force-sensitivity spectra and quantum-limit bounds for "
        "linear optomechanical detectors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    spectrum = sub.add_parser(
        "spectrum", help="write the sensitivity spectrum of one scheme as CSV"
    )
    spectrum.add_argument("--scheme", dest="variant", choices=VARIANTS, default=None)
    for flag in ("Omega", "Gamma", "gamma", "Delta", "g", "phi", "eta",
                 "squeeze", "squeeze-angle", "n-th"):
        spectrum.add_argument(
            f"--{flag}", dest=flag.replace("-", "_"), type=float, default=None
        )
    spectrum.add_argument("--omega-min", dest="omega_min", type=float, default=None)
    spectrum.add_argument("--omega-max", dest="omega_max", type=float, default=None)
    spectrum.add_argument("--points", type=int, default=None)
    spectrum.add_argument("--spacing", choices=("linear", "log"), default=None)
    spectrum.add_argument("--output", default=None, help="CSV path (default stdout)")
    spectrum.add_argument("--config", default=None, help="key = value config file")
    spectrum.add_argument(
        "--dump-config", dest="dump_config", default=None,
        help="write the effective configuration to this path before running",
    )
    spectrum.set_defaults(func=cmd_spectrum)

    fig2a = sub.add_parser(
        "fig2a", help="emit the four benchmark readout-strategy spectra"
    )
    fig2a.add_argument("--outdir", default=".")
    fig2a.set_defaults(func=cmd_fig2a)

    fig2b = sub.add_parser(
        "fig2b", help="emit the mixed-coupling benchmark spectrum"
    )
    fig2b.add_argument("--outdir", default=".")
    fig2b.set_defaults(func=cmd_fig2b)

    verify_cmd = sub.add_parser("verify", help="run a verification suite")
    verify_cmd.add_argument("suite", choices=verify.SUITES + ("all",))
    verify_cmd.add_argument("--seed", type=int, default=0)
    verify_cmd.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidConfig as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except UnstableModel as exc:
        print(f"unstable model: {exc}", file=sys.stderr)
        return 3
    except (SingularAtFrequency, ZeroResponse, ParametricDivergence) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
