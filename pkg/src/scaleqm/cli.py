"""Configuration-driven runner for the numerical check suites.

Subcommands map one-to-one onto the suites in :mod:`scaleqm.checks`
(``axioms``, ``single``, ``spectrum``, ``momentum``, ``entangled``) plus
``all``, which runs every suite in a fixed order.  Each run writes, into
the output directory:

* ``<suite>_checks.csv`` — one row per named check;
* ``<suite>_summary.json`` — aggregate counts plus the fully-resolved
  configuration (minus the output path, which does not affect results);
* extra tables some suites produce (``spectrum_table.csv``, state dumps).

Output is deterministic: a fixed seed and configuration produce
byte-identical files and stdout, run after run.  The exit code is 0 iff
every check passed, 1 if any check failed its tolerance, and 2 for
configuration or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

from .checks import CheckResult, run_axioms, run_entangled, run_momentum, run_single, run_spectrum
from .errors import ScaleQMError
from .scaling_field import FIELD_PRESETS, Grid, ScalingField, build_field, load_gamma_table, preset_field
from .single_particle import PhysicalParams, positive_sign_params

__all__ = ["RunConfig", "main", "entry_point"]

SUITES = ("axioms", "single", "spectrum", "momentum", "entangled")

#: per-suite default grid sizes, used when the config leaves grid_n unset
DEFAULT_GRID_N = {"single": 64, "spectrum": 64, "momentum": 256, "entangled": 32}

ENV_OUT = "SCALEQM_OUT"
FALLBACK_OUT = "scaleqm_out"


class ConfigError(ValueError):
    """Raised for malformed configuration files or inconsistent options."""


@dataclass
class RunConfig:
    """Fully-resolved run configuration (file values overridden by flags)."""

    dims: int = 1
    grid_n: Optional[int] = None  # None -> per-suite default
    field: str = "sine"  # preset name, or path to a gamma CSV table
    alpha: float = 0.3
    hbar: float = 1.0
    mass: float = 1.0
    paper_signs: bool = False
    seed: int = 0
    samples: int = 200
    n_particles: int = 3
    refs: str = "distinct"
    hilbert: bool = True
    tol: Optional[float] = None  # global tolerance override; None -> per-check defaults

    def validate(self):
        if self.dims not in (1, 2, 3):
            raise ConfigError(f"dims must be 1, 2 or 3, got {self.dims}")
        if self.grid_n is not None and self.grid_n < 4:
            raise ConfigError(f"grid_n must be at least 4, got {self.grid_n}")
        if self.alpha != self.alpha:  # NaN
            raise ConfigError("alpha must be a number")
        if self.hbar <= 0 or self.mass <= 0:
            raise ConfigError("hbar and mass must be positive")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.samples < 1:
            raise ConfigError(f"samples must be positive, got {self.samples}")
        if self.n_particles not in (1, 2, 3):
            raise ConfigError(f"n_particles must be 1, 2 or 3, got {self.n_particles}")
        if self.refs not in ("distinct", "equal"):
            raise ConfigError(f"refs must be 'distinct' or 'equal', got {self.refs!r}")
        if self.tol is not None and self.tol < 0:
            raise ConfigError(f"tol must be non-negative, got {self.tol}")
        if self.field not in FIELD_PRESETS and not Path(self.field).is_file():
            raise ConfigError(
                f"field {self.field!r} is neither a preset "
                f"({', '.join(sorted(FIELD_PRESETS))}) nor an existing CSV file")

    def physical_params(self) -> PhysicalParams:
        if self.paper_signs:
            return positive_sign_params(hbar=self.hbar, mass=self.mass)
        return PhysicalParams(hbar=self.hbar, mass=self.mass)

    def field_maker(self):
        name = self.field
        if name in FIELD_PRESETS:
            key = "kappa" if name == "constant" else "alpha"
            kwargs = {key: self.alpha}

            def make(grid: Grid, method: str) -> ScalingField:
                return preset_field(grid, name, gradient_method=method, **kwargs)

        else:
            # CSV tables pin one grid size; suites that refine the grid
            # will report a shape error, which is the honest outcome
            def make(grid: Grid, method: str) -> ScalingField:
                return build_field(grid, load_gamma_table(name, grid),
                                   gradient_method=method)

        return make

    def grid_points(self, suite: str) -> int:
        if self.grid_n is not None:
            return self.grid_n
        return DEFAULT_GRID_N.get(suite, 64)

    def echo(self) -> dict:
        return asdict(self)


def load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            values = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config {path} is not valid JSON: line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}") from exc
    if not isinstance(values, dict):
        raise ConfigError(f"config {path} must contain a JSON object")
    known = {f.name for f in fields(RunConfig)}
    for key in values:
        if key not in known:
            raise ConfigError(f"config {path}: unknown field {key!r} "
                              f"(known: {', '.join(sorted(known))})")
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config is not None:
        values.update(load_config_file(args.config))
    flag_map = {
        "dims": args.dims,
        "grid_n": args.grid_n,
        "field": args.field,
        "alpha": args.alpha,
        "seed": args.seed,
        "tol": args.tol,
        "n_particles": getattr(args, "n_particles", None),
        "refs": getattr(args, "refs", None),
    }
    for key, value in flag_map.items():
        if value is not None:
            values[key] = value
    if args.paper_signs:
        values["paper_signs"] = True
    if getattr(args, "hilbert", False):
        values["hilbert"] = True
    try:
        config = RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    config.validate()
    return config


def resolve_out_dir(args: argparse.Namespace) -> Path:
    if args.out is not None:
        return Path(args.out)
    env = os.environ.get(ENV_OUT, "").strip()
    return Path(env) if env else Path(FALLBACK_OUT)


# ----------------------------------------------------------------- reporting

CHECK_SCHEMAS = {
    "axioms": ("check_name", "max_abs_error", "tolerance", "pass"),
    "single": ("check_name", "grid_N", "max_abs_error", "tolerance", "pass"),
    "spectrum": ("check_name", "grid_N", "max_abs_error", "tolerance", "pass"),
    "momentum": ("check_name", "grid_N", "max_abs_error", "tolerance", "pass"),
    "entangled": ("check_name", "n", "grid_N", "max_abs_error", "pass"),
}


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return "" if value is None else str(value)


def _check_row(suite: str, result: CheckResult) -> tuple:
    by_column = {
        "check_name": result.name,
        "grid_N": result.grid_n,
        "n": result.n_particles,
        "max_abs_error": result.max_abs_error,
        "tolerance": result.tolerance,
        "pass": result.passed,
    }
    return tuple(_cell(by_column[column]) for column in CHECK_SCHEMAS[suite])


def write_csv(path: Path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_summary(path: Path, suite: str, results, config: RunConfig, extra=None):
    summary = {
        "suite": suite,
        "n_checks": len(results),
        "n_passed": sum(1 for r in results if r.passed),
        "max_error": max((r.max_abs_error for r in results), default=0.0),
        "config": config.echo(),
    }
    if extra:
        summary.update(extra)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(summary, handle, indent=2, sort_keys=True)
        handle.write("\n")


def print_results(suite: str, results):
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        where = ""
        if result.n_particles is not None:
            where += f" n={result.n_particles}"
        if result.grid_n is not None:
            where += f" N={result.grid_n}"
        print(f"{status} [{suite}]{where} {result.name}: "
              f"max_abs_error={result.max_abs_error!r} tolerance={result.tolerance!r}")
    passed = sum(1 for r in results if r.passed)
    print(f"suite {suite}: {passed}/{len(results)} checks passed")


# ------------------------------------------------------------------ dispatch


def run_suite(suite: str, config: RunConfig):
    """Run one named suite; returns (results, tables)."""
    params = config.physical_params()
    maker = config.field_maker()
    if suite == "axioms":
        return run_axioms(seed=config.seed, samples=config.samples,
                          include_hilbert=config.hilbert, tol_override=config.tol)
    if suite == "single":
        return run_single(grid_n=config.grid_points(suite), dims=config.dims,
                          alpha=config.alpha, params=params, field_maker=maker,
                          tol_override=config.tol)
    if suite == "spectrum":
        return run_spectrum(grid_n=config.grid_points(suite), alpha=config.alpha,
                            params=params, field_maker=maker, tol_override=config.tol)
    if suite == "momentum":
        return run_momentum(grid_n=config.grid_points(suite), alpha=config.alpha,
                            field_maker=maker, tol_override=config.tol)
    if suite == "entangled":
        return run_entangled(grid_n=config.grid_points(suite), dims=config.dims,
                             alpha=config.alpha, n_particles=config.n_particles,
                             refs=config.refs, params=params, field_maker=maker,
                             dump_state=True, tol_override=config.tol)
    raise ConfigError(f"unknown suite {suite!r}")


def write_suite_reports(out_dir: Path, suite: str, results, tables, config: RunConfig):
    write_csv(out_dir / f"{suite}_checks.csv", CHECK_SCHEMAS[suite],
              [_check_row(suite, r) for r in results])
    for name, (header, rows) in tables.items():
        write_csv(out_dir / f"{name}_table.csv", header, rows)
    write_summary(out_dir / f"{suite}_summary.json", suite, results, config)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scaleqm",
        description="Run numerical check suites for scaled quantum structures.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="JSON config file; flags override file values")
    common.add_argument("--grid-n", dest="grid_n", type=int, metavar="N",
                        help="grid points per axis (default: per-suite)")
    common.add_argument("--dims", type=int, metavar="D",
                        help="spatial dimensions (1-3, default 1)")
    common.add_argument("--field", metavar="NAME|CSV",
                        help="field preset name or path to a gamma CSV table")
    common.add_argument("--alpha", type=float, metavar="A",
                        help="field preset amplitude parameter")
    common.add_argument("--seed", type=int, metavar="S",
                        help="random seed for sampled checks")
    common.add_argument("--tol", type=float, metavar="T",
                        help="override every check tolerance (0 fails everything)")
    common.add_argument("--out", metavar="DIR",
                        help=f"output directory (default: ${ENV_OUT} or ./{FALLBACK_OUT})")
    common.add_argument("--paper-signs", action="store_true",
                        help="use +ihbar momentum and +hbar^2/2m kinetic signs")

    sub = parser.add_subparsers(dest="suite", required=True, metavar="SUITE")
    axioms = sub.add_parser("axioms", parents=[common],
                            help="projected field and vector-space axioms")
    axioms.add_argument("--hilbert", action="store_true",
                        help="include the scaled vector-space checks (default on)")
    sub.add_parser("single", parents=[common],
                   help="single-particle operator checks")
    sub.add_parser("spectrum", parents=[common],
                   help="standard versus field-modified Hamiltonian spectra")
    sub.add_parser("momentum", parents=[common],
                   help="momentum-representation and convolution checks")
    entangled = sub.add_parser("entangled", parents=[common],
                               help="n-particle scaling and operator checks")
    entangled.add_argument("--n", dest="n_particles", type=int, metavar="N",
                           help="largest particle count to exercise (1-3)")
    entangled.add_argument("--refs", choices=("distinct", "equal"),
                           help="reference-point layout for the pair state")
    all_parser = sub.add_parser("all", parents=[common], help="run every suite")
    all_parser.add_argument("--n", dest="n_particles", type=int, metavar="N",
                            help="largest particle count for the entangled suite")
    all_parser.add_argument("--refs", choices=("distinct", "equal"),
                            help="reference-point layout for the pair state")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        out_dir = resolve_out_dir(args)
        out_dir.mkdir(parents=True, exist_ok=True)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot create output directory: {exc}", file=sys.stderr)
        return 2

    suites = SUITES if args.suite == "all" else (args.suite,)
    all_results = []
    per_suite = {}
    try:
        for suite in suites:
            results, tables = run_suite(suite, config)
            write_suite_reports(out_dir, suite, results, tables, config)
            print_results(suite, results)
            all_results.extend(results)
            per_suite[suite] = {
                "n_checks": len(results),
                "n_passed": sum(1 for r in results if r.passed),
                "max_error": max((r.max_abs_error for r in results), default=0.0),
            }
        if args.suite == "all":
            write_summary(out_dir / "all_summary.json", "all", all_results, config,
                          extra={"suites": per_suite})
    except ScaleQMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return 2

    total_passed = sum(1 for r in all_results if r.passed)
    print(f"total: {total_passed}/{len(all_results)} checks passed")
    return 0 if total_passed == len(all_results) else 1


def entry_point():
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry_point()
