"""Command-line front end.

    catlab <command> [--config run.json] [flag overrides...]

Commands: distribution | time-sweep | temp-sweep | qfi-map | wigner |
classical | catqubit | all-figures.  Each run writes figure-ready CSV files
plus a manifest.json with config echo and per-file checksums.

Exit codes: 0 success, 2 configuration error, 3 numerical-invariant failure.
The CATLAB_WORKERS environment variable overrides the configured worker
count.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, RunConfig
from .harness import COMMANDS, run_command
from .spin import NumericalInvariantError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catlab",
        description="Two-mode interferometer cat-state simulator and metrology sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in list(COMMANDS) + ["all-figures"]:
        p = sub.add_parser(name, help=f"run the {name} computation")
        p.add_argument("--config", type=str, default=None, help="JSON config file")
        p.add_argument("--n", type=int, default=None, help="particle number N (even)")
        p.add_argument("--u", type=float, default=None, help="interaction energy u")
        p.add_argument("--t-hop", type=float, default=None, help="hopping energy t")
        p.add_argument("--state", choices=["pi", "zero"], default=None)
        p.add_argument(
            "--beta-inv", type=float, default=None,
            help="initial temperature in units of eps_tau (0 = pure state)",
        )
        p.add_argument("--time-factor", type=float, default=None, help="multiple of T_pi")
        p.add_argument("--grid-theta", type=int, default=None)
        p.add_argument("--grid-phi", type=int, default=None)
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--factors", type=float, nargs="+", default=None,
                       help="time-sweep factors (multiples of T_pi)")
        p.add_argument("--betas", type=float, nargs="+", default=None,
                       help="temperature-sweep grid (beta_inv values)")
        p.add_argument("--alpha", type=float, default=None,
                       help="cat-qubit ratio Lambda / PW")
        p.add_argument("--lambda-cl", type=float, default=None,
                       help="classical-portrait coupling override")
        p.add_argument("--sign-convention", choices=["figure_one", "literal_eq5"],
                       default=None)
        p.add_argument("--optimize-time", action="store_true",
                       help="pick the extensive-difference maximizing time per sweep point")
    return parser


_FLAG_FIELDS = {
    "n": "n_particles",
    "u": "u_int",
    "t_hop": "t_hop",
    "state": "state_label",
    "beta_inv": "beta_inv_over_eps",
    "time_factor": "time_factor",
    "grid_theta": "grid_theta",
    "grid_phi": "grid_phi",
    "out": "out_dir",
    "workers": "workers",
    "factors": "time_factors",
    "betas": "beta_inv_grid",
    "alpha": "cat_alpha",
    "lambda_cl": "lambda_cl",
    "sign_convention": "sign_convention",
}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.config is not None:
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        data = RunConfig.from_json(path.read_text(encoding="utf-8")).to_dict()
    else:
        data = RunConfig().to_dict()
    for flag, field_name in _FLAG_FIELDS.items():
        value = getattr(args, flag, None)
        if value is not None:
            data[field_name] = value
    if getattr(args, "optimize_time", False):
        data["optimize_time_factor"] = True
    return RunConfig.from_dict(data)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        outputs = run_command(args.command, config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalInvariantError as exc:
        print(f"numerical invariant failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for path in outputs:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
