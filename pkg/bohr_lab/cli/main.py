"""bohr-lab command-line interface.

Commands:
  - radius      Solve one radius problem (--thm 1, 2 or 4).
  - coeffs      Print A_n (--alpha) or c_n(p) (--p) for a range of n.
  - scan        Tabulate the radius function on [0, x_max] for plotting.
  - verify      Run the sampled certification suite.
  - selftest    Run the acceptance battery.

Notes:
  - Reports go to stdout (or --output); logs go to stderr.
  - Exit codes: 0 ok, 1 violation or failed criterion, 2 invalid parameters
    (argparse errors included), 3 solver or internal failure.

"""

from __future__ import annotations

import argparse
import logging
import logging.config
from collections.abc import Sequence

from bohr_lab import __version__
from bohr_lab.cli.commands import (
    CliConfig,
    cmd_coeffs,
    cmd_radius,
    cmd_scan,
    cmd_selftest,
    cmd_verify,
)
from bohr_lab.cli.output import FORMATS
from bohr_lab.config import build_config
from bohr_lab.errors import report_failure
from bohr_lab.logging_utils import cli_log_config

DEFAULT_FORMATS = {
    "radius": "json",
    "coeffs": "csv",
    "scan": "csv",
    "verify": "json",
    "selftest": "text",
}


def _output_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "--format",
        dest="fmt",
        choices=FORMATS,
        help="Report format (default depends on the command)",
    )
    parent.add_argument("--output", help="Write the report to PATH instead of stdout")
    return parent


def _family_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    family = parent.add_mutually_exclusive_group(required=True)
    family.add_argument("--alpha", type=float, help="Opening-angle parameter in [1, 2]")
    family.add_argument("--p", type=float, help="Pole parameter in (0, 1)")
    return parent


def _problem_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--thm", type=int, choices=(1, 2, 4), required=True)
    parent.add_argument("--N", type=int, default=1, help="First tail index (>= 1)")
    parent.add_argument("--m0", default="inf", help="Order of w at 0 (int or inf)")
    parent.add_argument("--m1", default="inf", help="Order of w* (thm 2)")
    parent.add_argument("--m2", default="inf", help="Order of w** (thm 2)")
    parent.add_argument("--h", default="n", help="Vanishing orders: n or a*n+b")
    parent.add_argument("--tol", type=float, help="Final bracket width")
    return parent


def build_parser() -> argparse.ArgumentParser:
    """Construct the top-level argument parser for the bohr-lab CLI."""
    parser = argparse.ArgumentParser(
        prog="bohr-lab", description="Bohr-Rogosinski radii for concave families"
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--verbose", "-v", action="store_true", help="Log solver details to stderr"
    )
    parser.add_argument(
        "--env-file", default=".env", help="Environment file (default: .env)"
    )
    sub = parser.add_subparsers(dest="cmd", required=True)
    output = _output_parent()
    family = _family_parent()
    problem = _problem_parent()

    # radius
    sub.add_parser(
        "radius", parents=[family, problem, output], help="Compute one radius"
    )

    # coeffs
    p_coeffs = sub.add_parser(
        "coeffs", parents=[family, output], help="Print series coefficients"
    )
    p_coeffs.add_argument("--n-min", type=int, default=1)
    p_coeffs.add_argument("--n-max", type=int, default=10)

    # scan
    p_scan = sub.add_parser(
        "scan", parents=[family, problem, output], help="Tabulate a radius function"
    )
    p_scan.add_argument("--points", type=int, default=101, help="Grid size (>= 2)")

    # verify
    p_verify = sub.add_parser(
        "verify", parents=[output], help="Run the certification suite"
    )
    p_verify.add_argument("--suite", help="YAML suite file")
    p_verify.add_argument("--seed", type=int)
    p_verify.add_argument("--samples", type=int)
    p_verify.add_argument("--radius-scale", type=float)
    p_verify.add_argument("--threads", type=int)

    # selftest
    p_self = sub.add_parser(
        "selftest", parents=[output], help="Run the acceptance battery"
    )
    p_self.add_argument(
        "--only", type=int, action="append", help="Run only this criterion"
    )
    p_self.add_argument("--threads", type=int)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point for the `bohr-lab` CLI; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.fmt is None:
        args.fmt = DEFAULT_FORMATS[args.cmd]

    try:
        settings = build_config(args.env_file)
        logging.config.dictConfig(
            cli_log_config(verbose=args.verbose, level=settings.log_level())
        )
        logging.captureWarnings(True)
        cfg = CliConfig.from_namespace(args)

        if args.cmd == "radius":
            return cmd_radius(cfg, settings)
        if args.cmd == "coeffs":
            return cmd_coeffs(cfg, settings)
        if args.cmd == "scan":
            return cmd_scan(cfg, settings)
        if args.cmd == "verify":
            return cmd_verify(cfg, settings)
        if args.cmd == "selftest":
            return cmd_selftest(cfg, settings)
        parser.print_help()
        return 2
    except Exception as exc:
        return report_failure(exc)


if __name__ == "__main__":
    raise SystemExit(main())
