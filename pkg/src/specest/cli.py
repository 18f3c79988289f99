"""Command-line entry point.

Subcommands: ``signal``, ``estimate``, ``figure2``, ``figure3``,
``figure4``, ``trotter``, ``bounds``, ``oracle``. A JSON config document
supplies parameters; repeated ``--set key=value`` flags override fields.
Exit codes: 0 success, 2 config error, 3 resource cap, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import experiments as ex
from .errors import ConfigError, NumericError, ResourceLimitError, SpecEstError


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, default=None, help="JSON config file")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="specest", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("signal", "generate one evolution signal CSV"),
        ("figure2", "noiseless recovery sweep vs K"),
        ("figure3", "signal traces for both input states"),
        ("figure4", "spectral estimates vs g and errors vs sample size"),
        ("trotter", "Trotter error sweep with bounds"),
        ("bounds", "recovery-bound audit on synthetic ensembles"),
        ("oracle", "exact spectrum and exact signals"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
    p_est = sub.add_parser("estimate", help="run ESPRIT / matrix pencil on a signal CSV")
    p_est.add_argument("--signal", type=Path, required=True, dest="signal_path")
    p_est.add_argument("--tf", type=float, default=0.02)
    p_est.add_argument("--order", dest="model_order", type=int, default=None, help="fix the model order S")
    p_est.add_argument("--method", choices=["esprit", "matrix_pencil"], default="esprit")
    p_est.add_argument("--out", type=Path, default=Path("out"))
    return parser


def _load_config(args: argparse.Namespace) -> ex.ExperimentConfig:
    cfg = ex.ExperimentConfig.from_file(args.config) if args.config else ex.ExperimentConfig()
    if args.overrides:
        cfg = cfg.apply_overrides(args.overrides)
    if args.seed is not None:
        cfg = cfg.apply_overrides([f"seed={args.seed}"])
    return cfg


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "estimate":
            path = ex.run_estimate(args.signal_path, args.out, tf=args.tf, S=args.model_order, method=args.method)
            print(path)
            return 0
        cfg = _load_config(args)
        out = args.out
        if args.command == "signal":
            print(ex.run_signal(cfg, out))
        elif args.command == "figure2":
            ex.run_figure2_analog(cfg, out)
            print(out / "figure2_summary.csv")
        elif args.command == "figure3":
            for path in ex.run_figure3_analog(cfg, out).values():
                print(path)
        elif args.command == "figure4":
            ex.run_figure4_analog(cfg, out)
            print(out / "figure4_errors.csv")
        elif args.command == "trotter":
            ex.run_trotter_sweep(cfg, out)
            print(out / "trotter_sweep.csv")
        elif args.command == "bounds":
            report = ex.run_bounds_audit(cfg, out)
            violations = sum(m["violations"] for m in report.values())
            print(out / "bounds_audit.json")
            if violations:
                print(f"bound violations: {violations}", file=sys.stderr)
                return 4
        elif args.command == "oracle":
            for path in ex.run_oracle(cfg, out):
                print(path)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except (NumericError, SpecEstError, ValueError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
