"""Command-line entry point.

Subcommands fig2..fig6 and validate run campaigns from an optional JSON
config (defaults are built in, including the worked comparison instance
for fig5); ft-compare prints the QPE-vs-RFE cost table directly from
flags without a config file.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import bounds, campaigns, resources
from .config import (
    SCHEMA_VERSION,
    ConfigError,
    RunConfig,
    canonical_text,
    parse_config,
    write_csv,
)

__all__ = ["main"]

_WORKED_INSTANCE = {"N": 100, "D": 1000, "epsilon": 1e-3, "delta": 1e-2}
_WORKED_MODEL = {"A": 0.5, "B": 1.6}


def _default_config(kind: str) -> str:
    doc: dict = {"schema": SCHEMA_VERSION, "campaign": {"kind": kind}}
    if kind == "fig5":
        doc["instance"] = dict(_WORKED_INSTANCE)
        doc["model"] = dict(_WORKED_MODEL)
    if kind == "validate":
        doc["campaign"]["trials"] = 200
    return json.dumps(doc)


def _parse_float_list(text: str, flag: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(flag, f"expected comma-separated numbers, got {text!r}") from exc
    if not values:
        raise ConfigError(flag, "expected at least one value")
    return values


def _load_config(args: argparse.Namespace, kind: str) -> RunConfig:
    if args.config is not None:
        text = Path(args.config).read_text()
    else:
        text = _default_config(kind)
    config = parse_config(text)
    if config.kind != kind:
        raise ConfigError("campaign.kind", f"config is for {config.kind!r}, command is {kind!r}")
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if getattr(args, "trials", None) is not None:
        config = replace(config, trials=args.trials)
    if kind == "fig4":
        options = dict(config.options)
        if args.lambda_list is not None:
            options["lambdas"] = _parse_float_list(args.lambda_list, "--lambda-list")
        if args.epsilon_decades is not None:
            decades = _parse_float_list(args.epsilon_decades, "--epsilon-decades")
            if len(decades) != 2:
                raise ConfigError("--epsilon-decades", "expected MIN_EXP,MAX_EXP")
            options["epsilon_min"] = 10.0 ** decades[0]
            options["epsilon_max"] = 10.0 ** decades[1]
        if args.delta is not None:
            options["delta"] = args.delta
        if args.k_strategy is not None:
            options["k_strategy"] = args.k_strategy
        if args.worst_case_depth:
            options["worst_case_depth"] = True
        config = replace(config, options=options)
    return config


def _run_campaign_command(args: argparse.Namespace, kind: str) -> int:
    config = _load_config(args, kind)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "config.json").write_text(canonical_text(config))
    spec = campaigns.spec_from_config(config, outdir)
    manifest = campaigns.run_campaign(spec, workers=args.threads)
    for name in sorted(manifest.outputs):
        print(f"wrote {outdir / name}")
    if kind == "validate":
        report = json.loads((outdir / "report.json").read_text())
        verdict = "PASS" if report["passed"] else "FAIL"
        print(
            f"{verdict}: {report['failures']}/{report['trials']} failures "
            f"(rate {report['failure_rate']:.4f}, delta {report['delta']}, "
            f"M {report['M']}, method {report['method']})"
        )
        return 0 if report["passed"] else 1
    return 0


def _run_ft_compare(args: argparse.Namespace) -> int:
    instance = resources.ProblemInstance(
        N=args.N, D=args.D, epsilon=args.epsilon, delta=args.delta
    )
    if args.d_min > args.d_max:
        raise ConfigError("--d-min", "must not exceed --d-max")
    reports = resources.compare_sweep(
        instance, args.A, args.B, range(args.d_min, args.d_max + 1)
    )
    d_min_qpe = resources.qpe_min_distance(instance, args.A, args.B)
    print(f"QPE minimum distance: {d_min_qpe}")
    header = ("algorithm", "d", "physical_qubits", "cu_calls", "qec_cycles", "feasible")
    print(f"{header[0]:>9} {header[1]:>3} {header[2]:>15} {header[3]:>13} {header[4]:>13} {header[5]:>8}")
    for r in reports:
        print(
            f"{r.algorithm:>9} {r.d:>3} {r.physical_qubits:>15} "
            f"{r.cu_calls:>13.4g} {r.qec_cycles:>13.4g} {str(r.feasible).lower():>8}"
        )
    if args.out is not None:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        path = write_csv(
            outdir / "comparison.csv",
            header,
            [
                (r.algorithm, r.d, r.physical_qubits, r.cu_calls, r.qec_cycles, r.feasible)
                for r in reports
            ],
        )
        print(f"wrote {path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rfe-lab",
        description="Randomized Fourier phase estimation: campaigns, bounds, and cost models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON run config (defaults are built in)")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--threads", type=int, default=1, help="worker processes for trials")

    for kind in ("fig2", "fig3", "fig4", "fig5", "fig6", "validate"):
        p = sub.add_parser(kind, help=f"run the {kind} campaign")
        add_common(p)
        if kind == "fig4":
            p.add_argument("--lambda-list", help="comma-separated decay rates")
            p.add_argument(
                "--epsilon-decades",
                help="accuracy range as log10 bounds, e.g. -4,-1",
            )
            p.add_argument("--delta", type=float, help="failure budget for the bound")
            p.add_argument(
                "--k-strategy", choices=("maintext", "harmonic"), help="depth-cap rule"
            )
            p.add_argument(
                "--worst-case-depth",
                action="store_true",
                help="count K-1 calls per shot instead of the expected (K-1)/2",
            )
        if kind == "validate":
            p.add_argument("--trials", type=int, help="override the config trial count")

    ft = sub.add_parser("ft-compare", help="QPE vs RFE fault-tolerant cost table")
    ft.add_argument("--N", type=int, default=100, help="logical system qubits")
    ft.add_argument("--D", type=int, default=1000, help="circuit depth per c-U call")
    ft.add_argument("--epsilon", type=float, default=1e-3, help="target accuracy")
    ft.add_argument("--delta", type=float, default=1e-2, help="failure budget")
    ft.add_argument("--A", type=float, default=0.5, help="logical error rate prefactor")
    ft.add_argument("--B", type=float, default=1.6, help="logical error rate decay per distance")
    ft.add_argument("--d-min", type=int, default=3, help="smallest code distance")
    ft.add_argument("--d-max", type=int, default=30, help="largest code distance")
    ft.add_argument("--out", default=None, help="also write comparison.csv here")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "ft-compare":
            return _run_ft_compare(args)
        if args.threads < 1:
            raise ConfigError("--threads", f"must be >= 1, got {args.threads}")
        if args.out is None:
            args.out = f"out/{args.command}"
        return _run_campaign_command(args, args.command)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except bounds.VacuousBoundError as exc:
        print(f"vacuous bound: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
