"""Command-line interface.

Examples::

    rfso outage --config link.yaml
    rfso sweep --config sweep.yaml --format json --output out.json --jobs 4
    rfso figure fig1 --output fig1.csv
    rfso validate
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Sequence

from .. import __version__, montecarlo, system
from ..system import LinkConfig
from .config import (DEFAULT_SAMPLES, DEFAULT_SEED, ConfigError, SweepSpec, parse_config,
                     parse_link_config, with_overrides)
from .output import row_columns, to_csv, to_json
from .presets import FIGURES, figure_preset
from .sweep import OutputRow, evaluate_point, run_sweep, value_columns

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("rfso")

_SINGLE_OUTPUTS = {
    "outage": ("outage_cf", "outage_quad", "outage_mc"),
    "capacity": ("cap_approx", "cap_bound", "cap_mc"),
    "ceiling": ("ceilings",),
}


def _jsonable(v: Any) -> Any:
    return "unbounded" if v is system.UNBOUNDED else v


def link_echo(cfg: LinkConfig, sigma_r: float | None = None) -> dict[str, Any]:
    return {
        "n_relays": cfg.rf.n_relays,
        "rank": cfg.rf.rank,
        "rho": cfg.rf.rho,
        "mu1": cfg.rf.mu1,
        "sigma_r": sigma_r,
        "alpha": cfg.fso.alpha,
        "beta": cfg.fso.beta,
        "mu2": cfg.fso.mu2,
        "kappa1": cfg.imp.kappa1,
        "kappa2": cfg.imp.kappa2,
        "gamma_th": cfg.gamma_th,
        "delta": cfg.delta(),
        "sndr_ceiling": _jsonable(system.sndr_ceiling(cfg.imp)),
        "capacity_ceiling": _jsonable(system.capacity_ceiling(cfg.imp)),
    }


def sweep_echo(spec: SweepSpec) -> dict[str, Any]:
    return {
        "link": link_echo(spec.base, spec.sigma_r),
        "rank_best": spec.best_rank,
        "axis": spec.axis,
        "points": list(spec.points),
        "outputs": list(spec.outputs),
        "mc_samples": spec.mc_samples,
        "seed": spec.seed,
        "generator_version": montecarlo.GENERATOR_VERSION,
        "families": [{"label": f.label, "set": dict(f.overrides)} for f in spec.families],
    }


def _render(rows: Sequence[OutputRow], axis: str | None, outputs: tuple[str, ...],
            fmt: str, echo: dict[str, Any]) -> str:
    cols = row_columns(rows, axis, value_columns(outputs))
    if fmt == "json":
        return to_json(rows, cols, axis, echo)
    return to_csv(rows, cols, axis)


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    with open(output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help="write results here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--samples", type=int, help="Monte-Carlo sample count")
    common.add_argument("--seed", type=int, help="Monte-Carlo seed (unsigned 64-bit)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--quiet", action="store_true", help="only report errors")

    parser = argparse.ArgumentParser(
        prog="rfso",
        description="Outage and capacity of dual-hop RF/FSO relaying with hardware "
                    "impairments and partial relay selection.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("outage", "outage probability: closed form, quadrature, Monte-Carlo"),
                        ("capacity", "ergodic capacity: approximation, upper bound, Monte-Carlo"),
                        ("ceiling", "impairment-limited SNDR and capacity ceilings"),
                        ("sweep", "evaluate a parameter sweep")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--config", required=True, help="YAML configuration file")
    p = sub.add_parser("figure", parents=[common], help="run a figure-reproduction preset")
    p.add_argument("name", choices=FIGURES)
    p.add_argument("--print-config", action="store_true",
                   help="print the preset configuration instead of running it")
    sub.add_parser("validate", parents=[common], help="run the oracle cross-check suite")
    return parser


def _run_single(args) -> int:
    cfg, sigma_r = parse_link_config(args.config)
    samples = args.samples if args.samples is not None else DEFAULT_SAMPLES
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    if samples < montecarlo.MIN_SAMPLES:
        raise ConfigError(f"--samples: must be at least {montecarlo.MIN_SAMPLES}, got {samples}")
    if not 0 <= seed < 2 ** 64:
        raise ConfigError(f"--seed: must be an unsigned 64-bit integer, got {seed}")
    outputs = _SINGLE_OUTPUTS[args.command]
    values, error = evaluate_point(cfg, outputs, samples, seed)
    uses_mc = args.command != "ceiling"
    row = OutputRow(None, None, values, seed if uses_mc else None, error)
    echo = {"link": link_echo(cfg, sigma_r), "mc_samples": samples, "seed": seed,
            "generator_version": montecarlo.GENERATOR_VERSION}
    _emit(_render([row], None, outputs, args.format, echo), args.output)
    all_failed = error is not None and all(v is None for v in values.values())
    return EXIT_NUMERIC if all_failed else EXIT_OK


def _run_sweep(spec: SweepSpec, args) -> int:
    spec = with_overrides(spec, args.samples, args.seed)
    rows = run_sweep(spec, jobs=max(1, args.jobs))
    _emit(_render(rows, spec.axis, spec.outputs, args.format, sweep_echo(spec)), args.output)
    return EXIT_NUMERIC if rows and all(r.failed for r in rows) else EXIT_OK


def _run_validate(args) -> int:
    from .validate import run_checks

    samples = args.samples if args.samples is not None else 200_000
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    checks = run_checks(samples, seed)
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}\n" for c in checks]
    _emit("".join(lines), args.output)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_NUMERIC


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; those are validation errors here
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command in _SINGLE_OUTPUTS:
            return _run_single(args)
        if args.command == "sweep":
            return _run_sweep(parse_config(args.config), args)
        if args.command == "figure":
            if args.print_config:
                from .presets import preset_text
                _emit(preset_text(args.name), args.output)
                return EXIT_OK
            return _run_sweep(figure_preset(args.name), args)
        return _run_validate(args)
    except ConfigError as exc:
        log.error("invalid configuration: %s", exc)
        return EXIT_CONFIG
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
