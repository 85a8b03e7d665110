"""Evaluate requested quantities over a parameter sweep."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from .. import analytics, montecarlo, system
from ..specfun import NumericalError
from ..system import LinkConfig
from .config import Family, SweepSpec, point_config

log = logging.getLogger(__name__)

# output name -> columns it produces
COLUMNS = {
    "outage_cf": ("outage_cf",),
    "outage_quad": ("outage_quad",),
    "outage_mc": ("outage_mc", "outage_mc_se"),
    "cap_approx": ("cap_approx",),
    "cap_bound": ("cap_bound",),
    "cap_mc": ("cap_mc", "cap_mc_se"),
    "ceilings": ("delta", "sndr_ceiling", "capacity_ceiling"),
}
_MC_OUTPUTS = ("outage_mc", "cap_mc")


@dataclass
class OutputRow:
    """One evaluated sweep point.  Missing values are ``None``, never zero."""

    family: str | None
    axis_value: float | None
    values: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def value_columns(outputs: tuple[str, ...]) -> list[str]:
    cols = [c for o in outputs for c in COLUMNS[o]]
    return cols


def evaluate_point(cfg: LinkConfig, outputs: tuple[str, ...], samples: int,
                   seed: int) -> tuple[dict[str, Any], str | None]:
    """Compute every requested column at one configuration.

    Numerical failures are recorded, not raised: the failing columns stay
    ``None`` and the messages are joined into the returned error string.
    """
    values: dict[str, Any] = {c: None for c in value_columns(outputs)}
    errors = []

    def attempt(name, func):
        try:
            func()
        except (NumericalError, ArithmeticError, ValueError) as exc:
            errors.append(f"{name}: {exc}")

    def put(*pairs):
        for k, v in pairs:
            values[k] = v

    for out in outputs:
        if out == "outage_cf":
            attempt(out, lambda: put(("outage_cf", analytics.outage_closed_form(cfg).probability)))
        elif out == "outage_quad":
            attempt(out, lambda: put(("outage_quad", analytics.outage_quadrature(cfg).probability)))
        elif out == "outage_mc":
            def mc_outage():
                est = montecarlo.estimate_outage(cfg, samples, seed)
                put(("outage_mc", est.value), ("outage_mc_se", est.std_error))
            attempt(out, mc_outage)
        elif out == "cap_approx":
            attempt(out, lambda: put(("cap_approx", analytics.capacity_approx(cfg))))
        elif out == "cap_bound":
            attempt(out, lambda: put(("cap_bound", analytics.capacity_upper_bound(cfg))))
        elif out == "cap_mc":
            def mc_capacity():
                est = montecarlo.estimate_capacity(cfg, samples, seed)
                put(("cap_mc", est.value), ("cap_mc_se", est.std_error))
            attempt(out, mc_capacity)
        elif out == "ceilings":
            put(("delta", cfg.delta()),
                ("sndr_ceiling", system.sndr_ceiling(cfg.imp)),
                ("capacity_ceiling", system.capacity_ceiling(cfg.imp)))
    return values, "; ".join(errors) or None


def _evaluate(args: tuple[SweepSpec, Family, float]) -> OutputRow:
    spec, fam, x = args
    cfg = point_config(spec, fam, x)
    values, error = evaluate_point(cfg, spec.outputs, spec.mc_samples, spec.seed)
    uses_mc = any(o in _MC_OUTPUTS for o in spec.outputs)
    if error:
        log.warning("%s=%r (%s): %s", spec.axis, x, fam.label, error)
    return OutputRow(fam.label, x, values, spec.seed if uses_mc else None, error)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[OutputRow]:
    """Evaluate the sweep; rows come back family by family in axis order.

    With ``jobs > 1`` points are spread over worker processes.  Every point
    is a deterministic function of the spec, so the result is identical for
    any ``jobs``.
    """
    tasks = [(spec, fam, x) for fam in spec.families for x in spec.points]
    if jobs <= 1 or len(tasks) == 1:
        rows = []
        for t in tasks:
            rows.append(_evaluate(t))
            log.info("%s: %s=%r done", t[1].label, spec.axis, t[2])
        return rows
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate, tasks))
