"""Sweep configuration: parsing, validation and round-trip emission.

Configuration files are YAML (JSON is accepted too, being a YAML subset)::

    link:
      rf: {n_relays: 3, rank: 2, rho: 0.5, mu1_db: 15}
      fso: {sigma_r: 0.8, mu2_db: 15}
      impairments: {kappa1: 0.1, kappa2: 0.1}
      gamma_th_db: 3
    sweep:
      axis: mu1_db
      points: [0, 10, 20, 30]
      outputs: [outage_cf, outage_quad, outage_mc]
      mc_samples: 100000
      seed: 1
      families:
        - {label: fixed, set: {mu2_db: 25}}
        - {label: co_scaled, set: {mu2_tracks_mu1: true}}

SNR-type quantities may be given in dB (``*_db``) or linear; this module is
the only place where dB values are converted.  ``rank: best`` selects the
relay of rank ``N``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import yaml

from ..channels import FsoHopParams, RfHopParams, turbulence_params
from ..montecarlo import MAX_RELAYS, MIN_SAMPLES
from ..system import ImpairmentParams, LinkConfig

AXES = ("mu1_db", "mu2_db", "sigma_r", "n_relays", "rank", "rho", "kappa_both", "gamma_th_db")
INTEGER_AXES = ("n_relays", "rank")
OUTPUTS = ("outage_cf", "outage_quad", "outage_mc", "cap_approx", "cap_bound", "cap_mc", "ceilings")
FAMILY_KEYS = ("n_relays", "rank", "rho", "mu1_db", "mu2_db", "sigma_r", "kappa1", "kappa2",
               "gamma_th_db", "mu2_tracks_mu1")
DEFAULT_SAMPLES = 100_000
DEFAULT_SEED = 1


class ConfigError(ValueError):
    """Invalid configuration; the message starts with the offending key path."""


def db_to_linear(x: float) -> float:
    return 10.0 ** (x / 10.0)


@dataclass(frozen=True)
class Family:
    """One curve of a sweep: a label and parameter overrides applied to the base."""

    label: str
    overrides: tuple[tuple[str, Any], ...] = ()


@dataclass(frozen=True)
class SweepSpec:
    base: LinkConfig
    axis: str
    points: tuple[float, ...]
    outputs: tuple[str, ...]
    mc_samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    families: tuple[Family, ...] = (Family("base"),)
    best_rank: bool = False
    sigma_r: float | None = field(default=None, compare=False)

    def configs(self, family: Family) -> list[LinkConfig]:
        return [point_config(self, family, x) for x in self.points]


# -- reading helpers ------------------------------------------------------------

def _number(v: Any, where: str, kind=float):
    if kind is int:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v:
            raise ConfigError(f"{where}: expected an integer, got {v!r}")
        return int(v)
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{where}: expected a finite number, got {v!r}")
    return float(v)


def _get(d: dict, key: str, path: str, kind=float, required=True, default=None):
    if key not in d:
        if required:
            raise ConfigError(f"{path}.{key}: missing required key")
        return default
    return _number(d[key], f"{path}.{key}", kind)


def _section(d: Any, path: str) -> dict:
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: expected a mapping")
    return d


def _no_extra(d: dict, allowed: tuple[str, ...], path: str) -> None:
    extra = sorted(set(d) - set(allowed))
    if extra:
        raise ConfigError(f"{path}.{extra[0]}: unknown key")


def _one_of(d: dict, lin: str, db: str, path: str) -> float:
    if (lin in d) == (db in d):
        raise ConfigError(f"{path}.{lin}: give exactly one of '{lin}' and '{db}'")
    if db in d:
        return db_to_linear(_get(d, db, path))
    return _get(d, lin, path)


def _parse_rank(d: dict, path: str) -> tuple[int | None, bool]:
    if d.get("rank") == "best":
        return None, True
    return _get(d, "rank", path, int), False


def _parse_link(raw: Any) -> tuple[LinkConfig, bool, float | None]:
    link = _section(raw, "link")
    _no_extra(link, ("rf", "fso", "impairments", "gamma_th", "gamma_th_db"), "link")
    rf = _section(link.get("rf"), "link.rf")
    _no_extra(rf, ("n_relays", "rank", "rho", "mu1", "mu1_db"), "link.rf")
    n = _get(rf, "n_relays", "link.rf", int)
    if not 1 <= n <= MAX_RELAYS:
        raise ConfigError(f"link.rf.n_relays: must lie in [1, {MAX_RELAYS}], got {n}")
    rank, best = _parse_rank(rf, "link.rf")
    if best:
        rank = n
    if not 1 <= rank <= n:
        raise ConfigError(f"link.rf.rank: must lie in [1, n_relays={n}], got {rank}")
    rho = _get(rf, "rho", "link.rf")
    if not 0.0 <= rho <= 1.0:
        raise ConfigError(f"link.rf.rho: must lie in [0, 1], got {rho}")
    mu1 = _one_of(rf, "mu1", "mu1_db", "link.rf")

    fso = _section(link.get("fso"), "link.fso")
    _no_extra(fso, ("sigma_r", "alpha", "beta", "mu2", "mu2_db"), "link.fso")
    has_ab = "alpha" in fso or "beta" in fso
    sigma_r = None
    if "sigma_r" in fso and has_ab:
        raise ConfigError("link.fso.sigma_r: 'sigma_r' and 'alpha'/'beta' are mutually exclusive")
    if "sigma_r" in fso:
        sigma_r = _get(fso, "sigma_r", "link.fso")
        if not sigma_r > 0:
            raise ConfigError(f"link.fso.sigma_r: must be positive, got {sigma_r}")
        alpha, beta = turbulence_params(sigma_r)
    elif has_ab:
        alpha = _get(fso, "alpha", "link.fso")
        beta = _get(fso, "beta", "link.fso")
    else:
        raise ConfigError("link.fso.sigma_r: give either 'sigma_r' or both 'alpha' and 'beta'")
    mu2 = _one_of(fso, "mu2", "mu2_db", "link.fso")

    imp = _section(link.get("impairments", {}), "link.impairments")
    _no_extra(imp, ("kappa1", "kappa2"), "link.impairments")
    k1 = _get(imp, "kappa1", "link.impairments", required=False, default=0.0)
    k2 = _get(imp, "kappa2", "link.impairments", required=False, default=0.0)
    gamma_th = _one_of(link, "gamma_th", "gamma_th_db", "link")
    try:
        cfg = LinkConfig(RfHopParams(n, rank, rho, mu1), FsoHopParams(alpha, beta, mu2),
                         ImpairmentParams(k1, k2), gamma_th)
    except ValueError as exc:
        raise ConfigError(f"link: {exc}") from exc
    return cfg, best, sigma_r


def _parse_family(raw: Any, i: int) -> Family:
    path = f"sweep.families[{i}]"
    fam = _section(raw, path)
    _no_extra(fam, ("label", "set"), path)
    label = fam.get("label")
    if not isinstance(label, str) or not label:
        raise ConfigError(f"{path}.label: expected a non-empty string")
    over = _section(fam.get("set", {}), f"{path}.set")
    _no_extra(over, FAMILY_KEYS, f"{path}.set")
    items = []
    for key in sorted(over):
        v = over[key]
        if key == "mu2_tracks_mu1":
            if not isinstance(v, bool):
                raise ConfigError(f"{path}.set.{key}: expected true or false")
        elif key == "rank" and v == "best":
            pass
        elif key in INTEGER_AXES:
            v = _get(over, key, f"{path}.set", int)
        else:
            v = _get(over, key, f"{path}.set")
        items.append((key, v))
    return Family(label, tuple(items))


def spec_from_dict(data: Any) -> SweepSpec:
    """Validate a parsed configuration mapping into a :class:`SweepSpec`."""
    data = _section(data, "<root>")
    _no_extra(data, ("link", "sweep"), "<root>")
    if "link" not in data:
        raise ConfigError("link: missing required section")
    base, best, sigma_r = _parse_link(data["link"])
    if "sweep" not in data:
        raise ConfigError("sweep: missing required section")
    sw = _section(data["sweep"], "sweep")
    _no_extra(sw, ("axis", "points", "outputs", "mc_samples", "seed", "families"), "sweep")
    axis = sw.get("axis")
    if axis not in AXES:
        raise ConfigError(f"sweep.axis: expected one of {', '.join(AXES)}, got {axis!r}")
    raw_points = sw.get("points")
    if not isinstance(raw_points, list) or not raw_points:
        raise ConfigError("sweep.points: expected a non-empty list")
    kind = int if axis in INTEGER_AXES else float
    points = tuple(_number(p, f"sweep.points[{i}]", kind) for i, p in enumerate(raw_points))
    diffs = [b - a for a, b in zip(points, points[1:])]
    if not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
        raise ConfigError("sweep.points: must be strictly monotone")
    outs = sw.get("outputs", ["outage_cf"])
    if not isinstance(outs, list) or not outs:
        raise ConfigError("sweep.outputs: expected a non-empty list")
    for o in outs:
        if o not in OUTPUTS:
            raise ConfigError(f"sweep.outputs: unknown output {o!r}")
    outputs = tuple(o for o in OUTPUTS if o in outs)
    samples = _get(sw, "mc_samples", "sweep", int, required=False, default=DEFAULT_SAMPLES)
    if samples < MIN_SAMPLES:
        raise ConfigError(f"sweep.mc_samples: must be at least {MIN_SAMPLES}, got {samples}")
    seed = _get(sw, "seed", "sweep", int, required=False, default=DEFAULT_SEED)
    if not 0 <= seed < 2 ** 64:
        raise ConfigError(f"sweep.seed: must be an unsigned 64-bit integer, got {seed}")
    fams_raw = sw.get("families")
    if fams_raw is None:
        families = (Family("base"),)
    else:
        if not isinstance(fams_raw, list) or not fams_raw:
            raise ConfigError("sweep.families: expected a non-empty list")
        families = tuple(_parse_family(f, i) for i, f in enumerate(fams_raw))
        labels = [f.label for f in families]
        if len(set(labels)) != len(labels):
            raise ConfigError("sweep.families: labels must be unique")
    spec = SweepSpec(base, axis, points, outputs, samples, seed, families, best, sigma_r)
    for fam in families:
        for i, x in enumerate(points):
            try:
                point_config(spec, fam, x)
            except (ValueError, ArithmeticError) as exc:
                raise ConfigError(
                    f"sweep.points[{i}]: invalid for family {fam.label!r}: {exc}") from exc
    return spec


def parse_config(path: str | Path) -> SweepSpec:
    """Read and validate a sweep configuration file."""
    return spec_from_dict(_load(path))


def parse_link_config(path: str | Path) -> tuple[LinkConfig, float | None]:
    """Read only the ``link`` section (the ``sweep`` section may be absent)."""
    data = _section(_load(path), "<root>")
    if "link" not in data:
        raise ConfigError("link: missing required section")
    cfg, _, sigma_r = _parse_link(data["link"])
    return cfg, sigma_r


def _load(path: str | Path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"<root>: malformed configuration: {exc}") from exc


def point_config(spec: SweepSpec, family: Family, x: float) -> LinkConfig:
    """Link configuration at axis value ``x`` for one family."""
    b = spec.base
    k = {
        "n_relays": b.rf.n_relays, "rank": "best" if spec.best_rank else b.rf.rank,
        "rho": b.rf.rho, "mu1": b.rf.mu1, "alpha": b.fso.alpha, "beta": b.fso.beta,
        "mu2": b.fso.mu2, "kappa1": b.imp.kappa1, "kappa2": b.imp.kappa2,
        "gamma_th": b.gamma_th,
    }
    track = False
    for key, v in family.overrides:
        if key == "mu2_tracks_mu1":
            track = v
        else:
            _assign(k, key, v)
    if spec.axis == "kappa_both":
        k["kappa1"] = k["kappa2"] = x
    else:
        _assign(k, spec.axis, x)
    if track:
        k["mu2"] = k["mu1"]
    rank = k["n_relays"] if k["rank"] == "best" else k["rank"]
    return LinkConfig(
        RfHopParams(k["n_relays"], rank, k["rho"], k["mu1"]),
        FsoHopParams(k["alpha"], k["beta"], k["mu2"]),
        ImpairmentParams(k["kappa1"], k["kappa2"]),
        k["gamma_th"],
    )


def _assign(k: dict, key: str, v) -> None:
    if key.endswith("_db"):
        k[key[:-3]] = db_to_linear(v)
    elif key == "sigma_r":
        k["alpha"], k["beta"] = turbulence_params(v)
    else:
        k[key] = v


def spec_to_dict(spec: SweepSpec) -> dict:
    """Configuration mapping that :func:`spec_from_dict` maps back to ``spec``.

    Base values are written in linear scale so no dB round trip is involved.
    """
    b = spec.base
    sweep: dict[str, Any] = {
        "axis": spec.axis,
        "points": list(spec.points),
        "outputs": list(spec.outputs),
        "mc_samples": spec.mc_samples,
        "seed": spec.seed,
    }
    if spec.families != (Family("base"),):
        sweep["families"] = [
            {"label": f.label, "set": dict(f.overrides)} for f in spec.families]
    return {
        "link": {
            "rf": {"n_relays": b.rf.n_relays, "rank": "best" if spec.best_rank else b.rf.rank,
                   "rho": b.rf.rho, "mu1": b.rf.mu1},
            "fso": {"alpha": b.fso.alpha, "beta": b.fso.beta, "mu2": b.fso.mu2},
            "impairments": {"kappa1": b.imp.kappa1, "kappa2": b.imp.kappa2},
            "gamma_th": b.gamma_th,
        },
        "sweep": sweep,
    }


def dump_config(spec: SweepSpec) -> str:
    return yaml.safe_dump(spec_to_dict(spec), sort_keys=False)


def with_overrides(spec: SweepSpec, samples: int | None = None,
                   seed: int | None = None) -> SweepSpec:
    """Apply ``--samples``/``--seed`` command-line overrides."""
    if samples is not None:
        if samples < MIN_SAMPLES:
            raise ConfigError(f"--samples: must be at least {MIN_SAMPLES}, got {samples}")
        spec = replace(spec, mc_samples=samples)
    if seed is not None:
        if not 0 <= seed < 2 ** 64:
            raise ConfigError(f"--seed: must be an unsigned 64-bit integer, got {seed}")
        spec = replace(spec, seed=seed)
    return spec
