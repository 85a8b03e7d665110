"""Acceptance suite: one test and one PASS/FAIL line per criterion.

Run through pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.  All Monte-Carlo runs use SEED.
"""
from __future__ import annotations

import functools
import math
import os
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest
from scipy import integrate

sys.path.insert(0, str(Path(__file__).parent))

from conftest import GAMMA_TH_3DB, MU_15DB, grid_configs  # noqa: E402
from rfso import analytics, montecarlo  # noqa: E402
from rfso.channels import FsoHopParams, RfHopParams, fso_mean, fso_pdf, rf_cdf, rf_mean, rf_pdf  # noqa: E402
from rfso.cli.presets import figure_preset  # noqa: E402
from rfso.system import ImpairmentParams, LinkConfig, capacity_ceiling  # noqa: E402

SEED = 12345
MC_N = 1_000_000

# pinned tolerances
TOL_CF_VS_QUAD = 1e-6          # relative
Z_MC = 3.0                     # standard errors
RUNTIME_C1 = 120.0             # seconds
TOL_CEILING = 0.01             # relative
FLOOR_REL = 0.05
COSCALED_DROP = 10.0
TOL_HARMONIC = 1e-12
KS_CRIT_1PCT = 1.6276 / math.sqrt(MC_N)
TOL_COLLAPSE = 1e-10
TOL_CDF_ZERO = 1e-12
TOL_NORMALISATION = 1e-7
TOL_J = 1e-5

REPORT: list[str] = []


def record(name: str, passed: bool, detail: str) -> None:
    line = f"{'PASS' if passed else 'FAIL'}  {name}: {detail}"
    REPORT.append(line)
    print(line)


def check(name: str, passed: bool, detail: str) -> None:
    record(name, passed, detail)
    assert passed, detail


def db(x):
    return 10 ** (x / 10)


@functools.lru_cache(maxsize=None)
def grid_results():
    """Closed form, quadrature and 10^6-sample Monte-Carlo at all 27 grid points."""
    start = time.perf_counter()
    out = []
    for key, cfg in grid_configs():
        cf = analytics.outage_closed_form(cfg).probability
        qd = analytics.outage_quadrature(cfg).probability
        mc = montecarlo.estimate_outage(cfg, MC_N, SEED)
        out.append((key, cfg, cf, qd, mc))
    return out, time.perf_counter() - start


def test_c1_triple_oracle_outage():
    rows, elapsed = grid_results()
    rel = max(abs(cf - qd) / qd for _, _, cf, qd, _ in rows)
    z_cf = max(abs(cf - mc.value) / mc.std_error for _, _, cf, _, mc in rows)
    z_qd = max(abs(qd - mc.value) / mc.std_error for _, _, _, qd, mc in rows)
    ok = rel <= TOL_CF_VS_QUAD and z_cf <= Z_MC and z_qd <= Z_MC and elapsed < RUNTIME_C1
    check("C1 triple-oracle outage", ok,
          f"27 points, max |cf-quad|/quad = {rel:.2e} (<= {TOL_CF_VS_QUAD:g}), "
          f"max |z| cf = {z_cf:.2f}, quad = {z_qd:.2f} (<= {Z_MC:g}), {elapsed:.1f} s "
          f"(< {RUNTIME_C1:g} s)")


def test_c2_piecewise_guard():
    # the literal grid never reaches 1/delta (gamma_th = 3 dB, 1/delta >= 7.5), so the
    # guard is exercised at gamma_th in {1/delta, 2/delta} for each impaired grid point
    on_grid = sum(1 for _, cfg in grid_configs() if not cfg.below_ceiling)
    checked, bad = 0, []
    for key, cfg in grid_configs():
        if cfg.delta() == 0.0:
            continue
        for factor in (1.0, 2.0):
            c = LinkConfig(cfg.rf, cfg.fso, cfg.imp, factor / cfg.delta())
            vals = (analytics.outage_closed_form(c).probability,
                    analytics.outage_quadrature(c).probability,
                    montecarlo.estimate_outage(c, MC_N, SEED).value)
            checked += 1
            if vals != (1.0, 1.0, 1.0):
                bad.append((key, factor, vals))
    check("C2 piecewise guard", not bad and checked > 0,
          f"{checked} configurations with gamma_th >= 1/delta ({on_grid} on the literal grid), "
          f"{len(bad)} not exactly 1 for closed form, quadrature and Monte-Carlo")


def test_c3_ceiling_convergence():
    imp = ImpairmentParams(0.1, 0.1)
    mu = db(60.0)
    cfg = LinkConfig(RfHopParams(3, 2, 0.5, mu), FsoHopParams.from_sigma_r(0.8, mu), imp,
                     GAMMA_TH_3DB)
    est = montecarlo.estimate_capacity(cfg, MC_N, SEED)
    target = 0.5 * math.log2(1 + 1 / 0.0201)
    rel = abs(est.value - target) / target
    peak = float(montecarlo.sample_sndr(cfg, MC_N, SEED).max())
    ok = (rel <= TOL_CEILING and peak < 1 / 0.0201
          and capacity_ceiling(imp) == pytest.approx(target, rel=1e-12))
    check("C3 ceiling convergence", ok,
          f"MC capacity {est.value:.5f} vs ceiling {target:.5f}, rel. gap {rel:.2e} "
          f"(<= {TOL_CEILING:g}); max SNDR {peak:.4f} < 1/delta = {1 / 0.0201:.4f}")


def test_c4_outage_floor():
    spec = figure_preset("fig1")
    fams = {f.label: f for f in spec.families}
    from rfso.cli.config import point_config

    details, ok = [], True
    for k in ("ideal", "k=0.1", "k=0.2"):
        fixed = [analytics.outage_closed_form(point_config(spec, fams[f"{k} mu2=25dB"], x))
                 .probability for x in (40.0, 50.0)]
        tracked = [analytics.outage_closed_form(point_config(spec, fams[f"{k} mu2=mu1"], x))
                   .probability for x in (40.0, 50.0)]
        floor_rel = abs(fixed[0] - fixed[1]) / fixed[1]
        drop = tracked[0] / tracked[1]
        ok &= floor_rel < FLOOR_REL and drop > COSCALED_DROP
        details.append(f"{k}: fixed 40->50 dB rel. change {floor_rel:.2e}, co-scaled drop {drop:.1f}x")
    check("C4 outage floor", ok,
          f"(< {FLOOR_REL:g}, > {COSCALED_DROP:g}x) " + "; ".join(details))


def test_c5_order_statistics():
    mean_rel = abs(rf_mean(RfHopParams(3, 3, 1.0, 2.5)) - 11 / 6 * 2.5) / (11 / 6 * 2.5)
    p = RfHopParams(3, 3, 1.0, 2.5)
    draws = np.sort(montecarlo.sample_selected_gamma1(montecarlo.RngStream(SEED), p, MC_N))
    f = (-np.expm1(-draws / p.mu1)) ** 3
    n = len(draws)
    ks = max(np.max(np.arange(1, n + 1) / n - f), np.max(f - np.arange(n) / n))
    check("C5 order-statistics closed forms", mean_rel <= TOL_HARMONIC and ks < KS_CRIT_1PCT,
          f"rf_mean rel. error {mean_rel:.2e} (<= {TOL_HARMONIC:g}); "
          f"KS {ks:.2e} < {KS_CRIT_1PCT:.2e} at n = {MC_N}")


def test_c6_collapse_identities():
    x = np.concatenate(([0.0], np.geomspace(1e-4, 60, 300)))
    worst, worst_zero = 0.0, 0.0
    for n in range(1, 7):
        for m in range(1, n + 1):
            p0 = RfHopParams(n, m, 0.0, 1.0)
            worst = max(worst, float(np.max(np.abs(rf_cdf(x, p0) + np.expm1(-x)))),
                        float(np.max(np.abs(rf_pdf(x, p0) - np.exp(-x)))))
            for rho in (0.0, 0.25, 0.5, 0.75, 1.0):
                worst_zero = max(worst_zero, abs(rf_cdf(0.0, RfHopParams(n, m, rho, 1.0))))
    check("C6 collapse identities", worst <= TOL_COLLAPSE and worst_zero <= TOL_CDF_ZERO,
          f"rho=0 max deviation {worst:.2e} (<= {TOL_COLLAPSE:g}); "
          f"max |rf_cdf(0)| {worst_zero:.2e} (<= {TOL_CDF_ZERO:g}), N <= 6")


def test_c7_gamma_gamma_consistency():
    parts, ok = [], True
    for sr in (0.3, 0.8, 1.5):
        p = FsoHopParams.from_sigma_r(sr, 10.0)
        total, _ = integrate.quad(lambda t: fso_pdf(t / (1 - t), p) / (1 - t) ** 2, 0, 1,
                                  limit=500, epsabs=1e-12, epsrel=1e-11)
        draws = montecarlo.sample_gamma2(montecarlo.RngStream(SEED), p, MC_N)
        z = (draws.mean() - fso_mean(p)) / (draws.std(ddof=1) / math.sqrt(MC_N))
        ok &= abs(total - 1) <= TOL_NORMALISATION and abs(z) <= Z_MC
        parts.append(f"sigma_R={sr}: |int-1| {abs(total - 1):.1e}, z {z:+.2f}")
    check("C7 Gamma-Gamma consistency", ok,
          f"(<= {TOL_NORMALISATION:g}, |z| <= {Z_MC:g}) " + "; ".join(parts))


def test_c8_capacity_bound_direction():
    worst_z, worst_rel = -math.inf, 0.0
    for _, cfg in grid_configs():
        est = montecarlo.estimate_capacity(cfg, MC_N, SEED)
        bound = analytics.capacity_upper_bound(cfg)
        worst_z = max(worst_z, (est.value - bound) / est.std_error)
        j, jq = analytics.theta_mean(cfg), analytics.theta_mean_quadrature(cfg)
        worst_rel = max(worst_rel, abs(j - jq) / jq)
    check("C8 capacity bound direction", worst_z <= Z_MC and worst_rel <= TOL_J,
          f"27 points, max (MC - bound)/se = {worst_z:.1f} (<= {Z_MC:g}); "
          f"max |J - J_quad|/J_quad = {worst_rel:.2e} (<= {TOL_J:g})")


def _monotone(vals, increasing):
    pairs = list(zip(vals, vals[1:]))
    return all(b >= a for a, b in pairs) if increasing else all(b <= a for a, b in pairs)


def test_c9_monotonicity():
    def cfg(n=3, m=2, rho=0.5, mu1_db=15.0, mu2_db=15.0, sr=0.8, k1=0.1, k2=0.1, gth_db=3.0):
        return LinkConfig(RfHopParams(n, m, rho, db(mu1_db)), FsoHopParams.from_sigma_r(sr, db(mu2_db)),
                          ImpairmentParams(k1, k2), db(gth_db))

    def out(**kw):
        return analytics.outage_closed_form(cfg(**kw)).probability

    snr = np.arange(0.0, 41.0, 5.0)
    kap = np.linspace(0.0, 0.3, 7)
    checks = {}
    for m in (1, 2, 3):
        for sr in (0.3, 1.5):
            checks[f"mu1 m={m} sr={sr}"] = _monotone([out(m=m, sr=sr, mu1_db=x) for x in snr], False)
            checks[f"mu2 m={m} sr={sr}"] = _monotone([out(m=m, sr=sr, mu2_db=x) for x in snr], False)
            checks[f"gth m={m} sr={sr}"] = _monotone(
                [out(m=m, sr=sr, gth_db=x) for x in np.arange(-10.0, 16.0, 2.5)], True)
            checks[f"k1 m={m} sr={sr}"] = _monotone([out(m=m, sr=sr, k1=k) for k in kap], True)
            checks[f"k2 m={m} sr={sr}"] = _monotone([out(m=m, sr=sr, k2=k) for k in kap], True)
    for n in (2, 3, 5):
        checks[f"rho m=N={n}"] = _monotone(
            [out(n=n, m=n, rho=r) for r in np.linspace(0.0, 1.0, 11)], False)

    cap_points = 0
    for x in np.arange(0.0, 61.0, 5.0):
        hi, lo = cfg(m=3, rho=1.0, mu1_db=x, mu2_db=x), cfg(m=3, rho=0.0, mu1_db=x, mu2_db=x)
        mc_hi = montecarlo.estimate_capacity(hi, 200_000, SEED)
        mc_lo = montecarlo.estimate_capacity(lo, 200_000, SEED)
        checks[f"capacity rho=1 > rho=0 at {x:g} dB"] = (
            analytics.capacity_approx(hi) > analytics.capacity_approx(lo)
            and analytics.capacity_upper_bound(hi) > analytics.capacity_upper_bound(lo)
            and mc_hi.value > mc_lo.value)
        cap_points += 1
    failed = [k for k, v in checks.items() if not v]
    check("C9 monotonicity suite", not failed,
          f"{len(checks) - cap_points} outage sweeps and {cap_points} capacity SNR points "
          f"(approximation, bound, Monte-Carlo); failures: {failed or 'none'}")


CONFIG_C10 = """\
link:
  rf: {n_relays: 4, rank: 3, rho: 0.8, mu1_db: 15}
  fso: {sigma_r: 1.0, mu2_db: 15}
  impairments: {kappa1: 0.1, kappa2: 0.15}
  gamma_th_db: 3
sweep:
  axis: mu1_db
  points: [0, 10, 20, 30]
  outputs: [outage_cf, outage_mc, cap_bound, cap_mc, ceilings]
  mc_samples: 150000
  seed: 12345
  families:
    - {label: fixed, set: {mu2_db: 20}}
    - {label: co-scaled, set: {mu2_tracks_mu1: true}}
"""


def test_c10_reproducibility():
    with tempfile.TemporaryDirectory() as tmp:
        cfg = Path(tmp, "sweep.yaml")
        cfg.write_text(CONFIG_C10, encoding="utf-8")
        digests = []
        for jobs, fmt in ((1, "csv"), (4, "csv"), (1, "json"), (3, "json")):
            out = Path(tmp, f"out_{jobs}.{fmt}")
            res = subprocess.run([sys.executable, "-m", "rfso", "sweep", "--config", str(cfg),
                                  "--jobs", str(jobs), "--format", fmt, "--output", str(out),
                                  "--quiet"], capture_output=True, text=True,
                                 env={**os.environ, "PYTHONHASHSEED": str(jobs)})
            assert res.returncode == 0, res.stderr
            digests.append(out.read_bytes())
    same_csv = digests[0] == digests[1]
    same_json = digests[2] == digests[3]
    check("C10 reproducibility", same_csv and same_json,
          f"sweep --jobs 1 vs 4 (csv) identical: {same_csv}; --jobs 1 vs 3 (json) identical: "
          f"{same_json}; {len(digests[0])} bytes")


if __name__ == "__main__":
    failures = 0
    tests = [(int(name.split("_")[1][1:]), fn) for name, fn in globals().items()
             if name.startswith("test_c") and callable(fn)]
    for _, fn in sorted(tests, key=lambda t: t[0]):
        try:
            fn()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
