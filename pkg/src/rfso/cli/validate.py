"""Oracle cross-checks run by ``rfso validate``.

Each check compares a closed form against an independent route (quadrature,
order statistics or simulation) on a small grid and reports pass/fail.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .. import analytics, channels, montecarlo
from ..channels import FsoHopParams, RfHopParams
from ..system import ImpairmentParams, LinkConfig


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def _grid(mu_db: float = 15.0):
    mu = 10 ** (mu_db / 10)
    for rho, sr, (k1, k2) in itertools.product(
            (0.0, 1.0), (0.3, 1.5), ((0.0, 0.0), (0.2, 0.3))):
        yield LinkConfig(RfHopParams(3, 2, rho, mu), FsoHopParams.from_sigma_r(sr, mu),
                         ImpairmentParams(k1, k2), 10 ** 0.3)


def run_checks(samples: int = 200_000, seed: int = 1) -> list[Check]:
    checks = []

    worst = 0.0
    for cfg in _grid():
        cf = analytics.outage_closed_form(cfg).probability
        qd = analytics.outage_quadrature(cfg).probability
        worst = max(worst, abs(cf - qd) / qd)
    checks.append(Check("outage closed form vs quadrature", worst <= 1e-6,
                        f"max relative difference {worst:.2e} (limit 1e-6)"))

    worst_z = 0.0
    for cfg in _grid():
        cf = analytics.outage_closed_form(cfg).probability
        est = montecarlo.estimate_outage(cfg, samples, seed)
        worst_z = max(worst_z, abs(est.value - cf) / est.std_error)
    checks.append(Check("outage closed form vs Monte-Carlo", worst_z <= 3.0,
                        f"max |z| {worst_z:.2f} (limit 3, n={samples})"))

    worst = 0.0
    for cfg in itertools.islice(_grid(), 0, 8, 3):
        j = analytics.theta_mean(cfg)
        jq = analytics.theta_mean_quadrature(cfg)
        worst = max(worst, abs(j - jq) / jq)
    checks.append(Check("capacity-bound Meijer-G vs 2-D quadrature", worst <= 1e-5,
                        f"max relative difference {worst:.2e} (limit 1e-5)"))

    worst_z = -math.inf
    for cfg in _grid():
        est = montecarlo.estimate_capacity(cfg, samples, seed)
        worst_z = max(worst_z, (est.value - analytics.capacity_upper_bound(cfg)) / est.std_error)
    checks.append(Check("capacity bound dominates Monte-Carlo", worst_z <= 3.0,
                        f"max (mc - bound)/se {worst_z:.2f} (limit 3)"))

    worst = 0.0
    x = np.array([0.1, 1.0, 5.0, 20.0])
    for n in range(1, 7):
        for m in range(1, n + 1):
            p = RfHopParams(n, m, 0.0, 1.0)
            worst = max(worst, float(np.max(np.abs(channels.rf_cdf(x, p) + np.expm1(-x)))))
    checks.append(Check("rho=0 collapse to exponential", worst <= 1e-10,
                        f"max abs difference {worst:.2e} (limit 1e-10)"))

    p = RfHopParams(3, 3, 1.0, 1.0)
    err = abs(channels.rf_mean(p) - 11.0 / 6.0) / (11.0 / 6.0)
    checks.append(Check("best-of-3 mean equals H_3", err <= 1e-12, f"relative error {err:.2e}"))

    worst = 0.0
    for sr in (0.3, 0.8, 1.5):
        fp = FsoHopParams.from_sigma_r(sr, 10.0)
        total, _ = integrate.quad(lambda t: channels.fso_pdf(t / (1 - t), fp) / (1 - t) ** 2,
                                  0.0, 1.0, limit=500, epsabs=1e-12, epsrel=1e-11)
        worst = max(worst, abs(total - 1.0))
    checks.append(Check("Gamma-Gamma density normalisation", worst <= 1e-7,
                        f"max |integral - 1| {worst:.2e} (limit 1e-7)"))
    return checks
