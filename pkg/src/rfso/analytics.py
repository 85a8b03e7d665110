"""Outage probability and ergodic capacity of the relay link.

Each closed form has a numerical-integration counterpart that shares none of
the special-function machinery beyond the hop densities, so the two can be
checked against each other.

The outage closed form uses ``G^{5,0}_{0,5}(zeta | -; alpha/2, (alpha+1)/2,
beta/2, (beta+1)/2, 0)``, i.e. the Laplace-type average
``E[exp(-t / gamma2)]`` of the Gamma-Gamma hop.  The capacity bound uses
``G^{5,1}_{1,5}`` with upper parameter ``-(alpha+beta)/4``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Literal

from scipy import integrate

from .channels import fso_logpdf, fso_mean, rf_cdf, rf_mean, rf_pdf
from .specfun import MeijerGSpec, NumericalError, ln_gamma, meijer_g
from .system import LinkConfig

__all__ = [
    "OutageResult",
    "outage_closed_form",
    "outage_quadrature",
    "outage_floor",
    "capacity_approx",
    "capacity_upper_bound",
    "theta_mean",
    "theta_mean_quadrature",
    "laplace_meijer_spec",
    "bound_meijer_spec",
]

log = logging.getLogger(__name__)

_CLAMP_SILENT = 1e-9
_CLAMP_FATAL = 1e-6
# The closed form sums alternating first-hop weights against Meijer-G values
# good to roughly 1e-13; past this weight mass the sum cannot reach 1e-6.
_MAX_CONDITION = 1e6
# Below this weight mass double-precision mixture sums are used inline.
_FAST_CONDITION = 1e3


@dataclass(frozen=True)
class OutageResult:
    probability: float
    method: Literal["closed_form", "quadrature"]
    condition_met: bool


def laplace_meijer_spec(alpha: float, beta: float) -> MeijerGSpec:
    return MeijerGSpec(b_top=(alpha / 2, (alpha + 1) / 2, beta / 2, (beta + 1) / 2, 0.0))


def bound_meijer_spec(alpha: float, beta: float) -> MeijerGSpec:
    h = -(alpha + beta) / 4
    return MeijerGSpec(
        a_top=(h,),
        b_top=((alpha - beta) / 4, (alpha - beta + 2) / 4,
               (beta - alpha) / 4, (beta - alpha + 2) / 4, h),
    )


def _threshold_terms(cfg: LinkConfig) -> tuple[float, float]:
    """Constant and ``1/gamma2`` coefficients of the first-hop threshold."""
    denom = 1.0 - cfg.delta() * cfg.gamma_th
    a = (1.0 + cfg.imp.kappa2 ** 2) * cfg.gamma_th / denom
    b = cfg.constant_c() * cfg.gamma_th / denom
    return a, b


def _clamp(p: float, cfg: LinkConfig) -> float:
    over = max(-p, p - 1.0)
    if over > _CLAMP_FATAL:
        raise NumericalError(f"outage {p!r} lies outside [0, 1] for {cfg}")
    if over > _CLAMP_SILENT:
        log.warning("clamping outage %r into [0, 1] (overshoot %.3g)", p, over)
    return min(max(p, 0.0), 1.0)


def outage_closed_form(cfg: LinkConfig) -> OutageResult:
    """Outage probability from the Meijer-G closed form.

    Returns probability 1 whenever ``gamma_th >= 1/delta``.
    """
    if not cfg.below_ceiling:
        return OutageResult(1.0, "closed_form", False)
    if cfg.rf.condition > _MAX_CONDITION:
        raise NumericalError(
            f"closed form ill-conditioned for N={cfg.rf.n_relays}, m={cfg.rf.rank} "
            f"(weight mass {cfg.rf.condition:.3g}); use outage_quadrature")
    alpha, beta, mu2 = cfg.fso.alpha, cfg.fso.beta, cfg.fso.mu2
    a, b = _threshold_terms(cfg)
    spec = laplace_meijer_spec(alpha, beta)
    log_pref = ((alpha + beta - 2.0) * math.log(2.0) - math.log(math.pi)
                - ln_gamma(alpha) - ln_gamma(beta))
    parts = []
    for w, d, s in cfg.rf.terms:
        rate = d / (s * cfg.rf.mu1)
        zeta = (alpha * beta) ** 2 * b * rate / (16.0 * mu2)
        try:
            g = meijer_g(spec, zeta)
        except NumericalError as exc:
            raise NumericalError(
                f"Meijer-G failed at zeta={zeta!r} with lower row {spec.b_top}: {exc}"
            ) from exc
        laplace = math.exp(log_pref) * g
        parts.append(-w * math.expm1(-a * rate))
        parts.append(w * math.exp(-a * rate) * (1.0 - laplace))
    return OutageResult(_clamp(math.fsum(parts), cfg), "closed_form", True)


def _rf_cdf_scalar(x: float, cfg: LinkConfig, mu1: float) -> float:
    if cfg.rf.condition > _FAST_CONDITION:
        return rf_cdf(x, replace(cfg.rf, mu1=mu1))
    return math.fsum(-w * math.expm1(-d * x / (s * mu1)) for w, d, s in cfg.rf.terms)


def _integrate_over_gamma2(func, cfg: LinkConfig) -> float:
    """``int_0^inf func(g) f_{gamma2}(g) dg`` via ``g = s t / (1 - t)``."""
    scale = fso_mean(cfg.fso)

    def integrand(t: float) -> float:
        if t <= 0.0 or t >= 1.0:
            return 0.0
        g = scale * t / (1.0 - t)
        jac = scale / (1.0 - t) ** 2
        return func(g) * math.exp(fso_logpdf(g, cfg.fso)) * jac

    val, err, info = integrate.quad(
        integrand, 0.0, 1.0, points=(0.5,), limit=2000,
        epsabs=1e-13, epsrel=1e-11, full_output=True)[:3]
    if err > 1e-9 * max(1.0, abs(val)):
        raise NumericalError(f"quadrature error estimate {err:.3g} exceeds target (value {val!r})")
    return val


def outage_quadrature(cfg: LinkConfig) -> OutageResult:
    """Outage probability by direct integration over the second-hop SNR."""
    if not cfg.below_ceiling:
        return OutageResult(1.0, "quadrature", False)
    a, b = _threshold_terms(cfg)
    mu1 = cfg.rf.mu1
    p = _integrate_over_gamma2(lambda g: _rf_cdf_scalar(a + b / g, cfg, mu1), cfg)
    return OutageResult(_clamp(p, cfg), "quadrature", True)


def outage_floor(cfg: LinkConfig) -> float:
    """Limit of the outage probability as ``mu1 -> inf`` with ``mu2`` fixed.

    The first-hop threshold scales with ``C ~ mu1``, so outage tends to a
    positive constant set by the second hop alone.
    """
    if not cfg.below_ceiling:
        return 1.0
    denom = 1.0 - cfg.delta() * cfg.gamma_th
    mean_unit = rf_mean(cfg.rf) / cfg.rf.mu1
    coef = mean_unit * (1.0 + cfg.imp.kappa1 ** 2) * cfg.gamma_th / denom
    return _integrate_over_gamma2(lambda g: _rf_cdf_scalar(coef / g, cfg, 1.0), cfg)


def capacity_approx(cfg: LinkConfig) -> float:
    """Ergodic capacity approximation ``0.5 log2(1 + E[num]/E[den])``."""
    e1 = rf_mean(cfg.rf)
    e2 = fso_mean(cfg.fso)
    ratio = e1 * e2 / (cfg.delta() * e1 * e2 + (1.0 + cfg.imp.kappa2 ** 2) * e2
                       + cfg.constant_c())
    return 0.5 * math.log2(1.0 + ratio)


def theta_mean(cfg: LinkConfig) -> float:
    """``E[gamma1 gamma2 / ((1 + kappa2**2) gamma2 + C)]`` in closed form."""
    alpha, beta, mu2 = cfg.fso.alpha, cfg.fso.beta, cfg.fso.mu2
    a2 = 1.0 + cfg.imp.kappa2 ** 2
    c = cfg.constant_c()
    w = c * (alpha * beta) ** 2 / (16.0 * mu2 * a2)
    spec = bound_meijer_spec(alpha, beta)
    try:
        g = meijer_g(spec, w)
    except NumericalError as exc:
        raise NumericalError(
            f"Meijer-G failed at z={w!r} with rows {spec.a_top}; {spec.b_top}: {exc}"
        ) from exc
    if not g > 0.0:
        raise NumericalError(f"non-positive Meijer-G value {g!r} at z={w!r}")
    log_j = (math.log(rf_mean(cfg.rf)) - math.log(4.0 * math.pi) - ln_gamma(alpha)
             - ln_gamma(beta) - math.log(a2)
             + 0.25 * (alpha + beta) * math.log(16.0 * w) + math.log(g))
    return math.exp(log_j)


def theta_mean_quadrature(cfg: LinkConfig) -> float:
    """Nested two-dimensional quadrature of the same expectation (oracle)."""
    a2 = 1.0 + cfg.imp.kappa2 ** 2
    c = cfg.constant_c()
    mu1 = cfg.rf.mu1
    scale = rf_mean(cfg.rf)

    def rf_density(g1: float) -> float:
        if cfg.rf.condition > _FAST_CONDITION:
            return rf_pdf(g1, cfg.rf)
        return math.fsum(w * d / (s * mu1) * math.exp(-d * g1 / (s * mu1))
                         for w, d, s in cfg.rf.terms)

    def inner(g2: float) -> float:
        def integrand(t: float) -> float:
            if t >= 1.0:
                return 0.0
            g1 = scale * t / (1.0 - t)
            return g1 * g2 / (a2 * g2 + c) * rf_density(g1) * scale / (1.0 - t) ** 2

        val, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=0.0, epsrel=1e-12, limit=200)
        return val

    return _integrate_over_gamma2(inner, cfg)


def capacity_upper_bound(cfg: LinkConfig) -> float:
    """Upper bound ``0.5 log2(1 + J / (delta J + 1))`` on the ergodic capacity."""
    j = theta_mean(cfg)
    return 0.5 * math.log2(1.0 + j / (cfg.delta() * j + 1.0))
