"""Statistical models of the two hops.

First hop (RF): Rayleigh fading, the relay of rank ``m`` among ``N`` is chosen
from outdated CSI whose power correlation with the actual CSI is ``rho``.
Second hop (FSO): Gamma-Gamma irradiance, electrical SNR ``gamma2 = I**2 * mu2``.

All SNR quantities are linear (not dB).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import mpmath
import numpy as np

from .specfun import DomainError, bessel_k_scaled, ln_gamma

__all__ = [
    "RfHopParams",
    "FsoHopParams",
    "turbulence_params",
    "rf_pdf",
    "rf_cdf",
    "rf_ccdf",
    "rf_mean",
    "fso_pdf",
    "fso_logpdf",
    "fso_mean",
    "mu2_from_mean",
]


@dataclass(frozen=True)
class RfHopParams:
    """First hop: ``n_relays`` relays, selected ``rank`` (``rank == n_relays`` is
    the best relay), CSI power correlation ``rho`` and average SNR ``mu1``."""

    n_relays: int
    rank: int
    rho: float
    mu1: float

    def __post_init__(self) -> None:
        if int(self.n_relays) != self.n_relays or self.n_relays < 1:
            raise ValueError(f"n_relays must be a positive integer, got {self.n_relays!r}")
        if int(self.rank) != self.rank or not 1 <= self.rank <= self.n_relays:
            raise ValueError(f"rank must satisfy 1 <= rank <= n_relays, got {self.rank!r}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho!r}")
        if not (self.mu1 > 0.0 and math.isfinite(self.mu1)):
            raise ValueError(f"mu1 must be positive, got {self.mu1!r}")
        object.__setattr__(self, "n_relays", int(self.n_relays))
        object.__setattr__(self, "rank", int(self.rank))
        object.__setattr__(self, "rho", float(self.rho))
        object.__setattr__(self, "mu1", float(self.mu1))

    @cached_property
    def exact_weights(self) -> tuple[Fraction, ...]:
        """Mixture weights ``m*C(N,m)*C(m-1,n)*(-1)**n / (N-m+n+1)`` as exact rationals."""
        N, m = self.n_relays, self.rank
        lead = m * math.comb(N, m)
        return tuple(Fraction((-1) ** n * lead * math.comb(m - 1, n), N - m + n + 1)
                     for n in range(m))

    @cached_property
    def terms(self) -> tuple[tuple[float, float, float], ...]:
        """Exponential mixture behind the ordered-SNR distribution.

        One ``(weight, decay, spread)`` triple per summation index ``n`` with
        ``decay = N-m+n+1`` and ``spread = (N-m+n)(1-rho)+1``.  The CDF is
        ``sum weight * (1 - exp(-decay*x/(spread*mu1)))``.
        """
        N, m = self.n_relays, self.rank
        return tuple((float(w), float(N - m + n + 1), (N - m + n) * (1.0 - self.rho) + 1.0)
                     for n, w in enumerate(self.exact_weights))

    @cached_property
    def condition(self) -> float:
        """``sum |weight|``: absolute rounding error of a double-precision
        evaluation of the mixture is about this times machine epsilon."""
        return float(sum(abs(w) for w in self.exact_weights))


@dataclass(frozen=True)
class FsoHopParams:
    """Second hop: Gamma-Gamma parameters ``alpha``, ``beta`` and average
    electrical SNR ``mu2``."""

    alpha: float
    beta: float
    mu2: float

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "mu2"):
            v = float(getattr(self, name))
            if not v > 0.0:
                raise ValueError(f"{name} must be positive, got {v!r}")
            object.__setattr__(self, name, v)
        if not math.isfinite(self.mu2):
            raise ValueError("mu2 must be finite")

    @classmethod
    def from_sigma_r(cls, sigma_r: float, mu2: float) -> "FsoHopParams":
        alpha, beta = turbulence_params(sigma_r)
        return cls(alpha, beta, mu2)


def _compensated(parts) -> np.ndarray | float:
    # Neumaier summation, elementwise over arrays
    total = None
    comp = None
    for t in parts:
        if total is None:
            total = t
            comp = t * 0.0
            continue
        s = total + t
        comp = comp + np.where(np.abs(total) >= np.abs(t), (total - s) + t, (t - s) + total)
        total = s
    return total + comp


def turbulence_params(sigma_r: float) -> tuple[float, float]:
    """Gamma-Gamma ``(alpha, beta)`` for Rytov standard deviation ``sigma_r``.

    ``sigma_r`` is the standard deviation; the Rytov variance is its square.
    """
    sigma_r = float(sigma_r)
    if not (sigma_r > 0.0 and math.isfinite(sigma_r)):
        raise DomainError(f"sigma_r must be positive, got {sigma_r!r}")
    s2 = sigma_r * sigma_r
    s125 = sigma_r ** 2.4
    alpha = 1.0 / math.expm1(0.49 * s2 / (1.0 + 1.11 * s125) ** (7.0 / 6.0))
    beta = 1.0 / math.expm1(0.51 * s2 / (1.0 + 0.69 * s125) ** (5.0 / 6.0))
    return alpha, beta


def _nonneg(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError(f"{name} must be nonnegative")
    return arr


def _scalar_or_array(val: np.ndarray, like) -> np.ndarray | float:
    return float(val) if np.ndim(like) == 0 else val


# Above this conditioning the alternating mixture loses more than ~3 digits
# in double precision and is summed in extended precision instead.
_CONDITION_LIMIT = 1e3


def _mixture(x, p: RfHopParams, kind: str):
    """Evaluate the exponential mixture for ``kind`` in {"pdf", "cdf", "ccdf"}."""
    arr = _nonneg(x)
    if p.condition <= _CONDITION_LIMIT:
        rates = [d / (s * p.mu1) for _, d, s in p.terms]
        weights = [w for w, _, _ in p.terms]
        if kind == "pdf":
            out = _compensated([w * r * np.exp(-r * arr) for w, r in zip(weights, rates)])
        else:
            # Rounding error of each form is ~condition*eps times its largest
            # term, so the head is summed from expm1 and the tail from exp.
            tail = _compensated([w * np.exp(-r * arr) for w, r in zip(weights, rates)])
            if kind == "cdf":
                head = _compensated([-w * np.expm1(-r * arr) for w, r in zip(weights, rates)])
                out = np.where(tail < 0.5, 1.0 - tail, head)
            else:
                out = tail
    else:
        out = _mixture_mp(arr, p, kind)
    if kind != "pdf":
        out = np.clip(out, 0.0, 1.0)
    return _scalar_or_array(out, x)


def _mixture_mp(arr: np.ndarray, p: RfHopParams, kind: str) -> np.ndarray:
    ctx = mpmath.MPContext()
    ctx.dps = 20 + int(math.ceil(math.log10(p.condition)))
    N, m = p.n_relays, p.rank
    weights = [ctx.mpf(w.numerator) / w.denominator for w in p.exact_weights]
    rates = [ctx.mpf(N - m + n + 1) / ((N - m + n) * (1 - ctx.mpf(p.rho)) + 1) / ctx.mpf(p.mu1)
             for n in range(m)]
    out = np.empty(arr.shape)
    for idx, xv in np.ndenumerate(arr):
        xm = ctx.mpf(float(xv))
        if kind == "pdf":
            v = ctx.fsum(w * r * ctx.exp(-r * xm) for w, r in zip(weights, rates))
        elif kind == "cdf":
            v = ctx.fsum(-w * ctx.expm1(-r * xm) for w, r in zip(weights, rates))
        else:
            v = ctx.fsum(w * ctx.exp(-r * xm) for w, r in zip(weights, rates))
        out[idx] = float(v)
    return out


def rf_pdf(x, p: RfHopParams):
    """Density of the actual first-hop SNR of the selected relay."""
    return _mixture(x, p, "pdf")


def rf_cdf(x, p: RfHopParams):
    """CDF of the actual first-hop SNR of the selected relay; exactly 0 at 0."""
    return _mixture(x, p, "cdf")


def rf_ccdf(x, p: RfHopParams):
    """Survival function ``1 - rf_cdf``, summed directly to avoid cancellation."""
    return _mixture(x, p, "ccdf")


def rf_mean(p: RfHopParams) -> float:
    """Mean first-hop SNR of the selected relay, summed in exact rationals."""
    N, m = p.n_relays, p.rank
    one_minus_rho = Fraction(1) - Fraction(p.rho)
    total = sum(w * ((N - m + n) * one_minus_rho + 1) / (N - m + n + 1)
                for n, w in enumerate(p.exact_weights))
    return p.mu1 * float(total)


def fso_logpdf(x: float, p: FsoHopParams) -> float:
    """Log of the Gamma-Gamma SNR density at ``x > 0``."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"x must be positive, got {x!r}")
    a, b = p.alpha, p.beta
    h = 0.25 * (a + b)
    arg = 2.0 * math.sqrt(a * b * math.sqrt(x / p.mu2))
    return (2.0 * h * math.log(a * b) + (h - 1.0) * math.log(x)
            - ln_gamma(a) - ln_gamma(b) - h * math.log(p.mu2)
            + math.log(bessel_k_scaled(a - b, arg)) - arg)


def fso_pdf(x: float, p: FsoHopParams) -> float:
    """Gamma-Gamma density of the second-hop electrical SNR."""
    return math.exp(fso_logpdf(x, p))


def fso_mean(p: FsoHopParams) -> float:
    """Mean second-hop SNR, ``(alpha+1)(beta+1) mu2 / (alpha beta)``."""
    return (1.0 + 1.0 / p.alpha) * (1.0 + 1.0 / p.beta) * p.mu2


def mu2_from_mean(mean_snr: float, alpha: float, beta: float) -> float:
    """Average electrical SNR giving a mean second-hop SNR of ``mean_snr``."""
    return mean_snr / ((1.0 + 1.0 / alpha) * (1.0 + 1.0 / beta))
