"""End-to-end SNDR of the impaired AF relay link and its high-SNR ceilings."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import FsoHopParams, RfHopParams, rf_mean

__all__ = [
    "UNBOUNDED",
    "Unbounded",
    "ImpairmentParams",
    "LinkConfig",
    "delta",
    "constant_c",
    "relay_gain_sq",
    "sndr",
    "sndr_ceiling",
    "capacity_ceiling",
]


class Unbounded:
    """Marker for a ceiling that does not exist (ideal hardware).

    Deliberately not a float: arithmetic on it fails, so callers have to
    branch on ``x is UNBOUNDED``.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNBOUNDED"

    def __str__(self) -> str:
        return "unbounded"

    def __reduce__(self):
        return (Unbounded, ())


UNBOUNDED = Unbounded()


@dataclass(frozen=True)
class ImpairmentParams:
    """Aggregate impairment levels at the source (``kappa1``) and relay (``kappa2``)."""

    kappa1: float = 0.0
    kappa2: float = 0.0

    def __post_init__(self) -> None:
        for name in ("kappa1", "kappa2"):
            v = float(getattr(self, name))
            if not (v >= 0.0 and math.isfinite(v)):
                raise ValueError(f"{name} must be nonnegative, got {v!r}")
            object.__setattr__(self, name, v)

    @property
    def delta(self) -> float:
        return delta(self)

    @property
    def ideal(self) -> bool:
        return self.kappa1 == 0.0 and self.kappa2 == 0.0


@dataclass(frozen=True)
class LinkConfig:
    """Complete dual-hop link plus the outage threshold ``gamma_th`` (linear)."""

    rf: RfHopParams
    fso: FsoHopParams
    imp: ImpairmentParams
    gamma_th: float

    def __post_init__(self) -> None:
        g = float(self.gamma_th)
        if not (g > 0.0 and math.isfinite(g)):
            raise ValueError(f"gamma_th must be positive, got {self.gamma_th!r}")
        object.__setattr__(self, "gamma_th", g)

    def delta(self) -> float:
        return delta(self.imp)

    def constant_c(self) -> float:
        return constant_c(self.rf, self.imp.kappa1)

    @property
    def below_ceiling(self) -> bool:
        """Whether ``gamma_th < 1/delta``; outage is certain otherwise."""
        d = self.delta()
        return d == 0.0 or self.gamma_th < 1.0 / d


def delta(imp: ImpairmentParams) -> float:
    """``kappa1**2 + kappa2**2 + kappa1**2 * kappa2**2``."""
    k1, k2 = imp.kappa1 ** 2, imp.kappa2 ** 2
    return k1 + k2 + k1 * k2


def constant_c(rf: RfHopParams, kappa1: float) -> float:
    """Relay-gain constant ``E[gamma1] (1 + kappa1**2) + 1``."""
    return rf_mean(rf) * (1.0 + kappa1 ** 2) + 1.0


def relay_gain_sq(rf: RfHopParams, kappa1: float, p1: float, p2: float,
                  sigma1_sq: float) -> float:
    """Squared fixed relay gain ``P2 / (P1 E|h|^2 (1 + kappa1**2) + sigma1^2)``.

    ``E|h|^2`` is taken over the selected relay, ``rf_mean(rf) / rf.mu1``, which
    makes the gain consistent with :func:`constant_c`.
    """
    for name, v in (("p1", p1), ("p2", p2), ("sigma1_sq", sigma1_sq)):
        if not v > 0.0:
            raise ValueError(f"{name} must be positive, got {v!r}")
    fading_mean = rf_mean(rf) / rf.mu1
    return p2 / (p1 * fading_mean * (1.0 + kappa1 ** 2) + sigma1_sq)


def sndr(gamma1, gamma2, imp: ImpairmentParams, c: float):
    """End-to-end SNDR for hop SNRs ``gamma1``, ``gamma2`` (scalars or arrays)."""
    g1 = np.asarray(gamma1, dtype=float)
    g2 = np.asarray(gamma2, dtype=float)
    prod = g1 * g2
    out = prod / (delta(imp) * prod + (1.0 + imp.kappa2 ** 2) * g2 + c)
    if out.ndim == 0:
        return float(out)
    return out


def sndr_ceiling(imp: ImpairmentParams) -> float | Unbounded:
    """High-SNR limit of the SNDR: ``1/delta``, or ``UNBOUNDED`` for ideal hardware."""
    d = delta(imp)
    return UNBOUNDED if d == 0.0 else 1.0 / d


def capacity_ceiling(imp: ImpairmentParams) -> float | Unbounded:
    """High-SNR capacity limit in bits per channel use."""
    g = sndr_ceiling(imp)
    if g is UNBOUNDED:
        return UNBOUNDED
    return 0.5 * math.log2(1.0 + g)
