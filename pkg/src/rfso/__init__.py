"""Outage and capacity analysis of dual-hop RF/FSO amplify-and-forward relaying
with transceiver hardware impairments and partial relay selection under
outdated channel state information.

The public surface is split by concern:

``rfso.specfun``
    Log-gamma, modified Bessel K and Meijer G evaluation.
``rfso.channels``
    Per-hop SNR distributions (selected RF relay, Gamma-Gamma FSO).
``rfso.system``
    End-to-end SNDR model, impairment parameters and ceilings.
``rfso.analytics``
    Closed-form outage, capacity approximation and capacity upper bound.
``rfso.montecarlo``
    Reproducible simulation of the same quantities.
"""
from .analytics import (OutageResult, capacity_approx, capacity_upper_bound, outage_closed_form,
                        outage_floor, outage_quadrature)
from .channels import FsoHopParams, RfHopParams, turbulence_params
from .montecarlo import Estimate, estimate_capacity, estimate_outage
from .specfun import DomainError, NumericalError
from .system import UNBOUNDED, ImpairmentParams, LinkConfig

__version__ = "0.1.0"

__all__ = [
    "DomainError", "Estimate", "FsoHopParams", "ImpairmentParams", "LinkConfig",
    "NumericalError", "OutageResult", "RfHopParams", "UNBOUNDED", "capacity_approx",
    "capacity_upper_bound", "estimate_capacity", "estimate_outage", "outage_closed_form",
    "outage_floor", "outage_quadrature", "turbulence_params",
]
