"""Figure-reproduction presets.

The preset files live next to this module as ``presets/figN.yaml``.  Values
the source figures do not state are reconstructions; each file says which.
"""
from __future__ import annotations

from importlib import resources

import yaml

from .config import SweepSpec, spec_from_dict

FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5")


def preset_text(name: str) -> str:
    if name not in FIGURES:
        raise ValueError(f"unknown figure preset {name!r}; expected one of {', '.join(FIGURES)}")
    return resources.files("rfso.cli").joinpath("presets", f"{name}.yaml").read_text("utf-8")


def figure_preset(name: str) -> SweepSpec:
    """Sweep specification reproducing one of the five result figures."""
    return spec_from_dict(yaml.safe_load(preset_text(name)))
