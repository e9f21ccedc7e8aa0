"""Exact exterior calculus for natural G2-structures on the unit tangent sphere bundle."""

from __future__ import annotations

from .calculus import CurvatureModel, d, torsion_report
from .exterior import Form, parse_form, render_form, wedge
from .g2 import Coeffs, hodge_closed_form, hodge_oracle, is_stable, metric_data

__version__ = "0.1.0"

__all__ = [
    "Coeffs", "CurvatureModel", "Form", "d", "hodge_closed_form", "hodge_oracle",
    "is_stable", "metric_data", "parse_form", "render_form", "torsion_report", "wedge",
]
