"""Radiation-field asymptotics toolkit.

Normal-form long-range scattering metrics, the b-Hamilton flow and its
radial-set structure, polyhomogeneous index-set algebra, a spherically
symmetric wave solver, and Mellin/front-face fitting machinery verifying the
leading log-coefficient identity at null infinity.
"""

__version__ = "0.1.0"

from .geometry import (  # noqa: F401
    CotangentPoint,
    MetricModel,
    b_symbol,
    dual_metric_matrix,
    make_kerr_exterior,
    make_minkowski,
    static_spherical_model,
    validate_model,
)
