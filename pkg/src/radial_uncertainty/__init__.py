"""Radial coordinate / radial momentum uncertainty relations for central potentials."""

__version__ = "0.1.0"

from .hydrogen import (  # noqa: F401
    MomentTable,
    QuantumNumbers,
    coordinate_variance,
    energy,
    min_product_over_l,
    moment_kramers,
    radial_momentum_variance,
    radial_wavefunction,
    uncertainty_product,
)
from .radial_numerics import (  # noqa: F401
    SampledRadialFunction,
    UncertaintyReport,
    sample_hydrogen,
    uncertainty_report,
    weyl_scan,
)
