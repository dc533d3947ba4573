"""Local zeta integrals, character sums and bound bookkeeping for depth-aspect moments.

The subpackages are plain modules:

- :mod:`.padic` and :mod:`.characters` for shells, additive and multiplicative characters and Gauss sums;
- :mod:`.whittaker` and :mod:`.local_identities` for the non-archimedean kernels and their oracles;
- :mod:`.gamma` and :mod:`.archimedean` for gamma ratios and the analytic conductor;
- :mod:`.perron` and :mod:`.bounds` for the contour-integral side and exponent arithmetic;
- :mod:`.suite` and :mod:`.cli` for the verification harness.
"""
from .errors import (BudgetExceeded, DepthExceeded, DivergentRegion, LocalFactorsError, NonAdmissibleWarning,
                     PoleAtSample, QuadratureNonconvergence)
from .padic import LocalFieldModel, MeasureConvention, MeasureMode, PadicApprox
from .records import ParamPoint, VerificationRecord
from .whittaker import SatakeParams

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "DepthExceeded", "DivergentRegion", "LocalFactorsError", "NonAdmissibleWarning",
    "PoleAtSample", "QuadratureNonconvergence", "LocalFieldModel", "MeasureConvention", "MeasureMode",
    "PadicApprox", "ParamPoint", "VerificationRecord", "SatakeParams",
]
