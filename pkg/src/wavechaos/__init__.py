"""Well-posedness checks and Wiener-chaos norms for the stochastic wave
equation driven by Gaussian noise that is fractional in time and has a
general spatial covariance."""

from .errors import (DivergenceError, InvalidGram, InvalidParameter, MCDiagnosticError,
                     QuadratureError, SingularityError, UnsupportedEvaluation, WaveChaosError)
from .results import ConvergenceVerdict, Estimate
from .spectral import (CovarianceDescriptor, NoiseModel, SpectralMeasure, atomic, delta_comb,
                       discretize, fractional_sheet, homogeneous, model_from_dict, riesz,
                       to_spectral, white_noise)

__version__ = "0.1.0"

__all__ = [
    "DivergenceError", "InvalidGram", "InvalidParameter", "MCDiagnosticError", "QuadratureError",
    "SingularityError", "UnsupportedEvaluation", "WaveChaosError", "ConvergenceVerdict", "Estimate",
    "CovarianceDescriptor", "NoiseModel", "SpectralMeasure", "atomic", "delta_comb", "discretize",
    "fractional_sheet", "homogeneous", "model_from_dict", "riesz", "to_spectral", "white_noise",
]
