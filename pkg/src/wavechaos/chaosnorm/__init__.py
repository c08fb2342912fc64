"""Wiener-chaos kernel norms, Laplace bounds and the inequalities around them."""

from .first import (ChaosKernelSpec, NecessityBound, first_chaos_norm, first_chaos_norm_closed_alpha0,
                    first_chaos_norm_fourier, first_chaos_norm_time, necessity_lower_bound)
from .laplace import (Family, l_alpha0_n, l_sequence, lambda_integral, laplace_monotonicity_check,
                      phi_identity_check, phi_p, phi_p_lower, phi_p_symmetrized,
                      random_family_draws, reverse_convolution_check)
from .modes import mode_norm_closed, mode_norm_fourier, mode_norm_time
from .montecarlo import MCConfig, g1_norm_direct, gn_norm_mc, scaling_check, series_diagnostic

__all__ = [
    "ChaosKernelSpec", "NecessityBound", "first_chaos_norm", "first_chaos_norm_closed_alpha0",
    "first_chaos_norm_fourier", "first_chaos_norm_time", "necessity_lower_bound",
    "Family", "l_alpha0_n", "l_sequence", "lambda_integral", "laplace_monotonicity_check",
    "phi_identity_check", "phi_p", "phi_p_lower", "phi_p_symmetrized", "random_family_draws",
    "reverse_convolution_check", "mode_norm_closed", "mode_norm_fourier", "mode_norm_time",
    "MCConfig", "g1_norm_direct", "gn_norm_mc", "scaling_check", "series_diagnostic",
]
