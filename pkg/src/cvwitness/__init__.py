"""EPR-like operator entanglement witness for two-mode continuous-variable states."""

from .epr_criterion import (
    CriterionReport,
    EprScale,
    MomentSet,
    assess,
    concurrence,
    delta,
    entanglement_degree,
    gees_quick_test,
    optimal_c,
    squeezing_flags,
    t_expectation,
    uv_variances,
)
from .fock_engine import TruncationPolicy, TwoModeState, displace, expectation, extract_moments, mix
from .gaussian_moments import GaussianQForm, minimum_correlation_form, santos_form, tmsv_form, to_moment_set
from .state_library import EcsSign, coherent_product, entangled_coherent, random_separable, two_mode_squeezed_vacuum

__version__ = "0.1.0"
