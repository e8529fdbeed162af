"""Exact module counting, free-module densities and random-code experiments
over finite chain rings."""

from .approx import ApproxReal, TruncationPolicy, default_policy
from .coding import (
    BallProfile,
    GVExperimentReport,
    WeightModel,
    ball_profile,
    ball_volume,
    entropy_estimate,
    gv_lower_bound,
    gv_random_experiment,
    make_weight_model,
    min_distance_exhaustive,
    q_ary_entropy,
)
from .density import (
    DensityResult,
    andrews_gordon_product,
    andrews_gordon_series,
    cartan_quadratic_form,
    density_bounds,
    depth_two_density,
    limit_free_density,
    rank_density_trend,
    table1_rows,
    table2_rows,
    type_counts_sorted,
)
from .errors import BudgetExceededError, NonconvergentError, ParameterError, VerificationError
from .modcount import (
    ChainRingSpec,
    compositions,
    count_by_shape,
    count_by_type,
    count_free,
    free_fraction_by_length,
    free_fraction_by_rank,
    length_of,
    matrix_count_by_type,
    rank_of,
    shape_from_type,
    total_by_length,
    total_by_rank,
    type_from_shape,
    types_of_length,
    unimodular_probability,
)
from .qseries import (
    balanced_multinomial,
    euler_function,
    gaussian_binomial,
    pochhammer_finite,
    pochhammer_infinite,
    q_multinomial,
)
from .simulate import (
    ConcreteRing,
    RingMatrix,
    TypeCensus,
    enumerate_submodules,
    is_rect_unimodular,
    matrix_type,
    monte_carlo_type_distribution,
    ring_matrix,
    row_span,
    sample_matrix,
    valuation,
    verify_census,
)

__version__ = "0.1.0"
