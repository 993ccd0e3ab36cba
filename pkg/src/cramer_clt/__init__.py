"""Monte Carlo verification of CLTs for Dirichlet character series over
randomized pseudo-primes, with Euler-product diagnostics."""

__version__ = "0.1.0"

from .characters import (
    BUILTIN_CHI7,
    DirichletCharacter,
    angle,
    builtin_character,
    character_table,
    evaluate,
    principal_character,
    totient,
)
from .errors import (
    ConfigError,
    CramerCltError,
    DomainError,
    InsufficientDataError,
    InsufficientStateError,
    PoleError,
    WrongSeriesError,
)
from .pseudoprimes import (
    EnsembleSpec,
    PseudoPrimeState,
    StateKind,
    expected_pi,
    nth_pseudoprime,
    pi_count,
    sample_cramer,
    sample_cramer_for_count,
    sample_gs,
    sieve_actual,
)
from .series import (
    SeriesResult,
    angle_series,
    deterministic_limit,
    ei_cos_antiderivative,
    ei_cos_integral,
    gaussian_tail_estimate,
    lyapunov_ratio,
    mixed_series,
    normalize_angle_series,
    normalize_oscillatory_series,
    oscillatory_mean,
    oscillatory_mean_approx,
    oscillatory_series,
    oscillatory_variance,
    series_up_to,
)
from .stats import Histogram, NormalFit, fit_normal, histogram, ks_test, normal_cdf
from .eulerprod import (
    ProductTrace,
    angle_series_prefix,
    dirichlet_l_reference,
    log_euler_product,
    zeta_reference,
    zeta_truncated,
)
