"""Multivariate ratio estimation of a finite-population mean from known
proportions of binary auxiliary attributes."""

from .approximation import (
    BiasMse,
    OrderingReport,
    analytic,
    bias_arithmetic,
    bias_geometric,
    bias_harmonic,
    bias_ordering_report,
    bias_product_singh,
    bias_ratio_single,
    mse_multiattribute,
    mse_product_singh,
    mse_ratio_single,
    mse_sample_mean,
    product_singh,
    ratio_single,
)
from .errors import (
    EnumerationTooLarge,
    NonPositiveRatio,
    NumericError,
    SingularMomentMatrix,
    UndefinedEstimate,
    ValidationError,
    ZeroDenominator,
    ZeroProportion,
)
from .estimators import (
    EstimatorKind,
    WeightVector,
    default_roster,
    est_geometric,
    est_harmonic,
    est_mean,
    est_olkin_arithmetic,
    est_product_singh,
    est_ratio_single,
    evaluate,
    evaluate_batch,
)
from .population import (
    Population,
    PopulationMoments,
    Sample,
    SampleDesign,
    SampleStats,
    all_samples,
    build_population,
    design,
    draw_srswor,
    moments_from_summary,
    population_moments,
    sample_statistics,
    stats_from_values,
)
from .readers import load_wheat34, parse_population_csv, parse_summary_file
from .simulation import (
    SimulationConfig,
    compare_to_analytic,
    run_exhaustive,
    run_monte_carlo,
    synthetic_population,
)
from .weights import WeightSolution, equal_weights, optimal_weights

__version__ = "0.1.0"
