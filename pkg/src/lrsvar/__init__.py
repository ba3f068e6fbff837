"""Bivariate structural VAR toolkit with long-run identification.

Pipeline: quarterly CSV ingestion and transforms, ADF unit-root testing,
VAR estimation with lag-order selection, long-run (permanent/transitory)
structural identification, impulse responses, residual diagnostics, and
cross-country structural-shock correlation, plus a seedable synthetic
generator that makes the identification verifiable end-to-end.
"""

from .errors import (
    DataError,
    EstimationError,
    IdentificationError,
    LrsvarError,
    StationarityError,
)
from .series import (
    QuarterIndex,
    QuarterlySeries,
    align_series,
    difference,
    dummy_deseasonalize,
    load_csv,
    log_transform,
    write_csv,
)
from .unit_root import AdfResult, DeterministicSpec, IntegrationReport, adf_test, integration_order
from .var import (
    LagExclusionResult,
    LagSelectionReport,
    StabilityReport,
    VarModel,
    check_stability,
    companion_matrix,
    fit_var,
    lag_exclusion_test,
    select_lag,
)
from .svar import (
    IrfResult,
    ShockSeries,
    StructuralModel,
    compute_irf,
    identify_long_run,
    ma_coefficients,
    recover_shocks,
)
from .diagnostics import DiagnosticsReport, jarque_bera, lm_autocorrelation, run_diagnostics, white_test
from .shocks import (
    CorrelationReport,
    ShockPanel,
    SubPeriod,
    build_correlation_report,
    combined_triangle_table,
    correlation_matrix,
    pearson_correlation,
    read_shock_csv,
    shock_volatility,
    write_shock_csv,
)
from .simulate import StructuralDgp, replication_seeds, simulate
from .pipeline import CountryConfig, PipelineConfig, SeriesOptions, load_config, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "AdfResult",
    "CorrelationReport",
    "CountryConfig",
    "DataError",
    "DeterministicSpec",
    "DiagnosticsReport",
    "EstimationError",
    "IdentificationError",
    "IntegrationReport",
    "IrfResult",
    "LagExclusionResult",
    "LagSelectionReport",
    "LrsvarError",
    "PipelineConfig",
    "QuarterIndex",
    "QuarterlySeries",
    "SeriesOptions",
    "ShockPanel",
    "ShockSeries",
    "StabilityReport",
    "StationarityError",
    "StructuralDgp",
    "StructuralModel",
    "SubPeriod",
    "VarModel",
    "align_series",
    "adf_test",
    "build_correlation_report",
    "check_stability",
    "combined_triangle_table",
    "companion_matrix",
    "compute_irf",
    "correlation_matrix",
    "difference",
    "dummy_deseasonalize",
    "fit_var",
    "identify_long_run",
    "integration_order",
    "jarque_bera",
    "lag_exclusion_test",
    "lm_autocorrelation",
    "load_config",
    "load_csv",
    "log_transform",
    "ma_coefficients",
    "pearson_correlation",
    "read_shock_csv",
    "recover_shocks",
    "replication_seeds",
    "run_diagnostics",
    "run_pipeline",
    "select_lag",
    "shock_volatility",
    "simulate",
    "white_test",
    "write_csv",
    "write_shock_csv",
]
