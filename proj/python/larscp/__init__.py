"""LARS regression paths with Cp-based selection and per-case diagnostics."""

from ._core import (  # noqa: F401
    Dataset,
    FullModelInfo,
    LarsCpError,
    LarsPath,
    LarsStep,
    SelectionResult,
    __version__,
    case_cp,
    chi_sq_upper_tail,
    cp_total,
    full_model_info,
    lars_path,
    load_csv,
    round_augment,
    select_by_cp,
    simulate_cov,
    sir,
    stress_marginal,
    stress_round,
    stress_scale,
)
