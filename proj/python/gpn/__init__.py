"""1-D Gaussian-process maximum-likelihood toolkit with nugget support."""

from gpn._core import (
    Emulator,
    builtin_dataset,
    condition_number,
    corr,
    corr_matrix,
    fit_mle,
    psi_hat_expansion,
    psi_hat_numeric_linear,
    run_study,
    scan_profile,
    __version__,
)

__all__ = [
    "Emulator",
    "builtin_dataset",
    "condition_number",
    "corr",
    "corr_matrix",
    "fit_mle",
    "psi_hat_expansion",
    "psi_hat_numeric_linear",
    "run_study",
    "scan_profile",
    "__version__",
]
