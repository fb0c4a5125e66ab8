"""Python bindings for the qbus correlation-transfer library.

Covariance matrices are numpy arrays. Whole-system matrices use the QQPP
layout over modes (a, b, c, mode m) with vacuum = identity / 2; two-mode
blocks are dimensionless and QPQP ordered (vacuum = identity).
"""

from ._core import (
    CSV_HEADER,
    BathSpec,
    ChainSpec,
    EffectiveParams,
    QbusError,
    bc_steering_window,
    bell_max,
    build_effective_params,
    critical_times,
    critical_times_bc,
    direct_steering_window,
    eigenfrequencies,
    extract_two_mode,
    gaussian_discord,
    log_negativity,
    mutual_information,
    preset_names,
    propagate_effective,
    run_analysis,
    run_scenario,
    steering,
    symplectic_eigenvalues,
    thermal_tmtss_cm,
    threshold,
    tmtss_cm,
    transfer_time,
)

MODE_A, MODE_B, MODE_C = 0, 1, 2

__all__ = [name for name in dir() if not name.startswith("_")]
