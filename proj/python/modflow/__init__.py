from ._modflow import (
    SignalLaw,
    asymmetry_csv,
    kernel_h,
    posterior_weights,
    price_csv,
    simulate_csv,
    verify_report,
)

__all__ = [
    "SignalLaw",
    "asymmetry_csv",
    "kernel_h",
    "posterior_weights",
    "price_csv",
    "simulate_csv",
    "verify_report",
]
