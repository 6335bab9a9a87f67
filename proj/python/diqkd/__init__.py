"""Finite-key calculator and simulator for relay-based device-independent QKD.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its public surface.
"""

from ._core import (  # noqa: F401
    EpsilonBudget,
    EtaSource,
    KeyStatus,
    ProtocolParams,
    SecurityReport,
    __version__,
    asymptotic_fraction,
    bell_state,
    binary_entropy,
    chsh_to_overlap,
    chsh_value,
    complement_deviation,
    hoeffding_tail,
    key_length,
    mu,
    overlap_efficiency_correction,
    rate_report,
    run_simulation,
    serfling_tail,
    sweep_eta,
    toeplitz_hash,
    uniform_budget,
    verification_hash_length,
    werner_state,
    xi,
    zeta,
)

__all__ = [
    "EpsilonBudget",
    "EtaSource",
    "KeyStatus",
    "ProtocolParams",
    "SecurityReport",
    "__version__",
    "asymptotic_fraction",
    "bell_state",
    "binary_entropy",
    "chsh_to_overlap",
    "chsh_value",
    "complement_deviation",
    "hoeffding_tail",
    "key_length",
    "mu",
    "overlap_efficiency_correction",
    "rate_report",
    "run_simulation",
    "serfling_tail",
    "sweep_eta",
    "toeplitz_hash",
    "uniform_budget",
    "verification_hash_length",
    "werner_state",
    "xi",
    "zeta",
]
