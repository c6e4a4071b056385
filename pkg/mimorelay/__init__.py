"""
mimorelay - finite-N and asymptotic rates of a full-duplex massive-MIMO relay

Monte Carlo simulation of a multi-carrier decode-and-forward relay with N
antennas serving L half-duplex source-destination pairs under transceiver
distortion and imperfect channel knowledge, together with the closed-form
large-N rate limits it converges to.
"""

__version__ = "1.0.0"

from .core.agent import SimulationAgent, run_trial
from .core.asymptotic import asymptotic_rate, asymptotic_rate_perfect_csi, deterministic_equivalent
from .core.config import SystemConfig, load_config, validate
from .core.settings import Settings

__all__ = [
    "SimulationAgent",
    "run_trial",
    "asymptotic_rate",
    "asymptotic_rate_perfect_csi",
    "deterministic_equivalent",
    "SystemConfig",
    "load_config",
    "validate",
    "Settings",
]
