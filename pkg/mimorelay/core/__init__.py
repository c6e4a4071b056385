"""
mimorelay core module
Channel sampling, beamforming, finite-N rate terms, asymptotic limits and sweeps
"""

from .agent import SimulationAgent, run_trial, simulate_trial
from .asymptotic import (
    AsymptoticLimits,
    DeterministicEquivalent,
    asymptotic_rate,
    asymptotic_rate_perfect_csi,
    deterministic_equivalent,
)
from .beamform import FilterSet, build_mrc_mrt
from .channel import ChannelSet, SIChannelBank, TrueChannelSet, sample_channels, sample_true_channels
from .concentration import ConcentrationReport, MatrixSpec, lemma1_check, lemma2_check, run_lemma_suite
from .config import (
    DerivedConstants,
    SystemConfig,
    ValidationReport,
    config_digest,
    derived_constants,
    emit_config,
    load_config,
    parse_config,
    validate,
)
from .finite_rate import (
    InterferenceBreakdown,
    RateReport,
    covariance_dest,
    covariance_relay,
    downlink_terms,
    rates,
    uplink_terms,
)
from .reporter import SweepReporter, SweepResult
from .settings import Settings

__all__ = [
    'SimulationAgent', 'run_trial', 'simulate_trial',
    'AsymptoticLimits', 'DeterministicEquivalent', 'asymptotic_rate',
    'asymptotic_rate_perfect_csi', 'deterministic_equivalent',
    'FilterSet', 'build_mrc_mrt',
    'ChannelSet', 'SIChannelBank', 'TrueChannelSet', 'sample_channels', 'sample_true_channels',
    'ConcentrationReport', 'MatrixSpec', 'lemma1_check', 'lemma2_check', 'run_lemma_suite',
    'DerivedConstants', 'SystemConfig', 'ValidationReport', 'config_digest',
    'derived_constants', 'emit_config', 'load_config', 'parse_config', 'validate',
    'InterferenceBreakdown', 'RateReport', 'covariance_dest', 'covariance_relay',
    'downlink_terms', 'rates', 'uplink_terms',
    'SweepReporter', 'SweepResult',
    'Settings',
]
