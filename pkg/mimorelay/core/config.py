"""
System configuration for the FD massive-MIMO relay network

Holds every scalar and per-pair/per-subcarrier parameter of the network,
checks it against the model's invariants, derives the per-subcarrier
distortion coefficients and true channel variances, and reads/writes the
JSON configuration format.
"""

import dataclasses
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from dataclasses_json import dataclass_json
from pydantic import AliasChoices, BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigParseError
from .serialization import ArrayRecord, array_field

logger = logging.getLogger(__name__)


# Array-valued fields and the symbolic shape each must have.
ARRAY_FIELDS: Dict[str, Tuple[str, ...]] = {
    'p_s': ('L', 'K'),
    'p_r': ('L', 'K'),
    'kappa_s_tilde': ('L',),
    'beta_d_tilde': ('L',),
    'sigma2_n_r': ('K',),
    'sigma2_n_d': ('L', 'K'),
    'psi_hat_sr': ('L', 'K'),
    'psi_hat_rd': ('L', 'K'),
    'psi_hat_sd': ('L', 'L', 'K'),
    'psi_hat_rr': ('K',),
    'sigma2_e_sr': ('L', 'K'),
    'sigma2_e_rd': ('L', 'K'),
    'sigma2_e_sd': ('L', 'L', 'K'),
    'sigma2_e_rr': ('K',),
}

# Relay distortion: a scalar, or one coefficient per antenna chain.
RELAY_DISTORTION_FIELDS = ('kappa_r_tilde', 'beta_r_tilde')

DISTORTION_FIELDS = ('kappa_s_tilde', 'beta_d_tilde') + RELAY_DISTORTION_FIELDS

FIELD_ORDER = (
    ('num_pairs', 'num_subcarriers', 'num_antennas')
    + tuple(ARRAY_FIELDS)[:4] + RELAY_DISTORTION_FIELDS
    + tuple(ARRAY_FIELDS)[4:] + ('gamma0',)
)

NestedFloat = Union[float, List[float], List[List[float]], List[List[List[float]]]]


class SystemConfigFile(BaseModel):
    """Schema of the JSON configuration file.

    Checks value types only; invariants are checked by ``validate``.
    """

    model_config = ConfigDict(extra='forbid', populate_by_name=True)

    num_pairs: int = Field(validation_alias=AliasChoices('num_pairs', 'L'))
    num_subcarriers: int = Field(validation_alias=AliasChoices('num_subcarriers', 'K'))
    num_antennas: int = Field(validation_alias=AliasChoices('num_antennas', 'N'))
    p_s: NestedFloat
    p_r: NestedFloat
    kappa_s_tilde: NestedFloat
    beta_d_tilde: NestedFloat
    kappa_r_tilde: NestedFloat = 0.0
    beta_r_tilde: NestedFloat = 0.0
    sigma2_n_r: NestedFloat
    sigma2_n_d: NestedFloat
    psi_hat_sr: NestedFloat
    psi_hat_rd: NestedFloat
    psi_hat_sd: NestedFloat
    psi_hat_rr: NestedFloat
    sigma2_e_sr: NestedFloat = 0.0
    sigma2_e_rd: NestedFloat = 0.0
    sigma2_e_sd: NestedFloat = 0.0
    sigma2_e_rr: NestedFloat = 0.0
    gamma0: float = 1.0


def _as_array(value: Any, shape: Tuple[int, ...]) -> np.ndarray:
    """Broadcast a scalar to ``shape``; keep explicit arrays as given."""
    if isinstance(value, (int, float)):
        arr = np.full(shape, float(value))
    else:
        arr = _nested_array(value)
    arr.setflags(write=False)
    return arr


def _nested_array(value: Any) -> np.ndarray:
    try:
        return np.asarray(value, dtype=float)
    except ValueError as e:
        raise ConfigParseError(f"Ragged nested array in configuration: {e}") from e


def _as_relay_distortion(value: Any) -> np.ndarray:
    arr = _nested_array(value)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SystemConfig(ArrayRecord):
    """Full parameter set of the network. Immutable; arrays are read-only."""

    num_pairs: int
    num_subcarriers: int
    num_antennas: int
    p_s: np.ndarray
    p_r: np.ndarray
    kappa_s_tilde: np.ndarray
    beta_d_tilde: np.ndarray
    kappa_r_tilde: np.ndarray
    beta_r_tilde: np.ndarray
    sigma2_n_r: np.ndarray
    sigma2_n_d: np.ndarray
    psi_hat_sr: np.ndarray
    psi_hat_rd: np.ndarray
    psi_hat_sd: np.ndarray
    psi_hat_rr: np.ndarray
    sigma2_e_sr: np.ndarray
    sigma2_e_rd: np.ndarray
    sigma2_e_sd: np.ndarray
    sigma2_e_rr: np.ndarray
    gamma0: float

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SystemConfig':
        """Build a config from a decoded JSON object, broadcasting scalars."""
        try:
            raw = SystemConfigFile.model_validate(data)
        except ValidationError as e:
            raise ConfigParseError(f"Invalid configuration types: {e}") from e

        dims = {'L': raw.num_pairs, 'K': raw.num_subcarriers}
        values: Dict[str, Any] = {
            'num_pairs': raw.num_pairs,
            'num_subcarriers': raw.num_subcarriers,
            'num_antennas': raw.num_antennas,
            'gamma0': float(raw.gamma0),
        }
        for name, symbols in ARRAY_FIELDS.items():
            shape = tuple(max(dims[s], 0) for s in symbols)
            values[name] = _as_array(getattr(raw, name), shape)
        for name in RELAY_DISTORTION_FIELDS:
            values[name] = _as_relay_distortion(getattr(raw, name))
        return cls(**values)

    def to_dict(self) -> Dict[str, Any]:
        """Plain-Python view in canonical field order."""
        out: Dict[str, Any] = {}
        for name in FIELD_ORDER:
            value = getattr(self, name)
            if isinstance(value, np.ndarray):
                out[name] = value.tolist()
            else:
                out[name] = value
        return out

    @property
    def shape_dims(self) -> Dict[str, int]:
        return {'L': self.num_pairs, 'K': self.num_subcarriers, 'N': self.num_antennas}


# ---------------------------------------------------------------------------
# Parsing and emitting
# ---------------------------------------------------------------------------

def parse_config(text: str) -> SystemConfig:
    """Parse JSON text into a SystemConfig."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigParseError(f"Malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise ConfigParseError("Configuration must be a JSON object")
    return SystemConfig.from_dict(data)


def load_config(config_path: Union[str, Path]) -> SystemConfig:
    """Load a SystemConfig from a JSON file."""
    path = Path(config_path)
    logger.debug(f"Loading system configuration from {path}")
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    return parse_config(text)


def emit_config(config: SystemConfig) -> str:
    """Canonical JSON text; ``parse_config(emit_config(c)) == c`` exactly."""
    return json.dumps(config.to_dict(), indent=2, sort_keys=True)


def save_config(config: SystemConfig, config_path: Union[str, Path]) -> None:
    with open(config_path, 'w', encoding='utf-8') as f:
        f.write(emit_config(config))
        f.write('\n')


def config_digest(config: SystemConfig) -> str:
    """Stable SHA-256 digest of the canonical serialized config."""
    return hashlib.sha256(emit_config(config).encode('utf-8')).hexdigest()


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass_json
@dataclass
class Violation:
    """One broken invariant."""

    field: str
    index: Optional[List[int]]
    invariant: str

    @property
    def location(self) -> str:
        if not self.index:
            return self.field
        return self.field + ''.join(f'[{i}]' for i in self.index)

    @property
    def message(self) -> str:
        return f"{self.location} {self.invariant}"


@dataclass_json
@dataclass
class ValidationReport:
    """Result of ``validate``; ``passed`` is True when there are no violations."""

    violations: List[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed


def _element_violations(name: str, arr: np.ndarray, upper: Optional[float],
                        violations: List[Violation]) -> None:
    """Finite, non-negative and (when ``upper`` is set) strictly below ``upper``."""
    flat = np.atleast_1d(arr)
    scalar = arr.ndim == 0
    for idx in zip(*np.nonzero(~np.isfinite(flat))):
        violations.append(Violation(name, None if scalar else [int(i) for i in idx], "is not finite"))
    finite = np.where(np.isfinite(flat), flat, 0.0)
    if upper is None:
        for idx in zip(*np.nonzero(finite < 0)):
            violations.append(Violation(name, None if scalar else [int(i) for i in idx], "is negative"))
    else:
        bad = (finite < 0) | (finite >= upper)
        for idx in zip(*np.nonzero(bad)):
            violations.append(Violation(name, None if scalar else [int(i) for i in idx],
                                        f"outside [0,{upper:g})"))


def validate(config: SystemConfig) -> ValidationReport:
    """Check every invariant; violations are returned, never raised."""
    violations: List[Violation] = []

    for name in ('num_pairs', 'num_subcarriers', 'num_antennas'):
        value = getattr(config, name)
        if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
            violations.append(Violation(name, None, "must be a positive integer"))

    dims = config.shape_dims
    for name, symbols in ARRAY_FIELDS.items():
        arr = getattr(config, name)
        expected = tuple(dims[s] for s in symbols)
        if arr.shape != expected:
            label = ', '.join(symbols)
            violations.append(Violation(
                name, None,
                f"shape mismatch: expected ({label})={expected}, got {arr.shape}"
            ))
        upper = 1.0 if name in DISTORTION_FIELDS else None
        _element_violations(name, arr, upper, violations)

    for name in RELAY_DISTORTION_FIELDS:
        arr = getattr(config, name)
        if arr.ndim > 1 or (arr.ndim == 1 and arr.shape != (config.num_antennas,)):
            violations.append(Violation(
                name, None,
                f"shape mismatch: expected a scalar or (N,)=({config.num_antennas},), got {arr.shape}"
            ))
        _element_violations(name, arr, 1.0, violations)

    gamma0 = config.gamma0
    if not (isinstance(gamma0, (int, float)) and math.isfinite(gamma0) and 0.0 < gamma0 <= 1.0):
        violations.append(Violation('gamma0', None, "outside (0,1]"))

    report = ValidationReport(violations)
    if not report.passed:
        logger.debug(f"Configuration has {len(violations)} violation(s)")
    return report


# ---------------------------------------------------------------------------
# Derived constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DerivedConstants(ArrayRecord):
    """Per-subcarrier distortion coefficients and true channel variances."""

    kappa_s: np.ndarray = array_field()
    beta_d: np.ndarray = array_field()
    kappa_r: np.ndarray = array_field()
    beta_r: np.ndarray = array_field()
    psi_sr: np.ndarray = array_field()
    psi_rd: np.ndarray = array_field()
    psi_sd: np.ndarray = array_field()
    psi_rr: np.ndarray = array_field()

    def theta_t_r(self, num_antennas: int) -> np.ndarray:
        """Diagonal of the relay transmit distortion matrix, length N."""
        return np.broadcast_to(self.kappa_r, (num_antennas,)).astype(float)

    def theta_r_r(self, num_antennas: int) -> np.ndarray:
        """Diagonal of the relay receive distortion matrix, length N."""
        return np.broadcast_to(self.beta_r, (num_antennas,)).astype(float)


def derived_constants(config: SystemConfig) -> DerivedConstants:
    """Scale distortion coefficients by 1/K and form psi = psi_hat + sigma_e^2."""
    K = config.num_subcarriers
    return DerivedConstants(
        kappa_s=config.kappa_s_tilde / K,
        beta_d=config.beta_d_tilde / K,
        kappa_r=config.kappa_r_tilde / K,
        beta_r=config.beta_r_tilde / K,
        psi_sr=config.psi_hat_sr + config.sigma2_e_sr,
        psi_rd=config.psi_hat_rd + config.sigma2_e_rd,
        psi_sd=config.psi_hat_sd + config.sigma2_e_sd,
        psi_rr=config.psi_hat_rr + config.sigma2_e_rr,
    )


# ---------------------------------------------------------------------------
# Config transforms
# ---------------------------------------------------------------------------

def relay_distortion_is_scalar(config: SystemConfig) -> bool:
    return config.kappa_r_tilde.ndim == 0 and config.beta_r_tilde.ndim == 0


def with_antennas(config: SystemConfig, num_antennas: int) -> SystemConfig:
    """Copy of ``config`` with the relay array size replaced."""
    return dataclasses.replace(config, num_antennas=int(num_antennas))


def perfect_csi(config: SystemConfig) -> SystemConfig:
    """Copy where true statistics are known: psi_hat := psi and sigma_e^2 := 0."""
    derived = derived_constants(config)
    updates = {}
    for link in ('sr', 'rd', 'sd', 'rr'):
        psi = np.array(getattr(derived, f'psi_{link}'))
        psi.setflags(write=False)
        zeros = np.zeros_like(getattr(config, f'sigma2_e_{link}'))
        zeros.setflags(write=False)
        updates[f'psi_hat_{link}'] = psi
        updates[f'sigma2_e_{link}'] = zeros
    return dataclasses.replace(config, **updates)
