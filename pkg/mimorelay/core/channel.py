"""
Monte Carlo channel realizations

Every channel entry group is drawn from its own counter-based random stream
keyed by (seed, trial_index, link role, indices), so trials can be generated
in any order and on any worker with identical results.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, Optional, Tuple, Union

import numpy as np

from .config import SystemConfig
from .serialization import ArrayRecord

logger = logging.getLogger(__name__)

SEED_MASK = (1 << 64) - 1


class LinkRole(IntEnum):
    """Stream tag of each random quantity."""

    SR = 1
    RD = 2
    SD = 3
    RR = 4
    SR_ERR = 11
    RD_ERR = 12
    SD_ERR = 13
    RR_ERR = 14
    LEMMA_P = 21
    LEMMA_Q = 22
    LEMMA_MATRIX = 23


def counter_rng(seed: int, trial_index: int, role: LinkRole, *indices: int) -> np.random.Generator:
    """Independent generator for one (seed, trial, role, indices) tuple."""
    spawn_key = (int(trial_index), int(role)) + tuple(int(i) for i in indices)
    return np.random.default_rng(
        np.random.SeedSequence(entropy=int(seed) & SEED_MASK, spawn_key=spawn_key)
    )


def complex_gaussian(rng: np.random.Generator, variance: float,
                     shape: Union[int, Tuple[int, ...]]) -> np.ndarray:
    """CN(0, variance) samples; real and imaginary parts each carry variance/2."""
    if isinstance(shape, int):
        shape = (shape,)
    z = rng.standard_normal((2,) + tuple(shape))
    return np.sqrt(variance / 2.0) * (z[0] + 1j * z[1])


class SIChannelBank(Sequence):
    """Per-subcarrier N x N SI channels regenerated on access.

    ``bank[k]`` is bit-identical to the eager matrix drawn from the same
    stream, so large arrays never need to be held for all K at once. When
    ``error_variance`` is given, the error stream is added on top
    (the true SI channel).
    """

    def __init__(self, psi_hat_rr: np.ndarray, num_antennas: int, seed: int,
                 trial_index: int, error_variance: Optional[np.ndarray] = None):
        self.psi_hat_rr = np.asarray(psi_hat_rr, dtype=float)
        self.num_antennas = int(num_antennas)
        self.seed = int(seed)
        self.trial_index = int(trial_index)
        self.error_variance = None if error_variance is None else np.asarray(error_variance, dtype=float)

    def __len__(self) -> int:
        return len(self.psi_hat_rr)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[i] for i in range(*k.indices(len(self)))]
        k = int(k)
        if k < 0:
            k += len(self)
        if not 0 <= k < len(self):
            raise IndexError(f"subcarrier {k} out of range")
        N = self.num_antennas
        matrix = _si_estimate(self.psi_hat_rr[k], N, self.seed, self.trial_index, k)
        if self.error_variance is not None:
            matrix = matrix + _si_error(self.error_variance[k], N, self.seed, self.trial_index, k)
        return matrix

    def with_error(self, error_variance: np.ndarray) -> 'SIChannelBank':
        return SIChannelBank(self.psi_hat_rr, self.num_antennas, self.seed,
                             self.trial_index, error_variance)

    def materialize(self) -> np.ndarray:
        """Stack every subcarrier into a (K, N, N) array."""
        return np.stack([self[k] for k in range(len(self))])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SIChannelBank):
            return NotImplemented
        same_error = (
            (self.error_variance is None and other.error_variance is None)
            or (self.error_variance is not None and other.error_variance is not None
                and np.array_equal(self.error_variance, other.error_variance))
        )
        return (np.array_equal(self.psi_hat_rr, other.psi_hat_rr)
                and self.num_antennas == other.num_antennas
                and self.seed == other.seed
                and self.trial_index == other.trial_index
                and same_error)

    __hash__ = None

    def __repr__(self) -> str:
        return (f"SIChannelBank(K={len(self)}, N={self.num_antennas}, "
                f"seed={self.seed}, trial_index={self.trial_index})")


SIChannels = Union[np.ndarray, SIChannelBank]


def _si_estimate(variance: float, N: int, seed: int, trial_index: int, k: int) -> np.ndarray:
    """Estimated SI matrix of subcarrier k, drawn from its own counter stream."""
    return complex_gaussian(counter_rng(seed, trial_index, LinkRole.RR, k), variance, (N, N))


def _si_error(variance: float, N: int, seed: int, trial_index: int, k: int) -> np.ndarray:
    """SI estimation error of subcarrier k; the stream differs from the estimate's."""
    return complex_gaussian(counter_rng(seed, trial_index, LinkRole.RR_ERR, k), variance, (N, N))


@dataclass(eq=False)
class ChannelSet(ArrayRecord):
    """One realization of every estimated channel.

    Shapes: ``h_hat_sr`` and ``h_hat_rd`` are (L, K, N), ``h_hat_sd`` is
    (L, L, K), ``H_hat_rr`` holds K matrices of shape (N, N) either as a
    (K, N, N) array or as a lazy ``SIChannelBank``.
    """

    h_hat_sr: np.ndarray
    h_hat_rd: np.ndarray
    h_hat_sd: np.ndarray
    H_hat_rr: SIChannels
    error_variances: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def num_pairs(self) -> int:
        return self.h_hat_sr.shape[0]

    @property
    def num_subcarriers(self) -> int:
        return self.h_hat_sr.shape[1]

    @property
    def num_antennas(self) -> int:
        return self.h_hat_sr.shape[2]


@dataclass(eq=False)
class TrueChannelSet(ArrayRecord):
    """Channels h = h_hat + h_tilde; only used for validation and demos."""

    h_sr: np.ndarray
    h_rd: np.ndarray
    h_sd: np.ndarray
    H_rr: SIChannels


def _vector_channels(variances: np.ndarray, N: int, seed: int, trial_index: int,
                     role: LinkRole) -> np.ndarray:
    """(L, K, N) relay-side vectors, one counter stream per (pair, subcarrier)."""
    L, K = variances.shape
    out = np.empty((L, K, N), dtype=complex)
    for i in range(L):
        for k in range(K):
            rng = counter_rng(seed, trial_index, role, i, k)
            out[i, k] = complex_gaussian(rng, variances[i, k], N)
    return out


def _scalar_channels(variances: np.ndarray, seed: int, trial_index: int,
                     role: LinkRole) -> np.ndarray:
    """(L, L, K) direct-link scalars for every (destination, source, subcarrier)."""
    L, _, K = variances.shape
    out = np.empty((L, L, K), dtype=complex)
    for i in range(L):
        for j in range(L):
            for k in range(K):
                rng = counter_rng(seed, trial_index, role, i, j, k)
                out[i, j, k] = complex_gaussian(rng, variances[i, j, k], 1)[0]
    return out


def sample_channels(config: SystemConfig, seed: int, trial_index: int,
                    lazy_si: bool = False) -> ChannelSet:
    """Draw one realization of every estimated channel.

    Entries are CN(0, psi_hat) for their link. With ``lazy_si`` the SI
    matrices are regenerated per subcarrier on access instead of stored.
    """
    N = config.num_antennas
    logger.debug(f"Sampling channels: seed={seed}, trial={trial_index}, N={N}, lazy_si={lazy_si}")

    h_hat_sr = _vector_channels(config.psi_hat_sr, N, seed, trial_index, LinkRole.SR)
    h_hat_rd = _vector_channels(config.psi_hat_rd, N, seed, trial_index, LinkRole.RD)
    h_hat_sd = _scalar_channels(config.psi_hat_sd, seed, trial_index, LinkRole.SD)

    bank = SIChannelBank(config.psi_hat_rr, N, seed, trial_index)
    H_hat_rr: SIChannels = bank if lazy_si else bank.materialize()

    return ChannelSet(
        h_hat_sr=h_hat_sr,
        h_hat_rd=h_hat_rd,
        h_hat_sd=h_hat_sd,
        H_hat_rr=H_hat_rr,
        error_variances={
            'sr': np.array(config.sigma2_e_sr),
            'rd': np.array(config.sigma2_e_rd),
            'sd': np.array(config.sigma2_e_sd),
            'rr': np.array(config.sigma2_e_rr),
        },
    )


def sample_true_channels(channels: ChannelSet, config: SystemConfig, seed: int,
                         trial_index: int) -> TrueChannelSet:
    """Add independent CN(0, sigma_e^2) estimation errors to the estimates."""
    N = channels.num_antennas
    h_sr = channels.h_hat_sr + _vector_channels(config.sigma2_e_sr, N, seed, trial_index, LinkRole.SR_ERR)
    h_rd = channels.h_hat_rd + _vector_channels(config.sigma2_e_rd, N, seed, trial_index, LinkRole.RD_ERR)
    h_sd = channels.h_hat_sd + _scalar_channels(config.sigma2_e_sd, seed, trial_index, LinkRole.SD_ERR)

    if isinstance(channels.H_hat_rr, SIChannelBank):
        H_rr: SIChannels = channels.H_hat_rr.with_error(config.sigma2_e_rr)
    else:
        H_rr = np.stack([
            channels.H_hat_rr[k] + _si_error(config.sigma2_e_rr[k], N, seed, trial_index, k)
            for k in range(len(channels.H_hat_rr))
        ])

    return TrueChannelSet(h_sr=h_sr, h_rd=h_rd, h_sd=h_sd, H_rr=H_rr)
