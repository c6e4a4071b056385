"""
Array dumps of channel realizations and covariance matrices

Two layouts, both row-major:

- ``json``: ``{"shape": [...], "dtype": "complex128", "data": [[re, im], ...]}``
- ``bin``: interleaved re/im little-endian float64, with a ``<file>.json``
  sidecar holding shape and dtype.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Iterable, Tuple, Union

import numpy as np

from ..core.beamform import FilterSet
from ..core.channel import ChannelSet
from ..core.config import SystemConfig
from ..core.finite_rate import covariance_relay

logger = logging.getLogger(__name__)

DUMP_FORMATS = ('json', 'bin')
LITTLE_ENDIAN_COMPLEX = np.dtype('<c16')

PathLike = Union[str, Path]


def _sidecar(path: Path) -> Path:
    return path.with_name(path.name + '.json')


def _write_json(path: Path, shape: Tuple[int, ...], blocks: Iterable[np.ndarray]) -> None:
    data = []
    for block in blocks:
        flat = np.asarray(block, dtype=complex).ravel()
        data.extend([float(z.real), float(z.imag)] for z in flat)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump({'shape': list(shape), 'dtype': 'complex128', 'data': data}, f)


def _write_bin(path: Path, shape: Tuple[int, ...], blocks: Iterable[np.ndarray]) -> None:
    with open(path, 'wb') as f:
        for block in blocks:
            np.ascontiguousarray(block, dtype=LITTLE_ENDIAN_COMPLEX).tofile(f)
    with open(_sidecar(path), 'w', encoding='utf-8') as f:
        json.dump({'shape': list(shape), 'dtype': 'complex128', 'byte_order': 'little'}, f)


def dump_blocks(blocks: Iterable[np.ndarray], shape: Tuple[int, ...], path: PathLike,
                fmt: str = 'json') -> Path:
    """Write consecutive row-major blocks that together form an array of ``shape``."""
    if fmt not in DUMP_FORMATS:
        raise ValueError(f"Unknown dump format {fmt!r}; expected one of {DUMP_FORMATS}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == 'json':
        _write_json(path, shape, blocks)
    else:
        _write_bin(path, shape, blocks)
    logger.debug(f"Dumped array of shape {shape} to {path}")
    return path


def dump_array(array: np.ndarray, path: PathLike, fmt: str = 'json') -> Path:
    array = np.asarray(array)
    return dump_blocks([array], array.shape, path, fmt)


def load_array(path: PathLike) -> np.ndarray:
    """Read an array written by ``dump_array`` in either layout."""
    path = Path(path)
    if path.suffix == '.json':
        with open(path, 'r', encoding='utf-8') as f:
            payload = json.load(f)
        data = np.asarray(payload['data'], dtype=float).reshape(-1, 2)
        return (data[:, 0] + 1j * data[:, 1]).reshape(payload['shape'])
    with open(_sidecar(path), 'r', encoding='utf-8') as f:
        meta = json.load(f)
    return np.fromfile(path, dtype=LITTLE_ENDIAN_COMPLEX).astype(complex).reshape(meta['shape'])


def dump_channels(channels: ChannelSet, directory: PathLike, fmt: str = 'json') -> Dict[str, str]:
    """Write every estimated channel of a realization; SI matrices are streamed per subcarrier."""
    directory = Path(directory)
    suffix = 'json' if fmt == 'json' else 'bin'
    written = {}
    for name in ('h_hat_sr', 'h_hat_rd', 'h_hat_sd'):
        written[name] = str(dump_array(getattr(channels, name), directory / f"{name}.{suffix}", fmt))

    K, N = channels.num_subcarriers, channels.num_antennas
    si_blocks = (channels.H_hat_rr[k] for k in range(K))
    written['H_hat_rr'] = str(dump_blocks(si_blocks, (K, N, N), directory / f"H_hat_rr.{suffix}", fmt))
    logger.info(f"Channel realization dumped to {directory}")
    return written


def dump_relay_covariances(channels: ChannelSet, filters: FilterSet, config: SystemConfig,
                           directory: PathLike, fmt: str = 'json') -> Dict[str, str]:
    """Write the relay interference-plus-noise covariance of every (pair, subcarrier)."""
    directory = Path(directory)
    suffix = 'json' if fmt == 'json' else 'bin'
    written = {}
    for i in range(config.num_pairs):
        for k in range(config.num_subcarriers):
            name = f"sigma_r_pair{i}_sub{k}"
            matrix = covariance_relay(i, k, channels, filters, config)
            written[name] = str(dump_array(matrix, directory / f"{name}.{suffix}", fmt))
    logger.info(f"Relay covariances dumped to {directory}")
    return written
