"""
MRC receive filters and MRT transmit precoders at the relay.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet
from .errors import ZeroChannelError
from .serialization import ArrayRecord

logger = logging.getLogger(__name__)

NORM_FLOOR = 1e-300


@dataclass(eq=False)
class FilterSet(ArrayRecord):
    """Unit-norm filters, both shaped (L, K, N).

    ``u_r[i, k]`` combines the uplink of pair i on subcarrier k and
    ``v_r[i, k]`` precodes its downlink.
    """

    u_r: np.ndarray
    v_r: np.ndarray


def _normalize(vectors: np.ndarray, link: str) -> np.ndarray:
    norms = np.linalg.norm(vectors, axis=-1)
    zero = np.argwhere(norms < NORM_FLOOR)
    if zero.size:
        i, k = (int(x) for x in zero[0])
        raise ZeroChannelError(i, k, link)
    return vectors / norms[..., None]


def build_mrc_mrt(channels: ChannelSet) -> FilterSet:
    """u = h_sr / ||h_sr||, v = h_rd^H / ||h_rd||."""
    u_r = _normalize(channels.h_hat_sr, 'sr')
    v_r = _normalize(np.conj(channels.h_hat_rd), 'rd')
    return FilterSet(u_r=u_r, v_r=v_r)
