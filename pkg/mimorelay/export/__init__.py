"""
Array dumps for cross-implementation comparison
"""

from .array_dump import dump_array, dump_channels, dump_relay_covariances, load_array

__all__ = ['dump_array', 'dump_channels', 'dump_relay_covariances', 'load_array']
