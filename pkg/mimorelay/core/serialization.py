"""
Helpers for dataclasses_json records that carry numpy arrays.
"""

import dataclasses
from typing import Any, Dict

import numpy as np
from dataclasses_json import config


def _encode_array(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    return value


def _decode_float_array(value: Any) -> np.ndarray:
    return np.asarray(value, dtype=float)


def _decode_bool_array(value: Any) -> np.ndarray:
    return np.asarray(value, dtype=bool)


def _encode_array_dict(value: Dict[str, np.ndarray]) -> Dict[str, Any]:
    return {key: _encode_array(arr) for key, arr in value.items()}


def _decode_array_dict(value: Dict[str, Any]) -> Dict[str, np.ndarray]:
    return {key: np.asarray(arr, dtype=float) for key, arr in value.items()}


def array_field(dtype: str = "float", **kwargs):
    """Dataclass field holding an ndarray that serializes as nested lists."""
    decoder = _decode_bool_array if dtype == "bool" else _decode_float_array
    return dataclasses.field(
        metadata=config(encoder=_encode_array, decoder=decoder), **kwargs
    )


def array_dict_field(**kwargs):
    """Dataclass field holding a ``Dict[str, ndarray]``."""
    kwargs.setdefault("default_factory", dict)
    return dataclasses.field(
        metadata=config(encoder=_encode_array_dict, decoder=_decode_array_dict), **kwargs
    )


def values_equal(a: Any, b: Any) -> bool:
    """Exact equality that understands ndarrays, dicts and lists of them."""
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        a_arr, b_arr = np.asarray(a), np.asarray(b)
        if a_arr.shape != b_arr.shape:
            return False
        if a_arr.dtype.kind in "fc" or b_arr.dtype.kind in "fc":
            return bool(np.array_equal(a_arr, b_arr, equal_nan=True))
        return bool(np.array_equal(a_arr, b_arr))
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(values_equal(a[k], b[k]) for k in a)
    if isinstance(a, (list, tuple)) and isinstance(b, (list, tuple)):
        return len(a) == len(b) and all(values_equal(x, y) for x, y in zip(a, b))
    return a == b


class ArrayRecord:
    """Mixin giving array-holding dataclasses a usable ``==``.

    Subclasses must be declared with ``@dataclass(eq=False)``.
    """

    def __eq__(self, other: object) -> bool:
        if type(self) is not type(other):
            return NotImplemented
        return all(
            values_equal(getattr(self, f.name), getattr(other, f.name))
            for f in dataclasses.fields(self)
        )

    __hash__ = None
