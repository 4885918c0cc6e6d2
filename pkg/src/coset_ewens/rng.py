"""Counter-based deterministic random numbers (splitmix64).

Every draw is a pure function of (seed, stream index), so parallel
consumers stay reproducible regardless of scheduling: worker w reading
indices i simply computes ``uniform01(seed, i)``.  Integer arithmetic is
exact and the float conversion uses the top 53 bits, so sequences are
identical across platforms.
"""
from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 2.0**-53


def mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def raw64(seed: int, index: int) -> int:
    """The ``index``-th 64-bit word of the stream for ``seed``."""
    return mix64((seed + (index + 1) * _GOLDEN) & _MASK)


def uniform01(seed: int, index: int) -> float:
    """Uniform draw in [0, 1) at stream position ``index``."""
    return (raw64(seed, index) >> 11) * _INV_2_53


def uniform01_array(seed: int, indices: np.ndarray) -> np.ndarray:
    """Vectorized :func:`uniform01` over a uint64 index array."""
    z = (np.uint64(seed & _MASK) + (indices.astype(np.uint64) + np.uint64(1)) * np.uint64(_GOLDEN))
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53
