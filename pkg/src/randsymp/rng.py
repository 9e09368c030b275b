"""Seeded random streams.

All randomness in the package goes through :func:`stream`, which returns a
``numpy.random.Generator`` backed by PCG64.  Sub-streams are derived from the
user seed with a ``SeedSequence`` spawn key built from a purpose label and an
integer index, so distinct consumers never share state and every draw is
reproducible from ``(seed, purpose, index)`` alone.
"""
import zlib

import numpy as np

PURPOSES = ("srft", "gaussian", "test")


def _purpose_id(purpose):
    return zlib.crc32(purpose.encode("utf-8"))


def stream(seed, purpose, index=0):
    """Return an independent PCG64 generator for ``(seed, purpose, index)``."""
    if seed is None:
        raise ValueError("an explicit seed is required")
    seed = int(seed)
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_purpose_id(purpose), int(index)))
    return np.random.Generator(np.random.PCG64(ss))
