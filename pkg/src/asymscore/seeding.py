"""Deterministic seed handling.

Every stochastic routine in this package takes an explicit seed and
draws from a locally constructed :class:`numpy.random.Generator`
(PCG64).  Nothing touches numpy's global RNG state, so two calls with
the same seed produce identical output regardless of what ran before.

Nested computations (one backtest spawning many model fits, say) need
their own independent streams.  :func:`derive_seed` mixes a base seed
with a sequence of string/integer labels through BLAKE2b and returns a
64-bit child seed.  The mapping is pure arithmetic on the inputs, so it
is stable across processes, platforms and package versions.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["as_generator", "derive_seed"]


def as_generator(seed: int | np.random.Generator) -> np.random.Generator:
    """Return a Generator for `seed`, passing Generators through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    if not isinstance(seed, (int, np.integer)):
        raise ValueError(f"seed must be an int or numpy Generator, got {type(seed).__name__}")
    return np.random.default_rng(int(seed))


def derive_seed(base: int, *parts: str | int) -> int:
    """Derive a child seed from `base` and a sequence of labels.

    Parameters
    ----------
    base : int
        Parent seed.
    *parts : str or int
        Labels identifying the child stream, e.g. ``("fit", vintage,
        model_id)``.  Distinct label sequences give independent seeds.

    Returns
    -------
    int
        Seed in ``[0, 2**64)``.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(base)).encode())
    for part in parts:
        h.update(b"|")
        h.update(str(part).encode())
    return int.from_bytes(h.digest(), "big")
