"""Seeded random streams.

All randomness goes through ``numpy.random.Generator`` over the PCG64 bit
generator (O'Neill's permuted congruential generator, 128-bit state), so a
seed fully determines every right-hand side and every sampled point.
"""
from __future__ import annotations

import numpy as np

PRNG_NAME = "PCG64"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_rhs(n: int, seed: int) -> np.ndarray:
    """Real right-hand side with entries uniform on [0, 1), stored as complex."""
    return make_rng(seed).random(n).astype(np.complex128)


def random_complex_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)
