"""Seeded random draws shared by every randomized construction."""

import numpy as np
from numpy.typing import NDArray


def make_rng(seed: int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def complex_gaussian(rng: np.random.Generator, *shape: int) -> NDArray[np.complex128]:
    """Standard complex Gaussian samples (unit variance)"""
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    return np.asarray((real + 1j * imag) / np.sqrt(2.0), dtype=np.complex128)


def unit_complex(rng: np.random.Generator) -> complex:
    """Uniform point on the unit circle"""
    angle = rng.uniform(0.0, 2.0 * np.pi)
    return complex(np.cos(angle), np.sin(angle))


def child_seed(rng: np.random.Generator) -> int:
    """Draw an integer seed for a sub-computation"""
    return int(rng.integers(0, 2**31 - 1))
