"""Seeded random generators for states, observables and channels.

Everything takes a numpy Generator so call sites control determinism;
``default_rng(seed)`` pins the bit generator (PCG64) so that a seed
means the same stream across platforms and releases.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch
from .hermitian import DensityMatrix, Observable


def default_rng(seed) -> np.random.Generator:
    """The package-wide bit generator, fixed to PCG64.

    Accepts anything a SeedSequence does: an int or a list of ints
    (used for per-check substreams).
    """
    return np.random.Generator(np.random.PCG64(seed))


def _complex_gaussian(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (
        rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    ) / np.sqrt(2.0)


def random_density(rng: np.random.Generator, dim: int) -> DensityMatrix:
    """Ginibre draw G G^dag / tr: full support almost surely."""
    g = _complex_gaussian(rng, dim, dim)
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Orthonormalized complex Gaussian with the QR phase fixed so the
    distribution is Haar."""
    q, r = np.linalg.qr(_complex_gaussian(rng, dim, dim))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_observable(
    rng: np.random.Generator, dim: int, scale: float = 1.0
) -> Observable:
    """Hermitian part of a scaled complex Gaussian matrix."""
    g = scale * _complex_gaussian(rng, dim, dim)
    return Observable((g + g.conj().T) / 2.0)


def random_kraus(rng: np.random.Generator, dim: int, n_ops: int) -> list[np.ndarray]:
    """A random channel as slices of a Haar-style isometry, so the
    completeness sum is the identity up to roundoff."""
    if n_ops < 1:
        raise DimensionMismatch(f"need at least one operator, got {n_ops}")
    g = _complex_gaussian(rng, dim * n_ops, dim)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    iso = q * (d / np.abs(d))
    return [np.ascontiguousarray(iso[k * dim : (k + 1) * dim, :]) for k in range(n_ops)]
