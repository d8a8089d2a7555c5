"""Quantum entropies and divergences.

Relative entropy is evaluated through the double-basis overlap formula

    S(rho||sigma) = sum_i p_i ln p_i - sum_ij |<q_j|p_i>|^2 p_i ln q_j

on the two spectral decompositions, not by subtracting matrix
logarithms.  Support handling: eigenvalues at or below 1e-12 count as
zero, and the value is +inf when more than 1e-9 of some kept
eigenvector's overlap mass falls outside the second state's support.

All divergence values are extended reals: non-negative floats or
math.inf.  Roundoff negatives in [-1e-10, 0) are clamped to zero;
anything more negative raises, since it would falsify a theorem.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch, InvariantViolation
from .hermitian import SUPPORT_CUTOFF, DensityMatrix, SpectralDecomposition, as_operator

# tolerated overlap-mass leak outside the support before declaring +inf
LEAK_TOL = 1e-9
_CLAMP = 1e-10


def clamp_nonnegative(value: float, what: str = "divergence") -> float:
    """Extended-real hygiene: [-1e-10, 0) becomes 0, below that raises."""
    if value >= 0.0:
        return value
    if value >= -_CLAMP:
        return 0.0
    raise InvariantViolation(f"{what} is negative beyond roundoff: {value:.3e}")


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-sum lam ln lam over eigenvalues above the support cutoff."""
    lam = rho.spectral().eigenvalues
    kept = lam[lam > SUPPORT_CUTOFF]
    return clamp_nonnegative(float(-np.sum(kept * np.log(kept))), "entropy")


def _overlap_weights(
    spec_a: SpectralDecomposition, spec_b: SpectralDecomposition
) -> np.ndarray:
    """w[i, j] = |<b_j|a_i>|^2 for the two eigenbases."""
    o = spec_b.eigenvectors.conj().T @ spec_a.eigenvectors
    return (o.real * o.real + o.imag * o.imag).T


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """S(rho||sigma); +inf when rho's support leaves sigma's."""
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"state dims differ: {rho.dim} vs {sigma.dim}")
    p = rho.spectral().eigenvalues
    q = sigma.spectral().eigenvalues
    w = _overlap_weights(rho.spectral(), sigma.spectral())
    p_kept = p > SUPPORT_CUTOFF
    q_kept = q > SUPPORT_CUTOFF
    if not np.all(q_kept):
        mass_inside = w[:, q_kept].sum(axis=1)
        if np.any(mass_inside[p_kept] < 1.0 - LEAK_TOL):
            return math.inf
    pk = p[p_kept]
    own = float(np.sum(pk * np.log(pk)))
    cross = float(pk @ w[np.ix_(p_kept, q_kept)] @ np.log(q[q_kept]))
    return clamp_nonnegative(own - cross, "relative entropy")


def symmetric_relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """(S(rho||sigma) + S(sigma||rho)) / 2; +inf if either side is."""
    return 0.5 * (relative_entropy(rho, sigma) + relative_entropy(sigma, rho))


def dephase(rho: DensityMatrix, basis: SpectralDecomposition) -> DensityMatrix:
    """Kill the off-diagonal part of rho in the given eigenbasis."""
    if rho.dim != basis.dim:
        raise DimensionMismatch(f"state dim {rho.dim} != basis dim {basis.dim}")
    v = basis.eigenvectors
    populations = np.real(np.diagonal(v.conj().T @ rho.matrix @ v))
    return DensityMatrix((v * populations) @ v.conj().T)


def coherence(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Relative entropy of coherence of rho in sigma's eigenbasis:
    S(dephased rho) - S(rho)."""
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"state dims differ: {rho.dim} vs {sigma.dim}")
    dephased = dephase(rho, sigma.spectral())
    return clamp_nonnegative(
        von_neumann_entropy(dephased) - von_neumann_entropy(rho), "coherence"
    )


def classical_symmetric_divergence(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """The coherence-free component of the symmetric divergence:
    [S(dephase(rho)||sigma) + S(dephase(sigma)||rho)] / 2, each state
    dephased in the other's eigenbasis."""
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"state dims differ: {rho.dim} vs {sigma.dim}")
    rho_deph = dephase(rho, sigma.spectral())
    sigma_deph = dephase(sigma, rho.spectral())
    return 0.5 * (
        relative_entropy(rho_deph, sigma) + relative_entropy(sigma_deph, rho)
    )


def unitary_conjugate(rho: DensityMatrix, unitary) -> DensityMatrix:
    """U rho U^dag as a validated state."""
    u = as_operator(unitary)
    if u.shape[0] != rho.dim:
        raise DimensionMismatch(f"unitary dim {u.shape[0]} != state dim {rho.dim}")
    return DensityMatrix(u @ rho.matrix @ u.conj().T)
