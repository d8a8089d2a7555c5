"""Dense complex-operator foundation.

Validated density matrices and observables, a deterministic Hermitian
eigensolver (cyclic Jacobi, see ``_kernels``), tensor products, partial
traces, operator logarithms on the support, and expectation values.
All functions are pure; the wrapper classes are immutable and safe to
share across threads.

Tolerances used throughout the package:

- ``HERMITIAN_TOL``  max entrywise |M - M^dag| accepted as Hermitian.
- ``PSD_TOL``        most negative eigenvalue accepted (and clamped).
- ``TRACE_TOL``      |tr - 1| accepted for a state.
- ``SUPPORT_CUTOFF`` eigenvalues at or below this count as zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import (
    DimensionMismatch,
    InvariantViolation,
    NotConverged,
    NotHermitian,
    NotPositive,
    TraceNotOne,
)

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-10
SUPPORT_CUTOFF = 1e-12
IMAG_TOL = 1e-10

_MAX_SWEEPS = 64
_PHASE_CUTOFF = 1e-12


def as_operator(m) -> np.ndarray:
    """Coerce to an immutable square complex128 matrix with finite entries."""
    a = np.array(m, dtype=np.complex128, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise InvariantViolation("matrix contains non-finite entries")
    a.flags.writeable = False
    return a


def hermiticity_residual(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def _require_hermitian(m: np.ndarray, what: str) -> None:
    res = hermiticity_residual(m)
    if res > HERMITIAN_TOL:
        raise NotHermitian(
            f"{what} is not Hermitian: max |M - M^dag| = {res:.3e} > {HERMITIAN_TOL:.0e}"
        )


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and phase-fixed orthonormal eigenvectors.

    The first component of each eigenvector with modulus above 1e-12 is
    made real positive, and ties between equal eigenvalues keep the
    order produced by the rotation sequence, so identical inputs give
    bit-identical decompositions.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eig_hermitian(m) -> SpectralDecomposition:
    """Diagonalize a Hermitian matrix with the cyclic Jacobi kernel.

    Convergence is declared when the off-diagonal Frobenius norm drops
    to 1e-14 relative to max(1, ||M||_F).  Raises ``NotHermitian`` for
    inputs beyond tolerance and ``NotConverged`` if the sweep cap is hit
    (which does not happen for valid input at the supported sizes).
    """
    a = as_operator(m)
    _require_hermitian(a, "matrix")
    # exact symmetrization: Hermitian part of the stored entries
    ar = np.ascontiguousarray((a.real + a.real.T) * 0.5)
    ai = np.ascontiguousarray((a.imag - a.imag.T) * 0.5)
    n = a.shape[0]
    vr = np.eye(n)
    vi = np.zeros((n, n))
    scale = float(np.sqrt(np.sum(ar * ar + ai * ai)))
    tol = 1e-14 * max(1.0, scale)
    sweeps = _kernels.jacobi_sweep(ar, ai, vr, vi, tol, _MAX_SWEEPS)
    if sweeps < 0:
        raise NotConverged(
            f"Jacobi sweeps did not reach off-norm {tol:.1e} in {_MAX_SWEEPS} sweeps"
        )
    w = np.diagonal(ar).copy()
    vec = vr + 1j * vi
    order = np.argsort(w, kind="stable")
    w = w[order]
    vec = vec[:, order]
    for col in range(n):
        mags = np.abs(vec[:, col])
        nz = np.nonzero(mags > _PHASE_CUTOFF)[0]
        if nz.size:
            k = nz[0]
            vec[:, col] *= np.conj(vec[k, col]) / mags[k]
    w.flags.writeable = False
    vec.flags.writeable = False
    return SpectralDecomposition(w, vec)


class DensityMatrix:
    """A Hermitian, positive semidefinite, unit-trace operator.

    Construction validates all three invariants and raises
    ``NotHermitian`` / ``NotPositive`` / ``TraceNotOne`` with the
    measured residual.  Eigenvalues in [-1e-10, 0) are treated as
    sampling roundoff: they are clamped to zero and the spectrum is
    renormalized, with the stored matrix rebuilt accordingly.
    """

    __slots__ = ("_matrix", "_spectral")

    def __init__(self, matrix) -> None:
        m = as_operator(matrix)
        _require_hermitian(m, "state")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_TOL:
            raise TraceNotOne(f"trace is {tr:.12g}; |tr - 1| = {abs(tr - 1.0):.3e} > {TRACE_TOL:.0e}")
        spec = eig_hermitian(m)
        lam_min = float(spec.eigenvalues[0])
        if lam_min < -PSD_TOL:
            raise NotPositive(
                f"smallest eigenvalue {lam_min:.3e} < -{PSD_TOL:.0e}; not positive semidefinite"
            )
        if lam_min < 0.0:
            lam = np.where(spec.eigenvalues < 0.0, 0.0, spec.eigenvalues)
            lam = lam / lam.sum()
            lam.flags.writeable = False
            spec = SpectralDecomposition(lam, spec.eigenvectors)
            m = as_operator(spec.reconstruct())
        self._matrix = m
        self._spectral = spec

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def spectral(self) -> SpectralDecomposition:
        return self._spectral

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


class Observable:
    """A Hermitian operator whose mean under a state is tr(rho A)."""

    __slots__ = ("_matrix", "__dict__")

    def __init__(self, matrix) -> None:
        m = as_operator(matrix)
        _require_hermitian(m, "observable")
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @cached_property
    def squared(self) -> np.ndarray:
        sq = self._matrix @ self._matrix
        sq.flags.writeable = False
        return sq

    def __repr__(self) -> str:
        return f"Observable(dim={self.dim})"


def tensor(a, b) -> np.ndarray:
    """Kronecker product; index (i_a, i_b) maps to i_a*dim(b) + i_b."""
    return np.kron(as_operator(a), as_operator(b))


def partial_trace(m, dim_s: int, dim_e: int, keep: str) -> np.ndarray:
    """Trace out one factor of a dim_s x dim_e bipartite operator.

    ``keep`` is "s" (trace out the environment) or "e" (trace out the
    system); the index convention matches ``tensor``.
    """
    a = as_operator(m)
    if dim_s * dim_e != a.shape[0]:
        raise DimensionMismatch(
            f"matrix dim {a.shape[0]} != dim_s*dim_e = {dim_s}*{dim_e}"
        )
    blocks = a.reshape(dim_s, dim_e, dim_s, dim_e)
    if keep == "s":
        return np.trace(blocks, axis1=1, axis2=3)
    if keep == "e":
        return np.trace(blocks, axis1=0, axis2=2)
    raise ValueError(f"keep must be 's' or 'e', got {keep!r}")


def log_on_support(rho: DensityMatrix) -> np.ndarray:
    """Natural log of a state restricted to its support.

    Eigendirections with eigenvalue <= 1e-12 contribute zero; callers
    relying on support conditions must enforce them separately.
    """
    spec = rho.spectral()
    lam = spec.eigenvalues
    logs = np.where(lam > SUPPORT_CUTOFF, np.log(np.maximum(lam, SUPPORT_CUTOFF)), 0.0)
    v = spec.eigenvectors
    return (v * logs) @ v.conj().T


def expectation(state: DensityMatrix, obs: Observable) -> float:
    """tr(rho A), checked to be real to 1e-10."""
    if state.dim != obs.dim:
        raise DimensionMismatch(f"state dim {state.dim} != observable dim {obs.dim}")
    val = complex(np.trace(state.matrix @ obs.matrix))
    if abs(val.imag) > IMAG_TOL:
        raise InvariantViolation(
            f"expectation has imaginary residual {val.imag:.3e} > {IMAG_TOL:.0e}"
        )
    return val.real


def second_moment(state: DensityMatrix, obs: Observable) -> float:
    """tr(rho A^2)."""
    if state.dim != obs.dim:
        raise DimensionMismatch(f"state dim {state.dim} != observable dim {obs.dim}")
    val = complex(np.trace(state.matrix @ obs.squared))
    if abs(val.imag) > IMAG_TOL:
        raise InvariantViolation(
            f"second moment has imaginary residual {val.imag:.3e} > {IMAG_TOL:.0e}"
        )
    return val.real


def variance(state: DensityMatrix, obs: Observable) -> float:
    """tr(rho A^2) - tr(rho A)^2, with roundoff negatives in
    [-1e-12, 0) clamped to zero."""
    v = second_moment(state, obs) - expectation(state, obs) ** 2
    if -1e-12 <= v < 0.0:
        return 0.0
    return v
