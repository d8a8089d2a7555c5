"""CPTP channels and the bound's behavior under them.

A channel only ever shrinks the symmetric divergence (data processing),
so the bound f evaluated at the *initial* divergence stays valid for
the evolved pair at every later step.  With a fixed point rho* as the
reference state this gives a time-independent floor for the uncertainty
of any observable along the whole trajectory.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import uncertainty_bound
from .divergences import symmetric_relative_entropy
from .errors import (
    DimensionMismatch,
    EqualMeans,
    IncompleteKraus,
    InvariantViolation,
    NotFixedPoint,
)
from .hermitian import DensityMatrix, Observable, SpectralDecomposition, as_operator
from .surrogate import GAP_TOL, quantum_uncertainty

_COMPLETENESS_TOL = 1e-10
_FIXED_POINT_TOL = 1e-8


class KrausChannel:
    """A CPTP map given by operators K with sum K^dag K = identity."""

    __slots__ = ("_operators", "_dim")

    def __init__(self, operators) -> None:
        ops = [as_operator(k) for k in operators]
        if not ops:
            raise IncompleteKraus("a channel needs at least one operator")
        dim = ops[0].shape[0]
        if any(k.shape[0] != dim for k in ops):
            raise DimensionMismatch("all operators must share one dimension")
        total = sum(k.conj().T @ k for k in ops)
        residual = float(np.max(np.abs(total - np.eye(dim))))
        if residual > _COMPLETENESS_TOL:
            raise IncompleteKraus(
                f"sum K^dag K misses the identity by {residual:.3e} "
                f"> {_COMPLETENESS_TOL:.0e}"
            )
        self._operators = tuple(ops)
        self._dim = dim

    @property
    def operators(self) -> tuple:
        return self._operators

    @property
    def dim(self) -> int:
        return self._dim

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        if rho.dim != self._dim:
            raise DimensionMismatch(
                f"state dim {rho.dim} != channel dim {self._dim}"
            )
        out = sum(k @ rho.matrix @ k.conj().T for k in self._operators)
        return DensityMatrix(out)


def apply_channel(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    return ch.apply(rho)


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel([np.eye(dim)])


def depolarizing(p: float) -> KrausChannel:
    """Qubit depolarizer: keeps the state with weight 1-p and replaces
    it by the maximally mixed state with weight p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing strength must be in [0, 1], got {p}")
    eye = np.eye(2)
    pauli_x = np.array([[0.0, 1.0], [1.0, 0.0]])
    pauli_y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    pauli_z = np.array([[1.0, 0.0], [0.0, -1.0]])
    return KrausChannel(
        [
            np.sqrt(1.0 - 0.75 * p) * eye,
            np.sqrt(0.25 * p) * pauli_x,
            np.sqrt(0.25 * p) * pauli_y,
            np.sqrt(0.25 * p) * pauli_z,
        ]
    )


def amplitude_damping(gamma: float) -> KrausChannel:
    """Qubit decay toward the first basis state with rate gamma."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"damping rate must be in [0, 1], got {gamma}")
    return KrausChannel(
        [
            np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]]),
            np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]]),
        ]
    )


def dephasing_channel(basis: SpectralDecomposition) -> KrausChannel:
    """Full dephasing: projectors onto the given eigenbasis."""
    v = basis.eigenvectors
    return KrausChannel(
        [np.outer(v[:, j], v[:, j].conj()) for j in range(basis.dim)]
    )


def dpi_margin(
    ch: KrausChannel, rho: DensityMatrix, sigma: DensityMatrix
) -> tuple[float, float]:
    """(divergence before, divergence after); after <= before + 1e-10
    or the data processing inequality failed."""
    before = symmetric_relative_entropy(rho, sigma)
    after = symmetric_relative_entropy(ch.apply(rho), ch.apply(sigma))
    if after > before + 1e-10:
        raise InvariantViolation(
            f"divergence grew under the channel: {before:.17g} -> {after:.17g}"
        )
    return before, after


@dataclass(frozen=True)
class FixedPointReport:
    """Uncertainty margins along an iterated channel trajectory.

    ``margins`` holds (u(t) - bound) / max(1, bound) for t = 0..steps;
    entries are None where the two means coincided and u is undefined.
    """

    bound: float
    margins: list = field(default_factory=list)

    @property
    def evaluated(self) -> int:
        return sum(1 for m in self.margins if m is not None)

    @property
    def skipped(self) -> int:
        return sum(1 for m in self.margins if m is None)

    @property
    def min_margin(self) -> float:
        present = [m for m in self.margins if m is not None]
        return min(present) if present else float("inf")

    @property
    def holds(self) -> bool:
        return self.min_margin >= -GAP_TOL


def fixed_point_bound(
    ch: KrausChannel,
    rho0: DensityMatrix,
    rho_star: DensityMatrix,
    theta: Observable,
    steps: int,
) -> FixedPointReport:
    """Iterate the channel from rho0 and check, at every step, the
    time-constant floor f(divergence(rho0, rho*)) on the uncertainty
    between the current state and the fixed point."""
    drift = float(np.max(np.abs(ch.apply(rho_star).matrix - rho_star.matrix)))
    if drift > _FIXED_POINT_TOL:
        raise NotFixedPoint(
            f"channel moves the reference state by {drift:.3e} "
            f"> {_FIXED_POINT_TOL:.0e}"
        )
    s0 = symmetric_relative_entropy(rho0, rho_star)
    bound = 0.0 if math.isinf(s0) else uncertainty_bound(s0)
    margins = []
    state = rho0
    for _ in range(steps + 1):
        try:
            u = quantum_uncertainty(state, rho_star, theta)
        except EqualMeans:
            margins.append(None)
        else:
            margin = (u - bound) / max(1.0, bound)
            if margin < -GAP_TOL:
                raise InvariantViolation(
                    f"uncertainty {u:.17g} fell below the fixed-point "
                    f"floor {bound:.17g}"
                )
            margins.append(margin)
        state = ch.apply(state)
    return FixedPointReport(bound=bound, margins=margins)
