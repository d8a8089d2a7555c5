"""Classical surrogate of a state pair and an observable.

From spectral decompositions rho = sum_i p_i |a_i><a_i| and
sigma = sum_j q_j |b_j><b_j| build the joint arrays

    P_ij = p_i |<b_j|a_i>|^2
    Q_ij = q_j |<b_j|a_i>|^2
    Theta_ij = <a_i|theta|b_j> / <a_i|b_j>   (0 on vanishing overlap)

which reproduce the quantum means exactly, bound the quantum second
moments from below, and whose KL divergences equal the quantum relative
entropies.  This makes the uncertainty bound checkable link by link:

    U >= classical uncertainty of (P, Q, Theta) >= f(Dsym(P, Q))

with U computed from direct traces, never through the surrogate.

Inside degenerate eigenspaces the arrays depend on the (deterministic)
eigenbasis convention; U, the divergences and the bound do not, and the
inequalities hold for any orthonormal choice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import uncertainty_bound
from .classical import MEAN_GAP, discrete_kl
from .divergences import symmetric_relative_entropy
from .errors import DimensionMismatch, EqualMeans, InvariantViolation
from .hermitian import DensityMatrix, Observable, expectation, variance

OVERLAP_CUTOFF = 1e-10
# slack on every inequality of the chain: a violation must exceed this
# to count, absorbing roundoff on both sides
GAP_TOL = 1e-9
_MEAN_CHECK = 1e-10
_SUM_TOL = 1e-10
_VAR_CLAMP = 1e-12


@dataclass(frozen=True)
class SurrogateDistribution:
    """Joint arrays P, Q and complex values Theta, indexed by the two
    eigenbases (row: first state, column: second state)."""

    p: np.ndarray
    q: np.ndarray
    theta: np.ndarray

    @property
    def dim_pair(self) -> tuple[int, int]:
        return self.p.shape

    def moments(self) -> tuple[complex, complex, float, float]:
        """(mean under P, mean under Q, second abs moment under P,
        second abs moment under Q)."""
        abs_sq = self.theta.real**2 + self.theta.imag**2
        return (
            complex(np.sum(self.p * self.theta)),
            complex(np.sum(self.q * self.theta)),
            float(np.sum(self.p * abs_sq)),
            float(np.sum(self.q * abs_sq)),
        )


def build_surrogate(
    rho: DensityMatrix, sigma: DensityMatrix, theta: Observable
) -> SurrogateDistribution:
    """Assemble (P, Q, Theta) and verify the mean identities."""
    if not (rho.dim == sigma.dim == theta.dim):
        raise DimensionMismatch(
            f"dims differ: rho {rho.dim}, sigma {sigma.dim}, theta {theta.dim}"
        )
    va = rho.spectral().eigenvectors
    vb = sigma.spectral().eigenvectors
    overlaps = va.conj().T @ vb
    weights = overlaps.real**2 + overlaps.imag**2
    p_joint = rho.spectral().eigenvalues[:, None] * weights
    q_joint = sigma.spectral().eigenvalues[None, :] * weights
    for name, joint in (("P", p_joint), ("Q", q_joint)):
        if abs(joint.sum() - 1.0) > _SUM_TOL:
            raise InvariantViolation(
                f"surrogate {name} sums to {joint.sum():.15g}"
            )
    numerators = va.conj().T @ theta.matrix @ vb
    keep = np.abs(overlaps) > OVERLAP_CUTOFF
    theta_joint = np.where(keep, numerators / np.where(keep, overlaps, 1.0), 0.0)
    s = SurrogateDistribution(p=p_joint, q=q_joint, theta=theta_joint)
    mean_p, mean_q, _, _ = s.moments()
    for label, mean, state in (("P", mean_p, rho), ("Q", mean_q, sigma)):
        direct = expectation(state, theta)
        if abs(mean - direct) > _MEAN_CHECK:
            raise InvariantViolation(
                f"surrogate mean under {label} misses the trace by "
                f"{abs(mean - direct):.3e}"
            )
    return s


def quantum_uncertainty(
    rho: DensityMatrix, sigma: DensityMatrix, theta: Observable
) -> float:
    """(Var_rho + Var_sigma) / ((1/2)(mean difference)^2), from direct
    traces; symmetric in the two states."""
    gap = expectation(rho, theta) - expectation(sigma, theta)
    if abs(gap) <= MEAN_GAP:
        raise EqualMeans(f"means differ by {abs(gap):.3e} <= {MEAN_GAP:.0e}")
    return (variance(rho, theta) + variance(sigma, theta)) / (0.5 * gap * gap)


def classical_uncertainty(s: SurrogateDistribution) -> float:
    """Same functional on the surrogate arrays (complex-mean form)."""
    mean_p, mean_q, second_p, second_q = s.moments()
    gap = abs(mean_p - mean_q)
    if gap <= MEAN_GAP:
        raise EqualMeans(f"means differ by {gap:.3e} <= {MEAN_GAP:.0e}")
    var_p = second_p - abs(mean_p) ** 2
    var_q = second_q - abs(mean_q) ** 2
    if -_VAR_CLAMP <= var_p < 0.0:
        var_p = 0.0
    if -_VAR_CLAMP <= var_q < 0.0:
        var_q = 0.0
    return (var_p + var_q) / (0.5 * gap * gap)


def surrogate_divergences(s: SurrogateDistribution) -> tuple[float, float]:
    """(D(P|Q), D(Q|P)) over the joint cells, computed as plain
    discrete KL sums, independent of the double-basis formula."""
    return discrete_kl(s.p, s.q), discrete_kl(s.q, s.p)


@dataclass(frozen=True)
class UncertaintyReport:
    """Everything the bound chain needs for one (rho, sigma, theta)."""

    u_quantum: float
    u_classical: float
    s_tilde: float
    kl_pq: float
    kl_qp: float
    bound: float

    @property
    def margin(self) -> float:
        """U minus the bound; non-negative up to roundoff."""
        return self.u_quantum - self.bound


def chain_slack(reference: float) -> float:
    """Tolerance for one chain link: 1e-9, relative once the compared
    values exceed 1.  Both uncertainties diverge like 1/gap^2 as the
    means approach, so a fixed absolute slack would flag pure roundoff
    on large-value draws."""
    return GAP_TOL * max(1.0, abs(reference))


def uncertainty_report(
    rho: DensityMatrix, sigma: DensityMatrix, theta: Observable
) -> UncertaintyReport:
    """Assemble the full chain and verify each link.

    Raises InvariantViolation if any of U >= classical uncertainty,
    classical uncertainty >= f(Dsym), or U >= f(s_tilde) fails beyond
    the chain slack; EqualMeans when the uncertainty is undefined.
    """
    s = build_surrogate(rho, sigma, theta)
    u_quantum = quantum_uncertainty(rho, sigma, theta)
    u_classical = classical_uncertainty(s)
    kl_pq, kl_qp = surrogate_divergences(s)
    s_tilde = symmetric_relative_entropy(rho, sigma)
    bound = 0.0 if math.isinf(s_tilde) else uncertainty_bound(s_tilde)
    if u_quantum < u_classical - chain_slack(u_classical):
        raise InvariantViolation(
            f"quantum uncertainty {u_quantum:.17g} below classical "
            f"{u_classical:.17g}"
        )
    d_sym = 0.5 * (kl_pq + kl_qp)
    surrogate_bound = 0.0 if math.isinf(d_sym) else uncertainty_bound(d_sym)
    if u_classical < surrogate_bound - chain_slack(surrogate_bound):
        raise InvariantViolation(
            f"classical uncertainty {u_classical:.17g} below bound "
            f"{surrogate_bound:.17g}"
        )
    if u_quantum < bound - chain_slack(bound):
        raise InvariantViolation(
            f"uncertainty {u_quantum:.17g} violates the bound {bound:.17g}"
        )
    return UncertaintyReport(
        u_quantum=u_quantum,
        u_classical=u_classical,
        s_tilde=s_tilde,
        kl_pq=kl_pq,
        kl_qp=kl_qp,
        bound=bound,
    )
