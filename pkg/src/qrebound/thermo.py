"""System-environment unitary processes and their entropy bookkeeping.

A process is (rho_s, rho_e, U).  The joint final state is
rho = U (rho_s x rho_e) U^dag; the reference state sigma rebuilds the
final reduced system state next to a fresh environment,
sigma = rho_s' x rho_e.  Entropy production and its dual are the two
divergences between them:

    production = S(rho||sigma)        dual = S(sigma||rho)

Their mean (the symmetric divergence of the pair) feeds the uncertainty
bound for any joint observable.  Choosing ln(rho_e) as the observable
specializes the bound to the entropy flux Phi and the variances of
ln(rho_e) under the old and new environment states (the capacities),
giving the flux/capacity chain checked here.

The dual also equals the average stochastic entropy production of a
four-measurement trajectory: measure sigma in its own eigenbasis,
evolve backward with U^dag, measure in the eigenbasis of
rho_s x rho_e; the reversed protocol starts from rho_s x rho_e.  Both
endpoint measurements use the same environment basis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bounds import divergence_bound, uncertainty_bound
from .classical import discrete_kl
from .divergences import (
    relative_entropy,
    symmetric_relative_entropy,
    unitary_conjugate,
)
from .errors import (
    DimensionMismatch,
    InvariantViolation,
    SupportFailure,
    ZeroFlux,
)
from .hermitian import (
    SUPPORT_CUTOFF,
    DensityMatrix,
    Observable,
    expectation,
    log_on_support,
    partial_trace,
    tensor,
    variance,
)
from .surrogate import UncertaintyReport, chain_slack, uncertainty_report

_UNITARY_TOL = 1e-10
_FLUX_GAP = 1e-9
_DUAL_ROUTE_TOL = 1e-10
_TRAJECTORY_TOL = 1e-8


class ThermoProcess:
    """Initial system and environment states plus the joint unitary."""

    def __init__(self, rho_s: DensityMatrix, rho_e: DensityMatrix, unitary) -> None:
        u = np.array(unitary, dtype=complex)
        joint_dim = rho_s.dim * rho_e.dim
        if u.shape != (joint_dim, joint_dim):
            raise DimensionMismatch(
                f"unitary shape {u.shape} != joint dim {joint_dim}"
            )
        residual = float(np.max(np.abs(u.conj().T @ u - np.eye(joint_dim))))
        if residual > _UNITARY_TOL:
            raise InvariantViolation(
                f"matrix is not unitary: max |U^dag U - I| = {residual:.3e}"
            )
        self.rho_s = rho_s
        self.rho_e = rho_e
        self.unitary = u

    @property
    def dim_s(self) -> int:
        return self.rho_s.dim

    @property
    def dim_e(self) -> int:
        return self.rho_e.dim

    @cached_property
    def initial(self) -> DensityMatrix:
        return DensityMatrix(tensor(self.rho_s.matrix, self.rho_e.matrix))

    @cached_property
    def rho(self) -> DensityMatrix:
        """Joint state after the unitary."""
        return unitary_conjugate(self.initial, self.unitary)

    @cached_property
    def rho_s_prime(self) -> DensityMatrix:
        return DensityMatrix(
            partial_trace(self.rho.matrix, self.dim_s, self.dim_e, keep="s")
        )

    @cached_property
    def rho_e_prime(self) -> DensityMatrix:
        return DensityMatrix(
            partial_trace(self.rho.matrix, self.dim_s, self.dim_e, keep="e")
        )

    @cached_property
    def sigma(self) -> DensityMatrix:
        """Final reduced system state next to a fresh environment."""
        return DensityMatrix(tensor(self.rho_s_prime.matrix, self.rho_e.matrix))


def entropy_production(p: ThermoProcess) -> tuple[float, float]:
    """(production, dual) = (S(rho||sigma), S(sigma||rho)).

    Cross-checks the dual against the rotated-frame route
    S(U^dag sigma U || rho_s x rho_e), which must agree to 1e-10.
    """
    production = relative_entropy(p.rho, p.sigma)
    dual = relative_entropy(p.sigma, p.rho)
    rotated = unitary_conjugate(p.sigma, p.unitary.conj().T)
    dual_route = relative_entropy(rotated, p.initial)
    if math.isinf(dual) != math.isinf(dual_route):
        raise InvariantViolation("dual routes disagree on finiteness")
    if not math.isinf(dual) and abs(dual - dual_route) > _DUAL_ROUTE_TOL:
        raise InvariantViolation(
            f"dual routes differ by {abs(dual - dual_route):.3e} "
            f"> {_DUAL_ROUTE_TOL:.0e}"
        )
    return production, dual


def process_uncertainty(p: ThermoProcess, theta: Observable) -> UncertaintyReport:
    """The full bound chain for a joint observable, with the divergence
    pinned to the mean of production and dual."""
    production, dual = entropy_production(p)
    report = uncertainty_report(p.rho, p.sigma, theta)
    target = 0.5 * (production + dual)
    bound = 0.0 if math.isinf(target) else uncertainty_bound(target)
    if report.u_quantum < bound - chain_slack(bound):
        raise InvariantViolation(
            f"uncertainty {report.u_quantum:.17g} below the "
            f"production-mean bound {bound:.17g}"
        )
    return report


@dataclass(frozen=True)
class FluxCapacityReport:
    """The flux/capacity chain evaluated on one process."""

    flux: float
    capacity_old: float
    capacity_new: float
    u_env: float
    s_tilde_env: float
    production_mean: float
    inverse_bound: float

    @property
    def margins(self) -> tuple[float, float, float, float]:
        """(env bound, monotone step, inverse form, dual-sum) margins,
        each scaled by the bound side so a fixed -1e-9 threshold works
        for small and large values alike."""
        env_bound = uncertainty_bound(self.s_tilde_env)
        mean_bound = uncertainty_bound(self.production_mean)
        return (
            (self.u_env - env_bound) / max(1.0, env_bound),
            (env_bound - mean_bound) / max(1.0, mean_bound),
            (self.production_mean - self.inverse_bound)
            / max(1.0, self.inverse_bound),
            (self.production_mean - self.s_tilde_env)
            / max(1.0, self.s_tilde_env),
        )


def _full_support(state: DensityMatrix) -> bool:
    return bool(np.all(state.spectral().eigenvalues > SUPPORT_CUTOFF))


def flux_capacity_relation(p: ThermoProcess) -> FluxCapacityReport:
    """Entropy flux against the capacities of ln(rho_e).

    Checks the chain

        (cap_old + cap_new) / ((1/2) flux^2)
            >= f(divergence(rho_e', rho_e))
            >= f((production + dual)/2)

    and the inverted form (production + dual)/2 >= B(u_env), plus the
    dual-sum inequality production + dual >= S(rho_e'||rho_e) +
    S(rho_e||rho_e').  Raises SupportFailure unless both environment
    states have full support, ZeroFlux when |flux| <= 1e-9.
    """
    if not _full_support(p.rho_e) or not _full_support(p.rho_e_prime):
        raise SupportFailure(
            "flux relation needs full-support environment states"
        )
    log_env = Observable(log_on_support(p.rho_e))
    flux = expectation(p.rho_e, log_env) - expectation(p.rho_e_prime, log_env)
    if abs(flux) <= _FLUX_GAP:
        raise ZeroFlux(f"entropy flux {flux:.3e} within {_FLUX_GAP:.0e} of zero")
    capacity_old = variance(p.rho_e, log_env)
    capacity_new = variance(p.rho_e_prime, log_env)
    u_env = (capacity_old + capacity_new) / (0.5 * flux * flux)
    s_tilde_env = symmetric_relative_entropy(p.rho_e_prime, p.rho_e)
    production, dual = entropy_production(p)
    production_mean = 0.5 * (production + dual)
    env_bound = uncertainty_bound(s_tilde_env)
    mean_bound = uncertainty_bound(production_mean)
    inverse_bound = divergence_bound(u_env) if u_env > 0.0 else 0.0
    if u_env < env_bound - chain_slack(env_bound):
        raise InvariantViolation(
            f"environment uncertainty {u_env:.17g} below f(divergence) "
            f"{env_bound:.17g}"
        )
    if env_bound < mean_bound - chain_slack(mean_bound):
        raise InvariantViolation(
            "f is not monotone across the divergence ordering: "
            f"{env_bound:.17g} < {mean_bound:.17g}"
        )
    if production_mean < inverse_bound - chain_slack(inverse_bound):
        raise InvariantViolation(
            f"production mean {production_mean:.17g} below the inverted "
            f"bound {inverse_bound:.17g}"
        )
    env_sum = relative_entropy(p.rho_e_prime, p.rho_e) + relative_entropy(
        p.rho_e, p.rho_e_prime
    )
    if production + dual < env_sum - chain_slack(env_sum):
        raise InvariantViolation(
            f"production sum {production + dual:.17g} below the "
            f"environment divergence sum {env_sum:.17g}"
        )
    return FluxCapacityReport(
        flux=flux,
        capacity_old=capacity_old,
        capacity_new=capacity_new,
        u_env=u_env,
        s_tilde_env=s_tilde_env,
        production_mean=production_mean,
        inverse_bound=inverse_bound,
    )


@dataclass(frozen=True)
class TrajectoryEnsemble:
    """Forward and backward path probabilities over the four outcomes
    (m, nu', n, nu), shaped (dim_s, dim_e, dim_s, dim_e)."""

    forward: np.ndarray
    backward: np.ndarray

    def __post_init__(self) -> None:
        for name, arr in (("forward", self.forward), ("backward", self.backward)):
            if np.any(arr < 0.0):
                raise InvariantViolation(f"{name} probabilities go negative")
            if abs(arr.sum() - 1.0) > 1e-10:
                raise InvariantViolation(
                    f"{name} probabilities sum to {arr.sum():.15g}"
                )


def trajectory_production(p: ThermoProcess) -> tuple[TrajectoryEnsemble, float]:
    """Build the four-measurement path probabilities and return the
    ensemble with its average stochastic entropy production
    D(forward || backward), which must match the dual within 1e-8."""
    spec_s = p.rho_s.spectral()
    spec_e = p.rho_e.spectral()
    spec_s_prime = p.rho_s_prime.spectral()
    basis_initial = np.kron(spec_s_prime.eigenvectors, spec_e.eigenvectors)
    basis_final = np.kron(spec_s.eigenvectors, spec_e.eigenvectors)
    amplitudes = basis_initial.conj().T @ p.unitary @ basis_final
    weights = (amplitudes.real**2 + amplitudes.imag**2).reshape(
        p.dim_s, p.dim_e, p.dim_s, p.dim_e
    )
    start = np.multiply.outer(
        spec_s_prime.eigenvalues, spec_e.eigenvalues
    )
    end = np.multiply.outer(spec_s.eigenvalues, spec_e.eigenvalues)
    forward = weights * start[:, :, None, None]
    backward = weights * end[None, None, :, :]
    ensemble = TrajectoryEnsemble(forward=forward, backward=backward)
    mean_production = discrete_kl(forward, backward)
    if math.isinf(mean_production):
        raise SupportFailure(
            "a forward path carries weight where the backward one is zero"
        )
    _, dual = entropy_production(p)
    if abs(mean_production - dual) > _TRAJECTORY_TOL:
        raise InvariantViolation(
            f"trajectory mean {mean_production:.17g} misses the dual "
            f"{dual:.17g} by more than {_TRAJECTORY_TOL:.0e}"
        )
    return ensemble, mean_production


def random_process(
    rng: np.random.Generator, dim_s: int = 2, dim_e: int = 2
) -> ThermoProcess:
    """Full-support random states on both factors and a Haar-style
    joint unitary."""
    from .sampling import random_density, random_unitary

    return ThermoProcess(
        rho_s=random_density(rng, dim_s),
        rho_e=random_density(rng, dim_e),
        unitary=random_unitary(rng, dim_s * dim_e),
    )
