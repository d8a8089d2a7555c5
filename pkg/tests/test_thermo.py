import math

import numpy as np
import pytest

from qrebound import (
    DensityMatrix,
    Observable,
    ThermoProcess,
    divergence_bound,
    entropy_production,
    flux_capacity_relation,
    process_uncertainty,
    random_process,
    trajectory_production,
    uncertainty_bound,
)
from qrebound.errors import (
    DimensionMismatch,
    InvariantViolation,
    SupportFailure,
    ZeroFlux,
)
from qrebound.sampling import default_rng
from qrebound.thermo import TrajectoryEnsemble

# mpmath at 50 digits: sum p ln(p/q) for (.7,.3) against (.5,.5), both ways
KL_73_HALF = 0.08228287850505185
KL_HALF_73 = 0.08717669357238887

SWAP = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)

RHO_S = DensityMatrix(np.diag([0.7, 0.3]))
MIXED = DensityMatrix(0.5 * np.eye(2))
Z_ENV = Observable(np.kron(np.eye(2), np.diag([1.0, -1.0])))


def _swap_process(rho_e=MIXED):
    return ThermoProcess(RHO_S, rho_e, SWAP)


def test_constructor_validates_unitary():
    with pytest.raises(DimensionMismatch):
        ThermoProcess(RHO_S, MIXED, np.eye(3))
    with pytest.raises(InvariantViolation):
        ThermoProcess(RHO_S, MIXED, 0.5 * np.eye(4))


def test_swap_exchanges_marginals():
    p = _swap_process(rho_e=DensityMatrix(np.diag([0.6, 0.4])))
    np.testing.assert_allclose(p.rho_s_prime.matrix, np.diag([0.6, 0.4]), atol=1e-14)
    np.testing.assert_allclose(p.rho_e_prime.matrix, np.diag([0.7, 0.3]), atol=1e-14)


def test_swap_production_oracle():
    # swap against a mixed bath reduces both divergences to the
    # single-qubit relative entropies between system and bath states
    production, dual = entropy_production(_swap_process())
    assert production == pytest.approx(KL_73_HALF, abs=1e-12)
    assert dual == pytest.approx(KL_HALF_73, abs=1e-12)


def test_identity_process_produces_nothing():
    p = ThermoProcess(RHO_S, MIXED, np.eye(4))
    production, dual = entropy_production(p)
    assert production == 0.0
    assert dual == 0.0
    with pytest.raises(ZeroFlux):
        flux_capacity_relation(p)


def test_production_nonnegative_random():
    rng = default_rng(51)
    for _ in range(25):
        production, dual = entropy_production(random_process(rng))
        assert production >= 0.0
        assert dual >= 0.0


def test_process_uncertainty_swap():
    report = process_uncertainty(_swap_process(), Z_ENV)
    assert report.s_tilde == pytest.approx(
        0.5 * (KL_73_HALF + KL_HALF_73), abs=1e-12
    )
    assert report.u_quantum >= uncertainty_bound(report.s_tilde) - 1e-9


def test_flux_capacity_swap_oracle():
    p_e = np.array([0.6, 0.4])
    p_s = np.array([0.7, 0.3])
    report = flux_capacity_relation(
        _swap_process(rho_e=DensityMatrix(np.diag(p_e)))
    )
    vals = np.log(p_e)
    flux = float(p_e @ vals - p_s @ vals)
    cap_old = float(p_e @ vals**2 - (p_e @ vals) ** 2)
    cap_new = float(p_s @ vals**2 - (p_s @ vals) ** 2)
    assert report.flux == pytest.approx(flux, abs=1e-13)
    assert report.capacity_old == pytest.approx(cap_old, abs=1e-13)
    assert report.capacity_new == pytest.approx(cap_new, abs=1e-13)
    assert report.u_env == pytest.approx(
        (cap_old + cap_new) / (0.5 * flux**2), rel=1e-12
    )
    kl_se = float(np.sum(p_s * np.log(p_s / p_e)))
    kl_es = float(np.sum(p_e * np.log(p_e / p_s)))
    assert report.s_tilde_env == pytest.approx(0.5 * (kl_se + kl_es), abs=1e-13)
    # the swap makes the joint divergences collapse onto the bath pair,
    # so the monotone step of the chain is an exact equality here
    assert report.production_mean == pytest.approx(report.s_tilde_env, abs=1e-12)
    assert report.inverse_bound == pytest.approx(
        divergence_bound(report.u_env), rel=1e-12
    )
    assert all(m >= -1e-9 for m in report.margins)


def test_flux_needs_full_support():
    with pytest.raises(SupportFailure):
        flux_capacity_relation(
            ThermoProcess(RHO_S, DensityMatrix(np.diag([1.0, 0.0])), SWAP)
        )


def test_flux_chain_random():
    rng = default_rng(52)
    evaluated = 0
    for _ in range(30):
        try:
            report = flux_capacity_relation(random_process(rng))
        except ZeroFlux:
            continue
        evaluated += 1
        assert all(m >= -1e-9 for m in report.margins)
        assert report.u_env >= 0.0
    assert evaluated > 20


def test_trajectory_matches_dual_swap():
    p = _swap_process()
    ensemble, mean_production = trajectory_production(p)
    assert ensemble.forward.shape == (2, 2, 2, 2)
    assert ensemble.backward.shape == (2, 2, 2, 2)
    assert mean_production == pytest.approx(KL_HALF_73, abs=1e-8)


def test_trajectory_matches_dual_random():
    rng = default_rng(53)
    for _ in range(20):
        p = random_process(rng)
        ensemble, mean_production = trajectory_production(p)
        assert abs(ensemble.forward.sum() - 1.0) < 1e-10
        assert abs(ensemble.backward.sum() - 1.0) < 1e-10
        _, dual = entropy_production(p)
        assert mean_production == pytest.approx(dual, abs=1e-8)


def test_trajectory_identity_process():
    _, mean_production = trajectory_production(
        ThermoProcess(RHO_S, MIXED, np.eye(4))
    )
    assert abs(mean_production) <= 1e-10


def test_trajectory_ensemble_validation():
    flat = np.full((1, 1, 2, 2), 0.25)
    bad_sign = flat.copy()
    bad_sign[0, 0, 0, 0] = -0.25
    bad_sign[0, 0, 1, 1] = 0.75
    with pytest.raises(InvariantViolation):
        TrajectoryEnsemble(forward=bad_sign, backward=flat)
    with pytest.raises(InvariantViolation):
        TrajectoryEnsemble(forward=flat, backward=2.0 * flat)


def test_random_process_dimensions():
    rng = default_rng(54)
    p = random_process(rng, dim_s=2, dim_e=3)
    assert p.dim_s == 2
    assert p.dim_e == 3
    assert p.rho.dim == 6
    assert p.sigma.dim == 6
    assert abs(np.trace(p.rho.matrix) - 1.0) < 1e-12


def test_larger_environment_chain():
    rng = default_rng(55)
    p = random_process(rng, dim_s=2, dim_e=3)
    report = flux_capacity_relation(p)
    assert all(m >= -1e-9 for m in report.margins)
    _, mean_production = trajectory_production(p)
    assert math.isfinite(mean_production)
