import math

import numpy as np
import pytest

from qrebound import (
    ClassicalEnsemble,
    cauchy_schwarz_chain,
    classical_tur,
    discrete_kl,
    exchange_ensemble,
    mixture_stats,
    random_ensemble,
    symmetric_kl,
    tanh_bound,
    uncertainty_bound,
    variance_decomposition,
)
from qrebound.errors import (
    DimensionMismatch,
    EqualMeans,
    InvariantViolation,
    NegativeInput,
)
from qrebound.sampling import default_rng

H_ONE = 0.46211715726000974  # h(2*0.5), frozen
TANH_SQ_HALF = 0.2135522670340726
U_EXCHANGE_HALF = 3.682694376831169  # 1/sinh(0.5)^2


def test_discrete_kl_oracle():
    # same numbers as the operator-level oracle pair
    p = np.array([0.7, 0.3])
    q = np.array([0.5, 0.5])
    assert discrete_kl(p, q) == pytest.approx(0.08228287850505185, abs=1e-15)
    assert discrete_kl(p, p) == 0.0


def test_discrete_kl_zero_conventions():
    # P-zero cells contribute nothing
    assert discrete_kl([0.0, 1.0], [0.5, 0.5]) == pytest.approx(math.log(2.0))
    # P mass on a Q-zero cell above the leak tolerance: infinite
    assert discrete_kl([0.5, 0.5], [1.0, 0.0]) == math.inf
    # below the leak tolerance the stray mass is dropped
    tiny = 1e-12
    assert math.isfinite(discrete_kl([1.0 - tiny, tiny], [1.0, 0.0]))


def test_discrete_kl_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        discrete_kl([0.5, 0.5], [1.0])


def test_symmetric_kl_symmetry():
    rng = default_rng(12)
    e = random_ensemble(rng, 5)
    assert symmetric_kl(e.p, e.q) == symmetric_kl(e.q, e.p)


def test_ensemble_validation():
    with pytest.raises(NegativeInput):
        ClassicalEnsemble(p=np.array([1.2, -0.2]), q=np.array([0.5, 0.5]), theta=np.ones(2))
    with pytest.raises(InvariantViolation):
        ClassicalEnsemble(p=np.array([0.7, 0.2]), q=np.array([0.5, 0.5]), theta=np.ones(2))
    with pytest.raises(DimensionMismatch):
        ClassicalEnsemble(p=np.array([1.0]), q=np.array([0.5, 0.5]), theta=np.ones(2))


def test_ensemble_arrays_frozen():
    e = exchange_ensemble(1.0)
    with pytest.raises(ValueError):
        e.p[0] = 0.9


def test_mixture_stats_basics():
    e = exchange_ensemble(0.5)
    stats = mixture_stats(e)
    assert stats.mean_mix == pytest.approx(0.0, abs=1e-15)
    assert stats.contrast == pytest.approx(TANH_SQ_HALF, abs=1e-14)
    # mixture of the exchange pair is uniform
    np.testing.assert_allclose(stats.p_tilde, [0.5, 0.5], atol=1e-15)


def test_shift_invariance_and_cauchy_schwarz():
    rng = default_rng(13)
    for size in range(2, 9):
        e = random_ensemble(rng, size)
        r = cauchy_schwarz_chain(e)
        assert r.shift_spread <= 1e-12
        assert r.lhs <= r.rhs + 1e-12
        assert r.holds


def test_tanh_bound_random():
    rng = default_rng(14)
    for size in range(2, 9):
        contrast, bound = tanh_bound(random_ensemble(rng, size))
        assert contrast <= bound + 1e-10


def test_tanh_bound_disjoint_supports():
    e = ClassicalEnsemble(
        p=np.array([1.0, 0.0]), q=np.array([0.0, 1.0]), theta=np.array([1.0, -1.0])
    )
    contrast, bound = tanh_bound(e)
    assert bound == 1.0
    assert contrast == pytest.approx(1.0)


def test_variance_decomposition_residual():
    rng = default_rng(15)
    for size in range(2, 9):
        r = variance_decomposition(random_ensemble(rng, size))
        assert r.residual <= 1e-12


def test_classical_tur_random():
    rng = default_rng(16)
    checked = 0
    for _ in range(200):
        e = random_ensemble(rng, 2 + checked % 7)
        try:
            lhs, bound = classical_tur(e)
        except EqualMeans:
            continue
        checked += 1
        assert lhs >= bound - 1e-9
    assert checked > 150


def test_classical_tur_equal_means():
    e = ClassicalEnsemble(
        p=np.array([0.5, 0.5]), q=np.array([0.5, 0.5]), theta=np.array([1.0, -1.0])
    )
    with pytest.raises(EqualMeans):
        classical_tur(e)


def test_exchange_family_saturates():
    e = exchange_ensemble(0.5)
    assert symmetric_kl(e.p, e.q) == pytest.approx(H_ONE, abs=1e-14)
    lhs, bound = classical_tur(e)
    assert lhs == pytest.approx(U_EXCHANGE_HALF, abs=1e-12)
    assert lhs == pytest.approx(bound, abs=1e-9)


def test_exchange_family_across_epsilons():
    for eps in (0.1, 0.5, 1.0, 2.0, 4.0):
        e = exchange_ensemble(eps)
        lhs, bound = classical_tur(e)
        assert abs(lhs - bound) <= 1e-9
        assert lhs == pytest.approx(1.0 / math.sinh(eps) ** 2, rel=1e-12)
        assert mixture_stats(e).contrast == pytest.approx(
            math.tanh(eps) ** 2, abs=1e-13
        )


def test_exchange_custom_theta_changes_nothing():
    # the uncertainty functional is invariant under affine reparametrization
    base = exchange_ensemble(1.0)
    shifted = exchange_ensemble(1.0, theta=(5.0, 1.0))  # 2*theta + 3
    lhs_base, _ = classical_tur(base)
    lhs_shifted, _ = classical_tur(shifted)
    assert lhs_base == pytest.approx(lhs_shifted, rel=1e-12)


def test_random_ensemble_normalized():
    rng = default_rng(17)
    e = random_ensemble(rng, 6)
    assert e.p.sum() == pytest.approx(1.0, abs=1e-12)
    assert e.q.sum() == pytest.approx(1.0, abs=1e-12)
    assert e.size == 6
    with pytest.raises(DimensionMismatch):
        random_ensemble(rng, 1)


def test_classical_bound_matches_f_of_divergence():
    rng = default_rng(18)
    e = random_ensemble(rng, 4)
    lhs, bound = classical_tur(e)
    assert bound == pytest.approx(uncertainty_bound(symmetric_kl(e.p, e.q)), abs=1e-14)
