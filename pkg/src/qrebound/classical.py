"""Classical uncertainty relation for complex random variables.

Two probability vectors P, Q and one complex-valued variable theta on a
shared finite alphabet.  The mixture Pt = (P+Q)/2 carries the chain

    |mean_P - mean_Q|^2 / 4  <=  Var_Pt(theta) * contrast
    contrast <= tanh^2(g(Dsym)/2)
    4 Var_Pt = 2 Var_P + 2 Var_Q + |mean_P - mean_Q|^2

with contrast = <((P-Q)/(P+Q))^2>_Pt and Dsym the symmetric KL
divergence, which combine into the classical uncertainty bound
(Var_P + Var_Q) / ((1/2)|mean_P - mean_Q|^2) >= f(Dsym).

Zero conventions for the KL sum: a cell with P = 0 contributes 0; cells
with P > 0 and Q = 0 make the divergence +inf once their total P mass
exceeds 1e-9 (below that it is dropped as roundoff from clamped
eigenvalues upstream).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import inverse_exchange_divergence, uncertainty_bound
from .divergences import LEAK_TOL, clamp_nonnegative
from .errors import (
    DimensionMismatch,
    EqualMeans,
    InvariantViolation,
    NegativeInput,
)

_SUM_TOL = 1e-12
MEAN_GAP = 1e-9
_VAR_CLAMP = 1e-12


def discrete_kl(p, q) -> float:
    """KL divergence of two same-shape non-negative arrays summing to 1."""
    pa = np.asarray(p, dtype=float).ravel()
    qa = np.asarray(q, dtype=float).ravel()
    if pa.shape != qa.shape:
        raise DimensionMismatch(f"shapes differ: {pa.shape} vs {qa.shape}")
    pos = pa > 0.0
    leak = float(pa[pos & (qa <= 0.0)].sum())
    if leak > LEAK_TOL:
        return math.inf
    keep = pos & (qa > 0.0)
    pk = pa[keep]
    total = float(np.sum(pk * (np.log(pk) - np.log(qa[keep]))))
    return clamp_nonnegative(total, "KL divergence")


def symmetric_kl(p, q) -> float:
    """(D(P|Q) + D(Q|P)) / 2."""
    return 0.5 * (discrete_kl(p, q) + discrete_kl(q, p))


def _clamped_variance(second_moment: float, mean_sq: float) -> float:
    v = second_moment - mean_sq
    if -_VAR_CLAMP <= v < 0.0:
        return 0.0
    return v


@dataclass(frozen=True)
class ClassicalEnsemble:
    """Probabilities p, q and complex values theta on one alphabet."""

    p: np.ndarray
    q: np.ndarray
    theta: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.p, dtype=float)
        q = np.asarray(self.q, dtype=float)
        theta = np.asarray(self.theta, dtype=complex)
        if not (p.shape == q.shape == theta.shape) or p.ndim != 1:
            raise DimensionMismatch(
                f"need three equal-length vectors, got {p.shape}, {q.shape}, {theta.shape}"
            )
        if np.any(p < 0.0) or np.any(q < 0.0):
            raise NegativeInput("probabilities must be non-negative")
        for name, vec in (("p", p), ("q", q)):
            if abs(vec.sum() - 1.0) > _SUM_TOL:
                raise InvariantViolation(
                    f"{name} sums to {vec.sum():.15g}, off by more than {_SUM_TOL:.0e}"
                )
        for arr in (p, q, theta):
            arr.flags.writeable = False
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "theta", theta)

    @property
    def size(self) -> int:
        return self.p.shape[0]


@dataclass(frozen=True)
class MixtureStats:
    """Moments of the ensemble under P, Q and the mixture (P+Q)/2."""

    p_tilde: np.ndarray
    mean_p: complex
    mean_q: complex
    mean_mix: complex
    var_p: float
    var_q: float
    mixture_variance: float
    contrast: float


def mixture_stats(e: ClassicalEnsemble) -> MixtureStats:
    """Means, variances, mixture variance and the contrast
    <((P-Q)/(P+Q))^2> under the mixture."""
    p, q, theta = e.p, e.q, e.theta
    p_tilde = 0.5 * (p + q)
    mean_p = complex(np.sum(p * theta))
    mean_q = complex(np.sum(q * theta))
    mean_mix = complex(np.sum(p_tilde * theta))
    abs_sq = theta.real**2 + theta.imag**2
    var_p = _clamped_variance(float(np.sum(p * abs_sq)), abs(mean_p) ** 2)
    var_q = _clamped_variance(float(np.sum(q * abs_sq)), abs(mean_q) ** 2)
    dev = theta - mean_mix
    mixture_variance = float(np.sum(p_tilde * (dev.real**2 + dev.imag**2)))
    support = p_tilde > 0.0
    ratio = (p[support] - q[support]) / (2.0 * p_tilde[support])
    contrast = float(np.sum(p_tilde[support] * ratio * ratio))
    return MixtureStats(
        p_tilde=p_tilde,
        mean_p=mean_p,
        mean_q=mean_q,
        mean_mix=mean_mix,
        var_p=var_p,
        var_q=var_q,
        mixture_variance=mixture_variance,
        contrast=contrast,
    )


@dataclass(frozen=True)
class ChainReport:
    """One evaluation of the shifted-mean Cauchy-Schwarz step."""

    lhs: float
    rhs: float
    shift_spread: float
    holds: bool


def cauchy_schwarz_chain(e: ClassicalEnsemble) -> ChainReport:
    """Check |mean_P - mean_Q|^2/4 <= Var_mix * contrast.

    The left side equals |sum (theta - c)(P - Q)/2|^2 for every complex
    shift c; the spread over three shifts is reported as a consistency
    residual (it must vanish because sum(P - Q) = 0).
    """
    stats = mixture_stats(e)
    half_diff = 0.5 * (e.p - e.q)
    values = []
    for shift in (0.0, stats.mean_mix, 1.0 + 2.0j):
        values.append(abs(complex(np.sum((e.theta - shift) * half_diff))) ** 2)
    spread = max(values) - min(values)
    if spread > 1e-12:
        raise InvariantViolation(f"shift-invariance spread {spread:.3e} > 1e-12")
    lhs = values[1]
    rhs = stats.mixture_variance * stats.contrast
    holds = lhs <= rhs + 1e-12
    if not holds:
        raise InvariantViolation(
            f"Cauchy-Schwarz step failed: {lhs:.17g} > {rhs:.17g} + 1e-12"
        )
    return ChainReport(lhs=lhs, rhs=rhs, shift_spread=spread, holds=holds)


def tanh_bound(e: ClassicalEnsemble) -> tuple[float, float]:
    """Return (contrast, tanh^2(g(Dsym)/2)).

    When P and Q are not mutually absolutely continuous the bound side
    is the trivial 1 (contrast never exceeds 1).
    """
    stats = mixture_stats(e)
    d_sym = symmetric_kl(e.p, e.q)
    if math.isinf(d_sym):
        return stats.contrast, 1.0
    bound = math.tanh(0.5 * inverse_exchange_divergence(d_sym)) ** 2
    if stats.contrast > bound + 1e-10:
        raise InvariantViolation(
            f"contrast {stats.contrast:.17g} exceeds tanh bound {bound:.17g}"
        )
    return stats.contrast, bound


@dataclass(frozen=True)
class DecompositionReport:
    lhs: float
    rhs: float
    residual: float


def variance_decomposition(e: ClassicalEnsemble) -> DecompositionReport:
    """Check 4 Var_mix = 2 Var_P + 2 Var_Q + |mean_P - mean_Q|^2."""
    stats = mixture_stats(e)
    lhs = 4.0 * stats.mixture_variance
    rhs = (
        2.0 * stats.var_p
        + 2.0 * stats.var_q
        + abs(stats.mean_p - stats.mean_q) ** 2
    )
    residual = abs(lhs - rhs)
    if residual > 1e-12:
        raise InvariantViolation(
            f"variance decomposition residual {residual:.3e} > 1e-12"
        )
    return DecompositionReport(lhs=lhs, rhs=rhs, residual=residual)


def classical_tur(e: ClassicalEnsemble) -> tuple[float, float]:
    """Return (classical uncertainty, f(Dsym)) and check the bound.

    The uncertainty is (Var_P + Var_Q)/((1/2)|mean_P - mean_Q|^2); the
    bound is 0 when Dsym is infinite (the trivial case).
    """
    stats = mixture_stats(e)
    gap = abs(stats.mean_p - stats.mean_q)
    if gap <= MEAN_GAP:
        raise EqualMeans(f"means differ by {gap:.3e} <= {MEAN_GAP:.0e}")
    lhs = (stats.var_p + stats.var_q) / (0.5 * gap * gap)
    d_sym = symmetric_kl(e.p, e.q)
    bound = 0.0 if math.isinf(d_sym) else uncertainty_bound(d_sym)
    if lhs < bound - 1e-9:
        raise InvariantViolation(
            f"classical uncertainty {lhs:.17g} below bound {bound:.17g}"
        )
    return lhs, bound


def exchange_ensemble(eps: float, theta=(1.0, -1.0)) -> ClassicalEnsemble:
    """Two-outcome family P = (e^eps, e^-eps)/(2 cosh eps), Q swapped.

    Saturates both the tanh bound and the uncertainty bound: its
    symmetric KL is h(2*eps) and its contrast is tanh^2(eps).
    """
    hi = 1.0 / (1.0 + math.exp(-2.0 * eps))
    lo = 1.0 - hi
    return ClassicalEnsemble(
        p=np.array([hi, lo]), q=np.array([lo, hi]), theta=np.asarray(theta, complex)
    )


def random_ensemble(rng: np.random.Generator, size: int) -> ClassicalEnsemble:
    """Probabilities from normalized uniforms; theta components with
    real and imaginary parts uniform on [-1, 1]."""
    if size < 2:
        raise DimensionMismatch(f"need support size >= 2, got {size}")
    p = rng.uniform(0.0, 1.0, size)
    q = rng.uniform(0.0, 1.0, size)
    re = rng.uniform(-1.0, 1.0, size)
    im = rng.uniform(-1.0, 1.0, size)
    return ClassicalEnsemble(p=p / p.sum(), q=q / q.sum(), theta=re + 1j * im)
