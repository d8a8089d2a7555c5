"""Invariant suites: randomized self-checks for every module.

Each check draws its own instances from a dedicated PCG64 substream
seeded with (seed, check id), so results do not depend on how many
other checks ran before it.  A check reports the worst residual it saw
across the draws; residuals are oriented so that larger means worse
and anything at or below the check's tolerance passes.

Grid-based checks (the scalar bound functions) ignore the draw count
and sweep fixed logarithmic grids instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bounds import (
    divergence_bound,
    divergence_bound_log_form,
    exchange_divergence,
    inverse_exchange_divergence,
    uncertainty_bound,
)
from .channels import (
    KrausChannel,
    amplitude_damping,
    depolarizing,
    dpi_margin,
    fixed_point_bound,
)
from .classical import (
    cauchy_schwarz_chain,
    classical_tur,
    exchange_ensemble,
    mixture_stats,
    random_ensemble,
    symmetric_kl,
    tanh_bound,
    variance_decomposition,
)
from .divergences import (
    classical_symmetric_divergence,
    coherence,
    dephase,
    relative_entropy,
    symmetric_relative_entropy,
    unitary_conjugate,
)
from .errors import EqualMeans, QreboundError, SupportFailure, ZeroFlux
from .hermitian import DensityMatrix, Observable, expectation, second_moment
from .montecarlo import GAP_TOL
from .sampling import (
    default_rng,
    random_density,
    random_kraus,
    random_observable,
    random_unitary,
)
from .surrogate import build_surrogate, surrogate_divergences, uncertainty_report
from .thermo import (
    entropy_production,
    flux_capacity_relation,
    process_uncertainty,
    random_process,
    trajectory_production,
)

SUITE_CHOICES = ("surrogate", "classical", "channels", "thermo", "bounds", "all")

_GRID = np.logspace(-3.0, math.log10(20.0), 400)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one invariant check."""

    name: str
    passed: bool
    worst: float
    note: str = ""


def _triple(rng: np.random.Generator, i: int):
    dim = 2 + i % 3
    return (
        random_density(rng, dim),
        random_density(rng, dim),
        random_observable(rng, dim),
    )


# ---------------------------------------------------------------- bounds


def _check_forward_monotone(rng, draws):
    values = _GRID * np.tanh(0.5 * _GRID)
    worst = float(np.max(values[:-1] - values[1:]))
    return worst < 0.0, worst, "largest non-increase of x*tanh(x/2) on the grid"


def _check_inverse_roundtrip(rng, draws):
    worst = 0.0
    for x in _GRID:
        worst = max(worst, abs(inverse_exchange_divergence(exchange_divergence(x)) - x))
    for y in _GRID:
        worst = max(worst, abs(exchange_divergence(inverse_exchange_divergence(y)) - y))
    return worst <= 1e-10, worst, "max |g(h(x))-x|, |h(g(y))-y| on [1e-3, 20]"


def _check_bound_roundtrip(rng, draws):
    worst = 0.0
    for s in _GRID:
        worst = max(worst, abs(divergence_bound(uncertainty_bound(s)) - s))
    return worst <= 1e-10, worst, "max |B(f(s))-s| on [1e-3, 20]"


def _check_closed_forms(rng, draws):
    worst = 0.0
    for u in np.logspace(-3.0, 6.0, 400):
        worst = max(worst, abs(divergence_bound(u) - divergence_bound_log_form(u)))
    return worst <= 1e-12, worst, "two closed forms of B on [1e-3, 1e6]"


def _check_bound_monotone(rng, draws):
    values = np.array([uncertainty_bound(s) for s in _GRID])
    worst = float(np.max(values[1:] - values[:-1]))
    return worst < 0.0, worst, "largest non-decrease of f on the grid"


# ------------------------------------------------------------- surrogate


def _check_mean_identity(rng, draws):
    worst = 0.0
    for i in range(draws):
        rho, sigma, theta = _triple(rng, i)
        s = build_surrogate(rho, sigma, theta)
        worst = max(
            worst,
            abs(complex(np.sum(s.p * s.theta)) - expectation(rho, theta)),
            abs(complex(np.sum(s.q * s.theta)) - expectation(sigma, theta)),
        )
    return worst <= 1e-10, worst, "joint-distribution means vs trace means"


def _check_second_moment_order(rng, draws):
    worst = -math.inf
    for i in range(draws):
        rho, sigma, theta = _triple(rng, i)
        s = build_surrogate(rho, sigma, theta)
        abs_sq = s.theta.real**2 + s.theta.imag**2
        worst = max(
            worst,
            float(np.sum(s.p * abs_sq)) - second_moment(rho, theta),
            float(np.sum(s.q * abs_sq)) - second_moment(sigma, theta),
        )
    return worst <= 1e-10, worst, "joint second moments minus trace second moments"


def _check_uncertainty_order(rng, draws):
    worst = -math.inf
    skipped = 0
    for i in range(draws):
        rho, sigma, theta = _triple(rng, i)
        try:
            r = uncertainty_report(rho, sigma, theta)
        except EqualMeans:
            skipped += 1
            continue
        worst = max(
            worst, (r.u_classical - r.u_quantum) / max(1.0, r.u_classical)
        )
    return worst <= GAP_TOL, worst, f"scaled u_classical - u_quantum ({skipped} skipped)"


def _check_divergence_match(rng, draws):
    worst = 0.0
    for i in range(draws):
        rho, sigma, theta = _triple(rng, i)
        s = build_surrogate(rho, sigma, theta)
        kl_pq, kl_qp = surrogate_divergences(s)
        worst = max(
            worst,
            abs(kl_pq - relative_entropy(rho, sigma)),
            abs(kl_qp - relative_entropy(sigma, rho)),
        )
    return worst <= 1e-10, worst, "joint KL vs operator relative entropy"


def _check_main_bound(rng, draws):
    worst = -math.inf
    skipped = 0
    for i in range(draws):
        rho, sigma, theta = _triple(rng, i)
        try:
            r = uncertainty_report(rho, sigma, theta)
        except EqualMeans:
            skipped += 1
            continue
        worst = max(worst, (r.bound - r.u_quantum) / max(1.0, r.bound))
    return worst <= GAP_TOL, worst, f"scaled f(divergence) - uncertainty ({skipped} skipped)"


def _check_classical_bound(rng, draws):
    worst = -math.inf
    skipped = 0
    for i in range(draws):
        rho, sigma, theta = _triple(rng, i)
        try:
            r = uncertainty_report(rho, sigma, theta)
        except EqualMeans:
            skipped += 1
            continue
        d_sym = 0.5 * (r.kl_pq + r.kl_qp)
        b = 0.0 if math.isinf(d_sym) else uncertainty_bound(d_sym)
        worst = max(worst, (b - r.u_classical) / max(1.0, b))
    return worst <= GAP_TOL, worst, f"scaled surrogate bound margin ({skipped} skipped)"


def _check_klein(rng, draws):
    worst = 0.0
    for i in range(draws):
        dim = 2 + i % 3
        rho = random_density(rng, dim)
        sigma = random_density(rng, dim)
        worst = max(worst, -relative_entropy(rho, sigma), relative_entropy(rho, rho))
    return worst <= 1e-10, worst, "negativity and self-divergence residuals"


def _check_coherence_split(rng, draws):
    worst = 0.0
    for i in range(draws):
        dim = 2 + i % 3
        rho = random_density(rng, dim)
        sigma = random_density(rng, dim)
        split = relative_entropy(dephase(rho, sigma.spectral()), sigma) + coherence(
            rho, sigma
        )
        worst = max(worst, abs(relative_entropy(rho, sigma) - split))
    return worst <= 1e-10, worst, "dephased part + coherence vs full divergence"


def _check_symmetric_split(rng, draws):
    worst = 0.0
    for i in range(draws):
        dim = 2 + i % 3
        rho = random_density(rng, dim)
        sigma = random_density(rng, dim)
        split = classical_symmetric_divergence(rho, sigma) + 0.5 * (
            coherence(rho, sigma) + coherence(sigma, rho)
        )
        worst = max(worst, abs(symmetric_relative_entropy(rho, sigma) - split))
    return worst <= 1e-10, worst, "classical part + mean coherence vs symmetric"


def _check_unitary_invariance(rng, draws):
    worst = 0.0
    for i in range(draws):
        dim = 2 + i % 3
        rho = random_density(rng, dim)
        sigma = random_density(rng, dim)
        u = random_unitary(rng, dim)
        rotated = relative_entropy(
            unitary_conjugate(rho, u), unitary_conjugate(sigma, u)
        )
        worst = max(worst, abs(rotated - relative_entropy(rho, sigma)))
    return worst <= 1e-10, worst, "divergence drift under a random rotation"


# ------------------------------------------------------------- classical


def _check_shift_invariance(rng, draws):
    worst = 0.0
    for i in range(draws):
        e = random_ensemble(rng, 2 + i % 7)
        worst = max(worst, cauchy_schwarz_chain(e).shift_spread)
    return worst <= 1e-12, worst, "spread of the shifted numerator"


def _check_cauchy_schwarz(rng, draws):
    worst = -math.inf
    for i in range(draws):
        e = random_ensemble(rng, 2 + i % 7)
        r = cauchy_schwarz_chain(e)
        worst = max(worst, r.lhs - r.rhs)
    return worst <= 1e-12, worst, "numerator minus variance*contrast"


def _check_contrast_bound(rng, draws):
    worst = -math.inf
    for i in range(draws):
        e = random_ensemble(rng, 2 + i % 7)
        contrast, bound = tanh_bound(e)
        worst = max(worst, contrast - bound)
    return worst <= 1e-10, worst, "contrast minus tanh^2(g(Dsym)/2)"


def _check_variance_decomposition(rng, draws):
    worst = 0.0
    for i in range(draws):
        e = random_ensemble(rng, 2 + i % 7)
        worst = max(worst, variance_decomposition(e).residual)
    return worst <= 1e-12, worst, "mixture-variance decomposition residual"


def _check_classical_tur(rng, draws):
    worst = -math.inf
    skipped = 0
    for i in range(draws):
        e = random_ensemble(rng, 2 + i % 7)
        try:
            lhs, bound = classical_tur(e)
        except EqualMeans:
            skipped += 1
            continue
        worst = max(worst, bound - lhs)
    return worst <= GAP_TOL, worst, f"bound minus uncertainty ({skipped} skipped)"


def _check_exchange_saturation(rng, draws):
    worst = 0.0
    for eps in np.linspace(0.05, 4.0, 80):
        e = exchange_ensemble(float(eps))
        lhs, bound = classical_tur(e)
        contrast = mixture_stats(e).contrast
        worst = max(
            worst,
            abs(lhs - 1.0 / math.sinh(eps) ** 2),
            abs(lhs - bound),
            abs(symmetric_kl(e.p, e.q) - exchange_divergence(2.0 * eps)),
            abs(contrast - math.tanh(eps) ** 2),
        )
    return worst <= 1e-9, worst, "two-outcome exchange family residuals"


# -------------------------------------------------------------- channels


def _check_kraus_completeness(rng, draws):
    worst = 0.0
    for i in range(draws):
        dim = 2 + i % 3
        ch = KrausChannel(random_kraus(rng, dim, 1 + i % 4))
        total = sum(k.conj().T @ k for k in ch.operators)
        worst = max(worst, float(np.max(np.abs(total - np.eye(dim)))))
    return worst <= 1e-10, worst, "max |sum K^dag K - I| over random channels"


def _check_data_processing(rng, draws):
    worst = -math.inf
    for i in range(draws):
        dim = 2 + i % 3
        rho = random_density(rng, dim)
        sigma = random_density(rng, dim)
        ch = KrausChannel(random_kraus(rng, dim, 1 + i % 4))
        before, after = dpi_margin(ch, rho, sigma)
        worst = max(worst, after - before)
    return worst <= 1e-10, worst, "divergence growth under random channels"


def _check_depolarizing_fixed_point(rng, draws):
    report = fixed_point_bound(
        depolarizing(0.35),
        DensityMatrix(np.diag([0.9, 0.1])),
        DensityMatrix(0.5 * np.eye(2)),
        Observable(np.diag([1.0, -1.0])),
        steps=50,
    )
    worst = -report.min_margin if report.evaluated else 0.0
    note = f"bound {report.bound:.6g}, {report.skipped} steps skipped"
    return worst <= GAP_TOL, worst, note


def _check_damping_fixed_point(rng, draws):
    report = fixed_point_bound(
        amplitude_damping(0.25),
        DensityMatrix(np.diag([0.9, 0.1])),
        DensityMatrix(np.diag([1.0, 0.0])),
        Observable(np.diag([1.0, -1.0])),
        steps=50,
    )
    worst = -report.min_margin if report.evaluated else 0.0
    note = f"bound {report.bound:.6g}, {report.skipped} steps skipped"
    return worst <= GAP_TOL, worst, note


def _check_unitary_channel(rng, draws):
    worst = 0.0
    for i in range(draws):
        dim = 2 + i % 3
        rho = random_density(rng, dim)
        sigma = random_density(rng, dim)
        ch = KrausChannel([random_unitary(rng, dim)])
        before, after = dpi_margin(ch, rho, sigma)
        worst = max(worst, abs(after - before))
    return worst <= 1e-10, worst, "divergence drift under unitary channels"


# ---------------------------------------------------------------- thermo


def _check_production_nonnegative(rng, draws):
    worst = 0.0
    for _ in range(draws):
        p = random_process(rng)
        production, dual = entropy_production(p)
        worst = max(worst, -production, -dual)
    return worst <= 1e-10, worst, "negativity of production and dual"


def _check_dual_route(rng, draws):
    worst = 0.0
    for _ in range(draws):
        p = random_process(rng)
        rotated = unitary_conjugate(p.sigma, p.unitary.conj().T)
        worst = max(
            worst,
            abs(
                relative_entropy(rotated, p.initial)
                - relative_entropy(p.sigma, p.rho)
            ),
        )
    return worst <= 1e-10, worst, "rotated-frame route vs direct dual"


def _check_joint_bound(rng, draws):
    worst = -math.inf
    skipped = 0
    for _ in range(draws):
        p = random_process(rng)
        theta = random_observable(rng, p.dim_s * p.dim_e)
        try:
            r = process_uncertainty(p, theta)
        except EqualMeans:
            skipped += 1
            continue
        production, dual = entropy_production(p)
        target = 0.5 * (production + dual)
        b = 0.0 if math.isinf(target) else uncertainty_bound(target)
        worst = max(worst, (b - r.u_quantum) / max(1.0, b))
    return worst <= GAP_TOL, worst, f"scaled production-mean margin ({skipped} skipped)"


def _check_trajectory_identity(rng, draws):
    worst = 0.0
    skipped = 0
    for _ in range(draws):
        p = random_process(rng)
        try:
            _, mean_production = trajectory_production(p)
        except SupportFailure:
            skipped += 1
            continue
        _, dual = entropy_production(p)
        worst = max(worst, abs(mean_production - dual))
    return worst <= 1e-8, worst, f"path-average vs dual ({skipped} skipped)"


def _check_flux_chain(rng, draws):
    worst = -math.inf
    skipped = 0
    for _ in range(draws):
        p = random_process(rng)
        try:
            report = flux_capacity_relation(p)
        except (ZeroFlux, SupportFailure):
            skipped += 1
            continue
        worst = max(worst, -min(report.margins))
    if worst == -math.inf:
        worst = 0.0
    return worst <= GAP_TOL, worst, f"worst chain margin ({skipped} skipped)"


_Check = Callable[[np.random.Generator, int], tuple]

_REGISTRY: dict[str, list[tuple[int, str, _Check]]] = {
    "bounds": [
        (1, "bounds/forward-monotone", _check_forward_monotone),
        (2, "bounds/inverse-roundtrip", _check_inverse_roundtrip),
        (3, "bounds/bound-roundtrip", _check_bound_roundtrip),
        (4, "bounds/closed-forms-agree", _check_closed_forms),
        (5, "bounds/bound-monotone", _check_bound_monotone),
    ],
    "surrogate": [
        (10, "surrogate/mean-identity", _check_mean_identity),
        (11, "surrogate/second-moment-order", _check_second_moment_order),
        (12, "surrogate/uncertainty-order", _check_uncertainty_order),
        (13, "surrogate/divergence-match", _check_divergence_match),
        (14, "surrogate/main-bound", _check_main_bound),
        (15, "surrogate/classical-bound", _check_classical_bound),
        (16, "surrogate/klein", _check_klein),
        (17, "surrogate/coherence-split", _check_coherence_split),
        (18, "surrogate/symmetric-split", _check_symmetric_split),
        (19, "surrogate/unitary-invariance", _check_unitary_invariance),
    ],
    "classical": [
        (30, "classical/shift-invariance", _check_shift_invariance),
        (31, "classical/cauchy-schwarz", _check_cauchy_schwarz),
        (32, "classical/contrast-bound", _check_contrast_bound),
        (33, "classical/variance-decomposition", _check_variance_decomposition),
        (34, "classical/uncertainty-bound", _check_classical_tur),
        (35, "classical/exchange-saturation", _check_exchange_saturation),
    ],
    "channels": [
        (50, "channels/kraus-completeness", _check_kraus_completeness),
        (51, "channels/data-processing", _check_data_processing),
        (52, "channels/depolarizing-fixed-point", _check_depolarizing_fixed_point),
        (53, "channels/damping-fixed-point", _check_damping_fixed_point),
        (54, "channels/unitary-preserves", _check_unitary_channel),
    ],
    "thermo": [
        (70, "thermo/production-nonnegative", _check_production_nonnegative),
        (71, "thermo/dual-route", _check_dual_route),
        (72, "thermo/joint-bound", _check_joint_bound),
        (73, "thermo/trajectory-identity", _check_trajectory_identity),
        (74, "thermo/flux-chain", _check_flux_chain),
    ],
}


def run_suite(suite: str, draws: int = 1000, seed: int = 7) -> list[CheckResult]:
    """Run one named suite (or "all") and return its check results.

    A check that raises any package error is reported as failed with
    the exception text in the note, never propagated.
    """
    if suite not in SUITE_CHOICES:
        raise ValueError(f"unknown suite {suite!r}; pick one of {SUITE_CHOICES}")
    if draws < 1:
        raise ValueError(f"draws must be >= 1, got {draws}")
    names = tuple(_REGISTRY) if suite == "all" else (suite,)
    results = []
    for name in names:
        for check_id, check_name, fn in _REGISTRY[name]:
            rng = default_rng([seed, check_id])
            try:
                passed, worst, note = fn(rng, draws)
            except QreboundError as exc:
                results.append(
                    CheckResult(
                        name=check_name,
                        passed=False,
                        worst=math.inf,
                        note=f"{type(exc).__name__}: {exc}",
                    )
                )
                continue
            results.append(
                CheckResult(name=check_name, passed=passed, worst=worst, note=note)
            )
    return results
