"""Seeded qubit experiment behind the bound-verification sweep.

Each record draws a diagonal state rho, a coherent state sigma and a
coherent observable, then evaluates the uncertainty U, the symmetric
divergence s_tilde, its coherence-free part s_cl, and the bounds
f(s_tilde) and f(s_cl).  The point of the sweep: U >= f(s_tilde) always
holds, while U >= f(s_cl) fails for a substantial fraction of draws, so
the coherence-free divergence cannot replace the full one.

Determinism contract: record k of a run with seed s is generated from
an independent PCG64 stream seeded with (s XOR k), so records can be
computed in any order (or in parallel) with identical results.  Each
attempt consumes exactly seven uniforms, in the order p1, q1, coherence
fraction, phi1, omega, abs_d_sq, phi2; draws whose two means coincide
within 1e-9 are discarded and the stream simply continues.

The same two-level family contains the exact bound-saturating states:
diagonal exponential weights with the two populations swapped between
rho and sigma, and a diagonal observable (``saturation_family``).
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounds import exchange_divergence, uncertainty_bound
from .classical import MEAN_GAP
from .divergences import (
    classical_symmetric_divergence,
    symmetric_relative_entropy,
)
from .errors import (
    InvariantViolation,
    NonPositiveEpsilon,
    NotHermitian,
    NotPositive,
    TraceNotOne,
)
from .hermitian import DensityMatrix, Observable, expectation
from .surrogate import GAP_TOL, quantum_uncertainty

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SampleParams:
    """One draw of the qubit-triple sampler (all seven uniforms)."""

    p1: float
    q1: float
    abs_c_sq: float
    phi1: float
    omega: float
    abs_d_sq: float
    phi2: float


@dataclass(frozen=True)
class RunRecord:
    """One retained sample with its derived quantities."""

    index: int
    params: SampleParams
    u: float
    s_tilde: float
    s_cl: float
    bound: float
    bound_cl: float
    satisfied: bool
    classical_violated: bool
    seed: int


@dataclass(frozen=True)
class ExperimentResult:
    records: list[RunRecord]
    redraws: int

    @property
    def violations(self) -> int:
        return sum(1 for r in self.records if not r.satisfied)

    @property
    def classical_violations(self) -> int:
        return sum(1 for r in self.records if r.classical_violated)


def sample_params(rng: np.random.Generator) -> SampleParams:
    """Seven uniforms in the documented order."""
    p1 = rng.uniform(0.0, 1.0)
    q1 = rng.uniform(0.0, 1.0)
    abs_c_sq = rng.uniform(0.0, 1.0) * q1 * (1.0 - q1)
    phi1 = rng.uniform(0.0, 2.0 * math.pi)
    omega = rng.uniform(0.0, 1.0)
    abs_d_sq = rng.uniform(0.0, 1.0)
    phi2 = rng.uniform(0.0, 2.0 * math.pi)
    return SampleParams(p1, q1, abs_c_sq, phi1, omega, abs_d_sq, phi2)


def triple_from_params(
    params: SampleParams,
) -> tuple[DensityMatrix, DensityMatrix, Observable]:
    """Build (rho, sigma, theta) from one parameter draw.

    sigma's off-diagonal magnitude is capped at sqrt(q1(1-q1)), which
    keeps its determinant non-negative, so positivity holds by
    construction up to roundoff.
    """
    rho = DensityMatrix([[1.0 - params.p1, 0.0], [0.0, params.p1]])
    c = math.sqrt(params.abs_c_sq) * complex(
        math.cos(params.phi1), math.sin(params.phi1)
    )
    sigma = DensityMatrix(
        [[1.0 - params.q1, c], [c.conjugate(), params.q1]]
    )
    d = math.sqrt(params.abs_d_sq) * complex(
        math.cos(params.phi2), math.sin(params.phi2)
    )
    theta = Observable([[-params.omega, d], [d.conjugate(), params.omega]])
    return rho, sigma, theta


def sample_triple(
    rng: np.random.Generator,
) -> tuple[DensityMatrix, DensityMatrix, Observable]:
    """Draw a valid triple, resampling on (rare) validation roundoff."""
    while True:
        try:
            return triple_from_params(sample_params(rng))
        except (NotPositive, NotHermitian, TraceNotOne):
            continue


def _evaluate(
    index: int,
    params: SampleParams,
    rho: DensityMatrix,
    sigma: DensityMatrix,
    theta: Observable,
    seed: int,
) -> RunRecord:
    u = quantum_uncertainty(rho, sigma, theta)
    s_tilde = symmetric_relative_entropy(rho, sigma)
    s_cl = classical_symmetric_divergence(rho, sigma)
    bound = 0.0 if math.isinf(s_tilde) else uncertainty_bound(s_tilde)
    bound_cl = 0.0 if math.isinf(s_cl) else uncertainty_bound(s_cl)
    return RunRecord(
        index=index,
        params=params,
        u=u,
        s_tilde=s_tilde,
        s_cl=s_cl,
        bound=bound,
        bound_cl=bound_cl,
        satisfied=u >= bound - GAP_TOL,
        classical_violated=u < bound_cl - GAP_TOL,
        seed=seed,
    )


def _one_record(run_seed: int, index: int) -> tuple[RunRecord, int]:
    stream_seed = (run_seed ^ index) & _SEED_MASK
    rng = np.random.Generator(np.random.PCG64(stream_seed))
    redraws = 0
    while True:
        params = sample_params(rng)
        try:
            rho, sigma, theta = triple_from_params(params)
        except (NotPositive, NotHermitian, TraceNotOne):
            redraws += 1
            continue
        gap = expectation(rho, theta) - expectation(sigma, theta)
        if abs(gap) <= MEAN_GAP:
            redraws += 1
            continue
        return _evaluate(index, params, rho, sigma, theta, stream_seed), redraws


def _worker_count(n: int) -> int:
    raw = os.environ.get("QRE_THREADS", "1")
    try:
        workers = int(raw)
    except ValueError:
        workers = 1
    return max(1, min(workers, n))


def run_experiment(n: int, seed: int) -> ExperimentResult:
    """n retained records from independent per-index substreams.

    Order-independent by construction; QRE_THREADS > 1 fans the indices
    out over a thread pool, with identical output either way.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not 0 <= seed <= _SEED_MASK:
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    workers = _worker_count(n)
    if workers == 1:
        outcomes = [_one_record(seed, k) for k in range(n)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda k: _one_record(seed, k), range(n)))
    return ExperimentResult(
        records=[rec for rec, _ in outcomes],
        redraws=sum(extra for _, extra in outcomes),
    )


def saturation_family(
    eps_grid, omega: float = 1.0, check: bool = True
) -> list[RunRecord]:
    """The exactly saturating diagonal family, one record per eps.

    rho has populations (1/(1+e^eps), 1/(1+e^-eps)), sigma swaps them,
    and theta = omega * diag(-1, +1).  Then U = 1/sinh^2(eps/2) and
    s_tilde = eps*tanh(eps/2), meeting the bound with equality.  With
    ``check`` set, each point is asserted to satisfy
    |U - f(s_tilde)| <= 1e-8 and |s_tilde - eps*tanh(eps/2)| <= 1e-10.
    """
    records = []
    for k, eps in enumerate(eps_grid):
        if eps <= 0.0:
            raise NonPositiveEpsilon(f"eps must be positive, got {eps}")
        upper = 1.0 / (1.0 + math.exp(-eps))
        lower = 1.0 / (1.0 + math.exp(eps))
        rho = DensityMatrix([[lower, 0.0], [0.0, upper]])
        sigma = DensityMatrix([[upper, 0.0], [0.0, lower]])
        theta = Observable([[-omega, 0.0], [0.0, omega]])
        params = SampleParams(
            p1=upper, q1=lower, abs_c_sq=0.0, phi1=0.0,
            omega=omega, abs_d_sq=0.0, phi2=0.0,
        )
        record = _evaluate(k, params, rho, sigma, theta, seed=0)
        if check:
            gap = abs(record.u - record.bound)
            if gap > 1e-8:
                raise InvariantViolation(
                    f"saturation gap {gap:.3e} > 1e-8 at eps={eps}"
                )
            drift = abs(record.s_tilde - exchange_divergence(eps))
            if drift > 1e-10:
                raise InvariantViolation(
                    f"divergence drift {drift:.3e} > 1e-10 at eps={eps}"
                )
        records.append(record)
    return records
