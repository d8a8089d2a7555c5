"""Compare the compiled and pure-Python eigensolver kernels.

Times eig_hermitian across matrix sizes for both backends, checks that
the two produce bit-identical eigenvalues and eigenvectors on the same
inputs (they run the same arithmetic in the same order; the extension
is built with -ffp-contract=off so no FMA contraction sneaks in), and
times a full Monte Carlo batch end to end.

Run:  python benchmarks/bench_backends.py
"""
import time

import numpy as np

from qrebound import eig_hermitian, run_experiment
from qrebound._kernels import active_backend, available_backends, set_backend
from qrebound.sampling import default_rng, random_density

DIMS = (2, 4, 8, 16)
REPS = {2: 4000, 4: 1500, 8: 400, 16: 80}
MC_RECORDS = 2000


def _random_hermitian(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2.0


def time_eig(backend, matrices) -> float:
    set_backend(backend)
    start = time.perf_counter()
    for m in matrices:
        eig_hermitian(m)
    return time.perf_counter() - start


def check_bit_identity(matrices) -> int:
    """Return how many inputs decompose identically across backends."""
    identical = 0
    for m in matrices:
        results = {}
        for backend in available_backends():
            set_backend(backend)
            d = eig_hermitian(m)
            results[backend] = (d.eigenvalues.copy(), d.eigenvectors.copy())
        values = list(results.values())
        same = all(
            np.array_equal(values[0][0], other[0])
            and np.array_equal(values[0][1], other[1])
            for other in values[1:]
        )
        identical += same
    return identical


def main() -> None:
    backends = available_backends()
    initial = active_backend()
    print(f"backends: {', '.join(backends)} (default {initial})")
    if len(backends) < 2:
        print("compiled kernel unavailable; nothing to compare")
        return

    rng = default_rng(1234)
    print(f"\n{'dim':>4} {'reps':>6} " + " ".join(f"{b:>12}" for b in backends) + f" {'speedup':>8}")
    for dim in DIMS:
        matrices = [_random_hermitian(rng, dim) for _ in range(REPS[dim])]
        times = {b: time_eig(b, matrices) for b in backends}
        per_call = {b: times[b] / REPS[dim] * 1e6 for b in backends}
        ratio = per_call["python"] / per_call["compiled"]
        cells = " ".join(f"{per_call[b]:>9.1f} us" for b in backends)
        print(f"{dim:>4} {REPS[dim]:>6} {cells} {ratio:>7.1f}x")

    sample = [_random_hermitian(rng, d) for d in DIMS for _ in range(50)]
    sample += [random_density(rng, d).matrix for d in DIMS for _ in range(50)]
    identical = check_bit_identity(sample)
    print(f"\nbit-identical decompositions: {identical}/{len(sample)}")

    print(f"\nend-to-end: run_experiment({MC_RECORDS}, seed=42)")
    for backend in backends:
        set_backend(backend)
        start = time.perf_counter()
        result = run_experiment(MC_RECORDS, 42)
        elapsed = time.perf_counter() - start
        rate = MC_RECORDS / elapsed
        print(
            f"  {backend:>9}: {elapsed:6.2f} s  ({rate:7.0f} records/s, "
            f"{result.violations} violations)"
        )
    set_backend(initial)


if __name__ == "__main__":
    main()
