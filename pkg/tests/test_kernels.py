import os
import subprocess
import sys

import numpy as np
import pytest

from qrebound import eig_hermitian
from qrebound._kernels import (
    active_backend,
    available_backends,
    jacobi_sweep,
    set_backend,
)


@pytest.fixture
def restore_backend():
    before = active_backend()
    yield
    set_backend(before)


def test_python_backend_always_available():
    assert "python" in available_backends()


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        set_backend("fortran")


def test_backends_bit_identical(restore_backend):
    if len(available_backends()) < 2:
        pytest.skip("compiled kernel not built")
    rng = np.random.Generator(np.random.PCG64(5))
    for dim in (2, 3, 4, 8):
        for _ in range(25):
            g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            m = (g + g.conj().T) / 2
            outs = {}
            for name in available_backends():
                set_backend(name)
                d = eig_hermitian(m)
                outs[name] = (d.eigenvalues.copy(), d.eigenvectors.copy())
            vals = list(outs.values())
            # bit-for-bit, not just close
            assert np.array_equal(vals[0][0], vals[1][0])
            assert np.array_equal(vals[0][1], vals[1][1])


def test_sweep_counts_match_across_backends(restore_backend):
    if len(available_backends()) < 2:
        pytest.skip("compiled kernel not built")
    rng = np.random.Generator(np.random.PCG64(9))
    g = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    m = (g + g.conj().T) / 2
    counts = {}
    for name in available_backends():
        ar = np.ascontiguousarray(m.real)
        ai = np.ascontiguousarray(m.imag)
        vr = np.eye(6)
        vi = np.zeros((6, 6))
        set_backend(name)
        counts[name] = jacobi_sweep(ar, ai, vr, vi, 1e-14, 64)
    assert counts["python"] == counts["compiled"] >= 1


def test_env_var_forces_pure_python():
    code = (
        "import qrebound._kernels as k; print(k.active_backend())"
    )
    env = dict(os.environ, QREBOUND_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env
    )
    assert out.stdout.strip() == "python"


def test_sweep_returns_minus_one_when_starved():
    # one sweep cannot diagonalize an 8x8 to 1e-14
    rng = np.random.Generator(np.random.PCG64(3))
    g = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    m = (g + g.conj().T) / 2
    ar = np.ascontiguousarray(m.real)
    ai = np.ascontiguousarray(m.imag)
    vr = np.eye(8)
    vi = np.zeros((8, 8))
    assert jacobi_sweep(ar, ai, vr, vi, 1e-14, 1) == -1
