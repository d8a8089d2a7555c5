"""Pure-Python cyclic Jacobi sweep for complex Hermitian matrices.

Arithmetic twin of the Cython kernel ``_jacobi_cy``: every floating
operation appears in the same order with the same IEEE semantics, so
the two backends produce bit-identical results.  Any change here must
be mirrored there.

The matrix is carried as separate real and imaginary parts.  Each
rotation zeroes one off-diagonal pair (p, q) with a unitary built from
a real rotation angle and the phase of the entry being annihilated.
"""
from math import sqrt


def sweep(ar, ai, vr, vi, tol, max_sweeps):
    """Diagonalize in place; returns sweeps used, or -1 if not converged.

    ar, ai: n x n float64 arrays, real/imag parts of a Hermitian matrix
            (imaginary diagonal exactly zero).  Overwritten; on success
            the diagonal of ar holds the eigenvalues, unsorted.
    vr, vi: n x n float64 arrays accumulating the eigenvector unitary,
            normally identity/zero on entry.
    tol:    convergence threshold on the off-diagonal Frobenius norm.
    """
    n = ar.shape[0]
    a_r = [row[:] for row in ar.tolist()]
    a_i = [row[:] for row in ai.tolist()]
    v_r = [row[:] for row in vr.tolist()]
    v_i = [row[:] for row in vi.tolist()]
    skip = tol / (4.0 * n * n)

    sweeps_used = -1
    for sweep_no in range(max_sweeps + 1):
        acc = 0.0
        for i in range(n - 1):
            row_r = a_r[i]
            row_i = a_i[i]
            for j in range(i + 1, n):
                acc += row_r[j] * row_r[j] + row_i[j] * row_i[j]
        if sqrt(2.0 * acc) <= tol:
            sweeps_used = sweep_no
            break
        if sweep_no == max_sweeps:
            break

        for p in range(n - 1):
            for q in range(p + 1, n):
                apr = a_r[p][q]
                api = a_i[p][q]
                r = sqrt(apr * apr + api * api)
                if r <= skip:
                    continue
                wr = apr / r
                wi = api / r
                tau = (a_r[q][q] - a_r[p][p]) / (2.0 * r)
                if tau == 0.0:
                    t = 1.0
                elif tau > 1e150 or tau < -1e150:
                    # tau**2 would overflow; first-order root
                    t = 1.0 / (2.0 * tau)
                else:
                    t = 1.0 / (abs(tau) + sqrt(1.0 + tau * tau))
                    if tau < 0.0:
                        t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                swr = s * wr
                swi = s * wi

                a_r[p][p] = a_r[p][p] - t * r
                a_r[q][q] = a_r[q][q] + t * r
                a_r[p][q] = 0.0
                a_i[p][q] = 0.0
                a_r[q][p] = 0.0
                a_i[q][p] = 0.0

                for i in range(n):
                    if i == p or i == q:
                        continue
                    xr = a_r[i][p]
                    xi = a_i[i][p]
                    yr = a_r[i][q]
                    yi = a_i[i][q]
                    nxr = c * xr - (swr * yr + swi * yi)
                    nxi = c * xi - (swr * yi - swi * yr)
                    nyr = swr * xr - swi * xi + c * yr
                    nyi = swr * xi + swi * xr + c * yi
                    a_r[i][p] = nxr
                    a_i[i][p] = nxi
                    a_r[p][i] = nxr
                    a_i[p][i] = -nxi
                    a_r[i][q] = nyr
                    a_i[i][q] = nyi
                    a_r[q][i] = nyr
                    a_i[q][i] = -nyi

                for i in range(n):
                    xr = v_r[i][p]
                    xi = v_i[i][p]
                    yr = v_r[i][q]
                    yi = v_i[i][q]
                    v_r[i][p] = c * xr - (swr * yr + swi * yi)
                    v_i[i][p] = c * xi - (swr * yi - swi * yr)
                    v_r[i][q] = swr * xr - swi * xi + c * yr
                    v_i[i][q] = swr * xi + swi * xr + c * yi

    for i in range(n):
        for j in range(n):
            ar[i, j] = a_r[i][j]
            ai[i, j] = a_i[i][j]
            vr[i, j] = v_r[i][j]
            vi[i, j] = v_i[i][j]
    return sweeps_used
