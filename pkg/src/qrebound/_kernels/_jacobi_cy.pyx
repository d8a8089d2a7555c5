# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi sweep for complex Hermitian matrices.

Arithmetic twin of ``_jacobi_py.sweep``; the two must stay in lockstep
operation for operation (the build uses -ffp-contract=off so the C
compiler cannot fuse multiply-adds and break bit-identity).
"""
from libc.math cimport fabs, sqrt


def sweep(double[:, ::1] ar, double[:, ::1] ai,
          double[:, ::1] vr, double[:, ::1] vi,
          double tol, int max_sweeps):
    """Diagonalize in place; returns sweeps used, or -1 if not converged."""
    cdef Py_ssize_t n = ar.shape[0]
    cdef Py_ssize_t i, j, p, q
    cdef int sweep_no
    cdef double skip = tol / (4.0 * n * n)
    cdef double acc, apr, api, r, wr, wi, tau, t, c, s, swr, swi
    cdef double xr, xi, yr, yi, nxr, nxi, nyr, nyi

    for sweep_no in range(max_sweeps + 1):
        acc = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                acc += ar[i, j] * ar[i, j] + ai[i, j] * ai[i, j]
        if sqrt(2.0 * acc) <= tol:
            return sweep_no
        if sweep_no == max_sweeps:
            break

        for p in range(n - 1):
            for q in range(p + 1, n):
                apr = ar[p, q]
                api = ai[p, q]
                r = sqrt(apr * apr + api * api)
                if r <= skip:
                    continue
                wr = apr / r
                wi = api / r
                tau = (ar[q, q] - ar[p, p]) / (2.0 * r)
                if tau == 0.0:
                    t = 1.0
                elif tau > 1e150 or tau < -1e150:
                    t = 1.0 / (2.0 * tau)
                else:
                    t = 1.0 / (fabs(tau) + sqrt(1.0 + tau * tau))
                    if tau < 0.0:
                        t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                swr = s * wr
                swi = s * wi

                ar[p, p] = ar[p, p] - t * r
                ar[q, q] = ar[q, q] + t * r
                ar[p, q] = 0.0
                ai[p, q] = 0.0
                ar[q, p] = 0.0
                ai[q, p] = 0.0

                for i in range(n):
                    if i == p or i == q:
                        continue
                    xr = ar[i, p]
                    xi = ai[i, p]
                    yr = ar[i, q]
                    yi = ai[i, q]
                    nxr = c * xr - (swr * yr + swi * yi)
                    nxi = c * xi - (swr * yi - swi * yr)
                    nyr = swr * xr - swi * xi + c * yr
                    nyi = swr * xi + swi * xr + c * yi
                    ar[i, p] = nxr
                    ai[i, p] = nxi
                    ar[p, i] = nxr
                    ai[p, i] = -nxi
                    ar[i, q] = nyr
                    ai[i, q] = nyi
                    ar[q, i] = nyr
                    ai[q, i] = -nyi

                for i in range(n):
                    xr = vr[i, p]
                    xi = vi[i, p]
                    yr = vr[i, q]
                    yi = vi[i, q]
                    vr[i, p] = c * xr - (swr * yr + swi * yi)
                    vi[i, p] = c * xi - (swr * yi - swi * yr)
                    vr[i, q] = swr * xr - swi * xi + c * yr
                    vi[i, q] = swr * xi + swi * xr + c * yi

    return -1
