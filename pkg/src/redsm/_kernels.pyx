# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: per-copy bisection sampling and complex Jacobi."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot
from libc.complex cimport cabs, conj

cnp.import_array()


def bisect_counts(const double[::1] cdf, const double[::1] u, cnp.int64_t[::1] counts):
    """Accumulate into ``counts`` the bisection index of every draw in ``u``.

    The index of a draw is the smallest k with ``u < cdf[k]``; draws at or
    beyond the last edge land in the final cell.
    """
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t k = cdf.shape[0]
    cdef Py_ssize_t i, lo, hi, mid
    cdef double x
    for i in range(n):
        x = u[i]
        lo = 0
        hi = k - 1
        while lo < hi:
            mid = (lo + hi) >> 1
            if x < cdf[mid]:
                hi = mid
            else:
                lo = mid + 1
        counts[lo] += 1


def jacobi_eigh(double complex[:, ::1] a_in, double tol, int max_sweeps):
    """Cyclic complex Jacobi on a Hermitian matrix.

    Returns unsorted ``(eigenvalues, eigenvectors, sweeps)`` with eigenvectors
    as columns.
    """
    cdef Py_ssize_t n = a_in.shape[0]
    a_np = np.array(a_in, dtype=np.complex128, copy=True)
    v_np = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] a = a_np
    cdef double complex[:, ::1] v = v_np
    cdef Py_ssize_t p, q, k
    cdef int sweep = 0
    cdef double off, mag, zeta, t, c, s, app, aqq
    cdef double complex ph, g, akp, akq, vkp, vkq
    while sweep < max_sweeps:
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                mag = cabs(a[p, q])
                off += 2.0 * mag * mag
        if sqrt(off) < tol:
            break
        for p in range(n):
            for q in range(p + 1, n):
                g = a[p, q]
                mag = cabs(g)
                if mag == 0.0:
                    continue
                ph = g / mag
                app = a[p, p].real
                aqq = a[q, q].real
                zeta = (aqq - app) / (2.0 * mag)
                if zeta >= 0:
                    t = 1.0 / (zeta + hypot(1.0, zeta))
                else:
                    t = -1.0 / (-zeta + hypot(1.0, zeta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                # columns: A <- A V with V = diag(1, conj(ph)) . [[c, s], [-s, c]]
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * conj(ph) * akq
                    a[k, q] = s * akp + c * conj(ph) * akq
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * conj(ph) * vkq
                    v[k, q] = s * vkp + c * conj(ph) * vkq
                # rows: A <- V^H A
                for k in range(n):
                    akp = a[p, k]
                    akq = a[q, k]
                    a[p, k] = c * akp - s * ph * akq
                    a[q, k] = s * akp + c * ph * akq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
        sweep += 1
    w = np.empty(n, dtype=np.float64)
    for k in range(n):
        w[k] = a[k, k].real
    return w, v_np, sweep
