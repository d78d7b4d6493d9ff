"""Numpy fallback for the compiled kernels in ``_kernels.pyx``.

Signatures and results match the compiled versions exactly for the
sampler (same bisection rule) and to rounding for the eigensolver.
"""

import numpy as np


def bisect_counts(cdf, u, counts):
    idx = np.searchsorted(cdf, u, side="right")
    np.minimum(idx, len(cdf) - 1, out=idx)
    counts += np.bincount(idx, minlength=len(cdf)).astype(counts.dtype)


def jacobi_eigh(a_in, tol, max_sweeps):
    a = np.array(a_in, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    iu = np.triu_indices(n, 1)
    sweep = 0
    while sweep < max_sweeps:
        if np.sqrt(2.0 * np.sum(np.abs(a[iu]) ** 2)) < tol:
            break
        for p in range(n):
            for q in range(p + 1, n):
                g = a[p, q]
                mag = abs(g)
                if mag == 0.0:
                    continue
                ph = g / mag
                zeta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if zeta >= 0:
                    t = 1.0 / (zeta + np.hypot(1.0, zeta))
                else:
                    t = -1.0 / (-zeta + np.hypot(1.0, zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * np.conj(ph) * cq
                a[:, q] = s * cp + c * np.conj(ph) * cq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(ph) * vq
                v[:, q] = s * vp + c * np.conj(ph) * vq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * ph * rq
                a[q, :] = s * rp + c * ph * rq
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
        sweep += 1
    return np.real(np.diag(a)).copy(), v, sweep
