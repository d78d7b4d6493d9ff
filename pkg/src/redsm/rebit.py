"""Real enlarged-space ("rebit") encodings of complex states and gates.

Two index layouts are in use:

* ``SYSTEM_MAJOR`` (pure states): index ``2*n + e``, amplitudes
  ``(Re psi_0, Im psi_0, Re psi_1, Im psi_1, ...)``.
* ``EXTRA_MAJOR`` (mixed states): index ``e*d + n``, the extra qubit first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotDensityMatrix, NotReal, NotUnitary
from .qmath import as_matrix, hermiticity_residual

SYSTEM_MAJOR = "system-major"
EXTRA_MAJOR = "extra-major"


@dataclass(frozen=True)
class RebitState:
    dim_system: int
    amplitudes: np.ndarray  # length 2d, system-major


@dataclass(frozen=True)
class RebitDensity:
    """Block-diagonal bookkeeping matrix ``|0><0| (x) Re(rho) + |1><1| (x) Im(rho)``.

    Not a physical state: the Im block is antisymmetric.
    """

    dim_system: int
    matrix: np.ndarray  # 2d x 2d, extra-major

    @property
    def re_block(self) -> np.ndarray:
        d = self.dim_system
        return self.matrix[:d, :d]

    @property
    def im_block(self) -> np.ndarray:
        d = self.dim_system
        return self.matrix[d:, d:]


def embed_pure(psi) -> RebitState:
    psi = np.asarray(psi, dtype=np.complex128)
    amps = np.empty(2 * psi.shape[0], dtype=np.complex128)
    amps[0::2] = psi.real
    amps[1::2] = psi.imag
    return RebitState(psi.shape[0], amps)


def unembed_pure(r: RebitState, tol: float = 1e-10) -> np.ndarray:
    amps = np.asarray(r.amplitudes)
    if amps.size and np.max(np.abs(amps.imag)) > tol:
        raise NotReal(f"rebit amplitudes carry imaginary residue {np.max(np.abs(amps.imag)):.3e}")
    return amps[0::2].real + 1j * amps[1::2].real


def system_to_extra_major(vec_or_mat, d: int) -> np.ndarray:
    """Reorder a length-2d vector or 2d x 2d matrix from (n, e) to (e, n) indexing."""
    perm = np.array([2 * n + e for e in range(2) for n in range(d)])
    a = np.asarray(vec_or_mat)
    return a[perm] if a.ndim == 1 else a[np.ix_(perm, perm)]


def extra_to_system_major(vec_or_mat, d: int) -> np.ndarray:
    perm = np.array([e * d + n for n in range(d) for e in range(2)])
    a = np.asarray(vec_or_mat)
    return a[perm] if a.ndim == 1 else a[np.ix_(perm, perm)]


def real_form_gate(u, tol: float = 1e-10) -> np.ndarray:
    """Real orthogonal 2d x 2d form of a d x d unitary, system-major layout.

    Column (n, 0) carries ``Re(U)|n>`` on e=0 and ``Im(U)|n>`` on e=1;
    column (n, 1) carries ``-Im(U)|n>`` and ``Re(U)|n>``.
    """
    u = as_matrix(u)
    d = u.shape[0]
    if u.shape != (d, d) or np.max(np.abs(u.conj().T @ u - np.eye(d))) > tol:
        raise NotUnitary("gate is not unitary within tolerance")
    q = np.zeros((2 * d, 2 * d))
    q[0::2, 0::2] = u.real
    q[1::2, 0::2] = u.imag
    q[0::2, 1::2] = -u.imag
    q[1::2, 1::2] = u.real
    return q.astype(np.complex128)


def embed_mixed(rho, tol: float = 1e-10) -> RebitDensity:
    rho = as_matrix(rho)
    d = rho.shape[0]
    if rho.shape != (d, d) or abs(np.trace(rho) - 1.0) > tol or hermiticity_residual(rho) > tol:
        raise NotDensityMatrix("input must be Hermitian with unit trace")
    m = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    m[:d, :d] = rho.real
    m[d:, d:] = rho.imag
    return RebitDensity(d, m)


def physical_carrier(rho) -> np.ndarray:
    """Positive, unit-trace stand-in for the bookkeeping embedding.

    ``(|0><0| (x) Re(rho) + |1><1| (x) rho) / 2`` in extra-major layout. The
    e=0 block is exactly Re(rho); the e=1 block carries Re(rho) + i Im(rho),
    from which the Im(rho) contributions are recovered by subtracting the
    e=0 sector (see ``coupling.carrier_to_literal``).
    """
    emb = embed_mixed(rho)
    d = emb.dim_system
    m = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    m[:d, :d] = 0.5 * emb.re_block
    m[d:, d:] = 0.5 * as_matrix(rho)
    return m
