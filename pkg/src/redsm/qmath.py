"""Dense complex linear algebra, metrics and random states.

States, gates and density matrices are plain ``numpy.complex128`` arrays:
vectors are 1-D, matrices 2-D.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import DimMismatch, IndexOutOfRange, NotHermitian, NuOutOfRange

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 60


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order with matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0


@dataclass
class Prng:
    """Counter-based splittable generator (Philox keyed by a seed sequence).

    ``split(k)`` derives substream ``k`` from the seed and key path only, so
    a substream does not depend on which other substreams were used.
    """

    seed: int
    key: tuple[int, ...] = ()
    _gen: np.random.Generator | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = int(self.seed)
        self.key = tuple(int(k) for k in self.key)

    @property
    def generator(self) -> np.random.Generator:
        if self._gen is None:
            ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
            self._gen = np.random.Generator(np.random.Philox(ss))
        return self._gen

    def split(self, k: int) -> "Prng":
        return Prng(self.seed, self.key + (int(k),))

    def random(self, size=None):
        return self.generator.random(size)

    def normal(self, size=None):
        return self.generator.standard_normal(size)


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimMismatch(f"expected a matrix, got shape {m.shape}")
    return m


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*factors) -> np.ndarray:
    out = np.eye(1, dtype=np.complex128)
    for f in factors:
        out = kron(out, f)
    return out


def dagger(a) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def hermiticity_residual(h) -> float:
    h = as_matrix(h)
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def hermitian_eig(h, tol: float = HERMITIAN_TOL) -> Spectrum:
    """Full spectrum of a Hermitian matrix by cyclic complex Jacobi rotations.

    Raises NotHermitian when ``max|h - h^H| > tol``.
    """
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise DimMismatch(f"square matrix required, got {h.shape}")
    if hermiticity_residual(h) > tol:
        raise NotHermitian(f"hermiticity residual {hermiticity_residual(h):.3e} exceeds {tol:.0e}")
    herm = np.ascontiguousarray(0.5 * (h + h.conj().T))
    scale = max(1.0, float(np.linalg.norm(herm)))
    w, v, sweeps = _backend.jacobi_eigh(herm, JACOBI_TOL * scale, JACOBI_MAX_SWEEPS)
    order = np.argsort(-w, kind="stable")
    return Spectrum(np.asarray(w)[order], np.asarray(v)[:, order], int(sweeps))


def trace_distance(a, b) -> float:
    """Half the trace norm of ``a - b``, clipped to [0, 1]."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    w = hermitian_eig(a - b).eigenvalues
    return float(min(1.0, max(0.0, 0.5 * np.sum(np.abs(w)))))


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128)
    return np.outer(psi, psi.conj())


def fourier_ket(d: int, j: int) -> np.ndarray:
    """Conjugate-basis vector with components ``omega**(n*j) / sqrt(d)``."""
    if not 0 <= j < d:
        raise IndexOutOfRange(f"j={j} outside [0, {d - 1}]")
    n = np.arange(d)
    # exact integer reduction keeps large exponents accurate
    return np.exp(2j * np.pi * ((n * j) % d) / d) / np.sqrt(d)


def random_pure(d: int, mode: str, prng: Prng) -> np.ndarray:
    """Haar-random pure state, or its nonnegative-component variant.

    ``mode="nonneg"`` folds the real and imaginary parts of each Gaussian
    amplitude to be nonnegative before normalising.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    re, im = prng.normal((2, d))
    if mode == "nonneg":
        re, im = np.abs(re), np.abs(im)
    elif mode != "haar":
        raise ValueError(f"unknown mode {mode!r}")
    psi = re + 1j * im
    return psi / np.linalg.norm(psi)


def random_mixed(d: int, prng: Prng) -> np.ndarray:
    """Ginibre-ensemble density matrix ``G G^H / Tr(G G^H)``."""
    if d < 2:
        raise ValueError("d must be at least 2")
    re, im = prng.normal((2, d, d))
    g = re + 1j * im
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def nearly_pure(psi, nu: float) -> np.ndarray:
    if not 0.0 <= nu <= 1.0:
        raise NuOutOfRange(f"nu={nu} outside [0, 1]")
    psi = np.asarray(psi, dtype=np.complex128)
    d = psi.shape[0]
    return (1.0 - nu) * projector(psi) + nu * np.eye(d) / d


def is_density_matrix(rho, tol: float = 1e-12) -> bool:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    return abs(np.trace(rho) - 1.0) <= tol and hermiticity_residual(rho) <= tol
