"""System / extra-qubit / pointer interaction, its Molmer-Sorensen
decomposition, and the postselected extra-pointer outcome states.

Outcome states over (e, p) use the ordering |00>, |01>, |10>, |11>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadIndex, BadTheta, UnsupportedDimension
from .qmath import dagger, fourier_ket, hermitian_eig, kron_all
from .rebit import embed_mixed, embed_pure, physical_carrier

PURE = "pure"  # s (x) e (x) p
MIXED = "mixed"  # e (x) s (x) p

I2 = np.eye(2, dtype=np.complex128)
SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SZ = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def eps(theta: float) -> float:
    return 2.0 * np.sin(theta / 2.0) ** 2


@dataclass(frozen=True)
class InteractionSpec:
    d: int
    n: int
    theta: float
    layout: str = PURE

    def __post_init__(self):
        if not 0.0 < self.theta <= np.pi / 2:
            raise BadTheta(f"theta={self.theta} violates 0<theta<=pi/2")
        if not 0 <= self.n < self.d:
            raise BadIndex(f"n={self.n} outside [0, {self.d - 1}]")
        if self.layout not in (PURE, MIXED):
            raise ValueError(f"unknown layout {self.layout!r}")


@dataclass(frozen=True)
class PostselectedPure:
    eta: np.ndarray  # unnormalised, (e, p) ordering
    accept_prob: float


@dataclass(frozen=True)
class PostselectedMixed:
    rho_out: np.ndarray  # 4x4 over (e, p), unnormalised
    n: int
    j: int

    def elements(self) -> dict:
        r = self.rho_out
        return {"rho30": r[3, 0], "rho12": r[1, 2], "rho33": r[3, 3].real, "rho11": r[1, 1].real}


def _basis_projector(d: int, n: int) -> np.ndarray:
    p = np.zeros((d, d), dtype=np.complex128)
    p[n, n] = 1.0
    return p


def _ordered(spec: InteractionSpec, sys_op, e_op, p_op) -> np.ndarray:
    if spec.layout == PURE:
        return kron_all(sys_op, e_op, p_op)
    return kron_all(e_op, sys_op, p_op)


def interaction(spec: InteractionSpec) -> np.ndarray:
    """``exp(i theta |n><n| (x) sy_e (x) sy_p)`` in closed form, factors ordered per layout."""
    proj = _basis_projector(spec.d, spec.n)
    quad = _ordered(spec, proj, I2, I2)
    gen = _ordered(spec, proj, SY, SY)
    ident = np.eye(4 * spec.d, dtype=np.complex128)
    return ident + (np.cos(spec.theta) - 1.0) * quad + 1j * np.sin(spec.theta) * gen


def pointer_interaction(d: int, n: int, theta: float) -> np.ndarray:
    """Pointer-only coupling ``exp(i theta |n><n| (x) sx_p)`` used by the usual DSM, s (x) p."""
    if not 0.0 < theta <= np.pi / 2:
        raise BadTheta(f"theta={theta} violates 0<theta<=pi/2")
    if not 0 <= n < d:
        raise BadIndex(f"n={n} outside [0, {d - 1}]")
    proj = _basis_projector(d, n)
    return (
        np.eye(2 * d, dtype=np.complex128)
        + (np.cos(theta) - 1.0) * kron_all(proj, I2)
        + 1j * np.sin(theta) * kron_all(proj, SX)
    )


def collective_spin(pauli, n_qubits: int) -> np.ndarray:
    total = np.zeros((2**n_qubits, 2**n_qubits), dtype=np.complex128)
    for k in range(n_qubits):
        total += kron_all(*[pauli if i == k else I2 for i in range(n_qubits)])
    return total


def ms_gate(phi: float, varphi: float, n_qubits: int) -> np.ndarray:
    """Molmer-Sorensen gate ``exp[-i phi/4 (cos(varphi) S_x + sin(varphi) S_y)^2]``."""
    if n_qubits < 2:
        raise ValueError("the MS gate needs at least two qubits")
    a = np.cos(varphi) * collective_spin(SX, n_qubits) + np.sin(varphi) * collective_spin(SY, n_qubits)
    spec = hermitian_eig(a @ a)
    v = spec.eigenvectors
    return (v * np.exp(-1j * phi / 4.0 * spec.eigenvalues)) @ dagger(v)


def interaction_factors(spec: InteractionSpec) -> tuple[np.ndarray, np.ndarray]:
    """The two commuting factors of the d=2 interaction.

    First: ``exp(i theta/2 I_s (x) sy_e (x) sy_p)``. Second:
    ``exp(+-i theta/2 sz_s (x) sy_e (x) sy_p)`` built as
    ``U_MS(-pi/2, pi/2) exp(-+i theta/2 sz_s) U_MS^H``; the rotation sits on the
    system qubit, since MS conjugation maps ``sz_k`` to ``-sz_k`` times
    ``sy`` on the other two qubits.
    """
    if spec.d != 2:
        raise UnsupportedDimension("the MS decomposition covers the qubit system (d=2) only")
    sign = 1.0 if spec.n == 0 else -1.0
    half = spec.theta / 2.0
    two_body = np.cos(half) * np.eye(8) + 1j * np.sin(half) * _ordered(spec, I2, SY, SY)
    rot = np.diag(np.exp(-1j * sign * half * np.array([1.0, -1.0])))
    local = _ordered(spec, rot, I2, I2)
    u_ms = ms_gate(-np.pi / 2, np.pi / 2, 3)
    return two_body, u_ms @ local @ dagger(u_ms)


def decomposed_interaction(spec: InteractionSpec) -> np.ndarray:
    first, second = interaction_factors(spec)
    return first @ second


def _conjugate_bra(d: int, j: int, n_after: int) -> np.ndarray:
    """``<c_j| (x) I_k`` as a (k x d*k) matrix acting on system (x) rest."""
    return np.kron(fourier_ket(d, j).conj()[None, :], np.eye(n_after))


def postselect_pure(psi, n: int, theta: float) -> PostselectedPure:
    """Closed-form extra-pointer state after postselection on ``|c_0>``."""
    psi = np.asarray(psi, dtype=np.complex128)
    d = psi.shape[0]
    if not 0 <= n < d:
        raise BadIndex(f"n={n} outside [0, {d - 1}]")
    s, e = np.sin(theta), eps(theta)
    sig_r, sig_i = psi.real.sum(), psi.imag.sum()
    pr, pi_ = psi[n].real, psi[n].imag
    eta = np.array(
        [sig_r - e * pr, 1j * s * pi_, sig_i - e * pi_, -1j * s * pr], dtype=np.complex128
    ) / np.sqrt(d)
    return PostselectedPure(eta, float(np.vdot(eta, eta).real))


def evolve_postselect_pure(psi, n: int, theta: float, j: int = 0) -> np.ndarray:
    """Matrix route: embed, apply the interaction, project the system onto ``|c_j>``."""
    psi = np.asarray(psi, dtype=np.complex128)
    d = psi.shape[0]
    state = np.kron(embed_pure(psi).amplitudes, np.array([1.0, 0.0]))
    out = interaction(InteractionSpec(d, n, theta, PURE)) @ state
    return _conjugate_bra(d, j, 4) @ out


def _mixed_output(block_matrix, d: int, n: int, j: int, theta: float) -> np.ndarray:
    u = interaction(InteractionSpec(d, n, theta, MIXED))
    p0 = np.diag([1.0, 0.0]).astype(np.complex128)
    rho_in = np.kron(block_matrix, p0)
    evolved = u @ rho_in @ dagger(u)
    # reorder e (x) s (x) p -> s (x) e (x) p so the system can be projected
    t = evolved.reshape(2, d, 2, 2, d, 2).transpose(1, 0, 2, 4, 3, 5).reshape(4 * d, 4 * d)
    bra = _conjugate_bra(d, j, 4)
    return bra @ t @ dagger(bra)


def postselect_mixed(rho, n: int, j: int, theta: float) -> PostselectedMixed:
    """Postselected (e, p) state for the positive rebit carrier.

    Map its elements to the bookkeeping ones with ``carrier_to_literal``.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    if not (0 <= n < d and 0 <= j < d):
        raise BadIndex(f"(n, j)=({n}, {j}) outside [0, {d - 1}]")
    out = _mixed_output(physical_carrier(rho), d, n, j, theta)
    return PostselectedMixed(out, n, j)


def bookkeeping_output(rho, n: int, j: int, theta: float) -> np.ndarray:
    """The same pipeline fed the block-diagonal Re/Im bookkeeping matrix (not a state)."""
    rho = np.asarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    return _mixed_output(embed_mixed(rho).matrix, d, n, j, theta)


def carrier_to_literal(el: dict) -> dict:
    """Carrier elements -> the bookkeeping elements rho30, rho12, rho33, rho11."""
    return {
        "rho30": 2.0 * el["rho30"],
        "rho12": (2.0 * el["rho12"] + 2.0 * el["rho30"]) / 1j,
        "rho33": 2.0 * el["rho33"],
        "rho11": (2.0 * el["rho11"] - 2.0 * el["rho33"]) / 1j,
    }


def literal_elements(rho, n: int, j: int, theta: float) -> dict:
    """Closed forms of the four bookkeeping outcome elements."""
    rho = np.asarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    w = np.exp(2j * np.pi * (((np.arange(d) - n) * j) % d) / d)
    s, e = np.sin(theta), eps(theta)
    re, im = rho.real, rho.imag
    return {
        "rho30": -1j * s / d * (np.sum(re[:, n] * w) - e * re[n, n]),
        "rho12": -1j * s / d * (np.sum(im[:, n] * w) - e * im[n, n]),
        "rho33": s**2 / d * re[n, n],
        "rho11": s**2 / d * im[n, n],
    }
