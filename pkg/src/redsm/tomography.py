"""Forward models and estimators for the reconstruction protocols.

Probability tables are dicts keyed by ``(n, setting_id)``. Each value is an
array of shape ``(n_branches, n_outcomes)``: the joint probability, per
prepared copy, of landing in postselection branch ``j`` and measuring
outcome ``k``. Whatever is left over is the rejection probability. Sampled
tables hold observed frequencies with the same meaning.

Protocols:

* ``redsm_pure``: rebit DSM on pure states, one computational setting.
* ``dsm_pure``: usual strong DSM, pointer measured in Z, X and Y.
* ``redsm_ssb`` / ``redsm_bbb``: rebit DSM on mixed states, separable or
  Bell-type two-qubit settings.
* ``dsm_mixed``: usual DSM on mixed states.
* ``mub_qst``: tomography in d+1 mutually unbiased bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import coupling
from .errors import (
    DegenerateSigma,
    IncompleteData,
    MissingSetting,
    NotPrime,
    SingularTheta,
    ZeroNorm,
)
from .qmath import fourier_ket, hermitian_eig, projector, trace_distance

SQ2 = np.sqrt(2.0)
KET = {
    "0": np.array([1, 0], dtype=np.complex128),
    "1": np.array([0, 1], dtype=np.complex128),
    "D": np.array([1, 1], dtype=np.complex128) / SQ2,
    "A": np.array([1, -1], dtype=np.complex128) / SQ2,
    "L": np.array([1, 1j], dtype=np.complex128) / SQ2,
    "R": np.array([1, -1j], dtype=np.complex128) / SQ2,
}


@dataclass(frozen=True)
class MeasurementSetting:
    id: str
    projectors: np.ndarray  # rows are the basis vectors

    def __post_init__(self):
        v = np.asarray(self.projectors, dtype=np.complex128)
        if np.max(np.abs(v.conj() @ v.T - np.eye(v.shape[0]))) > 1e-12 or v.shape[0] != v.shape[1]:
            raise ValueError(f"setting {self.id!r} is not an orthonormal basis")
        object.__setattr__(self, "projectors", v)

    def probabilities(self, rho) -> np.ndarray:
        v = self.projectors
        return np.real(np.einsum("ki,ij,kj->k", v.conj(), rho, v))


def _pair(a: str, b: str) -> np.ndarray:
    return np.kron(KET[a], KET[b])


def _setting_from_pairs(sid: str, pairs) -> MeasurementSetting:
    return MeasurementSetting(sid, np.array([_pair(a, b) for a, b in pairs]))


# Outcome order within each Pauli product setting: (+,+), (+,-), (-,+), (-,-).
SSB_SETTINGS = (
    _setting_from_pairs("XX", ["DD", "DA", "AD", "AA"]),
    _setting_from_pairs("XY", ["DL", "DR", "AL", "AR"]),
    _setting_from_pairs("YX", ["LD", "LA", "RD", "RA"]),
    _setting_from_pairs("YY", ["LL", "LR", "RL", "RR"]),
    _setting_from_pairs("ZZ", ["00", "01", "10", "11"]),
)


def _bell(a: int, b: int, phase: complex) -> np.ndarray:
    v = np.zeros(4, dtype=np.complex128)
    v[a] = 1.0 / SQ2
    v[b] = phase / SQ2
    return v


# Outcome order: Phi+, Phi-, Psi+, Psi- (and their i-phase partners).
BBB_SETTINGS = (
    MeasurementSetting("bell", np.array([_bell(0, 3, 1), _bell(0, 3, -1), _bell(1, 2, 1), _bell(1, 2, -1)])),
    MeasurementSetting("bell_i", np.array([_bell(0, 3, 1j), _bell(0, 3, -1j), _bell(1, 2, 1j), _bell(1, 2, -1j)])),
    SSB_SETTINGS[-1],
)

POINTER_SETTINGS = (
    MeasurementSetting("Z", np.array([KET["0"], KET["1"]])),
    MeasurementSetting("X", np.array([KET["D"], KET["A"]])),
    MeasurementSetting("Y", np.array([KET["L"], KET["R"]])),
)

REDSM_PURE_SETTINGS = (SSB_SETTINGS[-1],)
_SIGNS = np.array([1.0, -1.0, -1.0, 1.0])


@dataclass
class ReconResult:
    state: np.ndarray
    trace_dist: float
    positivity: float
    metadata: dict = field(default_factory=dict)


def finalize(rho) -> np.ndarray:
    """Hermitize and normalise to unit trace."""
    rho = np.asarray(rho, dtype=np.complex128)
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr) < 1e-300:
        raise ZeroNorm("reconstruction has zero trace")
    return rho / tr


def make_result(estimate, truth, **metadata) -> ReconResult:
    """Wrap an estimate (state vector or density matrix) and score it against ``truth``."""
    est = np.asarray(estimate, dtype=np.complex128)
    rho = projector(est) if est.ndim == 1 else finalize(est)
    true = np.asarray(truth, dtype=np.complex128)
    true_rho = projector(true) if true.ndim == 1 else true
    return ReconResult(
        rho,
        trace_distance(true_rho, rho),
        float(hermitian_eig(rho).eigenvalues[-1]),
        dict(metadata),
    )


# ---------------------------------------------------------------- ReDSM pure


def redsm_pure_tables(psi, theta: float) -> dict:
    d = len(psi)
    return {
        (n, "ZZ"): (np.abs(coupling.postselect_pure(psi, n, theta).eta) ** 2)[None, :] for n in range(d)
    }


def redsm_pure_estimate(p11, p01, theta: float, d: int) -> np.ndarray:
    """Square-root inversion of the |11> and |01> populations, then normalisation."""
    s = np.sin(theta)
    if s <= 0:
        raise SingularTheta("sin(theta) must be positive")
    p11 = np.clip(np.asarray(p11, dtype=float), 0.0, None)
    p01 = np.clip(np.asarray(p01, dtype=float), 0.0, None)
    psi = (np.sqrt(d * p11) + 1j * np.sqrt(d * p01)) / s
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise ZeroNorm("all |11> and |01> probabilities vanish")
    return psi / norm


def redsm_pure_from_table(table: dict, theta: float, d: int) -> np.ndarray:
    _require(table, [(n, "ZZ") for n in range(d)])
    p = np.array([table[(n, "ZZ")][0] for n in range(d)])
    return redsm_pure_estimate(p[:, 3], p[:, 1], theta, d)


# ------------------------------------------------------------------ DSM pure


def dsm_pure_forward(psi, n: int, theta: float) -> np.ndarray:
    """Unnormalised pointer state ``v v^H / d`` with ``v = (S - eps psi_n, i sin(theta) psi_n)``."""
    psi = np.asarray(psi, dtype=np.complex128)
    d = psi.shape[0]
    v = np.array([psi.sum() - coupling.eps(theta) * psi[n], 1j * np.sin(theta) * psi[n]])
    return np.outer(v, v.conj()) / d


def dsm_pure_tables(psi, theta: float) -> dict:
    table = {}
    for n in range(len(psi)):
        rho_p = dsm_pure_forward(psi, n, theta)
        for st in POINTER_SETTINGS:
            table[(n, st.id)] = st.probabilities(rho_p)[None, :]
    return table


def pointer_coherence(probs: dict) -> complex:
    """``rho_{1,0} = (<X> + i<Y>)/2`` from (+, -) outcome weights of the X and Y settings.

    Weights are per prepared copy, so the result carries the acceptance weight.
    """
    for sid in ("X", "Y"):
        if sid not in probs:
            raise MissingSetting(f"pointer setting {sid} missing")
    px, py = np.asarray(probs["X"]), np.asarray(probs["Y"])
    return 0.5 * complex(px[0] - px[1], py[0] - py[1])


def _pointer_population(probs: dict) -> float:
    if "Z" not in probs:
        raise MissingSetting("pointer setting Z missing")
    return float(np.asarray(probs["Z"])[1])


def dsm_pure_estimate(data, theta: float, d: int) -> np.ndarray:
    """Invert the strong-DSM pointer model.

    ``data[n]`` maps ``"Z"``, ``"X"``, ``"Y"`` to outcome weights. Recovers
    ``alpha_n = psi_n conj(S)`` and rotates the global phase so that
    ``sum(alpha)`` (which equals ``|S|^2``) is real and nonnegative.
    """
    s, e = np.sin(theta), coupling.eps(theta)
    if s <= 0:
        raise SingularTheta("sin(theta) must be positive")
    if len(data) != d:
        raise IncompleteData(f"expected pointer data for {d} indices, got {len(data)}")
    alpha = np.empty(d, dtype=np.complex128)
    for n, probs in enumerate(data):
        r10 = pointer_coherence(probs)
        alpha[n] = -1j * d * r10 / s + d * e * _pointer_population(probs) / s**2
    norm = np.linalg.norm(alpha)
    if norm < 1e-9:
        raise DegenerateSigma("amplitude sum vanishes; strong DSM cannot resolve this state")
    total = alpha.sum()
    if abs(total) > 0:
        alpha *= np.conj(total) / abs(total)
    return alpha / norm


def dsm_pure_from_table(table: dict, theta: float, d: int) -> np.ndarray:
    _require(table, [(n, st.id) for n in range(d) for st in POINTER_SETTINGS])
    data = [{st.id: table[(n, st.id)][0] for st in POINTER_SETTINGS} for n in range(d)]
    return dsm_pure_estimate(data, theta, d)


# ---------------------------------------------------------- ReDSM mixed


def _correlator(p) -> float:
    return float(np.dot(_SIGNS, np.asarray(p, dtype=float)))


def ssb_extract(probs: dict) -> dict:
    """Outcome-state elements from the five separable settings.

    ``probs`` maps XX, XY, YX, YY, ZZ to their four outcome weights.
    """
    for st in SSB_SETTINGS:
        if st.id not in probs:
            raise MissingSetting(f"SSB setting {st.id} missing")
    xx, xy, yx, yy = (_correlator(probs[k]) for k in ("XX", "XY", "YX", "YY"))
    zz = np.asarray(probs["ZZ"], dtype=float)
    return {
        "rho30": 0.25 * complex(xx - yy, xy + yx),
        "rho12": 0.25 * complex(xx + yy, xy - yx),
        "rho33": float(zz[3]),
        "rho11": float(zz[1]),
    }


def bbb_extract(probs: dict) -> dict:
    """Outcome-state elements from the Bell, i-phase Bell-like and computational settings."""
    for st in BBB_SETTINGS:
        if st.id not in probs:
            raise MissingSetting(f"BBB setting {st.id} missing")
    b, bi = np.asarray(probs["bell"], dtype=float), np.asarray(probs["bell_i"], dtype=float)
    zz = np.asarray(probs["ZZ"], dtype=float)
    rho03 = complex(b[0] - b[1], -(bi[0] - bi[1])) / 2.0
    rho12 = complex(b[2] - b[3], -(bi[2] - bi[3])) / 2.0
    return {"rho30": rho03.conjugate(), "rho12": rho12, "rho33": float(zz[3]), "rho11": float(zz[1])}


def redsm_mixed_tables(rho, theta: float, settings) -> dict:
    d = rho.shape[0]
    table = {}
    for n in range(d):
        outs = [coupling.postselect_mixed(rho, n, j, theta).rho_out for j in range(d)]
        for st in settings:
            table[(n, st.id)] = np.array([st.probabilities(o) for o in outs])
    return table


def redsm_mixed_estimate(elements: dict, theta: float, d: int) -> np.ndarray:
    """Fourier inversion of the bookkeeping elements into a density matrix.

    ``elements[(n, j)]`` holds rho30, rho12, rho33, rho11. Column n of each
    part collects ``(1/sin) [d tan(theta/2) delta_mn pop(n) + i sum_j el(n, j) w^((n-m) j)]``.
    """
    s = np.sin(theta)
    if abs(s) < 1e-15:
        raise SingularTheta("sin(theta) vanishes")
    missing = [(n, j) for n in range(d) for j in range(d) if (n, j) not in elements]
    if missing:
        raise IncompleteData(f"missing elements for {missing[:3]}")
    tan_half = np.tan(theta / 2.0)
    m = np.arange(d)
    re_part = np.zeros((d, d), dtype=np.complex128)
    im_part = np.zeros((d, d), dtype=np.complex128)
    for n in range(d):
        for j in range(d):
            w = np.exp(2j * np.pi * (((n - m) * j) % d) / d)
            el = elements[(n, j)]
            re_part[:, n] += 1j * el["rho30"] * w / s
            im_part[:, n] += 1j * el["rho12"] * w / s
        pop_r = np.mean([elements[(n, j)]["rho33"] for j in range(d)])
        pop_i = np.mean([elements[(n, j)]["rho11"] for j in range(d)])
        re_part[n, n] += d * tan_half * pop_r / s
        im_part[n, n] += d * tan_half * pop_i / s
    rho = re_part.real + 1j * im_part.real
    return finalize(rho)


def redsm_mixed_from_table(table: dict, theta: float, d: int, basis: str) -> np.ndarray:
    settings, extract = (SSB_SETTINGS, ssb_extract) if basis == "ssb" else (BBB_SETTINGS, bbb_extract)
    _require(table, [(n, st.id) for n in range(d) for st in settings])
    elements = {}
    for n in range(d):
        for j in range(d):
            raw = extract({st.id: table[(n, st.id)][j] for st in settings})
            elements[(n, j)] = coupling.carrier_to_literal(raw)
    return redsm_mixed_estimate(elements, theta, d)


# ---------------------------------------------------------------- DSM mixed


def dsm_mixed_forward(rho, n: int, j: int, theta: float) -> np.ndarray:
    """Unnormalised pointer state after coupling to ``|n>`` and postselecting ``|c_j>``."""
    rho = np.asarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    c = fourier_ket(d, j)
    k0 = c.conj().copy()
    k0[n] *= 1.0 - coupling.eps(theta)
    k1 = np.zeros(d, dtype=np.complex128)
    k1[n] = 1j * np.sin(theta) * c[n].conj()
    kraus = np.array([k0, k1])
    return kraus @ rho @ kraus.conj().T


def dsm_mixed_tables(rho, theta: float) -> dict:
    d = rho.shape[0]
    table = {}
    for n in range(d):
        outs = [dsm_mixed_forward(rho, n, j, theta) for j in range(d)]
        for st in POINTER_SETTINGS:
            table[(n, st.id)] = np.array([st.probabilities(o) for o in outs])
    return table


def dsm_mixed_estimate(data: dict, theta: float, d: int) -> np.ndarray:
    """Invert the pointer model in one complex Fourier pass.

    ``data[(n, j)]`` maps Z, X, Y to outcome weights. With
    ``g(n, j) = -i d rho^p_10 / sin`` one has
    ``rho[n, k] = (1/d) sum_j g(n, j) w^((n-k) j) + delta_nk eps P(n) / sin^2``
    where ``P(n)`` sums the pointer |1> weight over branches.
    """
    s, e = np.sin(theta), coupling.eps(theta)
    if abs(s) < 1e-15:
        raise SingularTheta("sin(theta) vanishes")
    missing = [(n, j) for n in range(d) for j in range(d) if (n, j) not in data]
    if missing:
        raise IncompleteData(f"missing pointer data for {missing[:3]}")
    k = np.arange(d)
    rho = np.zeros((d, d), dtype=np.complex128)
    for n in range(d):
        for j in range(d):
            g = -1j * d * pointer_coherence(data[(n, j)]) / s
            rho[n, :] += g * np.exp(2j * np.pi * (((n - k) * j) % d) / d) / d
        pop = sum(_pointer_population(data[(n, j)]) for j in range(d))
        rho[n, n] += e * pop / s**2
    return finalize(rho)


def dsm_mixed_from_table(table: dict, theta: float, d: int) -> np.ndarray:
    _require(table, [(n, st.id) for n in range(d) for st in POINTER_SETTINGS])
    data = {
        (n, j): {st.id: table[(n, st.id)][j] for st in POINTER_SETTINGS} for n in range(d) for j in range(d)
    }
    return dsm_mixed_estimate(data, theta, d)


# ---------------------------------------------------------------------- MUB


def _is_prime(d: int) -> bool:
    return d >= 2 and all(d % p for p in range(2, int(d**0.5) + 1))


def mub_bases(d: int) -> list[MeasurementSetting]:
    """Complete set of d+1 mutually unbiased bases for prime d.

    Computational basis plus, for each b, vectors with components
    ``w^(b n^2 + k n) / sqrt(d)``; for d=2 the quadratic phase is ``i^(b n)``.
    """
    if not _is_prime(d):
        raise NotPrime(f"d={d} is not prime")
    n = np.arange(d)
    bases = [MeasurementSetting("mub0", np.eye(d, dtype=np.complex128))]
    for b in range(d):
        rows = []
        for k in range(d):
            if d == 2:
                phase = (1j ** (b * n)) * (-1.0) ** (k * n)
            else:
                phase = np.exp(2j * np.pi * ((b * n * n + k * n) % d) / d)
            rows.append(phase / np.sqrt(d))
        bases.append(MeasurementSetting(f"mub{b + 1}", np.array(rows)))
    return bases


def mub_tables(rho, bases=None) -> dict:
    rho = np.asarray(rho, dtype=np.complex128)
    bases = bases or mub_bases(rho.shape[0])
    return {(b, st.id): st.probabilities(rho)[None, :] for b, st in enumerate(bases)}


def mub_qst_estimate(probs, d: int, bases=None) -> np.ndarray:
    """``sum_{b,k} p_bk |e_bk><e_bk| - I``, Hermitized and trace-normalised."""
    bases = bases or mub_bases(d)
    if len(probs) != len(bases) or any(len(p) != d for p in probs):
        raise IncompleteData(f"need {len(bases)} outcome vectors of length {d}")
    rho = -np.eye(d, dtype=np.complex128)
    for p, st in zip(probs, bases):
        v = st.projectors
        rho += (v.T * np.asarray(p, dtype=float)) @ v.conj()
    return finalize(rho)


def mub_from_table(table: dict, d: int) -> np.ndarray:
    bases = mub_bases(d)
    _require(table, [(b, st.id) for b, st in enumerate(bases)])
    return mub_qst_estimate([table[(b, st.id)][0] for b, st in enumerate(bases)], d, bases)


def _require(table: dict, keys) -> None:
    missing = [k for k in keys if k not in table]
    if missing:
        raise IncompleteData(f"probability table lacks cells {missing[:3]}")
