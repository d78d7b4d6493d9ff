"""Acceptance criteria 1-10.

Each test records a ``CRITERION k: PASS|FAIL`` line (echoed in the pytest
terminal summary) and then asserts the verdict. Tolerances are the pinned
contract values; nothing here is relaxed to make a criterion pass.
"""

import math
import time

import numpy as np
import pytest

import conftest
from oracles import RHO_REF, random_state, random_unitary
from redsm import montecarlo as mc
from redsm import tomography as tomo
from redsm.coupling import InteractionSpec, decomposed_interaction, interaction, interaction_factors
from redsm.qmath import Prng, hermitian_eig, random_mixed, random_pure, trace_distance
from redsm.rebit import embed_pure, real_form_gate
from redsm.scenarios import DEFAULT_SEED, default_scenario, render_csv, compute, validate
from dataclasses import replace

SEED = DEFAULT_SEED
M = 100
HALF_PI = math.pi / 2


def verdict(label, ok, detail):
    line = f"CRITERION {label}: {'PASS' if ok else 'FAIL'} | {detail}"
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    return ok


def aggregate(protocol, kind, d, theta, nc, batches=M, nu=None, batch_mode="paper", seed=SEED):
    cfg = mc.ProtocolConfig(protocol, d, theta, seed)
    budget = mc.SampleBudget(nc, batches, "paper", batch_mode)
    return mc.run_batches(cfg, mc.state_source(kind, d, nu), budget)


def combined_se(a, b):
    return math.hypot(a.sem, b.sem)


def fmt_means(aggs):
    return ", ".join(f"{k}={v.mean:.4g}+-{v.sem:.2g}" for k, v in aggs.items())


# ------------------------------------------------------------------ 1


def test_criterion_1_exactness():
    start = time.perf_counter()
    worst = {}
    base = Prng(SEED)

    def track(name, value):
        worst[name] = max(worst.get(name, 0.0), value)

    for d in (2, 3, 5):
        for k in range(100):
            p = base.split(d).split(k)
            theta = 0.1 + (HALF_PI - 0.1) * k / 99
            rho = random_mixed(d, p.split(0))
            track("mub_qst", trace_distance(tomo.mub_from_table(tomo.mub_tables(rho), d), rho))
            if d == 5:
                continue
            psi_nn = random_pure(d, "nonneg", p.split(1))
            est = tomo.redsm_pure_from_table(tomo.redsm_pure_tables(psi_nn, theta), theta, d)
            track("redsm_pure", tomo.make_result(est, psi_nn).trace_dist)
            psi = random_pure(d, "haar", p.split(2))
            est = tomo.dsm_pure_from_table(tomo.dsm_pure_tables(psi, theta), theta, d)
            track("dsm_pure", tomo.make_result(est, psi).trace_dist)  # projector: phase-free
            for basis, settings in (("ssb", tomo.SSB_SETTINGS), ("bbb", tomo.BBB_SETTINGS)):
                est = tomo.redsm_mixed_from_table(tomo.redsm_mixed_tables(rho, theta, settings), theta, d, basis)
                track(f"redsm_{basis}", trace_distance(est, rho))
            est = tomo.dsm_mixed_from_table(tomo.dsm_mixed_tables(rho, theta), theta, d)
            track("dsm_mixed", trace_distance(est, rho))
    elapsed = time.perf_counter() - start
    ok = all(v < 1e-10 for v in worst.values()) and elapsed < 60
    detail = ", ".join(f"{k}={v:.1e}" for k, v in worst.items())
    assert verdict(1, ok, f"max trace distance {detail} (tol 1e-10); {elapsed:.1f}s (limit 60s)")


# ------------------------------------------------------------------ 2


def propagated_sigma(rho, theta, copies, basis="ssb"):
    """Per-element standard deviation of the sampled reconstruction.

    Multinomial covariance of every measurement cell (reject branch
    included) pushed through a finite-difference Jacobian of the estimator.
    """
    d = rho.shape[0]
    settings = tomo.SSB_SETTINGS if basis == "ssb" else tomo.BBB_SETTINGS
    table = tomo.redsm_mixed_tables(rho, theta, settings)
    alloc = mc.allocate(f"redsm_{basis}", d, copies, "paper")
    base = tomo.redsm_mixed_from_table(table, theta, d, basis)
    var = np.zeros((d, d, 2))
    h = 1e-7
    for cell, probs in table.items():
        flat = probs.ravel()
        p = np.append(flat, max(0.0, 1.0 - flat.sum()))
        cov = (np.diag(p) - np.outer(p, p)) / alloc[cell]
        jac = np.zeros((d, d, 2, p.size))
        for i in range(flat.size):
            bumped = {k: v.copy() for k, v in table.items()}
            bumped[cell].reshape(-1)[i] += h
            diff = (tomo.redsm_mixed_from_table(bumped, theta, d, basis) - base) / h
            jac[:, :, 0, i], jac[:, :, 1, i] = diff.real, diff.imag
        var += np.einsum("abci,ij,abcj->abc", jac, cov, jac)
    return np.sqrt(var)


def test_criterion_2_reference_example():
    start = time.perf_counter()
    sigma = propagated_sigma(RHO_REF, HALF_PI, 10**7)
    bound = 3 * sigma.max()
    budget = mc.SampleBudget(10**7, 1, "paper", "fixed-state")
    out = mc.run_trial(mc.ProtocolConfig("redsm_ssb", 2, HALF_PI, SEED), mc.state_source("reference", 2), budget, 0)
    est = out.result.state
    err = np.max(np.abs(est - RHO_REF))
    eig = hermitian_eig(est).eigenvalues
    elapsed = time.perf_counter() - start
    ok = err < 5e-3 and eig.min() > 0 and elapsed < 300
    assert verdict(
        2, ok,
        f"seed {SEED}: max |rho_est - rho_true| = {err:.2e} (tol 5e-3; propagated 3-sigma {bound:.2e}); "
        f"eigenvalues {eig[0]:.5f}, {eig[1]:.5f} (reference run 0.88321, 0.11679); {elapsed:.1f}s",
    )


def test_criterion_2_over_seeds():
    # supplementary: the 5e-3 band holds for at least 99% of seeds
    budget = mc.SampleBudget(10**7, 1, "paper", "fixed-state")
    errors = []
    for seed in range(1, 41):
        out = mc.run_trial(mc.ProtocolConfig("redsm_ssb", 2, HALF_PI, seed), mc.state_source("reference", 2), budget, 0)
        errors.append(np.max(np.abs(out.result.state - RHO_REF)))
    assert max(errors) < 5e-3


# ------------------------------------------------------------------ 3


def test_criterion_3_pure_ordering():
    start = time.perf_counter()
    failures, notes = [], []
    for nc in (10**5, 10**6, 10**7):
        aggs = {p: aggregate(p, "pure", 2, HALF_PI, nc) for p in ("redsm_pure", "dsm_pure", "mub_qst")}
        r, dsm, mub = aggs["redsm_pure"], aggs["dsm_pure"], aggs["mub_qst"]
        checks = {
            "redsm<dsm": r.mean < dsm.mean,
            "redsm<mub": r.mean < mub.mean,
            "|dsm-mub|<2se": abs(dsm.mean - mub.mean) < 2 * combined_se(dsm, mub),
        }
        failures += [f"N_c={nc:.0e} {k}" for k, v in checks.items() if not v]
        notes.append(f"N_c={nc:.0e}: {fmt_means(aggs)}")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 1200
    assert verdict(3, ok, "; ".join(notes) + (f" | failed: {', '.join(failures)}" if failures else "") + f"; {elapsed:.1f}s")


# ------------------------------------------------------------------ 4


def test_criterion_4_dimension_monotone():
    failures, notes = [], []
    for proto in ("redsm_pure", "dsm_pure", "mub_qst"):
        means = [aggregate(proto, "pure", d, HALF_PI, 10**7).mean for d in (2, 3, 5)]
        notes.append(f"{proto}: " + " < ".join(f"{m:.4g}" for m in means))
        if not all(a < b for a, b in zip(means, means[1:])):
            failures.append(proto)
    assert verdict(4, not failures, "d=2,3,5 means " + "; ".join(notes) + (f" | failed: {failures}" if failures else ""))


# ------------------------------------------------------------------ 5


MIXED_DSM = ("redsm_ssb", "redsm_bbb", "dsm_mixed")


def test_criterion_5a_mixed_ordering():
    aggs = {p: aggregate(p, "mixed", 2, HALF_PI, 10**6) for p in MIXED_DSM + ("mub_qst",)}
    failures = []
    for i, a in enumerate(MIXED_DSM):
        for b in MIXED_DSM[i + 1:]:
            if abs(aggs[a].mean - aggs[b].mean) >= 2 * combined_se(aggs[a], aggs[b]):
                failures.append(f"{a} vs {b} differ by >= 2 se")
        if not aggs[a].mean > aggs["mub_qst"].mean:
            failures.append(f"{a} not above mub_qst")
    assert verdict("5a", not failures, fmt_means(aggs) + (f" | failed: {'; '.join(failures)}" if failures else ""))


def test_criterion_5b_theta_monotone():
    thetas = [k * 0.05 * math.pi for k in range(2, 11)]
    failures, notes = [], []
    for proto in MIXED_DSM:
        aggs = [aggregate(proto, "mixed", 2, th, 10**7) for th in thetas]
        violations = [(i, a, b) for i, (a, b) in enumerate(zip(aggs, aggs[1:])) if b.mean > a.mean]
        hard = [v for v in violations if v[2].mean - v[1].mean >= 2 * combined_se(v[1], v[2])]
        if len(violations) > 1 or hard:
            failures.append(f"{proto}: {len(violations)} rises, {len(hard)} outside error bars")
        notes.append(f"{proto} " + "/".join(f"{a.mean:.3g}" for a in aggs))
    mub = [aggregate("mub_qst", "mixed", 2, th, 10**5, batches=10).mean for th in (thetas[0], thetas[-1])]
    if mub[0] != mub[1]:
        failures.append("mub row varies with theta")
    assert verdict("5b", not failures, "; ".join(notes) + (f" | failed: {'; '.join(failures)}" if failures else ""))


# ------------------------------------------------------------------ 6


def test_criterion_6_nearly_pure():
    failures, notes = [], []
    for nu in [round(0.01 * k, 2) for k in range(1, 11)]:
        aggs = {p: aggregate(p, "nearly_pure", 2, HALF_PI, 10**6, nu=nu) for p in MIXED_DSM}
        best = min(aggs, key=lambda p: aggs[p].mean)
        if not (aggs["redsm_ssb"].mean <= aggs["redsm_bbb"].mean and aggs["redsm_ssb"].mean <= aggs["dsm_mixed"].mean):
            failures.append(f"nu={nu}: lowest is {best}")
        if nu in (0.01, 0.1):
            notes.append(f"nu={nu}: {fmt_means(aggs)}")
    assert verdict(6, not failures, "; ".join(notes) + (f" | failed at {len(failures)}/10 nu points: {failures[0]}" if failures else ""))


# ------------------------------------------------------------------ 7


SLOPE_BATCHES = 20  # fixed-state mode spends the full N_c on each batch


def test_criterion_7_shot_noise():
    ncs = np.array([10**4, 10**5, 10**6, 10**7])
    failures, notes = [], []
    for proto, kind in (("redsm_pure", "pure"), ("dsm_pure", "pure"), ("redsm_ssb", "mixed"), ("redsm_bbb", "mixed"),
                        ("dsm_mixed", "mixed"), ("mub_qst", "mixed")):
        means = [aggregate(proto, kind, 2, HALF_PI, int(nc), batches=SLOPE_BATCHES, batch_mode="fixed-state").mean
                 for nc in ncs]
        slope = np.polyfit(np.log10(ncs), np.log10(means), 1)[0]
        notes.append(f"{proto}={slope:.3f}")
        if abs(slope + 0.5) > 0.1:
            failures.append(proto)
    assert verdict(7, not failures, "slopes " + ", ".join(notes) + " (target -0.5+-0.1)" + (f" | failed: {failures}" if failures else ""))


# ------------------------------------------------------------------ 8


def test_criterion_8_decomposition():
    worst_eq, worst_comm = 0.0, 0.0
    for theta in (0.1, math.pi / 4, HALF_PI):
        for n in (0, 1):
            spec = InteractionSpec(2, n, theta)
            worst_eq = max(worst_eq, np.max(np.abs(decomposed_interaction(spec) - interaction(spec))))
            a, b = interaction_factors(spec)
            worst_comm = max(worst_comm, np.max(np.abs(a @ b - b @ a)))
    ok = worst_eq < 1e-12 and worst_comm < 1e-12
    assert verdict(8, ok, f"max |decomposed - U| = {worst_eq:.1e}, max |[A, B]| = {worst_comm:.1e} (tol 1e-12)")


# ------------------------------------------------------------------ 9


def test_criterion_9_rebit_equivalence():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(2, 5))
        u, psi = random_unitary(d, rng), random_state(d, rng)
        worst = max(worst, np.max(np.abs(embed_pure(u @ psi).amplitudes - real_form_gate(u) @ embed_pure(psi).amplitudes)))
    tau = math.pi / 3
    psi = np.array([0.6, 0.48 + 0.64j])
    out = real_form_gate(np.diag([1, np.exp(1j * tau)])) @ embed_pure(psi).amplitudes
    ref = [math.cos(tau) * 0.48 - math.sin(tau) * 0.64, math.sin(tau) * 0.48 + math.cos(tau) * 0.64]
    rz_err = np.max(np.abs(out[2:] - ref))
    ok = worst < 1e-12 and rz_err < 1e-12
    assert verdict(9, ok, f"max error over 1000 (U, psi) = {worst:.1e}; R_z example error {rz_err:.1e} (tol 1e-12)")


# ------------------------------------------------------------------ 10


def test_criterion_10_determinism():
    mismatched = []
    for name in ("fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5"):
        s = validate(default_scenario(name))
        if name not in ("fig2a", "fig5"):
            s = replace(s, nc=[min(nc, 10**5) for nc in s.nc], batches=10)
        first = render_csv(s, compute(s)).encode("utf-8")
        second = render_csv(s, compute(replace(s, workers=2))).encode("utf-8")
        if first != second:
            mismatched.append(name)
    assert verdict(10, not mismatched, "byte-identical CSV on repeat (second run with 2 workers) for fig2a..fig5"
                   + (f" | differ: {mismatched}" if mismatched else ""))
