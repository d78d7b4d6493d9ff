"""Benchmark scenarios: parameter grids, CSV output and the ordering summary."""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import montecarlo as mc
from .errors import ConfigError
from .qmath import Prng, hermitian_eig

CSV_HEADER = (
    "scenario",
    "protocol",
    "d",
    "theta",
    "nu",
    "N_c",
    "mean_trace_dist",
    "std_trace_dist",
    "batches",
    "seed",
)
DEFAULT_SEED = 20180701
SCENARIO_NAMES = ("fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5", "custom")
STATE_KINDS = ("pure", "pure_haar", "mixed", "nearly_pure", "reference")

NC_SWEEP = (10**4, 10**5, 10**6, 10**7)
PURE_SET = ("dsm_pure", "redsm_pure", "mub_qst")
MIXED_SET = ("dsm_mixed", "redsm_ssb", "redsm_bbb", "mub_qst")
HALF_PI = math.pi / 2


@dataclass
class Scenario:
    name: str
    state: str = "pure"
    d: list = field(default_factory=lambda: [2])
    theta: list = field(default_factory=lambda: [HALF_PI])
    nc: list = field(default_factory=lambda: list(NC_SWEEP))
    nu: list = field(default_factory=lambda: [None])
    protocols: list = field(default_factory=list)
    seed: int = DEFAULT_SEED
    batches: int = 100
    budget_mode: str = "paper"
    batch_mode: str = "paper"
    out: str | None = None
    exact: bool = False
    workers: int = 1

    def output_path(self) -> str:
        return self.out or f"{self.name}.csv"


def default_scenario(name: str) -> Scenario:
    if name not in SCENARIO_NAMES:
        raise ConfigError(f"scenario: unknown name {name!r}; expected one of {', '.join(SCENARIO_NAMES)}")
    if name == "fig2a":
        return Scenario(name, "pure", protocols=list(PURE_SET))
    if name == "fig2b":
        return Scenario(name, "pure", d=[2, 3, 4, 5, 6, 7], nc=[10**7], protocols=list(PURE_SET))
    if name == "fig3a":
        return Scenario(name, "mixed", protocols=list(MIXED_SET))
    if name == "fig3b":
        thetas = [round(k * 0.05, 2) * math.pi for k in range(2, 11)]
        return Scenario(name, "mixed", theta=thetas, nc=[10**7], protocols=list(MIXED_SET))
    if name == "fig4a":
        return Scenario(name, "nearly_pure", nu=[0.10], protocols=list(MIXED_SET))
    if name == "fig4b":
        nus = [round(0.01 * k, 2) for k in range(1, 11)]
        return Scenario(name, "nearly_pure", nu=nus, nc=[10**6], protocols=list(MIXED_SET))
    if name == "fig5":
        return Scenario(name, "reference", nc=[10**7], protocols=["redsm_ssb"], batches=1, batch_mode="fixed-state")
    return Scenario(name, "pure", protocols=[])


def canonical_protocol(name: str, state: str) -> str:
    pure = state in ("pure", "pure_haar")
    aliases = {
        "dsm": "dsm_pure" if pure else "dsm_mixed",
        "redsm": "redsm_pure" if pure else "redsm_ssb",
        "ssb": "redsm_ssb",
        "bbb": "redsm_bbb",
        "mub": "mub_qst",
        "qst": "mub_qst",
    }
    proto = aliases.get(name, name)
    if proto not in mc.PROTOCOLS:
        raise ConfigError(f"protocols: unknown protocol {name!r}")
    if mc.PROTOCOLS[proto].needs_pure and not pure:
        raise ConfigError(f"protocols: {proto} needs pure states, scenario state is {state!r}")
    return proto


def validate(s: Scenario) -> Scenario:
    if s.state not in STATE_KINDS:
        raise ConfigError(f"state: unknown kind {s.state!r}")
    if not s.protocols:
        raise ConfigError("protocols: list is empty")
    for key in ("d", "theta", "nc", "nu"):
        if not getattr(s, key):
            raise ConfigError(f"{key}: grid is empty")
    for th in s.theta:
        if not 0.0 < th <= HALF_PI:
            raise ConfigError(f"theta: {th} violates 0<theta<=pi/2")
    for d in s.d:
        if d < 2:
            raise ConfigError(f"d: {d} must be >= 2")
    if s.state == "reference" and s.d != [2]:
        raise ConfigError("d: the example state is a qubit state (d=2)")
    for nc in s.nc:
        if nc < 1:
            raise ConfigError(f"nc: {nc} must be positive")
    if s.state == "nearly_pure":
        for nu in s.nu:
            if nu is None or not 0.0 <= nu <= 1.0:
                raise ConfigError(f"nu: {nu} must lie in [0, 1]")
    if s.batches < 1:
        raise ConfigError("batches: must be >= 1")
    if not 0 <= s.seed < 2**64:
        raise ConfigError("seed: must be a 64-bit unsigned integer")
    if s.workers < 1:
        raise ConfigError("workers: must be >= 1")
    protos = [canonical_protocol(p, s.state) for p in s.protocols]
    return replace(s, protocols=list(dict.fromkeys(protos)))


def _is_prime(d: int) -> bool:
    return d >= 2 and all(d % p for p in range(2, int(d**0.5) + 1))


def grid_jobs(s: Scenario) -> list[tuple]:
    """(protocol, d, theta, nu, N_c) in deterministic output order.

    MUB points are skipped for non-prime d. Under a theta sweep the MUB point
    is computed once and replicated, since MUB does not use the coupling.
    """
    jobs = []
    for d in s.d:
        for nu in s.nu:
            for nc in s.nc:
                for theta in s.theta:
                    for proto in s.protocols:
                        if proto == "mub_qst" and not _is_prime(d):
                            continue
                        jobs.append((proto, d, theta, nu, nc))
    return jobs


@dataclass
class PointResult:
    protocol: str
    d: int
    theta: float
    nu: float | None
    nc: int
    mean: float
    std: float
    batches: int
    state: np.ndarray | None = None
    min_eig: float | None = None


def run_point(s: Scenario, proto: str, d: int, theta: float, nu, nc: int) -> PointResult:
    cfg = mc.ProtocolConfig(proto, d, theta, s.seed, s.exact)
    source = mc.state_source(s.state, d, nu)
    if s.batches == 1:
        budget = mc.SampleBudget(nc, 1, s.budget_mode, s.batch_mode)
        outcome = mc.run_trial(cfg, source, budget, 0)
        res = outcome.result
        return PointResult(proto, d, theta, nu, nc, outcome.trace_dist, 0.0, 1, res.state, res.positivity)
    agg = mc.run_batches(cfg, source, mc.SampleBudget(nc, s.batches, s.budget_mode, s.batch_mode))
    return PointResult(proto, d, theta, nu, nc, agg.mean, agg.std, s.batches)


def _run_job(args):
    s, job = args
    return run_point(s, *job)


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.9g}"


def csv_rows(s: Scenario, results: list[PointResult]) -> list[list[str]]:
    return [
        [s.name, r.protocol, fmt(r.d), fmt(r.theta), fmt(r.nu), fmt(r.nc), fmt(r.mean), fmt(r.std),
         fmt(r.batches), fmt(s.seed)]
        for r in results
    ]


def render_csv(s: Scenario, results: list[PointResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(csv_rows(s, results))
    return buf.getvalue()


def compute(s: Scenario) -> list[PointResult]:
    s = validate(s)
    jobs = grid_jobs(s)
    theta_sweep = len(s.theta) > 1
    unique, index = [], {}
    for job in jobs:
        key = job
        if theta_sweep and job[0] == "mub_qst":
            key = (job[0], job[1], s.theta[0], job[3], job[4])
        if key not in index:
            index[key] = len(unique)
            unique.append(key)
    if s.workers > 1 and len(unique) > 1:
        with ProcessPoolExecutor(max_workers=s.workers) as pool:
            solved = list(pool.map(_run_job, [(s, job) for job in unique]))
    else:
        solved = [run_point(s, *job) for job in unique]
    results = []
    for job in jobs:
        key = job
        if theta_sweep and job[0] == "mub_qst":
            key = (job[0], job[1], s.theta[0], job[3], job[4])
        results.append(replace(solved[index[key]], theta=job[2]))
    return results


def summary(s: Scenario, results: list[PointResult]) -> str:
    lines = [f"scenario {s.name}: state={s.state} seed={s.seed} batches={s.batches} "
             f"budget={s.budget_mode} batch={s.batch_mode} exact={s.exact}"]
    groups: dict = {}
    for r in results:
        groups.setdefault((r.d, r.theta, r.nu, r.nc), []).append(r)
    for (d, theta, nu, nc), rs in groups.items():
        rs = sorted(rs, key=lambda r: (r.mean, r.protocol))
        order = " < ".join(f"{r.protocol} ({r.mean:.3e})" for r in rs)
        nu_txt = "" if nu is None else f" nu={nu:g}"
        lines.append(f"  d={d} theta={theta / math.pi:.3g}pi{nu_txt} N_c={nc:.0e}: {order}")
    for r in results:
        if r.state is not None:
            lines.append(f"  reconstructed state ({r.protocol}):")
            for row in r.state:
                lines.append("    " + "  ".join(f"{z.real:+.5f}{z.imag:+.5f}i" for z in row))
            eig = hermitian_eig(r.state).eigenvalues
            lines.append("    eigenvalues: " + ", ".join(f"{x:.5f}" for x in eig))
            lines.append(f"    min eigenvalue {r.min_eig:.5f} ({'positive' if r.min_eig > 0 else 'NOT positive'})")
    return "\n".join(lines)


def run_scenario(s: Scenario) -> tuple[str, str]:
    """Run the grid, write the CSV atomically and return ``(path, summary)``."""
    s = validate(s)
    results = compute(s)
    text = render_csv(s, results)
    path = s.output_path()
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".redsm-", suffix=".csv", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path, summary(s, results)


def scenario_dict(s: Scenario) -> dict:
    return asdict(s)


__all__ = ["Scenario", "default_scenario", "run_scenario", "render_csv", "compute", "CSV_HEADER", "Prng"]
