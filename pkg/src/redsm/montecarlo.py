"""Finite-copy simulation: per-copy categorical sampling, copy budgeting,
batching and aggregation.

Every prepared copy is drawn from the full per-copy outcome distribution of
its measurement cell, including the postselection-failure branch. Draws go
through the cumulative-table bisection kernel.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _backend
from . import tomography as tomo
from .errors import BudgetTooSmall, EmptyDistribution
from .qmath import Prng, nearly_pure, projector, random_mixed, random_pure

PAPER_P0 = "paper_P0"
PHYSICAL_NORM = "physical_norm"
PAPER_BATCHES = "paper"
FIXED_STATE = "fixed-state"

_BUDGET_ALIASES = {"paper": PAPER_P0, PAPER_P0: PAPER_P0, "physical": PHYSICAL_NORM, PHYSICAL_NORM: PHYSICAL_NORM}
_BATCH_ALIASES = {"paper": PAPER_BATCHES, "fixed-state": FIXED_STATE, "fixed": FIXED_STATE}

CHUNK = 1 << 20


@dataclass(frozen=True)
class SampleBudget:
    total_copies: int
    batches: int = 100
    budget_mode: str = PAPER_P0
    batch_mode: str = PAPER_BATCHES

    def __post_init__(self):
        object.__setattr__(self, "budget_mode", _BUDGET_ALIASES[self.budget_mode])
        object.__setattr__(self, "batch_mode", _BATCH_ALIASES[self.batch_mode])
        if self.batches < 1 or self.total_copies < self.batches:
            raise BudgetTooSmall(f"need N_c >= M >= 1, got N_c={self.total_copies}, M={self.batches}")

    @property
    def copies_per_trial(self) -> int:
        if self.batch_mode == PAPER_BATCHES:
            return self.total_copies // self.batches
        return self.total_copies


@dataclass(frozen=True)
class ProtocolConfig:
    protocol: str
    d: int
    theta: float = np.pi / 2
    seed: int = 20180701
    exact: bool = False


@dataclass
class TrialOutcome:
    protocol: str
    trace_dist: float
    accepted_copies: int
    rejected_copies: int
    unallocated_copies: int
    total_copies: int
    seed: tuple
    result: tomo.ReconResult | None = field(default=None, repr=False)


@dataclass
class AggregateResult:
    mean: float
    std: float
    outcomes: list
    config: dict

    @property
    def sem(self) -> float:
        return self.std / np.sqrt(len(self.outcomes))

    @property
    def values(self) -> np.ndarray:
        return np.array([o.trace_dist for o in self.outcomes])


@dataclass(frozen=True)
class Protocol:
    name: str
    needs_pure: bool
    cells: Callable  # d -> list of (n, setting_id) grouped per allocation unit
    tables: Callable  # (state, theta) -> exact probability table
    estimate: Callable  # (table, theta, d) -> estimate


def _per_n(settings):
    return lambda d: [[(n, st.id) for st in settings] for n in range(d)]


PROTOCOLS = {
    "redsm_pure": Protocol(
        "redsm_pure", True, _per_n(tomo.REDSM_PURE_SETTINGS), tomo.redsm_pure_tables, tomo.redsm_pure_from_table
    ),
    "dsm_pure": Protocol(
        "dsm_pure", True, _per_n(tomo.POINTER_SETTINGS), tomo.dsm_pure_tables, tomo.dsm_pure_from_table
    ),
    "redsm_ssb": Protocol(
        "redsm_ssb",
        False,
        _per_n(tomo.SSB_SETTINGS),
        lambda rho, th: tomo.redsm_mixed_tables(rho, th, tomo.SSB_SETTINGS),
        lambda t, th, d: tomo.redsm_mixed_from_table(t, th, d, "ssb"),
    ),
    "redsm_bbb": Protocol(
        "redsm_bbb",
        False,
        _per_n(tomo.BBB_SETTINGS),
        lambda rho, th: tomo.redsm_mixed_tables(rho, th, tomo.BBB_SETTINGS),
        lambda t, th, d: tomo.redsm_mixed_from_table(t, th, d, "bbb"),
    ),
    "dsm_mixed": Protocol(
        "dsm_mixed", False, _per_n(tomo.POINTER_SETTINGS), tomo.dsm_mixed_tables, tomo.dsm_mixed_from_table
    ),
    "mub_qst": Protocol(
        "mub_qst",
        False,
        lambda d: [[(b, st.id)] for b, st in enumerate(tomo.mub_bases(d))],
        lambda rho, th: tomo.mub_tables(rho),
        lambda t, th, d: tomo.mub_from_table(t, d),
    ),
}

PURE_PROTOCOLS = ("redsm_pure", "dsm_pure")
MIXED_PROTOCOLS = ("redsm_ssb", "redsm_bbb", "dsm_mixed", "mub_qst")


def categorical_sample(cdf, u: float) -> int:
    """Smallest index k with ``u < cdf[k]`` (bisection); clamps to the last cell."""
    if len(cdf) == 0 or cdf[-1] <= 0:
        raise EmptyDistribution("cumulative table is empty or has no mass")
    return min(bisect.bisect_right(cdf, u), len(cdf) - 1)


def sample_counts(probs, copies: int, prng: Prng) -> np.ndarray:
    """Outcome counts of ``copies`` independent draws from ``probs``."""
    probs = np.asarray(probs, dtype=np.float64)
    if probs.size == 0:
        raise EmptyDistribution("no outcomes")
    cdf = np.cumsum(np.clip(probs, 0.0, None))
    total = cdf[-1]
    if total <= 0:
        raise EmptyDistribution("distribution has no mass")
    counts = np.zeros(probs.size, dtype=np.int64)
    remaining = int(copies)
    while remaining > 0:
        m = min(remaining, CHUNK)
        u = prng.random(m) * total
        _backend.bisect_counts(cdf, u, counts)
        remaining -= m
    return counts


def split_evenly(total: int, parts: int) -> list[int]:
    """Floor split; the remainder goes one each to the lowest-index parts."""
    q, r = divmod(int(total), parts)
    return [q + (1 if i < r else 0) for i in range(parts)]


def allocate(protocol: str, d: int, copies: int, budget_mode: str, state=None) -> dict:
    """Copies per measurement cell.

    Pure protocols in ``paper_P0`` mode run ``floor(N * P0 / d)`` copies per
    index with ``P0 = sum |psi_n|^2 / d``; in ``physical_norm`` mode every
    index gets an even share of N and postselection failures are sampled.
    Mixed protocols always split N evenly over indices, MUB over bases.
    """
    proto = PROTOCOLS[protocol]
    groups = proto.cells(d)
    mode = _BUDGET_ALIASES[budget_mode]
    if proto.needs_pure and mode == PAPER_P0:
        p0 = float(np.sum(np.abs(np.asarray(state)) ** 2)) / d if state is not None else 1.0 / d
        per_group = [int(np.floor(copies * p0 / d))] * len(groups)
    else:
        per_group = split_evenly(copies, len(groups))
    alloc = {}
    for group, n_group in zip(groups, per_group):
        for cell, n_cell in zip(group, split_evenly(n_group, len(group))):
            alloc[cell] = n_cell
    return alloc


def simulate(protocol: str, state, theta: float, copies: int, prng: Prng,
             budget_mode: str = PAPER_P0, exact: bool = False) -> TrialOutcome:
    """One reconstruction experiment and its trace distance to ``state``."""
    proto = PROTOCOLS[protocol]
    state = np.asarray(state, dtype=np.complex128)
    if proto.needs_pure and state.ndim != 1:
        raise ValueError(f"{protocol} needs a pure state vector")
    rho = projector(state) if state.ndim == 1 else state
    d = rho.shape[0]
    exact_table = proto.tables(state if proto.needs_pure else rho, theta)
    alloc = allocate(protocol, d, copies, budget_mode, state if state.ndim == 1 else None)
    used = sum(alloc.values())
    if exact:
        table, accepted, rejected = exact_table, 0, 0
    else:
        starved = [cell for cell, c in alloc.items() if c == 0]
        if starved:
            raise BudgetTooSmall(f"{protocol}: cells {starved[:3]} receive no copies from N={copies}")
        table, accepted, rejected = {}, 0, 0
        for i, (cell, probs) in enumerate(sorted(exact_table.items())):
            flat = probs.ravel()
            reject = max(0.0, 1.0 - float(flat.sum()))
            counts = sample_counts(np.append(flat, reject), alloc[cell], prng.split(i))
            table[cell] = (counts[:-1] / alloc[cell]).reshape(probs.shape)
            accepted += int(counts[:-1].sum())
            rejected += int(counts[-1])
    estimate = proto.estimate(table, theta, d)
    result = tomo.make_result(estimate, state, protocol=protocol, theta=theta, copies=copies)
    return TrialOutcome(
        protocol,
        result.trace_dist,
        accepted,
        rejected,
        copies - used if not exact else 0,
        copies,
        (prng.seed, *prng.key),
        result,
    )


def simulate_pure(protocol: str, psi, theta: float, budget: SampleBudget, prng: Prng,
                  exact: bool = False) -> TrialOutcome:
    if protocol not in PURE_PROTOCOLS:
        raise ValueError(f"{protocol} is not a pure-state protocol")
    return simulate(protocol, psi, theta, budget.copies_per_trial, prng, budget.budget_mode, exact)


def simulate_mixed(protocol: str, rho, theta: float, budget: SampleBudget, prng: Prng,
                   exact: bool = False) -> TrialOutcome:
    if protocol not in MIXED_PROTOCOLS:
        raise ValueError(f"{protocol} is not a mixed-state protocol")
    return simulate(protocol, rho, theta, budget.copies_per_trial, prng, budget.budget_mode, exact)


# Ensembles


REFERENCE_STATE = np.array(
    [[0.40693, 0.18711 + 0.32119j], [0.18711 - 0.32119j, 0.59307]], dtype=np.complex128
)


def state_source(kind: str, d: int, nu: float | None = None) -> Callable[[Prng], np.ndarray]:
    """Factory for per-trial state generators.

    kinds: ``pure`` (nonnegative components), ``pure_haar``, ``mixed``
    (Ginibre), ``nearly_pure`` (Haar vector with depolarising weight nu),
    ``reference`` (the fixed 2x2 example state).
    """
    if kind == "pure":
        return lambda prng: random_pure(d, "nonneg", prng)
    if kind == "pure_haar":
        return lambda prng: random_pure(d, "haar", prng)
    if kind == "mixed":
        return lambda prng: random_mixed(d, prng)
    if kind == "nearly_pure":
        if nu is None:
            raise ValueError("nearly_pure states need nu")
        return lambda prng: nearly_pure(random_pure(d, "haar", prng), nu)
    if kind == "reference":
        if d != 2:
            raise ValueError("the example state is a qubit state")
        return lambda prng: REFERENCE_STATE.copy()
    raise ValueError(f"unknown state kind {kind!r}")


def run_trial(config: ProtocolConfig, source, budget: SampleBudget, k: int) -> TrialOutcome:
    """Trial ``k``: its state and sampling streams depend on ``(seed, k)`` only."""
    base = Prng(config.seed)
    if budget.batch_mode == PAPER_BATCHES:
        state = source(base.split(k).split(0))
    else:
        state = source(base.split(0).split(0))
    if PROTOCOLS[config.protocol].needs_pure is False and np.asarray(state).ndim == 1:
        state = projector(state)
    return simulate(config.protocol, state, config.theta, budget.copies_per_trial,
                    base.split(k).split(1), budget.budget_mode, config.exact)


def run_batches(config: ProtocolConfig, source, budget: SampleBudget) -> AggregateResult:
    if budget.batches < 2:
        raise ValueError("run_batches needs at least two batches")
    outcomes = [run_trial(config, source, budget, k) for k in range(budget.batches)]
    vals = np.array([o.trace_dist for o in outcomes])
    return AggregateResult(
        float(vals.mean()),
        float(vals.std(ddof=1)),
        outcomes,
        {
            "protocol": config.protocol,
            "d": config.d,
            "theta": config.theta,
            "seed": config.seed,
            "exact": config.exact,
            "N_c": budget.total_copies,
            "batches": budget.batches,
            "budget_mode": budget.budget_mode,
            "batch_mode": budget.batch_mode,
        },
    )
