"""Rebit-enhanced direct state measurement (ReDSM) with DSM and MUB tomography baselines."""

from ._backend import BACKEND
from .coupling import InteractionSpec, decomposed_interaction, interaction, postselect_mixed, postselect_pure
from .errors import ReDSMError
from .montecarlo import ProtocolConfig, SampleBudget, run_batches, run_trial, simulate
from .qmath import Prng, hermitian_eig, kron, trace_distance
from .rebit import embed_mixed, embed_pure, real_form_gate
from .scenarios import Scenario, default_scenario, run_scenario

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "InteractionSpec",
    "Prng",
    "ProtocolConfig",
    "ReDSMError",
    "SampleBudget",
    "Scenario",
    "decomposed_interaction",
    "default_scenario",
    "embed_mixed",
    "embed_pure",
    "hermitian_eig",
    "interaction",
    "kron",
    "postselect_mixed",
    "postselect_pure",
    "real_form_gate",
    "run_batches",
    "run_scenario",
    "run_trial",
    "simulate",
    "trace_distance",
]
