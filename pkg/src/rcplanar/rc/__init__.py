"""Finite-volume random-cluster measures: enumeration, dynamics, exact sampling."""

from .dynamics import EdgeConfig, coupled_chains, heat_bath_step, run_chain
from .exact import Event, ExactResult, config_kappa, connect_event, exact_rc
from .harness import DominationReport, HarnessRow, domination_check, robust_harness
from .instance import BOUNDARY_CONDITIONS, FIXTURES, RCInstance, path3, triangle
from .potts import PottsResult, cluster_labels, potts_coloring
from .sampling import (
    Estimate,
    SampleBatch,
    estimate_connectivity,
    estimate_event,
    sample_exact,
    wilson_interval,
)

__all__ = [
    "BOUNDARY_CONDITIONS", "FIXTURES", "RCInstance", "triangle", "path3",
    "Event", "ExactResult", "exact_rc", "connect_event", "config_kappa",
    "EdgeConfig", "heat_bath_step", "run_chain", "coupled_chains",
    "SampleBatch", "Estimate", "sample_exact", "estimate_connectivity", "estimate_event",
    "wilson_interval", "PottsResult", "potts_coloring", "cluster_labels",
    "DominationReport", "HarnessRow", "domination_check", "robust_harness",
]
