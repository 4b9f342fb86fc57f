"""ctxcert: exclusivity-graph contextuality toolkit.

Builds parity Bell-operator event families and graph-state paradoxes,
derives their exclusivity graphs, certifies independence and Lovasz numbers,
proves the dimension-concentration rank numerically, and simulates/analyzes
the associated prepare-and-measure experiment.
"""

from .analysis import (CorrelationTerm, ProbabilityBundle, WitnessPipeline,
                       WitnessReport, analytic_bundle, bundle_from_counts,
                       correlation_to_probability, hardy_report,
                       resample_errors, signaling_factors, vertex_sum,
                       witness_mu, witness_report)
from .exclusivity import (ExclusivityGraph, build_graph, complete_graph,
                          cycle_graph, empty_graph, moebius_ladder,
                          nchv_enumerate, verify_representation)
from .experiment import (CountTable, NoiseModel, Setting, luders_update,
                         plan_from_specs, plan_to_specs,
                         sequential_probabilities, simulate_counts,
                         standard_plan)
from .graphstate import (GraphSpec, graph_from_edges, graph_state,
                         lhv_satisfiability, modified_state, paradox_bundle,
                         paradox_event_family, paradox_operators,
                         stabilizers, star_graph, wheel_graph)
from .independence import AlphaCertificate, independence_number
from .linalg import (numeric_rank, nullspace, sign_projector,
                     sign_projector_ray, tensor)
from .mabk import (ConcentrationCertificate, MabkInstance, ProjectorFamily,
                   build_mabk, concentration_certificate, ghz_state,
                   hardy_probabilities, mu_family, mu_value)
from .pauli import PauliString, compose, pauli_matrix
from .theta import (SymmetryReduction, ThetaCertificate,
                    ThetaConvergenceError, lovasz_theta,
                    parity_class_reduction)

__version__ = "0.1.0"

__all__ = [
    "AlphaCertificate", "ConcentrationCertificate", "CorrelationTerm",
    "CountTable", "ExclusivityGraph", "GraphSpec", "MabkInstance",
    "NoiseModel", "PauliString", "ProbabilityBundle", "ProjectorFamily",
    "Setting", "SymmetryReduction", "ThetaCertificate",
    "ThetaConvergenceError", "WitnessPipeline", "WitnessReport",
    "analytic_bundle", "build_graph", "build_mabk", "bundle_from_counts",
    "complete_graph", "compose", "concentration_certificate",
    "correlation_to_probability", "cycle_graph", "empty_graph",
    "ghz_state", "graph_from_edges", "graph_state", "hardy_probabilities",
    "hardy_report", "independence_number", "lhv_satisfiability",
    "lovasz_theta", "luders_update", "modified_state", "moebius_ladder",
    "mu_family", "mu_value", "nchv_enumerate", "numeric_rank", "nullspace",
    "paradox_bundle", "paradox_event_family", "paradox_operators",
    "parity_class_reduction", "pauli_matrix", "plan_from_specs",
    "plan_to_specs", "resample_errors",
    "sequential_probabilities", "sign_projector", "sign_projector_ray",
    "signaling_factors", "simulate_counts", "stabilizers", "standard_plan",
    "star_graph", "tensor", "verify_representation", "vertex_sum",
    "wheel_graph", "witness_mu", "witness_report",
]
