#!/usr/bin/env python3
"""
Error Types
Exception hierarchy shared by the graph library, the experiment runner and the CLI
"""
from typing import Any, Dict, Optional


class GraphFlowError(Exception):
    """Base class for every error raised by the library"""

    code = "graphflow_error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form used for CLI error reports"""
        payload = {"error": self.code, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return payload


class InputError(GraphFlowError):
    """Invalid graph, set, parameter or file supplied by the caller"""

    code = "input_error"


class NumericalError(GraphFlowError):
    """A numerical routine failed to deliver a result"""

    code = "numerical_error"


class IsolatedNode(InputError):
    code = "isolated_node"


class SelfLoop(InputError):
    code = "self_loop"


class NegativeWeight(InputError):
    code = "negative_weight"


class ConflictingDuplicate(InputError):
    code = "conflicting_duplicate"


class InvalidNode(InputError):
    code = "invalid_node"


class InvalidParameter(InputError):
    code = "invalid_parameter"


class InvalidPartition(InputError):
    code = "invalid_partition"


class DegreeTooSmall(InputError):
    code = "degree_too_small"


class WeightedGraph(InputError):
    code = "weighted_graph"


class EmptySet(InputError):
    code = "empty_set"


class TrivialSet(InputError):
    code = "trivial_set"


class InvalidSize(InputError):
    code = "invalid_size"


class ZeroInitialComponent(InputError):
    code = "zero_initial_component"


class HalfVolume(InputError):
    code = "half_volume"


class DisconnectedGraph(InputError):
    code = "disconnected_graph"


class DegenerateSample(InputError):
    code = "degenerate_sample"


class UnknownExperiment(InputError):
    code = "unknown_experiment"


class MalformedInput(InputError):
    code = "malformed_input"


class ConvergenceFailure(NumericalError):
    code = "convergence_failure"


class IntegratorFailure(NumericalError):
    code = "integrator_failure"
