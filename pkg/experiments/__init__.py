"""
Experiment runner: manifests, canned reproductions and artifact output
"""
from .manifest import (
    ExperimentManifest,
    GraphBundle,
    ManifestResult,
    build_bundle,
    compare_expected,
    initial_function,
    initial_set,
    is_vertical_strip,
    matches,
    run_manifest,
    within_columns,
)
from .repro import EXPERIMENTS, ReproCheck, ReproReport, print_report, repro, repro_all
from .writer import ArtifactWriter, to_json

__all__ = [
    "ExperimentManifest",
    "GraphBundle",
    "ManifestResult",
    "build_bundle",
    "compare_expected",
    "initial_function",
    "initial_set",
    "is_vertical_strip",
    "matches",
    "run_manifest",
    "within_columns",
    "EXPERIMENTS",
    "ReproCheck",
    "ReproReport",
    "print_report",
    "repro",
    "repro_all",
    "ArtifactWriter",
    "to_json",
]
