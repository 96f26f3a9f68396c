#!/usr/bin/env python3
"""
Experiment Manifests
A manifest fixes the graph, the initial condition, the method with its parameters and the expected outcomes
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from core.errors import InvalidParameter, MalformedInput
from core.graph import Graph, NodeSet
from core.io import load_graph, load_node_function, load_node_set, read_json
from core.settings import settings
from dynamics.allen_cahn import AcParams, ace_evolve
from dynamics.mbo import MboParams, mbo_run
from dynamics.mcf import McfParams, mcf_trajectory
from generators import assets, families
from generators.moons import MoonsConfig, moons_initial_set, purity, two_moons

from .writer import ArtifactWriter

logger = logging.getLogger(__name__)

METHODS = ("mbo", "mcf", "ac")


@dataclass
class ExperimentManifest:
    name: str
    graph: Dict[str, Any]
    initial: Dict[str, Any]
    method: str
    params: Dict[str, Any] = field(default_factory=dict)
    expected: Dict[str, Any] = field(default_factory=dict)
    seed: int = settings.seed

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidParameter(f"Unknown method {self.method!r}; expected one of {METHODS}")

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "ExperimentManifest":
        if not isinstance(payload, dict):
            raise MalformedInput("Manifest must be a JSON object")
        missing = [k for k in ("name", "graph", "initial", "method") if k not in payload]
        if missing:
            raise MalformedInput(f"Manifest is missing {', '.join(missing)}")
        known = {k: payload[k] for k in ("name", "graph", "initial", "method", "params", "expected", "seed") if k in payload}
        return cls(**known)

    @classmethod
    def load(cls, path: str) -> "ExperimentManifest":
        return cls.from_dict(read_json(path))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class GraphBundle:
    """A constructed graph with whatever side information its family provides"""

    graph: Graph
    family: str
    coordinates: Optional[np.ndarray] = None
    shape: Tuple[int, ...] = ()
    truth: Optional[NodeSet] = None
    points: Optional[np.ndarray] = None


# ----------------------------------------------------------------------
# Graph construction
# ----------------------------------------------------------------------
def _params(spec: Dict[str, Any]) -> Dict[str, float]:
    return {"q": float(spec.get("q", 1.0)), "r": float(spec.get("r", 0.0))}


def build_bundle(spec: Dict[str, Any], seed: int = settings.seed) -> GraphBundle:
    if "file" in spec:
        g = load_graph(spec["file"])
        return GraphBundle(graph=g.with_params(q=spec.get("q"), r=spec.get("r")), family="file")

    family = spec.get("family")
    omega = float(spec.get("omega", 1.0))
    p = _params(spec)
    if family == "complete":
        return GraphBundle(families.complete(int(spec["n"]), omega, **p), family)
    if family == "star":
        return GraphBundle(families.star(int(spec["n"]), omega, **p), family)
    if family == "cycle":
        return GraphBundle(families.cycle(int(spec["n"]), omega, **p), family)
    if family == "path":
        return GraphBundle(families.path(int(spec["n"]), omega, **p), family)
    if family == "torus":
        n1, n2 = int(spec.get("n1", 32)), int(spec.get("n2", 12))
        coords = np.array([(x, y) for y in range(n2) for x in range(n1)], dtype=float)
        return GraphBundle(families.torus(n1, n2, omega, **p), family, coords, (n1, n2))
    if family == "grid":
        rows, cols = int(spec.get("rows", 3)), int(spec.get("cols", 3))
        return GraphBundle(families.grid(rows, cols, omega, **p), family, families.grid_coordinates(rows, cols), (rows, cols))
    if family == "tree":
        depth, children = int(spec.get("depth", 3)), int(spec.get("children", 2))
        g = families.regular_tree(depth, children, omega, **p)
        return GraphBundle(g, family, families.tree_coordinates(depth, children), (depth, children))
    if family == "buckyball":
        coords = assets.buckyball_coordinates()[:, :2]
        return GraphBundle(assets.buckyball(omega, **p), family, coords)
    if family == "lattices":
        layout = assets.lattice_layout()
        width = int(spec.get("width", layout["width"]))
        height = int(spec.get("height", layout["height"]))
        square = int(spec.get("square_width", layout["square_width"]))
        g = families.adjoined_lattices(width, height, square, omega, **p)
        return GraphBundle(g, family, families.lattice_coordinates(width, height, square), (width, height, square))
    if family == "two-moons":
        config = MoonsConfig(
            n_points=int(spec.get("n_points", 600)),
            ambient_dim=int(spec.get("ambient_dim", 100)),
            noise_sigma=float(spec.get("noise_sigma", 0.1)),
            k=int(spec.get("k", 10)),
            seed=int(spec.get("seed", seed)),
            q=p["q"],
            r=float(spec.get("r", 1.0)),
        )
        g, truth, points = two_moons(config)
        return GraphBundle(g, family, points[:, :2], truth=truth, points=points)
    raise InvalidParameter(f"Unknown graph family {family!r}")


def initial_set(bundle: GraphBundle, spec: Dict[str, Any]) -> NodeSet:
    g = bundle.graph
    if "members" in spec:
        return g.node_set(spec["members"])
    if "file" in spec:
        return load_node_set(spec["file"], g)
    if "asset" in spec:
        name = spec["asset"]
        if name == "torus":
            return assets.torus_initial_set()[1]
        if name == "buckyball-cap":
            return assets.buckyball_cap()
        if name.startswith("lattices:"):
            return assets.lattices_with_set(name.split(":", 1)[1])[1]
        raise InvalidParameter(f"Unknown initial-set asset {name!r}")
    if "moons_level" in spec:
        if bundle.points is None:
            raise InvalidParameter("moons_level needs a two-moons graph")
        return moons_initial_set(bundle.points, float(spec["moons_level"]))
    raise MalformedInput("Initial condition needs members, file, asset or moons_level")


def initial_function(bundle: GraphBundle, spec: Dict[str, Any]) -> np.ndarray:
    """Allen-Cahn start: explicit values, a file, or ±1 from a set"""
    g = bundle.graph
    if "values" in spec:
        return g.check_node_function(spec["values"], "u0")
    if "function_file" in spec:
        return load_node_function(spec["function_file"], g)
    chi = g.indicator(initial_set(bundle, spec))
    return 2 * chi - 1


# ----------------------------------------------------------------------
# Shape checks
# ----------------------------------------------------------------------
def is_vertical_strip(S: NodeSet, n1: int, n2: int) -> bool:
    """Union of full torus columns forming one cyclic run, neither empty nor everything"""
    counts = np.zeros(n1, dtype=int)
    for i in S:
        counts[i % n1] += 1
    if np.any((counts != 0) & (counts != n2)):
        return False
    full = counts == n2
    if not full.any() or full.all():
        return False
    starts = np.sum(full & ~np.roll(full, 1))
    return bool(starts == 1)


def within_columns(S: NodeSet, width: int, limit: int) -> bool:
    """Every node of S lies in a column x < limit"""
    return all(i % width < limit for i in S)


# ----------------------------------------------------------------------
# Expected-outcome comparison
# ----------------------------------------------------------------------
def matches(observed: Any, expected: Any) -> bool:
    if isinstance(expected, dict) and set(expected) <= {"min", "max"}:
        if observed is None:
            return False
        return expected.get("min", -math.inf) <= observed <= expected.get("max", math.inf)
    if isinstance(expected, list):
        return isinstance(observed, (list, tuple)) and sorted(observed) == sorted(expected)
    if isinstance(expected, bool) or expected is None or isinstance(expected, str):
        return observed == expected
    if isinstance(expected, (int, float)):
        if observed is None or isinstance(observed, bool):
            return False
        return math.isclose(observed, expected, rel_tol=1e-6, abs_tol=1e-9)
    return observed == expected


def compare_expected(summary: Dict[str, Any], expected: Dict[str, Any]) -> List[Dict[str, Any]]:
    """Failures as {key, expected, observed}"""
    failures = []
    for key, want in expected.items():
        got = summary.get(key)
        if not matches(got, want):
            failures.append({"key": key, "expected": want, "observed": got})
    return failures


# ----------------------------------------------------------------------
# Runner
# ----------------------------------------------------------------------
@dataclass
class ManifestResult:
    manifest: ExperimentManifest
    summary: Dict[str, Any]
    failures: List[Dict[str, Any]]
    sets: List[NodeSet] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0


def _run_mbo(bundle: GraphBundle, manifest: ExperimentManifest, writer: Optional[ArtifactWriter]) -> Tuple[Dict, List[NodeSet]]:
    g = bundle.graph
    S0 = initial_set(bundle, manifest.initial)
    params = MboParams(tau=float(manifest.params["tau"]), max_iter=int(manifest.params.get("max_iter", settings.mbo_max_iter)))
    trace = mbo_run(g, S0, params)
    summary = {
        "method": "mbo",
        "tau": params.tau,
        "converged": trace.converged_at is not None,
        "iterations_to_stationary": trace.converged_at,
        "final_set": list(trace.final),
        "final_size": len(trace.final),
        "lyapunov": trace.lyapunov,
        "tv": trace.tv,
    }
    if bundle.family == "torus":
        summary["final_is_strip"] = is_vertical_strip(trace.final, *bundle.shape)
    if bundle.truth is not None:
        summary["purity"] = purity(trace.final, bundle.truth, g.n)
    if writer:
        writer.write_trace(manifest.name, trace.records())
    return summary, list(trace.sets)


def _run_mcf(bundle: GraphBundle, manifest: ExperimentManifest, writer: Optional[ArtifactWriter]) -> Tuple[Dict, List[NodeSet]]:
    g = bundle.graph
    S0 = initial_set(bundle, manifest.initial)
    params = McfParams(
        dt=float(manifest.params["dt"]),
        max_steps=int(manifest.params.get("max_steps", settings.mcf_max_steps)),
        tie_break=manifest.params.get("tie_break", "prefer-previous"),
        distance=manifest.params.get("distance", "interface"),
    )
    steps = mcf_trajectory(g, S0, params)
    sets = [S0]
    for step in steps:
        if step.next_set != sets[-1]:
            sets.append(step.next_set)
    final = sets[-1]
    summary = {
        "method": "mcf",
        "dt": params.dt,
        "distance": params.distance,
        "steps": len(sets) - 1,
        "stationary": bool(steps) and steps[-1].next_set == final and len(steps) == len(sets),
        "final_set": list(final),
        "final_size": len(final),
        "objectives": [s.objective for s in steps],
    }
    if writer:
        writer.write_trace(manifest.name, [dict(step.to_dict(), k=k + 1) for k, step in enumerate(steps)])
    return summary, sets


def _run_ac(bundle: GraphBundle, manifest: ExperimentManifest, writer: Optional[ArtifactWriter]) -> Tuple[Dict, List[NodeSet]]:
    g = bundle.graph
    u0 = initial_function(bundle, manifest.initial)
    params = AcParams(
        eps=float(manifest.params["eps"]),
        t_end=float(manifest.params["t_end"]),
        rel_tol=float(manifest.params.get("rel_tol", settings.ac_rtol)),
        abs_tol=float(manifest.params.get("abs_tol", settings.ac_atol)),
    )
    trace = ace_evolve(g, u0, params)
    start = tuple(int(i) for i in np.flatnonzero(u0 > 0))
    summary = {
        "method": "ac",
        "eps": params.eps,
        "t_final": trace.times[-1],
        "stationary": trace.stationary,
        "sign_changes": len(trace.sign_changes),
        "final_set": list(trace.final_set()),
        "gl_energy_start": trace.gl_energy[0],
        "gl_energy_end": trace.gl_energy[-1],
    }
    if writer:
        writer.write_trace(manifest.name, trace.records())
    return summary, [start, trace.final_set()]


RUNNERS: Dict[str, Callable] = {"mbo": _run_mbo, "mcf": _run_mcf, "ac": _run_ac}


def run_manifest(manifest: ExperimentManifest, writer: Optional[ArtifactWriter] = None) -> ManifestResult:
    """Run, write the artifacts and compare against the expected outcomes"""
    logger.info("Running manifest %s (%s)", manifest.name, manifest.method)
    bundle = build_bundle(manifest.graph, manifest.seed)
    summary, sets = RUNNERS[manifest.method](bundle, manifest, writer)
    summary["name"] = manifest.name
    summary["manifest"] = manifest.to_dict()
    failures = compare_expected(summary, manifest.expected)
    summary["failures"] = failures
    summary["passed"] = not failures
    if writer:
        writer.write_summary(manifest.name, summary)
        writer.write_membership_csv(manifest.name, bundle.graph.n, sets, bundle.coordinates)
    return ManifestResult(manifest=manifest, summary=summary, failures=failures, sets=sets)
