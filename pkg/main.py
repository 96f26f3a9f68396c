#!/usr/bin/env python3
"""
GraphFlow - Command Line Controller
Generates graphs, runs MBO / Allen-Cahn / curvature flow, reports spectra and bounds, reruns the worked examples
"""
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

import numpy as np

from core.errors import GraphFlowError, InputError, InvalidParameter
from core.graph import Graph
from core.io import load_graph, load_node_function, load_node_set, save_graph, write_json
from core.settings import settings
from dynamics.allen_cahn import AcParams, ac_pinning_report, ace_evolve
from dynamics.flip import flip_analysis
from dynamics.mbo import MboParams, mbo_run, tau_bounds
from dynamics.mcf import DISTANCES, TIE_BREAKS, McfParams, mcf_trajectory
from experiments.manifest import ExperimentManifest, build_bundle, run_manifest
from experiments.repro import EXPERIMENTS, print_report, repro, repro_all
from experiments.writer import ArtifactWriter, to_json
from geometry.curvature import curvature_values
from geometry.distance import boundary, sigma, signed_distance
from spectral.bounds import spectral_bounds
from spectral.decomposition import eigendecompose

logger = logging.getLogger("graphflow")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_INTERNAL_ERROR = 3

GEN_FAMILIES = ("complete", "star", "cycle", "path", "torus", "grid", "tree", "buckyball", "lattices", "two-moons")


class GraphFlowCli:
    """One CLI invocation; every command returns (exit code, JSON payload)"""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.data_dir = args.data_dir or settings.data_dir
        self.seed = settings.seed if args.seed is None else args.seed
        self._writer: Optional[ArtifactWriter] = None

    @property
    def writer(self) -> ArtifactWriter:
        if self._writer is None:
            self._writer = ArtifactWriter(self.data_dir)
        return self._writer

    def _graph(self) -> Graph:
        g = load_graph(self.args.graph)
        return g.with_params(q=getattr(self.args, "q", None), r=getattr(self.args, "r", None))

    # ------------------------------------------------------------------
    # Commands
    # ------------------------------------------------------------------
    def cmd_gen(self):
        a = self.args
        spec = {"family": a.family, "q": a.q if a.q is not None else 1.0}
        if a.r is not None:
            spec["r"] = a.r
        for key in ("n", "omega", "n1", "n2", "rows", "cols", "depth", "children", "width", "height",
                    "square_width", "n_points", "ambient_dim", "noise_sigma", "k"):
            value = getattr(a, key)
            if value is not None:
                spec[key] = value
        bundle = build_bundle(spec, self.seed)
        path = save_graph(bundle.graph, a.output)
        print(f"✅ {a.family}: {bundle.graph.n} nodes, {bundle.graph.num_edges} edges -> {path}", file=sys.stderr)
        if a.coords and bundle.coordinates is not None:
            write_json(a.coords, np.asarray(bundle.coordinates).tolist())
        if a.truth and bundle.truth is not None:
            write_json(a.truth, list(bundle.truth))
        return EXIT_OK, {"graph": str(path), "n": bundle.graph.n, "edges": bundle.graph.num_edges, "spec": spec}

    def cmd_spectral(self):
        g = self._graph()
        decomposition = eigendecompose(g)
        eigenvalues = decomposition.eigenvalues
        if self.args.count:
            eigenvalues = eigenvalues[: self.args.count]
        return EXIT_OK, {
            "eigenvalues": eigenvalues,
            "rho": decomposition.rho,
            "bounds": spectral_bounds(g, decomposition=decomposition).to_dict(),
        }

    def cmd_geometry(self):
        g = self._graph()
        S = load_node_set(self.args.set, g)
        return EXIT_OK, {
            "set": list(S),
            "kappa": curvature_values(g, S),
            "boundary": list(boundary(g, S)),
            "sigma": list(sigma(g, S)),
            "signed_distance": signed_distance(g, S, interface=self.args.interface),
        }

    def cmd_mbo(self):
        g = self._graph()
        S0 = load_node_set(self.args.init, g)
        max_iter = self.args.max_iter or settings.mbo_max_iter
        trace = mbo_run(g, S0, MboParams(tau=self.args.tau, max_iter=max_iter))
        if self.args.trace:
            self.writer.write_trace("mbo", trace.records(), path=self.args.trace)
        return EXIT_OK, {
            "final_set": list(trace.final),
            "iterations_to_stationary": trace.converged_at,
            "converged": trace.converged_at is not None,
            "lyapunov": trace.lyapunov,
        }

    def cmd_ac(self):
        g = self._graph()
        u0 = load_node_function(self.args.init, g)
        params = AcParams(eps=self.args.eps, t_end=self.args.t_end)
        trace = ace_evolve(g, u0, params)
        if self.args.trace:
            self.writer.write_trace("ac", trace.records(), path=self.args.trace)
        return EXIT_OK, {
            "t_final": trace.times[-1],
            "final": trace.final,
            "final_set": list(trace.final_set()),
            "stationary": trace.stationary,
            "sign_changes": [{"t": t, "node": node} for t, node in trace.sign_changes],
            "gl_energy": [trace.gl_energy[0], trace.gl_energy[-1]],
        }

    def cmd_mcf(self):
        g = self._graph()
        S0 = load_node_set(self.args.init, g)
        params = McfParams(dt=self.args.dt, max_steps=self.args.steps or settings.mcf_max_steps,
                           tie_break=self.args.tie_break, distance=self.args.distance)
        steps = mcf_trajectory(g, S0, params)
        records = [dict(step.to_dict(), k=k + 1) for k, step in enumerate(steps)]
        if self.args.trace:
            self.writer.write_trace("mcf", records, path=self.args.trace)
        final = steps[-1].next_set if steps else S0
        return EXIT_OK, {"final_set": list(final), "steps": records}

    def cmd_bounds(self):
        g = self._graph()
        S = load_node_set(self.args.set, g)
        decomposition = eigendecompose(g)
        payload: Dict[str, Any] = {"tau": tau_bounds(g, S, decomposition).to_dict()}
        if self.args.node is not None:
            payload["flip"] = flip_analysis(g, S, self.args.node).to_dict()
        u0 = load_node_function(self.args.u0, g) if self.args.u0 else 2 * g.indicator(S) - 1
        payload["allen_cahn"] = ac_pinning_report(
            g, u0, kappa_factor=self.args.kappa_factor, alpha_rule=self.args.alpha_rule, decomposition=decomposition
        ).to_dict()
        return EXIT_OK, payload

    def cmd_repro(self):
        names = list(EXPERIMENTS) if self.args.name == "all" else [self.args.name]
        if len(names) == 1:
            reports = [repro(names[0], self.writer, self.seed)]
        else:
            reports = repro_all(names, self.writer, self.seed, max_workers=self.args.workers)
        for report in reports:
            print_report(report)
        passed = all(r.passed for r in reports)
        return (EXIT_OK if passed else EXIT_CHECK_FAILED), {"passed": passed, "reports": [r.to_dict() for r in reports]}

    def cmd_run(self):
        manifest = ExperimentManifest.load(self.args.manifest)
        result = run_manifest(manifest, self.writer)
        mark = "✅" if result.exit_code == EXIT_OK else "❌"
        print(f"{mark} {manifest.name}: {len(result.failures)} expectation(s) failed", file=sys.stderr)
        return result.exit_code, result.summary

    def run(self):
        return getattr(self, f"cmd_{self.args.command}")()


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------
def _calculus_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--q", type=float, default=None, help="Edge exponent (overrides the graph file)")
    parser.add_argument("--r", type=float, default=None, help="Vertex exponent (overrides the graph file)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphflow", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--log-level", default=None, help="Root log level (default from GRAPHFLOW_LOG_LEVEL)")
    parser.add_argument("--data-dir", default=None, help="Artifact directory (default from GRAPHFLOW_DATA_DIR)")
    parser.add_argument("--seed", type=int, default=None, help="Seed wherever randomness is used")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Generate an example graph")
    gen.add_argument("family", choices=GEN_FAMILIES)
    gen.add_argument("-o", "--output", required=True)
    gen.add_argument("--coords", default=None, help="Also write node coordinates")
    gen.add_argument("--truth", default=None, help="Also write the ground-truth set (two-moons)")
    _calculus_flags(gen)
    for name, kind in (("n", int), ("omega", float), ("n1", int), ("n2", int), ("rows", int), ("cols", int),
                       ("depth", int), ("children", int), ("width", int), ("height", int), ("square-width", int),
                       ("n-points", int), ("ambient-dim", int), ("noise-sigma", float), ("k", int)):
        gen.add_argument(f"--{name}", type=kind, default=None)

    spectral = sub.add_parser("spectral", help="Eigenvalues, ρ and spectral bounds")
    spectral.add_argument("--graph", required=True)
    spectral.add_argument("--count", type=int, default=None, help="Only the first COUNT eigenvalues")
    _calculus_flags(spectral)

    geometry = sub.add_parser("geometry", help="Curvature, boundaries and signed distance of a set")
    geometry.add_argument("--graph", required=True)
    geometry.add_argument("--set", required=True)
    geometry.add_argument("--interface", choices=("sigma", "boundary"), default="sigma")
    _calculus_flags(geometry)

    mbo = sub.add_parser("mbo", help="Run MBO threshold dynamics")
    mbo.add_argument("--graph", required=True)
    mbo.add_argument("--init", required=True)
    mbo.add_argument("--tau", type=float, required=True)
    mbo.add_argument("--max-iter", type=int, default=None)
    mbo.add_argument("--trace", default=None)
    _calculus_flags(mbo)

    ac = sub.add_parser("ac", help="Integrate the Allen-Cahn flow")
    ac.add_argument("--graph", required=True)
    ac.add_argument("--init", required=True)
    ac.add_argument("--eps", type=float, required=True)
    ac.add_argument("--t-end", type=float, required=True)
    ac.add_argument("--trace", default=None)
    _calculus_flags(ac)

    mcf = sub.add_parser("mcf", help="Run the min-cut curvature flow")
    mcf.add_argument("--graph", required=True)
    mcf.add_argument("--init", required=True)
    mcf.add_argument("--dt", type=float, required=True)
    mcf.add_argument("--tie-break", choices=TIE_BREAKS, default="prefer-previous")
    mcf.add_argument("--distance", choices=DISTANCES, default="interface",
                     help="Penalty weight of changed nodes; \"squared\" is experimental")
    mcf.add_argument("--steps", type=int, default=None)
    mcf.add_argument("--trace", default=None)
    _calculus_flags(mcf)

    bounds = sub.add_parser("bounds", help="Time-step, flip and Allen-Cahn pinning bounds")
    bounds.add_argument("--graph", required=True)
    bounds.add_argument("--set", required=True)
    bounds.add_argument("--node", type=int, default=None, help="Also analyse a single-node flip")
    bounds.add_argument("--u0", default=None, help="Allen-Cahn start (default ±1 from the set)")
    bounds.add_argument("--kappa-factor", choices=("derived", "printed"), default="derived")
    bounds.add_argument("--alpha-rule", choices=("clamp", "optimal"), default="clamp")
    _calculus_flags(bounds)

    rep = sub.add_parser("repro", help="Rerun a worked example and check its outcome")
    rep.add_argument("name", help=f"One of {', '.join(EXPERIMENTS)} or all")
    rep.add_argument("--workers", type=int, default=1, help="Experiments run concurrently by \"all\"")

    run = sub.add_parser("run", help="Run an experiment manifest")
    run.add_argument("manifest")
    return parser


def configure_logging(level: Optional[str]) -> None:
    name = (level or settings.log_level).upper()
    if not isinstance(logging.getLevelName(name), int):
        raise InvalidParameter(f"Unknown log level {level!r}")
    logging.basicConfig(
        level=name,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configure_logging(args.log_level)
        code, payload = GraphFlowCli(args).run()
    except InputError as e:
        print(to_json(e.to_dict()))
        print(f"❌ {e.code}: {e.message}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except GraphFlowError as e:
        print(to_json(e.to_dict()))
        print(f"❌ {e.code}: {e.message}", file=sys.stderr)
        return EXIT_INTERNAL_ERROR
    except Exception as e:
        logger.exception("Unexpected failure")
        print(to_json({"error": "internal_error", "message": str(e)}))
        print(f"❌ internal_error: {e}", file=sys.stderr)
        return EXIT_INTERNAL_ERROR
    print(to_json(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
