#!/usr/bin/env python3
"""
Graph I/O
JSON readers and writers for graphs, node functions and node sets
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np

from .errors import MalformedInput
from .graph import Graph, NodeSet, build_graph

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _reject_constant(token: str) -> None:
    raise MalformedInput(f"Non-finite number {token} is not allowed")


def parse_json(text: str) -> Any:
    """Parse JSON while rejecting NaN and Infinity literals"""
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"Invalid JSON: {e}") from e


def read_json(path: PathLike) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise MalformedInput(f"Cannot read {path}: {e}") from e
    return parse_json(text)


def write_json(path: PathLike, payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, allow_nan=False)
    return path


def graph_from_dict(payload: Dict[str, Any]) -> Graph:
    if not isinstance(payload, dict):
        raise MalformedInput("Graph JSON must be an object")
    missing = [key for key in ("n", "edges") if key not in payload]
    if missing:
        raise MalformedInput(f"Graph JSON is missing {', '.join(missing)}")
    edges = payload["edges"]
    if not isinstance(edges, list) or any(not isinstance(e, list) or len(e) != 3 for e in edges):
        raise MalformedInput("Graph edges must be a list of [i, j, w] triples")
    return build_graph(
        payload["n"], edges, q=float(payload.get("q", 1.0)), r=float(payload.get("r", 0.0))
    )


def load_graph(path: PathLike) -> Graph:
    graph = graph_from_dict(read_json(path))
    logger.info("Loaded %r from %s", graph, path)
    return graph


def save_graph(graph: Graph, path: PathLike) -> Path:
    return write_json(path, graph.to_dict())


def load_node_function(path: PathLike, graph: Graph) -> np.ndarray:
    values = read_json(path)
    if not isinstance(values, list):
        raise MalformedInput("Node function JSON must be an array")
    return graph.check_node_function(values)


def load_node_set(path: PathLike, graph: Graph) -> NodeSet:
    members = read_json(path)
    if not isinstance(members, list):
        raise MalformedInput("Node set JSON must be an array")
    return graph.node_set(members)


def node_set_to_list(members: Sequence[int]) -> List[int]:
    return [int(i) for i in members]
