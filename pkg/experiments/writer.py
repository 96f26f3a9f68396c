#!/usr/bin/env python3
"""
Artifact Writer
Writes summaries, JSON-lines traces and plot-ready CSV files under the data directory
"""
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from core.settings import settings

logger = logging.getLogger(__name__)


def _plain(value: Any) -> Any:
    """numpy scalars and arrays to JSON-ready Python values"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return "infinity" if value > 0 else "-infinity" if value < 0 else "nan"
    return value


def to_json(payload: Any) -> str:
    return json.dumps(_plain(payload), sort_keys=True, indent=2, allow_nan=False)


class ArtifactWriter:
    def __init__(self, data_dir: Optional[str] = None, quiet: bool = False):
        self.data_dir = Path(data_dir or settings.data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.quiet = quiet
        self.written: List[Path] = []

    def _announce(self, path: Path) -> None:
        self.written.append(path)
        size_kb = path.stat().st_size / 1024
        logger.info("Wrote %s", path)
        if not self.quiet:
            print(f"📁 {path} ({size_kb:.1f} KB)", file=sys.stderr)

    def path_for(self, name: str, suffix: str) -> Path:
        return self.data_dir / f"{name}{suffix}"

    def write_summary(self, name: str, summary: Dict) -> Path:
        """Summary JSON with sorted keys so identical runs give identical bytes"""
        path = self.path_for(name, ".summary.json")
        path.write_text(to_json(summary) + "\n", encoding="utf-8")
        self._announce(path)
        return path

    def write_trace(self, name: str, records: Iterable[Dict], path: Optional[Path] = None) -> Path:
        """One JSON object per line"""
        path = Path(path) if path else self.path_for(name, ".trace.jsonl")
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            for record in records:
                f.write(json.dumps(_plain(record), sort_keys=True, allow_nan=False) + "\n")
        self._announce(path)
        return path

    def write_membership_csv(
        self,
        name: str,
        n: int,
        sets: Sequence[Sequence[int]],
        coordinates: Optional[np.ndarray] = None,
    ) -> Path:
        """node_id, x, y, iter0, iter1, ... with 0/1 membership per iterate"""
        path = self.path_for(name, ".membership.csv")
        membership = np.zeros((n, len(sets)), dtype=int)
        for k, S in enumerate(sets):
            membership[list(S), k] = 1
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["node_id", "x", "y"] + [f"iter{k}" for k in range(len(sets))])
            for i in range(n):
                if coordinates is not None:
                    x, y = (f"{coordinates[i][0]:.6f}", f"{coordinates[i][1]:.6f}")
                else:
                    x, y = "", ""
                writer.writerow([i, x, y] + membership[i].tolist())
        self._announce(path)
        return path
