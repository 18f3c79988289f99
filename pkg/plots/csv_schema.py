"""Shared reader for the primary CLI's CSV outputs.

Every file starts with a ``# specest {json}`` comment carrying the
schema version, then a header row. Readers fail with the file and line
on anything malformed, and scripts map those failures to nonzero exits.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SUPPORTED_SCHEMA = 1


class SchemaError(Exception):
    """Malformed or incomplete input table."""


def read_table(path: Path, required: tuple[str, ...] = ()) -> tuple[dict, dict[str, np.ndarray]]:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"{path}: input file does not exist")
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("# specest "):
            raise SchemaError(f"{path}:1: missing '# specest' metadata comment")
        try:
            meta = json.loads(first[len("# specest ") :])
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}:1: bad metadata JSON ({exc})") from exc
        if meta.get("schema") != SUPPORTED_SCHEMA:
            raise SchemaError(f"{path}:1: unsupported schema {meta.get('schema')!r}")
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}:2: no header row") from None
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(f"{path}:2: missing columns {missing} (have {header})")
        rows = []
        for lineno, row in enumerate(reader, start=3):
            if not row:
                continue
            if len(row) != len(header):
                raise SchemaError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            rows.append(row)
    if not rows:
        raise SchemaError(f"{path}:3: no data rows")
    table: dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        col = [r[j] for r in rows]
        try:
            table[name] = np.array([float(v) for v in col])
        except ValueError:
            table[name] = np.array(col)
    return meta, table


@dataclass
class FigureSpec:
    """Input files, series requirements and output target of one figure."""

    inputs: dict[str, Path]
    required: dict[str, tuple[str, ...]]
    output: Path
    dpi: int = 150
    tables: dict[str, dict[str, np.ndarray]] = field(default_factory=dict)
    metas: dict[str, dict] = field(default_factory=dict)

    def load(self) -> "FigureSpec":
        for name, path in self.inputs.items():
            meta, table = read_table(path, self.required.get(name, ()))
            self.metas[name] = meta
            self.tables[name] = table
        return self


def run_figure(spec: FigureSpec, draw) -> int:
    """Load inputs, draw, save; map schema problems to exit code 1."""
    import sys

    try:
        spec.load()
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig = draw(spec, plt)
        spec.output.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.output, dpi=spec.dpi)
        plt.close(fig)
        print(spec.output)
        return 0
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def standard_args(description: str):
    import argparse

    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("--in", dest="in_dir", type=Path, required=True, help="directory with the CLI's CSV outputs")
    parser.add_argument("--out", dest="out_file", type=Path, required=True, help="output image file")
    return parser
