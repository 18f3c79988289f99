"""CSV and JSON emission for experiment outputs.

Every CSV starts with one comment line
``# specest {"schema": 1, ...}`` carrying the config hash, seed and any
signal conversion metadata, followed by a standard header row. Readers
(including the plotting scripts) rely only on this documented layout.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .signals import EnergyMap, Signal, SignalKind

SCHEMA_VERSION = 1


def config_hash(doc: dict) -> str:
    return hashlib.sha256(json.dumps(doc, sort_keys=True, default=str).encode()).hexdigest()[:12]


def write_csv(path: Path, meta: dict, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    meta = {"schema": SCHEMA_VERSION, **meta}
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(f"# specest {json.dumps(meta, sort_keys=True)}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)


def read_csv(path: Path) -> tuple[dict, list[str], list[list[str]]]:
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("# specest "):
            raise ValueError(f"{path}: missing specest metadata comment line")
        meta = json.loads(first[len("# specest ") :])
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: no header row") from None
        rows = [row for row in reader if row]
    return meta, header, rows


def write_signal_csv(path: Path, signal: Signal, *, meta: dict | None = None, per_k: dict | None = None) -> None:
    """Persist a signal with enough metadata to re-create it for estimation.

    ``per_k`` may supply extra columns (same length as the signal), e.g.
    stderr proxies or sample counts.
    """
    doc = {
        "kind": signal.kind,
        "step": signal.energy_map.step,
        "shift": signal.energy_map.shift,
        "rate_correction": signal.energy_map.rate_correction,
        **(meta or {}),
    }
    per_k = per_k or {}
    if signal.kind == "real_time":
        header = ["k", "re", "im", *per_k.keys()]
        rows = [
            [k, np.real(v), np.imag(v), *(per_k[c][k] for c in per_k)]
            for k, v in enumerate(signal.values)
        ]
    else:
        header = ["k", "value", *per_k.keys()]
        rows = [[k, float(v), *(per_k[c][k] for c in per_k)] for k, v in enumerate(signal.values)]
    write_csv(path, doc, header, rows)


def read_signal_csv(path: Path) -> Signal:
    meta, header, rows = read_csv(path)
    kind: SignalKind = meta["kind"]
    emap = EnergyMap(
        step=float(meta.get("step", 1.0)),
        shift=float(meta.get("shift", 0.0)),
        rate_correction=float(meta.get("rate_correction", 0.0)),
    )
    cols = {name: i for i, name in enumerate(header)}
    order = np.argsort([int(r[cols["k"]]) for r in rows])
    if kind == "real_time":
        vals = np.array([complex(float(rows[i][cols["re"]]), float(rows[i][cols["im"]])) for i in order])
    else:
        vals = np.array([float(rows[i][cols["value"]]) for i in order])
    return Signal(values=vals, kind=kind, energy_map=emap)


def write_json(path: Path, doc: dict) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
