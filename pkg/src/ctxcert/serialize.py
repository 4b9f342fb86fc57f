"""File formats: projector families, graphs, count tables, and reports.

All indices in files are 0-based.  JSON reports are written with sorted keys
and no timestamps, so identical configurations produce byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import Any

import numpy as np

from .exclusivity import ExclusivityGraph
from .experiment import CountTable
from .graphstate import GraphSpec, graph_from_edges
from .mabk import ProjectorFamily


def family_to_dict(family: ProjectorFamily) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "ambient_dim": family.ambient_dim,
        "contexts": [list(ctx) for ctx in family.contexts],
        "projectors": [
            {"ray": [[float(a.real), float(a.imag)] for a in ray]}
            for ray in family.rays
        ],
    }
    if family.labels is not None:
        payload["labels"] = list(family.labels)
    return payload


def family_from_dict(payload: dict[str, Any]) -> ProjectorFamily:
    rays = np.array([
        [complex(re, im) for re, im in proj["ray"]]
        for proj in payload["projectors"]
    ])
    return ProjectorFamily(
        rays=rays,
        contexts=[list(ctx) for ctx in payload["contexts"]],
        ambient_dim=int(payload["ambient_dim"]),
        labels=list(payload["labels"]) if "labels" in payload else None,
    )


def graph_to_dict(g: ExclusivityGraph) -> dict[str, Any]:
    return {"n_vertices": g.n_vertices, "edges": [list(e) for e in g.edges]}


def graph_from_dict(payload: dict[str, Any]) -> ExclusivityGraph:
    return ExclusivityGraph(
        n_vertices=int(payload["n_vertices"]),
        edges=tuple((int(i), int(j)) for i, j in payload["edges"]),
    )


def graph_to_edge_list(g: ExclusivityGraph) -> str:
    """Plain text: first line ``n_vertices``, then one ``i j`` pair per line."""
    lines = [str(g.n_vertices)]
    lines += [f"{i} {j}" for i, j in g.edges]
    return "\n".join(lines) + "\n"


def graph_from_edge_list(text: str) -> ExclusivityGraph:
    lines = [ln.strip() for ln in text.splitlines()
             if ln.strip() and not ln.startswith("#")]
    n = int(lines[0])
    edges = tuple(tuple(int(tok) for tok in ln.split()) for ln in lines[1:])
    return ExclusivityGraph(n, edges)  # type: ignore[arg-type]


def load_graph(path: str | Path) -> ExclusivityGraph:
    """Graph from JSON or plain edge-list text, judged by the content."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return graph_from_dict(json.loads(text))
    return graph_from_edge_list(text)


def graphspec_to_dict(g: GraphSpec) -> dict[str, Any]:
    payload: dict[str, Any] = {"n": g.n, "edges": [list(e) for e in g.edges()]}
    if g.universal_vertex is not None:
        payload["universal"] = g.universal_vertex
    return payload


def graphspec_from_dict(payload: dict[str, Any]) -> GraphSpec:
    return graph_from_edges(
        int(payload["n"]),
        [(int(i), int(j)) for i, j in payload["edges"]],
        universal_vertex=payload.get("universal"),
    )


def counts_to_csv(table: CountTable, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# shots_nominal={table.shots_nominal} "
                 f"normalization={table.normalization}\n")
        writer = csv.writer(fh)
        writer.writerow(["prep_id", "meas_id", "count_1", "count_0"])
        for (prep, meas), (c1, c0) in sorted(table.records.items()):
            writer.writerow([prep, meas, c1, c0])


def counts_from_csv(path: str | Path) -> CountTable:
    shots = 0
    normalization = "paired"
    records: dict[tuple[str, str], tuple[int, int]] = {}
    with open(path, newline="") as fh:
        first_data_line = 2
        header_line = fh.readline()
        if header_line.startswith("#"):
            first_data_line = 3
            for token in header_line[1:].split():
                key, _, value = token.partition("=")
                if key == "shots_nominal":
                    shots = int(value)
                elif key == "normalization":
                    normalization = value
        else:
            fh.seek(0)
        reader = csv.DictReader(fh)
        for lineno, row in enumerate(reader, start=first_data_line):
            try:
                key = (row["prep_id"], row["meas_id"])
                records[key] = (int(row["count_1"]), int(row["count_0"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}: malformed count row at line "
                                 f"{lineno}: {exc}") from exc
    if not records:
        raise ValueError(f"{path}: no count records found")
    if shots == 0:
        shots = max(c1 + c0 for c1, c0 in records.values())
    return CountTable(records=records, shots_nominal=shots,
                      normalization=normalization)


def bundle_to_dict(bundle) -> dict[str, Any]:
    return {
        "provenance": bundle.provenance,
        "p_vertex": {str(k): v for k, v in sorted(bundle.p_vertex.items())},
        "p_cond1": {f"{i},{j}": v for (i, j), v in sorted(bundle.p_cond1.items())},
        "p_cond0": {f"{i},{j}": v for (i, j), v in sorted(bundle.p_cond0.items())},
    }


def bundle_from_dict(payload: dict[str, Any]):
    from .analysis import ProbabilityBundle

    def split(key: str) -> tuple[int, int]:
        i, j = key.split(",")
        return int(i), int(j)

    return ProbabilityBundle(
        p_vertex={int(k): float(v) for k, v in payload["p_vertex"].items()},
        p_cond1={split(k): float(v) for k, v in payload.get("p_cond1", {}).items()},
        p_cond0={split(k): float(v) for k, v in payload.get("p_cond0", {}).items()},
        provenance=payload.get("provenance", "ingested"),
    )


def write_json(payload: dict[str, Any], path: str | Path) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_json(path: str | Path) -> dict[str, Any]:
    return json.loads(Path(path).read_text())


def config_hash(config: dict[str, Any]) -> str:
    """Stable hash of a configuration mapping, for report provenance."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]
