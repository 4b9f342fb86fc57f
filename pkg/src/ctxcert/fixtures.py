"""Bundled reference dataset: optimal 7-dimensional rays and the recorded
detection probabilities of the accompanying experiment.

Data ships as versioned files under ``ctxcert/data``; every loader verifies a
pinned SHA-256 before parsing, so silent edits of the transcribed values are
caught immediately.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import re
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .experiment import CountTable, vertex_id

CHECKSUMS = {
    "reference_rays_7d.json":
        "770b8fb7735d87dd1dc77eb949082179342997b77bfad1f5942a9ca4a74edb33",
    "reference_vertex_probabilities.csv":
        "fd7325ea930ea88e096a8cacba69c7b38b7a2b98dea79f571110bd8ae5ffe92b",
    "reference_conditional_outcome1.csv":
        "58c44656c7a8cd2485ddc5d98fee0e4d417d4e5f17ebd88f7dd8eadb78303be6",
    "reference_conditional_outcome0.csv":
        "e9af3883c523693e46755669f583d1213da761d3043fe28a318a13d444c2a9a1",
    "reference_edges.csv":
        "e64ab649b682ffeee9f495213f0f10b7c47de2b601b638ab087e0cca33916811",
}

NOMINAL_SHOTS = 100_000


def _read_bytes(name: str) -> bytes:
    data = resources.files("ctxcert").joinpath("data", name).read_bytes()
    digest = hashlib.sha256(data).hexdigest()
    expected = CHECKSUMS[name]
    if digest != expected:
        raise RuntimeError(
            f"fixture {name} fails its checksum ({digest} != {expected}); "
            "the transcribed data has been modified")
    return data


def fixture_checksums() -> dict[str, str]:
    """Verified checksums of every bundled data file."""
    for name in CHECKSUMS:
        _read_bytes(name)
    return dict(CHECKSUMS)


_SURD = re.compile(r"^(-?)(\d+)(?:/(?:(\d+)|sqrt\((\d+)\)))?$")


def _parse_surd(token: str) -> float:
    match = _SURD.match(token.strip())
    if not match:
        raise ValueError(f"cannot parse entry {token!r}")
    sign = -1.0 if match.group(1) else 1.0
    num = float(match.group(2))
    if match.group(3):
        return sign * num / float(match.group(3))
    if match.group(4):
        return sign * num / np.sqrt(float(match.group(4)))
    return sign * num


def _read_csv(name: str) -> list[dict[str, str]]:
    text = _read_bytes(name).decode()
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def reference_rays() -> tuple[np.ndarray, np.ndarray]:
    """The sixteen 7-dimensional measurement rays (row k is ray k+1) and the
    input state, both exact to float64."""
    payload = json.loads(_read_bytes("reference_rays_7d.json"))
    dim = payload["dim"]
    rays = np.zeros((len(payload["rays"]), dim))
    for key, entries in payload["rays"].items():
        rays[int(key) - 1] = [_parse_surd(tok) for tok in entries]
    state = np.array([_parse_surd(tok) for tok in payload["state"]])
    return rays, state


def reference_edges() -> list[tuple[int, int]]:
    """The 72 exclusive pairs, 0-based."""
    rows = _read_csv("reference_edges.csv")
    return [(int(r["i"]) - 1, int(r["j"]) - 1) for r in rows]


def reference_vertex_probabilities() -> dict[int, tuple[float, float]]:
    """0-based vertex -> (probability, 1-sigma error)."""
    rows = _read_csv("reference_vertex_probabilities.csv")
    return {int(r["vertex"]) - 1: (float(r["p"]), float(r["sigma"]))
            for r in rows}


def reference_conditionals(outcome: int) -> dict[tuple[int, int], tuple[float, float]]:
    """Directed (i, j) -> (probability, sigma) of measuring ray j on the
    outcome-``outcome`` repreparation of ray i.  Both directions of every
    edge are present; indices 0-based, probabilities as fractions."""
    if outcome not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    rows = _read_csv(f"reference_conditional_outcome{outcome}.csv")
    out: dict[tuple[int, int], tuple[float, float]] = {}
    for r in rows:
        i, j = int(r["i"]) - 1, int(r["j"]) - 1
        out[(i, j)] = (float(r["p_fwd_percent"]) / 100.0,
                       float(r["sigma_fwd_percent"]) / 100.0)
        out[(j, i)] = (float(r["p_rev_percent"]) / 100.0,
                       float(r["sigma_rev_percent"]) / 100.0)
    return out


@dataclass(frozen=True)
class ReferenceData:
    """Everything the analysis pipeline needs from the bundled dataset."""

    rays: np.ndarray
    state: np.ndarray
    edges: list[tuple[int, int]]
    p_vertex: dict[int, tuple[float, float]]
    p_cond1: dict[tuple[int, int], tuple[float, float]]
    p_cond0: dict[tuple[int, int], tuple[float, float]]

    @property
    def contexts(self) -> list[list[int]]:
        return [[0, 1, 2, 3], [4, 5, 6, 7], [8, 9, 10, 11], [12, 13, 14, 15]]


def load_reference() -> ReferenceData:
    rays, state = reference_rays()
    return ReferenceData(
        rays=rays,
        state=state,
        edges=reference_edges(),
        p_vertex=reference_vertex_probabilities(),
        p_cond1=reference_conditionals(1),
        p_cond0=reference_conditionals(0),
    )


def reference_count_table(shots: int = NOMINAL_SHOTS) -> CountTable:
    """Counts reconstructed from the recorded probabilities at the nominal
    shot scale (count_1 = round(p * shots)), in reference normalization."""
    data = load_reference()
    records: dict[tuple[str, str], tuple[int, int]] = {}

    def put(prep: str, meas: str, p: float) -> None:
        c1 = int(round(p * shots))
        records[(prep, meas)] = (c1, shots - c1)

    for k, (p, _) in sorted(data.p_vertex.items()):
        put("psi", vertex_id(k), p)
    for (i, j), (p, _) in sorted(data.p_cond1.items()):
        put(f"post1:{vertex_id(i)}", vertex_id(j), p)
    for (i, j), (p, _) in sorted(data.p_cond0.items()):
        put(f"post0:{vertex_id(i)}", vertex_id(j), p)
    return CountTable(records=records, shots_nominal=shots,
                      normalization="reference")
