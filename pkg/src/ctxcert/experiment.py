"""Prepare-and-measure simulation of sequential ideal measurements.

A sequence of two rank-1 projective measurements is emulated the way the
hardware does it: measure the first projector destructively, then re-prepare
either its eigenstate (outcome 1) or the renormalized remainder of the input
state (outcome 0), and measure the second projector on the reprepared state.
Counting statistics are Poissonian with per-setting counter-based random
streams, so adding settings never perturbs existing draws.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .mabk import ProjectorFamily

ZERO_BRANCH_TOL = 1e-14


def _as_ray(projector: np.ndarray) -> np.ndarray:
    """Accept a rank-1 projector matrix or its eigenray."""
    arr = np.asarray(projector, dtype=complex)
    if arr.ndim == 1:
        return linalg.normalize(arr)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("projector must be a square matrix or a ray")
    if not linalg.is_projector(arr):
        raise ValueError("matrix is not a projector")
    evals, evecs = np.linalg.eigh(arr)
    if abs(evals[-1] - 1.0) > 1e-8 or (evals[:-1] > 1e-8).any():
        raise ValueError("projector is not rank-1")
    return evecs[:, -1]


def luders_update(state: np.ndarray, projector: np.ndarray, outcome: int) -> np.ndarray:
    """Post-measurement state for the requested outcome of a rank-1 projector.

    Outcome 1 collapses onto the eigenray; outcome 0 removes the eigenray
    component and renormalizes.
    """
    if outcome not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    state = np.asarray(state, dtype=complex).ravel()
    ray = _as_ray(projector)
    if ray.size != state.size:
        raise ValueError("projector dimension does not match the state")
    amp = np.vdot(ray, state)
    p1 = abs(amp) ** 2
    if outcome == 1:
        if p1 <= ZERO_BRANCH_TOL:
            raise ValueError("impossible outcome: the state is orthogonal "
                             "to the projector")
        return linalg.fix_global_phase(ray)
    if 1.0 - p1 <= ZERO_BRANCH_TOL:
        raise ValueError("impossible outcome: the state lies inside "
                         "the projector")
    return linalg.normalize(state - amp * ray)


@dataclass(frozen=True)
class SequentialProbabilities:
    """Two-point statistics of measuring projector i, then projector j."""

    p1_first: float     # P(1 | i)
    p11: float          # P(1, 1 | i, j)
    p10: float          # P(1, 0 | i, j)
    p01: float          # P(0, 1 | i, j)

    @property
    def p00(self) -> float:
        return 1.0 - self.p11 - self.p10 - self.p01


def sequential_probabilities(state: np.ndarray, i: int, j: int,
                             family: ProjectorFamily) -> SequentialProbabilities:
    """Exact Born-rule statistics of the measure/reprepare/measure sequence."""
    if i == j:
        raise ValueError("the two measurements must differ")
    n = family.n_events
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"indices ({i}, {j}) out of range for {n} events")
    state = np.asarray(state, dtype=complex).ravel()
    ray_i = family.rays[i]
    ray_j = family.rays[j]
    p1 = abs(np.vdot(ray_i, state)) ** 2
    q11 = abs(np.vdot(ray_j, ray_i)) ** 2
    if p1 >= 1.0 - ZERO_BRANCH_TOL:
        q01 = 0.0
    else:
        remainder = luders_update(state, ray_i, 0)
        q01 = abs(np.vdot(ray_j, remainder)) ** 2
    return SequentialProbabilities(
        p1_first=float(p1),
        p11=float(p1 * q11),
        p10=float(p1 * (1.0 - q11)),
        p01=float((1.0 - p1) * q01),
    )


@dataclass(frozen=True)
class NoiseModel:
    """Imperfection knobs of the simulated setup.

    ``visibility`` scales the projector contrast, ``dark_rate`` injects
    spurious outcome-1 events, and ``prep_angle_jitter`` tilts every prepared
    ray by a random angle (radians).  The noiseless limit (1, 0, 0) recovers
    the analytic probabilities exactly.
    """

    visibility: float = 1.0
    dark_rate: float = 0.0
    prep_angle_jitter: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.visibility <= 1.0:
            raise ValueError("visibility must lie in [0, 1]")
        if self.dark_rate < 0.0:
            raise ValueError("dark_rate must be nonnegative")
        if self.prep_angle_jitter < 0.0:
            raise ValueError("prep_angle_jitter must be nonnegative")


@dataclass(frozen=True)
class Setting:
    """One prepare-and-measure configuration."""

    prep_id: str
    meas_id: str
    prep_ray: np.ndarray
    meas_ray: np.ndarray


@dataclass
class CountTable:
    """Raw counts keyed by (preparation, measurement) identifiers.

    ``normalization`` records how probabilities are to be formed: ``paired``
    divides count_1 by the per-setting total, ``reference`` divides by the
    nominal shot number (the mode used when reconstructing published
    probabilities, where the denominator was a separately monitored rate).
    """

    records: dict[tuple[str, str], tuple[int, int]] = field(default_factory=dict)
    shots_nominal: int = 0
    normalization: str = "paired"

    def __post_init__(self) -> None:
        if self.normalization not in ("paired", "reference"):
            raise ValueError(f"unknown normalization {self.normalization!r}")
        for key, (c1, c0) in self.records.items():
            if c1 < 0 or c0 < 0:
                raise ValueError(f"negative count in record {key}")

    def probability(self, key: tuple[str, str]) -> float:
        c1, c0 = self.records[key]
        if self.normalization == "reference":
            return c1 / self.shots_nominal
        total = c1 + c0
        if total == 0:
            raise ValueError(f"record {key} has zero total count")
        return c1 / total


def stream_rng(seed: int, prep_id: str, meas_id: str, group: int | None = None) -> np.random.Generator:
    """Counter-based generator keyed by the setting identifiers.

    Streams derive from a hash of (seed, prep, meas[, group]), so results do
    not depend on evaluation order and extending a plan leaves existing
    settings untouched.
    """
    tag = f"{seed}:{prep_id}:{meas_id}"
    if group is not None:
        tag += f":{group}"
    digest = hashlib.sha256(tag.encode()).digest()
    key = int.from_bytes(digest[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))


def _jitter_ray(ray: np.ndarray, angle_scale: float, rng: np.random.Generator) -> np.ndarray:
    if angle_scale == 0.0:
        return ray
    direction = rng.normal(size=ray.size) + 1j * rng.normal(size=ray.size)
    direction -= np.vdot(ray, direction) * ray
    norm = np.linalg.norm(direction)
    if norm == 0.0:
        return ray
    angle = abs(rng.normal(scale=angle_scale))
    return np.cos(angle) * ray + np.sin(angle) * (direction / norm)


def simulate_counts(plan: list[Setting], shots: int, noise: NoiseModel) -> CountTable:
    """Poissonian counts for every setting of the plan.

    ``count_1 ~ Poisson(shots * p_noisy)`` and ``count_0`` its complement,
    with ``p_noisy = visibility * p + dark_rate * (1 - p)`` evaluated after
    jittering the prepared ray.
    """
    if shots <= 0:
        raise ValueError("shots must be positive")
    records = {}
    for setting in plan:
        key = (setting.prep_id, setting.meas_id)
        if key in records:
            raise ValueError(f"duplicate setting {key}")
        rng = stream_rng(noise.seed, *key)
        prep = _jitter_ray(setting.prep_ray, noise.prep_angle_jitter, rng)
        p = abs(np.vdot(setting.meas_ray, prep)) ** 2
        p_noisy = noise.visibility * p + noise.dark_rate * (1.0 - p)
        p_noisy = min(max(p_noisy, 0.0), 1.0)
        c1 = int(rng.poisson(shots * p_noisy))
        c0 = int(rng.poisson(shots * (1.0 - p_noisy)))
        records[key] = (c1, c0)
    return CountTable(records=records, shots_nominal=shots, normalization="paired")


def vertex_id(index: int) -> str:
    """1-based vertex identifier, e.g. index 4 -> ``v5``."""
    return f"v{index + 1}"


def parse_vertex_id(name: str) -> int:
    if not name.startswith("v"):
        raise ValueError(f"not a vertex identifier: {name!r}")
    return int(name[1:]) - 1


def standard_plan(rays: np.ndarray, state: np.ndarray,
                  edges: list[tuple[int, int]]) -> list[Setting]:
    """Full two-point experiment plan for a ray family and an input state.

    Per vertex k: measure ray k on the input state.  Per edge, in both
    directions: measure the second ray on the outcome-1 repreparation (the
    first ray itself) and on the outcome-0 repreparation of the input state.
    """
    rays = np.asarray(rays, dtype=complex)
    state = np.asarray(state, dtype=complex).ravel()
    plan = [Setting("psi", vertex_id(k), state, rays[k])
            for k in range(rays.shape[0])]
    for i, j in edges:
        for a, b in ((i, j), (j, i)):
            remainder = luders_update(state, rays[a], 0)
            plan.append(Setting(f"post1:{vertex_id(a)}", vertex_id(b),
                                rays[a], rays[b]))
            plan.append(Setting(f"post0:{vertex_id(a)}", vertex_id(b),
                                remainder, rays[b]))
    return plan


def plan_to_specs(plan: list[Setting]) -> list[dict]:
    """Abstract plan entries: ``prep`` is ``"psi"``, a ray index, or a
    conditional spec ``{"ray": k, "outcome": 0|1}``; ``meas`` is a ray index
    (all indices 0-based)."""
    specs = []
    for setting in plan:
        prep: object
        if setting.prep_id == "psi":
            prep = "psi"
        elif setting.prep_id.startswith("post1:"):
            prep = {"ray": parse_vertex_id(setting.prep_id[6:]), "outcome": 1}
        elif setting.prep_id.startswith("post0:"):
            prep = {"ray": parse_vertex_id(setting.prep_id[6:]), "outcome": 0}
        else:
            raise ValueError(f"unrecognized preparation id {setting.prep_id!r}")
        specs.append({"prep": prep, "meas": parse_vertex_id(setting.meas_id)})
    return specs


def plan_from_specs(specs: list[dict], rays: np.ndarray,
                    state: np.ndarray) -> list[Setting]:
    """Resolve abstract plan entries against a ray family and input state."""
    rays = np.asarray(rays, dtype=complex)
    state = np.asarray(state, dtype=complex).ravel()
    plan = []
    for pos, spec in enumerate(specs):
        try:
            prep = spec["prep"]
            meas = int(spec["meas"])
            if prep == "psi":
                prep_id, prep_ray = "psi", state
            elif isinstance(prep, int):
                prep_id, prep_ray = f"post1:{vertex_id(prep)}", rays[prep]
            else:
                k = int(prep["ray"])
                outcome = int(prep["outcome"])
                if outcome == 1:
                    prep_id, prep_ray = f"post1:{vertex_id(k)}", rays[k]
                else:
                    prep_id = f"post0:{vertex_id(k)}"
                    prep_ray = luders_update(state, rays[k], 0)
            plan.append(Setting(prep_id, vertex_id(meas), prep_ray, rays[meas]))
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed plan entry {pos}: {exc}") from exc
    return plan
