"""Exclusivity graphs: construction from projector families, assignment
enumeration, and orthonormal-representation checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .mabk import ProjectorFamily


@dataclass(frozen=True)
class ExclusivityGraph:
    """Events as vertices, exclusive pairs as edges (stored with i < j)."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.n_vertices < 0:
            raise ValueError("n_vertices must be nonnegative")
        seen = set()
        canon = []
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop on vertex {i}")
            if not (0 <= i < self.n_vertices and 0 <= j < self.n_vertices):
                raise ValueError(f"edge ({i}, {j}) out of range")
            pair = (min(i, j), max(i, j))
            if pair in seen:
                raise ValueError(f"duplicate edge {pair}")
            seen.add(pair)
            canon.append(pair)
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        if self.labels is not None and len(self.labels) != self.n_vertices:
            raise ValueError("labels must match the vertex count")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def adjacency_masks(self) -> list[int]:
        """Neighbor bitmask per vertex."""
        masks = [0] * self.n_vertices
        for i, j in self.edges:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return masks

    def degrees(self) -> list[int]:
        deg = [0] * self.n_vertices
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def complement(self) -> "ExclusivityGraph":
        edges = [(i, j) for i in range(self.n_vertices)
                 for j in range(i + 1, self.n_vertices)
                 if (i, j) not in self.edge_set()]
        return ExclusivityGraph(self.n_vertices, tuple(edges), self.labels)


def empty_graph(k: int) -> ExclusivityGraph:
    return ExclusivityGraph(k, ())


def complete_graph(k: int) -> ExclusivityGraph:
    return ExclusivityGraph(k, tuple((i, j) for i in range(k) for j in range(i + 1, k)))


def cycle_graph(k: int) -> ExclusivityGraph:
    return ExclusivityGraph(k, tuple((i, (i + 1) % k) for i in range(k)))


def moebius_ladder(n_vertices: int) -> ExclusivityGraph:
    """Cycle on an even number of vertices plus all antipodal rungs."""
    if n_vertices < 4 or n_vertices % 2:
        raise ValueError("a Moebius ladder needs an even vertex count >= 4")
    half = n_vertices // 2
    edges = [(i, (i + 1) % n_vertices) for i in range(n_vertices)]
    edges += [(i, i + half) for i in range(half)]
    return ExclusivityGraph(n_vertices, tuple(edges))


def build_graph(family: ProjectorFamily, tol: float = 1e-8) -> ExclusivityGraph:
    """Edge (i, j) whenever ``|Pi_i Pi_j|_F < tol``.

    For rank-1 projectors with unit eigenrays the Frobenius norm of the
    product equals the ray overlap ``|<v_i|v_j>|``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if family.n_events == 0:
        raise ValueError("family is empty")
    overlaps = np.abs(family.gram())
    n = family.n_events
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if overlaps[i, j] < tol]
    labels = tuple(family.labels) if family.labels is not None else None
    return ExclusivityGraph(n, tuple(edges), labels)


@dataclass
class NchvReport:
    """Exhaustive scan of exclusivity-respecting 0/1 assignments.

    ``max_total`` equals the independence number.  ``forced_zero`` records
    whether every assignment saturating all contexts but the last leaves the
    last context empty; ``n_saturating`` counts those assignments.
    """

    max_total: int
    best_assignment: list[int]
    forced_zero: bool
    n_saturating: int
    counterexample: list[int] | None = None


def nchv_enumerate(g: ExclusivityGraph, contexts: Sequence[Sequence[int]]) -> NchvReport:
    """Enumerate every independent 0/1 assignment and test the forced-zero
    implication on the last context."""
    n = g.n_vertices
    if n > 24:
        raise ValueError(f"{n} vertices exceed the 2**24 enumeration ceiling")
    seen = set()
    for ctx in contexts:
        for v in ctx:
            if v in seen:
                raise ValueError("contexts must be disjoint")
            seen.add(v)

    masks = g.adjacency_masks()
    ctx_masks = [sum(1 << v for v in ctx) for ctx in contexts]
    lead_masks = ctx_masks[:-1]
    last_mask = ctx_masks[-1] if ctx_masks else 0

    best_total = -1
    best_subset = 0
    n_saturating = 0
    counterexample = None

    # Depth-first over independent sets: at each step either skip the lowest
    # candidate vertex or take it and drop its neighbors from the pool.  Each
    # independent set shows up as exactly one leaf (empty candidate pool), so
    # the per-assignment statistics are collected there.
    stack = [(0, (1 << n) - 1)]
    while stack:
        subset, candidates = stack.pop()
        if candidates == 0:
            total = bin(subset).count("1")
            if total > best_total:
                best_total = total
                best_subset = subset
            if contexts and all(
                    bin(subset & m).count("1") == 1 for m in lead_masks):
                n_saturating += 1
                if counterexample is None and subset & last_mask:
                    counterexample = subset
            continue
        v = (candidates & -candidates).bit_length() - 1
        rest = candidates & ~(1 << v)
        stack.append((subset, rest))
        stack.append((subset | (1 << v), rest & ~masks[v]))

    def _bits(subset: int) -> list[int]:
        return [v for v in range(n) if subset >> v & 1]

    return NchvReport(
        max_total=best_total,
        best_assignment=_bits(best_subset),
        forced_zero=counterexample is None,
        n_saturating=n_saturating,
        counterexample=None if counterexample is None else _bits(counterexample),
    )


@dataclass
class RepresentationReport:
    """Edge-orthogonality audit of candidate rays against a graph."""

    max_edge_overlap: float
    worst_edge: tuple[int, int] | None
    violating_edges: list[tuple[int, int]] = field(default_factory=list)
    orthogonal_nonedges: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violating_edges


def verify_representation(rays: Sequence[np.ndarray], g: ExclusivityGraph,
                          tol: float = 1e-10) -> RepresentationReport:
    """Check ``|<v_i|v_j>| < tol`` on every edge; also report non-edges that
    happen to be orthogonal (informational only)."""
    mat = np.asarray([np.asarray(r, dtype=complex).ravel() for r in rays])
    if mat.shape[0] != g.n_vertices:
        raise ValueError(
            f"got {mat.shape[0]} rays for a graph on {g.n_vertices} vertices")
    overlaps = np.abs(mat.conj() @ mat.T)
    worst = None
    worst_val = 0.0
    violating = []
    for i, j in g.edges:
        val = float(overlaps[i, j])
        if val >= worst_val:
            worst_val = val
            worst = (i, j)
        if val >= tol:
            violating.append((i, j))
    edge_set = g.edge_set()
    ortho_nonedges = [
        (i, j)
        for i in range(g.n_vertices)
        for j in range(i + 1, g.n_vertices)
        if (i, j) not in edge_set and overlaps[i, j] < tol
    ]
    return RepresentationReport(
        max_edge_overlap=worst_val,
        worst_edge=worst,
        violating_edges=violating,
        orthogonal_nonedges=ortho_nonedges,
    )
