"""Exact maximum independent set by branch and bound.

The search runs as maximum clique on the complement graph with a greedy
coloring upper bound (an independent set meets each color class of the
complement at most once).  Vertex sets are Python-int bitmasks, tie-breaks
always favor the smallest index, so results are deterministic.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

from .exclusivity import ExclusivityGraph


@dataclass
class AlphaCertificate:
    """Best independent set found, with certification status.

    When ``certified`` is true, ``alpha`` is the exact independence number.
    Otherwise the search ran out of budget and ``alpha`` is only a lower
    bound, with ``upper_bound`` the best bound established so far.
    """

    alpha: int
    witness_set: list[int]
    certified: bool
    upper_bound: int
    nodes_explored: int = 0
    elapsed_seconds: float = 0.0


class _Budget:
    def __init__(self, seconds: float | None):
        self.deadline = None if seconds is None else time.monotonic() + seconds
        self.expired = False
        self._tick = 0

    def check(self) -> bool:
        if self.deadline is None:
            return False
        self._tick += 1
        if self._tick % 256 == 0 and time.monotonic() > self.deadline:
            self.expired = True
        return self.expired


def greedy_independent_set(g: ExclusivityGraph) -> list[int]:
    """Deterministic min-degree greedy heuristic."""
    masks = g.adjacency_masks()
    alive = set(range(g.n_vertices))
    chosen = []
    while alive:
        v = min(alive, key=lambda u: (bin(masks[u]).count("1"), u))
        chosen.append(v)
        dead = {v} | {u for u in alive if masks[v] >> u & 1}
        alive -= dead
    return sorted(chosen)


def _greedy_coloring(order: Sequence[int], adj: list[int], pool: int) -> tuple[list[int], list[int]]:
    """Color the vertices of ``pool`` greedily; returns vertices sorted by
    color (ascending) together with their color numbers (1-based)."""
    color_classes: list[int] = []  # bitmask per color
    colored: list[tuple[int, int]] = []
    for v in order:
        if not (pool >> v & 1):
            continue
        for c, cls in enumerate(color_classes):
            if cls & adj[v] == 0:
                color_classes[c] |= 1 << v
                colored.append((v, c + 1))
                break
        else:
            color_classes.append(1 << v)
            colored.append((v, len(color_classes)))
    colored.sort(key=lambda vc: (vc[1], vc[0]))
    return [v for v, _ in colored], [c for _, c in colored]


def independence_number(
    g: ExclusivityGraph,
    budget_seconds: float | None = 60.0,
    initial_set: Sequence[int] | None = None,
) -> AlphaCertificate:
    """Exact independence number unless the time budget runs out first.

    ``initial_set`` seeds the incumbent (it must be independent in ``g``);
    good seeds mostly serve to prune the search earlier.
    """
    n = g.n_vertices
    if n == 0:
        return AlphaCertificate(0, [], True, 0)
    if n > 10_000:
        raise ValueError("graph too large for exact search")
    start = time.monotonic()

    # Work on the complement: independent sets in g are cliques there.
    comp = [0] * n
    full = (1 << n) - 1
    for i, j in g.edges:
        comp[i] |= 1 << j
        comp[j] |= 1 << i
    for v in range(n):
        comp[v] = ~comp[v] & full & ~(1 << v)

    best = list(greedy_independent_set(g))
    if initial_set is not None:
        cand = sorted(set(int(v) for v in initial_set))
        mask = sum(1 << v for v in cand)
        for v in cand:
            if comp[v] & mask != mask & ~(1 << v):
                raise ValueError("initial_set is not independent")
        if len(cand) > len(best):
            best = cand

    # Static order: descending complement degree, then index.
    order = sorted(range(n), key=lambda v: (-bin(comp[v]).count("1"), v))

    budget = _Budget(budget_seconds)
    nodes = 0
    best_mask = sum(1 << v for v in best)
    root_order, root_colors = _greedy_coloring(order, comp, full)
    root_bound = root_colors[-1] if root_colors else 0

    def expand(clique: int, size: int, pool: int) -> None:
        nonlocal nodes, best, best_mask
        nodes += 1
        if budget.check():
            return
        verts, colors = _greedy_coloring(order, comp, pool)
        for idx in range(len(verts) - 1, -1, -1):
            if budget.expired:
                return
            if size + colors[idx] <= len(best):
                return
            v = verts[idx]
            pool &= ~(1 << v)
            new_clique = clique | (1 << v)
            new_pool = pool & comp[v]
            if new_pool == 0:
                if size + 1 > len(best):
                    best = sorted(b for b in range(n) if new_clique >> b & 1)
                    best_mask = new_clique
            else:
                expand(new_clique, size + 1, new_pool)

    expand(0, 0, full)
    elapsed = time.monotonic() - start
    certified = not budget.expired
    return AlphaCertificate(
        alpha=len(best),
        witness_set=best,
        certified=certified,
        upper_bound=len(best) if certified else max(root_bound, len(best)),
        nodes_explored=nodes,
        elapsed_seconds=elapsed,
    )
