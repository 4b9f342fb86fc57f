"""Stabilizer graph states and their parity-paradox event families.

A graph on ``n`` vertices defines one stabilizer per qubit (X there, Z on the
neighbors) and the state they jointly fix.  When ``n`` is odd and some vertex
is adjacent to all others, products of stabilizers can be arranged into a
list of ``n + 1`` commuting observables whose joint +1 outcome is certain on
the graph state yet unreachable by any global +/-1 assignment to the
single-qubit symbols.  The rank-1 events of those observables then form an
exclusivity structure living in a ``2**n - 1``-dimensional subspace.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .mabk import ProjectorFamily
from .pauli import PauliString, compose

MAX_DENSE_QUBITS = 10


@dataclass
class GraphSpec:
    """Simple connected graph; ``universal_vertex`` is detected if unset."""

    n: int
    adjacency: np.ndarray
    universal_vertex: int | None = None

    def __post_init__(self) -> None:
        self.adjacency = np.asarray(self.adjacency, dtype=int)
        if self.n < 3:
            raise ValueError("need at least 3 vertices")
        if self.adjacency.shape != (self.n, self.n):
            raise ValueError("adjacency shape does not match n")
        if not np.array_equal(self.adjacency, self.adjacency.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(self.adjacency) != 0):
            raise ValueError("adjacency must have a zero diagonal")
        if not np.isin(self.adjacency, (0, 1)).all():
            raise ValueError("adjacency entries must be 0 or 1")
        if not self._connected():
            raise ValueError("graph must be connected")
        if self.universal_vertex is None:
            degrees = self.adjacency.sum(axis=1)
            hits = np.where(degrees == self.n - 1)[0]
            self.universal_vertex = int(hits[0]) if hits.size else None
        else:
            row = self.adjacency[self.universal_vertex]
            if int(row.sum()) != self.n - 1:
                raise ValueError(
                    f"vertex {self.universal_vertex} is not adjacent to all others")

    def _connected(self) -> bool:
        seen = {0}
        frontier = [0]
        while frontier:
            v = frontier.pop()
            for u in np.where(self.adjacency[v])[0]:
                if int(u) not in seen:
                    seen.add(int(u))
                    frontier.append(int(u))
        return len(seen) == self.n

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)
                if self.adjacency[i, j]]


def graph_from_edges(n: int, edges: list[tuple[int, int]],
                     universal_vertex: int | None = None) -> GraphSpec:
    adj = np.zeros((n, n), dtype=int)
    for i, j in edges:
        adj[i, j] = adj[j, i] = 1
    return GraphSpec(n=n, adjacency=adj, universal_vertex=universal_vertex)


def star_graph(n: int) -> GraphSpec:
    """Hub vertex 0 joined to the other ``n - 1`` vertices."""
    return graph_from_edges(n, [(0, k) for k in range(1, n)])


def wheel_graph(n: int) -> GraphSpec:
    """Hub vertex 0 over a cycle on vertices 1..n-1."""
    if n < 4:
        raise ValueError("a wheel needs at least 4 vertices")
    rim = [(k, k + 1) for k in range(1, n - 1)] + [(n - 1, 1)]
    return graph_from_edges(n, [(0, k) for k in range(1, n)] + rim)


def stabilizers(g: GraphSpec) -> list[PauliString]:
    """X on each qubit, Z on its neighbors, identity elsewhere."""
    out = []
    for j in range(g.n):
        letters = "".join(
            "X" if k == j else ("Z" if g.adjacency[j, k] else "I")
            for k in range(g.n))
        out.append(PauliString(letters, +1))
    return out


def graph_state(g: GraphSpec) -> np.ndarray:
    """The unique common +1 eigenstate of all stabilizers.

    Computed as the range of the product of the ``(I + S_j)/2`` projectors; a
    trace away from one signals a dependent stabilizer set, which a valid
    GraphSpec cannot produce, so it is raised as an internal inconsistency.
    """
    if g.n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense construction capped at {MAX_DENSE_QUBITS} qubits")
    dim = 2**g.n
    proj = np.eye(dim, dtype=complex)
    for stab in stabilizers(g):
        proj = proj @ (np.eye(dim) + stab.matrix()) / 2.0
    trace = float(np.trace(proj).real)
    if abs(trace - 1.0) > 1e-8:
        raise RuntimeError(
            f"joint +1 eigenspace has dimension {trace:.6f}, expected 1; "
            "the stabilizer set is internally inconsistent")
    col = int(np.argmax(np.linalg.norm(proj, axis=0)))
    return linalg.fix_global_phase(linalg.normalize(proj[:, col]))


def _ordering(g: GraphSpec) -> list[int]:
    """Universal vertex first, remaining vertices ascending."""
    if g.universal_vertex is None:
        raise ValueError("graph has no universal vertex")
    return [g.universal_vertex] + [v for v in range(g.n) if v != g.universal_vertex]


@dataclass
class ParadoxBundle:
    """Operator list, exponent table, and consistency flags of a paradox."""

    operators: list[PauliString]
    exponents: np.ndarray            # (n+1, n) stabilizer exponents mod 2
    ordering: list[int]              # qubit order used by the construction
    formula_consistent: bool         # verbatim exponent recipe passed checks
    sign_product: int = field(default=-1)


def _theta_verbatim(cmat: np.ndarray, n: int) -> dict[int, int]:
    """Published exponent recipe over ordered positions 2..n (1-based)."""
    thetas = {}
    for j in range(2, n + 1):
        total = 1 + int(cmat[n - 1, 1])
        for k in range(2, n):
            if k != j:
                total += int(cmat[k - 1, k])
        thetas[j] = total % 2
    return thetas


def _theta_corrected(cmat: np.ndarray, n: int) -> dict[int, int]:
    """Exponents solved from the even-multiplicity conditions over GF(2)."""
    base = 1
    for k in range(2, n):
        base += int(cmat[k - 1, k])
    t = base % 2
    thetas = {j: (t + int(cmat[j - 1, j])) % 2 for j in range(2, n)}
    thetas[n] = t
    return thetas


def _assemble(g: GraphSpec, thetas: dict[int, int]) -> tuple[list[PauliString], np.ndarray]:
    order = _ordering(g)
    n = g.n
    stabs = stabilizers(g)
    s = [stabs[v] for v in order]  # s[p-1] is the stabilizer at position p

    rows: list[list[int]] = []
    rows.append([1] + [0] * (n - 1))
    rows.append([thetas[n], 1] + [0] * (n - 2))
    for j in range(2, n):
        row = [0] * n
        row[0] = thetas[j]
        row[j - 1] = 1
        row[j] = 1
        rows.append(row)
    last = [0] * n
    last[0] = thetas[n]
    last[n - 1] = 1
    rows.append(last)

    ops = []
    for row in rows:
        factors = [s[p] for p in range(n) for _ in range(row[p])]
        ops.append(compose(factors))
    return ops, np.array(rows, dtype=int) % 2


def _solve_gf2(mat: np.ndarray, rhs: np.ndarray) -> np.ndarray | None:
    """One solution of ``mat @ f = rhs`` over GF(2), or None."""
    m, n = mat.shape
    aug = np.concatenate([mat % 2, (rhs % 2).reshape(-1, 1)], axis=1)
    row = 0
    pivots = []
    for col in range(n):
        hit = next((r for r in range(row, m) if aug[r, col]), None)
        if hit is None:
            continue
        aug[[row, hit]] = aug[[hit, row]]
        for r in range(m):
            if r != row and aug[r, col]:
                aug[r] ^= aug[row]
        pivots.append(col)
        row += 1
    if np.any(aug[row:, -1]):
        return None
    f = np.zeros(n, dtype=int)
    for r, col in enumerate(pivots):
        f[col] = aug[r, -1]
    return f


def _validate_paradox(ops: list[PauliString], exponents: np.ndarray) -> bool:
    if np.any(exponents.sum(axis=0) % 2):
        return False
    counts: dict[tuple[int, str], int] = {}
    for op in ops:
        for q, ch in enumerate(op.letters):
            if ch != "I":
                counts[(q, ch)] = counts.get((q, ch), 0) + 1
    if any(c % 2 for c in counts.values()):
        return False
    sign_product = 1
    for op in ops:
        sign_product *= op.sign
    if sign_product != -1:
        return False
    return _solve_gf2(exponents, np.ones(len(ops), dtype=int)) is not None


def paradox_bundle(g: GraphSpec) -> ParadoxBundle:
    """Build and validate the paradox operator list for ``g``.

    The published exponent recipe is tried first; when its postconditions
    fail (it assumes the last and second ordered vertices are non-adjacent),
    the exponents are re-solved from the even-multiplicity conditions and the
    bundle records that the recipe was inconsistent for this graph.
    """
    if g.n % 2 == 0:
        raise ValueError("the construction needs an odd vertex count")
    if g.universal_vertex is None:
        raise ValueError(
            "no universal vertex: the paradox construction requires a vertex "
            "adjacent to all others")
    order = _ordering(g)
    cmat = g.adjacency[np.ix_(order, order)]

    ops, rows = _assemble(g, _theta_verbatim(cmat, g.n))
    if _validate_paradox(ops, rows):
        return ParadoxBundle(ops, rows, order, formula_consistent=True)

    ops, rows = _assemble(g, _theta_corrected(cmat, g.n))
    if not _validate_paradox(ops, rows):
        raise RuntimeError(
            "no consistent paradox operator list exists for this graph; "
            "both the published recipe and the solved exponents fail")
    return ParadoxBundle(ops, rows, order, formula_consistent=False)


def paradox_operators(g: GraphSpec) -> list[PauliString]:
    """The ``n + 1`` signed observables of the paradox."""
    return paradox_bundle(g).operators


def modified_state(g: GraphSpec) -> tuple[np.ndarray, np.ndarray]:
    """Flip vector ``f`` and the state on which every paradox observable has
    expectation -1.

    Solves ``E f = 1`` over GF(2), where row k of ``E`` lists which
    stabilizers enter observable k: flipping qubit j with Z inverts exactly
    the j-th stabilizer's eigenvalue.
    """
    bundle = paradox_bundle(g)
    f_ordered = _solve_gf2(bundle.exponents, np.ones(len(bundle.operators), dtype=int))
    if f_ordered is None:
        raise RuntimeError("flip system is infeasible for a validated paradox")
    f = np.zeros(g.n, dtype=int)
    for pos, vertex in enumerate(bundle.ordering):
        f[vertex] = f_ordered[pos]
    letters = "".join("Z" if f[q] else "I" for q in range(g.n))
    state = PauliString(letters, +1).matrix() @ graph_state(g)
    return f, linalg.normalize(state)


def paradox_event_family(g: GraphSpec) -> ProjectorFamily:
    """Rank-1 outcome events of the +1 eigenspace of each observable.

    Every observable is measured qubit-wise; qubits carrying an identity
    letter are completed in the computational basis, so each observable
    contributes ``2**(n-1)`` rank-1 product events whose outcome product on
    the measured qubits matches the observable's sign.
    """
    bundle = paradox_bundle(g)
    n = g.n
    rays = []
    contexts = []
    labels = []
    meta = []
    idx = 0
    for op in bundle.operators:
        want_odd = op.sign < 0
        support = op.support()
        ctx = []
        for code in range(2**n):
            bits = tuple((code >> (n - 1 - q)) & 1 for q in range(n))
            if (sum(bits[q] for q in support) & 1) != want_odd:
                continue
            vecs = []
            for q, ch in enumerate(op.letters):
                basis = {"X": linalg.EIGVEC_X, "Y": linalg.EIGVEC_Y}.get(ch, linalg.EIGVEC_Z)
                vecs.append(basis[1 - 2 * bits[q]])
            rays.append(linalg.kron_vectors(vecs))
            labels.append(str(op) + ":" + "".join(map(str, bits)))
            meta.append((op.letters.replace("I", "Z"), bits))
            ctx.append(idx)
            idx += 1
        contexts.append(ctx)
    return ProjectorFamily(
        rays=np.array(rays),
        contexts=contexts,
        ambient_dim=2**n,
        labels=labels,
        meta=meta,
    )


@dataclass
class LhvReport:
    """Exhaustive scan over +/-1 symbol assignments."""

    feasible: bool
    n_symbols: int
    max_satisfied: int
    n_operators: int


def lhv_satisfiability(operators: list[PauliString]) -> LhvReport:
    """Can any global +/-1 assignment to the appearing single-qubit symbols
    give every operator the value +1?

    Only symbols that actually occur are enumerated, keeping seven-qubit
    instances comfortably below the 2**21 assignment count.
    """
    symbols = sorted({(q, ch) for op in operators
                      for q, ch in enumerate(op.letters) if ch != "I"})
    if len(symbols) > 24:
        raise ValueError(f"{len(symbols)} symbols exceed the enumeration budget")
    index = {sym: k for k, sym in enumerate(symbols)}
    n_assign = 2 ** len(symbols)
    codes = np.arange(n_assign, dtype=np.uint64)

    def parity(values: np.ndarray) -> np.ndarray:
        values = values.copy()
        for shift in (32, 16, 8, 4, 2, 1):
            values ^= values >> np.uint64(shift)
        return values & np.uint64(1)

    satisfied = np.zeros(n_assign, dtype=np.int64)
    all_good = np.ones(n_assign, dtype=bool)
    for op in operators:
        mask = np.uint64(0)
        for q, ch in enumerate(op.letters):
            if ch != "I":
                mask |= np.uint64(1 << index[(q, ch)])
        odd = parity(codes & mask).astype(bool)
        value_plus = odd if op.sign < 0 else ~odd
        satisfied += value_plus
        all_good &= value_plus
    return LhvReport(
        feasible=bool(all_good.any()),
        n_symbols=len(symbols),
        max_satisfied=int(satisfied.max()),
        n_operators=len(operators),
    )


def expectation(op: PauliString, state: np.ndarray) -> float:
    """Real expectation value of a signed Pauli string on a ket."""
    val = np.vdot(state, op.matrix() @ state)
    return float(val.real)
