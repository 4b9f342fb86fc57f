"""Multiqubit parity-type Bell operators, their event families, and the
dimension-concentration certificate.

The operator for odd ``n`` is the signed sum over all Pauli words with an odd
number of Y letters (X elsewhere), the sign of a word with ``2k+1`` Y's being
``(-1)**k``.  Keeping the positively-signed rank-1 product projectors of its
eigenbasis expansion yields an event family of ``2**(2n-2)`` projectors grouped
into ``2**(n-1)`` contexts; the family's eigenrays span only ``2**n - 1``
dimensions, which is what the concentration certificate establishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import linalg
from .pauli import PauliString

MAX_QUBITS = 7  # 2**(2n-2) projectors in dimension 2**n; desk limit


def _check_odd(n: int) -> None:
    if n < 3 or n % 2 == 0:
        raise ValueError(f"n must be an odd integer >= 3, got {n}")
    if n > MAX_QUBITS:
        raise ValueError(f"n={n} exceeds the configured cap of {MAX_QUBITS}")


def ghz_state(n: int, flipped: bool = False) -> np.ndarray:
    """(|0...0> + i|1...1>)/sqrt(2); the flipped variant carries ``-i``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    vec = np.zeros(2**n, dtype=complex)
    phase = -1.0j if flipped else 1.0j
    vec[0] = 1.0 / np.sqrt(2.0)
    vec[-1] = phase / np.sqrt(2.0)
    return vec


@dataclass(frozen=True)
class MabkInstance:
    """Bell operator data for odd ``n``: terms, matrix, and both bounds."""

    n: int
    terms: tuple[PauliString, ...]
    operator: np.ndarray
    classical_bound: float
    quantum_bound: float


def build_mabk(n: int) -> MabkInstance:
    """Construct the n-qubit parity Bell operator as an explicit Pauli sum.

    Terms are ordered by increasing Y-count, then lexicographically by the
    Y positions.
    """
    _check_odd(n)
    terms: list[PauliString] = []
    for k in range((n - 1) // 2 + 1):
        sign = (-1) ** k
        for positions in combinations(range(n), 2 * k + 1):
            letters = "".join("Y" if q in positions else "X" for q in range(n))
            terms.append(PauliString(letters, sign))
    operator = np.zeros((2**n, 2**n), dtype=complex)
    for term in terms:
        operator += term.matrix()
    return MabkInstance(
        n=n,
        terms=tuple(terms),
        operator=operator,
        classical_bound=2.0 ** ((n - 1) / 2),
        quantum_bound=2.0 ** (n - 1),
    )


@dataclass
class ProjectorFamily:
    """Indexed rank-1 projectors with context structure.

    ``rays`` holds the unit eigenrays row-wise, so projector ``k`` is
    ``outer(rays[k], rays[k].conj())``.  ``contexts`` partitions the indices
    into groups of mutually exclusive events.  ``meta`` optionally records,
    per projector, the Pauli letters and the 0/1 sign pattern (0 = +1) that
    generated it.
    """

    rays: np.ndarray
    contexts: list[list[int]]
    ambient_dim: int
    labels: list[str] | None = None
    meta: list[tuple[str, tuple[int, ...]]] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.rays = np.asarray(self.rays, dtype=complex)
        if self.rays.ndim != 2:
            raise ValueError("rays must be a 2-D array (events x dimension)")
        if self.rays.shape[1] != self.ambient_dim:
            raise ValueError("ray dimension does not match ambient_dim")
        covered = sorted(i for ctx in self.contexts for i in ctx)
        if covered != list(range(len(self.rays))):
            raise ValueError("contexts must partition the projector indices")

    @property
    def n_events(self) -> int:
        return self.rays.shape[0]

    def projector(self, k: int) -> np.ndarray:
        ray = self.rays[k]
        return np.outer(ray, ray.conj())

    def gram(self) -> np.ndarray:
        """Matrix of overlaps <v_i|v_j>."""
        return self.rays.conj() @ self.rays.T

    def validate(self, tol: float = 1e-10) -> None:
        """Check unit rays and in-context orthogonality."""
        norms = np.linalg.norm(self.rays, axis=1)
        if np.max(np.abs(norms - 1.0)) > tol:
            raise ValueError("family contains non-unit rays")
        gram = self.gram()
        for ctx in self.contexts:
            for a, i in enumerate(ctx):
                for j in ctx[a + 1:]:
                    if abs(gram[i, j]) > tol:
                        raise ValueError(
                            f"projectors {i} and {j} share a context but are "
                            f"not orthogonal (overlap {abs(gram[i, j]):.2e})")


# Event ordering of the three-qubit family.  The first context belongs to the
# all-Y word, and the sign patterns below (0 = +1, 1 = -1) follow the
# rearranged expansion that the published 72-edge list and the reference ray
# table are keyed to.
_THREE_QUBIT_LAYOUT: list[tuple[str, list[tuple[int, ...]]]] = [
    ("YYY", [(1, 0, 0), (1, 1, 1), (0, 0, 1), (0, 1, 0)]),
    ("YXX", [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]),
    ("XYX", [(1, 0, 1), (1, 1, 0), (0, 0, 0), (0, 1, 1)]),
    ("XXY", [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]),
]


def _pattern_signs(pattern: tuple[int, ...]) -> list[int]:
    return [1 - 2 * b for b in pattern]


def mu_family(n: int) -> ProjectorFamily:
    """Positive-projector event family of the n-qubit operator.

    For ``n == 3`` the ordering is pinned to the published layout; for larger
    odd ``n`` the contexts follow the term order of :func:`build_mabk` and,
    inside a context, sign patterns are enumerated in binary order (qubit 0
    most significant, 0 meaning +1), keeping those whose sign product equals
    the term sign.
    """
    _check_odd(n)
    layout: list[tuple[str, list[tuple[int, ...]]]] = []
    if n == 3:
        layout = _THREE_QUBIT_LAYOUT
    else:
        for term in build_mabk(n).terms:
            patterns = []
            for code in range(2**n):
                bits = tuple((code >> (n - 1 - q)) & 1 for q in range(n))
                if (-1) ** sum(bits) == term.sign:
                    patterns.append(bits)
            layout.append((term.letters, patterns))

    rays = []
    contexts = []
    labels = []
    meta = []
    idx = 0
    for letters, patterns in layout:
        ctx = []
        for pattern in patterns:
            rays.append(linalg.sign_projector_ray(letters, _pattern_signs(pattern)))
            labels.append("".join(
                ("+" if b == 0 else "-") + ch.lower() for ch, b in zip(letters, pattern)))
            meta.append((letters, pattern))
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


def mu_value(state: np.ndarray, family: ProjectorFamily) -> float:
    """Sum of event probabilities ``sum_k <psi|Pi_k|psi>``."""
    state = np.asarray(state, dtype=complex).ravel()
    if state.size != family.ambient_dim:
        raise ValueError(
            f"state dimension {state.size} != family dimension {family.ambient_dim}")
    amps = family.rays.conj() @ state
    return float(np.sum(np.abs(amps) ** 2))


@dataclass(frozen=True)
class HardyProbabilities:
    """Per-context event-probability sums; the last one is the success term."""

    context_sums: tuple[float, ...]

    @property
    def p_success(self) -> float:
        return self.context_sums[-1]


def hardy_probabilities(state: np.ndarray, family: ProjectorFamily) -> HardyProbabilities:
    """Per-context sums of ``<Pi_k>`` on ``state``."""
    if len(family.contexts) < 2:
        raise ValueError("need at least two contexts")
    state = np.asarray(state, dtype=complex).ravel()
    if state.size != family.ambient_dim:
        raise ValueError(
            f"state dimension {state.size} != family dimension {family.ambient_dim}")
    amps = np.abs(family.rays.conj() @ state) ** 2
    sums = tuple(float(np.sum(amps[ctx])) for ctx in family.contexts)
    return HardyProbabilities(context_sums=sums)


@dataclass
class ConcentrationCertificate:
    """Numerical proof that a family's eigenrays span a deficient subspace.

    ``isometry`` has orthonormal columns spanning the rays; compressing every
    ray through it preserves the full Gram matrix, which is the canonical
    comparison object.  ``kernel`` is an orthonormal basis of the joint
    annihilated subspace (one vector for the Bell-operator families).
    """

    rank: int
    ambient_dim: int
    kernel: list[np.ndarray]
    compressed_rays: np.ndarray
    isometry: np.ndarray
    gram_deviation: float

    @property
    def null_ket(self) -> np.ndarray:
        if len(self.kernel) != 1:
            raise ValueError(
                f"kernel is {len(self.kernel)}-dimensional; no unique null ket")
        return self.kernel[0]


def concentration_certificate(
    family: ProjectorFamily, tol: float = linalg.DEFAULT_RANK_TOL
) -> ConcentrationCertificate:
    """Rank, kernel, and Gram-preserving compression of a family's rays."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if family.n_events == 0:
        raise ValueError("family is empty")
    rays = list(family.rays)
    rank = linalg.numeric_rank(rays, tol)
    kernel = linalg.nullspace(rays, tol)
    isometry = linalg.span_isometry(rays, tol)
    compressed = family.rays @ isometry.conj()
    compressed = np.array([linalg.fix_global_phase(v) for v in compressed])
    # Each ray keeps only a global phase, so the overlap magnitudes are the
    # invariant content of the Gram matrix.
    gram_before = np.abs(family.gram())
    gram_after = np.abs(compressed.conj() @ compressed.T)
    deviation = float(np.max(np.abs(gram_before - gram_after)))
    return ConcentrationCertificate(
        rank=rank,
        ambient_dim=family.ambient_dim,
        kernel=kernel,
        compressed_rays=compressed,
        isometry=isometry,
        gram_deviation=deviation,
    )


def best_classical_assignment(n: int) -> tuple[dict[tuple[int, str], int], int]:
    """Deterministic +/-1 assignment to every (qubit, letter) maximizing the
    Bell sum, found by exhaustive search over the 2**(2n) assignments.

    Returns the assignment map and the attained value (the noncontextual
    bound ``2**((n-1)/2)`` for odd ``n``).
    """
    _check_odd(n)
    terms = build_mabk(n).terms
    best_value = -(2 ** (n - 1)) - 1
    best_map: dict[tuple[int, str], int] = {}
    for code in range(4**n):
        xs = [1 - 2 * ((code >> q) & 1) for q in range(n)]
        ys = [1 - 2 * ((code >> (n + q)) & 1) for q in range(n)]
        value = 0
        for term in terms:
            prod = term.sign
            for q, ch in enumerate(term.letters):
                prod *= xs[q] if ch == "X" else ys[q]
            value += prod
        if value > best_value:
            best_value = value
            best_map = {(q, "X"): xs[q] for q in range(n)}
            best_map.update({(q, "Y"): ys[q] for q in range(n)})
    return best_map, int(best_value)


def classical_witness_events(family: ProjectorFamily,
                             assignment: dict[tuple[int, str], int]) -> list[int]:
    """Events selected by a deterministic assignment, one per satisfied
    context.

    Any two selected events agree on every shared letter, so the returned
    indices form an independent set of the family's exclusivity graph.
    """
    if family.meta is None:
        raise ValueError("family carries no letter metadata")
    chosen = []
    for ctx in family.contexts:
        letters, _ = family.meta[ctx[0]]
        wanted = tuple(0 if assignment[(q, ch)] > 0 else 1
                       for q, ch in enumerate(letters))
        for k in ctx:
            if family.meta[k][1] == wanted:
                chosen.append(k)
                break
    return chosen
