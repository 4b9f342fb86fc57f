"""Dense complex linear algebra shared by every other module.

Vectors are 1-D ``numpy`` arrays of ``complex128``; operators are square 2-D
arrays.  Dimensions stay small (operators up to 2**7, stacked ray matrices up
to a few thousand rows), so everything is dense and exact to float64.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

KET_NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PROJECTOR_TOL = 1e-10
DEFAULT_RANK_TOL = 1e-9

# Single-qubit constants.
ID2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# +1/-1 eigenvectors of X and Y (columns indexed by sign).
EIGVEC_X = {
    +1: np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
    -1: np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0),
}
EIGVEC_Y = {
    +1: np.array([1.0, 1.0j], dtype=complex) / np.sqrt(2.0),
    -1: np.array([1.0, -1.0j], dtype=complex) / np.sqrt(2.0),
}
EIGVEC_Z = {
    +1: np.array([1.0, 0.0], dtype=complex),
    -1: np.array([0.0, 1.0], dtype=complex),
}


def as_ket(entries: Iterable[complex]) -> np.ndarray:
    """Validate and return a normalized state vector."""
    vec = np.asarray(list(entries) if not isinstance(entries, np.ndarray) else entries,
                     dtype=complex).ravel()
    if vec.size < 1:
        raise ValueError("a ket needs at least one amplitude")
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) >= KET_NORM_TOL:
        raise ValueError(f"ket norm deviates from 1 by {abs(norm - 1.0):.3e}")
    return vec


def normalize(vec: np.ndarray) -> np.ndarray:
    """Rescale a nonzero vector to unit norm."""
    vec = np.asarray(vec, dtype=complex)
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return vec / norm


def is_hermitian(mat: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(mat - mat.conj().T)) < tol)


def is_projector(mat: np.ndarray, tol: float = PROJECTOR_TOL) -> bool:
    return is_hermitian(mat, tol) and bool(np.max(np.abs(mat @ mat - mat)) < tol)


def tensor(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product of square matrices, left to right."""
    if len(factors) == 0:
        raise ValueError("empty tensor product")
    out = np.asarray(factors[0], dtype=complex)
    if out.ndim != 2 or out.shape[0] != out.shape[1]:
        raise ValueError("tensor factors must be square matrices")
    for fac in factors[1:]:
        fac = np.asarray(fac, dtype=complex)
        if fac.ndim != 2 or fac.shape[0] != fac.shape[1]:
            raise ValueError("tensor factors must be square matrices")
        out = np.kron(out, fac)
    return out


def kron_vectors(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product of 1-D vectors, left to right."""
    if len(factors) == 0:
        raise ValueError("empty tensor product")
    out = np.asarray(factors[0], dtype=complex).ravel()
    for fac in factors[1:]:
        out = np.kron(out, np.asarray(fac, dtype=complex).ravel())
    return out


def sign_projector(letters: Sequence[str], signs: Sequence[int]) -> np.ndarray:
    """Product projector ``P(s1 L1) x ... x P(sn Ln)`` for letters in {X, Y}.

    Each single-qubit factor is the rank-1 projector onto the ``s``-eigenstate
    of the Pauli letter, so the result is a rank-1 projector on 2**n
    dimensions.
    """
    ray = sign_projector_ray(letters, signs)
    return np.outer(ray, ray.conj())


def sign_projector_ray(letters: Sequence[str], signs: Sequence[int]) -> np.ndarray:
    """Unit eigenray of :func:`sign_projector` (same letters/signs)."""
    if len(letters) != len(signs):
        raise ValueError(
            f"got {len(letters)} letters but {len(signs)} signs")
    if len(letters) == 0:
        raise ValueError("need at least one qubit")
    vecs = []
    for letter, sign in zip(letters, signs):
        if sign not in (+1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign!r}")
        if letter == "X":
            vecs.append(EIGVEC_X[sign])
        elif letter == "Y":
            vecs.append(EIGVEC_Y[sign])
        elif letter == "Z":
            vecs.append(EIGVEC_Z[sign])
        else:
            raise ValueError(f"unsupported letter {letter!r}")
    return kron_vectors(vecs)


def _stack(vectors: Sequence[np.ndarray]) -> np.ndarray:
    if len(vectors) == 0:
        raise ValueError("need at least one vector")
    mat = np.asarray(np.stack([np.asarray(v, dtype=complex).ravel() for v in vectors]))
    if mat.ndim != 2:
        raise ValueError("vectors must share a common dimension")
    return mat


def numeric_rank(vectors: Sequence[np.ndarray], tol: float = DEFAULT_RANK_TOL) -> int:
    """Rank of the span of ``vectors``: singular values above ``tol * s_max``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    mat = _stack(vectors)
    svals = np.linalg.svd(mat, compute_uv=False)
    if svals.size == 0 or svals[0] == 0.0:
        return 0
    return int(np.sum(svals > tol * svals[0]))


def nullspace(vectors: Sequence[np.ndarray], tol: float = DEFAULT_RANK_TOL) -> list[np.ndarray]:
    """Orthonormal basis of the joint kernel ``{x : <v_k|x> = 0 for all k}``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    mat = _stack(vectors).conj()
    _, svals, vh = np.linalg.svd(mat)
    dim = mat.shape[1]
    smax = svals[0] if svals.size else 0.0
    rank = int(np.sum(svals > tol * smax)) if smax > 0.0 else 0
    return [vh[k].conj() for k in range(rank, dim)]


def span_isometry(vectors: Sequence[np.ndarray], tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Matrix with orthonormal columns spanning ``span(vectors)``.

    Shape is ``(ambient_dim, rank)``; ``W.conj().T @ v`` compresses a vector in
    the span without changing inner products.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    mat = _stack(vectors).T  # columns are the vectors
    u, svals, _ = np.linalg.svd(mat, full_matrices=False)
    smax = svals[0] if svals.size else 0.0
    rank = int(np.sum(svals > tol * smax)) if smax > 0.0 else 0
    return u[:, :rank]


def fix_global_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate a vector so its largest-magnitude entry is real positive."""
    vec = np.asarray(vec, dtype=complex)
    idx = int(np.argmax(np.abs(vec)))
    pivot = vec[idx]
    if pivot == 0.0:
        return vec.copy()
    return vec * (abs(pivot) / pivot)
