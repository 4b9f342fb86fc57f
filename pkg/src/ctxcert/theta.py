"""Lovasz number by a primal-dual interior-point method.

Solves the standard program

    maximize  <J, X>   subject to  Tr X = 1,  X_ij = 0 for every edge,  X >= 0

with its dual ``minimize y0 : y0 I + sum_e y_e (E_ij + E_ji) - J >= 0``.
``X = I/n`` and ``y0 = n + 1`` give strictly feasible starting points on both
sides, so the HKM predictor-corrector iteration keeps both residuals at
rounding level and the duality gap is exactly ``<X, Z>``.

Large vertex-transitive instances can hand in a :class:`SymmetryReduction`:
the iterates are then restricted to the invariant subspace where they
block-diagonalize, edge constraints collapse to one per orbit, and the same
iteration runs on the small blocks.  The returned certificate is always
expressed (and re-verified) in the full space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg as sla

from .exclusivity import ExclusivityGraph

if TYPE_CHECKING:  # pragma: no cover
    from .mabk import ProjectorFamily


class ThetaConvergenceError(RuntimeError):
    """Raised when the interior-point iteration stalls above tolerance."""

    def __init__(self, message: str, primal: float, dual: float):
        super().__init__(message)
        self.primal = primal
        self.dual = dual


@dataclass
class SymmetryReduction:
    """Orthogonal change of basis under which invariant iterates are
    block-diagonal, plus the edge-orbit partition of the constraint set."""

    basis: np.ndarray                  # (n, n), rows grouped by block
    block_sizes: list[int]
    edge_orbits: list[list[tuple[int, int]]]


@dataclass
class ThetaCertificate:
    """Primal/dual bracket for the Lovasz number.

    ``primal_psd`` is feasible for the primal (checked entries on edges, unit
    trace, PSD within 1e-9), so ``primal_value`` is a valid lower bound;
    ``dual_bound`` comes from a feasible dual point and upper-bounds the
    optimum.  ``theta`` is the bracket midpoint.
    """

    theta: float
    primal_value: float
    dual_bound: float
    gap: float
    primal_psd: np.ndarray
    iterations: int
    converged: bool
    edge_violation: float = 0.0
    min_eigenvalue: float = 0.0


def _sym(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.T)


class _Blocks:
    """Block-diagonal symmetric matrices as lists of dense arrays."""

    @staticmethod
    def inner(a: list[np.ndarray], b: list[np.ndarray]) -> float:
        return float(sum(np.sum(x * y) for x, y in zip(a, b)))

    @staticmethod
    def add(a, b, beta=1.0):
        return [x + beta * y for x, y in zip(a, b)]

    @staticmethod
    def sym(a):
        return [_sym(x) for x in a]


def _min_gen_eig(d_blocks: list[np.ndarray], x_blocks: list[np.ndarray]) -> float:
    """Smallest generalized eigenvalue of dX relative to X (X positive)."""
    gmin = np.inf
    for dx, x in zip(d_blocks, x_blocks):
        lo = np.linalg.cholesky(_sym(x))
        half = sla.solve_triangular(lo, _sym(dx), lower=True,
                                    check_finite=False)
        whitened = sla.solve_triangular(lo, half.T, lower=True,
                                        check_finite=False)
        gmin = min(gmin, float(np.linalg.eigvalsh(_sym(whitened))[0]))
    return gmin


def _max_step(d_blocks, x_blocks, tau: float) -> float:
    gmin = _min_gen_eig(d_blocks, x_blocks)
    if gmin >= 0.0:
        return 1.0
    return min(1.0, -tau / gmin)


class _PairConstraints:
    """Trace constraint plus one constraint per edge, pairs kept as arrays."""

    def __init__(self, n: int, edges: list[tuple[int, int]]):
        self.n = n
        self.I = np.array([e[0] for e in edges], dtype=np.intp)
        self.J = np.array([e[1] for e in edges], dtype=np.intp)
        self.m = len(edges) + 1

    def apply(self, v: list[np.ndarray]) -> np.ndarray:
        mat = v[0]
        out = np.empty(self.m)
        out[0] = np.trace(mat)
        out[1:] = mat[self.I, self.J] + mat[self.J, self.I]
        return out

    def adjoint(self, y: np.ndarray) -> list[np.ndarray]:
        mat = np.zeros((self.n, self.n))
        mat[np.diag_indices(self.n)] = y[0]
        np.add.at(mat, (self.I, self.J), y[1:])
        np.add.at(mat, (self.J, self.I), y[1:])
        return [mat]

    def schur(self, x: list[np.ndarray], zinv: list[np.ndarray]) -> np.ndarray:
        X, Zi = x[0], zinv[0]
        I, J = self.I, self.J
        m = self.m
        M = np.empty((m, m))
        XZi = X @ Zi
        M[0, 0] = np.trace(XZi)
        # row 0: Tr(X A_l Zinv); column 0: Tr(A_k X Zinv)
        ZiX = Zi @ X
        M[0, 1:] = ZiX[J, I] + ZiX[I, J]
        M[1:, 0] = XZi[J, I] + XZi[I, J]
        # edge-edge block, four gather products
        M[1:, 1:] = (
            X[np.ix_(J, I)] * Zi[np.ix_(J, I)].T
            + X[np.ix_(J, J)] * Zi[np.ix_(I, I)].T
            + X[np.ix_(I, I)] * Zi[np.ix_(J, J)].T
            + X[np.ix_(I, J)] * Zi[np.ix_(I, J)].T
        )
        return M


class _DenseConstraints:
    """Constraints given as dense per-block stacks (index 0 is the trace)."""

    def __init__(self, stacks: list[np.ndarray]):
        # stacks[b] has shape (m, bs, bs)
        self.stacks = stacks
        self.m = stacks[0].shape[0]

    def apply(self, v: list[np.ndarray]) -> np.ndarray:
        out = np.zeros(self.m)
        for stack, blk in zip(self.stacks, v):
            out += np.tensordot(stack, blk, axes=([1, 2], [0, 1]))
        return out

    def adjoint(self, y: np.ndarray) -> list[np.ndarray]:
        return [np.tensordot(y, stack, axes=1) for stack in self.stacks]

    def schur(self, x: list[np.ndarray], zinv: list[np.ndarray]) -> np.ndarray:
        M = np.zeros((self.m, self.m))
        for stack, X, Zi in zip(self.stacks, x, zinv):
            t = np.matmul(stack, Zi)            # (m, bs, bs)
            v = np.matmul(X, t)                 # X A_l Zinv per l
            flat_a = stack.reshape(self.m, -1)
            flat_v = v.reshape(self.m, -1)
            M += flat_a @ flat_v.T
        return M


def _ipm(c_blocks, constraints, b, n_total, tol, max_iter):
    """Feasible-start HKM predictor-corrector on block matrices."""
    nu = n_total
    x = [np.eye(bs) / nu for bs in (blk.shape[0] for blk in c_blocks)]
    y = np.zeros(constraints.m)
    y[0] = nu + 1.0
    z = _Blocks.add(constraints.adjoint(y), c_blocks, beta=-1.0)

    best_gap = np.inf
    stall = 0
    it = 0
    for it in range(1, max_iter + 1):
        primal = _Blocks.inner(c_blocks, x)
        dual = float(b @ y)
        gap = _Blocks.inner(x, z)
        if gap <= tol:
            break
        if gap > best_gap * 0.999:
            stall += 1
            if stall >= 8:
                break
        else:
            stall = 0
            best_gap = gap

        mu = gap / nu
        zinv = []
        for blk in z:
            cho = sla.cho_factor(_sym(blk), check_finite=False)
            zinv.append(_sym(sla.cho_solve(cho, np.eye(blk.shape[0]),
                                           check_finite=False)))
        rp = b - constraints.apply(x)
        rd = _Blocks.add(_Blocks.add(c_blocks, z), constraints.adjoint(y), beta=-1.0)

        M = constraints.schur(x, zinv)
        xrz = [X @ R @ Zi for X, R, Zi in zip(x, rd, zinv)]

        def solve_direction(sigma_mu, corr):
            rhs_mat = []
            for k in range(len(x)):
                mat = sigma_mu * zinv[k] - x[k] + xrz[k]
                if corr is not None:
                    mat = mat - corr[k]
                rhs_mat.append(mat)
            rhs = constraints.apply(rhs_mat) - rp
            try:
                dy = np.linalg.solve(M, rhs)
            except np.linalg.LinAlgError:
                reg = 1e-13 * (abs(np.trace(M)) + 1.0)
                dy = np.linalg.solve(M + reg * np.eye(constraints.m), rhs)
            dz = _Blocks.add(constraints.adjoint(dy), rd, beta=-1.0)
            dx = []
            for k in range(len(x)):
                mat = sigma_mu * zinv[k] - x[k] - x[k] @ dz[k] @ zinv[k]
                if corr is not None:
                    mat = mat - corr[k]
                dx.append(_sym(mat))
            return dx, dy, dz

        tau = 0.98 if gap > 1e-4 else 0.999
        dxa, _, dza = solve_direction(0.0, None)
        ap = _max_step(dxa, x, tau)
        ad = _max_step(dza, z, tau)
        mu_aff = _Blocks.inner(
            _Blocks.add(x, dxa, beta=ap), _Blocks.add(z, dza, beta=ad)) / nu
        sigma = min(1.0, max((mu_aff / mu) ** 3, 1e-8))

        corr = [dX @ dZ @ Zi for dX, dZ, Zi in zip(dxa, dza, zinv)]
        dx, dy, dz = solve_direction(sigma * mu, corr)
        ap = _max_step(dx, x, tau)
        ad = _max_step(dz, z, tau)
        x = _Blocks.sym(_Blocks.add(x, dx, beta=ap))
        y = y + ad * dy
        z = _Blocks.sym(_Blocks.add(z, dz, beta=ad))

    return x, y, z, it


def _certify(g, x_full, y, constraints_full_adjoint, tol, iterations):
    """Turn raw iterates into a verified primal/dual bracket."""
    n = g.n_vertices
    # Clean the primal: exact zeros on edges, exact unit trace, symmetric.
    X = _sym(x_full)
    for i, j in g.edges:
        X[i, j] = 0.0
        X[j, i] = 0.0
    X = X / np.trace(X)
    eigmin = float(sla.eigh(X, eigvals_only=True, subset_by_index=[0, 0])[0])
    if eigmin < -1e-9:
        # Fall back to a convex mix with I/n to restore positivity.
        lam = (-eigmin) / (1.0 / n - eigmin)
        X = (1 - lam) * X + lam * np.eye(n) / n
        eigmin = float(sla.eigh(X, eigvals_only=True, subset_by_index=[0, 0])[0])
    primal = float(np.sum(X))

    # Valid dual bound: y defines S = A*(y) - J; shifting y0 by the negative
    # part of S's spectrum restores feasibility and keeps a true upper bound.
    s_mat = constraints_full_adjoint(y) - np.ones((n, n))
    s_min = float(sla.eigh(_sym(s_mat), eigvals_only=True,
                           subset_by_index=[0, 0])[0])
    dual = float(y[0] + max(0.0, -s_min))

    edge_violation = max((abs(X[i, j]) for i, j in g.edges), default=0.0)
    gap = dual - primal
    return ThetaCertificate(
        theta=0.5 * (primal + dual),
        primal_value=primal,
        dual_bound=dual,
        gap=gap,
        primal_psd=X,
        iterations=iterations,
        converged=bool(gap <= tol and gap >= -1e-7),
        edge_violation=float(edge_violation),
        min_eigenvalue=eigmin,
    )


def lovasz_theta(
    g: ExclusivityGraph,
    tol: float = 1e-8,
    max_iter: int = 200,
    reduction: SymmetryReduction | None = None,
) -> ThetaCertificate:
    """Certified Lovasz number of ``g`` with duality gap below ``tol``.

    Raises :class:`ThetaConvergenceError` when the iteration stalls before
    reaching the requested gap; the exception carries the best bounds.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = g.n_vertices
    if n == 0:
        raise ValueError("empty vertex set")
    if n > 512:
        raise ValueError("vertex count exceeds the 512 solver cap")

    inner_tol = 0.5 * tol
    if reduction is None:
        if g.n_edges + 1 > 6000:
            raise ValueError(
                f"{g.n_edges} edge constraints exceed the dense solver "
                "budget; supply a symmetry reduction")
        constraints = _PairConstraints(n, list(g.edges))
        c_blocks = [np.ones((n, n))]
        b = np.zeros(constraints.m)
        b[0] = 1.0
        x, y, _, iters = _ipm(c_blocks, constraints, b, n, inner_tol, max_iter)
        cert = _certify(g, x[0], y, lambda yy: constraints.adjoint(yy)[0],
                        tol, iters)
    else:
        U = reduction.basis
        sizes = reduction.block_sizes
        offs = np.cumsum([0] + sizes)
        orbit_sets = [set(map(tuple, orb)) for orb in reduction.edge_orbits]
        covered = set().union(*orbit_sets) if orbit_sets else set()
        if covered != set(g.edges):
            raise ValueError("edge orbits do not partition the edge set")

        stacks = _orbit_constraint_stacks(U, sizes, offs, reduction.edge_orbits)
        constraints = _DenseConstraints(stacks)
        c_full = np.ones((n, n))
        c_hat = U @ c_full @ U.T
        c_blocks = [
            _sym(c_hat[offs[k]:offs[k + 1], offs[k]:offs[k + 1]])
            for k in range(len(sizes))
        ]
        _assert_block_diagonal(c_hat, offs, "objective")
        b = np.zeros(constraints.m)
        b[0] = 1.0
        x, y, _, iters = _ipm(c_blocks, constraints, b, n, inner_tol, max_iter)

        x_hat = np.zeros((n, n))
        for k in range(len(sizes)):
            x_hat[offs[k]:offs[k + 1], offs[k]:offs[k + 1]] = x[k]
        x_full = U.T @ x_hat @ U

        def adj_full(yy: np.ndarray) -> np.ndarray:
            mat = yy[0] * np.eye(n)
            for val, orbit in zip(yy[1:], reduction.edge_orbits):
                for i, j in orbit:
                    mat[i, j] += val
                    mat[j, i] += val
            return mat

        cert = _certify(g, x_full, y, adj_full, tol, iters)

    if not cert.converged:
        raise ThetaConvergenceError(
            f"duality gap {cert.gap:.3e} above tolerance {tol:.3e} "
            f"after {cert.iterations} iterations",
            primal=cert.primal_value,
            dual=cert.dual_bound,
        )
    return cert


def _orbit_constraint_stacks(U, sizes, offs, edge_orbits):
    """Transform orbit-summed edge constraints into per-block stacks."""
    n = U.shape[0]
    m = len(edge_orbits) + 1
    stacks = [np.zeros((m, bs, bs)) for bs in sizes]
    for k, bs in enumerate(sizes):
        stacks[k][0] = np.eye(bs)
    for idx, orbit in enumerate(edge_orbits, start=1):
        us = np.array([e[0] for e in orbit], dtype=np.intp)
        vs = np.array([e[1] for e in orbit], dtype=np.intp)
        g1 = U[:, us] @ U[:, vs].T
        a_hat = g1 + g1.T
        _assert_block_diagonal(a_hat, offs, f"edge orbit {idx - 1}")
        for k in range(len(sizes)):
            stacks[k][idx] = _sym(a_hat[offs[k]:offs[k + 1], offs[k]:offs[k + 1]])
    return stacks


def _assert_block_diagonal(mat: np.ndarray, offs: np.ndarray, what: str,
                           tol: float = 1e-9) -> None:
    leak = mat.copy()
    for k in range(len(offs) - 1):
        leak[offs[k]:offs[k + 1], offs[k]:offs[k + 1]] = 0.0
    worst = float(np.max(np.abs(leak)))
    if worst > tol:
        raise ValueError(
            f"{what} is not block-diagonal in the symmetry basis "
            f"(leakage {worst:.2e}); the reduction is invalid for this graph")


def _even_weight_coords(bits: tuple[int, ...]) -> int:
    """Coordinates of an even-weight 0/1 vector in the chain basis
    ``b_i = e_i + e_{i+1}``, packed into an integer."""
    acc = 0
    code = 0
    for i, bit in enumerate(bits[:-1]):
        acc ^= bit
        code |= acc << i
    if (acc ^ bits[-1]) != 0:
        raise ValueError("pattern difference has odd weight")
    return code


def parity_class_reduction(family: "ProjectorFamily",
                           g: ExclusivityGraph) -> SymmetryReduction:
    """Symmetry reduction for event families whose contexts are parity
    classes of sign patterns over fixed letters.

    Simultaneously flipping the signs on an even-weight qubit subset is
    induced by a local unitary, so it permutes every context by the same
    pattern translation.  In the Fourier basis of that translation group all
    invariant matrices block-diagonalize into ``2**(n-1)`` blocks, one per
    character, each of size equal to the number of contexts.
    """
    if family.meta is None:
        raise ValueError("family carries no letter metadata")
    n_qubits = len(family.meta[0][0])
    n_ctx = len(family.contexts)
    class_size = 2 ** (n_qubits - 1)
    for ctx in family.contexts:
        if len(ctx) != class_size:
            raise ValueError("contexts are not full parity classes")

    # Per-vertex (context, translation-code) coordinates.
    ctx_of = np.empty(family.n_events, dtype=int)
    code_of = np.empty(family.n_events, dtype=int)
    pos = np.empty((n_ctx, class_size), dtype=int)
    for c, ctx in enumerate(family.contexts):
        base = family.meta[ctx[0]][1]
        for k in ctx:
            pattern = family.meta[k][1]
            diff = tuple(a ^ b for a, b in zip(pattern, base))
            code = _even_weight_coords(diff)
            ctx_of[k] = c
            code_of[k] = code
            pos[c, code] = k

    scale = 1.0 / np.sqrt(class_size)
    basis = np.zeros((family.n_events, family.n_events))
    row = 0
    for w in range(class_size):
        for c in range(n_ctx):
            for code in range(class_size):
                sign = 1 - 2 * (bin(w & code).count("1") & 1)
                basis[row, pos[c, code]] = sign * scale
            row += 1

    orbits: dict[tuple[int, int, int], list[tuple[int, int]]] = {}
    for u, v in g.edges:
        cu, cv = int(ctx_of[u]), int(ctx_of[v])
        key = (min(cu, cv), max(cu, cv), int(code_of[u] ^ code_of[v]))
        orbits.setdefault(key, []).append((u, v))

    return SymmetryReduction(
        basis=basis,
        block_sizes=[n_ctx] * class_size,
        edge_orbits=[orbits[k] for k in sorted(orbits)],
    )
