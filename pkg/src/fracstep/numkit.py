"""Minimal dense/sparse linear algebra used by the whole solver stack.

Matrices are plain numpy arrays; sparse matrices use compressed-row storage.
Everything here is deliberately dependency-free (numpy only) and sized for
desk-scale problems: CG for the per-step solves, dense Cholesky for small
systems, and a Jacobi eigensolver for the generalized symmetric problem that
backs the discrete modal reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class CgError(RuntimeError):
    """Conjugate gradient did not reach the requested tolerance.

    Carries the final residual norm and the iteration count.
    """

    def __init__(self, message, residual, iterations):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class NotPositiveDefiniteError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """Sparse matrix in compressed-row layout.

    ``row_offsets`` has length ``n_rows + 1`` and is nondecreasing;
    ``col_indices`` are strictly increasing within each row.
    """

    n_rows: int
    n_cols: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        # per-entry row index, cached so matvec stays allocation-light
        rows = np.repeat(
            np.arange(self.n_rows), np.diff(self.row_offsets)
        ).astype(np.intp)
        object.__setattr__(self, "_entry_rows", rows)

    @classmethod
    def from_coo(cls, n_rows, n_cols, rows, cols, vals):
        """Build CSR from coordinate triplets; duplicate entries are summed.

        Explicit zeros are kept, so matrices assembled from the same
        connectivity share a sparsity pattern even if entries cancel.
        """
        rows = np.asarray(rows, dtype=np.intp)
        cols = np.asarray(cols, dtype=np.intp)
        vals = np.asarray(vals, dtype=float)
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        keep = np.ones(len(rows), dtype=bool)
        keep[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
        idx = np.cumsum(keep) - 1
        merged = np.zeros(keep.sum())
        np.add.at(merged, idx, vals)
        rows, cols = rows[keep], cols[keep]
        offsets = np.zeros(n_rows + 1, dtype=np.intp)
        np.add.at(offsets, rows + 1, 1)
        offsets = np.cumsum(offsets)
        return cls(n_rows, n_cols, offsets, cols, merged)

    @property
    def nnz(self):
        return len(self.values)

    def matvec(self, x):
        x = np.asarray(x)
        prod = self.values * x[self.col_indices]
        return np.bincount(self._entry_rows, weights=prod, minlength=self.n_rows)

    def diagonal(self):
        d = np.zeros(self.n_rows)
        on_diag = self._entry_rows == self.col_indices
        d[self._entry_rows[on_diag]] = self.values[on_diag]
        return d

    def to_dense(self):
        a = np.zeros((self.n_rows, self.n_cols))
        a[self._entry_rows, self.col_indices] = self.values
        return a

    def scaled_add(self, coeff, other, other_coeff):
        """Return coeff*self + other_coeff*other; patterns must match."""
        if not (
            np.array_equal(self.row_offsets, other.row_offsets)
            and np.array_equal(self.col_indices, other.col_indices)
        ):
            raise ValueError("sparsity patterns differ")
        return SparseMatrix(
            self.n_rows,
            self.n_cols,
            self.row_offsets,
            self.col_indices,
            coeff * self.values + other_coeff * other.values,
        )

    def check(self):
        assert len(self.row_offsets) == self.n_rows + 1
        assert np.all(np.diff(self.row_offsets) >= 0)
        assert self.row_offsets[0] == 0 and self.row_offsets[-1] == self.nnz
        assert np.all(self.col_indices >= 0) and np.all(self.col_indices < self.n_cols)
        for i in range(self.n_rows):
            cols = self.col_indices[self.row_offsets[i] : self.row_offsets[i + 1]]
            assert np.all(np.diff(cols) > 0), f"row {i} columns not increasing"


def cg_solve(A, b, rel_tol=1e-12, max_iter=None, x0=None, stats=None):
    """Jacobi-preconditioned conjugate gradients for SPD systems.

    Terminates when the true residual satisfies ||Ax - b|| <= rel_tol*||b||;
    raises :class:`CgError` (with the final residual attached) otherwise.
    Pass a dict as ``stats`` to receive the iteration count and final
    residual of the solve.
    """
    b = np.asarray(b, dtype=float)
    n = A.n_rows
    if max_iter is None:
        max_iter = 10 * n
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        if stats is not None:
            stats["iterations"] = 0
            stats["residual"] = 0.0
        return np.zeros(n)
    target = rel_tol * bnorm

    inv_diag = 1.0 / A.diagonal()
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    r = b - A.matvec(x)
    z = inv_diag * r
    p = z.copy()
    rz = r @ z
    res = np.linalg.norm(r)
    it = 0
    while it < max_iter:
        if res <= target:
            # recurrence residual can drift; confirm with the true residual
            res = np.linalg.norm(b - A.matvec(x))
            if res <= target:
                if stats is not None:
                    stats["iterations"] = it
                    stats["residual"] = float(res)
                return x
        Ap = A.matvec(p)
        pAp = p @ Ap
        if pAp <= 0.0:
            raise CgError("matrix is not positive definite", res, it)
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        z = inv_diag * r
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
        res = np.linalg.norm(r)
        it += 1
    res = np.linalg.norm(b - A.matvec(x))
    if res <= target:
        if stats is not None:
            stats["iterations"] = it
            stats["residual"] = float(res)
        return x
    raise CgError(
        f"CG stalled at residual {res:.3e} after {it} iterations "
        f"(target {target:.3e})",
        res,
        it,
    )


def cholesky_factor(A):
    """Lower Cholesky factor of a dense symmetric positive definite matrix."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    L = np.zeros_like(A)
    for j in range(n):
        d = A[j, j] - L[j, :j] @ L[j, :j]
        if d <= 0.0 or not np.isfinite(d):
            raise NotPositiveDefiniteError("not positive definite")
        L[j, j] = np.sqrt(d)
        if j + 1 < n:
            L[j + 1 :, j] = (A[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return L


def solve_lower(L, B):
    """Forward substitution; B may be a vector or a matrix of columns."""
    B = np.asarray(B, dtype=float)
    X = np.array(B, dtype=float)
    n = L.shape[0]
    for i in range(n):
        if i:
            X[i] -= L[i, :i] @ X[:i]
        X[i] /= L[i, i]
    return X


def solve_upper(U, B):
    """Backward substitution with an upper triangular matrix."""
    B = np.asarray(B, dtype=float)
    X = np.array(B, dtype=float)
    n = U.shape[0]
    for i in range(n - 1, -1, -1):
        if i + 1 < n:
            X[i] -= U[i, i + 1 :] @ X[i + 1 :]
        X[i] /= U[i, i]
    return X


def cholesky_solve(A, b):
    """Solve A x = b for dense SPD A by Cholesky factorization."""
    L = cholesky_factor(A)
    y = solve_lower(L, b)
    return solve_upper(L.T, y)


def _round_robin_rounds(n):
    """Pair orderings of the circle method: n-1 rounds of disjoint pairs
    covering every index pair exactly once per sweep."""
    m = n + (n % 2)
    arr = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = arr[i], arr[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps), np.array(qs)))
        arr = [arr[0]] + [arr[-1]] + arr[1:-1]
    return rounds


def _jacobi_eigh(C, off_tol=1e-12, max_sweeps=60):
    """Cyclic Jacobi rotations on a dense symmetric matrix.

    Uses the round-robin ordering so every round applies a set of disjoint
    rotations in whole-array operations. Sweeps (n-1 rounds each, covering
    all pairs) continue until the off-diagonal Frobenius norm drops below
    ``off_tol`` times the full Frobenius norm.
    """
    A = np.array(C, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    norm = np.linalg.norm(A)
    if norm == 0.0 or n == 1:
        return np.diag(A).copy(), V
    rounds = _round_robin_rounds(n)
    # rotations with pivots below this cannot push the off-norm back above
    # the convergence target, so they are safe to skip
    skip = off_tol * norm / (10.0 * n)
    for _ in range(max_sweeps):
        off2 = np.linalg.norm(A) ** 2 - np.sum(np.diag(A) ** 2)
        if np.sqrt(max(off2, 0.0)) <= off_tol * norm:
            break
        for ps, qs in rounds:
            apq = A[ps, qs]
            act = np.abs(apq) > skip
            if not np.any(act):
                continue
            p = ps[act]
            q = qs[act]
            apq = apq[act]
            theta = 0.5 * (A[q, q] - A[p, p]) / apq
            t = np.sign(theta) / (np.abs(theta) + np.hypot(1.0, theta))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # disjoint pairs: column then row updates are exact in bulk
            Ap = A[:, p].copy()
            Aq = A[:, q].copy()
            A[:, p] = c * Ap - s * Aq
            A[:, q] = s * Ap + c * Aq
            Rp = A[p, :].copy()
            Rq = A[q, :].copy()
            A[p, :] = c[:, None] * Rp - s[:, None] * Rq
            A[q, :] = s[:, None] * Rp + c[:, None] * Rq
            Vp = V[:, p].copy()
            Vq = V[:, q].copy()
            V[:, p] = c * Vp - s * Vq
            V[:, q] = s * Vp + c * Vq
    return np.diag(A).copy(), V


def gen_sym_eig(S, M):
    """Solve S phi = lambda M phi for symmetric S and SPD M.

    Reduces to a standard symmetric problem through the Cholesky factor of M,
    diagonalizes with cyclic Jacobi rotations, and returns eigenvalues in
    ascending order together with M-orthonormal eigenvector columns.
    """
    S = np.asarray(S, dtype=float)
    M = np.asarray(M, dtype=float)
    if S.shape != M.shape or S.shape[0] != S.shape[1]:
        raise ValueError("matrices must be square and of equal size")
    if not np.allclose(S, S.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(S).max())):
        raise ValueError("S is not symmetric")
    try:
        L = cholesky_factor(M)
    except NotPositiveDefiniteError:
        raise NotPositiveDefiniteError("mass matrix not PD") from None
    Y = solve_lower(L, S)
    C = solve_lower(L, Y.T)
    C = 0.5 * (C + C.T)
    w, Q = _jacobi_eigh(C)
    Phi = solve_upper(L.T, Q)
    order = np.argsort(w)
    return w[order], Phi[:, order]
