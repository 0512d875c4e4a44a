"""Symmetric sparse matrices and a preconditioned conjugate-gradient solver."""
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .exceptions import SolverError


class SparseSymMatrix:
    """Structurally symmetric matrix in compressed-row storage.

    Thin wrapper around :class:`scipy.sparse.csr_matrix`; the CSR arrays are
    exposed as ``indptr``, ``indices`` and ``data``.
    """

    def __init__(self, csr):
        csr = sp.csr_matrix(csr)
        if csr.shape[0] != csr.shape[1]:
            raise ValueError(f"matrix must be square, got {csr.shape}")
        csr.sort_indices()
        self.csr = csr

    @property
    def n(self):
        return self.csr.shape[0]

    @property
    def indptr(self):
        return self.csr.indptr

    @property
    def indices(self):
        return self.csr.indices

    @property
    def data(self):
        return self.csr.data

    @property
    def nnz(self):
        return self.csr.nnz

    def __matmul__(self, x):
        return self.csr @ x

    def matvec(self, x):
        return self.csr @ x

    def diagonal(self):
        return self.csr.diagonal()

    def toarray(self):
        return self.csr.toarray()

    def restrict(self, rows, cols=None):
        """Submatrix ``A[rows][:, cols]`` (``cols`` defaults to ``rows``)."""
        cols = rows if cols is None else cols
        sub = self.csr[rows][:, cols]
        if cols is rows:
            return SparseSymMatrix(sub)
        return sub.tocsr()

    def asymmetry(self):
        """Largest absolute entry of ``A - A^T``."""
        d = self.csr - self.csr.T
        return float(abs(d).max()) if d.nnz else 0.0

    def __add__(self, other):
        return SparseSymMatrix(self.csr + other.csr)

    def __mul__(self, scalar):
        return SparseSymMatrix(self.csr * scalar)

    __rmul__ = __mul__


def assemble_from_triplets(n, rows, cols, values):
    """Build an ``n x n`` matrix from COO triplets, summing duplicates."""
    rows = np.asarray(rows, dtype=np.int64).ravel()
    cols = np.asarray(cols, dtype=np.int64).ravel()
    values = np.asarray(values, dtype=float).ravel()
    if not (rows.shape == cols.shape == values.shape):
        raise ValueError("rows, cols and values must have equal length")
    if rows.size and (rows.min() < 0 or cols.min() < 0 or rows.max() >= n or cols.max() >= n):
        raise IndexError(f"triplet index out of range for n={n}")
    coo = sp.coo_matrix((values, (rows, cols)), shape=(n, n))
    return SparseSymMatrix(coo.tocsr())


@dataclass
class CGInfo:
    iterations: int
    residual: float
    history: list = field(default_factory=list)


def cg_solve(A, b, tol=1e-10, maxit=None, precond="jacobi", x0=None, callback=None):
    """Solve ``A x = b`` for SPD ``A`` by preconditioned conjugate gradients.

    Stops when ``||b - A x||_2 <= tol * ||b||_2`` for the true (recomputed)
    residual. ``precond`` is ``"jacobi"``, ``"none"``, or any callable
    ``z = M(r)`` approximating ``A^{-1} r``. ``callback(x)`` is invoked after
    every iteration.

    Returns ``(x, CGInfo)``; raises :class:`SolverError` after ``maxit``
    iterations (default ``10 * n``).
    """
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie in (0, 1)")
    op = A.csr if isinstance(A, SparseSymMatrix) else A
    b = np.asarray(b, dtype=float)
    n = b.shape[0]
    maxit = 10 * n if maxit is None else int(maxit)

    if callable(precond):
        apply_m = precond
    elif precond == "jacobi":
        d = op.diagonal()
        if np.any(d <= 0):
            raise SolverError("Jacobi preconditioner needs a positive diagonal", np.inf, 0)
        inv_d = 1.0 / d
        apply_m = lambda r: inv_d * r  # noqa: E731
    elif precond == "none":
        apply_m = lambda r: r  # noqa: E731
    else:
        raise ValueError(f"unknown preconditioner {precond!r}")

    bnorm = np.linalg.norm(b)
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    if bnorm == 0.0:
        return np.zeros(n), CGInfo(0, 0.0, [0.0])
    target = tol * bnorm

    r = b - op @ x
    rnorm = np.linalg.norm(r)
    history = [rnorm / bnorm]
    it = 0
    while rnorm > target and it < maxit:
        # (re)start from the true residual
        z = apply_m(r)
        p = z.copy()
        rz = r @ z
        while it < maxit:
            Ap = op @ p
            pAp = p @ Ap
            if pAp <= 0.0:
                raise SolverError("matrix is not positive definite", rnorm / bnorm, it)
            alpha = rz / pAp
            x += alpha * p
            r -= alpha * Ap
            it += 1
            rnorm = np.linalg.norm(r)
            history.append(rnorm / bnorm)
            if callback is not None:
                callback(x)
            if rnorm <= target:
                break
            z = apply_m(r)
            rz_new = r @ z
            p *= rz_new / rz
            p += z
            rz = rz_new
        r = b - op @ x
        rnorm = np.linalg.norm(r)
        history[-1] = rnorm / bnorm

    if rnorm > target:
        raise SolverError(
            f"CG did not converge in {maxit} iterations (residual {rnorm / bnorm:.3e})",
            rnorm / bnorm,
            it,
        )
    return x, CGInfo(it, rnorm / bnorm, history)
