"""Shared dense and sparse linear algebra kernels.

Sparse matrices are ``scipy.sparse.csr_array`` instances in canonical form
(sorted column indices, summed duplicates, no explicit zeros); this module
owns their construction so downstream modules never touch raw index arrays.
Dense factorizations and the symmetric eigensolver wrap LAPACK through
scipy. The generalized symmetric eigensolver handles positive
*semi*-definite right-hand sides by whitening on range(B), which the
spectral coarse space construction relies on.

Real and complex double precision are both supported; real inputs never
produce complex output.
"""

import warnings

import numpy as np
import scipy.io
import scipy.linalg
import scipy.sparse as sp

__all__ = [
    "SingularMatrixError",
    "EigenPairs",
    "Factorization",
    "csr_from_triplets",
    "compress",
    "spmv",
    "dense_lu_factor",
    "dense_cholesky_factor",
    "factor_solve",
    "sym_eig",
    "sym_gen_eig",
    "read_matrix_market",
    "write_matrix_market",
]


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when a factorization meets a pivot below the singularity tolerance."""


class EigenPairs:
    """Eigenvalues in ascending order with matching eigenvector columns.

    ``values[k]`` pairs with ``vectors[:, k]``. For generalized problems with
    a semidefinite right-hand side, ``null_basis`` holds an orthonormal basis
    of ker(B); those directions carry the conventional eigenvalue +inf and are
    excluded from ``values``.
    """

    def __init__(self, values, vectors, null_basis=None):
        self.values = np.asarray(values)
        self.vectors = np.asarray(vectors)
        self.null_basis = null_basis

    def __len__(self):
        return len(self.values)


class Factorization:
    """Opaque handle for a dense LU or Cholesky factorization."""

    def __init__(self, kind, data, n, dtype):
        self.kind = kind
        self._data = data
        self.n = n
        self.dtype = dtype

    def solve(self, b):
        return factor_solve(self, b)


def _require_finite(x, what):
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{what} contains NaN or Inf")


def _require_hermitian(A, what, tol=1e-12):
    gap = np.linalg.norm(A - A.conj().T, "fro")
    if gap > tol * max(np.linalg.norm(A, "fro"), 1e-300):
        raise ValueError(f"{what} is not Hermitian (asymmetry {gap:.3e})")


def csr_from_triplets(nrows, ncols, triplets):
    """Build a canonical CSR matrix from (row, col, value) triplets.

    Duplicate entries are summed, column indices are sorted within each row,
    and entries that cancel to exact zero are dropped.

    Parameters
    ----------
    nrows, ncols : int
        Matrix dimensions.
    triplets : iterable of (int, int, scalar)
        Entries; indices must lie in range.

    Returns
    -------
    scipy.sparse.csr_array
    """
    triplets = list(triplets)
    if triplets:
        rows = np.fromiter((t[0] for t in triplets), dtype=np.int64, count=len(triplets))
        cols = np.fromiter((t[1] for t in triplets), dtype=np.int64, count=len(triplets))
        vals = np.asarray([t[2] for t in triplets])
    else:
        rows = np.empty(0, dtype=np.int64)
        cols = np.empty(0, dtype=np.int64)
        vals = np.empty(0)
    if rows.size and (rows.min() < 0 or rows.max() >= nrows or cols.min() < 0 or cols.max() >= ncols):
        raise ValueError("triplet index out of range")
    _require_finite(vals, "triplet values")
    A = sp.coo_array((vals, (rows, cols)), shape=(nrows, ncols)).tocsr()
    return compress(A)


def compress(A):
    """Return ``A`` as canonical CSR: sorted indices, summed duplicates, no stored zeros."""
    A = sp.csr_array(A)
    A.sum_duplicates()
    A.eliminate_zeros()
    A.sort_indices()
    return A


def spmv(A, x):
    """Sparse matrix-vector product with a fixed (ascending column) summation order.

    Parameters
    ----------
    A : scipy.sparse matrix
    x : array of length A.shape[1]
    """
    x = np.asarray(x)
    if x.ndim != 1 or x.shape[0] != A.shape[1]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, x has length {x.shape}")
    _require_finite(x, "input vector")
    return A @ x


def dense_lu_factor(A):
    """LU-factorize a square dense matrix with partial pivoting.

    Raises
    ------
    SingularMatrixError
        If a pivot falls below 1e-14 times the Frobenius norm of ``A``.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("dense_lu_factor expects a square matrix")
    _require_finite(A, "matrix")
    with warnings.catch_warnings():
        # exact singularity is detected below and raised as SingularMatrixError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if A.shape[0] and pivots.min() <= 1e-14 * np.linalg.norm(A, "fro"):
        raise SingularMatrixError("singular pivot in LU factorization")
    return Factorization("lu", (lu, piv), A.shape[0], A.dtype)


def dense_cholesky_factor(A):
    """Cholesky-factorize a Hermitian positive definite dense matrix.

    Positive definiteness is certified by the positivity of the pivots; a
    failure raises :class:`SingularMatrixError`.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("dense_cholesky_factor expects a square matrix")
    _require_finite(A, "matrix")
    _require_hermitian(A, "matrix")
    try:
        c, lower = scipy.linalg.cho_factor(A, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"matrix is not positive definite: {exc}") from exc
    if A.shape[0] and np.abs(np.diag(c)).min() ** 2 <= 1e-14 * np.linalg.norm(A, "fro"):
        raise SingularMatrixError("singular pivot in Cholesky factorization")
    return Factorization("cholesky", (c, lower), A.shape[0], A.dtype)


def auto_factor(A):
    """Factorize a dense matrix, preferring Cholesky.

    Falls back to LU when the matrix is not Hermitian positive definite;
    a genuinely singular matrix still raises :class:`SingularMatrixError`.
    """
    try:
        return dense_cholesky_factor(A)
    except (ValueError, SingularMatrixError):
        return dense_lu_factor(A)


def factor_solve(F, b):
    """Solve ``A x = b`` given a :class:`Factorization` of ``A``."""
    b = np.asarray(b)
    if b.shape[0] != F.n:
        raise ValueError(f"right-hand side length {b.shape[0]} does not match order {F.n}")
    _require_finite(b, "right-hand side")
    if F.kind == "lu":
        return scipy.linalg.lu_solve(F._data, b, check_finite=False)
    return scipy.linalg.cho_solve(F._data, b, check_finite=False)


def sym_eig(A):
    """Full eigendecomposition of a Hermitian dense matrix.

    Returns
    -------
    EigenPairs
        Ascending real eigenvalues and orthonormal eigenvector columns.
    """
    A = np.asarray(A)
    _require_hermitian(A, "matrix")
    values, vectors = scipy.linalg.eigh((A + A.conj().T) / 2.0, check_finite=False)
    return EigenPairs(values, vectors)


def sym_gen_eig(A, B, null_tol=1e-10):
    """Solve the Hermitian pencil ``A v = lambda B v`` with B positive semidefinite.

    The pencil is restricted to range(B): eigendirections of B below
    ``null_tol`` (relative to its largest eigenvalue) are split off and
    returned as ``null_basis``; the remainder is whitened and solved as a
    standard Hermitian problem. Finite eigenvalues come back ascending with
    B-orthonormal eigenvectors.

    Raises
    ------
    ValueError
        If B has an eigenvalue below ``-null_tol * lambda_max(B)``.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("pencil matrices must be square and of equal shape")
    _require_hermitian(A, "left matrix")
    _require_hermitian(B, "right matrix")
    w, U = scipy.linalg.eigh((B + B.conj().T) / 2.0, check_finite=False)
    wmax = max(w.max(initial=0.0), 0.0)
    if wmax > 0 and w.min() < -null_tol * wmax:
        raise ValueError(f"right matrix is indefinite (eigenvalue {w.min():.3e})")
    keep = w > null_tol * wmax if wmax > 0 else np.zeros(len(w), dtype=bool)
    null_basis = U[:, ~keep]
    if not keep.any():
        n = A.shape[0]
        empty = np.empty((n, 0), dtype=A.dtype)
        return EigenPairs(np.empty(0), empty, null_basis)
    S = U[:, keep] / np.sqrt(w[keep])
    C = S.conj().T @ A @ S
    values, Y = scipy.linalg.eigh((C + C.conj().T) / 2.0, check_finite=False)
    return EigenPairs(values, S @ Y, null_basis)


def read_matrix_market(path):
    """Read a MatrixMarket coordinate file into canonical CSR form."""
    return compress(sp.csr_array(scipy.io.mmread(path)))


def write_matrix_market(path, A):
    """Write a sparse matrix as MatrixMarket coordinate data."""
    scipy.io.mmwrite(path, sp.coo_array(A))
