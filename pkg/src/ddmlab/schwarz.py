"""One-level overlapping Schwarz preconditioners.

Variants share the same additive skeleton: restrict the residual to each
overlapping subdomain, solve a local problem there, and scatter the
result back, optionally damping through the partition-of-unity weights.

* ``asm``    sum_i R_i^T B_i^(-1) R_i            (symmetric, ignores weights)
* ``ras``    sum_i R_i^T D_i B_i^(-1) R_i        (restricted)
* ``oras``   same formula as ras with Robin local blocks
* ``soras``  sum_i R_i^T D_i B_i^(-1) D_i R_i    (symmetrized, Robin blocks)
* ``none``   identity

Local blocks B_i are either principal submatrices of A (Dirichlet kind)
or carry an extra Robin diagonal term on the artificial interface.
"""

import numpy as np

from . import discretize, linalg
from .decompose import _symmetric_adjacency
from .krylov import SolveReport, as_operator, as_preconditioner

_VARIANTS = ("asm", "ras", "oras", "soras", "none")


def local_matrices(A, decomposition, kind="dirichlet", p=None, h=None,
                   dim=None):
    """Dense local subdomain blocks of ``A``.

    With ``kind="dirichlet"`` each block is the principal submatrix of A
    on the subdomain's dof set. With ``kind="robin"`` a diagonal term
    ``p * h**(dim - 2)`` is added at the artificial-interface dofs, the
    local dofs whose matrix row couples to a dof outside the subdomain;
    ``p`` defaults to ``1/h`` and may be a scalar or a per-dof array
    (complex values are allowed).
    """
    if kind not in ("dirichlet", "robin"):
        raise ValueError(f"unknown local operator kind {kind!r}")
    n = A.shape[0]
    if kind == "robin":
        if h is None or dim is None:
            raise ValueError("robin local operators need the mesh width h and dim")
        if p is None:
            p = 1.0 / h
        p_dof = np.broadcast_to(np.asarray(p), (n,))
        scale = float(h) ** (dim - 2)
        graph = _symmetric_adjacency(A)

    blocks = []
    for s in decomposition.sets:
        B = A[np.ix_(s, s)].toarray()
        if kind == "robin":
            outside = np.ones(n)
            outside[s] = 0.0
            on_interface = (graph[s] @ outside) > 0
            shift = np.where(on_interface, p_dof[s] * scale, 0.0)
            B = B.astype(np.result_type(B.dtype, shift.dtype))
            B[np.diag_indices_from(B)] += shift
        blocks.append(B)
    return blocks


def build_local_operators(A, decomposition, kind="dirichlet", p=None,
                          h=None, dim=None):
    """Factorize the local subdomain blocks (see :func:`local_matrices`).

    Each block is factorized by Cholesky when it is Hermitian positive
    definite and by LU otherwise.
    """
    return [
        linalg.auto_factor(B)
        for B in local_matrices(A, decomposition, kind=kind, p=p, h=h, dim=dim)
    ]


class OneLevelPreconditioner:
    """Additive Schwarz preconditioner assembled from local factorizations."""

    def __init__(self, variant, decomposition, operators):
        if variant not in _VARIANTS:
            raise ValueError(f"unknown Schwarz variant {variant!r}")
        self.variant = variant
        self.decomposition = decomposition
        self.operators = operators
        self.n = decomposition.n_dofs
        self.applies = 0
        dtypes = [op.dtype for op in operators] or [np.float64]
        self.dtype = np.result_type(*dtypes)

    def apply(self, r):
        """Apply the preconditioner to a residual vector."""
        r = np.asarray(r)
        if r.shape != (self.n,):
            raise ValueError(f"expected a vector of length {self.n}, got {r.shape}")
        self.applies += 1
        if self.variant == "none":
            return r.copy()
        dec = self.decomposition
        out = np.zeros(self.n, dtype=np.result_type(self.dtype, r.dtype))
        for i, s in enumerate(dec.sets):
            loc = r[s]
            if self.variant == "soras":
                loc = dec.weights[i] * loc
            loc = self.operators[i].solve(loc)
            if self.variant in ("ras", "oras", "soras"):
                loc = dec.weights[i] * loc
            out[s] += loc
        return out


def one_level(A, decomposition, variant, kind=None, p=None, h=None, dim=None):
    """Build a one-level Schwarz preconditioner for ``A``.

    The local operator kind defaults to Robin blocks for the optimized
    variants (oras, soras) and Dirichlet blocks otherwise; pass ``kind``
    to override.
    """
    if variant not in _VARIANTS:
        raise ValueError(f"unknown Schwarz variant {variant!r}")
    if variant == "none":
        return OneLevelPreconditioner("none", decomposition, [])
    if kind is None:
        kind = "robin" if variant in ("oras", "soras") else "dirichlet"
    ops = build_local_operators(A, decomposition, kind=kind, p=p, h=h, dim=dim)
    return OneLevelPreconditioner(variant, decomposition, ops)


def richardson(A, b, M, x0=None, tol=1e-6, maxit=200):
    """Stationary iteration ``x <- x + M(b - A x)``.

    Returns ``(x, SolveReport)``; the report's ``diverged`` flag is set
    when the residual grows a factor 1e6 above its initial value.
    """
    matvec = as_operator(A)
    prec = as_preconditioner(M)
    b = np.asarray(b, dtype=np.result_type(b, float))
    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=b.dtype, copy=True)

    r = b - matvec(x)
    bnorm = float(np.linalg.norm(b)) or 1.0
    history = [float(np.linalg.norm(r))]
    converged = history[-1] <= tol * bnorm
    diverged = False
    while not converged and not diverged and len(history) - 1 < maxit:
        x = x + prec(r)
        r = b - matvec(x)
        history.append(float(np.linalg.norm(r)))
        converged = history[-1] <= tol * bnorm
        diverged = history[-1] >= 1e6 * history[0]
    return x, SolveReport("richardson", history, tol, bnorm, converged,
                          diverged=diverged)


def alternating_schwarz_1d(m, m_s, sweeps, f=None):
    """Historical two-subdomain alternating method on the 1d Poisson problem.

    The unit interval with ``m`` interior nodes is split at node ``m_s``
    into left and right pieces that share one grid cell. Each sweep
    solves both local Dirichlet problems, taking boundary data from the
    latest iterate (``gauss_seidel``) or from the previous sweep only
    (``jacobi``). Returns the max-norm errors against the direct solution
    after every sweep, index 0 holding the initial error.
    """
    if not 1 <= m_s <= m - 1:
        raise ValueError(f"split node must lie in 1..{m - 1}, got {m_s}")
    sys = discretize.poisson_1d(m, f)
    Ad = sys.A.toarray()
    u_star = np.linalg.solve(Ad, sys.F)

    idx = [np.arange(m_s), np.arange(m_s, m)]
    solvers = [linalg.dense_cholesky_factor(Ad[np.ix_(s, s)]) for s in idx]
    coupling = [Ad[np.ix_(idx[0], idx[1])], Ad[np.ix_(idx[1], idx[0])]]

    histories = {}
    for mode in ("gauss_seidel", "jacobi"):
        u = np.zeros(m)
        errs = [float(np.max(np.abs(u - u_star)))]
        for _ in range(sweeps):
            src = u if mode == "gauss_seidel" else u.copy()
            u[idx[0]] = solvers[0].solve(sys.F[idx[0]] - coupling[0] @ src[idx[1]])
            u[idx[1]] = solvers[1].solve(sys.F[idx[1]] - coupling[1] @ src[idx[0]])
            errs.append(float(np.max(np.abs(u - u_star))))
        histories[mode] = np.asarray(errs)
    return histories
