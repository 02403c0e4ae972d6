"""Coarse spaces and two-level Schwarz preconditioners.

A coarse space is a tall matrix Z whose columns span the low-energy
directions a one-level method handles poorly. The induced coarse solve

    Q r = Z (Z^H A Z)^(-1) Z^H r

is combined with a one-level preconditioner M1 through one of seven
correction formulas (see :class:`TwoLevelPreconditioner`).

Three constructions are provided: the weighted indicator space
(:func:`nicolaides_space`), interpolation from a coarser structured grid
(:func:`grid_space`), and the spectral space built from local generalized
eigenproblems (:func:`geneo_space`).
"""

import numpy as np

from . import discretize, linalg
from .krylov import as_operator, as_preconditioner

_COMBINATORS = ("ad", "bnn", "adef1", "adef2", "rbnn1", "rbnn2", "none")


class EmptyCoarseSpaceError(RuntimeError):
    """Raised when a coarse-space construction selects no usable column."""


class CoarseSpace:
    """Span of coarse basis columns plus the factorized coarse operator.

    Columns that are numerically dependent on earlier ones are dropped by
    a pivoted Gram-Schmidt filter (relative tolerance ``rank_tol``); the
    surviving columns keep their original values and order. Per-column
    metadata (owning subdomain, generalized eigenvalue) is filtered
    alongside.
    """

    def __init__(self, Z, A, tag, owners=None, eigenvalues=None, tau=None,
                 rank_tol=1e-10):
        Z = np.asarray(Z)
        if Z.ndim != 2:
            raise ValueError("coarse basis must be a 2d array")
        self.raw_columns = Z.shape[1]
        keep = _independent_columns(Z, rank_tol)
        if keep.size == 0:
            raise EmptyCoarseSpaceError(
                f"{tag}: no independent coarse columns ({self.raw_columns} candidates)"
            )
        self.Z = Z[:, keep]
        self.tag = tag
        self.tau = tau
        self.owners = None if owners is None else np.asarray(owners)[keep]
        self.eigenvalues = (
            None if eigenvalues is None else np.asarray(eigenvalues)[keep]
        )
        A0 = self.Z.conj().T @ (A @ self.Z)
        self.A0 = linalg.auto_factor(A0)

    @property
    def n(self):
        return self.Z.shape[0]

    @property
    def m0(self):
        return self.Z.shape[1]

    def solve_coefficients(self, r):
        """Coarse coefficients ``(Z^H A Z)^(-1) Z^H r``."""
        return self.A0.solve(self.Z.conj().T @ r)

    def apply_Q(self, r):
        """Coarse correction ``Z (Z^H A Z)^(-1) Z^H r``."""
        return self.Z @ self.solve_coefficients(r)


def coarse_solve(coarse_space, r):
    """Apply the coarse correction operator Q to a vector."""
    return coarse_space.apply_Q(r)


def _independent_columns(Z, rel_tol):
    """Indices of a maximal independent column subset, original order.

    Pivoted modified Gram-Schmidt: repeatedly select the column with the
    largest residual norm, re-orthogonalize it against the accepted
    directions, and deflate the rest. Columns whose residual falls below
    ``rel_tol`` times the largest initial norm are dropped.
    """
    Z = np.asarray(Z)
    m = Z.shape[1]
    if m == 0:
        return np.empty(0, dtype=int)
    work = Z.astype(np.result_type(Z.dtype, float), copy=True)
    scale = float(np.max(np.linalg.norm(work, axis=0), initial=0.0))
    if scale == 0.0:
        return np.empty(0, dtype=int)
    alive = np.ones(m, dtype=bool)
    basis = []
    kept = []
    for _ in range(m):
        norms = np.where(alive, np.linalg.norm(work, axis=0), -1.0)
        pick = int(np.argmax(norms))
        if norms[pick] <= rel_tol * scale:
            break
        q = work[:, pick].copy()
        for prev in basis:
            q -= (prev.conj() @ q) * prev
        nq = np.linalg.norm(q)
        if nq <= rel_tol * scale:
            alive[pick] = False
            continue
        q /= nq
        basis.append(q)
        kept.append(pick)
        alive[pick] = False
        if alive.any():
            coeffs = q.conj() @ work[:, alive]
            work[:, alive] -= np.outer(q, coeffs)
    return np.array(sorted(kept), dtype=int)


def nicolaides_space(A, decomposition):
    """One weighted indicator column per subdomain.

    Column i extends the subdomain's partition-of-unity weights by zero;
    together the columns reproduce the constant vector exactly.
    """
    n = decomposition.n_dofs
    Z = np.zeros((n, decomposition.N))
    for i, s in enumerate(decomposition.sets):
        Z[s, i] = decomposition.weights[i]
        if not np.any(Z[s, i]):
            raise ValueError(
                f"subdomain {i} carries no partition-of-unity weight; "
                "its indicator column would vanish"
            )
    return CoarseSpace(Z, A, tag="nicolaides",
                       owners=np.arange(decomposition.N))


def _hat_matrix(m, h, H):
    """1d piecewise-linear interpolation from spacing H to spacing h."""
    ratio = H / h
    r = int(round(ratio))
    if r < 1 or abs(ratio - r) > 1e-9 * max(r, 1):
        raise ValueError(f"coarse spacing {H} is not an integer multiple of {h}")
    if (m + 1) % r:
        raise ValueError(
            f"coarse spacing must divide the domain evenly ({m + 1} cells, ratio {r})"
        )
    m0 = (m + 1) // r - 1
    if m0 < 1:
        raise ValueError("coarse grid has no interior nodes")
    # Integer index arithmetic keeps the weights exact (0 stays 0, 1 stays 1).
    i = np.arange(1, m + 1)
    J = np.arange(1, m0 + 1) * r
    Z = np.maximum(0.0, 1.0 - np.abs(i[:, None] - J[None, :]) / r)
    return Z


def grid_space(A, fine_grid, H_coarse):
    """Interpolation coarse space between nested structured grids.

    Columns are hat functions in 1d and bilinear tensor hats in 2d,
    sampled at the fine interior nodes. ``H_coarse`` must be an integer
    multiple of the fine spacing and divide the domain evenly; equal
    spacings give the identity.
    """
    if fine_grid.dim == 1:
        Z = _hat_matrix(fine_grid.nx, fine_grid.hx, H_coarse)
    else:
        Zx = _hat_matrix(fine_grid.nx, fine_grid.hx, H_coarse)
        Zy = _hat_matrix(fine_grid.ny, fine_grid.hy, H_coarse)
        Z = np.kron(Zy, Zx)
    return CoarseSpace(Z, A, tag="grid")


def subdomain_element_sets(system, decomposition):
    """Mesh elements whose vertices all lie inside each subdomain.

    A vertex counts as inside when it is an eliminated original-boundary
    vertex or its DoF belongs to the subdomain's set.
    """
    if system.mesh is None:
        raise discretize.UnsupportedProblemError(
            f"kind '{system.kind}' has no mesh; element sets need the FEM path"
        )
    dmap = system.dof_of_vertex[system.mesh.triangles]
    sets = []
    for s in decomposition.sets:
        inset = np.zeros(system.n, dtype=bool)
        inset[s] = True
        ok = np.where(dmap >= 0, inset[np.clip(dmap, 0, None)], True)
        sets.append(np.flatnonzero(ok.all(axis=1)))
    return sets


def subdomain_neumann_matrices(system, decomposition):
    """Neumann matrices of the element subdomains, one per DoF subdomain."""
    return [
        discretize.neumann_matrix(system, es)
        for es in subdomain_element_sets(system, decomposition)
    ]


def geneo_space(A, decomposition, neumann_matrices, tau="auto"):
    """Spectral coarse space from local generalized eigenproblems.

    For each subdomain solve the pencil ``N_j phi = lambda (D_j A_j D_j) phi``
    with ``N_j`` the local Neumann matrix and ``A_j`` the principal
    submatrix of A, then keep the eigenvectors with ``lambda <= tau``.
    Kernel vectors of the weighted matrix count as selected only when
    they are also (numerically) energy-free for ``N_j``; otherwise they
    represent infinite eigenvalues. Selected vectors enter the basis as
    ``R_j^T D_j phi``, grouped by subdomain in ascending index order.

    ``tau="auto"`` picks the reciprocal of the worst subdomain aspect
    ratio (diameter over overlap width), which needs the decomposition's
    geometry fields.
    """
    if tau == "auto":
        if decomposition.H is None or decomposition.overlap_width is None:
            raise ValueError(
                "tau='auto' needs a decomposition with coordinates and mesh width"
            )
        aspect = max(
            decomposition.H[j] / decomposition.overlap_width
            for j in range(decomposition.N)
        )
        tau = 1.0 / aspect
    tau = float(tau)
    if tau <= 0:
        raise ValueError(f"threshold must be positive, got {tau}")

    columns, owners, eigenvalues = [], [], []
    n = decomposition.n_dofs
    for j, (N, dofs) in enumerate(neumann_matrices):
        s = decomposition.sets[j]
        if len(dofs) == 0:
            continue
        pos = np.searchsorted(s, dofs)
        Nloc = np.zeros((len(s), len(s)), dtype=np.asarray(N).dtype)
        Nloc[np.ix_(pos, pos)] = N
        Aj = A[np.ix_(s, s)].toarray()
        D = decomposition.weights[j]
        B = (D[:, None] * Aj) * D[None, :]
        pairs = linalg.sym_gen_eig(Nloc, B)

        selected = []
        if pairs.null_basis is not None:
            # Kernel of the weighted matrix: energy-free vectors are the
            # lambda = 0 modes, the rest are infinite and excluded.
            energy_tol = 1e-12 * max(abs(np.trace(Nloc)), np.finfo(float).tiny)
            for phi in pairs.null_basis.T:
                if abs(np.vdot(phi, Nloc @ phi)) <= energy_tol:
                    selected.append((0.0, phi))
        for lam, phi in zip(pairs.values, pairs.vectors.T):
            if lam <= tau:
                selected.append((float(lam), phi))
        for lam, phi in selected:
            col = np.zeros(n, dtype=np.result_type(phi.dtype, float))
            col[s] = D * phi
            columns.append(col)
            owners.append(j)
            eigenvalues.append(lam)

    if not columns:
        raise EmptyCoarseSpaceError(
            f"no generalized eigenvalue fell below tau = {tau:.3e}"
        )
    Z = np.column_stack(columns)
    return CoarseSpace(Z, A, tag="geneo", owners=owners,
                       eigenvalues=eigenvalues, tau=tau)


class TwoLevelPreconditioner:
    """One-level preconditioner enriched with a coarse correction.

    The combinator names the correction formula, with Q the coarse solve
    and M1 the one-level application:

    ======== =======================================
    ad       M1 + Q
    bnn      (I - QA) M1 (I - AQ) + Q
    adef1    M1 (I - AQ) + Q
    adef2    (I - QA) M1 + Q
    rbnn1    (I - QA) M1 (I - AQ)
    rbnn2    (I - QA) M1
    none     M1
    ======== =======================================
    """

    def __init__(self, M1, coarse_space, A, combinator="adef1"):
        if combinator not in _COMBINATORS:
            raise ValueError(
                f"unknown combinator {combinator!r}; expected one of {_COMBINATORS}"
            )
        self.combinator = combinator
        self.coarse = coarse_space
        self.M1 = M1
        self._prec = as_preconditioner(M1)
        self._matvec = as_operator(A)
        self.applies = 0

    def apply(self, r):
        """Apply the two-level preconditioner to a residual vector."""
        self.applies += 1
        c = self.combinator
        M1, mv, Q = self._prec, self._matvec, self.coarse.apply_Q
        if c == "none":
            return M1(r)
        if c == "ad":
            return M1(r) + Q(r)
        if c == "adef1":
            qr = Q(r)
            return M1(r - mv(qr)) + qr
        if c == "adef2":
            u = M1(r)
            return u + Q(r - mv(u))
        if c == "bnn":
            u = M1(r - mv(Q(r)))
            return u + Q(r - mv(u))
        if c == "rbnn1":
            u = M1(r - mv(Q(r)))
            return u - Q(mv(u))
        # rbnn2
        u = M1(r)
        return u - Q(mv(u))


def two_level(M1, coarse_space, A, combinator="adef1"):
    """Convenience constructor for :class:`TwoLevelPreconditioner`."""
    return TwoLevelPreconditioner(M1, coarse_space, A, combinator=combinator)


def deflated_initial_guess(coarse_space, b):
    """Starting vector ``Q b`` for deflation-style corrections.

    The projection combinators (adef1, adef2, rbnn1, rbnn2) build
    nonsymmetric operators; conjugate gradients stays reliable with them
    only when the initial residual is already free of coarse components,
    which this starting vector guarantees. GMRES does not need it.
    """
    return coarse_space.apply_Q(b)
