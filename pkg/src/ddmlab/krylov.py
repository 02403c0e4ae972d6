"""Krylov solvers: conjugate gradients, preconditioned CG, and GMRES.

All drivers return ``(x, SolveReport)``. The residual history always
holds true residual norms ``||b - A x_k||_2`` with the initial residual
at index 0, and convergence is declared on the relative criterion
``||r_k|| <= rtol * ||b||``.
"""

import time

import numpy as np


class KrylovBreakdownError(RuntimeError):
    """Raised when a short recurrence produces a non-positive inner product."""


class SolveReport:
    """Outcome of one solver run.

    Attributes
    ----------
    method : str
    iterations : int
        Number of completed iterations; ``len(residual_history) - 1``.
    converged : bool
    diverged : bool
        Set by stationary drivers when the residual grows a factor 1e6
        above its initial value.
    residual_history : ndarray
        True residual norms, entry 0 is ``||b - A x0||``.
    rtol : float
    bnorm : float
        Norm of the right-hand side used in the stopping test.
    energy_errors : ndarray or None
        ``sqrt((x_k - x*)^H A (x_k - x*))`` per iterate when a reference
        solution was supplied.
    iterates : list of ndarray or None
        Solution iterates (excluding x0) when requested.
    timings : dict
        Wall-clock buckets filled in by the caller; ``total`` is set here.
    """

    def __init__(self, method, residual_history, rtol, bnorm, converged,
                 diverged=False, energy_errors=None, iterates=None,
                 timings=None):
        self.method = method
        self.residual_history = np.asarray(residual_history, dtype=float)
        self.rtol = float(rtol)
        self.bnorm = float(bnorm)
        self.converged = bool(converged)
        self.diverged = bool(diverged)
        self.energy_errors = (
            None if energy_errors is None else np.asarray(energy_errors, dtype=float)
        )
        self.iterates = iterates
        self.timings = dict(timings or {})

    @property
    def iterations(self):
        return len(self.residual_history) - 1

    @property
    def final_relres(self):
        return float(self.residual_history[-1]) / self.bnorm

    def to_dict(self):
        d = {
            "method": self.method,
            "iterations": self.iterations,
            "converged": self.converged,
            "diverged": self.diverged,
            "rtol": self.rtol,
            "final_relres": self.final_relres,
            "residual_history": self.residual_history.tolist(),
            "timings": self.timings,
        }
        if self.energy_errors is not None:
            d["energy_errors"] = self.energy_errors.tolist()
        return d

    def __repr__(self):
        state = "converged" if self.converged else "not converged"
        return (f"SolveReport({self.method}, {self.iterations} iterations, "
                f"{state}, final relres {self.final_relres:.3e})")


def as_operator(A):
    """Wrap a matrix-like or callable as a matvec closure."""
    if callable(A) and not hasattr(A, "__matmul__"):
        return A
    if hasattr(A, "__matmul__"):
        return lambda v: A @ v
    if callable(A):
        return A
    raise TypeError(f"cannot interpret {type(A).__name__} as a linear operator")


def as_preconditioner(M):
    """Wrap a preconditioner as a closure applying its action to a vector.

    Accepts None (identity), objects with an ``apply`` method, matrix
    factorizations with a ``solve`` method, plain callables, and
    matrix-likes applied via ``@``.
    """
    if M is None:
        return lambda r: r
    if hasattr(M, "apply"):
        return M.apply
    if hasattr(M, "solve"):
        return M.solve
    if callable(M):
        return M
    if hasattr(M, "__matmul__"):
        return lambda r: M @ r
    raise TypeError(f"cannot interpret {type(M).__name__} as a preconditioner")


def _norm(v):
    return float(np.linalg.norm(v))


def _energy_error(matvec, x, x_star):
    e = x - x_star
    val = np.vdot(e, matvec(e)).real
    return float(np.sqrt(max(val, 0.0)))


def cg(A, b, x0=None, tol=1e-6, maxit=200, x_star=None, keep_iterates=False):
    """Conjugate gradients for symmetric positive definite systems."""
    return _cg_loop(A, b, None, x0, tol, maxit, x_star, keep_iterates, "cg")


def pcg(A, b, M, x0=None, tol=1e-6, maxit=200, x_star=None, keep_iterates=False):
    """Preconditioned conjugate gradients; M applies the preconditioner."""
    return _cg_loop(A, b, M, x0, tol, maxit, x_star, keep_iterates, "pcg")


def _cg_loop(A, b, M, x0, tol, maxit, x_star, keep_iterates, method):
    t0 = time.perf_counter()
    matvec = as_operator(A)
    prec = as_preconditioner(M)
    b = np.asarray(b, dtype=np.result_type(b, float))
    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=b.dtype, copy=True)

    r = b - matvec(x)
    bnorm = _norm(b) or 1.0
    history = [_norm(r)]
    energy = None if x_star is None else [_energy_error(matvec, x, x_star)]
    iterates = [] if keep_iterates else None

    z = prec(r)
    rz = np.vdot(r, z).real
    p = np.array(z, copy=True)
    converged = history[-1] <= tol * bnorm

    while not converged and len(history) - 1 < maxit:
        if rz <= 0.0:
            raise KrylovBreakdownError(
                f"{method}: preconditioned inner product {rz:.3e} is not positive"
            )
        Ap = matvec(p)
        pAp = np.vdot(p, Ap).real
        if pAp <= 0.0 or not np.isfinite(pAp):
            raise KrylovBreakdownError(
                f"{method}: curvature p^T A p = {pAp:.3e} is not positive"
            )
        alpha = rz / pAp
        x = x + alpha * p
        r = r - alpha * Ap
        history.append(_norm(r))
        if energy is not None:
            energy.append(_energy_error(matvec, x, x_star))
        if iterates is not None:
            iterates.append(x.copy())
        converged = history[-1] <= tol * bnorm
        if converged:
            break
        z = prec(r)
        rz_new = np.vdot(r, z).real
        p = z + (rz_new / rz) * p
        rz = rz_new

    report = SolveReport(method, history, tol, bnorm, converged,
                         energy_errors=energy, iterates=iterates,
                         timings={"total": time.perf_counter() - t0})
    return x, report


def gmres(A, b, M=None, side="right", x0=None, tol=1e-6, maxit=200,
          keep_iterates=False):
    """Full GMRES with modified Gram-Schmidt Arnoldi.

    ``side`` selects the preconditioning flavor: "right" (default) keeps
    the algorithm's residual equal to the true residual, "left" builds the
    Krylov space on preconditioned residuals, "none" ignores M. The
    reported history always contains true residual norms; convergence is
    tested on the true relative residual for every side.
    """
    if side not in ("left", "right", "none"):
        raise ValueError(f"unknown preconditioning side {side!r}")
    t0 = time.perf_counter()
    matvec = as_operator(A)
    if M is None:
        side = "none"
    prec = as_preconditioner(M)

    b = np.asarray(b)
    x0 = np.zeros_like(b) if x0 is None else np.asarray(x0)
    r0 = b - matvec(x0)
    dtype = np.result_type(r0.dtype, float)
    x0 = x0.astype(dtype)
    r0 = r0.astype(dtype)
    n = b.shape[0]
    bnorm = _norm(b) or 1.0

    history = [_norm(r0)]
    iterates = [] if keep_iterates else None
    if history[0] <= tol * bnorm:
        report = SolveReport("gmres", history, tol, bnorm, True,
                             iterates=iterates,
                             timings={"total": time.perf_counter() - t0})
        return x0.copy(), report

    t = prec(r0) if side == "left" else r0
    beta = _norm(t)
    steps = min(maxit, n)
    V = np.zeros((n, steps + 1), dtype=dtype)
    V[:, 0] = t / beta
    H = np.zeros((steps + 1, steps), dtype=dtype)
    cs = np.zeros(steps, dtype=dtype)
    sn = np.zeros(steps, dtype=dtype)
    g = np.zeros(steps + 1, dtype=dtype)
    g[0] = beta

    x = x0.copy()
    converged = False
    for k in range(steps):
        v = V[:, k]
        if side == "right":
            w = matvec(prec(v))
        elif side == "left":
            w = prec(matvec(v))
        else:
            w = matvec(v)
        w = np.asarray(w, dtype=dtype).copy()
        for j in range(k + 1):
            H[j, k] = np.vdot(V[:, j], w)
            w -= H[j, k] * V[:, j]
        H[k + 1, k] = _norm(w)
        lucky = abs(H[k + 1, k]) <= 1e-14 * beta
        if not lucky:
            V[:, k + 1] = w / H[k + 1, k]

        # Apply the accumulated Givens rotations, then create a new one.
        for j in range(k):
            temp = cs[j] * H[j, k] + sn[j] * H[j + 1, k]
            H[j + 1, k] = -np.conj(sn[j]) * H[j, k] + np.conj(cs[j]) * H[j + 1, k]
            H[j, k] = temp
        denom = np.sqrt(abs(H[k, k]) ** 2 + abs(H[k + 1, k]) ** 2)
        if denom == 0.0:
            cs[k], sn[k] = 1.0, 0.0
        else:
            cs[k] = np.conj(H[k, k]) / denom
            sn[k] = np.conj(H[k + 1, k]) / denom
        H[k, k] = cs[k] * H[k, k] + sn[k] * H[k + 1, k]
        H[k + 1, k] = 0.0
        g[k + 1] = -np.conj(sn[k]) * g[k]
        g[k] = cs[k] * g[k]

        # Form the candidate solution and measure the true residual.
        y = _solve_upper(H[: k + 1, : k + 1], g[: k + 1])
        u = V[:, : k + 1] @ y
        xk = x0 + (prec(u) if side == "right" else u)
        true_res = _norm(b - matvec(xk))
        history.append(true_res)
        if iterates is not None:
            iterates.append(xk)
        x = xk
        if true_res <= tol * bnorm:
            converged = True
            break
        if lucky:
            # The Krylov space is invariant; nothing further can improve.
            converged = true_res <= tol * bnorm
            break

    report = SolveReport("gmres", history, tol, bnorm, converged,
                         iterates=iterates,
                         timings={"total": time.perf_counter() - t0})
    return x, report


def _solve_upper(R, rhs):
    """Back substitution on a small upper-triangular system."""
    k = R.shape[0]
    y = np.zeros(k, dtype=np.result_type(R.dtype, rhs.dtype))
    for i in range(k - 1, -1, -1):
        y[i] = (rhs[i] - R[i, i + 1:] @ y[i + 1:]) / R[i, i]
    return y
