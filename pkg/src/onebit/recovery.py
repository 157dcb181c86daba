"""Recover a sparse signal's direction from one-bit sign measurements.

Given y = sign(A x), the convex program

    minimize ||x'||_1   subject to   y_i <a_i, x'> >= 0  for all i
                                     (1/m) sum_i y_i <a_i, x'> = 1

is solved as an LP in the 2n variables (x', u) with u_i >= |x'_i| rows.
The equality is posed as >= 1 and must be tight at the optimum (scaling the
solution down would otherwise lower the objective); tightness is asserted
after the solve.  Rows with y_i = 0 pin <a_i, x'> = 0 exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lp_core import LinearProgram, LpSolution, ToleranceConfig, solve_lp
from .measurement import MeasurementEnsemble, as_rows, derive_seed, normal_grid, uniform_grid

NORMALIZATION_TOL = 1e-6
SUPPORT_TOL = 1e-7
ACTIVE_ROW_TOL = 1e-7


class RecoveryError(RuntimeError):
    """Raised when the recovery LP fails to produce a usable vertex."""


@dataclass
class VertexCertificate:
    """Evidence that the LP solution sits on a vertex of the feasible set.

    At a nondegenerate optimal vertex the support T and the set Omega of
    rows active at zero satisfy |T| = |Omega| + 1, the active rows
    annihilate x_hat on T, and the normalization holds with equality.
    """

    support: np.ndarray            # indices with |x_hat_i| > SUPPORT_TOL
    active_rows: np.ndarray        # rows with |<a_i, x_hat>| <= ACTIVE_ROW_TOL * ||a_i|| * ||x_hat||
    cardinality_ok: bool           # |support| == |active_rows| + 1
    kernel_residual: float         # ||A_active[:, support] @ x_hat[support]||_2
    normalization_residual: float  # |(1/m) sum |<a_i, x_hat>| - 1|


@dataclass
class RecoveryResult:
    x_hat: np.ndarray              # raw LP minimizer in R^n
    direction: np.ndarray          # x_hat / ||x_hat||_2
    l1_over_l2: float
    certificate: VertexCertificate
    lp_solution: LpSolution


def build_recovery_lp(ensemble: MeasurementEnsemble, y) -> LinearProgram:
    """Assemble the sign-consistent l1 minimization LP.

    Variables are (x', u) in R^{2n}.  Inequality rows, in order: u_i - x'_i >= 0
    for each i, then u_i + x'_i >= 0, then y_i <a_i, x'> >= 0 for rows with
    y_i != 0, then the normalization (1/m) sum_i y_i <a_i, x'> >= 1.  Rows
    with y_i = 0 become equalities <a_i, x'> = 0.

    Raises:
        ValueError: on length mismatch or when every sign is zero
            ("degenerate sign pattern": the normalization row would be 0 >= 1).
    """
    A = as_rows(ensemble)
    m, n = A.shape
    y = np.asarray(y, dtype=np.float64).ravel()
    if y.shape[0] != m:
        raise ValueError("sign pattern length does not match ensemble rows")
    nz = y != 0.0
    if m == 0 or not np.any(nz):
        raise ValueError("degenerate sign pattern")

    d = 2 * n
    c = np.zeros(d)
    c[n:] = 1.0

    n_sign = int(np.count_nonzero(nz))
    q = 2 * n + n_sign + 1
    ineq = np.zeros((q, d))
    ineq_rhs = np.zeros(q)
    eye = np.eye(n)
    ineq[:n, :n] = -eye          # u_i - x_i >= 0
    ineq[:n, n:] = eye
    ineq[n:2 * n, :n] = eye      # u_i + x_i >= 0
    ineq[n:2 * n, n:] = eye
    ineq[2 * n:2 * n + n_sign, :n] = y[nz, None] * A[nz]
    ineq[q - 1, :n] = (y[nz, None] * A[nz]).sum(axis=0) / m
    ineq_rhs[q - 1] = 1.0

    eq = A[~nz]
    p = eq.shape[0]
    eq_lhs = np.zeros((p, d))
    eq_lhs[:, :n] = eq
    return LinearProgram(c, eq_lhs, np.zeros(p), ineq, ineq_rhs)


def extract_certificate(ensemble: MeasurementEnsemble, y, x_hat,
                        support_tol: float = SUPPORT_TOL,
                        active_tol: float = ACTIVE_ROW_TOL) -> VertexCertificate:
    """Compute the vertex certificate for a candidate minimizer."""
    A = as_rows(ensemble)
    m = A.shape[0]
    x_hat = np.asarray(x_hat, dtype=np.float64)
    x_norm = float(np.linalg.norm(x_hat))
    prods = A @ x_hat
    row_norms = np.linalg.norm(A, axis=1)
    support = np.flatnonzero(np.abs(x_hat) > support_tol)
    active = np.flatnonzero(np.abs(prods) <= active_tol * row_norms * x_norm)
    if active.size and support.size:
        kernel_residual = float(np.linalg.norm(A[np.ix_(active, support)] @ x_hat[support]))
    else:
        kernel_residual = 0.0
    normalization_residual = float(abs(np.abs(prods).sum() / m - 1.0)) if m else np.nan
    return VertexCertificate(
        support=support,
        active_rows=active,
        cardinality_ok=support.size == active.size + 1,
        kernel_residual=kernel_residual,
        normalization_residual=normalization_residual,
    )


def recover(ensemble: MeasurementEnsemble, y,
            tol: ToleranceConfig | None = None) -> RecoveryResult:
    """Solve the recovery LP and package the minimizer with its certificate.

    Raises:
        ValueError: degenerate sign pattern (all signs zero).
        RecoveryError: LP not optimal, or normalization row not tight at
            the returned vertex.
    """
    A = as_rows(ensemble)
    m, n = A.shape
    lp = build_recovery_lp(ensemble, y)
    sol = solve_lp(lp, tol)
    if sol.status != "optimal":
        raise RecoveryError(f"recovery LP terminated with status {sol.status}")
    x_hat = sol.primal[:n]
    yf = np.asarray(y, dtype=np.float64).ravel()
    tightness = float((yf * (A @ x_hat)).sum() / m)
    if abs(tightness - 1.0) > NORMALIZATION_TOL:
        raise RecoveryError("normalization not tight")
    x_norm = float(np.linalg.norm(x_hat))
    if x_norm == 0.0:
        raise RecoveryError("recovery LP returned the zero vector")
    direction = x_hat / x_norm
    l1_over_l2 = float(np.abs(x_hat).sum() / x_norm)
    cert = extract_certificate(ensemble, y, x_hat)
    return RecoveryResult(x_hat, direction, l1_over_l2, cert, sol)


def recovery_error(direction, x_true) -> float:
    """Euclidean distance between unit-normalized estimate and truth.

    Both arguments are normalized first, so magnitudes play no role; one-bit
    measurements carry no magnitude information.
    """
    u = np.asarray(direction, dtype=np.float64)
    v = np.asarray(x_true, dtype=np.float64)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return float(np.linalg.norm(u / nu - v / nv))


def _l1(v: np.ndarray) -> float:
    return float(np.abs(v).sum())


def nonconvex_oracle(ensemble: MeasurementEnsemble, y, s: int,
                     samples: int = 2000, seed: int = 0) -> np.ndarray:
    """Approximate the sphere-constrained l1 minimizer over the feasible cone.

    Rejection-samples unit vectors consistent with y (a mix of s-sparse and
    dense Gaussian proposals, both orientations), then refines the best few
    by coordinate descent: zero or shrink one coordinate, renormalize, keep
    the move when consistency survives and the l1 norm drops.  Small-n
    reference only; the cone fraction shrinks exponentially with m.

    Raises:
        ValueError: n > 16, or no consistent sample found
            ("empty feasible cone sample").
    """
    A = as_rows(ensemble)
    m, n = A.shape
    if n > 16:
        raise ValueError("nonconvex oracle is limited to n <= 16")
    if samples < 1:
        raise ValueError("need at least one sample")
    y = np.asarray(y, dtype=np.float64).ravel()
    nzmask = y != 0.0
    A_nz = A[nzmask]
    y_nz = y[nzmask]

    def consistent(v: np.ndarray) -> bool:
        if A_nz.shape[0] == 0:
            return True
        return bool(np.min(y_nz * (A_nz @ v)) >= 0.0)

    # proposal bank: even indices dense Gaussian, odd indices s-sparse
    dense = normal_grid(derive_seed(seed, 1), samples, n)
    pick = uniform_grid(derive_seed(seed, 2), samples, n)
    sb = max(1, min(int(s), n))
    V = dense.copy()
    odd = np.arange(samples) % 2 == 1
    keep = np.argsort(pick[odd], axis=1, kind="stable")[:, :sb]
    sparse_rows = np.zeros((int(odd.sum()), n))
    np.put_along_axis(sparse_rows, keep, np.take_along_axis(dense[odd], keep, axis=1), axis=1)
    V[odd] = sparse_rows
    V /= np.linalg.norm(V, axis=1, keepdims=True)

    found: list[np.ndarray] = []
    if A_nz.shape[0] == 0:
        found = [V[i] for i in range(min(samples, 8))]
    else:
        G = y_nz[:, None] * (A_nz @ V.T)
        mins = G.min(axis=0)
        for i in np.flatnonzero(mins >= 0.0):
            found.append(V[i])
        for i in np.flatnonzero((-G).min(axis=0) >= 0.0):
            found.append(-V[i])
    if not found:
        raise ValueError("empty feasible cone sample")

    found.sort(key=_l1)
    best = None
    for v0 in found[:5]:
        v = _coordinate_descent(v0.copy(), consistent)
        if best is None or _l1(v) < _l1(best):
            best = v
    return best


def _coordinate_descent(v: np.ndarray, consistent, max_passes: int = 60) -> np.ndarray:
    """Greedy l1 descent on the unit sphere by per-coordinate shrink moves."""
    for _ in range(max_passes):
        improved = False
        order = np.argsort(np.abs(v), kind="stable")
        for j in order:
            if v[j] == 0.0:
                continue
            base = _l1(v)
            for factor in (0.0, 0.5, 0.9):
                w = v.copy()
                w[j] *= factor
                norm = np.linalg.norm(w)
                if norm == 0.0:
                    continue
                w /= norm
                if _l1(w) < base - 1e-15 and consistent(w):
                    v = w
                    improved = True
                    break
        if not improved:
            break
    return v
