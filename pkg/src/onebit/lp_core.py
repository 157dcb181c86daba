"""Self-contained dense linear-program solver over free variables.

Problem form: minimize objective @ z subject to

    eq_lhs @ z == eq_rhs        (p rows)
    ineq_lhs @ z >= ineq_rhs    (q rows)

with all d variables free.  solve_lp runs a two-phase primal simplex on the
standard-form conversion (split z into positive and negative parts, subtract
surplus variables from the inequality rows).  brute_force_vertex_solve is an
independent oracle for tiny instances: it enumerates candidate active sets
directly, so the two routes share no pivoting code.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.linalg import null_space


@dataclass
class ToleranceConfig:
    """Numeric thresholds for the simplex and the certificate checks.

    iteration_factor caps pivots at iteration_factor * (rows + cols) of the
    standard-form tableau.  stall_limit is the number of consecutive
    non-improving pivots tolerated before switching to Bland's rule.
    """

    feasibility: float = 1e-8
    optimality: float = 1e-9
    pivot: float = 1e-10
    iteration_factor: int = 50
    stall_limit: int = 1000


@dataclass
class LinearProgram:
    """Dense LP data; inequality rows mean ineq_lhs @ z >= ineq_rhs."""

    objective: np.ndarray   # (d,)
    eq_lhs: np.ndarray      # (p, d)
    eq_rhs: np.ndarray      # (p,)
    ineq_lhs: np.ndarray    # (q, d)
    ineq_rhs: np.ndarray    # (q,)

    def __post_init__(self) -> None:
        self.objective = np.atleast_1d(np.asarray(self.objective, dtype=np.float64))
        d = self.objective.shape[0]
        self.eq_lhs = np.asarray(self.eq_lhs, dtype=np.float64).reshape(-1, d)
        self.eq_rhs = np.atleast_1d(np.asarray(self.eq_rhs, dtype=np.float64))
        self.ineq_lhs = np.asarray(self.ineq_lhs, dtype=np.float64).reshape(-1, d)
        self.ineq_rhs = np.atleast_1d(np.asarray(self.ineq_rhs, dtype=np.float64))
        if self.eq_lhs.shape[0] != self.eq_rhs.shape[0]:
            raise ValueError("equality lhs/rhs row counts differ")
        if self.ineq_lhs.shape[0] != self.ineq_rhs.shape[0]:
            raise ValueError("inequality lhs/rhs row counts differ")
        for block in (self.objective, self.eq_lhs, self.eq_rhs,
                      self.ineq_lhs, self.ineq_rhs):
            if not np.all(np.isfinite(block)):
                raise ValueError("linear program data must be finite")

    @property
    def num_vars(self) -> int:
        return self.objective.shape[0]


@dataclass
class LpSolution:
    status: str                      # optimal | infeasible | unbounded | iteration_limit
    primal: np.ndarray | None        # (d,) present iff optimal
    objective_value: float           # nan unless optimal, -inf if unbounded
    iterations: int
    max_constraint_violation: float  # against the original rows, nan unless optimal


def max_violation(lp: LinearProgram, z: np.ndarray) -> float:
    """Largest constraint violation of z against the original LP rows."""
    worst = 0.0
    if lp.eq_lhs.shape[0]:
        worst = float(np.max(np.abs(lp.eq_lhs @ z - lp.eq_rhs)))
    if lp.ineq_lhs.shape[0]:
        slack = lp.ineq_lhs @ z - lp.ineq_rhs
        worst = max(worst, float(np.max(np.maximum(-slack, 0.0))))
    return worst


def _pivot(T: np.ndarray, r: np.ndarray, rpiv: int, cpiv: int) -> None:
    """Gauss-Jordan pivot on T (tableau with rhs column) and cost row r."""
    row = T[rpiv]
    row /= row[cpiv]
    col = T[:, cpiv].copy()
    col[rpiv] = 0.0
    T -= col[:, None] * row[None, :]
    r -= r[cpiv] * row
    T[:, cpiv] = 0.0
    T[rpiv, cpiv] = 1.0
    r[cpiv] = 0.0


def _reduced_costs(T: np.ndarray, basis: np.ndarray, cost: np.ndarray) -> np.ndarray:
    """Cost row [reduced costs | -objective] for the current basis."""
    cb = cost[basis]
    r = np.empty(T.shape[1])
    r[:-1] = cost - cb @ T[:, :-1]
    r[-1] = -cb @ T[:, -1]
    return r


def _simplex(T: np.ndarray, basis: np.ndarray, r: np.ndarray, cost: np.ndarray,
             allowed: np.ndarray, tol: ToleranceConfig, itmax: int,
             iters: int) -> tuple[str, int]:
    """Run pivots until optimality, unboundedness, or the iteration cap.

    Dantzig pricing with lowest-index tie-breaks; switches to Bland's rule
    after tol.stall_limit consecutive degenerate pivots, back on progress.
    """
    K = T.shape[1] - 1
    stall = 0
    bland = False
    refresh = 0
    while iters < itmax:
        red = np.where(allowed, r[:K], np.inf)
        if bland:
            neg = np.where(red < -tol.optimality)[0]
            if neg.size == 0:
                return "optimal", iters
            cpiv = int(neg[0])
        else:
            cpiv = int(np.argmin(red))
            if red[cpiv] >= -tol.optimality:
                return "optimal", iters
        col = T[:, cpiv]
        pos = np.where(col > tol.pivot)[0]
        if pos.size == 0:
            return "unbounded", iters
        ratios = np.maximum(T[pos, K], 0.0) / col[pos]
        best = float(np.min(ratios))
        # among (near-)tied rows take the stoutest pivot first: index-only
        # tie-breaking happily pivots on 1e-10 entries and wrecks the tableau
        ties = pos[ratios <= best + 1e-9 * (1.0 + best)]
        stout = ties[col[ties] >= 0.1 * float(np.max(col[ties]))]
        if bland:
            rpiv = int(stout[np.argmin(basis[stout])])
        else:
            rpiv = int(stout[np.argmax(col[stout])])
        gain = -r[cpiv] * best
        _pivot(T, r, rpiv, cpiv)
        basis[rpiv] = cpiv
        iters += 1
        refresh += 1
        if refresh >= 512:
            # recompute the cost row from the basis to shed pivot roundoff
            r[:] = _reduced_costs(T, basis, cost)
            refresh = 0
        if gain <= 1e-12 * (1.0 + abs(r[K])):
            stall += 1
            if stall >= tol.stall_limit:
                bland = True
        else:
            stall = 0
            bland = False
    return "iteration_limit", iters


def solve_lp(lp: LinearProgram, tol: ToleranceConfig | None = None) -> LpSolution:
    """Solve the LP with a two-phase dense simplex.

    The returned primal is recomputed from the final basis with one linear
    solve against the original standard-form data, so accumulated tableau
    roundoff does not leak into the reported vertex.
    """
    if tol is None:
        tol = ToleranceConfig()
    c = lp.objective
    d = lp.num_vars
    E, e = lp.eq_lhs, lp.eq_rhs
    I, f = lp.ineq_lhs, lp.ineq_rhs
    p, q = E.shape[0], I.shape[0]
    M = p + q

    if M == 0:
        if np.any(np.abs(c) > tol.optimality):
            return LpSolution("unbounded", None, -np.inf, 0, np.nan)
        return LpSolution("optimal", np.zeros(d), 0.0, 0, 0.0)

    # standard form: columns are (z+, z-, surplus)
    N = 2 * d + q
    A = np.zeros((M, N))
    b = np.empty(M)
    A[:p, :d] = E
    A[:p, d:2 * d] = -E
    b[:p] = e
    A[p:, :d] = I
    A[p:, d:2 * d] = -I
    A[p:, 2 * d:] = -np.eye(q)
    b[p:] = f

    # crash basis: a surplus column serves any inequality row with rhs <= 0
    # once the row is negated; every other row gets one artificial
    basis = np.full(M, -1, dtype=np.int64)
    art_rows = []
    for i in range(M):
        if i >= p and b[i] <= 0.0:
            A[i] = -A[i]
            b[i] = -b[i]
            basis[i] = 2 * d + (i - p)
        else:
            if b[i] < 0.0:
                A[i] = -A[i]
                b[i] = -b[i]
            art_rows.append(i)
    n_art = len(art_rows)
    K = N + n_art
    A0 = np.zeros((M, K))
    A0[:, :N] = A
    for k, i in enumerate(art_rows):
        A0[i, N + k] = 1.0
        basis[i] = N + k

    T = np.empty((M, K + 1))
    T[:, :K] = A0
    T[:, K] = b
    itmax = tol.iteration_factor * (M + K)
    allowed = np.ones(K, dtype=bool)
    allowed[N:] = False   # artificials start basic and may never re-enter
    iters = 0

    if n_art:
        cost1 = np.zeros(K)
        cost1[N:] = 1.0
        r = _reduced_costs(T, basis, cost1)
        status, iters = _simplex(T, basis, r, cost1, allowed, tol, itmax, iters)
        if status == "iteration_limit":
            return LpSolution("iteration_limit", None, np.nan, iters, np.nan)
        phase1 = -r[K]
        if phase1 > tol.feasibility * (1.0 + float(np.max(np.abs(b)))):
            return LpSolution("infeasible", None, np.nan, iters, np.nan)
        # pivot any artificial still basic at level zero out of the basis
        for i in np.where(basis >= N)[0]:
            j = int(np.argmax(np.abs(T[i, :N])))
            if abs(T[i, j]) > tol.pivot:
                _pivot(T, r, int(i), j)
                basis[i] = j
                iters += 1
            # else: row is redundant; its artificial stays basic at zero

    cost2 = np.zeros(K)
    cost2[:d] = c
    cost2[d:2 * d] = -c
    r = _reduced_costs(T, basis, cost2)
    status, iters = _simplex(T, basis, r, cost2, allowed, tol, itmax, iters)
    if status != "optimal":
        value = -np.inf if status == "unbounded" else np.nan
        return LpSolution(status, None, value, iters, np.nan)

    # clean vertex: re-solve the basis system against the unpivoted data
    B = A0[:, basis]
    try:
        wb = np.linalg.solve(B, b)
    except np.linalg.LinAlgError:
        wb = np.linalg.lstsq(B, b, rcond=None)[0]
    z = np.zeros(d)
    pos_part = np.zeros(d)
    neg_part = np.zeros(d)
    for row, j in enumerate(basis):
        if j < d:
            pos_part[j] += wb[row]
        elif j < 2 * d:
            neg_part[j - d] += wb[row]
    z = pos_part - neg_part
    return LpSolution("optimal", z, float(c @ z), iters, max_violation(lp, z))


def brute_force_vertex_solve(lp: LinearProgram,
                             tol: ToleranceConfig | None = None) -> LpSolution:
    """Exact reference solve by enumerating candidate active sets.

    Lineality directions (common null space of all rows) are pinned with
    extra orthogonality equalities so the system is pointed; vertices then
    come from d-subsets of rows and unbounded rays from (d-1)-subsets.
    Guarded to tiny sizes; intended as an oracle, not a solver.
    """
    if tol is None:
        tol = ToleranceConfig()
    d = lp.num_vars
    p, q = lp.eq_lhs.shape[0], lp.ineq_lhs.shape[0]
    if d > 12 or p + q > 24:
        raise ValueError("brute force solve is limited to d <= 12 and p + q <= 24")
    c = lp.objective

    rows = np.vstack([lp.eq_lhs, lp.ineq_lhs])
    rhs = np.concatenate([lp.eq_rhs, lp.ineq_rhs])
    is_eq = np.zeros(p + q, dtype=bool)
    is_eq[:p] = True

    lin = null_space(rows) if rows.size else np.eye(d)
    k = lin.shape[1]
    if k:
        rows = np.vstack([rows, lin.T])
        rhs = np.concatenate([rhs, np.zeros(k)])
        is_eq = np.concatenate([is_eq, np.ones(k, dtype=bool)])
    R = rows.shape[0]

    scale = 1.0 + (float(np.max(np.abs(rhs))) if rhs.size else 0.0)
    ftol = tol.feasibility * scale

    def feasible(z: np.ndarray) -> bool:
        res = rows @ z - rhs
        if np.any(np.abs(res[is_eq]) > ftol):
            return False
        return bool(np.all(res[~is_eq] >= -ftol))

    examined = 0
    verts: list[np.ndarray] = []
    for S in combinations(range(R), d):
        examined += 1
        A_S = rows[list(S)]
        try:
            z = np.linalg.solve(A_S, rhs[list(S)])
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(z)):
            continue
        if np.max(np.abs(A_S @ z - rhs[list(S)])) > ftol * (1.0 + float(np.max(np.abs(z)))):
            continue
        if feasible(z):
            verts.append(z)

    if not verts:
        return LpSolution("infeasible", None, np.nan, examined, np.nan)

    ctol = tol.optimality * (1.0 + float(np.max(np.abs(c))))
    if k and np.max(np.abs(c @ lin)) > ctol:
        return LpSolution("unbounded", None, -np.inf, examined, np.nan)

    def improving_ray(w: np.ndarray) -> bool:
        prods = rows @ w
        if np.any(np.abs(prods[is_eq]) > ftol):
            return False
        if not np.all(prods[~is_eq] >= -ftol):
            return False
        return float(c @ w) < -ctol

    for S in combinations(range(R), d - 1):
        examined += 1
        A_S = rows[list(S)] if S else np.zeros((0, d))
        ns = null_space(A_S) if A_S.size else np.eye(d)
        if A_S.size == 0 and d == 1:
            ns = np.eye(1)
        if ns.shape[1] != 1:
            continue
        w = ns[:, 0]
        if improving_ray(w) or improving_ray(-w):
            return LpSolution("unbounded", None, -np.inf, examined, np.nan)

    objs = [float(c @ z) for z in verts]
    best = int(np.argmin(objs))
    z = verts[best]
    return LpSolution("optimal", z, objs[best], examined, max_violation(lp, z))
