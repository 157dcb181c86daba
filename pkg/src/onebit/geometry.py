"""Geometry of effectively sparse signal sets and hyperplane tessellations.

The central set is K(n, s) = {x : ||x||_2 <= 1, ||x||_1 <= sqrt(s)}, the
convex relaxation of the unit s-sparse vectors.  Random Gaussian hyperplanes
through the origin cut the unit sphere into cells; with enough hyperplanes
every cell restricted to K has small diameter, which is what makes one-bit
measurements informative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .measurement import as_rows, derive_seed, normal_grid, uniform_grid


@dataclass
class SignalSetSpec:
    """Parameters of a signal set on or inside the unit ball.

    kind "effectively_sparse" is K(n, s) above; "exactly_sparse" is the set
    of at most floor(s)-sparse vectors in the unit ball.  s may be fractional
    for the effectively sparse kind and must satisfy 1 <= s <= n.
    """

    n: int
    s: float
    kind: str = "effectively_sparse"

    def __post_init__(self) -> None:
        if self.kind not in ("effectively_sparse", "exactly_sparse"):
            raise ValueError(f"unknown signal set kind {self.kind!r}")
        if not 1 <= self.s <= self.n:
            raise ValueError("sparsity must satisfy 1 <= s <= n")

    def contains(self, x, tol: float = 1e-9) -> bool:
        v = np.asarray(x, dtype=np.float64)
        if v.shape != (self.n,):
            return False
        if np.linalg.norm(v) > 1.0 + tol:
            return False
        if self.kind == "exactly_sparse":
            return int(np.count_nonzero(v)) <= int(self.s)
        return float(np.abs(v).sum()) <= np.sqrt(self.s) + tol


def hard_threshold(x, t: int) -> np.ndarray:
    """Keep the t largest-magnitude entries of x, zeroing the rest.

    Ties in magnitude are resolved toward the lowest index, so the result
    is deterministic.  For any x with ||x||_1 <= sqrt(s) the tail obeys
    ||x - hard_threshold(x, t)||_2 <= sqrt(s / t).
    """
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError("expected a vector")
    if t < 1:
        raise ValueError("threshold size t must be at least 1")
    if t >= v.shape[0]:
        return v.copy()
    order = np.argsort(-np.abs(v), kind="stable")
    out = np.zeros_like(v)
    keep = order[:t]
    out[keep] = v[keep]
    return out


def block_decompose(x, s: int) -> list[np.ndarray]:
    """Split x in K(n, s) into disjoint blocks of at most s coordinates each.

    Blocks are taken in decreasing magnitude order (ties toward the lowest
    index): the first block holds the s largest entries, the next the
    following s, and so on over the support.  The blocks sum to x exactly,
    and for members of K(n, s) the block l2 norms sum to at most 2.

    Raises
    ------
    ValueError
        If s is out of range or x lies outside K(n, s) ("not in K").
    """
    v = np.asarray(x, dtype=np.float64)
    n = v.shape[0]
    if not 1 <= s <= n:
        raise ValueError("sparsity must satisfy 1 <= s <= n")
    spec = SignalSetSpec(n, s, "effectively_sparse")
    if not spec.contains(v):
        raise ValueError("not in K")
    support = np.flatnonzero(v)
    order = support[np.argsort(-np.abs(v[support]), kind="stable")]
    blocks = []
    for start in range(0, order.size, s):
        chunk = order[start:start + s]
        block = np.zeros(n)
        block[chunk] = v[chunk]
        blocks.append(block)
    if not blocks:
        blocks.append(np.zeros(n))
    return blocks


def sample_sphere_cap(spec: SignalSetSpec, count: int, seed: int) -> np.ndarray:
    """Sample unit vectors from the sphere restricted to the signal set.

    For the effectively sparse kind, samples alternate between exactly
    floor(s)-sparse unit vectors (always members, by Cauchy-Schwarz) and
    dense perturbations of such vectors accepted once ||x||_1 <= sqrt(s),
    with the perturbation radius halved until acceptance.  The exactly
    sparse kind uses the sparse branch only.

    Returns
    -------
    (count, n) array of unit rows inside the set.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    n = spec.n
    sb = int(spec.s)
    budget = np.sqrt(spec.s)
    vals = normal_grid(derive_seed(seed, 1), count, n)
    perm = uniform_grid(derive_seed(seed, 2), count, n)
    noise = normal_grid(derive_seed(seed, 3), count, n)
    out = np.zeros((count, n))
    for i in range(count):
        support = np.argsort(perm[i], kind="stable")[:sb]
        w = np.zeros(n)
        w[support] = vals[i][support]
        w /= np.linalg.norm(w)
        if spec.kind == "exactly_sparse" or i % 2 == 0:
            out[i] = w
            continue
        g = noise[i] / np.linalg.norm(noise[i])
        eps = 0.5
        chosen = w
        for _ in range(60):
            v = w + eps * g
            v /= np.linalg.norm(v)
            if np.abs(v).sum() <= budget:
                chosen = v
                break
            eps *= 0.5
        out[i] = chosen
    return out


def separation_count(ensemble, x, y_pt, margin: float) -> int:
    """Number of rows putting x strictly above +margin and y_pt strictly below -margin."""
    A = as_rows(ensemble)
    px = A @ np.asarray(x, dtype=np.float64)
    py = A @ np.asarray(y_pt, dtype=np.float64)
    return int(np.count_nonzero((px > margin) & (py < -margin)))


def single_hyperplane_separation_prob(x, y_pt, trials: int, seed: int,
                                      margin: float | None = None) -> float:
    """Monte Carlo estimate of the one-row separation probability.

    Draws fresh Gaussian rows a and estimates P(<a, x> > margin and
    <a, y_pt> < -margin).  With margin = None the margin defaults to
    ||x - y_pt||_2 / 12, the value for which the separation probability
    of points at distance delta is still at least delta / 12.

    For margin 0 the exact probability is d_g(x, y) / (2 pi) with d_g the
    geodesic distance: 1/4 for orthogonal unit vectors, 1/2 for antipodal.
    """
    u = np.asarray(x, dtype=np.float64)
    v = np.asarray(y_pt, dtype=np.float64)
    if trials < 1:
        raise ValueError("need at least one trial")
    if margin is None:
        margin = float(np.linalg.norm(u - v)) / 12.0
    n = u.shape[0]
    hits = 0
    done = 0
    chunk = 65536
    while done < trials:
        take = min(chunk, trials - done)
        rows = normal_grid(seed, take, n, row_offset=done)
        px = rows @ u
        py = rows @ v
        hits += int(np.count_nonzero((px > margin) & (py < -margin)))
        done += take
    return hits / trials


@dataclass
class PairSeparation:
    """Separation record for one sampled pair at the report margin."""

    i: int
    j: int
    distance: float
    count_fwd: int   # rows with <a, x_i> > margin and <a, x_j> < -margin
    count_rev: int   # rows with <a, x_j> > margin and <a, x_i> < -margin


@dataclass
class TessellationReport:
    m: int
    delta: float
    sampled_points: np.ndarray          # (count, n)
    nonempty_cells: int
    max_cell_diameter_lb: float         # max within-cell pairwise distance seen
    separation_stats: list[PairSeparation] = field(default_factory=list)


def sign_pattern_cells(points: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Label each point by its sign-pattern cell, ids in first-seen order."""
    G = points @ rows.T
    S = np.sign(G).astype(np.int8)
    labels: dict[bytes, int] = {}
    ids = np.empty(points.shape[0], dtype=np.int64)
    for idx in range(points.shape[0]):
        key = S[idx].tobytes()
        ids[idx] = labels.setdefault(key, len(labels))
    return ids


def tessellation_points(spec: SignalSetSpec, sample_count: int,
                        seed: int) -> np.ndarray:
    """The point sample a tessellation report at this seed works over."""
    return sample_sphere_cap(spec, sample_count, derive_seed(seed, 101))


def tessellation_rows(spec: SignalSetSpec, m: int, seed: int) -> np.ndarray:
    """First m hyperplane normals of the report's row stream at this seed.

    Rows are keyed by index, so tessellation_rows(spec, m1, seed) is exactly
    the leading m1 rows of tessellation_rows(spec, m2, seed) for m1 <= m2.
    Reports at increasing m therefore refine one fixed tessellation.
    """
    from .measurement import gen_gaussian_ensemble

    return gen_gaussian_ensemble(m, spec.n, derive_seed(seed, 102)).rows


def tessellate_and_report(spec: SignalSetSpec, m: int, delta: float,
                          sample_count: int, seed: int) -> TessellationReport:
    """Measure how m Gaussian hyperplanes tessellate the sampled cap.

    Samples sample_count points from the cap, buckets them by the sign
    pattern of the m measurements, and reports the number of nonempty
    cells plus the largest within-cell distance (a lower bound on the true
    cell diameter).  For every sampled pair at distance greater than delta
    the report records the separating-row counts at margin delta / 30 in
    both orientations.

    Points come from tessellation_points and rows from tessellation_rows,
    so reports at increasing m share the sample set and use nested row
    prefixes of one underlying ensemble.
    """
    if m < 0:
        raise ValueError("row count m must be nonnegative")
    if delta <= 0:
        raise ValueError("delta must be positive")
    X = tessellation_points(spec, sample_count, seed)
    A = tessellation_rows(spec, m, seed)
    cells = sign_pattern_cells(X, A)

    gram = X @ X.T
    norms = np.diag(gram)
    dist = np.sqrt(np.maximum(np.add.outer(norms, norms) - 2.0 * gram, 0.0))

    max_diam = 0.0
    for cid in range(int(cells.max()) + 1 if cells.size else 0):
        idx = np.flatnonzero(cells == cid)
        if idx.size >= 2:
            max_diam = max(max_diam, float(dist[np.ix_(idx, idx)].max()))

    margin = delta / 30.0
    stats: list[PairSeparation] = []
    if sample_count >= 2:
        G = X @ A.T
        above = (G > margin).astype(np.float32)
        below = (G < -margin).astype(np.float32)
        counts = above @ below.T     # counts[p, q] = #separators for (p, q)
        pi, pj = np.nonzero(np.triu(dist > delta, k=1))
        for a, b in zip(pi.tolist(), pj.tolist()):
            stats.append(PairSeparation(a, b, float(dist[a, b]),
                                        int(round(counts[a, b])),
                                        int(round(counts[b, a]))))
    return TessellationReport(m, delta, X, int(cells.max()) + 1 if cells.size else 0,
                              max_diam, stats)
