"""Tests for signal-set geometry, nets, decompositions, and tessellations."""

import numpy as np
import pytest

from onebit.geometry import (
    SignalSetSpec,
    block_decompose,
    hard_threshold,
    sample_sphere_cap,
    separation_count,
    sign_pattern_cells,
    single_hyperplane_separation_prob,
    tessellate_and_report,
    tessellation_points,
    tessellation_rows,
)
from onebit.measurement import gen_gaussian_ensemble


def cap_spec(n, s):
    return SignalSetSpec(n, s, "effectively_sparse")


def test_hard_threshold_examples():
    x = np.array([0.8, 0.6, 0.0, 0.0])
    out = hard_threshold(x, 1)
    assert np.array_equal(out, [0.8, 0.0, 0.0, 0.0])
    assert np.linalg.norm(x - out) == pytest.approx(0.6)
    assert np.array_equal(hard_threshold(x, 4), x)
    # magnitude ties resolve toward the lowest index
    tied = hard_threshold(np.array([0.5, -0.5, 0.5]), 1)
    assert np.array_equal(tied, [0.5, 0.0, 0.0])
    with pytest.raises(ValueError):
        hard_threshold(x, 0)


def test_hard_threshold_tail_bound():
    rng = np.random.default_rng(2)
    for _ in range(200):
        x = rng.normal(size=12)
        for t in (1, 3, 7):
            tail = np.linalg.norm(x - hard_threshold(x, t))
            assert tail <= np.abs(x).sum() / np.sqrt(t) + 1e-12


def test_block_decompose_examples():
    e1 = np.zeros(4)
    e1[0] = 1.0
    blocks = block_decompose(e1, 1)
    assert len(blocks) == 1
    assert np.array_equal(blocks[0], e1)

    half = np.full(4, 0.5)          # in K(4, 4): l1 = 2 = sqrt(4)
    blocks = block_decompose(half, 4)
    assert len(blocks) == 1
    assert np.linalg.norm(blocks[0]) == pytest.approx(1.0)

    with pytest.raises(ValueError, match="not in K"):
        block_decompose(half, 2)    # l1 = 2 > sqrt(2)


def test_block_decompose_structure():
    spec = cap_spec(24, 3)
    X = sample_sphere_cap(spec, 60, seed=8)
    for x in X:
        blocks = block_decompose(x, 3)
        total = np.zeros_like(x)
        seen = np.zeros_like(x, dtype=bool)
        for b in blocks:
            support = b != 0
            assert support.sum() <= 3
            assert not np.any(seen & support)   # disjoint supports
            seen |= support
            total = total + b
        assert np.array_equal(total, x)         # exact reassembly
        norm_sum = sum(np.linalg.norm(b) for b in blocks)
        assert norm_sum <= 1.0 + np.abs(x).sum() / np.sqrt(3) + 1e-12
        assert norm_sum <= 2.0 + 1e-12


def test_sample_sphere_cap_contracts():
    spec = cap_spec(32, 2)
    X = sample_sphere_cap(spec, 1000, seed=4)
    assert X.shape == (1000, 32)
    norms = np.linalg.norm(X, axis=1)
    assert np.max(np.abs(norms - 1.0)) <= 1e-12
    l1 = np.abs(X).sum(axis=1)
    assert l1.max() <= np.sqrt(2.0) + 1e-12
    # the mixture produces plenty of non-exactly-sparse points
    dense = ((X != 0).sum(axis=1) > 2).sum()
    assert dense >= 400
    assert np.array_equal(X, sample_sphere_cap(spec, 1000, seed=4))


def test_sample_sphere_cap_full_sparsity():
    # s = n: the l1 budget sqrt(n) never binds, all samples are unit vectors
    X = sample_sphere_cap(cap_spec(6, 6), 200, seed=1)
    assert np.max(np.abs(np.linalg.norm(X, axis=1) - 1.0)) <= 1e-12
    assert np.abs(X).sum(axis=1).max() <= np.sqrt(6.0) + 1e-12


def test_sample_sphere_cap_exactly_sparse_kind():
    X = sample_sphere_cap(SignalSetSpec(16, 3, "exactly_sparse"), 100, seed=6)
    assert ((X != 0).sum(axis=1) <= 3).all()
    assert np.max(np.abs(np.linalg.norm(X, axis=1) - 1.0)) <= 1e-12


def test_signal_set_spec_validation():
    with pytest.raises(ValueError):
        SignalSetSpec(8, 0.5, "effectively_sparse")   # s < 1
    with pytest.raises(ValueError):
        SignalSetSpec(8, 9, "effectively_sparse")     # s > n
    with pytest.raises(ValueError):
        SignalSetSpec(8, 2, "banded")


def test_separation_count_basics():
    A = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.5]])
    x = np.array([1.0, 0.0])
    y = np.array([0.0, 1.0])
    # rows separating x from y at margin 0: need <a,x> > 0 > <a,y>
    assert separation_count(A, x, x, 0.0) == 0
    assert separation_count(A, x, y, np.finfo(float).max) == 0
    assert separation_count(A, x, y, 0.0) == 0          # no row qualifies
    assert separation_count(A, y, x, 0.0) == 1          # row (-1, 0.5) does


def test_separation_probability_orthogonal():
    n = 2
    x = np.array([1.0, 0.0])
    y = np.array([0.0, 1.0])
    A = gen_gaussian_ensemble(100000, n, seed=19).rows
    frac = separation_count(A, x, y, 0.0) / 100000
    assert abs(frac - 0.25) <= 0.01


def test_separation_probability_antipodal():
    x = np.array([1.0, 0.0, 0.0])
    est = single_hyperplane_separation_prob(x, -x, 100000, seed=23, margin=0.0)
    assert abs(est - 0.5) <= 0.01


def test_separation_probability_monotone_in_margin():
    x = np.array([1.0, 0.0])
    y = np.array([0.0, 1.0])
    last = 1.0
    for margin in (0.0, 0.05, 0.1, 0.2, 0.4):
        est = single_hyperplane_separation_prob(x, y, 20000, seed=31,
                                                margin=margin)
        assert est <= last + 1e-12
        last = est
    assert single_hyperplane_separation_prob(x, y, 20000, seed=31, margin=0.1) \
        == single_hyperplane_separation_prob(x, y, 20000, seed=31, margin=0.1)


def test_separation_probability_at_distance_margin():
    # pairs at distance delta separate with probability >= delta/12 at
    # margin delta/12 (the default margin)
    for delta in (0.5, 1.0):
        c = 1.0 - delta ** 2 / 2.0
        y = np.array([c, np.sqrt(1.0 - c * c), 0.0])
        x = np.array([1.0, 0.0, 0.0])
        assert np.linalg.norm(x - y) == pytest.approx(delta)
        est = single_hyperplane_separation_prob(x, y, 100000, seed=41)
        sigma = np.sqrt(max(est * (1.0 - est), 1e-12) / 100000)
        assert est >= delta / 12.0 - 3.0 * sigma


def test_separation_exchangeability():
    # swapping the roles of x and y flips the halfspaces; over many seeds
    # the two counts agree in mean within 3 sigma
    x = np.array([1.0, 0.0, 0.0])
    y = np.array([-0.6, 0.8, 0.0])
    fwd = np.empty(200)
    rev = np.empty(200)
    for k in range(200):
        A = gen_gaussian_ensemble(1000, 3, seed=6000 + k).rows
        fwd[k] = separation_count(A, x, y, 0.1)
        rev[k] = separation_count(A, y, x, 0.1)
    diff = fwd - rev
    sigma = diff.std(ddof=1) / np.sqrt(len(diff))
    assert abs(diff.mean()) <= 3.0 * sigma + 1e-9


def test_sign_pattern_cells_refinement():
    spec = cap_spec(12, 2)
    X = tessellation_points(spec, 150, seed=3)
    A = tessellation_rows(spec, 40, seed=3)
    coarse = sign_pattern_cells(X, A[:10])
    fine = sign_pattern_cells(X, A[:40])
    # same fine cell implies same coarse cell (each cell splits or persists)
    for cid in range(fine.max() + 1):
        members = np.flatnonzero(fine == cid)
        assert np.unique(coarse[members]).size == 1
    assert fine.max() >= coarse.max()
    # ids are dense and first-seen ordered
    assert coarse[0] == 0
    assert set(np.unique(coarse)) == set(range(coarse.max() + 1))


def test_tessellate_report_m_zero():
    spec = cap_spec(8, 2)
    rep = tessellate_and_report(spec, 0, 0.5, 30, seed=14)
    assert rep.nonempty_cells == 1
    X = rep.sampled_points
    gram = X @ X.T
    d2 = np.add.outer(np.diag(gram), np.diag(gram)) - 2 * gram
    assert rep.max_cell_diameter_lb == pytest.approx(np.sqrt(d2.max()), abs=1e-12)


def test_tessellate_report_shrinks_with_m():
    spec = cap_spec(16, 2)
    reports = [tessellate_and_report(spec, m, 0.5, 120, seed=5)
               for m in (20, 40, 80)]
    lbs = [r.max_cell_diameter_lb for r in reports]
    assert lbs[0] >= lbs[1] >= lbs[2]
    cells = [r.nonempty_cells for r in reports]
    assert cells[0] <= cells[1] <= cells[2]
    for r in reports:
        assert r.max_cell_diameter_lb <= 2.0
        assert np.array_equal(r.sampled_points, reports[0].sampled_points)
        for st in r.separation_stats:
            assert st.distance > 0.5
            assert 0 <= st.count_fwd <= r.m
            assert 0 <= st.count_rev <= r.m


def test_tessellation_rows_nest():
    spec = cap_spec(16, 2)
    A80 = tessellation_rows(spec, 80, seed=5)
    A20 = tessellation_rows(spec, 20, seed=5)
    assert np.array_equal(A80[:20], A20)
