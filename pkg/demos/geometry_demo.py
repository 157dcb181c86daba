#!/usr/bin/env python3
"""The two geometric facts behind treating l1/l2 as sparsity.

Effectively sparse vectors (small ||x||_1 relative to ||x||_2) behave like
exactly sparse ones in two precise senses, both exercised here per-sample:

1. hard thresholding to the t largest entries loses at most sqrt(s/t) in
   l2, so sparse vectors form a net of the convex set K(n, s);
2. any member of K(n, s) splits into disjoint s-sparse blocks that sum
   back exactly, with total l2 mass at most 1 + ||x||_1/sqrt(s) <= 2.
"""

import numpy as np

from onebit import (
    SignalSetSpec,
    block_decompose,
    effective_sparsity,
    hard_threshold,
    sample_sphere_cap,
)

n, s, t = 64, 4, 16
spec = SignalSetSpec(n, s, "effectively_sparse")
X = sample_sphere_cap(spec, 500, seed=30)

es = [effective_sparsity(x) for x in X]
print(f"{len(X)} unit vectors of K(n={n}, s={s})")
print(f"effective sparsity (l1/l2)^2: min {min(es):.2f}, max {max(es):.2f} "
      f"(never above s={s})")

tails = [np.linalg.norm(x - hard_threshold(x, t)) for x in X]
bound = np.sqrt(s / t)
print(f"\nhard threshold to t={t} entries: worst tail {max(tails):.4f}, "
      f"bound sqrt(s/t) = {bound:.4f}")
print(f"bound violated by {sum(v > bound for v in tails)} of {len(X)} samples")

worst_sum = 0.0
exact = True
for x in X:
    blocks = block_decompose(x, s)
    worst_sum = max(worst_sum, sum(np.linalg.norm(b) for b in blocks))
    exact = exact and np.array_equal(sum(blocks), x)
print(f"\nblock decomposition into {s}-sparse pieces: reassembly exact for "
      f"all samples: {exact}")
print(f"largest sum of block norms {worst_sum:.4f} (bound 2)")

one = X[1]
blocks = block_decompose(one, s)
print(f"\nexample: a sample with {np.count_nonzero(one)} nonzeros splits into "
      f"{len(blocks)} blocks of sizes {[int(np.count_nonzero(b)) for b in blocks]}")
