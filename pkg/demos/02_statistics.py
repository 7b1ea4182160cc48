"""
The pairwise statistics on a small table
========================================

Everything discovery uses is a function of pattern counts. Here the
statistics are computed by hand on a toy dataset and then bootstrapped.
"""

import numpy as np

from bicausal import align, cond_prob
from bicausal import stats

# Two causes of one effect: Y = A or B or noise.
rng = np.random.default_rng(0)
a = rng.random(1000) < 0.3
b = rng.random(1000) < 0.3
y = a | b | (rng.random(1000) < 0.1)
ad = align(np.column_stack([a, b, y]).astype(np.uint8))

# Alignment collapses 1000 rows into at most 2**3 weighted patterns.
print(ad.patterns, ad.counts)

print("P(Y=1)         ", cond_prob(ad, {2: 1}))
print("P(Y=1 | A=1)   ", cond_prob(ad, {2: 1}, {0: 1}))  # exactly 1: A forces Y
print("P(A=1 | Y=1)   ", cond_prob(ad, {0: 1}, {2: 1}))

# Dependency is zero only when the joint law factorises.
print("dependency(A, Y)", stats.dependency(ad, 0, 2))
print("dependency(A, B)", stats.dependency(ad, 0, 1))

# Conditioning on the common effect makes the two causes dependent.
print("dependency(A, B | Y)", stats.cond_dependency(ad, 0, 1, 2))

# Positive association, and an asymmetry pointing from cause to effect.
print("odd_diff(A, Y) ", stats.odd_diff(ad, 0, 2))
print("causal_dir(A, Y)", stats.causal_dir(ad, 0, 2))

# Bootstrap: q resamples, every statistic evaluated on the same resampled counts.
bd = stats.bootstrap(ad, q=200, seed=3, stat=stats.causal_dir_stat(0, 2))
ci = stats.percentile_ci(bd, 0.95)
print(f"causal_dir bootstrap mean {bd.mean:.3f}, 95% CI [{ci.lower:.3f}, {ci.upper:.3f}]")
print("sign test:", stats.sign_test(bd).as_dict())
