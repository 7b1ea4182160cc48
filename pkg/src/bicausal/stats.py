"""Dependency, association and direction statistics with bootstrap inference.

Every statistic is a function of a 2x2 (or 2x2x2) contingency table of
pattern counts, evaluated with integer numerators and one division per
ratio. The same code evaluates the plug-in estimate (weights = bucket
counts) and a whole batch of bootstrap replicates (weights = resampled
multiplicities of shape ``(q, P)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.stats

from .alignment import AlignedDataset, UndefinedConditional, align
from .dataset import BinaryDataset

# int64 numerators of the form |n*t - r*c| * t stay exact while n**3 < 2**63.
_INT_EXACT_LIMIT = 2_000_000
SKIP_LIMIT = 0.2


class DivisionByZero(ZeroDivisionError):
    """An odds ratio whose off-diagonal cell product is zero."""


class TooFewReplicates(ValueError):
    pass


def _as_aligned(data) -> AlignedDataset:
    if isinstance(data, AlignedDataset):
        return data
    if isinstance(data, BinaryDataset):
        return align(data)
    raise TypeError(f"expected AlignedDataset or BinaryDataset, got {type(data).__name__}")


def _numeric(weights):
    w = np.asarray(weights)
    n_max = w.sum(axis=-1).max() if w.size else 0
    return w.astype(np.float64) if n_max > _INT_EXACT_LIMIT else w.astype(np.int64)


def pair_table(patterns, weights, i, j):
    """Counts ``t[..., a, b]`` of rows with ``x_i = a`` and ``x_j = b``."""
    cell = 2 * patterns[:, i].astype(np.intp) + patterns[:, j]
    onehot = np.zeros((len(patterns), 4), dtype=np.int64)
    onehot[np.arange(len(patterns)), cell] = 1
    w = _numeric(weights)
    return (w @ onehot.astype(w.dtype)).reshape(w.shape[:-1] + (2, 2))


def triple_table(patterns, weights, i, j, z):
    """Counts ``t[..., c, a, b]`` of rows with ``x_z = c``, ``x_i = a``, ``x_j = b``."""
    cell = 4 * patterns[:, z].astype(np.intp) + 2 * patterns[:, i] + patterns[:, j]
    onehot = np.zeros((len(patterns), 8), dtype=np.int64)
    onehot[np.arange(len(patterns)), cell] = 1
    w = _numeric(weights)
    return (w @ onehot.astype(w.dtype)).reshape(w.shape[:-1] + (2, 2, 2))


# -- statistics on tables (vectorised over leading axes; NaN = undefined) --

def _dependency_parts(t):
    """Integer numerator and ``n`` with ``dependency = num / n**3``."""
    n = t.sum(axis=(-2, -1))
    rows = t.sum(axis=-1)
    cols = t.sum(axis=-2)
    gap = np.abs(n[..., None, None] * t - rows[..., :, None] * cols[..., None, :])
    return (gap * t).sum(axis=(-2, -1)), n


def _dependency_from_table(t):
    num, n = _dependency_parts(t)
    with np.errstate(invalid="ignore", divide="ignore"):
        return num / n**3


# (n0 * n1) ** 3 must fit in int64 for the common-denominator form
_COND_EXACT_LIMIT = 2000


def _cond_dependency_from_table(t3):
    num0, n0 = _dependency_parts(t3[..., 0, :, :])
    num1, n1 = _dependency_parts(t3[..., 1, :, :])
    c0, c1 = n0**3, n1**3
    with np.errstate(invalid="ignore", divide="ignore"):
        part0 = np.where(n0 > 0, num0 / c0, 0.0)
        part1 = np.where(n1 > 0, num1 / c1, 0.0)
        out = part0 + part1
        if t3.dtype.kind == "i" and (n0 + n1).max(initial=0) <= _COND_EXACT_LIMIT:
            # one rounding: sum the two strata over their common denominator
            both = (n0 > 0) & (n1 > 0)
            exact = (num0 * c1 + num1 * c0) / np.where(both, c0 * c1, 1)
            out = np.where(both, exact, out)
    return out


def _odd_diff_from_table(t):
    n = t.sum(axis=(-2, -1))
    return (t[..., 1, 1] * t[..., 0, 0] - t[..., 0, 1] * t[..., 1, 0]) / n**2


def _odd_ratio_from_table(t):
    den = t[..., 0, 1] * t[..., 1, 0]
    with np.errstate(invalid="ignore", divide="ignore"):
        out = (t[..., 1, 1] * t[..., 0, 0]) / den
    return np.where(den == 0, np.nan, out)


def _causal_dir_from_table(t, a, b):
    row = t[..., a, :].sum(axis=-1)
    col = t[..., :, b].sum(axis=-1)
    joint = t[..., a, b]
    with np.errstate(invalid="ignore", divide="ignore"):
        out = (joint * col - joint * row) / (row * col)
    return np.where((row == 0) | (col == 0), np.nan, out)


def _cond_prob_from_table(t, a, b):
    row = t[..., a, :].sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = t[..., a, b] / row
    return np.where(row == 0, np.nan, out)


@dataclass(frozen=True)
class Statistic:
    """Descriptor of a pairwise statistic, evaluable on any count weights.

    Use the factory helpers (:func:`dependency_stat` etc.) rather than the
    constructor. ``values`` is the ``(x_i, x_j)`` value pair used by
    ``causal_dir`` and ``cond_prob``.
    """

    kind: str
    i: int
    j: int
    z: int | None = None
    values: tuple = (1, 1)

    @property
    def name(self) -> str:
        if self.kind == "cond_dependency":
            return f"cond_dependency({self.i},{self.j}|{self.z})"
        if self.kind in ("causal_dir", "cond_prob"):
            a, b = self.values
            return f"{self.kind}({self.i}={a},{self.j}={b})"
        return f"{self.kind}({self.i},{self.j})"

    def evaluate(self, patterns, weights) -> np.ndarray:
        if self.kind == "cond_dependency":
            return _cond_dependency_from_table(triple_table(patterns, weights, self.i, self.j, self.z))
        t = pair_table(patterns, weights, self.i, self.j)
        if self.kind == "dependency":
            return _dependency_from_table(t)
        if self.kind == "odd_diff":
            return _odd_diff_from_table(t)
        if self.kind == "odd_ratio":
            return _odd_ratio_from_table(t)
        a, b = self.values
        if self.kind == "causal_dir":
            return _causal_dir_from_table(t, a, b)
        if self.kind == "cond_prob":
            return _cond_prob_from_table(t, a, b)
        raise ValueError(f"unknown statistic kind {self.kind!r}")

    def __call__(self, data) -> float:
        ad = _as_aligned(data)
        return float(self.evaluate(ad.patterns, ad.counts))


def _pair_check(ad, *idx):
    if len(set(idx)) != len(idx):
        raise ValueError(f"variable indices must be distinct, got {idx}")
    for k in idx:
        if not 0 <= k < ad.d:
            raise IndexError(f"variable index {k} out of range for d={ad.d}")


def dependency_stat(i, j):
    return Statistic("dependency", i, j)


def cond_dependency_stat(i, j, z):
    return Statistic("cond_dependency", i, j, z)


def odd_diff_stat(i, j):
    return Statistic("odd_diff", i, j)


def odd_ratio_stat(i, j):
    return Statistic("odd_ratio", i, j)


def causal_dir_stat(i, j, xi_val=1, xj_val=1):
    return Statistic("causal_dir", i, j, values=(int(xi_val), int(xj_val)))


def cond_prob_stat(i, j, xi_val=1, xj_val=1):
    """``P(X_j = xj_val | X_i = xi_val)``."""
    return Statistic("cond_prob", i, j, values=(int(xi_val), int(xj_val)))


def dependency(ad, i, j) -> float:
    """Degree of dependency: sum over cells of ``|P(a,b) - P(a)P(b)| * P(a,b)``."""
    ad = _as_aligned(ad)
    _pair_check(ad, i, j)
    return dependency_stat(i, j)(ad)


def cond_dependency(ad, i, j, zvar) -> float:
    """Conditional dependency summed over the supported values of ``zvar``.

    Each stratum contributes ``sum |P(a,b|z) - P(a|z)P(b|z)| * P(a,b|z)``;
    strata are not weighted by ``P(z)``.
    """
    ad = _as_aligned(ad)
    _pair_check(ad, i, j, zvar)
    return cond_dependency_stat(i, j, zvar)(ad)


def odd_ratio(ad, i, j) -> float:
    ad = _as_aligned(ad)
    _pair_check(ad, i, j)
    t = pair_table(ad.patterns, ad.counts, i, j)
    if t[0, 1] * t[1, 0] == 0:
        raise DivisionByZero(f"odds ratio of ({i},{j}) has an empty off-diagonal cell")
    return float(_odd_ratio_from_table(t))


def odd_diff(ad, i, j) -> float:
    """Signed ``P(1,1)P(0,0) - P(0,1)P(1,0)``; positive means positive association."""
    ad = _as_aligned(ad)
    _pair_check(ad, i, j)
    return odd_diff_stat(i, j)(ad)


def causal_dir(ad, i, j, xi_val=1, xj_val=1) -> float:
    """``P(X_j=xj_val | X_i=xi_val) - P(X_i=xi_val | X_j=xj_val)``.

    Positive values point from ``i`` to ``j``.
    """
    ad = _as_aligned(ad)
    _pair_check(ad, i, j)
    value = causal_dir_stat(i, j, xi_val, xj_val)(ad)
    if math.isnan(value):
        raise UndefinedConditional(f"X{i}={xi_val} or X{j}={xj_val} has no support")
    return value


# -- bootstrap ---------------------------------------------------------------

def replicate_rng(seed, *key) -> np.random.Generator:
    """Independent stream for one work item, derived from the master seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key)))


def resample_counts(ad: AlignedDataset, q: int, seed: int) -> np.ndarray:
    """``(q, P)`` bucket multiplicities of q row-resamples drawn with replacement.

    Replicate ``k`` uses its own stream keyed by ``(seed, k)``, so any subset
    of replicates can be regenerated independently.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    probs = ad.counts / ad.n
    out = np.empty((q, len(ad.counts)), dtype=np.int64)
    for k in range(q):
        out[k] = replicate_rng(seed, k).multinomial(ad.n, probs)
    return out


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float

    def contains(self, x) -> bool:
        return self.lower <= x <= self.upper

    def as_list(self):
        return [self.lower, self.upper]


@dataclass(frozen=True)
class BootstrapDistribution:
    """Replicate values of one statistic.

    ``values`` holds only replicates where the statistic was defined;
    ``skipped`` counts the others.
    """

    statistic_name: str
    values: np.ndarray
    q: int
    seed: int
    skipped: int = 0

    @property
    def effective(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> float:
        return float(np.mean(self.values)) if len(self.values) else math.nan

    @property
    def reliable(self) -> bool:
        return self.skipped <= SKIP_LIMIT * self.q


def distribution_from(stat: Statistic, patterns, weights, seed) -> BootstrapDistribution:
    raw = np.atleast_1d(stat.evaluate(patterns, weights)).astype(np.float64)
    ok = np.isfinite(raw)
    return BootstrapDistribution(stat.name, raw[ok], len(raw), seed, int((~ok).sum()))


def bootstrap(data, q: int, seed: int, stat: Statistic, counts=None) -> BootstrapDistribution:
    """Evaluate ``stat`` on ``q`` with-replacement resamples of ``data``.

    ``counts`` may carry precomputed :func:`resample_counts` output so several
    statistics share one set of resamples.
    """
    ad = _as_aligned(data)
    if counts is None:
        counts = resample_counts(ad, q, seed)
    elif counts.shape != (q, len(ad.counts)):
        raise ValueError("counts do not match q and the aligned dataset")
    return distribution_from(stat, ad.patterns, counts, seed)


def _values(bd):
    return bd.values if isinstance(bd, BootstrapDistribution) else np.asarray(bd, dtype=float)


def percentile_ci(bd, level: float = 0.95) -> ConfidenceInterval:
    """Percentile interval with linear interpolation between order statistics."""
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    values = _values(bd)
    if len(values) < 2:
        raise TooFewReplicates(f"need at least 2 replicates, have {len(values)}")
    alpha = 1.0 - level
    lo, hi = np.quantile(values, [alpha / 2, 1 - alpha / 2], method="linear")
    return ConfidenceInterval(float(lo), float(hi), level)


@dataclass(frozen=True)
class HypothesisResult:
    p_value: float
    reject_null: bool
    alpha: float
    ci: ConfidenceInterval
    mean: float
    method: str = "mann-whitney"

    def as_dict(self):
        return {"mean": self.mean, "ci": self.ci.as_list(), "p": self.p_value, "reject": self.reject_null}


MW_MIN_REPLICATES = 8


def mann_whitney_u(x, y, alternative="two-sided"):
    """Rank-sum U of ``x`` against ``y``: normal approximation with tie and continuity corrections.

    Returns ``(U_x, p)``; a pooled sample with no spread gives ``p = 1``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    pooled = np.concatenate([x, y])
    if np.all(pooled == pooled[0]):
        return len(x) * len(y) / 2, 1.0
    res = scipy.stats.mannwhitneyu(x, y, alternative=alternative, use_continuity=True,
                                   method="asymptotic")
    return float(res.statistic), float(res.pvalue)


def mw_test(bd, alpha: float = 0.05, alternative="two-sided") -> HypothesisResult:
    """Mann-Whitney test of the replicates against an equal-length zero sample.

    Use ``alternative="greater"`` for non-negative statistics whose
    alternative is ``mu > 0``.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    values = _values(bd)
    if len(values) < MW_MIN_REPLICATES:
        raise TooFewReplicates(f"Mann-Whitney needs >= {MW_MIN_REPLICATES} replicates, have {len(values)}")
    _, p = mann_whitney_u(values, np.zeros(len(values)), alternative)
    return HypothesisResult(p, p < alpha, alpha, percentile_ci(values, 1 - alpha),
                            float(values.mean()), "mann-whitney")


def sign_test(bd, alpha: float = 0.05) -> HypothesisResult:
    """Two-sided bootstrap test of ``mu = 0`` for a signed statistic.

    ``p = 2 (1 + k) / (q + 1)`` where ``k`` is the number of replicates on
    the minority side of zero, exact zeros counting half to each side.
    """
    values = _values(bd)
    if len(values) < 2:
        raise TooFewReplicates(f"need at least 2 replicates, have {len(values)}")
    zeros = int((values == 0).sum())
    k = min(int((values < 0).sum()), int((values > 0).sum())) + zeros / 2
    p = min(1.0, 2 * (1 + k) / (len(values) + 1))
    return HypothesisResult(p, p < alpha, alpha, percentile_ci(values, 1 - alpha),
                            float(values.mean()), "bootstrap-sign")


def null_rank_test(observed: float, null_values, bd, alpha: float = 0.05) -> HypothesisResult:
    """One-sided rank test of an observed statistic against null replicates.

    ``p = (1 + #{null >= observed}) / (m + 1)``, i.e. the exact Mann-Whitney
    p-value of a single observation against ``m`` null draws. ``bd`` supplies
    the reported mean and interval.
    """
    null_values = np.asarray(null_values, dtype=float)
    tol = 1e-12 * max(1.0, abs(observed))
    exceed = int((null_values >= observed - tol).sum())
    p = (1 + exceed) / (len(null_values) + 1)
    values = _values(bd)
    return HypothesisResult(p, p < alpha, alpha, percentile_ci(values, 1 - alpha),
                            float(values.mean()), "null-rank")


def _hypergeometric_tables(rng, n, row1, col1, size):
    """2x2 tables with fixed margins, as produced by permuting one column."""
    if n == 0:
        return np.zeros((size, 2, 2), dtype=np.int64)
    n11 = rng.hypergeometric(col1, n - col1, row1, size=size).astype(np.int64)
    t = np.empty((size, 2, 2), dtype=np.int64)
    t[:, 1, 1] = n11
    t[:, 1, 0] = row1 - n11
    t[:, 0, 1] = col1 - n11
    t[:, 0, 0] = n - row1 - col1 + n11
    return t


def dependency_null(data, i, j, m, rng) -> np.ndarray:
    """``m`` dependency values with column ``j`` permuted against column ``i``."""
    ad = _as_aligned(data)
    t = pair_table(ad.patterns, ad.counts, i, j)
    tables = _hypergeometric_tables(rng, int(t.sum()), int(t[1].sum()), int(t[:, 1].sum()), m)
    return _dependency_from_table(tables)


def cond_dependency_null(data, i, j, z, m, rng) -> np.ndarray:
    """``m`` conditional-dependency values with ``j`` permuted within each stratum of ``z``."""
    ad = _as_aligned(data)
    t3 = triple_table(ad.patterns, ad.counts, i, j, z)
    tables = np.stack([
        _hypergeometric_tables(rng, int(t3[c].sum()), int(t3[c, 1].sum()), int(t3[c, :, 1].sum()), m)
        for c in (0, 1)
    ], axis=1)
    return _cond_dependency_from_table(tables)
