"""Pattern alignment and support/confidence probability estimates.

Rows are bucketed by their integer encoding (first column is the most
significant bit). All probabilities are ratios of bucket-count sums, so a
dataset of any size is summarised by at most ``min(n, 2**d)`` buckets.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Mapping

import numpy as np

from .dataset import BinaryDataset

MAX_WIDTH = 63


class UndefinedConditional(ZeroDivisionError):
    """No row matches the conditioning assignment."""


def _check_width(d):
    if not 1 <= d <= MAX_WIDTH:
        raise ValueError(f"pattern width must be in [1, {MAX_WIDTH}], got {d}")


def encode(row) -> int:
    """Integer key of a binary row; the last element is the least-significant bit."""
    bits = [int(x) for x in row]
    _check_width(len(bits))
    w = 0
    for x in bits:
        if x not in (0, 1):
            raise ValueError(f"non-binary element {x!r}")
        w = (w << 1) | x
    return w


def decode(key: int, d: int) -> tuple:
    _check_width(d)
    if not 0 <= key < (1 << d):
        raise ValueError(f"key {key} out of range for width {d}")
    return tuple((key >> (d - 1 - k)) & 1 for k in range(d))


def _encode_rows(values):
    n, d = values.shape
    _check_width(d)
    weights = np.left_shift(np.uint64(1), np.arange(d - 1, -1, -1, dtype=np.uint64))
    return values.astype(np.uint64) @ weights


class AlignedDataset:
    """Sparse multiset of row patterns.

    Attributes
    ----------
    d : int
        Row width.
    keys : ndarray of uint64, shape (P,)
        Distinct pattern keys in increasing order.
    counts : ndarray of int64, shape (P,)
        Occurrences of each key; all positive.
    patterns : ndarray of uint8, shape (P, d)
        Decoded bit matrix of ``keys``.
    """

    def __init__(self, d, keys, counts):
        _check_width(d)
        keys = np.asarray(keys, dtype=np.uint64)
        counts = np.asarray(counts, dtype=np.int64)
        if keys.shape != counts.shape:
            raise ValueError("keys and counts differ in length")
        if np.any(counts <= 0):
            raise ValueError("bucket counts must be positive")
        order = np.argsort(keys, kind="stable")
        keys, counts = keys[order], counts[order]
        if len(keys) > 1 and np.any(keys[1:] == keys[:-1]):
            raise ValueError("duplicate pattern keys")
        self.d = int(d)
        self.keys = keys
        self.counts = counts
        shifts = np.arange(d - 1, -1, -1, dtype=np.uint64)
        self.patterns = ((keys[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8)
        for a in (self.keys, self.counts, self.patterns):
            a.setflags(write=False)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def buckets(self) -> dict:
        return {int(k): int(c) for k, c in zip(self.keys, self.counts)}

    def with_counts(self, counts) -> AlignedDataset:
        """Same patterns, new multiplicities (zero-count buckets are dropped)."""
        counts = np.asarray(counts, dtype=np.int64)
        keep = counts > 0
        return AlignedDataset(self.d, self.keys[keep], counts[keep])

    def to_rows(self) -> np.ndarray:
        return np.repeat(self.patterns, self.counts, axis=0)

    def __repr__(self):
        return f"AlignedDataset(d={self.d}, n={self.n}, patterns={len(self.keys)})"


def align(ds) -> AlignedDataset:
    """Bucket the rows of ``ds`` by pattern."""
    values = ds.values if isinstance(ds, BinaryDataset) else np.asarray(ds, dtype=np.uint8)
    keys, counts = np.unique(_encode_rows(values), return_counts=True)
    return AlignedDataset(values.shape[1], keys, counts)


def align_counter(rows) -> AlignedDataset:
    """Pure-Python alignment, mainly useful for small hand-written inputs."""
    rows = [tuple(r) for r in rows]
    tally = Counter(encode(r) for r in rows)
    return AlignedDataset(len(rows[0]), list(tally), list(tally.values()))


def _as_pairs(assignment):
    if assignment is None:
        return ()
    if isinstance(assignment, Mapping):
        items = assignment.items()
    else:
        items = assignment
    pairs = tuple((int(k), int(v)) for k, v in items)
    idx = [k for k, _ in pairs]
    if len(set(idx)) != len(idx):
        raise ValueError("assignment repeats a variable")
    if any(v not in (0, 1) for _, v in pairs):
        raise ValueError("assignment values must be 0 or 1")
    return pairs


def match_mask(patterns, assignment) -> np.ndarray:
    """Boolean mask over ``patterns`` rows agreeing with every (index, value) pair."""
    mask = np.ones(len(patterns), dtype=bool)
    for k, v in _as_pairs(assignment):
        mask &= patterns[:, k] == v
    return mask


def cond_prob(ad: AlignedDataset, y, z=None) -> float:
    """Confidence estimate of ``P(Y = y | Z = z)``.

    ``y`` and ``z`` are mappings (or iterables of pairs) from variable index to
    value. An empty ``z`` conditions on nothing, giving the support of ``y``.

    Raises
    ------
    UndefinedConditional
        If no row matches ``z``.
    """
    ypairs, zpairs = _as_pairs(y), _as_pairs(z)
    if not ypairs:
        raise ValueError("y must assign at least one variable")
    if {k for k, _ in ypairs} & {k for k, _ in zpairs}:
        raise ValueError("y and z must be index-disjoint")
    for k, _ in ypairs + zpairs:
        if not 0 <= k < ad.d:
            raise IndexError(f"variable index {k} out of range for d={ad.d}")
    zmask = match_mask(ad.patterns, zpairs)
    denom = int(ad.counts[zmask].sum())
    if denom == 0:
        raise UndefinedConditional(f"no rows match {dict(zpairs)}")
    num = int(ad.counts[zmask & match_mask(ad.patterns, ypairs)].sum())
    return num / denom
